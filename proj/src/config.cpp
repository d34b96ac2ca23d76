#include "fracflow/config.hpp"

#include <set>

#include "fracflow/errors.hpp"

namespace fracflow {

namespace {

std::string join(const std::string& path, const std::string& key) { return path.empty() ? key : path + "." + key; }

class ObjectReader {
public:
    ObjectReader(const json& j, std::string path) : j_(j), path_(std::move(path)) {
        require(j.is_object(), ErrorKind::schema, "'" + (path_.empty() ? "<root>" : path_) + "' must be an object");
    }

    template <class T>
    void get(const std::string& key, T& out) {
        seen_.insert(key);
        if (!j_.contains(key)) return;
        out = convert<T>(j_.at(key), join(path_, key));
    }

    template <class Fn>
    void child(const std::string& key, Fn&& fn) {
        seen_.insert(key);
        if (!j_.contains(key)) return;
        ObjectReader r(j_.at(key), join(path_, key));
        fn(r);
        r.finish();
    }

    void finish() const {
        for (const auto& [key, value] : j_.items())
            if (!seen_.count(key)) raise(ErrorKind::schema, "unknown key '" + join(path_, key) + "'");
    }

    template <class T>
    static T convert(const json& v, const std::string& path) {
        auto bad = [&](const char* what) { raise(ErrorKind::schema, "'" + path + "' must be " + what); };
        if constexpr (std::is_same_v<T, bool>) {
            if (!v.is_boolean()) bad("a boolean");
            return v.get<bool>();
        } else if constexpr (std::is_same_v<T, std::string>) {
            if (!v.is_string()) bad("a string");
            return v.get<std::string>();
        } else if constexpr (std::is_same_v<T, std::uint64_t>) {
            if (!v.is_number_unsigned()) bad("a non-negative integer");
            return v.get<std::uint64_t>();
        } else if constexpr (std::is_integral_v<T>) {
            if (!v.is_number_integer()) bad("an integer");
            return v.get<T>();
        } else if constexpr (std::is_floating_point_v<T>) {
            if (!v.is_number()) bad("a number");
            return v.get<T>();
        } else {
            if (!v.is_array()) bad("an array");
            T out;
            for (std::size_t i = 0; i < v.size(); ++i)
                out.push_back(convert<typename T::value_type>(v[i], path + "[" + std::to_string(i) + "]"));
            return out;
        }
    }

private:
    const json& j_;
    std::string path_;
    std::set<std::string> seen_;
};

json data_to_json(const DataSpec& d) {
    return {{"kind", to_string(d.kind)}, {"amplitude", d.amplitude}, {"degree", d.degree},
            {"harmonic", d.harmonic},    {"width", d.width},         {"center_x", d.center_x},
            {"center_y", d.center_y},    {"epsilon_m", d.epsilon_m}, {"mass_matched", d.mass_matched},
            {"envelope", d.envelope},    {"path", d.path}};
}

void read_data(ObjectReader& r, DataSpec& d) {
    std::string kind = to_string(d.kind);
    r.get("kind", kind);
    d.kind = data_kind_from_string(kind);
    r.get("amplitude", d.amplitude);
    r.get("degree", d.degree);
    r.get("harmonic", d.harmonic);
    r.get("width", d.width);
    r.get("center_x", d.center_x);
    r.get("center_y", d.center_y);
    r.get("epsilon_m", d.epsilon_m);
    r.get("mass_matched", d.mass_matched);
    r.get("envelope", d.envelope);
    r.get("path", d.path);
}

}  // namespace

BallFamily NormsConfig::family(const Grid& grid) const {
    const int stride = center_stride > 0 ? center_stride : std::max(1, grid.points / 64);
    if (radii == "dyadic") return BallFamily::dyadic(grid, stride);
    require(radii == "all", ErrorKind::schema, "norms.radii must be 'all' or 'dyadic'");
    BallFamily fam;
    fam.center_stride = stride;
    for (int k = 1; k <= grid.points / 2; ++k) fam.radii_cells.push_back(k);
    return fam;
}

json experiment_to_json(const Experiment& e) {
    json j;
    j["grid"] = {{"dim", e.grid.dim}, {"points", e.grid.points}, {"length", e.grid.length}};
    j["problem"] = {{"alpha", e.problem.alpha}, {"rho", e.problem.rho}, {"q", e.problem.q},
                    {"kappa1", e.problem.kappa1}, {"kappa2", e.problem.kappa2}};
    j["phi"] = data_to_json(e.phi);
    j["psi"] = data_to_json(e.psi);
    j["timegrid"] = {{"t_start", e.timegrid.t_start}, {"t_end", e.timegrid.t_end},
                     {"n_steps", e.timegrid.n_steps}, {"grading", e.timegrid.grading}};
    j["picard"] = {{"max_sweeps", e.picard.max_sweeps}, {"sweep_tol", e.picard.sweep_tol},
                   {"epsilon_data", e.picard.epsilon_data}, {"save_every", e.picard.save_every},
                   {"overflow_threshold", e.picard.overflow_threshold}};
    return j;
}

json config_to_json(const RunConfig& c) {
    json j = experiment_to_json(c.experiment);
    j["norms"] = {{"p", c.norms.p}, {"mu", c.norms.mu}, {"s", c.norms.s},
                  {"center_stride", c.norms.center_stride}, {"radii", c.norms.radii}};
    const VerifyConfig& v = c.verify;
    json vj;
    vj["decomposition"] = {{"alphas", v.decomposition.alphas}, {"betas", v.decomposition.betas},
                           {"z_lo", v.decomposition.z_lo}, {"z_hi", v.decomposition.z_hi},
                           {"z_points", v.decomposition.z_points}};
    const MikhlinSpec& m = v.mikhlin;
    vj["mikhlin"] = {{"alpha", m.alpha}, {"beta_ml", m.beta_ml}, {"k", m.k}, {"delta", m.delta},
                     {"max_order", m.max_order}, {"amplitude", m.amplitude}, {"xi_lo", m.xi_lo},
                     {"xi_hi", m.xi_hi}, {"xi_points", m.xi_points}, {"slope_tolerance", m.slope_tolerance},
                     {"allow_inadmissible", m.allow_inadmissible}};
    const SmoothingSpec& s = v.smoothing.spec;
    vj["smoothing"] = {{"alpha", s.alpha}, {"gamma1", s.gamma1}, {"gamma2", s.gamma2}, {"p1", s.p1},
                       {"p2", s.p2}, {"mu", s.mu}, {"N", s.N}, {"item", s.item}, {"bound", s.bound},
                       {"t_lo", v.smoothing.t_lo}, {"t_hi", v.smoothing.t_hi}, {"t_points", v.smoothing.t_points}};
    const SelfSimilaritySpec& ss = v.selfsimilarity;
    vj["selfsimilarity"] = {{"gammas", ss.gammas}, {"horizon", ss.horizon}, {"probe_times", ss.probe_times},
                            {"inner_cells", ss.inner_cells}, {"outer_fraction", ss.outer_fraction},
                            {"tolerance", ss.tolerance}};
    const DecaySpec& d = v.decay;
    vj["decay"] = {{"p", d.p}, {"r", d.r}, {"t_lo", d.t_lo}, {"t_hi", d.t_hi}, {"min_points", d.min_points},
                   {"min_span", d.min_span}, {"relative_tolerance", d.relative_tolerance},
                   {"center_stride", d.center_stride}};
    json group = json::array();
    for (GridMap g : v.symmetry.group) group.push_back(to_string(g));
    vj["symmetry"] = {{"group", group}, {"antisymmetry", v.symmetry.antisymmetry},
                      {"tolerance", v.symmetry.tolerance}};
    const StabilitySpec& st = v.stability;
    vj["stability"] = {{"scales", st.scales}, {"perturb_phi", st.perturb_phi}, {"perturb_psi", st.perturb_psi},
                       {"modes", st.modes}, {"seed", st.seed}, {"p", st.p}, {"r", st.r}, {"bound", st.bound}};
    const ProfileSpec& pr = v.profile;
    vj["profile"] = {{"times", pr.times}, {"eta_points", pr.eta_points}, {"inner_cells", pr.inner_cells},
                     {"outer_fraction", pr.outer_fraction}, {"tolerance", pr.tolerance}};
    j["verify"] = vj;
    j["seed"] = c.seed;
    j["tolerance_scale"] = c.tolerance_scale;
    j["svg"] = c.svg;
    return j;
}

RunConfig config_from_json(const json& j) {
    RunConfig c;
    Experiment& e = c.experiment;
    ObjectReader root(j, "");
    root.child("grid", [&](ObjectReader& r) {
        r.get("dim", e.grid.dim);
        r.get("points", e.grid.points);
        r.get("length", e.grid.length);
    });
    root.child("problem", [&](ObjectReader& r) {
        r.get("alpha", e.problem.alpha);
        r.get("rho", e.problem.rho);
        r.get("q", e.problem.q);
        r.get("kappa1", e.problem.kappa1);
        r.get("kappa2", e.problem.kappa2);
    });
    root.child("phi", [&](ObjectReader& r) { read_data(r, e.phi); });
    root.child("psi", [&](ObjectReader& r) { read_data(r, e.psi); });
    root.child("timegrid", [&](ObjectReader& r) {
        r.get("t_start", e.timegrid.t_start);
        r.get("t_end", e.timegrid.t_end);
        r.get("n_steps", e.timegrid.n_steps);
        r.get("grading", e.timegrid.grading);
    });
    root.child("picard", [&](ObjectReader& r) {
        r.get("max_sweeps", e.picard.max_sweeps);
        r.get("sweep_tol", e.picard.sweep_tol);
        r.get("epsilon_data", e.picard.epsilon_data);
        r.get("save_every", e.picard.save_every);
        r.get("overflow_threshold", e.picard.overflow_threshold);
    });
    root.child("norms", [&](ObjectReader& r) {
        r.get("p", c.norms.p);
        r.get("mu", c.norms.mu);
        r.get("s", c.norms.s);
        r.get("center_stride", c.norms.center_stride);
        r.get("radii", c.norms.radii);
    });
    VerifyConfig& v = c.verify;
    root.child("verify", [&](ObjectReader& vr) {
        vr.child("decomposition", [&](ObjectReader& r) {
            r.get("alphas", v.decomposition.alphas);
            r.get("betas", v.decomposition.betas);
            r.get("z_lo", v.decomposition.z_lo);
            r.get("z_hi", v.decomposition.z_hi);
            r.get("z_points", v.decomposition.z_points);
        });
        vr.child("mikhlin", [&](ObjectReader& r) {
            MikhlinSpec& m = v.mikhlin;
            r.get("alpha", m.alpha);
            r.get("beta_ml", m.beta_ml);
            r.get("k", m.k);
            r.get("delta", m.delta);
            r.get("max_order", m.max_order);
            r.get("amplitude", m.amplitude);
            r.get("xi_lo", m.xi_lo);
            r.get("xi_hi", m.xi_hi);
            r.get("xi_points", m.xi_points);
            r.get("slope_tolerance", m.slope_tolerance);
            r.get("allow_inadmissible", m.allow_inadmissible);
        });
        vr.child("smoothing", [&](ObjectReader& r) {
            SmoothingSpec& s = v.smoothing.spec;
            r.get("alpha", s.alpha);
            r.get("gamma1", s.gamma1);
            r.get("gamma2", s.gamma2);
            r.get("p1", s.p1);
            r.get("p2", s.p2);
            r.get("mu", s.mu);
            r.get("N", s.N);
            r.get("item", s.item);
            r.get("bound", s.bound);
            r.get("t_lo", v.smoothing.t_lo);
            r.get("t_hi", v.smoothing.t_hi);
            r.get("t_points", v.smoothing.t_points);
        });
        vr.child("selfsimilarity", [&](ObjectReader& r) {
            SelfSimilaritySpec& s = v.selfsimilarity;
            r.get("gammas", s.gammas);
            r.get("horizon", s.horizon);
            r.get("probe_times", s.probe_times);
            r.get("inner_cells", s.inner_cells);
            r.get("outer_fraction", s.outer_fraction);
            r.get("tolerance", s.tolerance);
        });
        vr.child("decay", [&](ObjectReader& r) {
            DecaySpec& d = v.decay;
            r.get("p", d.p);
            r.get("r", d.r);
            r.get("t_lo", d.t_lo);
            r.get("t_hi", d.t_hi);
            r.get("min_points", d.min_points);
            r.get("min_span", d.min_span);
            r.get("relative_tolerance", d.relative_tolerance);
            r.get("center_stride", d.center_stride);
        });
        vr.child("symmetry", [&](ObjectReader& r) {
            std::vector<std::string> names;
            for (GridMap g : v.symmetry.group) names.push_back(to_string(g));
            r.get("group", names);
            v.symmetry.group.clear();
            for (const auto& n : names) v.symmetry.group.push_back(grid_map_from_string(n));
            r.get("antisymmetry", v.symmetry.antisymmetry);
            r.get("tolerance", v.symmetry.tolerance);
        });
        vr.child("stability", [&](ObjectReader& r) {
            StabilitySpec& s = v.stability;
            r.get("scales", s.scales);
            r.get("perturb_phi", s.perturb_phi);
            r.get("perturb_psi", s.perturb_psi);
            r.get("modes", s.modes);
            r.get("seed", s.seed);
            r.get("p", s.p);
            r.get("r", s.r);
            r.get("bound", s.bound);
        });
        vr.child("profile", [&](ObjectReader& r) {
            ProfileSpec& p = v.profile;
            r.get("times", p.times);
            r.get("eta_points", p.eta_points);
            r.get("inner_cells", p.inner_cells);
            r.get("outer_fraction", p.outer_fraction);
            r.get("tolerance", p.tolerance);
        });
    });
    root.get("seed", c.seed);
    root.get("tolerance_scale", c.tolerance_scale);
    root.get("svg", c.svg);
    root.finish();

    e.grid.validate();
    e.problem.validate();
    e.timegrid.validate();
    e.picard.validate();
    require(c.tolerance_scale > 0, ErrorKind::schema, "'tolerance_scale' must be positive");
    return c;
}

RunConfig parse_config(const std::filesystem::path& path) {
    require(std::filesystem::exists(path), ErrorKind::io, "config file not found: " + path.string());
    json j;
    try {
        j = json::parse(read_text(path));
    } catch (const json::parse_error& ex) {
        raise(ErrorKind::schema, path.string() + ": invalid JSON: " + ex.what());
    }
    return config_from_json(j);
}

}  // namespace fracflow
