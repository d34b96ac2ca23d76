#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <map>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "fracflow/config.hpp"
#include "fracflow/errors.hpp"
#include "fracflow/fhf.hpp"
#include "fracflow/mlf.hpp"
#include "fracflow/report.hpp"
#include "fracflow/verify.hpp"

namespace fs = std::filesystem;
using namespace fracflow;

namespace {

struct Globals {
    std::string config;
    std::string out = "fracflow_out";
    std::optional<std::uint64_t> seed;
    int threads = 1;
    std::optional<double> tolerance_scale;
    bool svg = false;
};

RunConfig load(const Globals& g) {
    RunConfig c = g.config.empty() ? RunConfig{} : parse_config(g.config);
    if (g.seed) c.seed = c.verify.stability.seed = *g.seed;
    if (g.tolerance_scale) {
        require(*g.tolerance_scale > 0, ErrorKind::schema, "--tolerance-scale must be positive");
        c.tolerance_scale = *g.tolerance_scale;
    }
    c.svg = c.svg || g.svg;
    return c;
}

// Effective config and version stamp next to every output.
void stamp(const fs::path& dir, const RunConfig& c, const Globals& g) {
    std::error_code ec;
    fs::create_directories(dir, ec);
    require(!ec, ErrorKind::io, "cannot create " + dir.string());
    json echo = config_to_json(c);
    echo["threads"] = g.threads;
    write_text(dir / "config.json", echo.dump(2) + "\n");
    write_text(dir / "VERSION", std::string("fracflow ") + FRACFLOW_VERSION + "\n");
}

void print_report(const Report& r) {
    std::cout << r.name << ": " << (!r.applicable ? "N/A" : r.pass ? "PASS" : "FAIL");
    for (const auto& m : r.metrics) std::cout << "  " << m.name << "=" << format_number(m.value);
    std::cout << "\n";
    for (const auto& n : r.notes) std::cout << "  note: " << n << "\n";
}

int finish(Report& r, const RunConfig& c, const Globals& g) {
    stamp(g.out, c, g);
    write_report(r, g.out, c.svg);
    print_report(r);
    return !r.applicable || r.pass ? 0 : 1;
}

Field smoothing_input(const RunConfig& c) {
    const SmoothingSpec& s = c.verify.smoothing.spec;
    // Scale-critical homogeneous profile for the input space M^{gamma1}_{p1,mu}.
    DataSpec d{DataKind::homogeneous_radial, 1.0, (s.N - s.mu) / s.p1 + s.gamma1};
    Field f = make_field(d, c.experiment.grid);
    return s.item == 2 ? riesz(2.0 / s.alpha, f) : f;
}

Report run_check(const std::string& name, const RunConfig& c) {
    const double ts = c.tolerance_scale;
    const VerifyConfig& v = c.verify;
    const Experiment& e = c.experiment;
    if (name == "check_decomposition")
        return check_decomposition(v.decomposition.alphas, v.decomposition.betas,
                                   log_grid(v.decomposition.z_lo, v.decomposition.z_hi, v.decomposition.z_points), ts);
    if (name == "check_relaxation_mass") return check_relaxation_mass({1.1, 1.25, 1.5, 1.75, 1.9}, ts);
    if (name == "check_time_identities") return check_time_identities(1.5, {0.0, 1.0, 4.0}, 1.0, 1e-4, ts);
    if (name == "check_boundary_forms") return check_boundary_forms(100.0, 401, ts);
    if (name == "check_mikhlin") return check_mikhlin(v.mikhlin, ts);
    if (name == "check_smoothing")
        return check_smoothing(v.smoothing.spec, smoothing_input(c),
                               log_grid(v.smoothing.t_lo, v.smoothing.t_hi, v.smoothing.t_points),
                               c.norms.family(e.grid), ts);
    if (name == "check_selfsimilarity") return check_selfsimilarity(e, v.selfsimilarity, ts);
    if (name == "check_decay") return check_decay(e, v.decay, ts);
    if (name == "check_symmetry") return check_symmetry(e, v.symmetry, ts);
    if (name == "check_stability") return check_stability(e, v.stability, ts);
    if (name == "extract_profile")
        return extract_profile(e.run(), e.problem.alpha, e.problem.rho, v.profile, ts);
    raise(ErrorKind::schema, "unknown check '" + name + "'");
}

int cmd_solve(const Globals& g) {
    const RunConfig c = load(g);
    const auto t0 = std::chrono::steady_clock::now();
    const Trajectory tr = c.experiment.run();
    const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    const fs::path out = g.out;
    stamp(out, c, g);
    fs::create_directories(out / "fields");
    json saved = json::array();
    for (std::size_t k = 0; k < tr.fields.size(); ++k) {
        char name[32];
        std::snprintf(name, sizeof name, "u_%06d.fhf", tr.saved_nodes[k]);
        write_fhf(out / "fields" / name, tr.fields[k]);
        saved.push_back({{"node", tr.saved_nodes[k]}, {"t", tr.times[k]}, {"file", std::string("fields/") + name}});
    }
    Curve diag("diagnostics", {"node", "t", "sweeps", "converged", "contraction", "last_update", "l2", "max_abs"});
    for (const auto& d : tr.diagnostics)
        diag.rows.push_back({double(d.node), d.t, double(d.sweeps), d.converged ? 1.0 : 0.0, d.contraction,
                             d.last_update, d.l2, d.max_abs});
    write_text(out / "diagnostics.csv", curve_csv(diag));
    json summary = {{"status", to_string(tr.status)},
                    {"message", tr.message},
                    {"max_contraction", tr.max_contraction()},
                    {"max_sweeps", tr.max_sweeps()},
                    {"smallness", tr.smallness},
                    {"saved", saved},
                    {"solve_seconds", seconds},
                    {"version", FRACFLOW_VERSION}};
    write_text(out / "summary.json", summary.dump(2) + "\n");
    std::cout << "solve: " << to_string(tr.status) << "  steps=" << c.experiment.timegrid.n_steps
              << "  saved=" << tr.fields.size() << "  max_sweeps=" << tr.max_sweeps()
              << "  max_contraction=" << format_number(tr.max_contraction()) << "\n";
    if (!tr.message.empty()) std::cout << "  " << tr.message << "\n";
    return tr.status == TrajectoryStatus::completed ? 0 : 1;
}

int cmd_report(const Globals& g, const std::string& dir_arg) {
    const fs::path dir = dir_arg.empty() ? fs::path(g.out) : fs::path(dir_arg);
    require(fs::is_directory(dir), ErrorKind::io, "no such directory: " + dir.string());
    std::map<std::string, json> reports;
    for (const auto& entry : fs::directory_iterator(dir)) {
        if (entry.path().extension() != ".json") continue;
        json j;
        try {
            j = json::parse(read_text(entry.path()));
        } catch (const json::parse_error&) {
            continue;
        }
        if (j.is_object() && j.contains("name") && j.contains("pass")) reports[j["name"].get<std::string>()] = j;
    }
    require(!reports.empty(), ErrorKind::io, "no reports in " + dir.string());
    std::string csv = "name,status\n";
    bool all = true;
    for (const auto& [name, j] : reports) {
        const bool applicable = j.value("applicable", true), pass = j["pass"].get<bool>();
        const char* status = !applicable ? "N/A" : pass ? "PASS" : "FAIL";
        all = all && (!applicable || pass);
        csv += name + "," + status + "\n";
        std::cout << status << "  " << name << "\n";
    }
    write_text(dir / "summary.csv", csv);
    return all ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"fracflow: time-fractional heat-wave flows with gradient nonlinearity"};
    app.require_subcommand(1);
    app.fallthrough();
    app.set_version_flag("--version", std::string("fracflow ") + FRACFLOW_VERSION);
    Globals g;
    app.add_option("--config", g.config, "JSON run configuration");
    app.add_option("--out", g.out, "output directory");
    app.add_option("--seed", g.seed, "seed for randomised checks");
    app.add_option("--threads", g.threads, "worker threads (recorded; the kernels run on one thread)")
        ->envname("FRACFLOW_THREADS")
        ->check(CLI::PositiveNumber);
    app.add_option("--tolerance-scale", g.tolerance_scale, "multiply every pass tolerance");
    app.add_flag("--svg", g.svg, "also write SVG plots");

    auto* ml = app.add_subcommand("ml", "Mittag-Leffler evaluation and checks");
    ml->require_subcommand(1);
    auto* ml_eval_cmd = ml->add_subcommand("eval", "evaluate E_{alpha,beta}(z)");
    double alpha = 1.5, beta = 1.0, z = 0.0, zi = 0.0;
    ml_eval_cmd->add_option("--alpha", alpha)->required();
    ml_eval_cmd->add_option("--beta", beta)->required();
    ml_eval_cmd->add_option("--z", z, "real part")->required();
    ml_eval_cmd->add_option("--zi", zi, "imaginary part");
    auto* ml_verify_cmd = ml->add_subcommand("verify", "run the Mittag-Leffler checks");

    auto* solve_cmd = app.add_subcommand("solve", "march the mild formulation and save the trajectory");

    auto* norms_cmd = app.add_subcommand("norms", "Morrey-type norms of a saved field");
    std::string field_path;
    std::optional<double> np, nmu, ns;
    norms_cmd->add_option("--field", field_path, "FHF1 field")->required();
    norms_cmd->add_option("--p", np);
    norms_cmd->add_option("--mu", nmu);
    norms_cmd->add_option("--s", ns);

    auto* verify_cmd = app.add_subcommand("verify", "run one check and write its report");
    std::string check;
    verify_cmd->add_option("check", check, "check name")->required();

    auto* report_cmd = app.add_subcommand("report", "summarise the reports in a directory");
    std::string report_dir;
    report_cmd->add_option("dir", report_dir, "report directory (default: --out)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (*ml_eval_cmd) {
            const MLValue v = ml_eval({alpha, beta}, cplx(z, zi));
            std::printf("E_{%g,%g}(%g%+gi) = %.17g%+.17gi\nmethod=%s est_error=%.3g terms=%d extended=%d\n", alpha,
                        beta, z, zi, v.value.real(), v.value.imag(), to_string(v.method), v.est_error, v.terms,
                        v.extended_precision ? 1 : 0);
            return 0;
        }
        if (*ml_verify_cmd) {
            const RunConfig c = load(g);
            int code = 0;
            for (const char* name :
                 {"check_decomposition", "check_relaxation_mass", "check_time_identities", "check_boundary_forms"}) {
                Report r = run_check(name, c);
                code = std::max(code, finish(r, c, g));
            }
            return code;
        }
        if (*solve_cmd) return cmd_solve(g);
        if (*norms_cmd) {
            const RunConfig c = load(g);
            const Field f = read_fhf(field_path);
            const NormSpec spec{np.value_or(c.norms.p), nmu.value_or(c.norms.mu), ns.value_or(c.norms.s)};
            spec.validate(f.grid().dim);
            const MorreyResult m = sobolev_morrey_norm(f, spec, c.norms.family(f.grid()));
            std::printf("norm=%.17g p=%g mu=%g s=%g argmax_radius=%g", m.value, spec.p, spec.mu, spec.s,
                        m.argmax_radius);
            for (double x : m.argmax_center) std::printf(" %g", x);
            std::printf("\n");
            return 0;
        }
        if (*verify_cmd) {
            const RunConfig c = load(g);
            Report r = run_check(check, c);
            return finish(r, c, g);
        }
        if (*report_cmd) return cmd_report(g, report_dir);
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 2;
}
