#include "fracflow/verify.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include "fracflow/config.hpp"
#include "fracflow/errors.hpp"
#include "fracflow/exponents.hpp"
#include "fracflow/mlf.hpp"

namespace fracflow {

namespace {

std::string tagged(const std::string& base, double v) { return base + "[" + format_number(v) + "]"; }

double rel_dev(double a, double b) { return std::abs(a - b) / std::max(std::abs(b), 1e-300); }

bool homogeneous_kind(DataKind k) {
    return k == DataKind::homogeneous_radial || k == DataKind::harmonic_homogeneous;
}

// phi of degree 2/(rho-1), psi of degree 2/(rho-1) + 2/alpha, either may be zero.
bool scale_invariant_data(const Experiment& e) {
    const double a = e.problem.alpha, rho = e.problem.rho;
    auto ok = [](const DataSpec& s, double degree) {
        return s.kind == DataKind::zero || (homogeneous_kind(s.kind) && std::abs(s.degree - degree) < 1e-12);
    };
    return ok(e.phi, phi_degree(rho)) && ok(e.psi, psi_degree(a, rho)) &&
           !(e.phi.kind == DataKind::zero && e.psi.kind == DataKind::zero);
}

BallFamily all_radii(const Grid& g, int stride) {
    BallFamily fam;
    fam.center_stride = stride > 0 ? stride : std::max(1, g.points / 64);
    for (int k = 1; k <= g.points / 2; ++k) fam.radii_cells.push_back(k);
    return fam;
}

}  // namespace

std::vector<double> log_grid(double lo, double hi, int n) {
    require(lo > 0 && hi >= lo && n >= 1, ErrorKind::domain, "log grid needs 0 < lo <= hi and n >= 1");
    std::vector<double> v(n);
    for (int i = 0; i < n; ++i)
        v[i] = n == 1 ? lo : lo * std::pow(hi / lo, double(i) / (n - 1));
    return v;
}

double fit_slope(const std::vector<double>& x, const std::vector<double>& y) {
    require(x.size() == y.size() && x.size() >= 2, ErrorKind::window_too_short,
            "slope fit needs at least two points");
    const double n = double(x.size());
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < x.size(); ++i) sx += x[i], sy += y[i], sxx += x[i] * x[i], sxy += x[i] * y[i];
    const double den = n * sxx - sx * sx;
    require(den > 0, ErrorKind::window_too_short, "degenerate slope window");
    return (n * sxy - sx * sy) / den;
}

// ---- Mittag-Leffler ----------------------------------------------------------

Report check_decomposition(const std::vector<double>& alphas, const std::vector<double>& betas,
                           const std::vector<double>& z_grid, double tolerance_scale) {
    Report rep{"check_decomposition"};
    rep.inputs = {{"alphas", alphas}, {"betas", betas}, {"z_grid", z_grid}};
    constexpr double near_two = 1.99;
    double worst = 0, worst_near_two = 0;
    bool any_near_two = false;
    Curve c{"deviation", {"z", "max_rel_deviation"}, true, true};
    std::vector<double> per_z(z_grid.size(), 0.0);
    for (double a : alphas) {
        for (double b : betas) {
            const MLParams p{a, b};
            require(p.in_decomposition_domain(), ErrorKind::domain, "pair outside the decomposition domain");
            double pair_worst = 0;
            for (std::size_t i = 0; i < z_grid.size(); ++i) {
                const double s = ml_series(p, -z_grid[i]).value.real();
                const auto d = ml_decompose(p, z_grid[i]);
                const double dev = rel_dev(d.omega.real() + d.l_part.real(), s);
                pair_worst = std::max(pair_worst, dev);
                per_z[i] = std::max(per_z[i], dev);
            }
            rep.add_metric("max_rel_deviation[" + format_number(a) + "," + format_number(b) + "]", pair_worst);
            if (a >= near_two) {
                any_near_two = true;
                worst_near_two = std::max(worst_near_two, pair_worst);
            } else {
                worst = std::max(worst, pair_worst);
            }
        }
    }
    for (std::size_t i = 0; i < z_grid.size(); ++i) c.rows.push_back({z_grid[i], per_z[i]});
    rep.curves.push_back(c);
    rep.add_metric("max_rel_deviation", worst);
    rep.add_tolerance("max_rel_deviation", 1e-8 * tolerance_scale);
    rep.pass = worst <= rep.tolerance("max_rel_deviation");
    if (any_near_two) {
        rep.add_metric("max_rel_deviation_near_two", worst_near_two);
        rep.add_tolerance("max_rel_deviation_near_two", 1e-6 * tolerance_scale);
        rep.pass = rep.pass && worst_near_two <= rep.tolerance("max_rel_deviation_near_two");
        rep.notes.push_back("alpha >= 1.99 uses the looser tolerance: the poles approach the contour");
    }
    return rep;
}

Report check_relaxation_mass(const std::vector<double>& alphas, double tolerance_scale) {
    Report rep{"check_relaxation_mass"};
    rep.inputs = {{"alphas", alphas}};
    rep.add_tolerance("deviation", 1e-6 * tolerance_scale);
    double worst = 0, worst_alt = 0;
    for (double a : alphas) {
        const double m = ml_relaxation_mass(a);
        const double dev = std::abs(std::abs(m) - (2.0 - 2.0 / a));
        rep.add_metric(tagged("mass", a), m);
        rep.add_metric(tagged("deviation", a), dev);
        worst = std::max(worst, dev);
        worst_alt = std::max(worst_alt, std::abs(m - (1.0 - 2.0 / a)));
    }
    rep.add_metric("deviation", worst);
    rep.add_metric("deviation_from_1_minus_2_over_alpha", worst_alt);
    rep.pass = worst <= rep.tolerance("deviation");
    if (!rep.pass)
        rep.notes.push_back("the orientation that reproduces the series has mass 1 - 2/alpha, "
                            "while the 2 - 2/alpha target equals 1 + mass");
    return rep;
}

Report check_time_identities(double alpha, const std::vector<double>& lambdas, double t, double h,
                             double tolerance_scale) {
    Report rep{"check_time_identities"};
    rep.inputs = {{"alpha", alpha}, {"lambdas", lambdas}, {"t", t}, {"h", h}};
    rep.add_tolerance("derivative_residual", 1e-6 * tolerance_scale);
    rep.add_tolerance("integral_residual", 1e-8 * tolerance_scale);
    rep.add_tolerance("order_deviation", 0.2);
    // Round-off hides the order at h itself; it is measured where truncation dominates.
    constexpr double h_order = 1e-2;
    double dmax = 0, imax = 0, odev = 0;
    bool any_order = false;
    for (double lam : lambdas) {
        const double d = ml_derivative_residual(alpha, lam, t, h);
        const double i = ml_integral_residual(alpha, lam, t);
        rep.add_metric(tagged("derivative_residual", lam), d);
        rep.add_metric(tagged("integral_residual", lam), i);
        dmax = std::max(dmax, d), imax = std::max(imax, i);
        if (lam > 0) {
            const double r2 = ml_derivative_residual(alpha, lam, t, 2 * h_order);
            const double r1 = ml_derivative_residual(alpha, lam, t, h_order);
            const double order = std::log2(r2 / r1);
            rep.add_metric(tagged("order", lam), order);
            odev = std::max(odev, std::abs(order - 2.0));
            any_order = true;
        }
    }
    rep.add_metric("derivative_residual", dmax);
    rep.add_metric("integral_residual", imax);
    rep.add_metric("order_deviation", odev);
    rep.pass = dmax <= rep.tolerance("derivative_residual") && imax <= rep.tolerance("integral_residual") &&
               (!any_order || odev <= rep.tolerance("order_deviation"));
    return rep;
}

Report check_boundary_forms(double x_max, int n, double tolerance_scale) {
    Report rep{"check_boundary_forms"};
    rep.inputs = {{"x_max", x_max}, {"points", n}};
    rep.add_tolerance("max_abs_error", 1e-12 * tolerance_scale);
    double e_exp = 0, e_cos = 0, e_sinc = 0;
    for (int i = 0; i < n; ++i) {
        const double x = n == 1 ? 0.0 : x_max * i / (n - 1);
        const double sx = std::sqrt(x);
        e_exp = std::max(e_exp, std::abs(ml_real({1.0, 1.0}, -x) - std::exp(-x)));
        e_cos = std::max(e_cos, std::abs(ml_real({2.0, 1.0}, -x) - std::cos(sx)));
        e_sinc = std::max(e_sinc, std::abs(ml_real({2.0, 2.0}, -x) - (x == 0 ? 1.0 : std::sin(sx) / sx)));
    }
    rep.add_metric("error_E11_exp", e_exp);
    rep.add_metric("error_E21_cos", e_cos);
    rep.add_metric("error_E22_sinc", e_sinc);
    rep.add_metric("max_abs_error", std::max({e_exp, e_cos, e_sinc}));
    rep.pass = rep.metric("max_abs_error") <= rep.tolerance("max_abs_error");
    return rep;
}

// ---- Mikhlin -------------------------------------------------------------------

bool MikhlinSpec::admissible() const noexcept {
    const double lo = beta_ml == 1.0 ? 0.0 : k * (beta_ml - 1.0) / alpha;
    return delta >= lo && delta < k && max_order >= 0 && max_order <= 2;
}

Report check_mikhlin(const MikhlinSpec& spec, double tolerance_scale) {
    require(spec.max_order >= 0 && spec.max_order <= 2, ErrorKind::domain, "max_order must be 0, 1 or 2");
    require(spec.admissible() || spec.allow_inadmissible, ErrorKind::domain,
            "delta outside the admissible range; set allow_inadmissible for a control");
    const MLParams ml{spec.alpha, spec.beta_ml};
    ml.validate();
    Report rep{"check_mikhlin"};
    rep.inputs = {{"alpha", spec.alpha}, {"beta_ml", spec.beta_ml}, {"k", spec.k},
                  {"delta", spec.delta}, {"max_order", spec.max_order}, {"amplitude", spec.amplitude},
                  {"xi_lo", spec.xi_lo}, {"xi_hi", spec.xi_hi}, {"xi_points", spec.xi_points}};
    if (!spec.admissible()) rep.notes.push_back("inadmissible (delta, beta): negative control");
    rep.add_tolerance("slope", spec.slope_tolerance * tolerance_scale);

    auto m = [&](double x1, double x2) {
        const double r = std::hypot(x1, x2);
        return std::pow(r, spec.delta) * ml_real(ml, -spec.amplitude * std::pow(r, spec.k));
    };
    // Generic ray, so no derivative vanishes by symmetry.
    const double c = std::cos(0.3), s = std::sin(0.3);
    const auto xi = log_grid(spec.xi_lo, spec.xi_hi, spec.xi_points);
    Curve curve{"S", {"xi"}, true, true};
    for (int o = 0; o <= spec.max_order; ++o) curve.columns.push_back("order" + std::to_string(o));
    std::vector<std::vector<double>> S(spec.max_order + 1, std::vector<double>(xi.size()));
    for (std::size_t i = 0; i < xi.size(); ++i) {
        const double r = xi[i], x1 = r * c, x2 = r * s, h = 1e-3 * r;
        S[0][i] = std::abs(m(x1, x2));
        if (spec.max_order >= 1) {
            const double d1 = (m(x1 + h, x2) - m(x1 - h, x2)) / (2 * h);
            const double d2 = (m(x1, x2 + h) - m(x1, x2 - h)) / (2 * h);
            S[1][i] = r * std::max(std::abs(d1), std::abs(d2));
        }
        if (spec.max_order >= 2) {
            const double m0 = m(x1, x2);
            const double d11 = (m(x1 + h, x2) - 2 * m0 + m(x1 - h, x2)) / (h * h);
            const double d22 = (m(x1, x2 + h) - 2 * m0 + m(x1, x2 - h)) / (h * h);
            const double d12 = (m(x1 + h, x2 + h) - m(x1 + h, x2 - h) - m(x1 - h, x2 + h) + m(x1 - h, x2 - h)) /
                               (4 * h * h);
            S[2][i] = r * r * std::max({std::abs(d11), std::abs(d22), std::abs(d12)});
        }
        std::vector<double> row{r};
        for (int o = 0; o <= spec.max_order; ++o) row.push_back(S[o][i]);
        curve.rows.push_back(row);
    }
    rep.curves.push_back(curve);

    bool pass = true;
    double worst_slope = -INFINITY;
    for (int o = 0; o <= spec.max_order; ++o) {
        double sup = 0;
        bool finite = true;
        std::vector<double> lx, ly;
        for (std::size_t i = 0; i < xi.size(); ++i) {
            finite = finite && std::isfinite(S[o][i]);
            sup = std::max(sup, S[o][i]);
            if (xi[i] >= spec.xi_hi / 10 * (1 - 1e-12)) {
                lx.push_back(std::log(xi[i]));
                ly.push_back(std::log(std::max(S[o][i], 1e-300)));
            }
        }
        require(finite, ErrorKind::domain, "non-finite symbol derivative");
        const double slope = fit_slope(lx, ly);
        rep.add_metric("sup[order" + std::to_string(o) + "]", sup);
        rep.add_metric("slope[order" + std::to_string(o) + "]", slope);
        worst_slope = std::max(worst_slope, slope);
        pass = pass && slope <= rep.tolerance("slope");
    }
    rep.add_metric("max_slope", worst_slope);
    rep.pass = pass;
    return rep;
}

// ---- smoothing -----------------------------------------------------------------

double SmoothingSpec::lambda() const noexcept {
    return (gamma2 - gamma1) + (N - mu) / p1 - (N - mu) / p2;
}

bool SmoothingSpec::admissible() const noexcept {
    const double l = lambda();
    switch (item) {
        case 1: return l < 2;
        case 2: return l + 2 / alpha < 2;
        case 3: return 2 - 2 / alpha < l && l < 2;
        default: return false;
    }
}

Report check_smoothing(const SmoothingSpec& spec, const Field& f, const std::vector<double>& t_grid,
                       const BallFamily& balls, double tolerance_scale) {
    require(spec.item >= 1 && spec.item <= 3, ErrorKind::domain, "smoothing item must be 1, 2 or 3");
    require(spec.gamma1 <= spec.gamma2 && spec.p1 <= spec.p2, ErrorKind::domain,
            "smoothing needs gamma1 <= gamma2 and p1 <= p2");
    require(spec.admissible(), ErrorKind::domain, "tuple not admissible for this item");
    require(!t_grid.empty(), ErrorKind::domain, "empty time grid");
    const double a = spec.alpha, lam = spec.lambda();
    Report rep{"check_smoothing"};
    rep.inputs = {{"alpha", a}, {"gamma1", spec.gamma1}, {"gamma2", spec.gamma2}, {"p1", spec.p1},
                  {"p2", spec.p2}, {"mu", spec.mu}, {"N", spec.N}, {"item", spec.item}, {"t_grid", t_grid}};
    rep.add_metric("lambda", lam);
    rep.add_tolerance("max_over_min", spec.bound * tolerance_scale);

    const double s_in = spec.item == 2 ? spec.gamma1 - 2 / a : spec.gamma1;
    const double in = sobolev_morrey_norm(f, {spec.p1, spec.mu, s_in}, balls).value;
    require(in > 0, ErrorKind::domain, "input norm vanishes");
    const MultiplierKind j = spec.item == 1 ? MultiplierKind::one
                             : spec.item == 2 ? MultiplierKind::two : MultiplierKind::alpha_alpha;
    const MultiplierSymbols symbols(a);
    const double w = spec.item == 3 ? 1 - a + a * lam / 2 : a * lam / 2;
    Curve c{"Q", {"t", "Q"}, true, true};
    double qmin = INFINITY, qmax = 0;
    for (double t : t_grid) {
        const Field u = apply_G({a, j, t}, f, symbols);
        const double out = sobolev_morrey_norm(u, {spec.p2, spec.mu, spec.gamma2}, balls).value;
        const double q = out * std::pow(t, w) / in;
        qmin = std::min(qmin, q), qmax = std::max(qmax, q);
        c.rows.push_back({t, q});
    }
    rep.curves.push_back(c);
    rep.add_metric("input_norm", in);
    rep.add_metric("Q_min", qmin);
    rep.add_metric("Q_max", qmax);
    rep.add_metric("max_over_min", qmin > 0 ? qmax / qmin : 1e300);
    rep.pass = rep.metric("max_over_min") <= rep.tolerance("max_over_min");
    return rep;
}

// ---- self-similarity -------------------------------------------------------------

Report check_selfsimilarity(const Experiment& e, const Trajectory& traj, const SelfSimilaritySpec& spec,
                            double tolerance_scale) {
    e.problem.validate(true);
    require(scale_invariant_data(e), ErrorKind::parameter_mismatch,
            "self-similarity needs homogeneous data of degrees 2/(rho-1) and 2/(rho-1)+2/alpha");
    require(!traj.empty(), ErrorKind::empty_trajectory, "no saved fields");
    require(!spec.gammas.empty() && spec.probe_times >= 1, ErrorKind::domain, "no probes requested");
    const double a = e.problem.alpha, rho = e.problem.rho;
    const Grid& g = e.grid;
    double gmax = 0;
    for (double gm : spec.gammas) {
        require(gm > 0, ErrorKind::domain, "gamma must be positive");
        gmax = std::max(gmax, gm);
    }
    const double t_last = traj.times.back();
    const double H = spec.horizon > 0 ? spec.horizon : 1.5 * t_last / std::pow(gmax, 2 / a);
    const double t_lo = H / 3, t_hi = 2 * H / 3;
    require(std::pow(gmax, 2 / a) * t_hi <= t_last * (1 + 1e-12) && t_lo >= traj.times.front(),
            ErrorKind::insufficient_overlap, "scaled probe times leave the saved range");
    const double h = g.spacing(), r_in = spec.inner_cells * h, r_out = spec.outer_fraction * g.length / 2;
    require(r_in < r_out, ErrorKind::insufficient_overlap, "empty probe annulus");
    require(gmax * r_out <= 0.9 * g.length / 2, ErrorKind::insufficient_overlap,
            "scaled probe radii reach the outer tenth of the box");

    Report rep{"check_selfsimilarity"};
    rep.inputs = {{"experiment", experiment_to_json(e)}, {"gammas", spec.gammas}, {"horizon", H},
                  {"probe_times", spec.probe_times}, {"inner_cells", spec.inner_cells},
                  {"outer_fraction", spec.outer_fraction}};
    rep.add_tolerance("R", spec.tolerance * tolerance_scale);

    std::vector<int> idx;
    std::vector<double> xs;
    for (int i = 0; i < g.points; ++i)
        if (std::abs(g.coordinate(i)) <= r_out + 1e-12 * g.length) idx.push_back(i), xs.push_back(g.coordinate(i));
    const std::size_t n = xs.size();
    const bool two_d = g.dim == 2;

    std::vector<double> times;
    for (int s = 0; s < spec.probe_times; ++s)
        times.push_back(spec.probe_times == 1 ? t_lo : t_lo + s * (t_hi - t_lo) / (spec.probe_times - 1));

    double scale = 0;
    std::vector<Field> base;
    for (double t : times) {
        base.push_back(traj.at(t));
        for (std::size_t p = 0; p < n; ++p)
            for (std::size_t q = 0; q < (two_d ? n : 1); ++q) {
                const double r = two_d ? std::hypot(xs[p], xs[q]) : std::abs(xs[p]);
                if (r >= r_in && r <= r_out) scale = std::max(scale, std::abs(base.back().at(idx[p], two_d ? idx[q] : 0)));
            }
    }
    require(scale > 0, ErrorKind::domain, "solution vanishes on the probe set");

    Curve c{"R", {"gamma", "R"}};
    bool pass = true;
    for (double gm : spec.gammas) {
        const double amp = std::pow(gm, 2 / (rho - 1));
        std::vector<double> gx(n);
        for (std::size_t p = 0; p < n; ++p) gx[p] = gm * xs[p];
        double R = 0;
        for (std::size_t k = 0; k < times.size(); ++k) {
            const Field& u = base[k];
            std::vector<double> w;
            if (gm == 1.0) {
                w.reserve(n * n);
                for (std::size_t p = 0; p < n; ++p)
                    for (std::size_t q = 0; q < (two_d ? n : 1); ++q) w.push_back(u.at(idx[p], two_d ? idx[q] : 0));
            } else {
                const Field us = traj.at(std::pow(gm, 2 / a) * times[k]);
                w = two_d ? eval_on_tensor_grid(transform_forward(us), gx, gx)
                          : eval_on_tensor_grid(transform_forward(us), gx);
            }
            for (std::size_t p = 0; p < n; ++p)
                for (std::size_t q = 0; q < (two_d ? n : 1); ++q) {
                    const double r = two_d ? std::hypot(xs[p], xs[q]) : std::abs(xs[p]);
                    if (r < r_in || r > r_out) continue;
                    const double v = u.at(idx[p], two_d ? idx[q] : 0);
                    R = std::max(R, std::abs(v - amp * w[p * (two_d ? n : 1) + q]));
                }
        }
        R /= scale;
        rep.add_metric(tagged("R", gm), R);
        c.rows.push_back({gm, R});
        pass = pass && R <= rep.tolerance("R");
    }
    rep.add_metric("scale", scale);
    rep.curves.push_back(c);
    rep.pass = pass;
    if (traj.status != TrajectoryStatus::completed) {
        rep.pass = false;
        rep.notes.push_back(std::string("run ended early: ") + to_string(traj.status));
    }
    return rep;
}

Report check_selfsimilarity(const Experiment& e, const SelfSimilaritySpec& spec, double tolerance_scale) {
    return check_selfsimilarity(e, e.run(), spec, tolerance_scale);
}

// ---- decay ---------------------------------------------------------------------

Report check_decay(const Experiment& e, const Trajectory& traj, const DecaySpec& spec, double tolerance_scale) {
    Report rep{"check_decay"};
    rep.inputs = {{"experiment", experiment_to_json(e)}, {"p", spec.p}, {"r", spec.r},
                  {"t_lo", spec.t_lo}, {"t_hi", spec.t_hi}};
    rep.add_tolerance("relative_slope_error", spec.relative_tolerance * tolerance_scale);
    if (!scale_invariant_data(e)) {
        rep.applicable = false;
        rep.notes.push_back("data not homogeneous of the scaling degree; slope test skipped");
        return rep;
    }
    require(!traj.empty(), ErrorKind::empty_trajectory, "no saved fields");
    const ExponentSet ex = exponent_report(e.problem.alpha, e.problem.rho, spec.p, spec.r, e.grid.dim);
    const double beta = ex.beta_decay, a = e.problem.alpha;
    const double t_hi = spec.t_hi > 0 ? spec.t_hi : traj.times.back();
    const double t_lo = spec.t_lo > 0 ? spec.t_lo : t_hi / 3;
    std::vector<std::size_t> sel;
    for (std::size_t i = 0; i < traj.times.size(); ++i)
        if (traj.times[i] > e.timegrid.t_start && traj.times[i] >= t_lo && traj.times[i] <= t_hi) sel.push_back(i);
    require(int(sel.size()) >= spec.min_points && t_hi / t_lo >= spec.min_span, ErrorKind::window_too_short,
            "decay window holds " + std::to_string(sel.size()) + " nodes over a span of " +
                format_number(t_hi / t_lo));
    const NormSpec ns{spec.r, ex.mu, 0.0};
    const BallFamily fam = all_radii(e.grid, spec.center_stride);
    std::vector<double> lt, lu, lg;
    Curve c{"norms", {"t", "u_norm", "grad_norm"}, true, true};
    for (std::size_t i : sel) {
        const double nu = morrey_norm(traj.fields[i], ns, fam).value;
        const double ng = morrey_norm(gradient_magnitude(traj.fields[i]), ns, fam).value;
        lt.push_back(std::log(traj.times[i])), lu.push_back(std::log(nu)), lg.push_back(std::log(ng));
        c.rows.push_back({traj.times[i], nu, ng});
    }
    rep.curves.push_back(c);
    const double su = fit_slope(lt, lu), sg = fit_slope(lt, lg);
    const double tu = -beta, tg = -(beta + a / 2);
    rep.add_metric("beta", beta);
    rep.add_metric("mu", ex.mu);
    rep.add_metric("slope_u", su);
    rep.add_metric("slope_grad", sg);
    rep.add_metric("target_u", tu);
    rep.add_metric("target_grad", tg);
    rep.add_metric("relative_error_u", std::abs(su - tu) / std::abs(tu));
    rep.add_metric("relative_error_grad", std::abs(sg - tg) / std::abs(tg));
    rep.add_metric("window_points", double(sel.size()));
    const double tol = rep.tolerance("relative_slope_error");
    rep.pass = rep.metric("relative_error_u") <= tol && rep.metric("relative_error_grad") <= tol &&
               traj.status == TrajectoryStatus::completed;
    for (const auto& w : ex.warnings) rep.notes.push_back(w);
    return rep;
}

Report check_decay(const Experiment& e, const DecaySpec& spec, double tolerance_scale) {
    if (!scale_invariant_data(e)) return check_decay(e, Trajectory{}, spec, tolerance_scale);
    return check_decay(e, e.run(), spec, tolerance_scale);
}

// ---- symmetry ------------------------------------------------------------------

const char* to_string(GridMap m) noexcept {
    switch (m) {
        case GridMap::identity: return "identity";
        case GridMap::rot90: return "rot90";
        case GridMap::rot180: return "rot180";
        case GridMap::rot270: return "rot270";
        case GridMap::reflect_x: return "reflect_x";
        case GridMap::reflect_y: return "reflect_y";
        case GridMap::reflect_diag: return "reflect_diag";
        case GridMap::reflect_antidiag: return "reflect_antidiag";
    }
    return "?";
}

GridMap grid_map_from_string(const std::string& name) {
    for (GridMap m : {GridMap::identity, GridMap::rot90, GridMap::rot180, GridMap::rot270, GridMap::reflect_x,
                      GridMap::reflect_y, GridMap::reflect_diag, GridMap::reflect_antidiag})
        if (name == to_string(m)) return m;
    raise(ErrorKind::schema, "unknown grid map '" + name + "'");
}

std::vector<GridMap> dihedral_group() {
    return {GridMap::rot90, GridMap::rot180, GridMap::rot270, GridMap::reflect_x,
            GridMap::reflect_y, GridMap::reflect_diag, GridMap::reflect_antidiag};
}

Field apply_map(GridMap m, const Field& f) {
    const Grid& g = f.grid();
    const int M = g.points;
    // x_i -> -x_i is the index map i -> (M - i) mod M on the box [-L/2, L/2).
    auto neg = [M](int i) { return (M - i) % M; };
    if (g.dim == 1) {
        require(m == GridMap::identity || m == GridMap::reflect_x, ErrorKind::domain,
                "only reflection acts on a 1D grid");
        Field out(g);
        for (int i = 0; i < M; ++i) out.at(i) = f.at(m == GridMap::identity ? i : neg(i));
        return out;
    }
    Field out(g);
    for (int i = 0; i < M; ++i)
        for (int j = 0; j < M; ++j) {
            int a = i, b = j;
            switch (m) {
                case GridMap::identity: break;
                case GridMap::rot90: a = neg(j), b = i; break;
                case GridMap::rot180: a = neg(i), b = neg(j); break;
                case GridMap::rot270: a = j, b = neg(i); break;
                case GridMap::reflect_x: a = neg(i); break;
                case GridMap::reflect_y: b = neg(j); break;
                case GridMap::reflect_diag: a = j, b = i; break;
                case GridMap::reflect_antidiag: a = neg(j), b = neg(i); break;
            }
            out.at(i, j) = f.at(a, b);
        }
    return out;
}

Report check_symmetry(const Experiment& e, const Trajectory& traj, const SymmetrySpec& spec,
                      double tolerance_scale) {
    require(!traj.empty(), ErrorKind::empty_trajectory, "no saved fields");
    Report rep{"check_symmetry"};
    json group = json::array();
    for (GridMap m : spec.group) group.push_back(to_string(m));
    rep.inputs = {{"experiment", experiment_to_json(e)}, {"group", group}, {"antisymmetry", spec.antisymmetry}};
    rep.add_tolerance("residual", spec.tolerance * tolerance_scale);
    Curve c{"residual", {"t", "residual"}};
    double worst = 0;
    for (std::size_t k = 0; k < traj.fields.size(); ++k) {
        const Field& u = traj.fields[k];
        const double umax = u.max_abs();
        double res = 0;
        if (umax > 0) {
            for (GridMap m : spec.group) {
                Field d = apply_map(m, u);
                if (spec.antisymmetry) d += u;
                else d -= u;
                res = std::max(res, d.max_abs() / umax);
            }
        }
        worst = std::max(worst, res);
        c.rows.push_back({traj.times[k], res});
    }
    rep.curves.push_back(c);
    rep.add_metric("residual", worst);
    rep.add_metric("final_residual", c.rows.back()[1]);
    rep.pass = worst <= rep.tolerance("residual");
    if (traj.status != TrajectoryStatus::completed)
        rep.notes.push_back(std::string("run ended early: ") + to_string(traj.status));
    return rep;
}

Report check_symmetry(const Experiment& e, const SymmetrySpec& spec, double tolerance_scale) {
    return check_symmetry(e, e.run(), spec, tolerance_scale);
}

// ---- stability -----------------------------------------------------------------

Field random_smooth_field(const Grid& grid, int modes, std::uint64_t seed) {
    require(modes >= 1, ErrorKind::domain, "need at least one mode");
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> coef(-1.0, 1.0);
    const double k0 = 2 * std::numbers::pi / grid.length;
    const int m2max = grid.dim == 2 ? modes : 0;
    Field f(grid);
    for (int m1 = 0; m1 <= modes; ++m1)
        for (int m2 = -m2max; m2 <= m2max; ++m2) {
            const double a = coef(rng), b = coef(rng);
            const int jmax = grid.dim == 2 ? grid.points : 1;
            for (int i = 0; i < grid.points; ++i)
                for (int j = 0; j < jmax; ++j) {
                    const double ph = k0 * (m1 * grid.coordinate(i) + (grid.dim == 2 ? m2 * grid.coordinate(j) : 0.0));
                    f.at(i, j) += a * std::cos(ph) + b * std::sin(ph);
                }
        }
    f *= 1.0 / f.max_abs();
    return f;
}

Report check_stability(const Experiment& e, const StabilitySpec& spec, double tolerance_scale) {
    require(!spec.scales.empty(), ErrorKind::domain, "no perturbation scales");
    Report rep{"check_stability"};
    rep.inputs = {{"experiment", experiment_to_json(e)}, {"scales", spec.scales}, {"perturb_phi", spec.perturb_phi},
                  {"perturb_psi", spec.perturb_psi}, {"modes", spec.modes}, {"seed", spec.seed},
                  {"p", spec.p}, {"r", spec.r}};
    rep.add_tolerance("ratio", spec.bound * tolerance_scale);
    const ExponentSet ex = exponent_report(e.problem.alpha, e.problem.rho, spec.p, spec.r, e.grid.dim);
    const NormSpec ns{spec.r, ex.mu, 0.0};
    const BallFamily fam = BallFamily::dyadic(e.grid, std::max(1, e.grid.points / 32));
    const InitialData base_data = e.data();
    const Trajectory base = solve(base_data, e.problem, e.timegrid, e.picard);
    const double size = std::max(base_data.phi.max_abs(), base_data.psi.max_abs());
    ProblemSpec lin = e.problem;
    lin.kappa1 = lin.kappa2 = 0.0;

    Curve c{"ratio", {"scale", "difference", "data", "ratio"}, true, true};
    double rmin = INFINITY, rmax = 0;
    bool completed = base.status == TrajectoryStatus::completed;
    for (double s : spec.scales) {
        Field dphi(e.grid), dpsi(e.grid);
        if (spec.perturb_phi) dphi = (s * size) * random_smooth_field(e.grid, spec.modes, spec.seed);
        if (spec.perturb_psi) dpsi = (s * size) * random_smooth_field(e.grid, spec.modes, spec.seed + 1);
        InitialData pert = base_data;
        pert.phi += dphi;
        pert.psi += dpsi;
        const Trajectory other = solve(pert, e.problem, e.timegrid, e.picard);
        completed = completed && other.status == TrajectoryStatus::completed &&
                    other.fields.size() == base.fields.size();
        if (!completed) break;
        Trajectory diff = base;
        for (std::size_t k = 0; k < diff.fields.size(); ++k) diff.fields[k] -= other.fields[k];
        const double dn = xbeta_norm(diff, e.problem.alpha, ex.beta_decay, ns, fam);
        double data_norm = 0;
        for (const Field* d : {&dphi, &dpsi}) {
            if (d->max_abs() == 0) continue;
            InitialData only{d == &dphi ? *d : Field(e.grid), d == &dpsi ? *d : Field(e.grid)};
            data_norm += xbeta_norm(solve(only, lin, e.timegrid, e.picard), e.problem.alpha, ex.beta_decay, ns, fam);
        }
        double ratio = 0;
        if (data_norm == 0 && dn == 0) rep.notes.push_back("zero perturbation: exact match");
        else ratio = data_norm > 0 ? dn / data_norm : 1e300;
        rep.add_metric(tagged("ratio", s), ratio);
        c.rows.push_back({s, dn, data_norm, ratio});
        rmin = std::min(rmin, ratio), rmax = std::max(rmax, ratio);
    }
    rep.curves.push_back(c);
    if (!completed) {
        rep.notes.push_back("a run did not complete; stability undetermined");
        rep.pass = false;
        return rep;
    }
    rep.add_metric("max_ratio", rmax);
    rep.add_metric("spread", rmin > 0 ? rmax / rmin : 1.0);
    rep.pass = rmax <= rep.tolerance("ratio");
    return rep;
}

// ---- profile collapse ------------------------------------------------------------

Report extract_profile(const Trajectory& traj, double alpha, double rho, const ProfileSpec& spec,
                       double tolerance_scale) {
    require(!traj.empty(), ErrorKind::empty_trajectory, "no saved fields");
    const Grid& g = traj.fields.front().grid();
    std::vector<double> times = spec.times;
    if (times.empty()) {
        const double t_end = traj.times.back();
        for (double fr : {0.5, 2.0 / 3.0, 5.0 / 6.0, 1.0}) times.push_back(std::max(fr * t_end, traj.times.front()));
    }
    Report rep{"extract_profile"};
    rep.inputs = {{"alpha", alpha}, {"rho", rho}, {"times", times}, {"eta_points", spec.eta_points},
                  {"inner_cells", spec.inner_cells}, {"outer_fraction", spec.outer_fraction}};
    rep.add_tolerance("collapse_residual", spec.tolerance * tolerance_scale);
    const auto [tmin, tmax] = std::minmax_element(times.begin(), times.end());
    require(*tmin > 0, ErrorKind::domain, "profile times must be positive");
    const double eta_lo = spec.inner_cells * g.spacing() / std::pow(*tmin, alpha / 2);
    const double eta_hi = spec.outer_fraction * g.length / 2 / std::pow(*tmax, alpha / 2);
    if (!(eta_lo < eta_hi) || spec.eta_points < 2) {
        rep.applicable = false;
        rep.notes.push_back("no common eta window for these times");
        return rep;
    }
    std::vector<double> eta(spec.eta_points);
    for (int i = 0; i < spec.eta_points; ++i) eta[i] = eta_lo + (eta_hi - eta_lo) * i / (spec.eta_points - 1);
    Curve c{"profile", {"eta"}};
    std::vector<std::vector<double>> curves;
    const std::vector<double> origin{0.0};
    for (double t : times) {
        std::vector<double> xs(eta.size());
        for (std::size_t i = 0; i < eta.size(); ++i) xs[i] = eta[i] * std::pow(t, alpha / 2);
        const SpectralField F = transform_forward(traj.at(t));
        auto v = g.dim == 2 ? eval_on_tensor_grid(F, xs, origin) : eval_on_tensor_grid(F, xs);
        for (double& x : v) x *= std::pow(t, alpha / (rho - 1));
        curves.push_back(std::move(v));
        c.columns.push_back("t=" + format_number(t));
    }
    double scale = 0, res = 0;
    for (const auto& cv : curves)
        for (double v : cv) scale = std::max(scale, std::abs(v));
    for (std::size_t a = 0; a < curves.size(); ++a)
        for (std::size_t b = a + 1; b < curves.size(); ++b)
            for (std::size_t i = 0; i < eta.size(); ++i) res = std::max(res, std::abs(curves[a][i] - curves[b][i]));
    if (scale > 0) res /= scale;
    for (std::size_t i = 0; i < eta.size(); ++i) {
        std::vector<double> row{eta[i]};
        for (const auto& cv : curves) row.push_back(cv[i]);
        c.rows.push_back(row);
    }
    rep.curves.push_back(c);
    rep.add_metric("collapse_residual", res);
    rep.add_metric("eta_lo", eta_lo);
    rep.add_metric("eta_hi", eta_hi);
    rep.pass = res <= rep.tolerance("collapse_residual");
    return rep;
}

}  // namespace fracflow
