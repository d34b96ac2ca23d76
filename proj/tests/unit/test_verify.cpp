#include <cmath>
#include <filesystem>
#include <numbers>

#include "doctest.h"
#include "fracflow/config.hpp"
#include "fracflow/errors.hpp"
#include "fracflow/verify.hpp"

using namespace fracflow;

namespace {

Experiment small_run(DataSpec phi, double k1, double k2, int M = 32) {
    Experiment e;
    e.grid = {2, M, 1.0};
    e.problem = {1.5, 3.0, 1.5, k1, k2};
    e.phi = phi;
    e.timegrid = {0.0, 0.05, 8, 1.0};
    return e;
}

DataSpec gaussian(double amp, double w = 0.15) {
    DataSpec s{DataKind::gaussian, amp};
    s.width = w;
    return s;
}

// Self-similar homogeneous data with the lattice mass of the continuum profile.
Experiment homogeneous_linear(int M) {
    Experiment e;
    e.grid = {2, M, 1.0};
    e.problem = {1.5, 3.0, 1.5, 0.0, 0.0};
    e.phi = {DataKind::homogeneous_radial, 0.01, phi_degree(3.0)};
    e.phi.mass_matched = true;
    const double T = std::pow(0.1, 4.0 / 3.0);
    e.timegrid = {0.0, 1.06 * T, 32, 1.0};
    return e;
}

}  // namespace

TEST_CASE("helpers") {
    const auto g = log_grid(1e-2, 1e2, 5);
    CHECK(g.front() == 1e-2);
    CHECK(g[2] == doctest::Approx(1.0));
    CHECK(g.back() == doctest::Approx(1e2));
    CHECK(fit_slope({0, 1, 2, 3}, {1, -1, -3, -5}) == doctest::Approx(-2.0));
    CHECK_THROWS_AS(fit_slope({1}, {1}), Error);
}

TEST_CASE("report plumbing") {
    Report r("demo");
    r.add_metric("a", 1.5);
    r.add_tolerance("a", 2.0);
    CHECK_THROWS_AS(r.add_metric("bad", NAN), Error);
    CHECK_THROWS_AS(r.add_metric("bad", INFINITY), Error);
    CHECK(r.metric("a") == 1.5);
    CHECK_THROWS_AS(static_cast<void>(r.metric("missing")), Error);
    Curve c("curve", {"x", "y"}, true, true);
    c.rows = {{1.0, 2.0}, {10.0, 20.0}};
    r.curves.push_back(c);
    CHECK(curve_csv(c) == "x,y\n1,2\n10,20\n");
    CHECK(curve_svg(c).find("<polyline") != std::string::npos);
    const auto dir = std::filesystem::temp_directory_path() / "fracflow_report_test";
    std::filesystem::remove_all(dir);
    write_report(r, dir, true);
    CHECK(r.artifacts.size() == 2);
    const json j = json::parse(read_text(dir / "demo.json"));
    CHECK(j["metrics"]["a"] == 1.5);
    CHECK(j["tolerances"]["a"] == 2.0);
    CHECK(std::filesystem::exists(dir / "demo_curve.svg"));
}

TEST_CASE("Mittag-Leffler checks") {
    const auto z = log_grid(0.5, 100.0, 12);
    CHECK(check_decomposition({1.5}, {1.0}, z).pass);
    CHECK(check_decomposition({1.1}, {2.0}, z).pass);
    const Report near = check_decomposition({1.999}, {1.0}, z);
    CHECK(near.pass);
    CHECK(near.tolerance("max_rel_deviation_near_two") == 1e-6);

    // The orientation that reproduces the series carries mass 1 - 2/alpha.
    const Report mass = check_relaxation_mass({1.25, 1.5, 1.75});
    CHECK(mass.metric("deviation_from_1_minus_2_over_alpha") <= 1e-8);
    CHECK(mass.metric("deviation[1.5]") == doctest::Approx(1.0 / 3.0).epsilon(1e-8));

    const Report ids = check_time_identities(1.5, {0.0, 1.0, 4.0}, 1.0, 1e-4);
    CHECK(ids.pass);
    CHECK(ids.metric("order[1]") == doctest::Approx(2.0).epsilon(0.1));
    CHECK(check_boundary_forms(100.0, 201).pass);
}

TEST_CASE("Mikhlin scans") {
    MikhlinSpec s;
    s.xi_points = 41;
    s.max_order = 0;
    const Report zero = check_mikhlin(s);
    CHECK(zero.metric("sup[order0]") <= 1.0 + 1e-12);
    CHECK(zero.pass);

    MikhlinSpec b2;
    b2.beta_ml = 2.0;
    b2.delta = 4.0 / 3.0;
    b2.max_order = 1;
    b2.xi_points = 41;
    CHECK(check_mikhlin(b2).pass);

    MikhlinSpec bad = s;
    bad.delta = 2.0;
    CHECK_THROWS_AS(check_mikhlin(bad), Error);
    bad.allow_inadmissible = true;
    // |xi|^k E(-A|xi|^k) levels off at 1 / (A |Gamma(1 - alpha)|).
    const Report ctl = check_mikhlin(bad);
    const double plateau = 1.0 / (bad.amplitude * std::abs(std::tgamma(1.0 - bad.alpha)));
    CHECK(ctl.curves[0].rows.back()[1] == doctest::Approx(plateau).epsilon(1e-3));
    CHECK(ctl.notes.size() == 1);
}

TEST_CASE("smoothing") {
    const Grid g{2, 64, 4.0};
    const Field f = make_field(gaussian(1.0, 0.5), g);
    const BallFamily fam = BallFamily::dyadic(g, 2);
    SmoothingSpec same;
    same.p1 = same.p2 = 2.0;
    CHECK(same.lambda() == 0.0);
    const Report r = check_smoothing(same, f, log_grid(1e-2, 1.0, 5), fam);
    CHECK(r.metric("Q_max") <= 1.0 + 1e-9);
    CHECK(r.pass);

    SmoothingSpec iii;
    iii.item = 3;
    CHECK(iii.lambda() == doctest::Approx(0.25));
    CHECK_FALSE(iii.admissible());
    CHECK_THROWS_AS(check_smoothing(iii, f, {0.1}, fam), Error);
    iii.gamma2 = 1.0;
    CHECK(iii.admissible());
}

TEST_CASE("grid maps") {
    const Grid g{2, 16, 1.0};
    const Field f = random_smooth_field(g, 3, 7);
    auto same = [](const Field& a, const Field& b) { return (a - b).max_abs() == 0.0; };
    CHECK(same(apply_map(GridMap::rot90, apply_map(GridMap::rot90, f)), apply_map(GridMap::rot180, f)));
    CHECK(same(apply_map(GridMap::rot90, apply_map(GridMap::rot270, f)), f));
    CHECK(same(apply_map(GridMap::reflect_x, apply_map(GridMap::reflect_y, f)), apply_map(GridMap::rot180, f)));
    CHECK(same(apply_map(GridMap::reflect_diag, apply_map(GridMap::reflect_diag, f)), f));
    CHECK(grid_map_from_string("rot270") == GridMap::rot270);
    CHECK_THROWS_AS(grid_map_from_string("shear"), Error);
    // x -> -x maps a node to a node: f(x) = x is odd, except at the unpaired box edge.
    const Grid g1{1, 16, 2.0};
    Field x(g1);
    for (int i = 0; i < 16; ++i) x.at(i) = g1.coordinate(i);
    const Field rx = apply_map(GridMap::reflect_x, x);
    for (int i = 1; i < 16; ++i) CHECK(rx.at(i) == -x.at(i));
    CHECK(f.max_abs() == doctest::Approx(1.0));
    CHECK(same(random_smooth_field(g, 3, 7), f));
}

TEST_CASE("symmetry") {
    const Report radial = check_symmetry(small_run(gaussian(0.5), 1.0, 1.0), {});
    CHECK(radial.pass);

    // Odd periodic data must vanish on the self-mirrored box edge; the envelope sees to it.
    DataSpec odd{DataKind::harmonic_homogeneous, 0.5, 0.0, 1};
    odd.envelope = 0.08;
    SymmetrySpec anti;
    anti.group = {GridMap::reflect_x};
    anti.antisymmetry = true;
    CHECK(check_symmetry(small_run(odd, 0.0, 1.0), anti).metric("residual") <= 1e-10);
    CHECK(check_symmetry(small_run(odd, 1.0, 1.0), anti).metric("residual") > 1e-6);
    // The odd data stay invariant under the reflection that fixes x.
    SymmetrySpec ry;
    ry.group = {GridMap::reflect_y};
    CHECK(check_symmetry(small_run(odd, 1.0, 1.0), ry).pass);
}

TEST_CASE("stability") {
    StabilitySpec s;
    const Report r = check_stability(small_run(gaussian(0.2), 1.0, 1.0), s);
    CHECK(r.pass);
    CHECK(r.metric("spread") <= 2.0);
    StabilitySpec zero = s;
    zero.scales = {0.0};
    const Report z = check_stability(small_run(gaussian(0.2), 1.0, 1.0), zero);
    CHECK(z.metric("ratio[0]") == 0.0);
    CHECK(z.notes.size() == 1);
    StabilitySpec psi_only = s;
    psi_only.perturb_phi = false;
    psi_only.perturb_psi = true;
    psi_only.scales = {1e-3};
    CHECK(check_stability(small_run(gaussian(0.2), 1.0, 1.0), psi_only).pass);
}

TEST_CASE("self-similarity preconditions and controls") {
    Experiment e = homogeneous_linear(128);
    const Trajectory tr = e.run();
    SelfSimilaritySpec one;
    one.gammas = {1.0};
    one.horizon = std::pow(0.1, 4.0 / 3.0);
    CHECK(check_selfsimilarity(e, tr, one).metric("R[1]") == 0.0);

    SelfSimilaritySpec s;
    s.horizon = one.horizon;
    const Report lin = check_selfsimilarity(e, tr, s);
    CHECK(lin.pass);
    CHECK(lin.metric("R[1.41421]") <= 0.02);

    SelfSimilaritySpec far = s;
    far.gammas = {4.0};
    CHECK_THROWS_AS(check_selfsimilarity(e, tr, far), Error);
    Experiment wrong_q = e;
    wrong_q.problem.q = 1.4;
    CHECK_THROWS_AS(check_selfsimilarity(wrong_q, tr, s), Error);
    Experiment wrong_degree = e;
    wrong_degree.phi.degree = 0.5;
    CHECK_THROWS_AS(check_selfsimilarity(wrong_degree, tr, s), Error);
}

TEST_CASE("decay") {
    Experiment e = homogeneous_linear(128);
    const Trajectory tr = e.run();
    DecaySpec d;
    d.t_lo = std::pow(0.1, 4.0 / 3.0) / 3;
    d.t_hi = std::pow(0.1, 4.0 / 3.0);
    const Report r = check_decay(e, tr, d);
    CHECK(r.metric("target_u") == doctest::Approx(-0.375));
    CHECK(r.metric("target_grad") == doctest::Approx(-1.125));
    CHECK(r.pass);
    DecaySpec narrow = d;
    narrow.t_lo = 0.9 * d.t_hi;
    CHECK_THROWS_AS(check_decay(e, tr, narrow), Error);

    const Report gauss = check_decay(small_run(gaussian(0.1), 0.0, 0.0), d);
    CHECK_FALSE(gauss.applicable);
    CHECK_FALSE(gauss.pass);
}

TEST_CASE("profile collapse") {
    Experiment e = homogeneous_linear(128);
    const Trajectory tr = e.run();
    const double T = std::pow(0.1, 4.0 / 3.0);
    ProfileSpec single;
    single.times = {T / 2};
    CHECK(extract_profile(tr, 1.5, 3.0, single).metric("collapse_residual") == 0.0);
    ProfileSpec four;
    four.times = {T / 3, T / 2, 2 * T / 3, T};
    CHECK(extract_profile(tr, 1.5, 3.0, four).pass);

    Experiment g = e;
    g.phi = gaussian(0.01, 0.05);
    const Report ng = extract_profile(g.run(), 1.5, 3.0, four);
    CHECK_FALSE(ng.pass);
    CHECK(ng.metric("collapse_residual") > 0.2);
}
