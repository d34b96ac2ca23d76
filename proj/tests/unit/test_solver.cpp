#include <cmath>
#include <numbers>
#include <random>

#include "doctest.h"
#include "fracflow/errors.hpp"
#include "fracflow/scalar_oracle.hpp"
#include "fracflow/solver.hpp"

using namespace fracflow;
using std::numbers::pi;

namespace {

template <class F>
Field sample(const Grid& g, F&& fn) {
    Field f(g);
    for (int i = 0; i < g.points; ++i)
        for (int j = 0; j < g.points; ++j) f.at(i, j) = fn(g.coordinate(i), g.coordinate(j));
    return f;
}

Field constant(const Grid& g, double c) {
    Field f(g);
    for (double& v : f.values()) v = c;
    return f;
}

InitialData radial_data(const Grid& g, double eps, double alpha, double rho) {
    DataSpec phi{DataKind::homogeneous_radial, eps, phi_degree(rho)};
    DataSpec psi{DataKind::homogeneous_radial, eps, psi_degree(alpha, rho)};
    return make_initial_data(phi, psi, g);
}

double max_diff(const Field& a, const Field& b) { return (a - b).max_abs(); }

}  // namespace

TEST_CASE("memory weights") {
    const double alpha = 1.5;
    double prev = 0.0;
    for (int n : {16, 32, 64, 128}) {
        const TimeGrid tg{0.0, 1.0, n, 1.0};
        double sum = 0.0;
        for (double w : memory_weights(alpha, 0.0, tg, n)) sum += w;
        const double err = std::abs(sum - 1.0 / std::tgamma(alpha + 1.0));
        if (prev > 0.0) CHECK(prev / err >= 1.7);
        prev = err;
    }
    CHECK(prev < 1e-3);

    // alpha = 1: K_c is the exponential, weights are the midpoint rule
    const TimeGrid tg{0.0, 2.0, 10, 1.0};
    const double c = 3.0;
    const auto w = memory_weights(1.0, c, tg, 10);
    for (int j = 0; j < 10; ++j) CHECK(w[j] == doctest::Approx(0.2 * std::exp(-c * (2.0 - 0.2 * j - 0.1))).epsilon(1e-13));

    // graded nodes and the last panel's exact power integral
    const TimeGrid gr{0.0, 1.0, 8, 2.0};
    CHECK(gr.node(4) == doctest::Approx(0.25));
    const auto wg = memory_weights(alpha, 0.0, gr, 8);
    const double dt = 1.0 - gr.node(7);
    CHECK(wg.back() == doctest::Approx(std::pow(dt, alpha) / alpha / std::tgamma(alpha)).epsilon(1e-13));
    CHECK_THROWS_AS(memory_weights(alpha, 0.0, gr, 9), Error);
}

TEST_CASE("nonlinearity") {
    const Grid g{2, 32, 1.0};
    CHECK(nonlinearity(Field(g), {1.5, 3.0, 1.5, 1.0, 1.0}).max_abs() == 0.0);
    const Field c = nonlinearity(constant(g, 0.7), {1.5, 3.0, 1.5, 0.0, 2.0});
    CHECK(c.at(3, 5) == doctest::Approx(2.0 * 0.343).epsilon(1e-13));

    // |grad u|^q of a plane wave is a smooth even function; check the mean
    const Field u = sample(g, [](double x, double) { return std::sin(2 * pi * x); });
    const Field gq = nonlinearity(u, {1.5, 3.0, 2.0 - 1e-9, 1.0, 0.0});
    double mean = 0.0;
    for (double v : gq.values()) mean += v / static_cast<double>(g.size());
    CHECK(mean == doctest::Approx(2 * pi * pi).epsilon(1e-6));

    // local Lipschitz bound with an empirical constant
    std::mt19937_64 rng(7);
    std::normal_distribution<double> nd(0.0, 1.0);
    const ProblemSpec spec{1.5, 3.0, 1.5, 0.0, 1.0};
    double worst = 0.0;
    for (int trial = 0; trial < 50; ++trial) {
        const double a1 = nd(rng), a2 = nd(rng), b1 = nd(rng), b2 = nd(rng);
        const Field f = sample(g, [&](double x, double y) { return a1 * std::cos(2 * pi * x) + a2 * std::sin(2 * pi * y); });
        const Field h = sample(g, [&](double x, double y) { return b1 * std::cos(2 * pi * x) + b2 * std::sin(2 * pi * y); });
        const double lhs = (nonlinearity(f, spec) - nonlinearity(h, spec)).max_abs();
        const double rhs = (f - h).max_abs() * (std::pow(f.max_abs(), 2.0) + std::pow(h.max_abs(), 2.0));
        worst = std::max(worst, lhs / rhs);
    }
    CHECK(worst <= 3.0);
}

TEST_CASE("linear part") {
    const Grid g{2, 32, 1.0};
    const Field phi = sample(g, [](double x, double y) { return std::cos(2 * pi * x) + 0.3 * std::sin(2 * pi * y); });
    const Field psi = sample(g, [](double x, double) { return std::sin(2 * pi * x); });
    const InitialData d{phi, psi, DataKind::file, 0.0};
    CHECK(max_diff(linear_part(d, 1.5, 0.0), phi) < 1e-14);

    const InitialData only_phi{phi, Field(g), DataKind::file, 0.0};
    const double t = 0.2, c = 4 * pi * pi;
    const double e = ml_real({1.5, 1.0}, -c * std::pow(t, 1.5));
    CHECK(max_diff(linear_part(only_phi, 1.5, t), e * phi) < 1e-13);

    // wave limit: cos(2 pi t) phi + sin(2 pi t)/(2 pi) psi for unit modes
    for (double tw : {0.1, 0.37, 0.9}) {
        const Field expect = std::cos(2 * pi * tw) * phi + (std::sin(2 * pi * tw) / (2 * pi)) * psi;
        CHECK(max_diff(linear_part(d, 2.0, tw), expect) < 1e-12);
    }
}

TEST_CASE("linear runs reproduce the linear part") {
    const Grid g{2, 64, 1.0};
    const InitialData d = radial_data(g, 0.01, 1.5, 3.0);
    for (double grading : {1.0, 2.0}) {
        const TimeGrid tg{0.0, 0.05, 8, grading};
        const Trajectory tr = solve(d, {1.5, 3.0, 1.5, 0.0, 0.0}, tg, {});
        REQUIRE(tr.fields.size() == 9);
        for (std::size_t i = 0; i < tr.fields.size(); ++i) {
            const Field lin = linear_part(d, 1.5, tr.times[i]);
            CHECK(max_diff(tr.fields[i], lin) <= 1e-12 * lin.max_abs());
        }
    }
}

TEST_CASE("scalar mode converges at first order") {
    const Grid g{2, 16, 1.0};
    const InitialData d{constant(g, 1.0), constant(g, 0.5), DataKind::file, 0.0};
    const ProblemSpec spec{1.5, 3.0, 1.5, 0.0, -1.0};
    const int fine = 8192;
    const auto ref = scalar_reference({1.5, 0.0, 1.0, 0.5}, [](double u) { return -u * u * u; }, 1.0, fine);
    std::vector<double> errs;
    for (int n : {16, 32, 64, 128}) {
        const Trajectory tr = solve(d, spec, {0.0, 1.0, n, 1.0}, {});
        double err = 0.0;
        for (std::size_t i = 0; i < tr.times.size(); ++i)
            err = std::max(err, std::abs(tr.fields[i][0] - ref[static_cast<std::size_t>(std::lround(tr.times[i] * fine))]));
        errs.push_back(err);
    }
    for (std::size_t i = 1; i < errs.size(); ++i) {
        CHECK(errs[i - 1] / errs[i] >= 1.7);
        CHECK(errs[i - 1] / errs[i] <= 2.3);
    }
}

TEST_CASE("small homogeneous data: fast sweeps, contraction shrinks with the data") {
    const Grid g{2, 64, 1.0};
    const ProblemSpec spec{1.5, 3.0, 1.5, 1.0, 1.0};
    const TimeGrid tg{0.0, 0.02, 16, 1.0};
    std::vector<double> ratios;
    for (double sigma : {1.0, 0.5, 0.25}) {
        const Trajectory tr = solve(radial_data(g, 0.02 * sigma, 1.5, 3.0), spec, tg, {});
        REQUIRE(tr.status == TrajectoryStatus::completed);
        CHECK(tr.max_sweeps() <= 5);
        for (const auto& f : tr.fields) CHECK(f.all_finite());
        ratios.push_back(tr.max_contraction());
    }
    CHECK(ratios[1] <= ratios[0]);
    CHECK(ratios[2] <= ratios[1]);
}

TEST_CASE("rotation invariance survives the nonlinear flow") {
    const Grid g{2, 64, 1.0};
    const InitialData d = radial_data(g, 0.05, 1.5, 3.0);
    const Trajectory tr = solve(d, {1.5, 3.0, 1.5, 1.0, 1.0}, {0.0, 0.02, 8, 1.0}, {});
    const int m = g.points;
    double worst = 0.0;
    for (const auto& f : tr.fields)
        for (int i = 0; i < m; ++i)
            for (int j = 0; j < m; ++j) {
                // (x, y) -> (-y, x) maps node (i, j) to ((m - j) % m, i)
                worst = std::max(worst, std::abs(f.at((m - j) % m, i) - f.at(i, j)) / f.max_abs());
            }
    CHECK(worst <= 1e-10);
}

TEST_CASE("blow-up is reported, not thrown") {
    const Grid g{2, 16, 1.0};
    const InitialData d{constant(g, 3.0), constant(g, 3.0), DataKind::file, 0.0};
    PicardConfig cfg;
    cfg.overflow_threshold = 50.0;
    const Trajectory tr = solve(d, {1.5, 3.0, 1.5, 0.0, 1.0}, {0.0, 2.0, 200, 1.0}, cfg);
    CHECK(tr.status != TrajectoryStatus::completed);
    CHECK_FALSE(tr.message.empty());
    CHECK(tr.fields.size() < 201);
    for (const auto& f : tr.fields) CHECK(f.all_finite());
}

TEST_CASE("trajectory access and the X_beta norm") {
    const Grid g{2, 32, 1.0};
    const InitialData d = radial_data(g, 0.01, 1.5, 3.0);
    PicardConfig cfg;
    cfg.save_every = 2;
    cfg.epsilon_data = 0.01;
    const Trajectory tr = solve(d, {1.5, 3.0, 1.5, 1.0, 1.0}, {0.0, 0.01, 5, 1.0}, cfg);
    CHECK(tr.saved_nodes == std::vector<int>{0, 2, 4, 5});
    CHECK(tr.diagnostics.size() == 6);
    CHECK(tr.smallness == doctest::Approx(8 * 1e-4 + std::pow(2, 1.5) * std::pow(0.01, 0.5)));
    const Field mid = tr.at(0.5 * (tr.times[1] + tr.times[2]));
    CHECK(max_diff(mid, 0.5 * (tr.fields[1] + tr.fields[2])) < 1e-15);
    CHECK_THROWS_AS(static_cast<void>(tr.at(0.02)), Error);
    const double x = xbeta_norm(tr, 1.5, 0.375, {3.0, 0.5, 0.0}, BallFamily::dyadic(g));
    CHECK(std::isfinite(x));
    CHECK(x > 0.0);
    CHECK_THROWS_AS(xbeta_norm(Trajectory{}, 1.5, 0.375, {3.0, 0.5, 0.0}, BallFamily::dyadic(g)), Error);
}

TEST_CASE("parameter validation") {
    const Grid g{2, 16, 1.0};
    const InitialData d{Field(g), Field(g), DataKind::zero, 0.0};
    CHECK_THROWS_AS(solve(d, {2.5, 3.0, 1.5, 0.0, 0.0}, {}, {}), Error);
    CHECK_THROWS_AS(solve(d, {1.5, 3.0, 1.5, 0.0, 0.0}, {0.0, 0.0, 4, 1.0}, {}), Error);
    CHECK_THROWS_AS(ProblemSpec({1.5, 3.0, 1.4, 0.0, 0.0}).validate(true), Error);
    CHECK_NOTHROW(ProblemSpec({1.5, 3.0, 1.5, 0.0, 0.0}).validate(true));
}
