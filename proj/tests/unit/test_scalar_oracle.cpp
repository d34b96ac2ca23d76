#include <cmath>

#include "doctest.h"
#include "fracflow/errors.hpp"
#include "fracflow/scalar_oracle.hpp"

using namespace fracflow;

TEST_CASE("zero forcing leaves the two-term linear formula") {
    const ScalarProblem p{1.5, 2.0, 0.7, -0.4};
    const std::vector<double> ts{0.0, 0.3, 1.0, 2.5};
    const auto r = scalar_oracle(p, [](double) { return 0.0; }, ts, 1.0 / 64);
    for (std::size_t i = 0; i < ts.size(); ++i) {
        CHECK(r.form_a[i] == scalar_linear(p, ts[i]));
        CHECK(r.form_b[i] == scalar_linear(p, ts[i]));
    }
    CHECK(r.max_deviation == 0.0);
}

TEST_CASE("constant forcing without damping") {
    const ScalarProblem p{1.5, 0.0, 0.0, 0.0};
    const auto r = scalar_oracle(p, [](double) { return 1.0; }, {0.5, 1.0, 2.0}, 1.0 / 128);
    const auto fine = scalar_oracle(p, [](double) { return 1.0; }, {0.5, 1.0, 2.0}, 1.0 / 256);
    for (std::size_t i = 0; i < r.times.size(); ++i) {
        const double exact = std::pow(r.times[i], 1.5) / std::tgamma(2.5);
        CHECK(r.form_b[i] == doctest::Approx(exact).epsilon(1e-11));
        // the inner integral s^{alpha-1}/Gamma(alpha) is not linear between nodes
        CHECK(std::abs(fine.form_a[i] - exact) <= 0.6 * std::abs(r.form_a[i] - exact));
        CHECK(r.form_a[i] == doctest::Approx(exact).epsilon(1e-3));
    }
}

TEST_CASE("nested and single-kernel forms converge to each other") {
    for (double alpha : {1.25, 1.5, 1.75}) {
        const ScalarProblem p{alpha, 1.0, 0.3, -0.2};
        double prev = 0.0;
        for (double res : {1.0 / 512, 1.0 / 1024, 1.0 / 2048}) {
            const auto r = scalar_oracle(p, [](double s) { return std::sin(s); }, {0.25, 1.0, 2.0}, res);
            if (prev > 0.0) CHECK(r.max_deviation / prev <= 0.6);
            prev = r.max_deviation;
        }
        CHECK(prev <= 1e-4);
    }
}

TEST_CASE("nonlinear reference") {
    // linear f reduces to the damped linear problem: d^a u = -lambda u
    const ScalarProblem p{1.5, 0.0, 1.0, 0.0};
    const auto u = scalar_reference(p, [](double v) { return -2.0 * v; }, 1.0, 1024);
    const ScalarProblem damped{1.5, 2.0, 1.0, 0.0};
    CHECK(u.back() == doctest::Approx(scalar_linear(damped, 1.0)).epsilon(1e-6));
    const auto u2 = scalar_reference(p, [](double v) { return -2.0 * v; }, 1.0, 2048);
    CHECK(std::abs(u2.back() - scalar_linear(damped, 1.0)) < std::abs(u.back() - scalar_linear(damped, 1.0)));
}

TEST_CASE("beta identity") {
    const auto r0 = beta_identity_check(0.0, 0.0, 0.0, 1.7);
    CHECK(r0.numeric == doctest::Approx(0.5 * 1.7 * 1.7).epsilon(1e-12));
    const auto r = beta_identity_check(0.5, 0.3, 0.2, 1.0);
    CHECK(r.residual <= 1e-6);
    const auto r2 = beta_identity_check(0.5, 0.3, 0.2, 2.0);
    CHECK(r2.numeric / r.numeric == doctest::Approx(std::pow(2.0, 1.0)).epsilon(1e-8));
    CHECK(beta_identity_check(-0.5, 0.9, 0.6, 0.3).residual <= 1e-6);
    CHECK_THROWS_AS(beta_identity_check(1.0, 0.0, 0.0, 1.0), Error);
}
