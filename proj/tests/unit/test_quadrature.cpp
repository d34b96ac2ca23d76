#include <cmath>
#include <numbers>

#include "doctest.h"
#include "fracflow/errors.hpp"
#include "fracflow/quadrature.hpp"

using namespace fracflow;

TEST_CASE("polynomials are integrated exactly") {
    const QuadratureSpec spec;
    const auto r = integrate([](double x) { return x * x * x - 2.0 * x; }, -1.0, 3.0, spec);
    CHECK(r.value == doctest::Approx(12.0).epsilon(1e-14));
    CHECK(r.panels == 1);
}

TEST_CASE("adaptive refinement resolves a peaked integrand") {
    QuadratureSpec spec;
    spec.rel_tol = 1e-12;
    const auto r = integrate([](double x) { return 1.0 / (1e-4 + x * x); }, -1.0, 1.0, spec);
    CHECK(r.value == doctest::Approx(2.0 / 1e-2 * std::atan(1.0 / 1e-2)).epsilon(1e-11));
    CHECK(r.panels > 1);
}

TEST_CASE("half line integral with the reciprocal tail map") {
    const QuadratureSpec spec;
    const auto r = integrate_half_line([](double t) { return std::exp(-t); }, spec);
    CHECK(r.value == doctest::Approx(1.0).epsilon(1e-12));
    const auto c = integrate_half_line([](double t) { return 1.0 / (1.0 + t * t); }, spec);
    CHECK(c.value == doctest::Approx(std::numbers::pi / 2).epsilon(1e-12));
}

TEST_CASE("algebraic endpoint singularities") {
    QuadratureSpec spec;
    spec.rel_tol = 1e-13;
    // int_0^1 x^{-1/2} (1-x)^{-0.3} dx = B(1/2, 0.7)
    const double expected = std::tgamma(0.5) * std::tgamma(0.7) / std::tgamma(1.2);
    const auto r = integrate_algebraic([](double) { return 1.0; }, 0.0, 1.0, -0.5, -0.3, spec);
    CHECK(r.value == doctest::Approx(expected).epsilon(1e-12));
}

TEST_CASE("fixed panel scheme and failure reporting") {
    QuadratureSpec fixed;
    fixed.scheme = QuadratureSpec::Scheme::fixed_panel;
    fixed.max_panels = 8;
    const auto r = integrate([](double x) { return std::sin(x); }, 0.0, std::numbers::pi, fixed);
    CHECK(r.value == doctest::Approx(2.0).epsilon(1e-13));
    CHECK(r.panels == 8);

    QuadratureSpec tight;
    tight.max_panels = 3;
    tight.rel_tol = 1e-14;
    CHECK_THROWS_AS(integrate([](double x) { return std::sqrt(std::abs(x - 0.3)); }, 0.0, 1.0, tight),
                    Error);

    QuadratureSpec bad;
    bad.rel_tol = 0.0;
    CHECK_THROWS_AS(bad.validate(), Error);
}
