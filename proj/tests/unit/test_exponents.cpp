#include "doctest.h"
#include "fracflow/errors.hpp"
#include "fracflow/exponents.hpp"

using namespace fracflow;

TEST_CASE("derived exponents") {
    const ExponentSet e = exponent_report(1.5, 3.0, 1.5, 3.0, 2);
    CHECK(e.q == doctest::Approx(1.5));
    CHECK(e.mu == doctest::Approx(0.5));
    CHECK(e.beta_decay == doctest::Approx(0.375));

    const ExponentSet f = exponent_report(1.2, 4.0, 1.2, 6.0, 2);
    CHECK(f.q == doctest::Approx(1.6));
    CHECK(f.mu == doctest::Approx(1.2));
    CHECK(f.beta_decay == doctest::Approx(0.32));
    CHECK(f.condition("p/r < 1/alpha - 1/2").satisfied);
    CHECK_FALSE(f.condition("(1-p/r) < ((rho-1)/alpha)(1/q - alpha/2)").satisfied);
    CHECK_FALSE(f.warnings.empty());

    // mu = 0 boundary: p = N(rho-1)/2
    const ExponentSet b = exponent_report(1.5, 3.0, 2.0, 4.0, 2);
    CHECK(b.mu == 0.0);
    CHECK_THROWS_AS(exponent_report(1.5, 3.0, 2.5, 4.0, 2), Error);
}

TEST_CASE("extra hypotheses are jointly infeasible") {
    const FeasibilityScan s = scan_hypothesis_feasibility(40, 40, 40);
    CHECK(s.joint_count == 0);
    CHECK(s.first_count > 0);
    CHECK(s.third_count > 0);
    CHECK(s.best_joint_slack < 0.0);
}
