#include <cmath>

#include "doctest.h"
#include "fracflow/errors.hpp"
#include "fracflow/initial_data.hpp"

using namespace fracflow;

namespace {

// Mass of the sampled field over the symmetric lattice block (row/column 0 sits on the
// box edge and is dropped), against the integral of |x|^{-1} over the matching square.
double relative_mass_error(const Field& f, const Grid& g, double amplitude) {
    const double h = g.spacing();
    double sum = 0;
    for (int i = 1; i < g.points; ++i)
        for (int j = 1; j < g.points; ++j) sum += f.at(i, j);
    sum *= h * h;
    const double S = (g.points / 2 - 0.5) * h;
    const double exact = amplitude * 8.0 * S * std::log(1.0 + std::sqrt(2.0));
    return std::abs(sum - exact) / exact;
}

}  // namespace

TEST_CASE("generators") {
    const Grid g{2, 32, 2.0};
    SUBCASE("homogeneous profile") {
        const Field f = make_field({DataKind::homogeneous_radial, 2.0, 1.0}, g);
        const double h = g.spacing();
        CHECK(f.at(16, 16) == doctest::Approx(2.0 / h));
        CHECK(f.at(20, 16) == doctest::Approx(2.0 / std::sqrt(16 * h * h + h * h)));
    }
    SUBCASE("harmonic profile is odd under reflection for odd order") {
        const Field f = make_field({DataKind::harmonic_homogeneous, 1.0, 1.0, 1}, g);
        for (int i = 1; i < 32; ++i)
            for (int j = 0; j < 32; ++j) CHECK(f.at(i, j) == doctest::Approx(-f.at(32 - i, j)));
    }
    SUBCASE("gaussian peak") {
        DataSpec s{DataKind::gaussian, 3.0};
        s.width = 0.2;
        const Field f = make_field(s, g);
        CHECK(f.at(16, 16) == doctest::Approx(3.0));
    }
    SUBCASE("envelope") {
        DataSpec s{DataKind::homogeneous_radial, 1.0, 0.0};
        s.envelope = 0.5;
        const Field f = make_field(s, g);
        CHECK(f.at(16, 16) == doctest::Approx(1.0));
        CHECK(f.at(24, 16) == doctest::Approx(std::exp(-1.0)));
        s.envelope = -1.0;
        CHECK_THROWS_AS(make_field(s, g), Error);
    }
    SUBCASE("names round trip") {
        for (auto k : {DataKind::zero, DataKind::homogeneous_radial, DataKind::harmonic_homogeneous,
                       DataKind::gaussian, DataKind::file})
            CHECK(data_kind_from_string(to_string(k)) == k);
        CHECK_THROWS_AS(data_kind_from_string("spline"), Error);
    }
    CHECK(phi_degree(3.0) == doctest::Approx(1.0));
    CHECK(psi_degree(1.5, 3.0) == doctest::Approx(1.0 + 4.0 / 3.0));
}

TEST_CASE("mass-matched mollifier") {
    // Roots of the lattice defect computed independently with scipy at K = 1500.
    CHECK(mass_matched_factor(1.0, 2) == doctest::Approx(0.24065).epsilon(1e-3));
    CHECK(mass_matched_factor(0.75, 2) == doctest::Approx(0.2384).epsilon(1e-3));
    CHECK(mass_matched_factor(1.5, 2) == doctest::Approx(0.21116).epsilon(1e-3));
    CHECK_THROWS_AS(mass_matched_factor(2.0, 2), Error);
    CHECK_THROWS_AS(mass_matched_factor(0.5, 3), Error);

    for (int M : {128, 256}) {
        const Grid g{2, M, 1.0};
        DataSpec plain{DataKind::homogeneous_radial, 0.5, 1.0};
        DataSpec matched = plain;
        matched.mass_matched = true;
        const double e_plain = relative_mass_error(make_field(plain, g), g, 0.5);
        const double e_matched = relative_mass_error(make_field(matched, g), g, 0.5);
        CAPTURE(M);
        CHECK(e_plain > 1e-3);
        CHECK(e_matched < 1e-4);
        CHECK(resolve_epsilon(matched, g) == doctest::Approx(0.24065 * g.spacing()).epsilon(1e-3));
    }
    // An explicit width wins over the matching request.
    DataSpec fixed{DataKind::homogeneous_radial, 1.0, 1.0};
    fixed.mass_matched = true;
    fixed.epsilon_m = 0.3;
    CHECK(resolve_epsilon(fixed, Grid{2, 16, 1.0}) == 0.3);
}
