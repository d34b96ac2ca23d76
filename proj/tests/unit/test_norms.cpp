#include <cmath>
#include <numbers>
#include <random>

#include "doctest.h"
#include "fracflow/errors.hpp"
#include "fracflow/norms.hpp"
#include "morrey_oracle.hpp"

using namespace fracflow;
using std::numbers::pi;

namespace {

Field random_field(const Grid& g, std::mt19937_64& rng) {
    std::normal_distribution<double> n(0.0, 1.0);
    Field f(g);
    for (double& v : f.values()) v = n(rng);
    return f;
}

template <class F>
Field sample(const Grid& g, F&& fn) {
    Field f(g);
    for (int i = 0; i < g.points; ++i) {
        if (g.dim == 1) {
            f.at(i) = fn(g.coordinate(i), 0.0);
            continue;
        }
        for (int j = 0; j < g.points; ++j) f.at(i, j) = fn(g.coordinate(i), g.coordinate(j));
    }
    return f;
}

}  // namespace

TEST_CASE("summed-area norm matches brute force on every cube") {
    std::mt19937_64 rng(17);
    for (const Grid g : {Grid{2, 16, 1.0}, Grid{1, 32, 2.0}}) {
        const Field f = random_field(g, rng);
        for (const NormSpec spec : {NormSpec{1.5, 0.5, 0.0}, NormSpec{3.0, 0.0, 0.0}}) {
            if (spec.mu >= g.dim) continue;
            const auto got = morrey_norm(f, spec, BallFamily::full_lattice(g));
            CHECK(got.value == doctest::Approx(oracle::brute_morrey(f, spec.p, spec.mu)).epsilon(1e-12));
        }
    }
}

TEST_CASE("Morrey norm anchors") {
    const Grid g{2, 32, 2.0};
    Field c(g);
    for (double& v : c.values()) v = 3.0;
    BallFamily largest;
    largest.center_stride = 4;
    largest.radii_cells = {g.points / 2};
    // constant: c L^{N/p}
    CHECK(morrey_norm(c, {2.0, 0.0, 0.0}, largest).value == doctest::Approx(3.0 * 2.0).epsilon(1e-14));

    // the single largest cube with mu = 0 is the discrete L^p norm of the box
    std::mt19937_64 rng(5);
    const Field f = random_field(g, rng);
    double lp = 0.0;
    for (double v : f.values()) lp += std::pow(std::abs(v), 3.0);
    lp = std::pow(lp * g.cell_volume(), 1.0 / 3.0);
    BallFamily one;
    one.center_stride = g.points;
    one.radii_cells = {g.points / 2};
    CHECK(morrey_norm(f, {3.0, 0.0, 0.0}, one).value == doctest::Approx(lp).epsilon(1e-13));

    // a one-cell spike of height h^{-N/p}
    const double p = 2.0, mu = 1.0;
    Field spike(g);
    spike.at(7, 20) = std::pow(g.spacing(), -2.0 / p);
    const auto r = morrey_norm(spike, {p, mu, 0.0}, BallFamily::full_lattice(g));
    CHECK(r.value == doctest::Approx(std::pow(g.spacing(), -mu / p)).epsilon(1e-12));
    CHECK(r.argmax_radius == doctest::Approx(g.spacing()));
    CHECK(r.argmax_center[0] == doctest::Approx(g.coordinate(7)));
    CHECK(r.argmax_center[1] == doctest::Approx(g.coordinate(20)));

    BallFamily empty;
    CHECK_THROWS_AS(morrey_norm(f, {2.0, 0.0, 0.0}, empty), Error);
    CHECK_THROWS_AS(morrey_norm(f, {2.0, 2.0, 0.0}, BallFamily::dyadic(g)), Error);
}

TEST_CASE("homogeneous profile approaches its plateau at the cell-resolution rate") {
    const Grid g{2, 512, 1.0};
    const double d = 1.0, p = 1.5, mu = 2.0 - d * p;
    const double eps = g.spacing();
    const Field f = sample(g, [&](double x, double y) { return std::pow(x * x + y * y + eps * eps, -d / 2); });
    const int c = g.points / 2;
    std::vector<double> vals;
    for (int k = 8; k <= 64; k *= 2) vals.push_back(oracle::cube_value(f, p, mu, c, c, k));
    // the smoothed core costs O(k^{-1/2}) relative, so increments shrink by 2^{-1/2}
    for (std::size_t i = 2; i < vals.size(); ++i) {
        const double ratio = (vals[i] - vals[i - 1]) / (vals[i - 1] - vals[i - 2]);
        CHECK(ratio == doctest::Approx(std::sqrt(0.5)).epsilon(0.1));
    }
}

TEST_CASE("norm axioms and family monotonicity") {
    std::mt19937_64 rng(23);
    const Grid g{2, 32, 1.0};
    const NormSpec spec{1.5, 0.5, 0.0};
    const BallFamily fam = BallFamily::dyadic(g);
    for (int trial = 0; trial < 10; ++trial) {
        const Field f = random_field(g, rng);
        const Field h = random_field(g, rng);
        const double nf = morrey_norm(f, spec, fam).value;
        const double nh = morrey_norm(h, spec, fam).value;
        CHECK(morrey_norm(-2.5 * f, spec, fam).value == doctest::Approx(2.5 * nf).epsilon(1e-13));
        CHECK(morrey_norm(f + h, spec, fam).value <= nf + nh);
        CHECK(morrey_norm(f, spec, BallFamily::full_lattice(g)).value >= nf);
        BallFamily fewer = fam;
        fewer.radii_cells.pop_back();
        CHECK(morrey_norm(f, spec, fewer).value <= nf);
    }
}

TEST_CASE("Sobolev-Morrey norms") {
    const Grid g{2, 32, 1.0};
    std::mt19937_64 rng(2);
    const Field f = random_field(g, rng);
    const BallFamily fam = BallFamily::dyadic(g);
    CHECK(sobolev_morrey_norm(f, {2.0, 0.5, 0.0}, fam).value == morrey_norm(f, {2.0, 0.5, 0.0}, fam).value);
    const Field mode = sample(g, [](double x, double y) { return std::cos(2 * pi * (3 * x + y)); });
    const Field rotated = sample(g, [](double x, double y) { return -std::sin(2 * pi * (3 * x + y)); });
    const double factor = 2 * pi * std::sqrt(10.0);
    // riesz(1) of cos is |xi| cos, the pi/2-rotated mode has the same Morrey norm profile
    CHECK(sobolev_morrey_norm(mode, {2.0, 0.5, 1.0}, fam).value ==
          doctest::Approx(factor * morrey_norm(mode, {2.0, 0.5, 0.0}, fam).value).epsilon(1e-10));
    CHECK(morrey_norm(rotated, {2.0, 0.0, 0.0}, BallFamily::full_lattice(g)).value ==
          doctest::Approx(morrey_norm(mode, {2.0, 0.0, 0.0}, BallFamily::full_lattice(g)).value).epsilon(1e-10));
}

TEST_CASE("dilation identity") {
    const NormSpec spec{1.5, 0.5, 0.0};
    const Grid g{2, 64, 8.0};
    const Field f = sample(g, [](double x, double y) { return std::exp(-(x * x + y * y)); });
    CHECK(scaling_residual(f, 1.0, spec) == 0.0);
    CHECK_THROWS_AS(scaling_residual(f, -1.0, spec), Error);
    auto gaussian_residual = [&](int m) {
        const Grid gm{2, m, 8.0};
        const Field fm = sample(gm, [](double x, double y) { return std::exp(-(x * x + y * y)); });
        return scaling_residual(fm, 2.0, spec);
    };
    const double r64 = gaussian_residual(64);
    const double r128 = gaussian_residual(128);
    CHECK(r128 <= 0.02);
    CHECK(r128 <= 0.7 * r64);
}

TEST_CASE("Hoelder inequality holds on every family") {
    std::mt19937_64 rng(99);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    const Grid g{2, 32, 1.0};
    const BallFamily fam = BallFamily::dyadic(g, 2);
    for (int trial = 0; trial < 30; ++trial) {
        const Field f = random_field(g, rng);
        const Field h = random_field(g, rng);
        const double p1 = 2.0 + 4.0 * u(rng), p2 = 2.0 + 4.0 * u(rng);
        const double p3 = 1.0 / (1.0 / p1 + 1.0 / p2);
        const double mu1 = 1.9 * u(rng), mu2 = 1.9 * u(rng);
        const double mu3 = p3 * (mu1 / p1 + mu2 / p2);
        CHECK(holder_residual(f, h, p1, p2, p3, mu1, mu2, mu3, fam) == 0.0);
    }
    const Field f = random_field(g, rng);
    CHECK(holder_residual(f, f, 4.0, 4.0, 2.0, 0.5, 0.5, 0.5, fam) == 0.0);
    CHECK_THROWS_AS(holder_residual(f, f, 4.0, 4.0, 3.0, 0.5, 0.5, 0.5, fam), Error);
}
