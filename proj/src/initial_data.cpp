#include "fracflow/initial_data.hpp"

#include <cmath>
#include <complex>
#include <cstdint>

#include <boost/math/tools/roots.hpp>

#include "fracflow/errors.hpp"
#include "fracflow/fhf.hpp"
#include "fracflow/quadrature.hpp"

namespace fracflow {

const char* to_string(DataKind kind) noexcept {
    switch (kind) {
        case DataKind::zero: return "zero";
        case DataKind::homogeneous_radial: return "homogeneous_radial";
        case DataKind::harmonic_homogeneous: return "harmonic_homogeneous";
        case DataKind::gaussian: return "gaussian";
        case DataKind::file: return "file";
    }
    return "?";
}

DataKind data_kind_from_string(const std::string& name) {
    for (DataKind k : {DataKind::zero, DataKind::homogeneous_radial, DataKind::harmonic_homogeneous,
                       DataKind::gaussian, DataKind::file})
        if (name == to_string(k)) return k;
    raise(ErrorKind::schema, "unknown data kind '" + name + "'");
}

namespace {

template <class Fn>
Field sample(const Grid& grid, Fn&& fn) {
    Field f(grid);
    const int jmax = grid.dim == 1 ? 1 : grid.points;
    for (int i = 0; i < grid.points; ++i)
        for (int j = 0; j < jmax; ++j)
            f.at(i, j) = fn(grid.coordinate(i), grid.dim == 1 ? 0.0 : grid.coordinate(j));
    return f;
}

// Lattice sum over |n|_inf <= K minus the integral of |x|^{-d} over the cell union.
// Midpoint-rule defects decay like |n|^{-d-2}, so K of a few hundred pins a to ~1e-5.
double mass_defect(double a, double d, int dim) {
    constexpr int K = 400;
    const double S = K + 0.5;
    if (dim == 1) {
        double sum = std::pow(a * a, -0.5 * d);
        for (int n = 1; n <= K; ++n) sum += 2.0 * std::pow(double(n) * n + a * a, -0.5 * d);
        return sum - 2.0 * std::pow(S, 1.0 - d) / (1.0 - d);
    }
    // Eighth of the square: 0 <= j <= i, with multiplicities.
    double sum = std::pow(a * a, -0.5 * d);
    for (int i = 1; i <= K; ++i)
        for (int j = 0; j <= i; ++j) {
            const int mult = (j == 0 || j == i) ? 4 : 8;
            sum += mult * std::pow(double(i) * i + double(j) * j + a * a, -0.5 * d);
        }
    QuadratureSpec q;
    q.rel_tol = 1e-13;
    const double wedge = integrate([&](double th) { return std::pow(S / std::cos(th), 2.0 - d); },
                                   0.0, std::acos(-1.0) / 4, q).value;
    return sum - 8.0 * wedge / (2.0 - d);
}

}  // namespace

double mass_matched_factor(double degree, int dim) {
    require(dim == 1 || dim == 2, ErrorKind::domain, "mass matching supports dim 1 or 2");
    require(degree > 0 && degree < dim, ErrorKind::domain,
            "mass matching needs 0 < degree < dim (locally integrable profile)");
    // The defect falls monotonically in a; the n = 0 term alone dominates for small a.
    auto f = [&](double a) { return mass_defect(a, degree, dim); };
    double lo = 1e-3, hi = 2.0;
    require(f(lo) > 0 && f(hi) < 0, ErrorKind::domain, "mass-matched width not bracketed");
    std::uintmax_t iters = 80;
    auto r = boost::math::tools::toms748_solve(f, lo, hi, boost::math::tools::eps_tolerance<double>(40), iters);
    return 0.5 * (r.first + r.second);
}

double resolve_epsilon(const DataSpec& spec, const Grid& grid) {
    if (spec.epsilon_m >= 0) return spec.epsilon_m;
    if (spec.mass_matched && spec.kind == DataKind::homogeneous_radial)
        return mass_matched_factor(spec.degree, grid.dim) * grid.spacing();
    return grid.spacing();
}

namespace {

Field make_profile(const DataSpec& spec, const Grid& grid);

}  // namespace

Field make_field(const DataSpec& spec, const Grid& grid) {
    require(spec.envelope >= 0, ErrorKind::domain, "envelope width must be >= 0");
    Field f = make_profile(spec, grid);
    if (spec.envelope > 0 && spec.kind != DataKind::file) {
        const double w2 = spec.envelope * spec.envelope;
        const Field env = sample(grid, [&](double x, double y) { return std::exp(-(x * x + y * y) / w2); });
        for (std::size_t k = 0; k < f.size(); ++k) f[k] *= env[k];
    }
    return f;
}

namespace {

Field make_profile(const DataSpec& spec, const Grid& grid) {
    grid.validate();
    const double eps = resolve_epsilon(spec, grid);
    const double a = spec.amplitude;
    switch (spec.kind) {
        case DataKind::zero:
            return Field(grid);
        case DataKind::homogeneous_radial:
            require(spec.degree >= 0, ErrorKind::domain, "homogeneity degree must be >= 0");
            return sample(grid, [&](double x, double y) {
                return a * std::pow(x * x + y * y + eps * eps, -0.5 * spec.degree);
            });
        case DataKind::harmonic_homogeneous:
            require(spec.harmonic >= 0, ErrorKind::domain, "harmonic order must be >= 0");
            require(grid.dim == 2, ErrorKind::domain, "harmonic data needs a 2D grid");
            return sample(grid, [&](double x, double y) {
                const double y_k = std::pow(std::complex<double>(x, y), spec.harmonic).real();
                return a * y_k * std::pow(x * x + y * y + eps * eps, -0.5 * (spec.degree + spec.harmonic));
            });
        case DataKind::gaussian:
            require(spec.width > 0, ErrorKind::domain, "gaussian width must be positive");
            return sample(grid, [&](double x, double y) {
                const double dx = x - spec.center_x, dy = grid.dim == 1 ? 0.0 : y - spec.center_y;
                return a * std::exp(-(dx * dx + dy * dy) / (spec.width * spec.width));
            });
        case DataKind::file: {
            Field f = read_fhf(spec.path);
            require(f.grid() == grid, ErrorKind::shape_mismatch,
                    "field in " + spec.path + " does not match the configured grid");
            f *= a;
            return f;
        }
    }
    raise(ErrorKind::domain, "unhandled data kind");
}

}  // namespace

InitialData make_initial_data(const DataSpec& phi, const DataSpec& psi, const Grid& grid) {
    InitialData d{make_field(phi, grid), make_field(psi, grid), phi.kind, 0.0};
    if (d.kind == DataKind::zero) d.kind = psi.kind;
    const DataSpec& ref = phi.kind == DataKind::zero ? psi : phi;
    d.epsilon_m = resolve_epsilon(ref, grid);
    return d;
}

double phi_degree(double rho) { return 2.0 / (rho - 1.0); }

double psi_degree(double alpha, double rho) { return 2.0 / (rho - 1.0) + 2.0 / alpha; }

}  // namespace fracflow
