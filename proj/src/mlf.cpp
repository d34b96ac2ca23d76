#include "fracflow/mlf.hpp"

#include <boost/math/special_functions/gamma.hpp>
#include <boost/math/special_functions/sin_pi.hpp>
#include <boost/math/special_functions/cos_pi.hpp>
#include <boost/multiprecision/cpp_bin_float.hpp>
#include <cmath>
#include <limits>
#include <map>
#include <memory>
#include <mutex>
#include <numbers>
#include <vector>

#include "fracflow/errors.hpp"

namespace fracflow {
namespace {

using boost::math::cos_pi;
using boost::math::sin_pi;
using Real50 = boost::multiprecision::cpp_bin_float_50;
using Real100 = boost::multiprecision::cpp_bin_float_100;

constexpr double kPi = std::numbers::pi;
constexpr double kEps = std::numeric_limits<double>::epsilon();
// relative accuracy the double-precision pass must certify before it is trusted
constexpr double kDoubleTarget = 1e-14;

// Both closed-form integral representations come out with the opposite
// orientation to E - omega; this factor is fixed by agreement with the series.
constexpr double kIntegralOrientation = -1.0;

bool is_integer(double v) { return v == std::floor(v); }

// 1/Gamma(alpha k + beta) tables in extended precision, grown on demand and
// shared between calls. Snapshots are immutable once published.
template <class Real>
class InverseGammaCache {
public:
    std::shared_ptr<const std::vector<Real>> get(double alpha, double beta, std::size_t n) {
        std::lock_guard lock(mutex_);
        auto& slot = tables_[{alpha, beta}];
        if (slot && slot->size() >= n) return slot;
        auto grown = std::make_shared<std::vector<Real>>(slot ? *slot : std::vector<Real>{});
        const Real a(alpha);
        const Real b(beta);
        const bool exact = is_integer(alpha) && is_integer(beta);
        for (std::size_t k = grown->size(); k < n; ++k) {
            if (exact && k > 0) {
                // Gamma(alpha k + beta) = Gamma(alpha (k-1) + beta) * prod of the alpha steps
                Real v = grown->back();
                const Real start = a * static_cast<double>(k - 1) + b;
                for (int i = 0; i < static_cast<int>(alpha); ++i) v /= start + i;
                grown->push_back(v);
            } else {
                const Real x = a * static_cast<double>(k) + b;
                grown->push_back(exp(-boost::math::lgamma(x)));
            }
        }
        slot = grown;
        return slot;
    }

private:
    std::mutex mutex_;
    std::map<std::pair<double, double>, std::shared_ptr<const std::vector<Real>>> tables_;
};

template <class Real>
InverseGammaCache<Real>& cache() {
    static InverseGammaCache<Real> instance;
    return instance;
}

struct SeriesSum {
    cplx value;
    double sum_abs = 0.0;
    double last_term = 0.0;
    int terms = 0;
    bool converged = false;
};

SeriesSum series_double(const MLParams& p, cplx z, double rel_tol, int max_terms) {
    SeriesSum out;
    const double log_abs = std::log(std::abs(z));
    const bool real_axis = z.imag() == 0.0;
    const double theta = std::arg(z);
    const bool negative = real_axis && z.real() < 0.0;
    double prev_log = -std::numeric_limits<double>::infinity();
    double max_term = 0.0;
    cplx sum = 0.0;
    for (int k = 0; k < max_terms; ++k) {
        const double log_mag = k * log_abs - std::lgamma(p.alpha * k + p.beta_ml);
        const double mag = std::exp(log_mag);
        cplx term;
        if (real_axis) {
            term = (negative && (k % 2 == 1)) ? -mag : mag;
        } else {
            term = std::polar(mag, k * theta);
        }
        sum += term;
        out.sum_abs += mag;
        max_term = std::max(max_term, mag);
        out.last_term = mag;
        out.terms = k + 1;
        const bool decreasing = log_mag < prev_log;
        prev_log = log_mag;
        if (k > 0 && decreasing &&
            (mag <= rel_tol * std::abs(sum) || mag <= 1e-3 * kEps * max_term)) {
            out.converged = true;
            break;
        }
        if (k + 1 == max_terms && !decreasing) {
            raise(ErrorKind::non_convergent,
                  "series terms still growing at max_terms; last term magnitude " +
                      std::to_string(mag));
        }
    }
    out.value = sum;
    return out;
}

template <class Real>
SeriesSum series_extended(const MLParams& p, cplx z, double rel_tol, int max_terms, int digits) {
    SeriesSum out;
    const bool real_axis = z.imag() == 0.0;
    const Real zr(z.real());
    const Real zi(z.imag());
    Real pr = 1;  // z^k
    Real pi = 0;
    Real sr = 0;
    Real si = 0;
    double max_term = 0.0;
    double prev_mag = -1.0;
    const double floor = std::pow(10.0, -digits);
    std::size_t chunk = 128;
    auto table = cache<Real>().get(p.alpha, p.beta_ml, chunk);
    for (int k = 0; k < max_terms; ++k) {
        if (static_cast<std::size_t>(k) >= table->size()) {
            // The shared table may already exceed the local chunk; grow past its real end.
            chunk = 2 * table->size();
            table = cache<Real>().get(p.alpha, p.beta_ml, chunk);
        }
        const Real& g = (*table)[k];
        double mag = 0.0;
        if (real_axis) {
            const Real tr = pr * g;
            sr += tr;
            mag = std::abs(static_cast<double>(tr));
            pr *= zr;
        } else {
            const Real tr = pr * g;
            const Real ti = pi * g;
            sr += tr;
            si += ti;
            mag = std::hypot(static_cast<double>(tr), static_cast<double>(ti));
            const Real nr = pr * zr - pi * zi;
            pi = pr * zi + pi * zr;
            pr = nr;
        }
        max_term = std::max(max_term, mag);
        out.sum_abs += mag;
        out.last_term = mag;
        out.terms = k + 1;
        const bool decreasing = prev_mag >= 0.0 && mag < prev_mag;
        prev_mag = mag;
        if (k > 0 && decreasing) {
            const double abs_sum = std::hypot(static_cast<double>(sr), static_cast<double>(si));
            if (mag <= rel_tol * 1e-2 * abs_sum || mag <= floor * max_term) {
                out.converged = true;
                break;
            }
        }
    }
    out.value = cplx(static_cast<double>(sr), static_cast<double>(si));
    return out;
}

double omega_real_scale(const MLParams& p, double z) {
    return std::pow(z, (1.0 - p.beta_ml) / p.alpha) / p.alpha;
}

void require_decomposition(const MLParams& p, double z) {
    require(p.in_decomposition_domain(), ErrorKind::domain,
            "decomposition needs 1 < alpha < 2 and 1 <= beta_ml <= 2");
    require(z > 0.0 && std::isfinite(z), ErrorKind::domain, "decomposition needs real z > 0");
}

}  // namespace

void MLParams::validate() const {
    require(alpha > 0.0 && alpha <= 2.0, ErrorKind::domain, "alpha must lie in (0, 2]");
    require(beta_ml > 0.0, ErrorKind::domain, "beta_ml must be positive");
}

bool MLParams::in_decomposition_domain() const noexcept {
    return alpha > 1.0 && alpha < 2.0 && beta_ml >= 1.0 && beta_ml <= 2.0;
}

const char* to_string(MLMethod m) noexcept {
    return m == MLMethod::series ? "series" : "decomposition";
}

MLValue ml_series(const MLParams& params, cplx z, double rel_tol, int max_terms) {
    params.validate();
    require(rel_tol > 0.0, ErrorKind::domain, "rel_tol must be positive");
    require(max_terms >= 1, ErrorKind::domain, "max_terms must be at least 1");
    MLValue out;
    out.method = MLMethod::series;
    if (z == cplx(0.0)) {
        out.value = 1.0 / std::tgamma(params.beta_ml);
        out.terms = 1;
        return out;
    }
    const SeriesSum d = series_double(params, z, rel_tol, max_terms);
    const double magnitude = std::abs(d.value);
    const double double_error = 4.0 * kEps * d.sum_abs;
    if (double_error <= std::max(rel_tol, kDoubleTarget) * magnitude || !std::isfinite(d.sum_abs)) {
        out.value = d.value;
        out.est_error = std::max(double_error, d.converged ? 0.0 : d.last_term);
        out.converged = d.converged;
        out.terms = d.terms;
        return out;
    }
    SeriesSum e = series_extended<Real50>(params, z, rel_tol, max_terms, 48);
    double ext_error = 1e-48 * e.sum_abs * e.terms;
    if (ext_error > rel_tol * std::abs(e.value)) {
        e = series_extended<Real100>(params, z, rel_tol, max_terms, 98);
        ext_error = 1e-98 * e.sum_abs * e.terms;
    }
    out.value = e.value;
    out.extended_precision = true;
    out.terms = e.terms;
    out.converged = e.converged;
    out.est_error = std::max(ext_error, kEps * std::abs(e.value));
    if (!e.converged) out.est_error = std::max(out.est_error, e.last_term);
    return out;
}

cplx ml_omega(const MLParams& params, double z) {
    params.validate();
    require_decomposition(params, z);
    const double root = std::pow(z, 1.0 / params.alpha);
    const double theta = (1.0 - params.beta_ml) * kPi / params.alpha;
    const cplx a = std::polar(root, kPi / params.alpha);
    const cplx v = std::exp(a + cplx(0.0, theta));
    // b = conj(a), so the second exponential is the conjugate of the first
    return omega_real_scale(params, z) * (v + std::conj(v));
}

double ml_kernel_H(const MLParams& params, double s, KernelSign sign) {
    params.validate();
    require(s > 0.0, ErrorKind::domain, "kernel argument must be positive");
    const double a = params.alpha;
    const double b = params.beta_ml;
    const double num = sin_pi(a - b) - s * sin_pi(b);
    const double den = s * s + 2.0 * s * cos_pi(a) + 1.0;
    const double v = num / den * std::pow(s, (1.0 - b) / a) / (a * kPi);
    return sign == KernelSign::literal ? v : kIntegralOrientation * v;
}

MLIntegralPart ml_l(const MLParams& params, double z, const QuadratureSpec& quad) {
    params.validate();
    require_decomposition(params, z);
    quad.validate();
    const double a = params.alpha;
    const double b = params.beta_ml;
    const double s_ab = sin_pi(a - b);
    const double s_b = sin_pi(b);
    const double c_a = cos_pi(a);
    // integrand without the t^{alpha-beta} factor
    auto g = [=](double t) {
        const double ta = std::pow(t, a);
        const double den = ta * ta + 2.0 * ta * z * c_a + z * z;
        return std::exp(-t) * (z * s_ab - ta * s_b) / den;
    };
    const double gam = a - b + 1.0;
    const double split = quad.split_point;
    auto head = [&](double u) { return g(std::pow(u, 1.0 / gam)) / gam; };
    auto tail = [&](double t) { return std::pow(t, a - b) * g(t); };
    const QuadResult h = integrate(head, 0.0, std::pow(split, gam), quad);
    const QuadResult r = integrate_tail(tail, split, quad);
    return {kIntegralOrientation * (h.value + r.value) / kPi, (h.abs_error + r.abs_error) / kPi};
}

MLIntegralPart ml_l_kernel_route(const MLParams& params, double z, const QuadratureSpec& quad) {
    params.validate();
    require_decomposition(params, z);
    quad.validate();
    const double a = params.alpha;
    const double b = params.beta_ml;
    const double e = (1.0 - b) / a;
    const double scale = std::pow(z, e);
    const double s_ab = sin_pi(a - b);
    const double s_b = sin_pi(b);
    const double c_a = cos_pi(a);
    // H without its s^{(1-beta)/alpha} factor, times the exponential
    auto g = [=](double s) {
        const double den = s * s + 2.0 * s * c_a + 1.0;
        return (s_ab - s * s_b) / den / (a * kPi) * std::exp(-std::pow(z * s, 1.0 / a));
    };
    const double split = quad.split_point;
    auto head = [&](double u) { return g(std::pow(u, 1.0 / (e + 1.0))) / (e + 1.0); };
    auto tail = [&](double s) { return std::pow(s, e) * g(s); };
    const QuadResult h = integrate(head, 0.0, std::pow(split, e + 1.0), quad);
    const QuadResult r = integrate_tail(tail, split, quad);
    const double literal = (h.value + r.value) * scale;
    return {kIntegralOrientation * literal, (h.abs_error + r.abs_error) * scale};
}

MLDecomposition ml_decompose(const MLParams& params, double z, const QuadratureSpec& quad) {
    MLDecomposition d;
    d.omega = ml_omega(params, z);
    d.l_part = ml_l(params, z, quad).value;
    const double root = std::pow(z, 1.0 / params.alpha);
    d.a_alpha = std::polar(root, kPi / params.alpha);
    d.b_alpha = std::polar(root, -kPi / params.alpha);
    return d;
}

MLValue ml_eval(const MLParams& params, cplx z, const MLEvalOptions& options) {
    params.validate();
    const bool negative_axis = z.imag() == 0.0 && z.real() < 0.0;
    if (!negative_axis || std::abs(z) <= options.z_switch || !params.in_decomposition_domain()) {
        return ml_series(params, z, options.series_rel_tol, options.max_terms);
    }
    const double x = -z.real();
    const cplx omega = ml_omega(params, x);
    const MLIntegralPart l = ml_l(params, x, options.quad);
    MLValue out;
    out.value = omega + l.value;
    out.method = MLMethod::decomposition;
    out.est_error = l.abs_error + 4.0 * kEps * std::abs(omega);
    return out;
}

double ml_real(const MLParams& params, double x, const MLEvalOptions& options) {
    return ml_eval(params, cplx(x, 0.0), options).value.real();
}

double ml_relaxation_mass(double alpha, const QuadratureSpec& quad) {
    require(alpha > 1.0 && alpha < 2.0, ErrorKind::domain, "relaxation mass needs 1 < alpha < 2");
    const MLParams p{alpha, 1.0};
    auto h = [&](double s) { return s > 0.0 ? ml_kernel_H(p, s, KernelSign::arbitrated) : 0.0; };
    const double peak = std::max(-cos_pi(alpha), 0.0);
    QuadratureSpec q = quad;
    q.split_point = std::max(quad.split_point, 2.0 * peak);
    return integrate_half_line(h, q).value;
}

double ml_derivative_residual(double alpha, double lambda, double t, double h) {
    require(t > 0.0 && h > 0.0 && h < t, ErrorKind::domain, "need 0 < h < t");
    if (lambda == 0.0) return 0.0;
    const MLParams e1{alpha, 1.0};
    const MLParams ea{alpha, alpha};
    auto u = [&](double s) { return ml_real(e1, -lambda * std::pow(s, alpha)); };
    const double fd = (u(t + h) - u(t - h)) / (2.0 * h);
    const double exact =
        -lambda * std::pow(t, alpha - 1.0) * ml_real(ea, -lambda * std::pow(t, alpha));
    return std::abs(fd - exact);
}

double ml_integral_residual(double alpha, double lambda, double t, const QuadratureSpec& quad) {
    require(t > 0.0, ErrorKind::domain, "t must be positive");
    if (lambda == 0.0) return 0.0;
    const MLParams e1{alpha, 1.0};
    const MLParams e2{alpha, 2.0};
    auto f = [&](double s) { return ml_real(e1, -lambda * std::pow(s, alpha)); };
    const QuadResult integral = integrate(f, 0.0, t, quad);
    return std::abs(t * ml_real(e2, -lambda * std::pow(t, alpha)) - integral.value);
}

}  // namespace fracflow
