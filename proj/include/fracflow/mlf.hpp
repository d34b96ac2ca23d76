#pragma once

#include <complex>

#include "fracflow/quadrature.hpp"

namespace fracflow {

using cplx = std::complex<double>;

/// Parameters of E_{alpha,beta}(z) = sum_k z^k / Gamma(alpha k + beta).
struct MLParams {
    double alpha = 1.5;
    double beta_ml = 1.0;

    void validate() const;
    /// 1 < alpha < 2 and 1 <= beta_ml <= 2.
    [[nodiscard]] bool in_decomposition_domain() const noexcept;
};

enum class MLMethod { series, decomposition };

const char* to_string(MLMethod m) noexcept;

struct MLValue {
    cplx value;
    MLMethod method = MLMethod::series;
    double est_error = 0.0;
    bool converged = true;
    int terms = 0;
    bool extended_precision = false;
};

/// E_{alpha,beta}(-z) = omega(z) + l(z) for real z > 0.
struct MLDecomposition {
    cplx omega;
    cplx l_part;
    cplx a_alpha;
    cplx b_alpha;
};

/// Sign convention for the kernel H_{alpha,beta}.
enum class KernelSign {
    literal,     ///< the closed-form expression as written
    arbitrated,  ///< the orientation reproducing the series: l(z) = int H e^{-(zs)^{1/alpha}} ...
};

/// Terms are exp(k ln|z| - lnGamma(alpha k + beta)) with the phase carried
/// separately. When cancellation would eat more than the requested accuracy
/// the sum is redone in 50 or 100 digit binary floating point.
MLValue ml_series(const MLParams& params, cplx z, double rel_tol = 1e-15, int max_terms = 4000);

cplx ml_omega(const MLParams& params, double z);

double ml_kernel_H(const MLParams& params, double s, KernelSign sign = KernelSign::literal);

struct MLIntegralPart {
    double value = 0.0;
    double abs_error = 0.0;
};

/// Integral part by the e^{-t} representation (primary route).
MLIntegralPart ml_l(const MLParams& params, double z, const QuadratureSpec& quad = {});

/// Integral part through the kernel H in the substituted variable s.
MLIntegralPart ml_l_kernel_route(const MLParams& params, double z, const QuadratureSpec& quad = {});

MLDecomposition ml_decompose(const MLParams& params, double z, const QuadratureSpec& quad = {});

struct MLEvalOptions {
    double z_switch = 10.0;
    double series_rel_tol = 1e-15;
    int max_terms = 4000;
    QuadratureSpec quad{QuadratureSpec::Scheme::adaptive_split, 1.0, 1e-13, 4000, 0.0};
};

MLValue ml_eval(const MLParams& params, cplx z, const MLEvalOptions& options = {});

/// Real-axis convenience: E_{alpha,beta}(x).
double ml_real(const MLParams& params, double x, const MLEvalOptions& options = {});

/// Signed integral of the arbitrated kernel H_{alpha,1} over (0, inf).
double ml_relaxation_mass(double alpha, const QuadratureSpec& quad = {});

double ml_derivative_residual(double alpha, double lambda, double t, double h);

double ml_integral_residual(double alpha, double lambda, double t, const QuadratureSpec& quad = {});

}  // namespace fracflow
