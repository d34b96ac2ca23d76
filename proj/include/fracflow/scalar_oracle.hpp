#pragma once

#include <functional>
#include <vector>

#include "fracflow/quadrature.hpp"

namespace fracflow {

/// Scalar problem d^alpha u = -lambda u + f, u(0) = u0, u'(0) = u1.
struct ScalarProblem {
    double alpha = 1.5;
    double lambda = 1.0;
    double u0 = 0.0;
    double u1 = 0.0;
};

struct ScalarOracleResult {
    std::vector<double> times;
    /// Nested form: int G_{alpha,1}(t-s) int r_alpha(s-tau) f(tau) dtau ds, with
    /// r_alpha(t) = t^{alpha-2}/Gamma(alpha-1), on a uniform grid of step `resolution`.
    std::vector<double> form_a;
    /// Single-kernel form with adaptive quadrature.
    std::vector<double> form_b;
    double max_deviation = 0.0;
};

/// E_{alpha,1}(-lambda t^alpha) u0 + t E_{alpha,2}(-lambda t^alpha) u1.
double scalar_linear(const ScalarProblem& p, double t);

ScalarOracleResult scalar_oracle(const ScalarProblem& p, const std::function<double(double)>& forcing,
                                 const std::vector<double>& times, double resolution,
                                 const QuadratureSpec& quad = {QuadratureSpec::Scheme::adaptive_split, 1.0,
                                                               1e-12, 4000, 1e-15});

/// Product-trapezoid weights a_0..a_n for int_0^{nh} k(tau) v(nh - tau) dtau with
/// v piecewise linear on step h; a_d multiplies v at tau = d h. K1 and K2 are
/// the first and second antiderivatives of k vanishing at 0.
std::vector<double> product_trapezoid_weights(int n, double h, const std::function<double(double)>& K1,
                                              const std::vector<double>& K2_at_nodes);

/// Reference solution of u = linear + int_0^t K_lambda(t-s) f(u(s)) ds with
/// K_lambda(tau) = tau^{alpha-1} E_{alpha,alpha}(-lambda tau^alpha), by the product
/// trapezoid rule on n_steps uniform steps. Returns u at the n_steps + 1 nodes.
std::vector<double> scalar_reference(const ScalarProblem& p, const std::function<double(double)>& f,
                                     double t_end, int n_steps);

struct BetaIdentity {
    double numeric = 0.0;
    double closed_form = 0.0;
    double residual = 0.0;
};

/// I(t) = int_0^t (t-s)^{-k1} int_0^s (s-tau)^{-k2} tau^{-k3} dtau ds against
/// B(1-k2, 1-k3) B(1-k1, 2-k2-k3) t^{2-k1-k2-k3}.
BetaIdentity beta_identity_check(double k1, double k2, double k3, double t);

}  // namespace fracflow
