#pragma once

#include <functional>

namespace fracflow {

struct QuadratureSpec {
    enum class Scheme { adaptive_split, fixed_panel };

    Scheme scheme = Scheme::adaptive_split;
    double split_point = 1.0;
    double rel_tol = 1e-10;
    int max_panels = 4000;
    /// Absolute floor on the error target; zero means only a round-off floor.
    double abs_tol = 0.0;

    void validate() const;
};

struct QuadResult {
    double value = 0.0;
    double abs_error = 0.0;
    int panels = 0;
};

using Integrand = std::function<double(double)>;

/// Gauss-Kronrod (7/15) on [a, b]. Adaptive bisection of the worst panel, or
/// max_panels equal panels for the fixed scheme.
QuadResult integrate(const Integrand& f, double a, double b, const QuadratureSpec& spec);

/// Integral over [0, inf): [0, split] directly, the tail mapped by t -> 1/t.
QuadResult integrate_half_line(const Integrand& f, const QuadratureSpec& spec);

/// Integral over [split, inf) of f via t -> 1/t.
QuadResult integrate_tail(const Integrand& f, double split, const QuadratureSpec& spec);

/// Integral of (x-a)^ea (b-x)^eb g(x) over [a, b] for ea, eb > -1. Each half is
/// mapped so the algebraic endpoint factor becomes smooth.
QuadResult integrate_algebraic(const Integrand& g, double a, double b, double ea, double eb,
                               const QuadratureSpec& spec);

}  // namespace fracflow
