#include "fracflow/scalar_oracle.hpp"

#include <algorithm>
#include <cmath>

#include "fracflow/errors.hpp"
#include "fracflow/mlf.hpp"

namespace fracflow {

namespace {

double ml(double alpha, double beta, double x) { return ml_real({alpha, beta}, x); }

void check(const ScalarProblem& p) {
    require(p.alpha > 1.0 && p.alpha < 2.0, ErrorKind::domain, "alpha must lie in (1, 2)");
    require(p.lambda >= 0.0, ErrorKind::domain, "lambda must be >= 0");
}

/// Values of v(t_n) = int_0^{t_n} k(t_n - s) v(s) ds on the nodes 0..n of step h,
/// for a kernel given through its antiderivatives; `v` sampled at the nodes.
std::vector<double> convolve_all(const std::vector<double>& v, double h,
                                 const std::function<double(double)>& K1,
                                 const std::function<double(double)>& K2) {
    const int n = static_cast<int>(v.size()) - 1;
    std::vector<double> k2(static_cast<std::size_t>(n) + 2);
    for (int d = 0; d <= n + 1; ++d) k2[static_cast<std::size_t>(d)] = d == 0 ? 0.0 : K2(d * h);
    std::vector<double> interior(static_cast<std::size_t>(n) + 1, 0.0);
    for (int d = 1; d <= n; ++d)
        interior[static_cast<std::size_t>(d)] =
            (k2[static_cast<std::size_t>(d + 1)] - 2 * k2[static_cast<std::size_t>(d)] + k2[static_cast<std::size_t>(d - 1)]) / h;
    std::vector<double> out(v.size(), 0.0);
    for (int m = 1; m <= n; ++m) {
        double s = k2[1] / h * v[static_cast<std::size_t>(m)];
        for (int d = 1; d < m; ++d) s += interior[static_cast<std::size_t>(d)] * v[static_cast<std::size_t>(m - d)];
        s += (K1(m * h) - (k2[static_cast<std::size_t>(m)] - k2[static_cast<std::size_t>(m - 1)]) / h) * v[0];
        out[static_cast<std::size_t>(m)] = s;
    }
    return out;
}

}  // namespace

double scalar_linear(const ScalarProblem& p, double t) {
    check(p);
    require(t >= 0.0, ErrorKind::domain, "time must be >= 0");
    if (t == 0.0) return p.u0;
    const double x = -p.lambda * std::pow(t, p.alpha);
    return ml(p.alpha, 1.0, x) * p.u0 + t * ml(p.alpha, 2.0, x) * p.u1;
}

std::vector<double> product_trapezoid_weights(int n, double h, const std::function<double(double)>& K1,
                                              const std::vector<double>& K2_at_nodes) {
    require(n >= 1 && static_cast<int>(K2_at_nodes.size()) >= n + 1, ErrorKind::shape_mismatch,
            "need K2 at nodes 0..n");
    std::vector<double> a(static_cast<std::size_t>(n) + 1);
    const auto K2 = [&](int d) { return K2_at_nodes[static_cast<std::size_t>(d)]; };
    a[0] = K2(1) / h;
    for (int d = 1; d < n; ++d) a[static_cast<std::size_t>(d)] = (K2(d + 1) - 2 * K2(d) + K2(d - 1)) / h;
    a[static_cast<std::size_t>(n)] = K1(n * h) - (K2(n) - K2(n - 1)) / h;
    return a;
}

ScalarOracleResult scalar_oracle(const ScalarProblem& p, const std::function<double(double)>& forcing,
                                 const std::vector<double>& times, double resolution,
                                 const QuadratureSpec& quad) {
    check(p);
    require(resolution > 0.0, ErrorKind::domain, "resolution must be positive");
    const double a = p.alpha, lam = p.lambda;
    ScalarOracleResult out;
    out.times = times;
    for (double t : times) {
        require(t >= 0.0, ErrorKind::domain, "times must be >= 0");
        const double lin = scalar_linear(p, t);
        if (t == 0.0) {
            out.form_a.push_back(lin);
            out.form_b.push_back(lin);
            continue;
        }

        const auto smooth = [&](double s) { return ml(a, a, -lam * std::pow(t - s, a)) * forcing(s); };
        out.form_b.push_back(lin + integrate_algebraic(smooth, 0.0, t, 0.0, a - 1.0, quad).value);

        // nested form: inner Riemann-Liouville integral of order alpha-1, outer G_{alpha,1}
        const int n = std::max(1, static_cast<int>(std::ceil(t / resolution - 1e-9)));
        const double h = t / n;
        std::vector<double> f(static_cast<std::size_t>(n) + 1);
        for (int i = 0; i <= n; ++i) f[static_cast<std::size_t>(i)] = forcing(i * h);
        const double g_a = std::tgamma(a), g_a1 = std::tgamma(a + 1.0);
        const std::vector<double> g = convolve_all(
            f, h, [&](double x) { return std::pow(x, a - 1.0) / g_a; },
            [&](double x) { return std::pow(x, a) / g_a1; });
        const std::vector<double> outer = convolve_all(
            g, h, [&](double x) { return x * ml(a, 2.0, -lam * std::pow(x, a)); },
            [&](double x) { return x * x * ml(a, 3.0, -lam * std::pow(x, a)); });
        out.form_a.push_back(lin + outer.back());
    }
    for (std::size_t i = 0; i < times.size(); ++i)
        out.max_deviation = std::max(out.max_deviation, std::abs(out.form_a[i] - out.form_b[i]));
    return out;
}

std::vector<double> scalar_reference(const ScalarProblem& p, const std::function<double(double)>& f,
                                     double t_end, int n_steps) {
    check(p);
    require(t_end > 0.0 && n_steps >= 1, ErrorKind::domain, "need t_end > 0 and n_steps >= 1");
    const double a = p.alpha, lam = p.lambda, h = t_end / n_steps;
    const auto K1 = [&](double x) { return std::pow(x, a) * ml(a, a + 1.0, -lam * std::pow(x, a)); };
    std::vector<double> k2(static_cast<std::size_t>(n_steps) + 1, 0.0);
    for (int d = 1; d <= n_steps; ++d)
        k2[static_cast<std::size_t>(d)] = std::pow(d * h, a + 1.0) * ml(a, a + 2.0, -lam * std::pow(d * h, a));
    const std::vector<double> full = product_trapezoid_weights(n_steps, h, K1, k2);

    std::vector<double> u(static_cast<std::size_t>(n_steps) + 1), fu(u.size());
    u[0] = p.u0;
    fu[0] = f(u[0]);
    for (int n = 1; n <= n_steps; ++n) {
        // interior weights are shared; the weight of s = 0 depends on n
        const double w0 = K1(n * h) - (k2[static_cast<std::size_t>(n)] - k2[static_cast<std::size_t>(n - 1)]) / h;
        double s = scalar_linear(p, n * h) + w0 * fu[0];
        for (int d = 1; d < n; ++d) s += full[static_cast<std::size_t>(d)] * fu[static_cast<std::size_t>(n - d)];
        double v = u[static_cast<std::size_t>(n - 1)];
        for (int it = 0; it < 200; ++it) {
            const double next = s + full[0] * f(v);
            const bool done = std::abs(next - v) <= 1e-15 * std::max(1.0, std::abs(next));
            v = next;
            if (done) break;
        }
        require(std::isfinite(v), ErrorKind::non_convergent, "scalar reference diverged");
        u[static_cast<std::size_t>(n)] = v;
        fu[static_cast<std::size_t>(n)] = f(v);
    }
    return u;
}

BetaIdentity beta_identity_check(double k1, double k2, double k3, double t) {
    require(k1 < 1.0 && k2 < 1.0 && k3 < 1.0, ErrorKind::domain, "exponents must be < 1");
    require(t > 0.0, ErrorKind::domain, "t must be positive");
    const QuadratureSpec inner_spec{QuadratureSpec::Scheme::adaptive_split, 1.0, 1e-13, 4000, 0.0};
    const QuadratureSpec outer_spec{QuadratureSpec::Scheme::adaptive_split, 1.0, 1e-11, 4000, 0.0};
    const auto inner = [&](double s) {
        if (s <= 0.0) return 0.0;
        return integrate_algebraic([](double) { return 1.0; }, 0.0, s, -k3, -k2, inner_spec).value;
    };
    BetaIdentity r;
    r.numeric = integrate_algebraic(inner, 0.0, t, 0.0, -k1, outer_spec).value;
    const auto B = [](double x, double y) { return std::exp(std::lgamma(x) + std::lgamma(y) - std::lgamma(x + y)); };
    r.closed_form = B(1 - k2, 1 - k3) * B(1 - k1, 2 - k2 - k3) * std::pow(t, 2 - k1 - k2 - k3);
    r.residual = std::abs(r.numeric - r.closed_form) / std::abs(r.closed_form);
    return r;
}

}  // namespace fracflow
