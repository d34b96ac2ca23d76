#include "fracflow/quadrature.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <queue>
#include <vector>

#include "fracflow/errors.hpp"

namespace fracflow {
namespace {

constexpr std::array<double, 8> kXk = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
constexpr std::array<double, 8> kWk = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
constexpr std::array<double, 4> kWg = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Panel {
    double a, b, value, error, resabs;
    bool operator<(const Panel& o) const { return error < o.error; }
};

Panel gk15(const Integrand& f, double a, double b) {
    const double c = 0.5 * (a + b);
    const double h = 0.5 * (b - a);
    const double fc = f(c);
    double kron = fc * kWk[7];
    double gauss = fc * kWg[3];
    double resabs = std::abs(kron);
    for (int i = 0; i < 7; ++i) {
        const double dx = h * kXk[i];
        const double f1 = f(c - dx);
        const double f2 = f(c + dx);
        kron += kWk[i] * (f1 + f2);
        resabs += kWk[i] * (std::abs(f1) + std::abs(f2));
        if (i % 2 == 1) gauss += kWg[i / 2] * (f1 + f2);
    }
    Panel p{a, b, kron * h, std::abs((kron - gauss) * h), resabs * std::abs(h)};
    if (!std::isfinite(p.value)) p.error = std::numeric_limits<double>::infinity();
    return p;
}

double target(const QuadratureSpec& spec, double value, double resabs) {
    const double roundoff = 50.0 * std::numeric_limits<double>::epsilon() * resabs;
    return std::max({spec.abs_tol, spec.rel_tol * std::abs(value), roundoff});
}

}  // namespace

void QuadratureSpec::validate() const {
    require(rel_tol > 0.0, ErrorKind::domain, "rel_tol must be positive");
    require(split_point > 0.0, ErrorKind::domain, "split_point must be positive");
    require(max_panels >= 1, ErrorKind::domain, "max_panels must be at least 1");
    require(abs_tol >= 0.0, ErrorKind::domain, "abs_tol must be nonnegative");
}

QuadResult integrate(const Integrand& f, double a, double b, const QuadratureSpec& spec) {
    spec.validate();
    if (a == b) return {};
    if (spec.scheme == QuadratureSpec::Scheme::fixed_panel) {
        QuadResult r;
        const double w = (b - a) / spec.max_panels;
        for (int i = 0; i < spec.max_panels; ++i) {
            const Panel p = gk15(f, a + i * w, i + 1 == spec.max_panels ? b : a + (i + 1) * w);
            r.value += p.value;
            r.abs_error += p.error;
        }
        r.panels = spec.max_panels;
        return r;
    }

    std::priority_queue<Panel> heap;
    Panel first = gk15(f, a, b);
    double value = first.value;
    double error = first.error;
    double resabs = first.resabs;
    heap.push(first);
    int panels = 1;
    while (error > target(spec, value, resabs)) {
        if (panels >= spec.max_panels) {
            raise(ErrorKind::quadrature_failure,
                  "adaptive quadrature did not reach rel_tol within max_panels (error estimate " +
                      std::to_string(error) + ")");
        }
        const Panel worst = heap.top();
        heap.pop();
        const double mid = 0.5 * (worst.a + worst.b);
        const Panel left = gk15(f, worst.a, mid);
        const Panel right = gk15(f, mid, worst.b);
        value += left.value + right.value - worst.value;
        error += left.error + right.error - worst.error;
        resabs += left.resabs + right.resabs - worst.resabs;
        heap.push(left);
        heap.push(right);
        ++panels;
        if (heap.size() > 64 && panels % 64 == 0) {
            // refresh the running sums to shed accumulated cancellation
            std::vector<Panel> all;
            all.reserve(heap.size());
            value = error = resabs = 0.0;
            while (!heap.empty()) {
                all.push_back(heap.top());
                heap.pop();
            }
            for (const Panel& p : all) {
                value += p.value;
                error += p.error;
                resabs += p.resabs;
                heap.push(p);
            }
        }
    }
    double total = 0.0;
    double err = 0.0;
    while (!heap.empty()) {
        total += heap.top().value;
        err += heap.top().error;
        heap.pop();
    }
    return {total, err, panels};
}

QuadResult integrate_tail(const Integrand& f, double split, const QuadratureSpec& spec) {
    require(split > 0.0, ErrorKind::domain, "tail split must be positive");
    auto g = [&f](double u) {
        if (u <= 0.0) return 0.0;
        const double t = 1.0 / u;
        const double v = f(t) / (u * u);
        return std::isfinite(v) ? v : 0.0;
    };
    return integrate(g, 0.0, 1.0 / split, spec);
}

QuadResult integrate_half_line(const Integrand& f, const QuadratureSpec& spec) {
    spec.validate();
    const QuadResult head = integrate(f, 0.0, spec.split_point, spec);
    const QuadResult tail = integrate_tail(f, spec.split_point, spec);
    return {head.value + tail.value, head.abs_error + tail.abs_error, head.panels + tail.panels};
}

QuadResult integrate_algebraic(const Integrand& g, double a, double b, double ea, double eb,
                               const QuadratureSpec& spec) {
    require(b > a, ErrorKind::domain, "integrate_algebraic needs a < b");
    require(ea > -1.0 && eb > -1.0, ErrorKind::domain, "endpoint exponents must exceed -1");
    const double m = 0.5 * (a + b);
    const double pa = ea + 1.0;
    const double pb = eb + 1.0;
    auto left = [&](double u) {
        const double x = a + std::pow(u, 1.0 / pa);
        return std::pow(b - x, eb) * g(x) / pa;
    };
    auto right = [&](double u) {
        const double x = b - std::pow(u, 1.0 / pb);
        return std::pow(x - a, ea) * g(x) / pb;
    };
    const QuadResult l = integrate(left, 0.0, std::pow(m - a, pa), spec);
    const QuadResult r = integrate(right, 0.0, std::pow(b - m, pb), spec);
    return {l.value + r.value, l.abs_error + r.abs_error, l.panels + r.panels};
}

}  // namespace fracflow
