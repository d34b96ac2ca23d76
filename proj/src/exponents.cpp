#include "fracflow/exponents.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "fracflow/errors.hpp"

namespace fracflow {

const Condition& ExponentSet::condition(const std::string& name) const {
    for (const Condition& c : conditions) {
        if (c.name == name) return c;
    }
    raise(ErrorKind::domain, "no condition named " + name);
}

bool ExponentSet::all_satisfied() const noexcept {
    return std::all_of(conditions.begin(), conditions.end(), [](const Condition& c) { return c.satisfied; });
}

HypothesisStatus evaluate_hypotheses(double alpha, double rho, double p_over_r) {
    const double q = 2.0 * rho / (rho + 1.0);
    HypothesisStatus s;
    s.first_lhs = p_over_r;
    s.first_rhs = 1.0 / alpha - 0.5;
    s.first = s.first_lhs < s.first_rhs;
    s.second = alpha / (2.0 - alpha) < q && q < 2.0 / alpha;
    s.third_lhs = 1.0 - p_over_r;
    s.third_rhs = (rho - 1.0) / alpha * (1.0 / q - 0.5 * alpha);
    s.third = s.third_lhs < s.third_rhs;
    return s;
}

ExponentSet exponent_report(double alpha, double rho, double p, double r, int N) {
    require(alpha > 1.0 && alpha < 2.0, ErrorKind::domain, "alpha must lie in (1, 2)");
    require(rho > 1.0, ErrorKind::domain, "rho must exceed 1");
    require(p >= 1.0, ErrorKind::domain, "p must be at least 1");
    require(r > p, ErrorKind::domain, "r must exceed p");
    require(N >= 1, ErrorKind::domain, "N must be positive");
    ExponentSet e;
    e.alpha = alpha;
    e.rho = rho;
    e.p = p;
    e.r = r;
    e.N = N;
    e.q = 2.0 * rho / (rho + 1.0);
    e.mu = N - 2.0 * p / (rho - 1.0);
    if (e.mu < 0.0) {
        if (e.mu > -1e-12) {
            e.mu = 0.0;
        } else {
            raise(ErrorKind::domain, "mu = N - 2p/(rho-1) is negative (p > N(rho-1)/2)");
        }
    }
    const double nm = N - e.mu;
    e.beta_decay = 0.5 * alpha * (nm / p - nm / r);

    auto add = [&](std::string name, double lhs, double rhs, bool extra) {
        e.conditions.push_back({std::move(name), lhs, rhs, lhs < rhs, extra});
    };
    add("N >= 2", 1.0, N, false);
    add("p > 1", 1.0, p, false);
    add("(N-mu)/p - (N-mu)/r < 2", nm / p - nm / r, 2.0, false);
    add("rho < r", rho, r, false);
    add("1 + alpha < rho", 1.0 + alpha, rho, false);
    const HypothesisStatus h = evaluate_hypotheses(alpha, rho, p / r);
    add("p/r < 1/alpha - 1/2", h.first_lhs, h.first_rhs, true);
    add("alpha/(2-alpha) < q", alpha / (2.0 - alpha), e.q, true);
    add("q < 2/alpha", e.q, 2.0 / alpha, true);
    add("(1-p/r) < ((rho-1)/alpha)(1/q - alpha/2)", h.third_lhs, h.third_rhs, true);
    for (const Condition& c : e.conditions) {
        if (!c.satisfied) e.warnings.push_back("violated: " + c.name);
    }
    if (h.first_rhs <= 0.5) {
        e.warnings.push_back(
            "the first and third extra inequalities cannot hold together for 1 < alpha < 2: the "
            "first forces 1 - p/r > 1/2, the right side of the third stays below 1/2");
    }
    return e;
}

FeasibilityScan scan_hypothesis_feasibility(int n_ratio, int n_rho, int n_alpha) {
    require(n_ratio >= 1 && n_rho >= 2 && n_alpha >= 1, ErrorKind::domain, "scan resolution too small");
    FeasibilityScan s;
    s.best_joint_slack = -std::numeric_limits<double>::infinity();
    for (int a = 0; a < n_alpha; ++a) {
        const double alpha = 1.0 + (a + 0.5) / n_alpha;
        for (int b = 0; b < n_rho; ++b) {
            const double rho = 1.1 + (50.0 - 1.1) * b / (n_rho - 1);
            for (int c = 0; c < n_ratio; ++c) {
                const double ratio = (c + 0.5) / n_ratio;
                const HypothesisStatus h = evaluate_hypotheses(alpha, rho, ratio);
                ++s.points;
                s.first_count += h.first ? 1 : 0;
                s.third_count += h.third ? 1 : 0;
                s.joint_count += (h.first && h.third) ? 1 : 0;
                const double slack = std::min(h.first_rhs - h.first_lhs, h.third_rhs - h.third_lhs);
                s.best_joint_slack = std::max(s.best_joint_slack, slack);
            }
        }
    }
    return s;
}

}  // namespace fracflow
