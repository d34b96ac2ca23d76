#pragma once

#include <string>
#include <vector>

namespace fracflow {

struct Condition {
    std::string name;
    double lhs = 0.0;
    double rhs = 0.0;
    bool satisfied = false;
    /// One of the three inequalities the well-posedness result adds on top
    /// of the basic exponent ranges.
    bool extra_hypothesis = false;
};

struct ExponentSet {
    double alpha = 0.0;
    double rho = 0.0;
    double q = 0.0;
    double p = 0.0;
    double r = 0.0;
    int N = 2;
    double mu = 0.0;
    double beta_decay = 0.0;
    std::vector<Condition> conditions;
    std::vector<std::string> warnings;

    [[nodiscard]] const Condition& condition(const std::string& name) const;
    [[nodiscard]] bool all_satisfied() const noexcept;
};

/// q = 2 rho/(rho+1), mu = N - 2p/(rho-1), beta = (alpha/2)((N-mu)/p - (N-mu)/r),
/// plus the status of every hypothesis. Violations become warnings.
ExponentSet exponent_report(double alpha, double rho, double p, double r, int N);

/// The three extra inequalities depend on (alpha, rho, p/r) only.
struct HypothesisStatus {
    double first_lhs = 0.0, first_rhs = 0.0;
    double third_lhs = 0.0, third_rhs = 0.0;
    bool first = false;   ///< p/r < 1/alpha - 1/2
    bool second = false;  ///< alpha/(2-alpha) < q < 2/alpha
    bool third = false;   ///< 1 - p/r < ((rho-1)/alpha)(1/q - alpha/2)
};

HypothesisStatus evaluate_hypotheses(double alpha, double rho, double p_over_r);

struct FeasibilityScan {
    long points = 0;
    long first_count = 0;
    long third_count = 0;
    long joint_count = 0;
    /// max over the grid of min(first slack, third slack); negative means
    /// no point satisfies both.
    double best_joint_slack = 0.0;
};

/// Uniform interior grid over p/r in (0,1), rho in [1.1, 50], alpha in (1,2).
FeasibilityScan scan_hypothesis_feasibility(int n_ratio, int n_rho, int n_alpha);

}  // namespace fracflow
