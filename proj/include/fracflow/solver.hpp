#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "fracflow/initial_data.hpp"
#include "fracflow/norms.hpp"
#include "fracflow/spectral.hpp"

namespace fracflow {

/// d^alpha u = Delta u + kappa1 |grad u|^q + kappa2 |u|^{rho-1} u.
struct ProblemSpec {
    double alpha = 1.5;
    double rho = 3.0;
    double q = 1.5;
    double kappa1 = 0.0;
    double kappa2 = 0.0;

    /// With `scaling` set, q must equal 2 rho/(rho+1).
    void validate(bool scaling = false) const;
    [[nodiscard]] static double scaling_q(double rho) noexcept { return 2.0 * rho / (rho + 1.0); }
    [[nodiscard]] bool linear() const noexcept { return kappa1 == 0.0 && kappa2 == 0.0; }

    bool operator==(const ProblemSpec&) const = default;
};

/// Nodes t_n = t_start + (t_end - t_start) (n/n_steps)^grading; grading 1 is uniform.
/// The data are posed at t_start.
struct TimeGrid {
    double t_start = 0.0;
    double t_end = 1.0;
    int n_steps = 64;
    double grading = 1.0;

    void validate() const;
    [[nodiscard]] double node(int n) const;
    [[nodiscard]] std::vector<double> nodes() const;
    [[nodiscard]] bool uniform() const noexcept { return grading == 1.0; }

    bool operator==(const TimeGrid&) const = default;
};

struct PicardConfig {
    int max_sweeps = 25;
    double sweep_tol = 1e-10;
    /// Size of the data in the smallness monitor; 0 skips the monitor.
    double epsilon_data = 0.0;
    /// Keep every k-th node in the trajectory (the last node is always kept).
    int save_every = 1;
    double overflow_threshold = 1e12;

    void validate() const;

    bool operator==(const PicardConfig&) const = default;
};

/// K_c(tau) = tau^{alpha-1} E_{alpha,alpha}(-c tau^alpha).
double memory_kernel(double alpha, double c, double tau);

/// Product-midpoint weights w_{n,j}, j = 0..n-1, for int_0^{t_n} K_c(t_n - s) F(s) ds.
/// The last panel integrates tau^{alpha-1} exactly with E frozen at its midpoint.
std::vector<double> memory_weights(double alpha, double c, const TimeGrid& grid, int n);

/// kappa2 |u|^{rho-1} u + kappa1 |grad u|^q, then 2/3 dealiasing.
Field nonlinearity(const Field& u, const ProblemSpec& spec);

Field linear_part(const InitialData& data, double alpha, double t);

struct StepDiagnostics {
    int node = 0;
    double t = 0.0;
    int sweeps = 0;
    bool converged = true;
    /// Largest observed ||Lu - Lv|| / ||u - v|| over the sweeps of this step.
    double contraction = 0.0;
    double last_update = 0.0;
    double l2 = 0.0;
    double max_abs = 0.0;
};

enum class TrajectoryStatus { completed, non_contraction, overflow };

const char* to_string(TrajectoryStatus s) noexcept;

struct Trajectory {
    TimeGrid timegrid;
    std::vector<int> saved_nodes;
    std::vector<double> times;
    std::vector<Field> fields;
    std::vector<StepDiagnostics> diagnostics;
    TrajectoryStatus status = TrajectoryStatus::completed;
    std::string message;
    /// Smallness monitor 2^rho eps^{rho-1} + 2^q eps^{q-1}, when requested.
    double smallness = 0.0;

    [[nodiscard]] bool empty() const noexcept { return fields.empty(); }
    [[nodiscard]] double max_contraction() const noexcept;
    [[nodiscard]] int max_sweeps() const noexcept;
    /// Linear interpolation between saved nodes; t must lie in the saved range.
    [[nodiscard]] Field at(double t) const;
};

/// Product-midpoint Volterra marching with Picard sweeps per step. The
/// nonlinearity of panel j is taken at its right node t_{j+1}, so the newest
/// panel couples back into the step and is resolved by the sweeps.
Trajectory solve(const InitialData& data, const ProblemSpec& spec, const TimeGrid& timegrid,
                 const PicardConfig& cfg);

/// sup_t t^beta ||u(t)||_{M_{r,mu}} + sup_t t^{beta+alpha/2} ||grad u(t)||_{M_{r,mu}},
/// over saved nodes with t > t_start.
double xbeta_norm(const Trajectory& traj, double alpha, double beta, const NormSpec& spec,
                  const BallFamily& balls);

}  // namespace fracflow
