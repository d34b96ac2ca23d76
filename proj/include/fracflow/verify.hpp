#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "fracflow/initial_data.hpp"
#include "fracflow/norms.hpp"
#include "fracflow/report.hpp"
#include "fracflow/solver.hpp"

namespace fracflow {

/// Everything needed to reproduce one run. JSON conversion lives in config.hpp.
struct Experiment {
    Grid grid{2, 128, 1.0};
    ProblemSpec problem;
    DataSpec phi;
    DataSpec psi;
    TimeGrid timegrid;
    PicardConfig picard;

    [[nodiscard]] InitialData data() const { return make_initial_data(phi, psi, grid); }
    [[nodiscard]] Trajectory run() const { return solve(data(), problem, timegrid, picard); }
    bool operator==(const Experiment&) const = default;
};


/// n log-spaced points from lo to hi inclusive.
std::vector<double> log_grid(double lo, double hi, int n);

/// Least-squares slope of y against x.
double fit_slope(const std::vector<double>& x, const std::vector<double>& y);

// ---- Mittag-Leffler checks -------------------------------------------------

/// Series against omega + l. Tolerance 1e-8, widened to 1e-6 for alpha >= 1.99.
Report check_decomposition(const std::vector<double>& alphas, const std::vector<double>& betas,
                           const std::vector<double>& z_grid, double tolerance_scale = 1.0);

/// | |int H_{alpha,1}| - (2 - 2/alpha) | per alpha, tolerance 1e-6.
Report check_relaxation_mass(const std::vector<double>& alphas, double tolerance_scale = 1.0);

/// Derivative identity at h and h/2 (residual <= 1e-6 at h, observed order near 2)
/// and the integral identity (<= 1e-8).
Report check_time_identities(double alpha, const std::vector<double>& lambdas, double t, double h,
                             double tolerance_scale = 1.0);

/// E_{1,1} = exp, E_{2,1} = cos sqrt, E_{2,2} = sin sqrt / sqrt on [0, x_max].
Report check_boundary_forms(double x_max, int n, double tolerance_scale = 1.0);

// ---- multiplier and smoothing checks ----------------------------------------

struct MikhlinSpec {
    double alpha = 1.5;
    double beta_ml = 1.0;
    double k = 2.0;
    double delta = 0.0;
    int max_order = 2;
    /// sigma(xi) = amplitude |xi|^k
    double amplitude = 39.47841760435743;
    double xi_lo = 1e-2;
    double xi_hi = 1e2;
    int xi_points = 81;
    double slope_tolerance = 0.1;
    /// Skip the admissibility gate; used for negative controls.
    bool allow_inadmissible = false;

    [[nodiscard]] bool admissible() const noexcept;

    bool operator==(const MikhlinSpec&) const = default;
};

/// S(xi) = |xi|^{|g|} |d^g (|xi|^delta E_{alpha,beta}(-sigma))| by central
/// differences along a generic ray; sup and slope over the last decade per order.
Report check_mikhlin(const MikhlinSpec& spec, double tolerance_scale = 1.0);

struct SmoothingSpec {
    double alpha = 1.5;
    double gamma1 = 0.0;
    double gamma2 = 0.0;
    double p1 = 2.0;
    double p2 = 3.0;
    double mu = 0.5;
    int N = 2;
    /// 1: G_{alpha,1}, 2: G_{alpha,2}, 3: G_{alpha,alpha}
    int item = 1;
    double bound = 10.0;

    [[nodiscard]] double lambda() const noexcept;
    [[nodiscard]] bool admissible() const noexcept;

    bool operator==(const SmoothingSpec&) const = default;
};

/// Q(t) = ||G(t) f||_{M^{g2}_{p2,mu}} t^{w} / ||f||_in with w = alpha lambda/2
/// (item 3: 1 - alpha + alpha lambda/2) and the input norm M^{g1}_{p1,mu}
/// (item 2: M^{g1 - 2/alpha}_{p1,mu}). Passes when max Q / min Q <= bound.
Report check_smoothing(const SmoothingSpec& spec, const Field& f, const std::vector<double>& t_grid,
                       const BallFamily& balls, double tolerance_scale = 1.0);

// ---- trajectory checks -----------------------------------------------------

struct SelfSimilaritySpec {
    std::vector<double> gammas{1.189207115002721, 1.4142135623730951};
    /// Probe times are spread over [H/3, 2H/3]. Zero picks the largest H whose
    /// scaled probes still fit the run.
    double horizon = 0.0;
    int probe_times = 6;
    double inner_cells = 8.0;
    /// Outer probe radius as a fraction of L/2.
    double outer_fraction = 0.4;
    double tolerance = 0.05;

    bool operator==(const SelfSimilaritySpec&) const = default;
};

/// R(gamma) = max over the probes |u(t,x) - gamma^{2/(rho-1)} u(gamma^{2/alpha} t, gamma x)| / scale,
/// scale = max |u| over the probes.
Report check_selfsimilarity(const Experiment& e, const Trajectory& traj, const SelfSimilaritySpec& spec,
                            double tolerance_scale = 1.0);
Report check_selfsimilarity(const Experiment& e, const SelfSimilaritySpec& spec,
                            double tolerance_scale = 1.0);

struct DecaySpec {
    double p = 1.5;
    double r = 3.0;
    /// Fit window over saved nodes; t_hi <= 0 means the run's end.
    double t_lo = 0.0;
    double t_hi = 0.0;
    int min_points = 4;
    /// Minimum t_hi / t_lo.
    double min_span = 2.0;
    double relative_tolerance = 0.1;
    /// Centre stride in cells; zero means M/64.
    int center_stride = 0;

    bool operator==(const DecaySpec&) const = default;
};

Report check_decay(const Experiment& e, const Trajectory& traj, const DecaySpec& spec,
                   double tolerance_scale = 1.0);
Report check_decay(const Experiment& e, const DecaySpec& spec, double tolerance_scale = 1.0);

enum class GridMap { identity, rot90, rot180, rot270, reflect_x, reflect_y, reflect_diag, reflect_antidiag };
const char* to_string(GridMap m) noexcept;
GridMap grid_map_from_string(const std::string& name);
std::vector<GridMap> dihedral_group();

/// f(T x) sampled on the grid; exact index permutation.
Field apply_map(GridMap m, const Field& f);

struct SymmetrySpec {
    std::vector<GridMap> group = dihedral_group();
    /// Measure u(T.) + u instead of u(T.) - u.
    bool antisymmetry = false;
    double tolerance = 1e-10;

    bool operator==(const SymmetrySpec&) const = default;
};

Report check_symmetry(const Experiment& e, const Trajectory& traj, const SymmetrySpec& spec,
                      double tolerance_scale = 1.0);
Report check_symmetry(const Experiment& e, const SymmetrySpec& spec, double tolerance_scale = 1.0);

struct StabilitySpec {
    std::vector<double> scales{1e-2, 1e-3, 1e-4};
    bool perturb_phi = true;
    bool perturb_psi = false;
    /// Highest |m| of the random perturbation modes.
    int modes = 4;
    std::uint64_t seed = 1;
    double p = 1.5;
    double r = 3.0;
    double bound = 10.0;

    bool operator==(const StabilitySpec&) const = default;
};

/// Random smooth field with max |f| = 1, reproducible from the seed.
Field random_smooth_field(const Grid& grid, int modes, std::uint64_t seed);

Report check_stability(const Experiment& e, const StabilitySpec& spec, double tolerance_scale = 1.0);

struct ProfileSpec {
    /// Sample times; empty picks four saved nodes spread over the second half of the run.
    std::vector<double> times;
    int eta_points = 48;
    double inner_cells = 8.0;
    double outer_fraction = 0.4;
    double tolerance = 0.05;

    bool operator==(const ProfileSpec&) const = default;
};

/// Curves t^{alpha/(rho-1)} u(t, eta t^{alpha/2} e_1) on a common eta window. The collapse
/// residual is the largest pairwise sup-difference over the largest curve magnitude.
Report extract_profile(const Trajectory& traj, double alpha, double rho, const ProfileSpec& spec,
                       double tolerance_scale = 1.0);

}  // namespace fracflow
