#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "fracflow/report.hpp"
#include "fracflow/verify.hpp"

namespace fracflow {

struct NormsConfig {
    double p = 3.0;
    double mu = 0.5;
    double s = 0.0;
    /// Zero means M/64.
    int center_stride = 0;
    /// "all" (every radius 1..M/2) or "dyadic".
    std::string radii = "all";

    [[nodiscard]] BallFamily family(const Grid& grid) const;
    bool operator==(const NormsConfig&) const = default;
};

struct DecompositionConfig {
    std::vector<double> alphas{1.1, 1.5, 1.9};
    std::vector<double> betas{1.0, 1.25, 1.5, 2.0};
    double z_lo = 0.5;
    double z_hi = 100.0;
    int z_points = 40;
    bool operator==(const DecompositionConfig&) const = default;
};

struct SmoothingConfig {
    SmoothingSpec spec;
    double t_lo = 1e-2;
    double t_hi = 1.0;
    int t_points = 9;
    bool operator==(const SmoothingConfig&) const = default;
};

struct VerifyConfig {
    DecompositionConfig decomposition;
    MikhlinSpec mikhlin;
    SmoothingConfig smoothing;
    SelfSimilaritySpec selfsimilarity;
    DecaySpec decay;
    SymmetrySpec symmetry;
    StabilitySpec stability;
    ProfileSpec profile;
    bool operator==(const VerifyConfig&) const = default;
};

struct RunConfig {
    Experiment experiment;
    NormsConfig norms;
    VerifyConfig verify;
    std::uint64_t seed = 1;
    double tolerance_scale = 1.0;
    bool svg = false;
    bool operator==(const RunConfig&) const = default;
};

json experiment_to_json(const Experiment& e);
json config_to_json(const RunConfig& c);

/// Defaults fill every absent key; unknown keys and wrong types raise a
/// schema error naming the key path.
RunConfig config_from_json(const json& j);
RunConfig parse_config(const std::filesystem::path& path);

}  // namespace fracflow
