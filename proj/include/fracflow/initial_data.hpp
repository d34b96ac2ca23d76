#pragma once

#include <string>

#include "fracflow/spectral.hpp"

namespace fracflow {

enum class DataKind { zero, homogeneous_radial, harmonic_homogeneous, gaussian, file };

const char* to_string(DataKind kind) noexcept;
DataKind data_kind_from_string(const std::string& name);

/// Recipe for one data field.
/// homogeneous_radial:   amplitude |x|_m^{-degree}
/// harmonic_homogeneous: amplitude Y_k(x) |x|_m^{-degree-k}, Y_k = Re (x1 + i x2)^k
/// gaussian:             amplitude exp(-|x - center|^2 / width^2)
/// with |x|_m = sqrt(|x|^2 + eps^2); eps < 0 means one grid spacing, or the
/// mass-matched width when mass_matched is set. A positive envelope multiplies any
/// analytic profile by exp(-|x|^2 / envelope^2).
struct DataSpec {
    DataKind kind = DataKind::zero;
    double amplitude = 1.0;
    double degree = 0.0;
    int harmonic = 1;
    double width = 0.1;
    double center_x = 0.0;
    double center_y = 0.0;
    double epsilon_m = -1.0;
    bool mass_matched = false;
    double envelope = 0.0;
    std::string path;

    bool operator==(const DataSpec&) const = default;
};

struct InitialData {
    Field phi;
    Field psi;
    DataKind kind = DataKind::zero;
    double epsilon_m = 0.0;
};

Field make_field(const DataSpec& spec, const Grid& grid);
InitialData make_initial_data(const DataSpec& phi, const DataSpec& psi, const Grid& grid);

/// Width factor a with eps = a h such that the lattice sum of h^N |x|_m^{-degree}
/// carries the same mass as |x|^{-degree} over the box. Needs 0 < degree < dim.
double mass_matched_factor(double degree, int dim);

/// Mollification width the spec resolves to on this grid.
double resolve_epsilon(const DataSpec& spec, const Grid& grid);

/// Degrees of the scale-invariant pair: 2/(rho-1) for phi, 2/(rho-1) + 2/alpha for psi.
double phi_degree(double rho);
double psi_degree(double alpha, double rho);

}  // namespace fracflow
