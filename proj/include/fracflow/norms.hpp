#pragma once

#include <span>
#include <vector>

#include "fracflow/spectral.hpp"

namespace fracflow {

struct NormSpec {
    double p = 2.0;
    double mu = 0.0;
    double s = 0.0;

    void validate(int dim) const;
};

/// l-infinity cube centred on node (i, j) with half-width k cells.
struct Cube {
    int i = 0;
    int j = 0;
    int k = 1;
};

/// Discretised family of cubes Q_r(x0).
struct BallFamily {
    int center_stride = 4;
    std::vector<int> radii_cells;
    /// If positive, only cubes with |x0_i| + r <= region_half_width; otherwise
    /// every centre on the stride lattice, with periodic wrap.
    double region_half_width = 0.0;

    /// Radii h 2^k up to L/2, centres on the stride lattice through the origin.
    static BallFamily dyadic(const Grid& grid, int stride = 4);
    /// Every node as centre and every radius 1..M/2 cells.
    static BallFamily full_lattice(const Grid& grid);

    [[nodiscard]] std::vector<Cube> cubes(const Grid& grid) const;
};

struct MorreyResult {
    double value = 0.0;
    std::vector<double> argmax_center;
    double argmax_radius = 0.0;
};

/// sup over the family of r^{-mu/p} (sum_x w(x) |f(x)|^p h^N)^{1/p} with
/// trapezoid weights w: 1 inside the cube, 1/2 per face the node lies on.
/// Window sums come from a summed-area table.
MorreyResult morrey_norm(const Field& f, const NormSpec& spec, const BallFamily& balls);
MorreyResult morrey_norm(const Field& f, const NormSpec& spec, std::span<const Cube> cubes);

/// Morrey norm of riesz(s, f); plain Morrey norm when s = 0.
MorreyResult sobolev_morrey_norm(const Field& f, const NormSpec& spec, const BallFamily& balls);

/// Relative defect of the dilation identity
/// ||f(gamma .)|| = gamma^{-(N-mu)/p} ||f||, normalised by ||f||. f(gamma .) is
/// sampled by trigonometric interpolation inside the trusted sub-box
/// (|x_i| <= trusted_fraction L/2) and the reference norm uses the image family.
double scaling_residual(const Field& f, double gamma, const NormSpec& spec, int stride = 4,
                        double trusted_fraction = 0.9);

/// max(0, ||fg||_{p3,mu3} - ||f||_{p1,mu1} ||g||_{p2,mu2}) over one family.
double holder_residual(const Field& f, const Field& g, double p1, double p2, double p3, double mu1,
                       double mu2, double mu3, const BallFamily& balls);

}  // namespace fracflow
