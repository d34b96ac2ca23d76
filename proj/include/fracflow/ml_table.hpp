#pragma once

#include <array>
#include <vector>

#include "fracflow/mlf.hpp"

namespace fracflow {

/// Piecewise Chebyshev interpolant of x -> E_{alpha,beta}(-x) on [0, x_max].
/// Pieces are equal subdivisions of dyadic blocks [2^k, 2^{k+1}), refined until
/// the trailing coefficients fall below rel_tol times the local magnitude.
/// Immutable after construction; lookups are O(1). Arguments beyond x_max
/// fall back to ml_eval.
class MittagLefflerTable {
public:
    static constexpr int kNodes = 18;

    explicit MittagLefflerTable(MLParams params, double x_max = 1099511627776.0,
                                double rel_tol = 1e-13);

    [[nodiscard]] double operator()(double x) const;
    [[nodiscard]] const MLParams& params() const noexcept { return params_; }
    [[nodiscard]] double x_max() const noexcept { return x_max_; }
    [[nodiscard]] std::size_t piece_count() const noexcept { return pieces_.size(); }

private:
    struct Piece {
        double lo = 0.0;
        double hi = 0.0;
        std::array<double, kNodes> coef{};
    };
    struct Block {
        int first = 0;
        int count = 1;
    };

    Piece fit(double lo, double hi, double& tail, double& scale) const;
    [[nodiscard]] double evaluate(const Piece& p, double x) const;

    MLParams params_;
    double x_max_;
    int min_exp_;
    std::vector<Piece> pieces_;
    std::vector<Block> blocks_;
};

}  // namespace fracflow
