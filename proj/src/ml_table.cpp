#include "fracflow/ml_table.hpp"

#include <cmath>
#include <numbers>

#include "fracflow/errors.hpp"

namespace fracflow {
namespace {

constexpr int kMinExp = -4;  // [0, 2^-4) is the head piece
constexpr int kMaxSplit = 4096;

}  // namespace

MittagLefflerTable::MittagLefflerTable(MLParams params, double x_max, double rel_tol)
    : params_(params), x_max_(x_max), min_exp_(kMinExp) {
    params_.validate();
    require(x_max > 1.0, ErrorKind::domain, "table range must exceed 1");
    int max_exp = 0;
    std::frexp(x_max, &max_exp);  // x_max < 2^max_exp
    x_max_ = std::ldexp(1.0, max_exp);

    double tail = 0.0;
    double scale = 0.0;
    pieces_.push_back(fit(0.0, std::ldexp(1.0, kMinExp), tail, scale));
    for (int k = kMinExp; k < max_exp; ++k) {
        const double lo = std::ldexp(1.0, k);
        const double hi = std::ldexp(1.0, k + 1);
        for (int count = 1;; count *= 2) {
            std::vector<Piece> trial;
            bool ok = true;
            for (int i = 0; i < count && ok; ++i) {
                const double a = lo + (hi - lo) * i / count;
                const double b = i + 1 == count ? hi : lo + (hi - lo) * (i + 1) / count;
                trial.push_back(fit(a, b, tail, scale));
                ok = tail <= rel_tol * scale || scale == 0.0;
            }
            if (ok || count >= kMaxSplit) {
                blocks_.push_back({static_cast<int>(pieces_.size()), count});
                pieces_.insert(pieces_.end(), trial.begin(), trial.end());
                break;
            }
        }
    }
}

MittagLefflerTable::Piece MittagLefflerTable::fit(double lo, double hi, double& tail,
                                                  double& scale) const {
    constexpr int n = kNodes;
    std::array<double, n> values{};
    scale = 0.0;
    for (int j = 0; j < n; ++j) {
        const double theta = std::numbers::pi * (j + 0.5) / n;
        const double x = 0.5 * (lo + hi) + 0.5 * (hi - lo) * std::cos(theta);
        values[j] = ml_real(params_, -x);
        scale = std::max(scale, std::abs(values[j]));
    }
    Piece p;
    p.lo = lo;
    p.hi = hi;
    for (int k = 0; k < n; ++k) {
        double s = 0.0;
        for (int j = 0; j < n; ++j) s += values[j] * std::cos(std::numbers::pi * k * (j + 0.5) / n);
        p.coef[k] = (k == 0 ? 1.0 : 2.0) * s / n;
    }
    tail = std::max(std::abs(p.coef[n - 1]), std::abs(p.coef[n - 2]));
    return p;
}

double MittagLefflerTable::evaluate(const Piece& p, double x) const {
    const double u = (2.0 * x - p.lo - p.hi) / (p.hi - p.lo);
    double b1 = 0.0;
    double b2 = 0.0;
    for (int k = kNodes - 1; k >= 1; --k) {
        const double b0 = p.coef[k] + 2.0 * u * b1 - b2;
        b2 = b1;
        b1 = b0;
    }
    return p.coef[0] + u * b1 - b2;
}

double MittagLefflerTable::operator()(double x) const {
    require(x >= 0.0, ErrorKind::domain, "table argument must be nonnegative");
    if (x >= x_max_) return ml_real(params_, -x);
    if (x < std::ldexp(1.0, min_exp_)) return evaluate(pieces_.front(), x);
    int e = 0;
    const double m = std::frexp(x, &e);  // x = m 2^e, m in [0.5, 1)
    const Block& b = blocks_[static_cast<std::size_t>(e - 1 - min_exp_)];
    int i = static_cast<int>((2.0 * m - 1.0) * b.count);
    if (i >= b.count) i = b.count - 1;
    return evaluate(pieces_[static_cast<std::size_t>(b.first + i)], x);
}

}  // namespace fracflow
