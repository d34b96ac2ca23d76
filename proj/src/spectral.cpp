#include "fracflow/spectral.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <mutex>
#include <numbers>

#include "fracflow/errors.hpp"

namespace fracflow {
namespace {

using cplx = std::complex<double>;
constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr double kFourPi2 = 4.0 * std::numbers::pi * std::numbers::pi;

std::mutex& planner_mutex() {
    static std::mutex m;
    return m;
}

bool is_power_of_two(int n) { return n > 0 && (n & (n - 1)) == 0; }

int wrap(int m, int n) { return ((m % n) + n) % n; }

void require_same_grid(const Grid& a, const Grid& b) {
    require(a == b, ErrorKind::shape_mismatch, "fields live on different grids");
}

}  // namespace

// ---- Grid / Field ---------------------------------------------------------------

void Grid::validate() const {
    require(dim == 1 || dim == 2, ErrorKind::domain, "grid dim must be 1 or 2");
    require(points >= 16 && is_power_of_two(points), ErrorKind::domain,
            "points per axis must be a power of two >= 16");
    require(length > 0.0 && std::isfinite(length), ErrorKind::domain, "box length must be positive");
}

Field::Field(const Grid& grid) : grid_(grid) {
    grid_.validate();
    values_.assign(grid_.size(), 0.0);
}

Field::Field(const Grid& grid, std::vector<double> values) : grid_(grid), values_(std::move(values)) {
    grid_.validate();
    require(values_.size() == grid_.size(), ErrorKind::shape_mismatch,
            "value count does not match the grid");
}

Field& Field::operator+=(const Field& o) {
    require_same_grid(grid_, o.grid_);
    for (std::size_t k = 0; k < values_.size(); ++k) values_[k] += o.values_[k];
    return *this;
}

Field& Field::operator-=(const Field& o) {
    require_same_grid(grid_, o.grid_);
    for (std::size_t k = 0; k < values_.size(); ++k) values_[k] -= o.values_[k];
    return *this;
}

Field& Field::operator*=(double s) noexcept {
    for (double& v : values_) v *= s;
    return *this;
}

double Field::max_abs() const noexcept {
    double m = 0.0;
    for (double v : values_) m = std::max(m, std::abs(v));
    return m;
}

double Field::l2_norm() const noexcept {
    double s = 0.0;
    for (double v : values_) s += v * v;
    return std::sqrt(s * grid_.cell_volume());
}

bool Field::all_finite() const noexcept {
    return std::all_of(values_.begin(), values_.end(), [](double v) { return std::isfinite(v); });
}

Field operator+(Field a, const Field& b) { return a += b; }
Field operator-(Field a, const Field& b) { return a -= b; }
Field operator*(double s, Field a) { return a *= s; }

SpectralField::SpectralField(const Grid& grid) : grid_(grid) {
    grid_.validate();
    coeffs_.assign(grid_.size(), cplx(0.0));
}

std::size_t SpectralField::index(int m1, int m2) const noexcept {
    const int n = grid_.points;
    if (grid_.dim == 1) return static_cast<std::size_t>(wrap(m1, n));
    return static_cast<std::size_t>(wrap(m1, n)) * n + wrap(m2, n);
}

cplx& SpectralField::at(int m1, int m2) noexcept { return coeffs_[index(m1, m2)]; }
cplx SpectralField::at(int m1, int m2) const noexcept { return coeffs_[index(m1, m2)]; }

// ---- FFTW wrapper ------------------------------------------------------------------

struct HalfSpectrumFft::Impl {
    fftw_plan r2c = nullptr;
    fftw_plan c2r = nullptr;
};

HalfSpectrumFft::HalfSpectrumFft(const Grid& grid) : grid_(grid), impl_(std::make_unique<Impl>()) {
    grid_.validate();
    const int n = grid_.points;
    const int last = n / 2 + 1;
    half_size_ = grid_.dim == 1 ? static_cast<std::size_t>(last)
                                : static_cast<std::size_t>(n) * static_cast<std::size_t>(last);
    k2_.resize(half_size_);
    dealias_.resize(half_size_);
    for (std::size_t k = 0; k < half_size_; ++k) {
        const int m0 = mode(k, 0);
        const int m1 = grid_.dim == 2 ? mode(k, 1) : 0;
        k2_[k] = m0 * m0 + m1 * m1;
        dealias_[k] = (3 * std::abs(m0) <= n && 3 * std::abs(m1) <= n) ? 1 : 0;
    }
    std::vector<double> in(grid_.size());
    std::vector<cplx> out(half_size_);
    auto* rin = in.data();
    auto* cout = reinterpret_cast<fftw_complex*>(out.data());
    const unsigned flags = FFTW_ESTIMATE | FFTW_UNALIGNED;
    std::lock_guard lock(planner_mutex());
    if (grid_.dim == 1) {
        impl_->r2c = fftw_plan_dft_r2c_1d(n, rin, cout, flags);
        impl_->c2r = fftw_plan_dft_c2r_1d(n, cout, rin, flags);
    } else {
        impl_->r2c = fftw_plan_dft_r2c_2d(n, n, rin, cout, flags);
        impl_->c2r = fftw_plan_dft_c2r_2d(n, n, cout, rin, flags);
    }
    if (impl_->r2c == nullptr || impl_->c2r == nullptr) {
        raise(ErrorKind::domain, "FFT planning failed");
    }
}

HalfSpectrumFft::~HalfSpectrumFft() {
    std::lock_guard lock(planner_mutex());
    if (impl_->r2c) fftw_destroy_plan(impl_->r2c);
    if (impl_->c2r) fftw_destroy_plan(impl_->c2r);
}

int HalfSpectrumFft::mode(std::size_t k, int axis) const noexcept {
    const int last = last_extent();
    if (grid_.dim == 1) return axis == 0 ? static_cast<int>(k) : 0;
    const int i = static_cast<int>(k / static_cast<std::size_t>(last));
    const int j = static_cast<int>(k % static_cast<std::size_t>(last));
    return axis == 0 ? grid_.frequency(i) : j;
}

void HalfSpectrumFft::forward(std::span<const double> in, std::span<cplx> out) const {
    require(in.size() == grid_.size() && out.size() == half_size_, ErrorKind::shape_mismatch,
            "forward transform buffer sizes");
    // out-of-place r2c leaves the input untouched
    fftw_execute_dft_r2c(impl_->r2c, const_cast<double*>(in.data()),
                         reinterpret_cast<fftw_complex*>(out.data()));
    const double scale = 1.0 / static_cast<double>(grid_.size());
    for (cplx& c : out) c *= scale;
}

void HalfSpectrumFft::inverse(std::span<cplx> in, std::span<double> out) const {
    require(in.size() == half_size_ && out.size() == grid_.size(), ErrorKind::shape_mismatch,
            "inverse transform buffer sizes");
    fftw_execute_dft_c2r(impl_->c2r, reinterpret_cast<fftw_complex*>(in.data()), out.data());
}

// ---- full spectrum -------------------------------------------------------------------

SpectralField transform_forward(const Field& f) {
    const Grid& g = f.grid();
    const HalfSpectrumFft fft(g);
    std::vector<cplx> half(fft.half_size());
    fft.forward(f.values(), half);
    SpectralField F(g);
    for (std::size_t k = 0; k < half.size(); ++k) {
        const int m0 = fft.mode(k, 0);
        const int m1 = g.dim == 2 ? fft.mode(k, 1) : 0;
        // shift from the FFT origin at the box corner to x = 0
        const double phase = ((m0 + m1) % 2 == 0) ? 1.0 : -1.0;
        const cplx c = phase * half[k];
        F.at(m0, m1) = c;
        F.at(-m0, -m1) = std::conj(c);
    }
    // slots with m_last = 0 or M/2 are their own mirror in the last axis; restore them
    for (std::size_t k = 0; k < half.size(); ++k) {
        const int m0 = fft.mode(k, 0);
        const int m1 = g.dim == 2 ? fft.mode(k, 1) : 0;
        const double phase = ((m0 + m1) % 2 == 0) ? 1.0 : -1.0;
        const int last = g.dim == 2 ? m1 : m0;
        if (last == 0 || last == g.points / 2) F.at(m0, m1) = phase * half[k];
    }
    return F;
}

Field transform_inverse(const SpectralField& F) {
    const Grid& g = F.grid();
    const HalfSpectrumFft fft(g);
    std::vector<cplx> half(fft.half_size());
    for (std::size_t k = 0; k < half.size(); ++k) {
        const int m0 = fft.mode(k, 0);
        const int m1 = g.dim == 2 ? fft.mode(k, 1) : 0;
        const double phase = ((m0 + m1) % 2 == 0) ? 1.0 : -1.0;
        half[k] = phase * F.at(m0, m1);
    }
    Field f(g);
    fft.inverse(half, f.values());
    return f;
}

// ---- multipliers ---------------------------------------------------------------------

namespace {

bool table_supported(double alpha) { return alpha > 1.0 && alpha < 2.0; }

// Other alphas without tables fall back to the series; keep to its reach.
constexpr double kSeriesReach = 64.0;

/// Heat and wave limits: E_{1,1}(-x) = e^{-x}, E_{1,2}(-x) = (1 - e^{-x})/x,
/// E_{2,1}(-x) = cos sqrt(x), E_{2,2}(-x) = sin sqrt(x) / sqrt(x).
double boundary_closed_form(double alpha, double beta, double x) {
    if (alpha == 1.0) {
        if (beta == 1.0) return std::exp(-x);
        return x < 1e-8 ? 1.0 - 0.5 * x : -std::expm1(-x) / x;
    }
    const double r = std::sqrt(x);
    if (beta == 1.0) return std::cos(r);
    return r < 1e-8 ? 1.0 - x / 6.0 : std::sin(r) / r;
}

double power_symbol(double t, double exponent) { return t == 0.0 ? 0.0 : std::pow(t, exponent); }

template <class Symbol>
Field apply_radial(const Field& f, Symbol&& symbol_of_k2) {
    const Grid& g = f.grid();
    const HalfSpectrumFft fft(g);
    std::vector<cplx> half(fft.half_size());
    fft.forward(f.values(), half);
    const int max_k2 = g.dim * (g.points / 2) * (g.points / 2);
    std::vector<double> cache(static_cast<std::size_t>(max_k2) + 1,
                              std::numeric_limits<double>::quiet_NaN());
    for (std::size_t k = 0; k < half.size(); ++k) {
        double& s = cache[static_cast<std::size_t>(fft.k2(k))];
        if (std::isnan(s)) s = symbol_of_k2(fft.k2(k));
        half[k] *= s;
    }
    Field out(g);
    fft.inverse(half, out.values());
    return out;
}

}  // namespace

MultiplierSymbols::MultiplierSymbols(double alpha, double x_max) : alpha_(alpha) {
    require(alpha > 0.0 && alpha <= 2.0, ErrorKind::domain, "alpha must lie in (0, 2]");
    if (table_supported(alpha)) {
        e1_ = std::make_shared<const MittagLefflerTable>(MLParams{alpha, 1.0}, x_max);
        e2_ = std::make_shared<const MittagLefflerTable>(MLParams{alpha, 2.0}, x_max);
        ea_ = std::make_shared<const MittagLefflerTable>(MLParams{alpha, alpha}, x_max);
    }
}

double MultiplierSymbols::mittag_leffler(MultiplierKind j, double x) const {
    const double beta = j == MultiplierKind::one ? 1.0 : j == MultiplierKind::two ? 2.0 : alpha_;
    if (!e1_) {
        if (alpha_ == 1.0 || alpha_ == 2.0) return boundary_closed_form(alpha_, beta, x);
        require(x <= kSeriesReach, ErrorKind::domain,
                "alpha outside (1,2) needs the decomposition beyond series reach");
        return ml_real({alpha_, beta}, -x);
    }
    const MittagLefflerTable& t = j == MultiplierKind::one ? *e1_ : j == MultiplierKind::two ? *e2_ : *ea_;
    return t(x);
}

double MultiplierSymbols::symbol(MultiplierKind j, double t, double xi2) const {
    require(t >= 0.0, ErrorKind::domain, "multiplier time must be nonnegative");
    const double x = kFourPi2 * std::pow(t, alpha_) * xi2;
    switch (j) {
        case MultiplierKind::one: return mittag_leffler(j, x);
        case MultiplierKind::two: return t == 0.0 ? 0.0 : t * mittag_leffler(j, x);
        case MultiplierKind::alpha_alpha:
            return power_symbol(t, alpha_ - 1.0) * mittag_leffler(j, x);
    }
    return 0.0;
}

Field apply_G(const MultiplierSpec& spec, const Field& f, const MultiplierSymbols& symbols) {
    require(spec.t >= 0.0, ErrorKind::domain, "multiplier time must be nonnegative");
    require(spec.alpha == symbols.alpha(), ErrorKind::parameter_mismatch,
            "symbol tables built for a different alpha");
    const double inv_l2 = 1.0 / (f.grid().length * f.grid().length);
    return apply_radial(f, [&](int k2) { return symbols.symbol(spec.j, spec.t, k2 * inv_l2); });
}

Field apply_G(const MultiplierSpec& spec, const Field& f) {
    require(spec.t >= 0.0, ErrorKind::domain, "multiplier time must be nonnegative");
    const Grid& g = f.grid();
    const double max_xi2 = g.dim * std::pow(0.5 * g.points / g.length, 2);
    const double x_max = std::max(2.0, 1.01 * kFourPi2 * std::pow(spec.t, spec.alpha) * max_xi2);
    if (!table_supported(spec.alpha)) {
        const MultiplierSymbols symbols(spec.alpha, x_max);
        return apply_G(spec, f, symbols);
    }
    const double beta = spec.j == MultiplierKind::one ? 1.0 : spec.j == MultiplierKind::two ? 2.0 : spec.alpha;
    const MittagLefflerTable table({spec.alpha, beta}, x_max);
    const double inv_l2 = 1.0 / (g.length * g.length);
    return apply_radial(f, [&](int k2) {
        const double x = kFourPi2 * std::pow(spec.t, spec.alpha) * k2 * inv_l2;
        const double e = table(x);
        switch (spec.j) {
            case MultiplierKind::one: return e;
            case MultiplierKind::two: return spec.t * e;
            case MultiplierKind::alpha_alpha: return power_symbol(spec.t, spec.alpha - 1.0) * e;
        }
        return 0.0;
    });
}

Field riesz(double s, const Field& f) {
    const double scale = kTwoPi / f.grid().length;
    return apply_radial(f, [&](int k2) {
        if (k2 == 0) return 0.0;
        return std::pow(scale * std::sqrt(static_cast<double>(k2)), s);
    });
}

std::vector<Field> gradient(const Field& f) {
    const Grid& g = f.grid();
    const HalfSpectrumFft fft(g);
    std::vector<cplx> half(fft.half_size());
    fft.forward(f.values(), half);
    std::vector<Field> out;
    std::vector<cplx> work(half.size());
    const double scale = kTwoPi / g.length;
    for (int axis = 0; axis < g.dim; ++axis) {
        for (std::size_t k = 0; k < half.size(); ++k) {
            const int m = fft.mode(k, axis);
            const bool nyquist = std::abs(m) == g.points / 2;
            work[k] = nyquist ? cplx(0.0) : half[k] * cplx(0.0, scale * m);
        }
        Field d(g);
        fft.inverse(work, d.values());
        out.push_back(std::move(d));
    }
    return out;
}

Field gradient_magnitude(const Field& f) {
    const std::vector<Field> grad = gradient(f);
    Field out(f.grid());
    for (std::size_t k = 0; k < out.size(); ++k) {
        double s = 0.0;
        for (const Field& c : grad) s += c[k] * c[k];
        out[k] = std::sqrt(s);
    }
    return out;
}

std::vector<double> eval_at_points(const SpectralField& F, std::span<const std::vector<double>> pts) {
    const Grid& g = F.grid();
    const int n = g.points;
    std::vector<double> out;
    out.reserve(pts.size());
    std::vector<cplx> e0(n);
    std::vector<cplx> e1(n);
    for (const auto& p : pts) {
        require(static_cast<int>(p.size()) == g.dim, ErrorKind::shape_mismatch,
                "point dimension does not match the grid");
        for (int i = 0; i < n; ++i) {
            const int m = g.frequency(i);
            e0[i] = std::polar(1.0, kTwoPi * m * p[0] / g.length);
            if (g.dim == 2) e1[i] = std::polar(1.0, kTwoPi * m * p[1] / g.length);
        }
        cplx s = 0.0;
        if (g.dim == 1) {
            for (int i = 0; i < n; ++i) s += F.coeffs()[i] * e0[i];
        } else {
            for (int i = 0; i < n; ++i) {
                cplx row = 0.0;
                for (int j = 0; j < n; ++j) row += F.coeffs()[static_cast<std::size_t>(i) * n + j] * e1[j];
                s += row * e0[i];
            }
        }
        out.push_back(s.real());
    }
    return out;
}

std::vector<double> eval_on_tensor_grid(const SpectralField& F, std::span<const double> xs,
                                        std::span<const double> ys) {
    const Grid& g = F.grid();
    const int n = g.points;
    auto phases = [&](std::span<const double> coords) {
        std::vector<cplx> e(coords.size() * static_cast<std::size_t>(n));
        for (std::size_t a = 0; a < coords.size(); ++a) {
            for (int i = 0; i < n; ++i) {
                e[a * n + i] = std::polar(1.0, kTwoPi * g.frequency(i) * coords[a] / g.length);
            }
        }
        return e;
    };
    const std::vector<cplx> ex = phases(xs);
    std::vector<double> out;
    if (g.dim == 1) {
        out.resize(xs.size());
        for (std::size_t a = 0; a < xs.size(); ++a) {
            cplx s = 0.0;
            for (int i = 0; i < n; ++i) s += F.coeffs()[i] * ex[a * n + i];
            out[a] = s.real();
        }
        return out;
    }
    const std::vector<cplx> ey = phases(ys);
    out.resize(xs.size() * ys.size());
    std::vector<cplx> partial(n);
    for (std::size_t a = 0; a < xs.size(); ++a) {
        std::fill(partial.begin(), partial.end(), cplx(0.0));
        for (int i = 0; i < n; ++i) {
            const cplx w = ex[a * n + i];
            const cplx* row = F.coeffs().data() + static_cast<std::size_t>(i) * n;
            for (int j = 0; j < n; ++j) partial[j] += w * row[j];
        }
        for (std::size_t b = 0; b < ys.size(); ++b) {
            cplx s = 0.0;
            for (int j = 0; j < n; ++j) s += partial[j] * ey[b * n + j];
            out[a * ys.size() + b] = s.real();
        }
    }
    return out;
}

SpectralField dealias(const SpectralField& F) {
    SpectralField out = F;
    const Grid& g = F.grid();
    const int n = g.points;
    auto keep = [n](int m) { return 3 * std::abs(m) <= n; };
    for (int i = 0; i < n; ++i) {
        const int m0 = g.frequency(i);
        if (g.dim == 1) {
            if (!keep(m0)) out.at(m0) = 0.0;
            continue;
        }
        for (int j = 0; j < n; ++j) {
            const int m1 = g.frequency(j);
            if (!keep(m0) || !keep(m1)) out.at(m0, m1) = 0.0;
        }
    }
    return out;
}

}  // namespace fracflow
