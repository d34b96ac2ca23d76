#pragma once

#include <complex>
#include <cstddef>
#include <memory>
#include <span>
#include <vector>

#include "fracflow/ml_table.hpp"

namespace fracflow {

/// Periodic box [-L/2, L/2)^dim with M points per axis.
struct Grid {
    int dim = 2;
    int points = 64;
    double length = 1.0;

    void validate() const;
    [[nodiscard]] double spacing() const noexcept { return length / points; }
    [[nodiscard]] std::size_t size() const noexcept {
        return dim == 1 ? static_cast<std::size_t>(points)
                        : static_cast<std::size_t>(points) * static_cast<std::size_t>(points);
    }
    [[nodiscard]] double coordinate(int index) const noexcept {
        return -0.5 * length + index * spacing();
    }
    /// Signed frequency of an FFT-ordered index: 0..M/2-1, then -M/2..-1.
    [[nodiscard]] int frequency(int index) const noexcept {
        return index < points / 2 ? index : index - points;
    }
    [[nodiscard]] double cell_volume() const noexcept {
        return dim == 1 ? spacing() : spacing() * spacing();
    }

    bool operator==(const Grid&) const = default;
};

/// Real samples, row-major: value(i, j) sits at (x_i, y_j) and index i*M + j.
class Field {
public:
    explicit Field(const Grid& grid);
    Field(const Grid& grid, std::vector<double> values);

    [[nodiscard]] const Grid& grid() const noexcept { return grid_; }
    [[nodiscard]] std::span<double> values() noexcept { return values_; }
    [[nodiscard]] std::span<const double> values() const noexcept { return values_; }
    [[nodiscard]] std::size_t size() const noexcept { return values_.size(); }

    double& operator[](std::size_t k) noexcept { return values_[k]; }
    double operator[](std::size_t k) const noexcept { return values_[k]; }
    double& at(int i, int j = 0) noexcept { return values_[index(i, j)]; }
    [[nodiscard]] double at(int i, int j = 0) const noexcept { return values_[index(i, j)]; }

    Field& operator+=(const Field& o);
    Field& operator-=(const Field& o);
    Field& operator*=(double s) noexcept;

    [[nodiscard]] double max_abs() const noexcept;
    /// sqrt(sum f^2 h^dim)
    [[nodiscard]] double l2_norm() const noexcept;
    [[nodiscard]] bool all_finite() const noexcept;

private:
    [[nodiscard]] std::size_t index(int i, int j) const noexcept {
        return grid_.dim == 1 ? static_cast<std::size_t>(i)
                              : static_cast<std::size_t>(i) * grid_.points + j;
    }

    Grid grid_;
    std::vector<double> values_;
};

Field operator+(Field a, const Field& b);
Field operator-(Field a, const Field& b);
Field operator*(double s, Field a);

/// Coefficients c_m with f(x) = sum_m c_m exp(2 pi i m.x / L), so that
/// c_m = M^{-dim} sum_x f(x) exp(-2 pi i m.x / L) and the continuum transform
/// f^(xi) = int exp(-2 pi i x.xi) f(x) dx is approximated by L^dim c_m at
/// xi = m/L. Parseval: sum |f|^2 h^dim = L^dim sum |c_m|^2.
/// Storage is FFT-ordered per axis, row-major like Field.
class SpectralField {
public:
    explicit SpectralField(const Grid& grid);

    [[nodiscard]] const Grid& grid() const noexcept { return grid_; }
    [[nodiscard]] std::span<std::complex<double>> coeffs() noexcept { return coeffs_; }
    [[nodiscard]] std::span<const std::complex<double>> coeffs() const noexcept { return coeffs_; }

    /// Coefficient for the signed frequency vector (m1, m2); m2 ignored in 1D.
    std::complex<double>& at(int m1, int m2 = 0) noexcept;
    [[nodiscard]] std::complex<double> at(int m1, int m2 = 0) const noexcept;

private:
    [[nodiscard]] std::size_t index(int m1, int m2) const noexcept;

    Grid grid_;
    std::vector<std::complex<double>> coeffs_;
};

SpectralField transform_forward(const Field& f);
Field transform_inverse(const SpectralField& F);

enum class MultiplierKind { one, two, alpha_alpha };

struct MultiplierSpec {
    double alpha = 1.5;
    MultiplierKind j = MultiplierKind::one;
    double t = 0.0;
};

/// Symbols t^{j-1} E_{alpha,j}(-4 pi^2 t^alpha |xi|^2) backed by shared
/// Mittag-Leffler tables. Thread-safe for concurrent reads.
class MultiplierSymbols {
public:
    explicit MultiplierSymbols(double alpha, double x_max = 1099511627776.0);

    [[nodiscard]] double alpha() const noexcept { return alpha_; }
    /// E_{alpha,j}(-x) for x >= 0.
    [[nodiscard]] double mittag_leffler(MultiplierKind j, double x) const;
    /// Symbol value at |xi|^2 = xi2 and time t.
    [[nodiscard]] double symbol(MultiplierKind j, double t, double xi2) const;

private:
    double alpha_;
    std::shared_ptr<const MittagLefflerTable> e1_, e2_, ea_;
};

/// Builds fresh symbol tables for the call. Pass `symbols` to reuse them.
Field apply_G(const MultiplierSpec& spec, const Field& f);
Field apply_G(const MultiplierSpec& spec, const Field& f, const MultiplierSymbols& symbols);

/// Multiplies by (2 pi |xi|)^s; the zero mode is always mapped to 0.
Field riesz(double s, const Field& f);

std::vector<Field> gradient(const Field& f);

/// Euclidean magnitude of the spectral gradient.
Field gradient_magnitude(const Field& f);

std::vector<double> eval_at_points(const SpectralField& F, std::span<const std::vector<double>> pts);

/// f at the tensor grid xs (x) ys (ys ignored in 1D), by separable direct sums.
std::vector<double> eval_on_tensor_grid(const SpectralField& F, std::span<const double> xs,
                                        std::span<const double> ys = {});

/// Zeroes every coefficient with some |m_i| > M/3.
SpectralField dealias(const SpectralField& F);

// ---- half-spectrum kernels used by the time stepper --------------------------

/// Real-to-complex transform pair for one grid. Coefficients are the raw DFT
/// scaled by M^{-dim}, without the box-offset phase; fine for any multiplier
/// that depends on |m| only or on m through i m (the phase commutes).
class HalfSpectrumFft {
public:
    explicit HalfSpectrumFft(const Grid& grid);
    ~HalfSpectrumFft();
    HalfSpectrumFft(const HalfSpectrumFft&) = delete;
    HalfSpectrumFft& operator=(const HalfSpectrumFft&) = delete;

    [[nodiscard]] const Grid& grid() const noexcept { return grid_; }
    [[nodiscard]] std::size_t half_size() const noexcept { return half_size_; }
    /// Number of stored frequencies along the last axis (M/2 + 1).
    [[nodiscard]] int last_extent() const noexcept { return grid_.points / 2 + 1; }
    /// Squared integer frequency |m|^2 of half-spectrum slot k.
    [[nodiscard]] int k2(std::size_t k) const noexcept { return k2_[k]; }
    /// Signed integer frequency of slot k along axis 0 or 1.
    [[nodiscard]] int mode(std::size_t k, int axis) const noexcept;
    [[nodiscard]] bool inside_dealias(std::size_t k) const noexcept { return dealias_[k] != 0; }

    void forward(std::span<const double> in, std::span<std::complex<double>> out) const;
    /// Consumes `in` as scratch.
    void inverse(std::span<std::complex<double>> in, std::span<double> out) const;

private:
    struct Impl;
    Grid grid_;
    std::size_t half_size_;
    std::vector<int> k2_;
    std::vector<unsigned char> dealias_;
    std::unique_ptr<Impl> impl_;
};

}  // namespace fracflow
