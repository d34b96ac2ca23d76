#include "fracflow/norms.hpp"

#include <cmath>
#include <string>

#include "fracflow/errors.hpp"

namespace fracflow {
namespace {

/// Prefix sums of |f|^p over the periodic extension [-M/2, 3M/2) per axis.
class WindowSums {
public:
    WindowSums(const Field& f, double p) : dim_(f.grid().dim), m_(f.grid().points), e_(2 * m_) {
        const int half = m_ / 2;
        auto wrapped = [&](int e) { return ((e - half) % m_ + m_) % m_; };
        if (dim_ == 1) {
            prefix_.assign(static_cast<std::size_t>(e_) + 1, 0.0L);
            for (int a = 0; a < e_; ++a) {
                prefix_[a + 1] = prefix_[a] + std::pow(std::abs(f.at(wrapped(a))), p);
            }
            return;
        }
        std::vector<long double> cell(static_cast<std::size_t>(m_) * m_);
        for (std::size_t k = 0; k < cell.size(); ++k) cell[k] = std::pow(std::abs(f[k]), p);
        const std::size_t w = static_cast<std::size_t>(e_) + 1;
        prefix_.assign(w * w, 0.0L);
        for (int a = 0; a < e_; ++a) {
            long double row = 0.0L;
            const std::size_t ia = static_cast<std::size_t>(wrapped(a)) * m_;
            for (int b = 0; b < e_; ++b) {
                row += cell[ia + wrapped(b)];
                prefix_[(a + 1) * w + b + 1] = prefix_[a * w + b + 1] + row;
            }
        }
    }

    /// Sum over the closed rectangle of half-widths (a, b) around node (i, j).
    [[nodiscard]] long double rect(int i, int j, int a, int b) const {
        if (a < 0 || b < 0) return 0.0L;
        const int half = m_ / 2;
        const int r0 = i - a + half;
        const int r1 = i + a + half + 1;
        if (dim_ == 1) return prefix_[r1] - prefix_[r0];
        const int c0 = j - b + half;
        const int c1 = j + b + half + 1;
        const std::size_t w = static_cast<std::size_t>(e_) + 1;
        return prefix_[r1 * w + c1] - prefix_[r0 * w + c1] - prefix_[r1 * w + c0] + prefix_[r0 * w + c0];
    }

    /// Trapezoid-weighted cube sum: the weight of a node on the boundary is
    /// 1/2 per face it lies on.
    [[nodiscard]] long double cube(int i, int j, int k) const {
        if (dim_ == 1) return 0.5L * (rect(i, 0, k, 0) + rect(i, 0, k - 1, 0));
        return 0.25L * (rect(i, j, k, k) + rect(i, j, k, k - 1) + rect(i, j, k - 1, k) +
                        rect(i, j, k - 1, k - 1));
    }

private:
    int dim_;
    int m_;
    int e_;
    std::vector<long double> prefix_;
};

MorreyResult sup_over(const WindowSums& sums, const Grid& g, const NormSpec& spec,
                      std::span<const Cube> cubes) {
    require(!cubes.empty(), ErrorKind::empty_ball_family, "no cubes in the ball family");
    const double h = g.spacing();
    const double vol = g.cell_volume();
    MorreyResult best;
    best.value = -1.0;
    for (const Cube& c : cubes) {
        const double r = c.k * h;
        const long double s = sums.cube(c.i, c.j, c.k);
        const double mass = static_cast<double>(s) * vol;
        const double v = std::pow(r, -spec.mu / spec.p) * std::pow(std::max(mass, 0.0), 1.0 / spec.p);
        if (v > best.value) {
            best.value = v;
            best.argmax_radius = r;
            best.argmax_center = {g.coordinate(c.i)};
            if (g.dim == 2) best.argmax_center.push_back(g.coordinate(c.j));
        }
    }
    return best;
}

int nearest_node(const Grid& g, double x) {
    return static_cast<int>(std::lround(x / g.spacing())) + g.points / 2;
}

}  // namespace

void NormSpec::validate(int dim) const {
    require(p >= 1.0 && std::isfinite(p), ErrorKind::domain, "norm exponent p must be >= 1");
    require(mu >= 0.0 && mu < dim, ErrorKind::domain, "Morrey index mu must lie in [0, N)");
}

BallFamily BallFamily::dyadic(const Grid& grid, int stride) {
    grid.validate();
    BallFamily b;
    b.center_stride = stride;
    for (int k = 1; k <= grid.points / 2; k *= 2) b.radii_cells.push_back(k);
    return b;
}

BallFamily BallFamily::full_lattice(const Grid& grid) {
    grid.validate();
    BallFamily b;
    b.center_stride = 1;
    for (int k = 1; k <= grid.points / 2; ++k) b.radii_cells.push_back(k);
    return b;
}

std::vector<Cube> BallFamily::cubes(const Grid& grid) const {
    require(center_stride >= 1, ErrorKind::empty_ball_family, "center stride must be positive");
    const int m = grid.points;
    const int half = m / 2;
    const double h = grid.spacing();
    std::vector<int> centers;
    for (int i = 0; i < m; ++i) {
        if ((i - half) % center_stride == 0) centers.push_back(i);
    }
    std::vector<Cube> out;
    for (int k : radii_cells) {
        require(k >= 1 && k <= half, ErrorKind::domain, "cube radius must lie in [h, L/2]");
        auto inside = [&](int i) {
            return region_half_width <= 0.0 ||
                   std::abs(grid.coordinate(i)) + k * h <= region_half_width * (1.0 + 1e-12);
        };
        for (int i : centers) {
            if (!inside(i)) continue;
            if (grid.dim == 1) {
                out.push_back({i, 0, k});
                continue;
            }
            for (int j : centers) {
                if (inside(j)) out.push_back({i, j, k});
            }
        }
    }
    return out;
}

MorreyResult morrey_norm(const Field& f, const NormSpec& spec, std::span<const Cube> cubes) {
    spec.validate(f.grid().dim);
    const WindowSums sums(f, spec.p);
    return sup_over(sums, f.grid(), spec, cubes);
}

MorreyResult morrey_norm(const Field& f, const NormSpec& spec, const BallFamily& balls) {
    const std::vector<Cube> cubes = balls.cubes(f.grid());
    return morrey_norm(f, spec, cubes);
}

MorreyResult sobolev_morrey_norm(const Field& f, const NormSpec& spec, const BallFamily& balls) {
    if (spec.s == 0.0) return morrey_norm(f, spec, balls);
    return morrey_norm(riesz(spec.s, f), spec, balls);
}

double scaling_residual(const Field& f, double gamma, const NormSpec& spec, int stride,
                        double trusted_fraction) {
    require(gamma > 0.0 && std::isfinite(gamma), ErrorKind::domain, "dilation factor must be positive");
    spec.validate(f.grid().dim);
    const Grid& g = f.grid();
    const double trusted = trusted_fraction * 0.5 * g.length;
    const double region = trusted * std::min(1.0, 1.0 / gamma);

    // samples of f(gamma x) on the nodes of the sub-box
    std::vector<int> idx;
    std::vector<double> xs;
    for (int i = 0; i < g.points; ++i) {
        if (std::abs(g.coordinate(i)) <= region * (1.0 + 1e-12)) {
            idx.push_back(i);
            xs.push_back(gamma * g.coordinate(i));
        }
    }
    Field dilated(g);
    if (gamma == 1.0) {
        for (int i : idx) {
            if (g.dim == 1) {
                dilated.at(i) = f.at(i);
                continue;
            }
            for (int j : idx) dilated.at(i, j) = f.at(i, j);
        }
    } else {
        const SpectralField F = transform_forward(f);
        const std::vector<double> vals = eval_on_tensor_grid(F, xs, g.dim == 2 ? std::span<const double>(xs)
                                                                                : std::span<const double>());
        for (std::size_t a = 0; a < idx.size(); ++a) {
            if (g.dim == 1) {
                dilated.at(idx[a]) = vals[a];
                continue;
            }
            for (std::size_t b = 0; b < idx.size(); ++b) dilated.at(idx[a], idx[b]) = vals[a * idx.size() + b];
        }
    }

    BallFamily family = BallFamily::dyadic(g, stride);
    family.region_half_width = region;
    std::vector<Cube> cubes;
    std::vector<Cube> images;
    for (const Cube& c : family.cubes(g)) {
        const int k = static_cast<int>(std::lround(gamma * c.k));
        if (k < 1 || k > g.points / 2) continue;
        Cube im{nearest_node(g, gamma * g.coordinate(c.i)), 0, k};
        if (g.dim == 2) im.j = nearest_node(g, gamma * g.coordinate(c.j));
        cubes.push_back(c);
        images.push_back(im);
    }
    require(!cubes.empty(), ErrorKind::empty_ball_family, "no cube survives the dilation");
    const double n_dilated = morrey_norm(dilated, spec, cubes).value;
    const double n_ref = morrey_norm(f, spec, images).value;
    require(n_ref > 0.0, ErrorKind::domain, "reference norm vanishes");
    const double factor = std::pow(gamma, -(g.dim - spec.mu) / spec.p);
    return std::abs(n_dilated - factor * n_ref) / n_ref;
}

double holder_residual(const Field& f, const Field& g, double p1, double p2, double p3, double mu1,
                       double mu2, double mu3, const BallFamily& balls) {
    require(f.grid() == g.grid(), ErrorKind::shape_mismatch, "fields live on different grids");
    const double tol = 1e-12;
    if (std::abs(1.0 / p3 - (1.0 / p1 + 1.0 / p2)) > tol ||
        std::abs(mu3 / p3 - (mu1 / p1 + mu2 / p2)) > tol) {
        raise(ErrorKind::parameter_mismatch,
              "Hoelder relations 1/p3 = 1/p1 + 1/p2 and mu3/p3 = mu1/p1 + mu2/p2 violated");
    }
    Field fg(f.grid());
    for (std::size_t k = 0; k < fg.size(); ++k) fg[k] = f[k] * g[k];
    const std::vector<Cube> cubes = balls.cubes(f.grid());
    const double lhs = morrey_norm(fg, {p3, mu3, 0.0}, cubes).value;
    const double rhs = morrey_norm(f, {p1, mu1, 0.0}, cubes).value * morrey_norm(g, {p2, mu2, 0.0}, cubes).value;
    return std::max(0.0, lhs - rhs);
}

}  // namespace fracflow
