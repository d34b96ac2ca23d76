#include "fracflow/solver.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>

#include "fracflow/errors.hpp"
#include "fracflow/mlf.hpp"

namespace fracflow {

namespace {

using cplx = std::complex<double>;
constexpr double kFourPi2 = 4.0 * std::numbers::pi * std::numbers::pi;

double l2_distance(std::span<const double> a, std::span<const double> b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += (a[i] - b[i]) * (a[i] - b[i]);
    return std::sqrt(s);
}

double l2(std::span<const double> a) {
    double s = 0.0;
    for (double v : a) s += v * v;
    return std::sqrt(s);
}

/// Weight of panel [t_j, t_{j+1}] seen from t_n; `ml` evaluates E_{alpha,alpha}(-x).
template <class Ml>
double panel_weight(double alpha, double c, double tn, double tj, double tj1, bool last, Ml&& ml) {
    const double dt = tj1 - tj;
    if (last) {
        const double half = 0.5 * dt;
        return std::pow(dt, alpha) / alpha * ml(c * std::pow(half, alpha));
    }
    const double tau = tn - 0.5 * (tj + tj1);
    return dt * std::pow(tau, alpha - 1.0) * ml(c * std::pow(tau, alpha));
}

/// Nonlinear term on the half spectrum, dealiased. `scratch` is reused.
class NonlinearTerm {
public:
    NonlinearTerm(const HalfSpectrumFft& fft, const ProblemSpec& spec)
        : fft_(fft), spec_(spec), uh_(fft.half_size()), gh_(fft.half_size()),
          phys_(fft.grid().size()), grad2_(fft.grid().size()) {}

    /// Writes the dealiased transform of F(u) into `out` (full half spectrum).
    void operator()(std::span<const double> u, std::span<cplx> out) {
        const Grid& g = fft_.grid();
        const std::size_t n = u.size();
        std::fill(grad2_.begin(), grad2_.end(), 0.0);
        if (spec_.kappa1 != 0.0) {
            fft_.forward(u, uh_);
            const double scale = 2.0 * std::numbers::pi / g.length;
            for (int axis = 0; axis < g.dim; ++axis) {
                for (std::size_t k = 0; k < uh_.size(); ++k) {
                    const int m = fft_.mode(k, axis);
                    gh_[k] = 2 * std::abs(m) == g.points ? cplx(0.0) : cplx(0.0, scale * m) * uh_[k];
                }
                fft_.inverse(gh_, phys_);
                for (std::size_t i = 0; i < n; ++i) grad2_[i] += phys_[i] * phys_[i];
            }
        }
        for (std::size_t i = 0; i < n; ++i) {
            double v = 0.0;
            if (spec_.kappa2 != 0.0) v += spec_.kappa2 * std::pow(std::abs(u[i]), spec_.rho - 1.0) * u[i];
            if (spec_.kappa1 != 0.0) v += spec_.kappa1 * std::pow(grad2_[i], 0.5 * spec_.q);
            phys_[i] = v;
        }
        fft_.forward(phys_, out);
        for (std::size_t k = 0; k < out.size(); ++k)
            if (!fft_.inside_dealias(k)) out[k] = 0.0;
    }

private:
    const HalfSpectrumFft& fft_;
    const ProblemSpec& spec_;
    std::vector<cplx> uh_, gh_;
    std::vector<double> phys_, grad2_;
};

/// Index of each slot's |m|^2 among the distinct values, for slots selected by `keep`.
template <class Keep>
std::vector<int> distinct_k2(const HalfSpectrumFft& fft, std::vector<int>& values, Keep&& keep) {
    values.clear();
    for (std::size_t k = 0; k < fft.half_size(); ++k)
        if (keep(k)) values.push_back(fft.k2(k));
    std::sort(values.begin(), values.end());
    values.erase(std::unique(values.begin(), values.end()), values.end());
    std::vector<int> idx;
    for (std::size_t k = 0; k < fft.half_size(); ++k)
        if (keep(k))
            idx.push_back(static_cast<int>(std::lower_bound(values.begin(), values.end(), fft.k2(k)) -
                                           values.begin()));
    return idx;
}

}  // namespace

void ProblemSpec::validate(bool scaling) const {
    require(alpha > 1.0 && alpha < 2.0, ErrorKind::domain, "alpha must lie in (1, 2)");
    require(rho > 1.0, ErrorKind::domain, "rho must exceed 1");
    require(q > 1.0 && q < 2.0, ErrorKind::domain, "q must lie in (1, 2)");
    require(std::isfinite(kappa1) && std::isfinite(kappa2), ErrorKind::domain, "kappa must be finite");
    if (scaling)
        require(std::abs(q - scaling_q(rho)) <= 1e-12, ErrorKind::parameter_mismatch,
                "scaling experiments need q = 2 rho/(rho+1)");
}

void TimeGrid::validate() const {
    require(t_start >= 0.0, ErrorKind::domain, "t_start must be >= 0");
    require(t_end > t_start, ErrorKind::domain, "t_end must exceed t_start");
    require(n_steps >= 1, ErrorKind::domain, "n_steps must be >= 1");
    require(grading >= 1.0, ErrorKind::domain, "grading must be >= 1");
}

double TimeGrid::node(int n) const {
    if (n == n_steps) return t_end;
    const double s = static_cast<double>(n) / n_steps;
    return t_start + (t_end - t_start) * (grading == 1.0 ? s : std::pow(s, grading));
}

std::vector<double> TimeGrid::nodes() const {
    std::vector<double> t(static_cast<std::size_t>(n_steps) + 1);
    for (int n = 0; n <= n_steps; ++n) t[static_cast<std::size_t>(n)] = node(n);
    return t;
}

void PicardConfig::validate() const {
    require(max_sweeps >= 1, ErrorKind::domain, "max_sweeps must be >= 1");
    require(sweep_tol > 0.0, ErrorKind::domain, "sweep_tol must be positive");
    require(epsilon_data >= 0.0, ErrorKind::domain, "epsilon_data must be >= 0");
    require(save_every >= 1, ErrorKind::domain, "save_every must be >= 1");
    require(overflow_threshold > 0.0, ErrorKind::domain, "overflow_threshold must be positive");
}

double memory_kernel(double alpha, double c, double tau) {
    require(tau > 0.0, ErrorKind::domain, "kernel argument must be positive");
    return std::pow(tau, alpha - 1.0) * ml_real({alpha, alpha}, -c * std::pow(tau, alpha));
}

std::vector<double> memory_weights(double alpha, double c, const TimeGrid& grid, int n) {
    grid.validate();
    require(n >= 1 && n <= grid.n_steps, ErrorKind::domain, "step index out of range");
    require(c >= 0.0, ErrorKind::domain, "mode constant must be >= 0");
    auto ml = [alpha](double x) { return ml_real({alpha, alpha}, -x); };
    std::vector<double> w(static_cast<std::size_t>(n));
    const double tn = grid.node(n);
    for (int j = 0; j < n; ++j)
        w[static_cast<std::size_t>(j)] = panel_weight(alpha, c, tn, grid.node(j), grid.node(j + 1), j == n - 1, ml);
    return w;
}

Field nonlinearity(const Field& u, const ProblemSpec& spec) {
    const HalfSpectrumFft fft(u.grid());
    std::vector<cplx> fh(fft.half_size());
    NonlinearTerm term(fft, spec);
    term(u.values(), fh);
    Field out(u.grid());
    fft.inverse(fh, out.values());
    return out;
}

Field linear_part(const InitialData& data, double alpha, double t) {
    require(t >= 0.0, ErrorKind::domain, "time must be >= 0");
    require(data.phi.grid() == data.psi.grid(), ErrorKind::shape_mismatch, "phi and psi grids differ");
    const Grid& g = data.phi.grid();
    const double max_xi2 = g.dim * std::pow(0.5 * g.points / g.length, 2);
    const MultiplierSymbols symbols(alpha, std::max(2.0, 1.01 * kFourPi2 * std::pow(t, alpha) * max_xi2));
    return apply_G({alpha, MultiplierKind::one, t}, data.phi, symbols) +
           apply_G({alpha, MultiplierKind::two, t}, data.psi, symbols);
}

const char* to_string(TrajectoryStatus s) noexcept {
    switch (s) {
        case TrajectoryStatus::completed: return "completed";
        case TrajectoryStatus::non_contraction: return "non_contraction";
        case TrajectoryStatus::overflow: return "overflow";
    }
    return "?";
}

double Trajectory::max_contraction() const noexcept {
    double m = 0.0;
    for (const auto& d : diagnostics) m = std::max(m, d.contraction);
    return m;
}

int Trajectory::max_sweeps() const noexcept {
    int m = 0;
    for (const auto& d : diagnostics) m = std::max(m, d.sweeps);
    return m;
}

Field Trajectory::at(double t) const {
    require(!fields.empty(), ErrorKind::empty_trajectory, "trajectory holds no fields");
    const double tol = 1e-12 * std::max(1.0, std::abs(times.back()));
    require(t >= times.front() - tol && t <= times.back() + tol, ErrorKind::insufficient_overlap,
            "time " + std::to_string(t) + " outside the saved range");
    auto hi = std::lower_bound(times.begin(), times.end(), t);
    if (hi == times.end()) return fields.back();
    const auto k = static_cast<std::size_t>(hi - times.begin());
    if (k == 0 || *hi == t) return fields[k];
    const double w = (t - times[k - 1]) / (times[k] - times[k - 1]);
    return (1.0 - w) * fields[k - 1] + w * fields[k];
}

Trajectory solve(const InitialData& data, const ProblemSpec& spec, const TimeGrid& timegrid,
                 const PicardConfig& cfg) {
    spec.validate();
    timegrid.validate();
    cfg.validate();
    require(data.phi.grid() == data.psi.grid(), ErrorKind::shape_mismatch, "phi and psi grids differ");
    const Grid& g = data.phi.grid();
    g.validate();
    const double alpha = spec.alpha;
    const std::vector<double> t = timegrid.nodes();
    const int n_steps = timegrid.n_steps;

    const HalfSpectrumFft fft(g);
    const std::size_t H = fft.half_size();
    const double inv_l2 = 1.0 / (g.length * g.length);
    const double max_xi2 = g.dim * std::pow(0.5 * g.points / g.length, 2);
    const double horizon = timegrid.t_end - timegrid.t_start;
    const MultiplierSymbols symbols(alpha, std::max(2.0, 1.01 * kFourPi2 * std::pow(horizon, alpha) * max_xi2));

    std::vector<cplx> phi_h(H), psi_h(H);
    fft.forward(data.phi.values(), phi_h);
    fft.forward(data.psi.values(), psi_h);

    std::vector<int> lin_k2;
    const std::vector<int> lin_idx = distinct_k2(fft, lin_k2, [](std::size_t) { return true; });
    std::vector<int> mem_k2;
    const std::vector<int> mem_idx = distinct_k2(fft, mem_k2, [&](std::size_t k) { return fft.inside_dealias(k); });
    std::vector<std::size_t> compact;
    for (std::size_t k = 0; k < H; ++k)
        if (fft.inside_dealias(k)) compact.push_back(k);
    const std::size_t Q = compact.size();
    std::vector<double> mem_c(mem_k2.size());
    for (std::size_t i = 0; i < mem_k2.size(); ++i) mem_c[i] = kFourPi2 * mem_k2[i] * inv_l2;

    auto ml_aa = [&](double x) { return symbols.mittag_leffler(MultiplierKind::alpha_alpha, x); };
    auto weight_row = [&](int n, int j, std::vector<double>& row) {
        row.resize(mem_c.size());
        for (std::size_t i = 0; i < mem_c.size(); ++i)
            row[i] = panel_weight(alpha, mem_c[i], t[n], t[j], t[j + 1], j == n - 1, ml_aa);
    };
    // uniform grids: row for panel distance d = n - j is shared by all steps
    std::vector<std::vector<double>> toeplitz;
    auto weights_for = [&](int n, int j, std::vector<double>& scratch) -> const std::vector<double>& {
        if (!timegrid.uniform()) {
            weight_row(n, j, scratch);
            return scratch;
        }
        const auto d = static_cast<std::size_t>(n - j);
        while (toeplitz.size() < d) {
            const int dd = static_cast<int>(toeplitz.size()) + 1;
            toeplitz.emplace_back();
            weight_row(dd, 0, toeplitz.back());
        }
        return toeplitz[d - 1];
    };

    Trajectory traj;
    traj.timegrid = timegrid;
    if (cfg.epsilon_data > 0.0)
        traj.smallness = std::pow(2.0, spec.rho) * std::pow(cfg.epsilon_data, spec.rho - 1.0) +
                         std::pow(2.0, spec.q) * std::pow(cfg.epsilon_data, spec.q - 1.0);

    auto record = [&](int n, const std::vector<double>& u, StepDiagnostics d) {
        d.node = n;
        d.t = t[static_cast<std::size_t>(n)];
        d.l2 = std::sqrt(g.cell_volume()) * l2(u);
        double m = 0.0;
        for (double v : u) m = std::max(m, std::abs(v));
        d.max_abs = m;
        traj.diagnostics.push_back(d);
        if (n % cfg.save_every == 0 || n == n_steps) {
            traj.saved_nodes.push_back(n);
            traj.times.push_back(d.t);
            traj.fields.emplace_back(g, u);
        }
    };

    std::vector<double> u(data.phi.values().begin(), data.phi.values().end());
    record(0, u, {});

    std::vector<std::vector<cplx>> history;  // dealiased F at node j+1, compact slots
    if (!spec.linear()) history.reserve(static_cast<std::size_t>(n_steps));
    NonlinearTerm term(fft, spec);
    std::vector<cplx> lin_h(H), hist_h(Q), f_h(H), total(H);
    std::vector<double> sym1(lin_k2.size()), sym2(lin_k2.size()), scratch_row, u_new(u.size());

    for (int n = 1; n <= n_steps; ++n) {
        const double s = t[static_cast<std::size_t>(n)] - timegrid.t_start;
        for (std::size_t i = 0; i < lin_k2.size(); ++i) {
            sym1[i] = symbols.symbol(MultiplierKind::one, s, lin_k2[i] * inv_l2);
            sym2[i] = symbols.symbol(MultiplierKind::two, s, lin_k2[i] * inv_l2);
        }
        for (std::size_t k = 0; k < H; ++k) {
            const auto i = static_cast<std::size_t>(lin_idx[k]);
            lin_h[k] = sym1[i] * phi_h[k] + sym2[i] * psi_h[k];
        }

        StepDiagnostics diag;
        if (spec.linear()) {
            total = lin_h;
            fft.inverse(total, u);
            record(n, u, diag);
            continue;
        }

        std::fill(hist_h.begin(), hist_h.end(), cplx(0.0));
        for (int j = 0; j + 1 < n; ++j) {
            const std::vector<double>& w = weights_for(n, j, scratch_row);
            const std::vector<cplx>& fj = history[static_cast<std::size_t>(j)];
            for (std::size_t q = 0; q < Q; ++q) hist_h[q] += w[static_cast<std::size_t>(mem_idx[q])] * fj[q];
        }
        const std::vector<double> w_last = weights_for(n, n - 1, scratch_row);

        auto assemble = [&](std::vector<double>& out) {
            total = lin_h;
            for (std::size_t q = 0; q < Q; ++q) {
                const std::size_t k = compact[q];
                total[k] += hist_h[q] + w_last[static_cast<std::size_t>(mem_idx[q])] * f_h[k];
            }
            fft.inverse(total, out);
        };
        // predictor: the newest panel carries F of the previous node (none at the first step)
        std::fill(f_h.begin(), f_h.end(), cplx(0.0));
        if (n >= 2)
            for (std::size_t q = 0; q < Q; ++q) f_h[compact[q]] = history.back()[q];
        assemble(u);

        double prev_diff = 0.0;
        int growing = 0;
        bool failed = false;
        term(u, f_h);
        for (int sweep = 1; sweep <= cfg.max_sweeps; ++sweep) {
            assemble(u_new);
            const double diff = l2_distance(u_new, u);
            const double size = l2(u_new);
            u.swap(u_new);
            diag.sweeps = sweep;
            diag.last_update = size > 0.0 ? diff / size : diff;

            double m = 0.0;
            bool finite = true;
            for (double v : u) {
                finite = finite && std::isfinite(v);
                m = std::max(m, std::abs(v));
            }
            if (!finite || m > cfg.overflow_threshold) {
                traj.status = TrajectoryStatus::overflow;
                traj.message = "field magnitude exceeded " + std::to_string(cfg.overflow_threshold) +
                               " at t = " + std::to_string(t[static_cast<std::size_t>(n)]);
                failed = true;
                break;
            }
            if (sweep >= 2 && prev_diff > 0.0) {
                const double ratio = diff / prev_diff;
                diag.contraction = std::max(diag.contraction, ratio);
                growing = ratio >= 1.0 ? growing + 1 : 0;
                if (growing >= 3) {
                    traj.status = TrajectoryStatus::non_contraction;
                    traj.message = "Picard sweeps stopped contracting at t = " +
                                   std::to_string(t[static_cast<std::size_t>(n)]);
                    failed = true;
                    break;
                }
            }
            prev_diff = diff;
            term(u, f_h);
            if (diag.last_update < cfg.sweep_tol) break;
        }
        if (failed) {
            diag.converged = false;
            diag.node = n;
            diag.t = t[static_cast<std::size_t>(n)];
            traj.diagnostics.push_back(diag);
            break;
        }
        diag.converged = diag.last_update < cfg.sweep_tol;
        std::vector<cplx> fc(Q);
        for (std::size_t q = 0; q < Q; ++q) fc[q] = f_h[compact[q]];
        history.push_back(std::move(fc));
        record(n, u, diag);
    }
    return traj;
}

double xbeta_norm(const Trajectory& traj, double alpha, double beta, const NormSpec& spec,
                  const BallFamily& balls) {
    require(!traj.empty(), ErrorKind::empty_trajectory, "trajectory holds no fields");
    double a = 0.0, b = 0.0;
    for (std::size_t i = 0; i < traj.fields.size(); ++i) {
        const double s = traj.times[i] - traj.timegrid.t_start;
        if (s <= 0.0) continue;
        a = std::max(a, std::pow(s, beta) * morrey_norm(traj.fields[i], spec, balls).value);
        b = std::max(b, std::pow(s, beta + 0.5 * alpha) *
                            morrey_norm(gradient_magnitude(traj.fields[i]), spec, balls).value);
    }
    return a + b;
}

}  // namespace fracflow
