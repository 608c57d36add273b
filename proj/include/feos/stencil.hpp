#pragma once

// Fourth-order 25-point discretization of div(|grad u|^2 grad u) and the
// SSP-RK3 subcycling that approximates the nonlinear solution operator.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "feos/error.hpp"
#include "feos/grid.hpp"

namespace feos {

inline constexpr double kCoefficientFloor = 1e-12;
inline constexpr double kDefaultSafety = 0.9;
inline constexpr long kDefaultMaxSubsteps = 10'000'000;

/// Flux pair F = (p^2 + q^2) p, G = (p^2 + q^2) q. In 1D (q = 0) F = p^3.
struct Flux {
    double F;
    double G;
};

inline Flux flux(double p, double q) noexcept {
    const double s = p * p + q * q;
    return {s * p, s * q};
}

/// Five-point derivative stencils on u_{-2..+2}, scaled by inv12h = 1/(12h).
/// The biased ones evaluate the derivative at offset +2, +1, -1, -2 from the
/// stencil centre; all are exact for quartic polynomials.
namespace stencil5 {

inline double at_p2(double um2, double um1, double u0, double up1, double up2, double inv12h) noexcept {
    return (25.0 * up2 - 48.0 * up1 + 36.0 * u0 - 16.0 * um1 + 3.0 * um2) * inv12h;
}
inline double at_p1(double um2, double um1, double u0, double up1, double up2, double inv12h) noexcept {
    return (3.0 * up2 + 10.0 * up1 - 18.0 * u0 + 6.0 * um1 - um2) * inv12h;
}
inline double at_m1(double um2, double um1, double u0, double up1, double up2, double inv12h) noexcept {
    return (up2 - 6.0 * up1 + 18.0 * u0 - 10.0 * um1 - 3.0 * um2) * inv12h;
}
inline double at_m2(double um2, double um1, double u0, double up1, double up2, double inv12h) noexcept {
    return (-3.0 * up2 + 16.0 * up1 - 36.0 * u0 + 48.0 * um1 - 25.0 * um2) * inv12h;
}
inline double centered(double um2, double um1, double up1, double up2, double inv12h) noexcept {
    return (-up2 + 8.0 * up1 - 8.0 * um1 + um2) * inv12h;
}

/// (-f_{+2} + 8 f_{+1} - 8 f_{-1} + f_{-2}) / (12h)
inline double difference(double fp2, double fp1, double fm1, double fm2, double inv12h) noexcept {
    return (-fp2 + 8.0 * fp1 - 8.0 * fm1 + fm2) * inv12h;
}

}  // namespace stencil5

struct Slope {
    double ux = 0.0;
    double uy = 0.0;
};

/// Gradient approximations around node (j, k), ordered by offset
/// {+2, +1, -1, -2}. x_offset[i] approximates grad u at (j + l, k), using
/// the biased x-stencil about j and the centred y-stencil at row j + l;
/// y_offset[i] is the transposed construction at (j, k + l). In 1D only
/// x_offset[i].ux is populated.
struct GradientSamples {
    std::array<Slope, 4> x_offset{};
    std::array<Slope, 4> y_offset{};
};

inline GradientSamples gradient_samples(const Field& u, int j, int k = 0) {
    const Grid& g = u.grid();
    const double inv12h = 1.0 / (12.0 * g.h());
    GradientSamples s;
    if (g.dims() == 1) {
        const double m2 = u.at(j - 2), m1 = u.at(j - 1), c = u.at(j), p1 = u.at(j + 1), p2 = u.at(j + 2);
        s.x_offset[0].ux = stencil5::at_p2(m2, m1, c, p1, p2, inv12h);
        s.x_offset[1].ux = stencil5::at_p1(m2, m1, c, p1, p2, inv12h);
        s.x_offset[2].ux = stencil5::at_m1(m2, m1, c, p1, p2, inv12h);
        s.x_offset[3].ux = stencil5::at_m2(m2, m1, c, p1, p2, inv12h);
        return s;
    }
    auto dy = [&](int jj, int kk) {
        return stencil5::centered(u.at(jj, kk - 2), u.at(jj, kk - 1), u.at(jj, kk + 1), u.at(jj, kk + 2), inv12h);
    };
    auto dx = [&](int jj, int kk) {
        return stencil5::centered(u.at(jj - 2, kk), u.at(jj - 1, kk), u.at(jj + 1, kk), u.at(jj + 2, kk), inv12h);
    };
    {
        const double m2 = u.at(j - 2, k), m1 = u.at(j - 1, k), c = u.at(j, k), p1 = u.at(j + 1, k),
                     p2 = u.at(j + 2, k);
        s.x_offset[0] = {stencil5::at_p2(m2, m1, c, p1, p2, inv12h), dy(j + 2, k)};
        s.x_offset[1] = {stencil5::at_p1(m2, m1, c, p1, p2, inv12h), dy(j + 1, k)};
        s.x_offset[2] = {stencil5::at_m1(m2, m1, c, p1, p2, inv12h), dy(j - 1, k)};
        s.x_offset[3] = {stencil5::at_m2(m2, m1, c, p1, p2, inv12h), dy(j - 2, k)};
    }
    {
        const double m2 = u.at(j, k - 2), m1 = u.at(j, k - 1), c = u.at(j, k), p1 = u.at(j, k + 1),
                     p2 = u.at(j, k + 2);
        s.y_offset[0] = {dx(j, k + 2), stencil5::at_p2(m2, m1, c, p1, p2, inv12h)};
        s.y_offset[1] = {dx(j, k + 1), stencil5::at_p1(m2, m1, c, p1, p2, inv12h)};
        s.y_offset[2] = {dx(j, k - 1), stencil5::at_m1(m2, m1, c, p1, p2, inv12h)};
        s.y_offset[3] = {dx(j, k - 2), stencil5::at_m2(m2, m1, c, p1, p2, inv12h)};
    }
    return s;
}

/// Evaluates the semi-discrete right-hand side and, in the same sweep, the
/// frozen coefficient A = max |grad u|^2 over all offset samples.
///
/// Owns padded scratch arrays (two ghost layers per side) so the inner loops
/// are branch-free. Per-node arithmetic is identical to building the node's
/// GradientSamples and combining fluxes in offset order +2, +1, -1, -2.
class FluxDivergence {
public:
    explicit FluxDivergence(const Grid& grid) : grid_(grid), P_(grid.J() + 4) {
        const std::size_t n = grid.dims() == 1 ? static_cast<std::size_t>(P_)
                                               : static_cast<std::size_t>(P_) * static_cast<std::size_t>(P_);
        pu_.resize(n);
        if (grid.dims() == 2) {
            pdx_.resize(n);
            pdy_.resize(n);
        }
        row_max_.resize(static_cast<std::size_t>(grid.J()));
    }

    const Grid& grid() const noexcept { return grid_; }

    /// Writes the RHS into `out` and returns A.
    double operator()(const Field& u, Field& out) {
        if (!(u.grid() == grid_) || !(out.grid() == grid_)) {
            throw UsageError("FluxDivergence: grid mismatch");
        }
        return grid_.dims() == 1 ? apply_1d(u, out) : apply_2d(u, out);
    }

private:
    double apply_1d(const Field& u, Field& out) {
        const int J = grid_.J();
        const double inv12h = 1.0 / (12.0 * grid_.h());
        for (int i = -2; i < J + 2; ++i) pu_[static_cast<std::size_t>(i + 2)] = u.at(i);
        const double* a = pu_.data() + 2;
        double A = 0.0;
        for (int j = 0; j < J; ++j) {
            const double m2 = a[j - 2], m1 = a[j - 1], c = a[j], p1 = a[j + 1], p2 = a[j + 2];
            const double g0 = stencil5::at_p2(m2, m1, c, p1, p2, inv12h);
            const double g1 = stencil5::at_p1(m2, m1, c, p1, p2, inv12h);
            const double g2 = stencil5::at_m1(m2, m1, c, p1, p2, inv12h);
            const double g3 = stencil5::at_m2(m2, m1, c, p1, p2, inv12h);
            const Flux f0 = flux(g0, 0.0), f1 = flux(g1, 0.0), f2 = flux(g2, 0.0), f3 = flux(g3, 0.0);
            out[static_cast<std::size_t>(j)] = stencil5::difference(f0.F, f1.F, f2.F, f3.F, inv12h);
            A = std::max({A, g0 * g0, g1 * g1, g2 * g2, g3 * g3});
        }
        return A;
    }

    double apply_2d(const Field& u, Field& out) {
        const int J = grid_.J();
        const int P = P_;
        const double inv12h = 1.0 / (12.0 * grid_.h());
        const double* src = u.data();
        auto pidx = [P](int j, int k) {
            return static_cast<std::size_t>(j + 2) * static_cast<std::size_t>(P) + static_cast<std::size_t>(k + 2);
        };
        pad(src, pu_.data());

        // Centred derivatives on the interior, then periodic ghosts.
        const double* U = pu_.data();
        double* DX = pdx_.data();
        double* DY = pdy_.data();
#ifdef _OPENMP
#pragma omp parallel for schedule(static)
#endif
        for (int j = 0; j < J; ++j) {
            const double* r = U + pidx(j, 0);
            const double* rm2 = U + pidx(j - 2, 0);
            const double* rm1 = U + pidx(j - 1, 0);
            const double* rp1 = U + pidx(j + 1, 0);
            const double* rp2 = U + pidx(j + 2, 0);
            double* dx = DX + pidx(j, 0);
            double* dy = DY + pidx(j, 0);
            for (int k = 0; k < J; ++k) {
                dx[k] = stencil5::centered(rm2[k], rm1[k], rp1[k], rp2[k], inv12h);
                dy[k] = stencil5::centered(r[k - 2], r[k - 1], r[k + 1], r[k + 2], inv12h);
            }
        }
        fill_ghosts(DX);
        fill_ghosts(DY);

        double* dst = out.data();
#ifdef _OPENMP
#pragma omp parallel for schedule(static)
#endif
        for (int j = 0; j < J; ++j) {
            const double* r = U + pidx(j, 0);
            const double* rm2 = U + pidx(j - 2, 0);
            const double* rm1 = U + pidx(j - 1, 0);
            const double* rp1 = U + pidx(j + 1, 0);
            const double* rp2 = U + pidx(j + 2, 0);
            const double* dy_m2 = DY + pidx(j - 2, 0);
            const double* dy_m1 = DY + pidx(j - 1, 0);
            const double* dy_p1 = DY + pidx(j + 1, 0);
            const double* dy_p2 = DY + pidx(j + 2, 0);
            const double* dx = DX + pidx(j, 0);
            double* o = dst + static_cast<std::size_t>(j) * static_cast<std::size_t>(J);
            double rmax = 0.0;
            for (int k = 0; k < J; ++k) {
                // x-offset points (j + l, k)
                const double xm2 = rm2[k], xm1 = rm1[k], c = r[k], xp1 = rp1[k], xp2 = rp2[k];
                const double ax0 = stencil5::at_p2(xm2, xm1, c, xp1, xp2, inv12h);
                const double ax1 = stencil5::at_p1(xm2, xm1, c, xp1, xp2, inv12h);
                const double ax2 = stencil5::at_m1(xm2, xm1, c, xp1, xp2, inv12h);
                const double ax3 = stencil5::at_m2(xm2, xm1, c, xp1, xp2, inv12h);
                const double bx0 = dy_p2[k], bx1 = dy_p1[k], bx2 = dy_m1[k], bx3 = dy_m2[k];
                // y-offset points (j, k + l)
                const double ym2 = r[k - 2], ym1 = r[k - 1], yp1 = r[k + 1], yp2 = r[k + 2];
                const double by0 = stencil5::at_p2(ym2, ym1, c, yp1, yp2, inv12h);
                const double by1 = stencil5::at_p1(ym2, ym1, c, yp1, yp2, inv12h);
                const double by2 = stencil5::at_m1(ym2, ym1, c, yp1, yp2, inv12h);
                const double by3 = stencil5::at_m2(ym2, ym1, c, yp1, yp2, inv12h);
                const double ay0 = dx[k + 2], ay1 = dx[k + 1], ay2 = dx[k - 1], ay3 = dx[k - 2];

                const double sx0 = ax0 * ax0 + bx0 * bx0, sx1 = ax1 * ax1 + bx1 * bx1;
                const double sx2 = ax2 * ax2 + bx2 * bx2, sx3 = ax3 * ax3 + bx3 * bx3;
                const double sy0 = ay0 * ay0 + by0 * by0, sy1 = ay1 * ay1 + by1 * by1;
                const double sy2 = ay2 * ay2 + by2 * by2, sy3 = ay3 * ay3 + by3 * by3;

                o[k] = stencil5::difference(sx0 * ax0, sx1 * ax1, sx2 * ax2, sx3 * ax3, inv12h) +
                       stencil5::difference(sy0 * by0, sy1 * by1, sy2 * by2, sy3 * by3, inv12h);

                const double m = std::max(std::max(std::max(sx0, sx1), std::max(sx2, sx3)),
                                          std::max(std::max(sy0, sy1), std::max(sy2, sy3)));
                rmax = m > rmax ? m : rmax;
            }
            row_max_[static_cast<std::size_t>(j)] = rmax;
        }
        double A = 0.0;
        for (double m : row_max_) A = std::max(A, m);
        return A;
    }

    void pad(const double* src, double* dst) const {
        const int J = grid_.J();
        const int P = P_;
        for (int j = -2; j < J + 2; ++j) {
            const double* row = src + static_cast<std::size_t>(grid_.wrap(j)) * static_cast<std::size_t>(J);
            double* prow = dst + static_cast<std::size_t>(j + 2) * static_cast<std::size_t>(P);
            prow[0] = row[J - 2];
            prow[1] = row[J - 1];
            std::copy(row, row + J, prow + 2);
            prow[J + 2] = row[0];
            prow[J + 3] = row[1];
        }
    }

    // Interior is rows/cols [2, J+2) of the padded array.
    void fill_ghosts(double* a) const {
        const int J = grid_.J();
        const std::size_t P = static_cast<std::size_t>(P_);
        for (int j = 2; j < J + 2; ++j) {
            double* row = a + static_cast<std::size_t>(j) * P;
            row[0] = row[J];
            row[1] = row[J + 1];
            row[J + 2] = row[2];
            row[J + 3] = row[3];
        }
        std::copy(a + static_cast<std::size_t>(J) * P, a + static_cast<std::size_t>(J + 2) * P, a);
        std::copy(a + 2 * P, a + 4 * P, a + static_cast<std::size_t>(J + 2) * P);
    }

    Grid grid_;
    int P_;
    std::vector<double> pu_;
    std::vector<double> pdx_;
    std::vector<double> pdy_;
    std::vector<double> row_max_;
};

inline Field nonlinear_rhs(const Field& u) {
    Field out(u.grid());
    FluxDivergence op(u.grid());
    op(u, out);
    return out;
}

/// Max of |grad u|^2 over every node's eight offset samples (four in 1D).
inline double frozen_coefficient_A(const Field& u) {
    Field scratch(u.grid());
    FluxDivergence op(u.grid());
    return op(u, scratch);
}

/// safety * 3 h^2 / (16 max(A, floor)): forward Euler on the frozen-coefficient
/// linearization is stable for A tau / h^2 <= 3/16.
inline double stable_dt(double A, double h, double safety = kDefaultSafety) noexcept {
    return safety * 3.0 * h * h / (16.0 * std::max(A, kCoefficientFloor));
}

inline double stable_dt(const Field& u, double safety = kDefaultSafety) {
    return stable_dt(frozen_coefficient_A(u), u.grid().h(), safety);
}

/// Amplification factor of the frozen-coefficient forward Euler scheme at
/// r = A tau / h^2 and phase angles theta_i = sigma_i h.
inline double stability_symbol(double r, double theta1, double theta2) noexcept {
    const double c1 = std::cos(theta1);
    const double c2 = std::cos(theta2);
    return 1.0 - (r / 3.0) * ((1.0 - c1) * (7.0 - c1) + (1.0 - c2) * (7.0 - c2));
}

namespace detail {

inline void require_finite(const Field& u, int stage) {
    const auto v = u.values();
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (!std::isfinite(v[i])) {
            throw BlowUpError("non-finite value in SSP-RK3 stage " + std::to_string(stage) + " at node " +
                                  std::to_string(i),
                              stage, i);
        }
    }
}

/// Shu-Osher SSP-RK3 given R(u) already evaluated into r0. `rhs(v, out)`
/// evaluates R(v) into out. r0 is reused as scratch.
template <class Rhs>
Field ssp_rk3_from(const Field& u, double dt, Field& r0, Rhs&& rhs) {
    const std::size_t n = u.size();
    Field s1(u.grid());
    for (std::size_t i = 0; i < n; ++i) s1[i] = u[i] + dt * r0[i];
    require_finite(s1, 1);

    Field& r = r0;
    rhs(s1, r);
    Field s2(u.grid());
    for (std::size_t i = 0; i < n; ++i) s2[i] = 0.75 * u[i] + 0.25 * (s1[i] + dt * r[i]);
    require_finite(s2, 2);

    rhs(s2, r);
    Field next(u.grid());
    constexpr double third = 1.0 / 3.0;
    constexpr double two_thirds = 2.0 / 3.0;
    for (std::size_t i = 0; i < n; ++i) next[i] = third * u[i] + two_thirds * (s2[i] + dt * r[i]);
    require_finite(next, 3);
    return next;
}

}  // namespace detail

/// One SSP-RK3 step for du/dt = R(u) with a caller-supplied R.
template <class Rhs>
Field ssp_rk3_step(const Field& u, double dt, Rhs&& rhs) {
    if (!(dt > 0.0)) throw UsageError("ssp_rk3_step needs dt > 0");
    Field r0(u.grid());
    rhs(u, r0);
    return detail::ssp_rk3_from(u, dt, r0, rhs);
}

inline Field ssp_rk3_step(const Field& u, double dt) {
    FluxDivergence op(u.grid());
    return ssp_rk3_step(u, dt, [&op](const Field& v, Field& out) { op(v, out); });
}

struct SubcycleReport {
    double requested_time = 0.0;
    long steps_taken = 0;
    /// Largest step used; the final step may be shorter.
    double dt_used = 0.0;
    double A_max_seen = 0.0;
};

struct SubcycleOptions {
    double safety = kDefaultSafety;
    long max_steps = kDefaultMaxSubsteps;
};

/// Approximates the nonlinear solution operator over time tau by SSP-RK3
/// steps, recomputing A before each step and shortening the last step so
/// the covered time is exactly tau.
class NonlinearSubstepper {
public:
    explicit NonlinearSubstepper(const Grid& grid) : op_(grid), r0_(grid) {}

    Field advance(Field u, double tau, const SubcycleOptions& opts, SubcycleReport* report = nullptr) {
        if (!(tau > 0.0)) throw UsageError("nonlinear_substep needs tau > 0");
        if (!(opts.safety > 0.0 && opts.safety <= 1.0)) throw ConfigError("safety must lie in (0, 1]");
        SubcycleReport rep;
        rep.requested_time = tau;
        const double h = u.grid().h();
        auto rhs = [this](const Field& v, Field& out) { op_(v, out); };
        double elapsed = 0.0;
        for (;;) {
            const double A = op_(u, r0_);
            rep.A_max_seen = std::max(rep.A_max_seen, A);
            const double remaining = tau - elapsed;
            const double dt_stable = stable_dt(A, h, opts.safety);
            const bool last = dt_stable >= remaining;
            const double dt = last ? remaining : dt_stable;
            u = detail::ssp_rk3_from(u, dt, r0_, rhs);
            ++rep.steps_taken;
            rep.dt_used = std::max(rep.dt_used, dt);
            if (last) break;
            elapsed += dt;
            if (rep.steps_taken >= opts.max_steps) {
                throw RunawayError("nonlinear substep exceeded " + std::to_string(opts.max_steps) +
                                   " SSP-RK3 steps (A = " + std::to_string(A) + ")");
            }
        }
        if (report) *report = rep;
        return u;
    }

private:
    FluxDivergence op_;
    Field r0_;
};

inline std::pair<Field, SubcycleReport> nonlinear_substep(Field u, double tau, double safety = kDefaultSafety) {
    NonlinearSubstepper stepper(u.grid());
    SubcycleReport rep;
    Field out = stepper.advance(std::move(u), tau, SubcycleOptions{safety, kDefaultMaxSubsteps}, &rep);
    return {std::move(out), rep};
}

}  // namespace feos
