#include <gtest/gtest.h>

#include <cmath>
#include <limits>
#include <numbers>

#include "feos/initial.hpp"
#include "feos/stencil.hpp"
#include "support.hpp"

using namespace feos;

namespace {

double ipow(double x, int n) {
    double r = 1.0;
    for (int i = 0; i < n; ++i) r *= x;
    return r;
}

double dmono(double x, int n) { return n == 0 ? 0.0 : n * ipow(x, n - 1); }

/// R(u) rebuilt node by node from gradient_samples and flux().
Field reference_rhs(const Field& u, double* A) {
    const Grid& g = u.grid();
    const double inv12h = 1.0 / (12.0 * g.h());
    Field out(g);
    double amax = 0.0;
    const int J = g.J();
    const int ny = g.dims() == 1 ? 1 : J;
    for (int j = 0; j < J; ++j)
        for (int k = 0; k < ny; ++k) {
            const auto s = gradient_samples(u, j, k);
            Flux fx[4], fy[4];
            for (int i = 0; i < 4; ++i) {
                fx[i] = flux(s.x_offset[i].ux, s.x_offset[i].uy);
                fy[i] = flux(s.y_offset[i].ux, s.y_offset[i].uy);
                amax = std::max({amax, s.x_offset[i].ux * s.x_offset[i].ux + s.x_offset[i].uy * s.x_offset[i].uy});
                if (g.dims() == 2) {
                    amax = std::max(amax, s.y_offset[i].ux * s.y_offset[i].ux + s.y_offset[i].uy * s.y_offset[i].uy);
                }
            }
            double r = stencil5::difference(fx[0].F, fx[1].F, fx[2].F, fx[3].F, inv12h);
            if (g.dims() == 2) r = r + stencil5::difference(fy[0].G, fy[1].G, fy[2].G, fy[3].G, inv12h);
            out[static_cast<std::size_t>(j * ny + k)] = r;
        }
    *A = amax;
    return out;
}

/// Analytic div((|grad u|^2) grad u) for u = sin x sin y.
double sinsin_divergence(double x, double y) {
    const double sx = std::sin(x), cx = std::cos(x), sy = std::sin(y), cy = std::cos(y);
    const double g = cx * cx * sy * sy + sx * sx * cy * cy;
    const double gx = 2 * sx * cx * (cy * cy - sy * sy);
    const double gy = 2 * sy * cy * (cx * cx - sx * sx);
    const double ux = cx * sy, uy = sx * cy;
    return -2 * g * sx * sy + gx * ux + gy * uy;
}

double rhs_error(int J) {
    const Grid g(2, J, std::numbers::pi);
    const Field u = sample_function(g, [](double x, double y) { return std::sin(x) * std::sin(y); });
    const Field r = nonlinear_rhs(u);
    const Field exact = sample_function(g, sinsin_divergence);
    return test::max_abs_diff(r, exact);
}

}  // namespace

TEST(Stencil, TenFormulasExactOnQuartics) {
    // h = 0.1; the node sits away from the periodic seam so no stencil wraps.
    const Grid g(2, 64, 3.2);
    const int j = 12, k = 17;
    for (int a = 0; a <= 4; ++a)
        for (int b = 0; a + b <= 4; ++b) {
            const Field u = sample_function(g, [&](double x, double y) { return ipow(x, a) * ipow(y, b); });
            const auto s = gradient_samples(u, j, k);
            const int offsets[4] = {2, 1, -1, -2};
            for (int i = 0; i < 4; ++i) {
                const double x = g.coord(j + offsets[i]), y = g.coord(k);
                const double ux = dmono(x, a) * ipow(y, b), uy = ipow(x, a) * dmono(y, b);
                EXPECT_NEAR(s.x_offset[i].ux, ux, 1e-12 * std::max(1.0, std::abs(ux))) << a << b << i;
                EXPECT_NEAR(s.x_offset[i].uy, uy, 1e-12 * std::max(1.0, std::abs(uy))) << a << b << i;
                const double x2 = g.coord(j), y2 = g.coord(k + offsets[i]);
                const double vx = dmono(x2, a) * ipow(y2, b), vy = ipow(x2, a) * dmono(y2, b);
                EXPECT_NEAR(s.y_offset[i].ux, vx, 1e-12 * std::max(1.0, std::abs(vx))) << a << b << i;
                EXPECT_NEAR(s.y_offset[i].uy, vy, 1e-12 * std::max(1.0, std::abs(vy))) << a << b << i;
            }
        }
}

TEST(Stencil, QuinticIsNotExact) {
    const Grid g(1, 64, 3.2);
    const Field u = sample_function(g, [](double x) { return ipow(x, 5); });
    const auto s = gradient_samples(u, 12);
    const double x = g.coord(14);
    EXPECT_GT(std::abs(s.x_offset[0].ux - 5 * ipow(x, 4)), 1e-6);
}

TEST(Kernel, BitwiseEqualToPerNodeReference) {
    for (int dims : {1, 2}) {
        const Grid g(dims, 16, 1.3);
        const Field u = test::random_field(g, 31 + dims, 0.5);
        double A_ref = 0.0;
        const Field expected = reference_rhs(u, &A_ref);
        Field got(g);
        FluxDivergence op(g);
        const double A = op(u, got);
        EXPECT_EQ(got, expected) << "dims " << dims;
        EXPECT_EQ(A, A_ref);
        EXPECT_EQ(frozen_coefficient_A(u), A_ref);
    }
}

TEST(Kernel, RejectsGridMismatch) {
    FluxDivergence op(Grid(2, 8, 1.0));
    Field u(Grid(2, 8, 1.0)), out(Grid(2, 16, 1.0));
    EXPECT_THROW(op(u, out), UsageError);
}

TEST(Kernel, FourthOrderAgainstAnalyticDivergence) {
    const double e32 = rhs_error(32), e64 = rhs_error(64), e128 = rhs_error(128);
    EXPECT_GE(e32 / e64, 14.0) << e32 << " " << e64;
    EXPECT_GE(e64 / e128, 14.0) << e64 << " " << e128;
    EXPECT_NEAR(e64 / e128, 16.0, 1.0);
}

TEST(Kernel, OneDimensionalCubicFlux) {
    // u = sin x: (u_x^3)_x = -3 cos^2 x sin x.
    auto err = [](int J) {
        const Grid g(1, J, std::numbers::pi);
        const Field r = nonlinear_rhs(sample_function(g, [](double x) { return std::sin(x); }));
        const Field ex = sample_function(g, [](double x) { return -3 * std::cos(x) * std::cos(x) * std::sin(x); });
        return test::max_abs_diff(r, ex);
    };
    EXPECT_GE(err(32) / err(64), 14.0);
}

TEST(Kernel, TranslationAndOddSymmetryAreExact) {
    const Grid g(2, 16, 2.0);
    const Field u = test::random_field(g, 8, 0.3);
    const Field r = nonlinear_rhs(u);
    EXPECT_EQ(nonlinear_rhs(shifted(u, 3)), shifted(r, 3));
    const Field neg = nonlinear_rhs(scaled(u, -1.0));
    for (std::size_t i = 0; i < r.size(); ++i) ASSERT_EQ(neg[i], -r[i]);
}

TEST(Kernel, ReflectionEquivariant) {
    // (P u)(x) = u(2L - x): storage index i maps to J - 2 - i (mod J).
    const Grid g(2, 16, 2.0);
    const Field u = test::random_field(g, 9, 0.3);
    auto reflect = [&](const Field& f) {
        Field out(g);
        for (int j = 0; j < g.J(); ++j)
            for (int k = 0; k < g.J(); ++k) out.at(j, k) = f.at(g.J() - 2 - j, k);
        return out;
    };
    const Field a = nonlinear_rhs(reflect(u));
    const Field b = reflect(nonlinear_rhs(u));
    EXPECT_LT(test::max_abs_diff(a, b), 1e-12 * test::max_abs(b));
}

TEST(Kernel, MeanConservedForReflectionOddData) {
    const Grid g(2, 64, std::numbers::pi);
    const Field u = initial_condition(InitialKind::Ts32Trig, g);
    const Field r = nonlinear_rhs(u);
    EXPECT_LT(std::abs(mean(r)), 1e-14 * test::max_abs(r));
}

TEST(Kernel, MeanIsNotConservedForRoughData) {
    // The scheme is not in conservation form; for smooth periodic data the
    // truncation terms are total derivatives and the drift is at roundoff.
    const Grid g(2, 32, 1.0);
    const Field r = nonlinear_rhs(test::random_field(g, 77));
    EXPECT_GT(std::abs(mean(r)), 1e-6 * test::max_abs(r));

    const Grid gs(2, 32, std::numbers::pi);
    const Field smooth = sample_function(gs, [](double x, double y) {
        return std::sin(x) * std::sin(y) + 0.3 * std::cos(2 * x + y) + 0.2 * std::sin(x - 0.5) * std::cos(3 * y);
    });
    const Field rs = nonlinear_rhs(smooth);
    EXPECT_LT(std::abs(mean(rs)), 1e-14 * test::max_abs(rs));
}

TEST(StableDt, FormulaAndFloor) {
    EXPECT_DOUBLE_EQ(stable_dt(2.0, 0.1, 1.0), 3.0 * 0.01 / 32.0);
    EXPECT_DOUBLE_EQ(stable_dt(0.0, 0.1, 0.9), 0.9 * 3.0 * 0.01 / (16.0 * kCoefficientFloor));
}

TEST(StabilitySymbol, BoundaryAtThreeSixteenths) {
    auto max_abs_rho = [](double r) {
        double m = 0.0;
        for (int i = 0; i < 64; ++i)
            for (int k = 0; k < 64; ++k) {
                const double t1 = std::numbers::pi * i / 63.0, t2 = std::numbers::pi * k / 63.0;
                m = std::max(m, std::abs(stability_symbol(r, t1, t2)));
            }
        return m;
    };
    EXPECT_LE(max_abs_rho(3.0 / 16.0), 1.0 + 1e-15);
    EXPECT_NEAR(stability_symbol(3.0 / 16.0, std::numbers::pi, std::numbers::pi), -1.0, 1e-15);
    EXPECT_GT(max_abs_rho(0.2), 1.0);
}

TEST(SspRk3, LinearStepIsCubicTaylorPolynomial) {
    const Grid g(1, 4, 1.0);
    Field u(g, {1.0, -2.0, 0.5, 3.0});
    const double lambda = -1.7, dt = 0.3;
    const Field v = ssp_rk3_step(u, dt, [&](const Field& w, Field& out) {
        for (std::size_t i = 0; i < w.size(); ++i) out[i] = lambda * w[i];
    });
    const double z = lambda * dt;
    const double amp = 1 + z + z * z / 2 + z * z * z / 6;
    for (std::size_t i = 0; i < u.size(); ++i) EXPECT_NEAR(v[i], amp * u[i], 1e-15 * std::abs(u[i]) * 4);
}

TEST(SspRk3, ThirdOrderOnNonlinearOde) {
    // u' = -u^2, u(0) = 1: u(t) = 1 / (1 + t).
    auto solve = [](int n) {
        Field u(Grid(1, 4, 1.0), {1.0, 1.0, 1.0, 1.0});
        const double dt = 1.0 / n;
        for (int s = 0; s < n; ++s) {
            u = ssp_rk3_step(u, dt, [](const Field& w, Field& out) {
                for (std::size_t i = 0; i < w.size(); ++i) out[i] = -w[i] * w[i];
            });
        }
        return std::abs(u[0] - 0.5);
    };
    const double ratio = solve(20) / solve(40);
    EXPECT_NEAR(ratio, 8.0, 0.5);
}

TEST(SspRk3, NonFiniteStageRaisesBlowUp) {
    Field u(Grid(1, 4, 1.0), {1.0, 1.0, 1.0, 1.0});
    try {
        (void)ssp_rk3_step(u, 1.0, [](const Field& w, Field& out) {
            for (std::size_t i = 0; i < w.size(); ++i) out[i] = i == 2 ? std::numeric_limits<double>::infinity() : 0.0;
        });
        FAIL();
    } catch (const BlowUpError& e) {
        EXPECT_EQ(e.stage(), 1);
        EXPECT_EQ(e.node(), 2u);
    }
    EXPECT_THROW(ssp_rk3_step(u, 0.0), UsageError);
}

TEST(Subcycling, CoversTauExactlyWithStableSteps) {
    const Grid g(2, 32, std::numbers::pi);
    const Field u = initial_condition(InitialKind::Ts32Trig, g);
    const double tau = 0.01;
    auto [v, rep] = nonlinear_substep(u, tau);
    EXPECT_EQ(rep.requested_time, tau);
    EXPECT_GE(rep.steps_taken, 1);
    EXPECT_LE(rep.dt_used, tau);
    EXPECT_GE(rep.dt_used * static_cast<double>(rep.steps_taken), tau * (1 - 1e-12));
    EXPECT_TRUE(v.all_finite());
    EXPECT_GE(rep.A_max_seen, frozen_coefficient_A(u));
}

TEST(Subcycling, SmallStepsMatchSingleStep) {
    // With tau below the stable step there is exactly one RK step.
    const Grid g(2, 16, std::numbers::pi);
    const Field u = initial_condition(InitialKind::Ts32Trig, g);
    const double tau = 0.1 * stable_dt(u);
    auto [v, rep] = nonlinear_substep(u, tau);
    EXPECT_EQ(rep.steps_taken, 1);
    EXPECT_EQ(v, ssp_rk3_step(u, tau));
}

TEST(Subcycling, RunawayCeiling) {
    const Grid g(2, 64, std::numbers::pi);
    const Field u = initial_condition(InitialKind::Ts32Trig, g);
    NonlinearSubstepper s(g);
    EXPECT_THROW(s.advance(u, 10.0, SubcycleOptions{0.9, 3}), RunawayError);
    EXPECT_THROW(s.advance(u, 0.0, SubcycleOptions{}), UsageError);
    EXPECT_THROW(s.advance(u, 0.1, SubcycleOptions{1.5, 10}), ConfigError);
}
