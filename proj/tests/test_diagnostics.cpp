#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "feos/diagnostics.hpp"
#include "support.hpp"

using namespace feos;

TEST(SpectralDerivatives, ExactOnResolvedModes) {
    const Grid g(2, 32, std::numbers::pi);
    const Field u = sample_function(g, [](double x, double y) { return std::sin(3 * x) * std::cos(2 * y); });
    const auto d = spectral_derivatives(u);
    const Field ux = sample_function(g, [](double x, double y) { return 3 * std::cos(3 * x) * std::cos(2 * y); });
    const Field uy = sample_function(g, [](double x, double y) { return -2 * std::sin(3 * x) * std::sin(2 * y); });
    EXPECT_LT(test::max_abs_diff(d.ux, ux), 1e-12);
    EXPECT_LT(test::max_abs_diff(d.uy, uy), 1e-12);
    EXPECT_LT(test::max_abs_diff(d.lap, scaled(u, -13.0)), 1e-11);
}

TEST(SpectralDerivatives, NyquistHasNoFirstDerivative) {
    const Grid g(1, 16, 1.0);
    Field u(g);
    for (int j = 0; j < 16; ++j) u[static_cast<std::size_t>(j)] = j % 2 ? 1.0 : -1.0;
    const auto d = spectral_derivatives(u);
    EXPECT_LT(test::max_abs(d.ux), 1e-14);
    const double k = std::numbers::pi * 8 / 1.0;
    EXPECT_NEAR(d.lap[0], k * k, 1e-10 * k * k);
}

TEST(Energy, ClosedFormsForFlatAndSine) {
    const Grid g(2, 32, std::numbers::pi);
    EXPECT_NEAR(energy(Field(g), 0.1), 0.25 * g.volume(), 1e-12);
    // u = a sin x: E = int 1/4 (a^2 cos^2 x - 1)^2 + delta/2 a^2 sin^2 x
    const Grid g1(1, 64, std::numbers::pi);
    const double a = 0.5, delta = 0.2;
    const Field u = sample_function(g1, [&](double x) { return a * std::sin(x); });
    const double pi = std::numbers::pi;
    const double expected = 0.25 * (3 * pi / 4 * std::pow(a, 4) - 2 * pi * a * a + 2 * pi) + 0.5 * delta * a * a * pi;
    EXPECT_NEAR(energy(u, delta), expected, 1e-12);
}

TEST(Roughness, RmsOfSine) {
    const Grid g(2, 32, std::numbers::pi);
    const Field u = sample_function(g, [](double x, double y) { return std::sin(x) * std::sin(y); });
    EXPECT_NEAR(roughness(u), 0.5, 1e-14);
}

TEST(Record, CollectsAllFields) {
    const Grid g(2, 32, std::numbers::pi);
    const Field u = sample_function(g, [](double x, double y) { return 0.3 * std::sin(x) * std::cos(y) + 0.1; });
    const auto r = make_record(u, 0.1, 2.5);
    EXPECT_EQ(r.t, 2.5);
    EXPECT_NEAR(r.energy, energy(u, 0.1), 1e-12);
    EXPECT_NEAR(r.mean_u, 0.1, 1e-15);
    EXPECT_NEAR(r.max_grad, max_gradient(u), 1e-15);
    EXPECT_NEAR(r.max_grad, 0.3, 1e-3);
    EXPECT_EQ(r.roughness, roughness(u));
}

TEST(Energy, SineInTwoDimensions) {
    // 1/4 int sin^4 x + delta/2 int sin^2 x over (0, 2 pi)^2 = 3 pi^2 / 8 + delta pi^2.
    const Grid g(2, 16, std::numbers::pi);
    const Field u = sample_function(g, [](double x, double) { return std::sin(x); });
    const double pi2 = std::numbers::pi * std::numbers::pi;
    EXPECT_NEAR(energy(u, 0.1), 0.475 * pi2, 1e-12);
}
