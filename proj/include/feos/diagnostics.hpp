#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <vector>

#include "feos/fft.hpp"
#include "feos/grid.hpp"

namespace feos {

/// Gradient and Laplacian of the trigonometric interpolant of u.
/// The unpaired Nyquist bin gets a zero first-derivative multiplier and
/// -(pi N / L)^2 in the Laplacian. In 1D uy is all zeros.
struct SpectralDerivatives {
    Field ux;
    Field uy;
    Field lap;
};

inline SpectralDerivatives spectral_derivatives(const Field& u) {
    const Grid& g = u.grid();
    auto& fft = transform_for(g);
    auto real = fft.real();
    std::copy(u.values().begin(), u.values().end(), real.begin());
    fft.forward();
    const auto spec = fft.spectrum();
    const std::vector<std::complex<double>> hat(spec.begin(), spec.end());

    const double scale = 1.0 / static_cast<double>(u.size());
    const double wave = std::numbers::pi / g.L();
    const int N = g.N();
    const std::complex<double> I(0.0, 1.0);

    auto synthesize = [&](auto&& multiplier) {
        auto out_spec = fft.spectrum();
        for (std::size_t s = 0; s < hat.size(); ++s) {
            const auto [p, q] = fft.modes(s);
            out_spec[s] = multiplier(p, q) * hat[s] * scale;
        }
        fft.inverse();
        Field out(g);
        std::copy(real.begin(), real.end(), out.values().begin());
        return out;
    };

    SpectralDerivatives d{Field(g), Field(g), Field(g)};
    d.ux = synthesize([&](int p, int) { return p == -N ? std::complex<double>(0.0) : I * (wave * p); });
    if (g.dims() == 2) {
        d.uy = synthesize([&](int, int q) { return q == -N ? std::complex<double>(0.0) : I * (wave * q); });
    }
    d.lap = synthesize([&](int p, int q) {
        const double kx = wave * p;
        const double ky = wave * q;
        return std::complex<double>(-(kx * kx + ky * ky));
    });
    return d;
}

namespace detail {
inline double density_at(double ux, double uy, double lap, double delta) noexcept {
    const double g = ux * ux + uy * uy - 1.0;
    return 0.25 * g * g + 0.5 * delta * lap * lap;
}
}  // namespace detail

/// Nodal free-energy density 1/4 (|grad u|^2 - 1)^2 + delta/2 (Lap u)^2.
inline Field free_energy_density(const Field& u, double delta) {
    const auto d = spectral_derivatives(u);
    Field out(u.grid());
    for (std::size_t i = 0; i < u.size(); ++i) out[i] = detail::density_at(d.ux[i], d.uy[i], d.lap[i], delta);
    return out;
}

namespace detail {
inline double integrate(const Field& f) {
    double sum = 0.0;
    for (double v : f.values()) sum += v;
    return f.grid().cell_measure() * sum;
}
inline double max_norm_of_gradient(const SpectralDerivatives& d) {
    double m = 0.0;
    for (std::size_t i = 0; i < d.ux.size(); ++i) {
        m = std::max(m, std::sqrt(d.ux[i] * d.ux[i] + d.uy[i] * d.uy[i]));
    }
    return m;
}
}  // namespace detail

/// Trapezoidal-rule energy h^d sum of the free-energy density.
inline double energy(const Field& u, double delta) { return detail::integrate(free_energy_density(u, delta)); }

/// Interface height: root mean square of u over the domain.
inline double roughness(const Field& u) { return discrete_l2_norm(u) / std::sqrt(u.grid().volume()); }

/// max over nodes of |grad u| (|u_x| in 1D), spectral derivatives.
inline double max_gradient(const Field& u) { return detail::max_norm_of_gradient(spectral_derivatives(u)); }

struct DiagnosticsRecord {
    double t = 0.0;
    double energy = 0.0;
    double roughness = 0.0;
    double mean_u = 0.0;
    double max_grad = 0.0;
};

inline DiagnosticsRecord make_record(const Field& u, double delta, double t) {
    const auto d = spectral_derivatives(u);
    Field density(u.grid());
    for (std::size_t i = 0; i < u.size(); ++i) {
        density[i] = detail::density_at(d.ux[i], d.uy[i], d.lap[i], delta);
    }
    DiagnosticsRecord r;
    r.t = t;
    r.energy = detail::integrate(density);
    r.roughness = roughness(u);
    r.mean_u = mean(u);
    r.max_grad = detail::max_norm_of_gradient(d);
    return r;
}

}  // namespace feos
