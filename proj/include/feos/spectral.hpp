#pragma once

#include <algorithm>
#include <cmath>
#include <map>
#include <memory>
#include <numbers>
#include <tuple>
#include <vector>

#include "feos/error.hpp"
#include "feos/fft.hpp"
#include "feos/grid.hpp"

namespace feos {

/// Growth rate of Fourier mode (p, q) under u_t = -Lap u - delta Lap^2 u:
/// with s = pi^2 (p^2 + q^2) / L^2, lambda = s - delta s^2. Pass q = 0 in 1D.
inline double lambda_mode(const Grid& grid, double delta, int p, int q) {
    const double pi = std::numbers::pi;
    const double s = pi * pi * (static_cast<double>(p) * p + static_cast<double>(q) * q) /
                     (grid.L() * grid.L());
    return s - delta * s * s;
}

/// Per-mode factors exp(lambda_pq * t) on the real-transform half spectrum.
class SpectralPropagator {
public:
    SpectralPropagator(const Grid& grid, double delta, double t)
        : grid_(grid), delta_(delta), t_(t) {
        if (!(delta > 0.0)) throw ConfigError("propagator needs delta > 0");
        if (!(t >= 0.0) || !std::isfinite(t)) throw ConfigError("propagator needs a finite t >= 0");
        auto& fft = transform_for(grid);
        multipliers_.resize(fft.spectral_size());
        for (std::size_t s = 0; s < multipliers_.size(); ++s) {
            const auto [p, q] = fft.modes(s);
            multipliers_[s] = std::exp(lambda_mode(grid, delta, p, q) * t);
        }
    }

    const Grid& grid() const noexcept { return grid_; }
    double delta() const noexcept { return delta_; }
    double time() const noexcept { return t_; }
    std::span<const double> multipliers() const noexcept { return multipliers_; }

    /// exp(t / (4 delta)), the largest value any multiplier can take.
    double bound() const noexcept { return std::exp(t_ / (4.0 * delta_)); }

private:
    Grid grid_;
    double delta_;
    double t_;
    std::vector<double> multipliers_;
};

inline SpectralPropagator build_propagator(const Grid& grid, double delta, double t) {
    return SpectralPropagator(grid, delta, t);
}

/// Exact solution of the linear subproblem over the propagator's time.
/// The zero mode is multiplied by exactly 1, so the mean is preserved.
inline void linear_substep_inplace(Field& u, const SpectralPropagator& prop) {
    if (!(u.grid() == prop.grid())) throw UsageError("linear_substep: field and propagator grids differ");
    auto& fft = transform_for(u.grid());
    auto real = fft.real();
    std::copy(u.values().begin(), u.values().end(), real.begin());
    fft.forward();
    const double norm = 1.0 / static_cast<double>(u.size());
    auto spec = fft.spectrum();
    auto mult = prop.multipliers();
    for (std::size_t s = 0; s < spec.size(); ++s) spec[s] *= mult[s] * norm;
    fft.inverse();
    std::copy(real.begin(), real.end(), u.values().begin());
}

inline Field linear_substep(Field u, const SpectralPropagator& prop) {
    linear_substep_inplace(u, prop);
    return u;
}

/// Propagators keyed by (dims, J, L, delta, t); Strang stepping reuses the
/// half-step propagator every step.
class PropagatorCache {
public:
    const SpectralPropagator& get(const Grid& grid, double delta, double t) {
        const Key key{grid.dims(), grid.J(), grid.L(), delta, t};
        auto it = cache_.find(key);
        if (it == cache_.end()) {
            it = cache_.emplace(key, std::make_unique<SpectralPropagator>(grid, delta, t)).first;
        }
        return *it->second;
    }

    std::size_t size() const noexcept { return cache_.size(); }

private:
    using Key = std::tuple<int, int, double, double, double>;
    std::map<Key, std::unique_ptr<SpectralPropagator>> cache_;
};

}  // namespace feos
