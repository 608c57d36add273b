#pragma once

// Strang composition L(tau/2) N(tau) L(tau/2) and time marching.

#include <algorithm>
#include <cmath>
#include <concepts>
#include <set>
#include <string>
#include <vector>

#include "feos/diagnostics.hpp"
#include "feos/error.hpp"
#include "feos/grid.hpp"
#include "feos/spectral.hpp"
#include "feos/stencil.hpp"

namespace feos {

struct RunConfig {
    double delta = 0.1;
    double tau = 0.01;
    double T = 1.0;
    double safety = kDefaultSafety;
    /// Steps between diagnostic records; 0 records only at t0 and t0 + T.
    long diag_every = 1;
    /// Absolute times (nearest step boundary) for field snapshots.
    std::vector<double> snapshot_times;
    /// Additional absolute record times (nearest step boundary).
    std::vector<double> diag_times;
    /// Time label of the initial state, for resumed runs.
    double t0 = 0.0;
    long max_substeps = kDefaultMaxSubsteps;

    void validate() const {
        if (!(delta > 0.0)) throw ConfigError("delta must be > 0");
        if (!(tau > 0.0)) throw ConfigError("tau must be > 0");
        if (!(T > 0.0)) throw ConfigError("T must be > 0");
        if (!(safety > 0.0 && safety <= 1.0)) throw ConfigError("safety must lie in (0, 1]");
        if (diag_every < 0) throw ConfigError("diag_every must be >= 0");
        if (max_substeps < 1) throw ConfigError("max_substeps must be >= 1");
    }
};

/// Receives diagnostics and snapshots in marching order.
template <class S>
concept RunSink = requires(S& s, const DiagnosticsRecord& r, double t, const Field& f) {
    s.record(r);
    s.snapshot(t, f);
};

struct NullSink {
    void record(const DiagnosticsRecord&) {}
    void snapshot(double, const Field&) {}
};

struct RecordingSink {
    std::vector<DiagnosticsRecord> records;
    std::vector<std::pair<double, Field>> snapshots;
    void record(const DiagnosticsRecord& r) { records.push_back(r); }
    void snapshot(double t, const Field& f) { snapshots.emplace_back(t, f); }
};

/// Number of Strang steps covering T: T/tau rounded when it is an integer up
/// to rounding, otherwise rounded up with a shortened final step.
inline long step_count(double T, double tau) {
    const double q = T / tau;
    const double r = std::round(q);
    if (std::abs(q - r) <= 1e-9 * std::max(1.0, q)) return std::max(1L, static_cast<long>(r));
    return static_cast<long>(std::ceil(q));
}

/// Strang stepper owning the nonlinear workspace and a propagator cache.
class StrangStepper {
public:
    StrangStepper(const Grid& grid, double delta, SubcycleOptions opts = {})
        : grid_(grid), delta_(delta), opts_(opts), nonlinear_(grid) {}

    /// One step of length tau: L(tau/2), N(tau), L(tau/2).
    Field step(Field u, double tau, SubcycleReport* report = nullptr) {
        const auto& half = cache_.get(grid_, delta_, 0.5 * tau);
        return step(std::move(u), tau, half, report);
    }

    Field step(Field u, double tau, const SpectralPropagator& half, SubcycleReport* report = nullptr) {
        linear_substep_inplace(u, half);
        u = nonlinear_.advance(std::move(u), tau, opts_, report);
        linear_substep_inplace(u, half);
        return u;
    }

    PropagatorCache& propagators() noexcept { return cache_; }

private:
    Grid grid_;
    double delta_;
    SubcycleOptions opts_;
    NonlinearSubstepper nonlinear_;
    PropagatorCache cache_;
};

/// Single Strang step; half_propagator must be built for (grid, delta, tau/2).
inline Field strang_step(Field u, const RunConfig& cfg, const SpectralPropagator& half_propagator) {
    if (!(half_propagator.grid() == u.grid()) || half_propagator.delta() != cfg.delta ||
        std::abs(half_propagator.time() - 0.5 * cfg.tau) > 1e-14 * cfg.tau) {
        throw UsageError("strang_step: half propagator does not match (grid, delta, tau/2)");
    }
    StrangStepper stepper(u.grid(), cfg.delta, SubcycleOptions{cfg.safety, cfg.max_substeps});
    return stepper.step(std::move(u), cfg.tau, half_propagator);
}

/// Marches u from t0 to t0 + T with Strang steps of length tau.
template <RunSink Sink>
Field evolve(Field u, const RunConfig& cfg, Sink& sink) {
    cfg.validate();
    const long n = step_count(cfg.T, cfg.tau);
    double last_tau = cfg.T - static_cast<double>(n - 1) * cfg.tau;
    if (std::abs(last_tau - cfg.tau) <= 1e-12 * cfg.tau) last_tau = cfg.tau;

    auto time_of = [&](long k) { return k == n ? cfg.t0 + cfg.T : cfg.t0 + static_cast<double>(k) * cfg.tau; };
    auto nearest_step = [&](double t) {
        const double k = std::round((t - cfg.t0) / cfg.tau);
        return std::clamp(static_cast<long>(k), 0L, n);
    };

    std::set<long> record_steps{0, n};
    if (cfg.diag_every > 0) {
        for (long k = cfg.diag_every; k < n; k += cfg.diag_every) record_steps.insert(k);
    }
    for (double t : cfg.diag_times) {
        if (t >= cfg.t0 && t <= cfg.t0 + cfg.T) record_steps.insert(nearest_step(t));
    }
    std::set<long> snapshot_steps;
    for (double t : cfg.snapshot_times) {
        if (t >= cfg.t0 && t <= cfg.t0 + cfg.T) snapshot_steps.insert(nearest_step(t));
    }

    auto emit = [&](long k) {
        if (record_steps.count(k)) sink.record(make_record(u, cfg.delta, time_of(k)));
        if (snapshot_steps.count(k)) sink.snapshot(time_of(k), u);
    };

    StrangStepper stepper(u.grid(), cfg.delta, SubcycleOptions{cfg.safety, cfg.max_substeps});
    emit(0);
    for (long k = 1; k <= n; ++k) {
        const double tau = k == n ? last_tau : cfg.tau;
        try {
            u = stepper.step(std::move(u), tau);
        } catch (const BlowUpError& e) {
            throw BlowUpError(std::string(e.what()) + " during step " + std::to_string(k) + " (t = " +
                                  std::to_string(time_of(k - 1)) + ")",
                              e.stage(), e.node());
        } catch (const RunawayError& e) {
            throw RunawayError(std::string(e.what()) + " during step " + std::to_string(k) + " (t = " +
                               std::to_string(time_of(k - 1)) + ")");
        }
        emit(k);
    }
    return u;
}

inline Field evolve(Field u, const RunConfig& cfg) {
    NullSink sink;
    return evolve(std::move(u), cfg, sink);
}

}  // namespace feos
