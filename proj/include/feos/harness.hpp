#pragma once

// Experiment harness: spatial/temporal order studies against a computed
// fine reference, the 1D slope-selection runs and 2D coarsening with
// power-law fits.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <functional>
#include <numbers>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "feos/diagnostics.hpp"
#include "feos/error.hpp"
#include "feos/grid.hpp"
#include "feos/initial.hpp"
#include "feos/splitting.hpp"

namespace feos {

/// A periodic initial-value problem: model parameters, domain and u0.
struct Problem {
    int dims = 2;
    double L = std::numbers::pi;
    double delta = 0.1;
    double T = 1.0;
    /// u0(x, y); y is ignored in 1D.
    std::function<double(double, double)> initial;

    Field initial_field(int J) const {
        const Grid g(dims, J, L);
        if (dims == 1) return sample_function(g, [&](double x) { return initial(x, 0.0); });
        return sample_function(g, initial);
    }
};

/// delta = 0.1 on (0, 2 pi)^2 to T = 1 from 0.1 (sin 3x sin 2y + sin 5x sin 5y).
inline Problem accuracy_problem() {
    return Problem{2, std::numbers::pi, 0.1, 1.0, accuracy_test_profile};
}

/// tau = C0 h^2 with C0 fixed by tau = 0.005 at J = 128 on (0, 2 pi).
inline double accuracy_C0() {
    const double h128 = 2.0 * std::numbers::pi / 128.0;
    return 0.005 / (h128 * h128);
}

inline Field solve(const Problem& problem, int J, double tau, double safety = kDefaultSafety) {
    RunConfig cfg;
    cfg.delta = problem.delta;
    cfg.tau = tau;
    cfg.T = problem.T;
    cfg.safety = safety;
    cfg.diag_every = 0;
    NullSink sink;
    return evolve(problem.initial_field(J), cfg, sink);
}

/// Discrete L2 distance between u and the reference restricted to u's grid.
inline double discrete_l2_error(const Field& u, const Field& reference) {
    return discrete_l2_norm(u - restrict_to(reference, u.grid()));
}

struct ConvergenceRow {
    int J = 0;
    double tau = 0.0;
    double error = 0.0;
    /// error(previous row) / error(this row); absent on the first row.
    std::optional<double> ratio;
    std::optional<double> order;
};

/// Fills ratio and order = log2(ratio) from consecutive errors.
inline void fill_orders(std::vector<ConvergenceRow>& rows) {
    for (std::size_t i = 0; i < rows.size(); ++i) {
        if (i == 0) {
            rows[i].ratio.reset();
            rows[i].order.reset();
            continue;
        }
        rows[i].ratio = rows[i - 1].error / rows[i].error;
        rows[i].order = std::log2(*rows[i].ratio);
    }
}

struct ReferenceSpec {
    int J = 512;
    double tau = 0.0;
};

/// Spatial-temporal study with tau = C0 h^2 on each level.
inline std::vector<ConvergenceRow> convergence_study(const Problem& problem, const std::vector<int>& J_list,
                                                     double C0, const ReferenceSpec& ref,
                                                     double safety = kDefaultSafety) {
    if (J_list.empty()) throw ConfigError("convergence study needs at least one level");
    for (std::size_t i = 1; i < J_list.size(); ++i) {
        if (J_list[i] != 2 * J_list[i - 1]) throw ConfigError("convergence levels must double: J_list ascending by 2x");
    }
    const int J_max = J_list.back();
    if (ref.J < 2 * J_max) throw ConfigError("reference J must be >= 2 max(J_list)");
    std::vector<double> taus;
    for (int J : J_list) {
        if (ref.J % J != 0) {
            throw ConfigError("grids do not nest: J=" + std::to_string(J) + " does not divide J_ref=" +
                              std::to_string(ref.J));
        }
        const double h = 2.0 * problem.L / J;
        taus.push_back(C0 * h * h);
    }
    const double tau_min = *std::min_element(taus.begin(), taus.end());
    if (!(ref.tau > 0.0) || ref.tau > tau_min / 8.0 * (1.0 + 1e-12)) {
        throw ConfigError("reference tau must be positive and <= min(tau)/8");
    }
    const Field reference = solve(problem, ref.J, ref.tau, safety);
    std::vector<ConvergenceRow> rows;
    for (std::size_t i = 0; i < J_list.size(); ++i) {
        const Field u = solve(problem, J_list[i], taus[i], safety);
        rows.push_back({J_list[i], taus[i], discrete_l2_error(u, reference), std::nullopt, std::nullopt});
    }
    fill_orders(rows);
    return rows;
}

/// Temporal study at fixed J: rows in the given (decreasing) tau order.
inline std::vector<ConvergenceRow> temporal_study(const Problem& problem, int J, const std::vector<double>& taus,
                                                  double tau_ref, double safety = kDefaultSafety) {
    if (taus.empty()) throw ConfigError("temporal study needs at least one tau");
    const Field reference = solve(problem, J, tau_ref, safety);
    std::vector<ConvergenceRow> rows;
    for (double tau : taus) {
        const Field u = solve(problem, J, tau, safety);
        rows.push_back({J, tau, discrete_l2_norm(u - reference), std::nullopt, std::nullopt});
    }
    fill_orders(rows);
    return rows;
}

struct PowerLawFit {
    double slope = 0.0;
    double intercept = 0.0;  // natural log of the prefactor
    double t_min = 0.0;
    double t_max = 0.0;
    /// RMS of log-log residuals.
    double residual = 0.0;
    std::size_t samples = 0;
};

inline constexpr std::size_t kMinFitSamples = 8;

/// Least squares of log(value) on log(t) over samples with t_min < t < t_max.
inline PowerLawFit fit_power_law(const std::vector<std::pair<double, double>>& series, double t_min, double t_max) {
    if (!(t_min < t_max)) throw FitError("fit window must satisfy t_min < t_max");
    std::vector<double> lx, ly;
    for (std::size_t i = 0; i < series.size(); ++i) {
        const auto [t, v] = series[i];
        if (!(t > t_min && t < t_max)) continue;
        if (!(v > 0.0) || !(t > 0.0)) {
            throw FitError("sample " + std::to_string(i) + " (t = " + std::to_string(t) +
                           ") is not positive and cannot enter a log-log fit");
        }
        lx.push_back(std::log(t));
        ly.push_back(std::log(v));
    }
    if (lx.size() < kMinFitSamples) {
        throw FitError("power-law fit needs at least " + std::to_string(kMinFitSamples) + " samples inside (" +
                       std::to_string(t_min) + ", " + std::to_string(t_max) + "), got " + std::to_string(lx.size()));
    }
    const double n = static_cast<double>(lx.size());
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < lx.size(); ++i) {
        mx += lx[i];
        my += ly[i];
    }
    mx /= n;
    my /= n;
    double sxx = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < lx.size(); ++i) {
        sxx += (lx[i] - mx) * (lx[i] - mx);
        sxy += (lx[i] - mx) * (ly[i] - my);
    }
    if (!(sxx > 0.0)) throw FitError("power-law fit needs at least two distinct times");
    PowerLawFit fit;
    fit.slope = sxy / sxx;
    fit.intercept = my - fit.slope * mx;
    fit.t_min = t_min;
    fit.t_max = t_max;
    fit.samples = lx.size();
    double ss = 0.0;
    for (std::size_t i = 0; i < lx.size(); ++i) {
        const double r = ly[i] - (fit.intercept + fit.slope * lx[i]);
        ss += r * r;
    }
    fit.residual = std::sqrt(ss / n);
    return fit;
}

/// Times t_min * rho^k, with rho chosen so `per_window` of them fall
/// strictly inside (t_min, t_max), extended to cover [t_lo, t_hi].
inline std::vector<double> geometric_times(double t_min, double t_max, int per_window, double t_lo, double t_hi) {
    if (!(t_min > 0.0 && t_max > t_min && per_window > 0 && t_lo > 0.0 && t_hi >= t_lo)) {
        throw ConfigError("invalid geometric sampling parameters");
    }
    const double log_rho = std::log(t_max / t_min) / (per_window + 1);
    const long k_lo = static_cast<long>(std::floor(std::log(t_lo / t_min) / log_rho));
    const long k_hi = static_cast<long>(std::ceil(std::log(t_hi / t_min) / log_rho));
    std::vector<double> times;
    const long k_end = per_window + 1;
    for (long k = k_lo; k <= k_hi; ++k) {
        // Window ends are pinned so roundoff cannot move them inside.
        const double t = k == 0 ? t_min : k == k_end ? t_max : t_min * std::exp(log_rho * static_cast<double>(k));
        if (t >= t_lo && t <= t_hi) times.push_back(t);
    }
    return times;
}

// --- 1D slope selection -----------------------------------------------------

struct Example1Preset {
    double delta;
    int J;
    double tau;
    double T;
};

/// The (delta, J, tau, T) menu of the 1D experiment on (0, 12).
inline constexpr std::array<Example1Preset, 4> kExample1Presets{{
    {1.0, 128, 0.1, 100.0},
    {0.1, 128, 0.01, 200.0},
    {0.01, 256, 0.001, 500.0},
    {0.001, 512, 0.0001, 1000.0},
}};

inline constexpr double kExample1HalfPeriod = 6.0;

struct Example1Result {
    Field final_state;
    std::vector<DiagnosticsRecord> records;
};

/// 1D run on (0, 12) from the three-sine profile; tau defaults to delta/10.
inline Example1Result run_example1(double delta, int J, std::optional<double> tau, double T, long diag_every = 1,
                                   double safety = kDefaultSafety) {
    const Grid grid(1, J, kExample1HalfPeriod);
    RunConfig cfg;
    cfg.delta = delta;
    cfg.tau = tau.value_or(delta / 10.0);
    cfg.T = T;
    cfg.safety = safety;
    cfg.diag_every = diag_every;
    RecordingSink sink;
    Field u = evolve(initial_condition(InitialKind::Ex1Trig, grid), cfg, sink);
    return {std::move(u), std::move(sink.records)};
}

// --- 2D coarsening ----------------------------------------------------------

struct Example2Params {
    int J = 512;
    double L = 50.0;
    double delta = 0.1;
    double tau = 0.01;
    double T = 30000.0;
    std::uint64_t seed = 1;
    double fit_t_min = 20.0;
    double fit_t_max = 400.0;
    int samples_per_window = 40;
    /// Times at which free-energy density snapshots are emitted.
    std::vector<double> snapshot_times;
    double safety = kDefaultSafety;
};

struct Example2Result {
    std::vector<DiagnosticsRecord> records;
    PowerLawFit energy_fit;
    PowerLawFit roughness_fit;
    Field final_state;
};

namespace detail {
/// Forwards records and converts snapshots to free-energy density fields.
template <RunSink Inner>
struct DensitySink {
    Inner& inner;
    double delta;
    std::vector<DiagnosticsRecord> records;
    void record(const DiagnosticsRecord& r) {
        records.push_back(r);
        inner.record(r);
    }
    void snapshot(double t, const Field& u) { inner.snapshot(t, free_energy_density(u, delta)); }
};
}  // namespace detail

inline std::vector<std::pair<double, double>> series_of(const std::vector<DiagnosticsRecord>& records,
                                                        double DiagnosticsRecord::*member) {
    std::vector<std::pair<double, double>> s;
    s.reserve(records.size());
    for (const auto& r : records) s.emplace_back(r.t, r.*member);
    return s;
}

/// 2D coarsening from seeded uniform noise in [-1e-3, 1e-3]. Records are
/// taken on a geometric time grid so log-log fits see even sample density.
template <RunSink Sink>
Example2Result run_example2(const Example2Params& p, Sink& sink) {
    const Grid grid(2, p.J, p.L);
    RunConfig cfg;
    cfg.delta = p.delta;
    cfg.tau = p.tau;
    cfg.T = p.T;
    cfg.safety = p.safety;
    cfg.diag_every = 0;
    cfg.diag_times = geometric_times(p.fit_t_min, p.fit_t_max, p.samples_per_window, p.tau, p.T);
    cfg.snapshot_times = p.snapshot_times;
    detail::DensitySink<Sink> density{sink, p.delta, {}};
    Field u = evolve(uniform_noise(grid, p.seed), cfg, density);
    Example2Result res{std::move(density.records), {}, {}, std::move(u)};
    res.energy_fit = fit_power_law(series_of(res.records, &DiagnosticsRecord::energy), p.fit_t_min, p.fit_t_max);
    res.roughness_fit =
        fit_power_law(series_of(res.records, &DiagnosticsRecord::roughness), p.fit_t_min, p.fit_t_max);
    return res;
}

inline Example2Result run_example2(const Example2Params& p) {
    NullSink sink;
    return run_example2(p, sink);
}

}  // namespace feos
