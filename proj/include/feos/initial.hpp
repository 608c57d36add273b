#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <string>
#include <string_view>

#include "feos/error.hpp"
#include "feos/grid.hpp"

namespace feos {

/// SplitMix64 (Steele, Lea, Flood 2014). Doubles in [0, 1) come from the
/// top 53 bits of each output.
class SplitMix64 {
public:
    static constexpr std::string_view name = "splitmix64";

    explicit SplitMix64(std::uint64_t seed) noexcept : state_(seed) {}

    std::uint64_t next() noexcept {
        std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    double next_unit() noexcept { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

private:
    std::uint64_t state_;
};

enum class InitialKind { Ts32Trig, Ex1Trig, UniformRandom };

inline std::string_view to_string(InitialKind kind) noexcept {
    switch (kind) {
        case InitialKind::Ts32Trig: return "ts32-trig";
        case InitialKind::Ex1Trig: return "ex1-trig";
        case InitialKind::UniformRandom: return "uniform-random";
    }
    return "?";
}

inline InitialKind parse_initial_kind(std::string_view s) {
    if (s == "ts32-trig") return InitialKind::Ts32Trig;
    if (s == "ex1-trig") return InitialKind::Ex1Trig;
    if (s == "uniform-random") return InitialKind::UniformRandom;
    throw ConfigError("unknown ic '" + std::string(s) + "' (expected ts32-trig, ex1-trig or uniform-random)");
}

/// 0.1 (sin 3x sin 2y + sin 5x sin 5y) on (0, 2 pi)^2.
inline double accuracy_test_profile(double x, double y) {
    return 0.1 * (std::sin(3.0 * x) * std::sin(2.0 * y) + std::sin(5.0 * x) * std::sin(5.0 * y));
}

/// 0.1 (sin(pi x / 2) + sin(2 pi x / 3) + sin(pi x)) on (0, 12).
inline double slope_selection_profile(double x) {
    constexpr double pi = std::numbers::pi;
    return 0.1 * (std::sin(pi * x / 2.0) + std::sin(2.0 * pi * x / 3.0) + std::sin(pi * x));
}

inline constexpr double kNoiseAmplitude = 1e-3;

/// Uniform draws in [-1e-3, 1e-3) assigned in row-major node order.
inline Field uniform_noise(const Grid& grid, std::uint64_t seed, double amplitude = kNoiseAmplitude) {
    SplitMix64 rng(seed);
    Field out(grid);
    for (auto& v : out.values()) v = -amplitude + 2.0 * amplitude * rng.next_unit();
    return out;
}

inline Field initial_condition(InitialKind kind, const Grid& grid, std::uint64_t seed = 0) {
    switch (kind) {
        case InitialKind::Ts32Trig:
            if (grid.dims() != 2) throw ConfigError("ic ts32-trig requires dims = 2");
            return sample_function(grid, accuracy_test_profile);
        case InitialKind::Ex1Trig:
            if (grid.dims() != 1) throw ConfigError("ic ex1-trig requires dims = 1");
            return sample_function(grid, slope_selection_profile);
        case InitialKind::UniformRandom:
            return uniform_noise(grid, seed);
    }
    throw ConfigError("unhandled initial condition");
}

}  // namespace feos
