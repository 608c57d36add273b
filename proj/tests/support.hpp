#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <filesystem>
#include <numbers>
#include <random>
#include <string>
#include <vector>

#include "feos/grid.hpp"

namespace feos::test {

inline Field random_field(const Grid& g, std::uint64_t seed, double amplitude = 1.0) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> dist(-amplitude, amplitude);
    Field f(g);
    for (auto& v : f.values()) v = dist(rng);
    return f;
}

/// Full complex DFT by direct summation. Returns coefficients c[p][q]
/// indexed by unsigned mode (row-major), with u = sum c exp(i (p x + q y) pi / L).
inline std::vector<std::complex<double>> naive_dft(const Field& u) {
    const Grid& g = u.grid();
    const int J = g.J();
    const int ny = g.dims() == 1 ? 1 : J;
    const double two_pi = 2.0 * std::numbers::pi;
    std::vector<std::complex<double>> c(static_cast<std::size_t>(J) * static_cast<std::size_t>(ny));
    for (int p = 0; p < J; ++p)
        for (int q = 0; q < ny; ++q) {
            std::complex<double> acc = 0.0;
            for (int j = 0; j < J; ++j)
                for (int k = 0; k < ny; ++k) {
                    // node coordinate index is (j + 1), (k + 1)
                    const double phase = -two_pi * (static_cast<double>(p) * (j + 1) / J +
                                                    static_cast<double>(q) * (k + 1) / J);
                    acc += u.values()[static_cast<std::size_t>(j * ny + k)] * std::polar(1.0, phase);
                }
            c[static_cast<std::size_t>(p * ny + q)] = acc / static_cast<double>(u.size());
        }
    return c;
}

/// Inverse of naive_dft; returns the real part and the largest |imag|.
inline Field naive_idft(const Grid& g, const std::vector<std::complex<double>>& c, double* max_imag = nullptr) {
    const int J = g.J();
    const int ny = g.dims() == 1 ? 1 : J;
    const double two_pi = 2.0 * std::numbers::pi;
    Field out(g);
    double imag = 0.0;
    for (int j = 0; j < J; ++j)
        for (int k = 0; k < ny; ++k) {
            std::complex<double> acc = 0.0;
            for (int p = 0; p < J; ++p)
                for (int q = 0; q < ny; ++q) {
                    const double phase = two_pi * (static_cast<double>(p) * (j + 1) / J +
                                                   static_cast<double>(q) * (k + 1) / J);
                    acc += c[static_cast<std::size_t>(p * ny + q)] * std::polar(1.0, phase);
                }
            out.values()[static_cast<std::size_t>(j * ny + k)] = acc.real();
            imag = std::max(imag, std::abs(acc.imag()));
        }
    if (max_imag) *max_imag = imag;
    return out;
}

inline int signed_index(int m, int J) { return m <= J / 2 ? m : m - J; }

inline double max_abs_diff(const Field& a, const Field& b) {
    double m = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
    return m;
}

inline double max_abs(const Field& a) {
    double m = 0.0;
    for (double v : a.values()) m = std::max(m, std::abs(v));
    return m;
}

/// Fresh per-test scratch directory under the system temp dir.
inline std::filesystem::path scratch_dir(const std::string& name) {
    auto dir = std::filesystem::temp_directory_path() / ("feos_test_" + name);
    std::filesystem::remove_all(dir);
    std::filesystem::create_directories(dir);
    return dir;
}

}  // namespace feos::test
