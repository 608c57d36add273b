#pragma once

#include <fftw3.h>

#include <complex>
#include <cstddef>
#include <map>
#include <memory>
#include <mutex>
#include <span>
#include <utility>

#include "feos/grid.hpp"

namespace feos {

/// Signed mode number of FFT bin m on a J-point axis: 0..N-1, then -N..-1.
/// The unpaired Nyquist bin m = N maps to -N.
constexpr int signed_mode(int m, int J) noexcept { return m < J / 2 ? m : m - J; }

namespace detail {
inline std::mutex& fftw_planner_mutex() {
    static std::mutex m;
    return m;
}
}  // namespace detail

/// Real-to-complex / complex-to-real FFTW pair on a grid's node layout.
///
/// The half-spectrum is stored with the last axis truncated to N + 1 bins:
/// 1D index m in [0, N]; 2D index mx * (N + 1) + my with mx in [0, J).
/// Transforms are unnormalized. Plans use FFTW_ESTIMATE so the chosen
/// algorithm, and hence every output bit, is fixed for a given size.
class RealFourierTransform {
public:
    explicit RealFourierTransform(const Grid& grid)
        : dims_(grid.dims()), J_(grid.J()), real_size_(grid.size()),
          spectral_size_(grid.dims() == 1
                             ? static_cast<std::size_t>(grid.N() + 1)
                             : static_cast<std::size_t>(grid.J()) * static_cast<std::size_t>(grid.N() + 1)) {
        std::lock_guard lock(detail::fftw_planner_mutex());
        real_ = fftw_alloc_real(real_size_);
        spec_ = fftw_alloc_complex(spectral_size_);
        if (dims_ == 1) {
            forward_ = fftw_plan_dft_r2c_1d(J_, real_, spec_, FFTW_ESTIMATE);
            inverse_ = fftw_plan_dft_c2r_1d(J_, spec_, real_, FFTW_ESTIMATE);
        } else {
            forward_ = fftw_plan_dft_r2c_2d(J_, J_, real_, spec_, FFTW_ESTIMATE);
            inverse_ = fftw_plan_dft_c2r_2d(J_, J_, spec_, real_, FFTW_ESTIMATE);
        }
    }

    RealFourierTransform(const RealFourierTransform&) = delete;
    RealFourierTransform& operator=(const RealFourierTransform&) = delete;

    ~RealFourierTransform() {
        std::lock_guard lock(detail::fftw_planner_mutex());
        fftw_destroy_plan(forward_);
        fftw_destroy_plan(inverse_);
        fftw_free(real_);
        fftw_free(spec_);
    }

    int dims() const noexcept { return dims_; }
    int J() const noexcept { return J_; }
    std::size_t real_size() const noexcept { return real_size_; }
    std::size_t spectral_size() const noexcept { return spectral_size_; }

    std::span<double> real() noexcept { return {real_, real_size_}; }
    std::span<std::complex<double>> spectrum() noexcept {
        return {reinterpret_cast<std::complex<double>*>(spec_), spectral_size_};
    }

    /// real() -> spectrum().
    void forward() noexcept { fftw_execute(forward_); }
    /// spectrum() -> real(); clobbers spectrum().
    void inverse() noexcept { fftw_execute(inverse_); }

    /// Signed mode pair (p, q) of half-spectrum slot s; q = 0 in 1D.
    std::pair<int, int> modes(std::size_t s) const noexcept {
        if (dims_ == 1) return {signed_mode(static_cast<int>(s), J_), 0};
        const std::size_t width = static_cast<std::size_t>(J_ / 2 + 1);
        const int mx = static_cast<int>(s / width);
        const int my = static_cast<int>(s % width);
        return {signed_mode(mx, J_), signed_mode(my, J_)};
    }

private:
    int dims_;
    int J_;
    std::size_t real_size_;
    std::size_t spectral_size_;
    double* real_ = nullptr;
    fftw_complex* spec_ = nullptr;
    fftw_plan forward_ = nullptr;
    fftw_plan inverse_ = nullptr;
};

/// Per-thread transform for a grid shape. Buffers are mutable scratch, so
/// each thread gets its own instance.
inline RealFourierTransform& transform_for(const Grid& grid) {
    thread_local std::map<std::pair<int, int>, std::unique_ptr<RealFourierTransform>> cache;
    auto& slot = cache[{grid.dims(), grid.J()}];
    if (!slot) slot = std::make_unique<RealFourierTransform>(grid);
    return *slot;
}

}  // namespace feos
