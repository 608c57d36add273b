#pragma once

#include <cmath>
#include <cstddef>
#include <span>
#include <string>
#include <type_traits>
#include <utility>
#include <vector>

#include "feos/error.hpp"

namespace feos {

/// Periodic uniform grid on (0, 2L)^dims with J nodes per dimension.
///
/// Nodes follow the 1..J convention x_j = j*h, so storage index i holds the
/// node at x = (i + 1) * h and the last node sits at 2L (the image of 0).
class Grid {
public:
    Grid(int dims, int J, double L) : dims_(dims), J_(J), L_(L), h_(2.0 * L / J) {
        if (dims != 1 && dims != 2) {
            throw ConfigError("grid dims must be 1 or 2, got " + std::to_string(dims));
        }
        if (J < 4 || J % 2 != 0) {
            throw ConfigError("grid J must be even and >= 4, got " + std::to_string(J));
        }
        if (!(L > 0.0) || !std::isfinite(L)) {
            throw ConfigError("grid L must be positive and finite");
        }
    }

    int dims() const noexcept { return dims_; }
    int J() const noexcept { return J_; }
    /// Half period; the domain side is 2L.
    double L() const noexcept { return L_; }
    double h() const noexcept { return h_; }
    int N() const noexcept { return J_ / 2; }

    std::size_t size() const noexcept {
        return dims_ == 1 ? static_cast<std::size_t>(J_)
                          : static_cast<std::size_t>(J_) * static_cast<std::size_t>(J_);
    }

    /// Coordinate of storage index i along any axis.
    double coord(int i) const noexcept { return (i + 1) * h_; }

    /// Lebesgue measure of the domain, (2L)^dims.
    double volume() const noexcept { return std::pow(2.0 * L_, dims_); }

    /// Quadrature weight h^dims of the trapezoidal rule.
    double cell_measure() const noexcept { return dims_ == 1 ? h_ : h_ * h_; }

    int wrap(int i) const noexcept {
        i %= J_;
        return i < 0 ? i + J_ : i;
    }

    std::size_t index(int j, int k) const noexcept {
        return static_cast<std::size_t>(wrap(j)) * static_cast<std::size_t>(J_) +
               static_cast<std::size_t>(wrap(k));
    }

    friend bool operator==(const Grid& a, const Grid& b) noexcept {
        return a.dims_ == b.dims_ && a.J_ == b.J_ && a.L_ == b.L_;
    }

private:
    int dims_;
    int J_;
    double L_;
    double h_;
};

inline Grid make_grid(int dims, int J, double L) { return Grid(dims, J, L); }

/// Nodal values on a Grid. 2D storage is row-major with the y index
/// contiguous: value(j, k) lives at j * J + k.
class Field {
public:
    explicit Field(Grid grid) : grid_(grid), values_(grid.size(), 0.0) {}

    Field(Grid grid, std::vector<double> values) : grid_(grid), values_(std::move(values)) {
        if (values_.size() != grid_.size()) {
            throw UsageError("field has " + std::to_string(values_.size()) +
                             " values but grid needs " + std::to_string(grid_.size()));
        }
    }

    const Grid& grid() const noexcept { return grid_; }
    std::size_t size() const noexcept { return values_.size(); }

    std::span<double> values() noexcept { return values_; }
    std::span<const double> values() const noexcept { return values_; }
    double* data() noexcept { return values_.data(); }
    const double* data() const noexcept { return values_.data(); }

    double& operator[](std::size_t i) noexcept { return values_[i]; }
    double operator[](std::size_t i) const noexcept { return values_[i]; }

    /// Periodic 1D access.
    double at(int j) const noexcept { return values_[static_cast<std::size_t>(grid_.wrap(j))]; }
    /// Periodic 2D access.
    double at(int j, int k) const noexcept { return values_[grid_.index(j, k)]; }
    double& at(int j, int k) noexcept { return values_[grid_.index(j, k)]; }

    bool all_finite() const noexcept {
        for (double v : values_) {
            if (!std::isfinite(v)) return false;
        }
        return true;
    }

    friend bool operator==(const Field& a, const Field& b) noexcept {
        return a.grid_ == b.grid_ && a.values_ == b.values_;
    }

private:
    Grid grid_;
    std::vector<double> values_;
};

/// Samples f at every node; f takes x in 1D and (x, y) in 2D.
template <class F>
Field sample_function(const Grid& grid, F&& f) {
    Field out(grid);
    const int J = grid.J();
    auto check = [](double v, int j, int k) {
        if (!std::isfinite(v)) {
            throw SamplingError("sampled function is not finite at node (" + std::to_string(j + 1) +
                                (k >= 0 ? ", " + std::to_string(k + 1) : std::string()) + ")");
        }
        return v;
    };
    constexpr bool unary = std::is_invocable_v<F&, double>;
    constexpr bool binary = std::is_invocable_v<F&, double, double>;
    static_assert(unary || binary, "sample_function needs f(x) or f(x, y)");
    if (grid.dims() == 1) {
        if constexpr (unary) {
            for (int j = 0; j < J; ++j) out[static_cast<std::size_t>(j)] = check(f(grid.coord(j)), j, -1);
        } else {
            throw UsageError("sample_function: 1D grid needs f(x)");
        }
    } else {
        if constexpr (binary) {
            for (int j = 0; j < J; ++j) {
                const double x = grid.coord(j);
                for (int k = 0; k < J; ++k) out[grid.index(j, k)] = check(f(x, grid.coord(k)), j, k);
            }
        } else {
            throw UsageError("sample_function: 2D grid needs f(x, y)");
        }
    }
    return out;
}

/// sqrt(h^d * sum u^2), accumulated in ascending storage order.
inline double discrete_l2_norm(const Field& u) {
    double sum = 0.0;
    for (double v : u.values()) sum += v * v;
    return std::sqrt(u.grid().cell_measure() * sum);
}

inline double mean(const Field& u) {
    double sum = 0.0;
    for (double v : u.values()) sum += v;
    return sum / static_cast<double>(u.size());
}

inline Field operator-(const Field& a, const Field& b) {
    if (!(a.grid() == b.grid())) throw UsageError("field difference on mismatched grids");
    Field out(a.grid());
    for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i] - b[i];
    return out;
}

inline Field scaled(const Field& u, double alpha) {
    Field out(u.grid());
    for (std::size_t i = 0; i < u.size(); ++i) out[i] = alpha * u[i];
    return out;
}

/// Cyclic shift by `shift` nodes along x: out(j, k) = u(j - shift, k).
inline Field shifted(const Field& u, int shift) {
    const Grid& g = u.grid();
    Field out(g);
    const int J = g.J();
    if (g.dims() == 1) {
        for (int j = 0; j < J; ++j) out[static_cast<std::size_t>(j)] = u.at(j - shift);
    } else {
        for (int j = 0; j < J; ++j)
            for (int k = 0; k < J; ++k) out.at(j, k) = u.at(j - shift, k);
    }
    return out;
}

/// Fine-to-coarse restriction by index subsampling. Grids nest when the
/// coarse J divides the fine J; coarse node j coincides with fine node j*r.
inline Field restrict_to(const Field& fine, const Grid& coarse) {
    const Grid& fg = fine.grid();
    if (fg.dims() != coarse.dims() || fg.L() != coarse.L()) {
        throw ConfigError("restriction needs grids with equal dims and L");
    }
    if (fg.J() % coarse.J() != 0) {
        throw ConfigError("grids do not nest: J=" + std::to_string(coarse.J()) +
                          " does not divide J=" + std::to_string(fg.J()));
    }
    const int r = fg.J() / coarse.J();
    Field out(coarse);
    const int J = coarse.J();
    if (coarse.dims() == 1) {
        for (int j = 0; j < J; ++j) out[static_cast<std::size_t>(j)] = fine.at((j + 1) * r - 1);
    } else {
        for (int j = 0; j < J; ++j)
            for (int k = 0; k < J; ++k) out.at(j, k) = fine.at((j + 1) * r - 1, (k + 1) * r - 1);
    }
    return out;
}

}  // namespace feos
