#pragma once

// MBEF field snapshots:
//   "MBEF" | version u32 | dims u32 | J u32 | L f64 | J^dims f64 values
// All multi-byte quantities little-endian, values in row-major order.

#include <algorithm>
#include <array>
#include <bit>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <string>
#include <vector>

#include "feos/error.hpp"
#include "feos/grid.hpp"

namespace feos {

inline constexpr std::uint32_t kSnapshotVersion = 1;

namespace detail {

template <class T>
void put_le(std::ostream& os, T value) {
    std::array<unsigned char, sizeof(T)> bytes;
    std::memcpy(bytes.data(), &value, sizeof(T));
    if constexpr (std::endian::native == std::endian::big) {
        std::reverse(bytes.begin(), bytes.end());
    }
    os.write(reinterpret_cast<const char*>(bytes.data()), sizeof(T));
}

template <class T>
T get_le(std::istream& is, const std::string& path) {
    std::array<unsigned char, sizeof(T)> bytes;
    if (!is.read(reinterpret_cast<char*>(bytes.data()), sizeof(T))) {
        throw IoError("truncated snapshot: " + path);
    }
    if constexpr (std::endian::native == std::endian::big) {
        std::reverse(bytes.begin(), bytes.end());
    }
    T value;
    std::memcpy(&value, bytes.data(), sizeof(T));
    return value;
}

}  // namespace detail

inline void write_snapshot(const Field& field, const std::string& path) {
    std::ofstream os(path, std::ios::binary | std::ios::trunc);
    if (!os) throw IoError("cannot open snapshot for writing: " + path);
    os.write("MBEF", 4);
    detail::put_le<std::uint32_t>(os, kSnapshotVersion);
    detail::put_le<std::uint32_t>(os, static_cast<std::uint32_t>(field.grid().dims()));
    detail::put_le<std::uint32_t>(os, static_cast<std::uint32_t>(field.grid().J()));
    detail::put_le<double>(os, field.grid().L());
    for (double v : field.values()) detail::put_le<double>(os, v);
    if (!os) throw IoError("failed writing snapshot: " + path);
}

inline Field read_snapshot(const std::string& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw IoError("cannot open snapshot: " + path);
    char magic[4];
    if (!is.read(magic, 4) || std::memcmp(magic, "MBEF", 4) != 0) {
        throw IoError("not an MBEF snapshot: " + path);
    }
    const auto version = detail::get_le<std::uint32_t>(is, path);
    if (version != kSnapshotVersion) {
        throw IoError("unsupported snapshot version " + std::to_string(version) + ": " + path);
    }
    const auto dims = detail::get_le<std::uint32_t>(is, path);
    const auto J = detail::get_le<std::uint32_t>(is, path);
    const auto L = detail::get_le<double>(is, path);
    Grid grid = [&] {
        try {
            return Grid(static_cast<int>(dims), static_cast<int>(J), L);
        } catch (const ConfigError& e) {
            throw IoError(std::string("bad snapshot header (") + e.what() + "): " + path);
        }
    }();
    std::vector<double> values(grid.size());
    for (double& v : values) v = detail::get_le<double>(is, path);
    return Field(grid, std::move(values));
}

}  // namespace feos
