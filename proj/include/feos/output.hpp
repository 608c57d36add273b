#pragma once

// CSV writers/readers. All numbers are 17-significant-digit, locale-free,
// LF-terminated.

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "feos/diagnostics.hpp"
#include "feos/error.hpp"
#include "feos/harness.hpp"
#include "feos/text.hpp"

namespace feos {

inline constexpr std::string_view kDiagnosticsHeader = "t,energy,roughness,mean_u,max_grad";
inline constexpr std::string_view kConvergenceHeader = "J,tau,error,ratio,order";
inline constexpr std::string_view kFitHeader = "series,slope,intercept,t_min,t_max,residual,samples";

namespace detail {

inline void write_text_file(const std::filesystem::path& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    out.close();
    if (!out) throw IoError("write failed for '" + path.string() + "'");
}

inline std::string read_text_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open '" + path.string() + "' for reading");
    std::ostringstream ss;
    ss << in.rdbuf();
    if (in.bad()) throw IoError("read failed for '" + path.string() + "'");
    return ss.str();
}

}  // namespace detail

inline std::string diagnostics_csv(const std::vector<DiagnosticsRecord>& records) {
    std::string s(kDiagnosticsHeader);
    s += '\n';
    for (const auto& r : records) {
        s += text::format_real(r.t) + ',' + text::format_real(r.energy) + ',' + text::format_real(r.roughness) +
             ',' + text::format_real(r.mean_u) + ',' + text::format_real(r.max_grad) + '\n';
    }
    return s;
}

inline void write_diagnostics_csv(const std::vector<DiagnosticsRecord>& records, const std::filesystem::path& path) {
    detail::write_text_file(path, diagnostics_csv(records));
}

inline std::vector<DiagnosticsRecord> parse_diagnostics_csv(std::string_view text, const std::string& origin = "csv") {
    std::vector<DiagnosticsRecord> out;
    const auto lines = text::split(text, '\n');
    if (lines.empty() || text::trim(lines[0]) != kDiagnosticsHeader) {
        throw IoError(origin + ": expected header '" + std::string(kDiagnosticsHeader) + "'");
    }
    for (std::size_t i = 1; i < lines.size(); ++i) {
        const auto line = text::trim(lines[i]);
        if (line.empty()) continue;
        const auto cells = text::split(line, ',');
        if (cells.size() != 5) {
            throw IoError(origin + ": line " + std::to_string(i + 1) + " has " + std::to_string(cells.size()) +
                          " fields, expected 5");
        }
        double v[5];
        for (int c = 0; c < 5; ++c) {
            const auto parsed = text::parse_double(cells[c]);
            if (!parsed) throw IoError(origin + ": line " + std::to_string(i + 1) + ": bad number '" +
                                       std::string(cells[c]) + "'");
            v[c] = *parsed;
        }
        out.push_back({v[0], v[1], v[2], v[3], v[4]});
    }
    return out;
}

inline std::vector<DiagnosticsRecord> read_diagnostics_csv(const std::filesystem::path& path) {
    return parse_diagnostics_csv(detail::read_text_file(path), path.string());
}

inline std::string table_csv(const std::vector<ConvergenceRow>& rows) {
    std::string s(kConvergenceHeader);
    s += '\n';
    for (const auto& r : rows) {
        s += std::to_string(r.J) + ',' + text::format_real(r.tau) + ',' + text::format_real(r.error) + ',' +
             (r.ratio ? text::format_real(*r.ratio) : std::string()) + ',' +
             (r.order ? text::format_real(*r.order) : std::string()) + '\n';
    }
    return s;
}

inline void write_table_csv(const std::vector<ConvergenceRow>& rows, const std::filesystem::path& path) {
    detail::write_text_file(path, table_csv(rows));
}

struct NamedFit {
    std::string series;
    PowerLawFit fit;
};

inline std::string table_csv(const std::vector<NamedFit>& fits) {
    std::string s(kFitHeader);
    s += '\n';
    for (const auto& [name, f] : fits) {
        s += name + ',' + text::format_real(f.slope) + ',' + text::format_real(f.intercept) + ',' +
             text::format_real(f.t_min) + ',' + text::format_real(f.t_max) + ',' + text::format_real(f.residual) +
             ',' + std::to_string(f.samples) + '\n';
    }
    return s;
}

inline void write_table_csv(const std::vector<NamedFit>& fits, const std::filesystem::path& path) {
    detail::write_text_file(path, table_csv(fits));
}

inline void ensure_directory(const std::filesystem::path& dir) {
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec || !std::filesystem::is_directory(dir)) {
        throw IoError("cannot create directory '" + dir.string() + "': " + ec.message());
    }
}

}  // namespace feos
