// feos: command-line front end for runs, order studies and power-law fits.

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "feos/feos.hpp"

namespace fs = std::filesystem;

namespace {

enum Exit : int { kOk = 0, kConfig = 2, kRuntime = 3, kIo = 4 };

struct Common {
    std::string config_path;
    std::string out_dir;
    std::vector<std::string> sets;
    int threads = 0;
};

feos::KeyValues load_entries(const Common& c) {
    feos::KeyValues entries;
    if (!c.config_path.empty()) {
        entries = feos::parse_key_values(feos::detail::read_text_file(c.config_path));
    }
    return entries;
}

/// Layers defaults, then the config file, then --set, then --out.
feos::ConfigFile resolve(const Common& c, const feos::KeyValues& defaults) {
    feos::KeyValues entries = defaults;
    for (const auto& e : load_entries(c)) feos::apply_override(entries, e.key + "=" + e.value);
    for (const auto& s : c.sets) feos::apply_override(entries, s);
    if (!c.out_dir.empty()) feos::apply_override(entries, "out_dir=" + c.out_dir);
    return feos::resolve_config(entries);
}

fs::path out_path(const Common& c, const std::string& fallback) {
    return c.out_dir.empty() ? fs::path(fallback) : fs::path(c.out_dir);
}

void print_rows(const std::vector<feos::ConvergenceRow>& rows) {
    std::cout << feos::table_csv(rows);
}

int cmd_run(const Common& c) {
    const auto cfg = resolve(c, {});
    const auto res = feos::run_from_config(cfg, cfg.out_dir);
    const auto& last = res.records.back();
    std::cout << "t = " << feos::text::format_real(last.t) << "  energy = " << feos::text::format_real(last.energy)
              << "  roughness = " << feos::text::format_real(last.roughness) << "\nwrote " << res.directory.string()
              << '\n';
    return kOk;
}

struct ConvergeArgs {
    std::vector<int> levels{64, 128, 256};
    int ref_J = 512;
    double ref_divisor = 8.0;
    bool temporal = false;
    int temporal_J = 256;
    std::vector<double> taus{4e-3, 2e-3, 1e-3};
    double tau_ref = 1.25e-4;
};

int cmd_converge(const Common& c, const ConvergeArgs& a) {
    const auto problem = feos::accuracy_problem();
    const fs::path dir = out_path(c, "out/converge");
    feos::ensure_directory(dir);
    std::vector<feos::ConvergenceRow> rows;
    if (a.temporal) {
        rows = feos::temporal_study(problem, a.temporal_J, a.taus, a.tau_ref);
        feos::write_table_csv(rows, dir / "temporal.csv");
    } else {
        const double C0 = feos::accuracy_C0();
        const double h = 2.0 * problem.L / a.levels.back();
        const double tau_min = C0 * h * h;
        const feos::ReferenceSpec ref{a.ref_J, tau_min / a.ref_divisor};
        rows = feos::convergence_study(problem, a.levels, C0, ref);
        feos::write_table_csv(rows, dir / "convergence.csv");
    }
    print_rows(rows);
    return kOk;
}

struct CoarsenArgs {
    double t_min = 20.0;
    double t_max = 400.0;
    int per_window = 40;
};

int cmd_coarsen(const Common& c, const CoarsenArgs& a) {
    const feos::KeyValues defaults{{"dims", "2", 0},    {"J", "256", 0},   {"L", "50", 0},
                                   {"delta", "0.1", 0}, {"tau", "0.01", 0}, {"T", "400", 0},
                                   {"ic", "uniform-random", 0}, {"seed", "1", 0}, {"out_dir", "out/coarsen", 0}};
    const auto cfg = resolve(c, defaults);
    if (cfg.dims != 2 || cfg.ic != feos::InitialKind::UniformRandom) {
        throw feos::ConfigError("coarsen requires dims = 2 and ic = uniform-random");
    }
    const fs::path dir = cfg.out_dir;
    feos::ensure_directory(dir);
    feos::detail::write_text_file(dir / "config.resolved", feos::echo(cfg));

    feos::Example2Params p;
    p.J = cfg.J;
    p.L = cfg.L;
    p.delta = cfg.delta;
    p.tau = cfg.tau;
    p.T = cfg.T;
    p.seed = *cfg.seed;
    p.fit_t_min = a.t_min;
    p.fit_t_max = a.t_max;
    p.samples_per_window = a.per_window;
    p.snapshot_times = cfg.snapshot_times;
    p.safety = cfg.safety;
    feos::DirectorySink sink{dir, {}, {}};
    const auto res = feos::run_example2(p, sink);
    feos::write_diagnostics_csv(res.records, dir / "diagnostics.csv");
    const std::vector<feos::NamedFit> fits{{"energy", res.energy_fit}, {"roughness", res.roughness_fit}};
    feos::write_table_csv(fits, dir / "fits.csv");
    std::cout << feos::table_csv(fits);
    return kOk;
}

struct Example1Args {
    std::optional<double> delta;
    std::optional<int> J;
    std::optional<double> tau;
    std::optional<double> T;
    long diag_every = 1;
};

int cmd_example1(const Common& c, const Example1Args& a) {
    const fs::path root = out_path(c, "out/example1");
    std::vector<feos::Example1Preset> runs;
    if (a.delta || a.J || a.tau || a.T) {
        const double delta = a.delta.value_or(1.0);
        runs.push_back({delta, a.J.value_or(128), a.tau.value_or(delta / 10.0), a.T.value_or(100.0)});
    } else {
        runs.assign(feos::kExample1Presets.begin(), feos::kExample1Presets.end());
    }
    for (const auto& r : runs) {
        const auto res = feos::run_example1(r.delta, r.J, r.tau, r.T, a.diag_every);
        const fs::path dir = root / ("delta_" + feos::text::format_real(r.delta));
        feos::ensure_directory(dir);
        feos::write_diagnostics_csv(res.records, dir / "diagnostics.csv");
        feos::write_snapshot(res.final_state, (dir / "final.mbef").string());
        std::cout << "delta = " << feos::text::format_real(r.delta) << "  J = " << r.J
                  << "  final energy = " << feos::text::format_real(res.records.back().energy)
                  << "  max|u_x| = " << feos::text::format_real(res.records.back().max_grad) << '\n';
    }
    return kOk;
}

struct FitArgs {
    std::string input;
    std::string column = "energy";
    double t_min = 20.0;
    double t_max = 400.0;
};

int cmd_fit(const Common& c, const FitArgs& a) {
    const auto records = feos::read_diagnostics_csv(a.input);
    double feos::DiagnosticsRecord::*member = nullptr;
    if (a.column == "energy") member = &feos::DiagnosticsRecord::energy;
    else if (a.column == "roughness") member = &feos::DiagnosticsRecord::roughness;
    else if (a.column == "max_grad") member = &feos::DiagnosticsRecord::max_grad;
    else throw feos::ConfigError("unknown column '" + a.column + "' (energy, roughness or max_grad)");
    const auto fit = feos::fit_power_law(feos::series_of(records, member), a.t_min, a.t_max);
    const std::vector<feos::NamedFit> fits{{a.column, fit}};
    if (!c.out_dir.empty()) {
        feos::ensure_directory(c.out_dir);
        feos::write_table_csv(fits, fs::path(c.out_dir) / "fit.csv");
    }
    std::cout << feos::table_csv(fits);
    return kOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Operator-splitting solver for the MBE equation with slope selection"};
    app.require_subcommand(1);
    app.set_help_all_flag("--help-all");

    Common common;
    app.add_option("--config", common.config_path, "Config file (key = value)");
    app.add_option("--out", common.out_dir, "Output directory");
    app.add_option("--set", common.sets, "Override a config key: key=value (repeatable)")
        ->expected(1)
        ->multi_option_policy(CLI::MultiOptionPolicy::TakeAll);
    app.add_option("--threads", common.threads, "Thread count hint; 1 is bitwise reproducible")->check(CLI::NonNegativeNumber);

    auto* run = app.add_subcommand("run", "Single evolution from a config file")->fallthrough();

    ConvergeArgs ca;
    auto* converge = app.add_subcommand("converge", "Order study on the trigonometric 2D problem")->fallthrough();
    converge->add_option("--levels", ca.levels, "Test grids J (doubling)")->delimiter(',');
    converge->add_option("--ref-J", ca.ref_J, "Reference grid J");
    converge->add_option("--ref-divisor", ca.ref_divisor, "Reference tau = min tau / divisor");
    converge->add_flag("--temporal", ca.temporal, "Temporal study at fixed J");
    converge->add_option("--temporal-J", ca.temporal_J, "Grid for the temporal study");
    converge->add_option("--taus", ca.taus, "Time steps for the temporal study")->delimiter(',');
    converge->add_option("--tau-ref", ca.tau_ref, "Reference time step for the temporal study");

    CoarsenArgs co;
    auto* coarsen = app.add_subcommand("coarsen", "2D coarsening from random data with power-law fits")->fallthrough();
    coarsen->add_option("--fit-min", co.t_min, "Fit window start");
    coarsen->add_option("--fit-max", co.t_max, "Fit window end");
    coarsen->add_option("--samples", co.per_window, "Records inside the fit window");

    Example1Args ea;
    auto* example1 = app.add_subcommand("example1", "1D slope-selection delta sweep")->fallthrough();
    example1->add_option("--delta", ea.delta, "Single run: delta");
    example1->add_option("--J", ea.J, "Single run: grid size");
    example1->add_option("--tau", ea.tau, "Single run: time step (default delta/10)");
    example1->add_option("--T", ea.T, "Single run: final time");
    example1->add_option("--diag-every", ea.diag_every, "Steps between records");

    FitArgs fa;
    auto* fit = app.add_subcommand("fit", "Power-law fit on a diagnostics CSV")->fallthrough();
    fit->add_option("--in", fa.input, "diagnostics.csv")->required();
    fit->add_option("--column", fa.column, "energy, roughness or max_grad");
    fit->add_option("--window", [&fa](const CLI::results_t& r) {
           if (r.size() != 2) return false;
           const auto lo = feos::text::parse_double(r[0]), hi = feos::text::parse_double(r[1]);
           if (!lo || !hi) return false;
           fa.t_min = *lo;
           fa.t_max = *hi;
           return true;
       }, "Fit window t_min t_max")->expected(2);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kOk : kConfig;
    }

    try {
        if (common.threads > 0) feos::set_threads(common.threads);
        if (*run) return cmd_run(common);
        if (*converge) return cmd_converge(common, ca);
        if (*coarsen) return cmd_coarsen(common, co);
        if (*example1) return cmd_example1(common, ea);
        if (*fit) return cmd_fit(common, fa);
    } catch (const feos::IoError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kIo;
    } catch (const feos::BlowUpError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kRuntime;
    } catch (const feos::RunawayError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kRuntime;
    } catch (const feos::Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kConfig;
    }
    return kConfig;
}
