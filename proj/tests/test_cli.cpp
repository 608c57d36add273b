#include <gtest/gtest.h>

#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>
#include <sys/wait.h>

#include "feos/output.hpp"
#include "feos/run.hpp"
#include "support.hpp"

namespace fs = std::filesystem;

namespace {

int run_cli(const std::string& args) {
    const std::string cmd = std::string(FEOS_CLI_PATH) + " " + args + " > /dev/null 2>&1";
    const int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

fs::path write_config(const fs::path& dir, const std::string& body) {
    const auto path = dir / "run.cfg";
    std::ofstream(path) << body;
    return path;
}

constexpr const char* kSmall = "dims = 2\nJ = 16\nL = pi\ndelta = 0.1\nT = 0.05\nic = ts32-trig\ndiag_every = 1\n";

}  // namespace

TEST(Cli, RunWritesOutputsAndEcho) {
    const auto dir = feos::test::scratch_dir("cli_run");
    const auto cfg = write_config(dir, std::string(kSmall) + "snapshot_times = 0.02\n");
    ASSERT_EQ(run_cli("run --config " + cfg.string() + " --out " + (dir / "out").string()), 0);
    EXPECT_TRUE(fs::exists(dir / "out" / "diagnostics.csv"));
    EXPECT_TRUE(fs::exists(dir / "out" / "final.mbef"));
    EXPECT_TRUE(fs::exists(dir / "out" / feos::snapshot_name(0.02)));
    const auto recs = feos::read_diagnostics_csv(dir / "out" / "diagnostics.csv");
    EXPECT_EQ(recs.size(), 6u);

    // Re-running from the echo reproduces the outputs byte for byte.
    ASSERT_EQ(run_cli("run --config " + (dir / "out" / "config.resolved").string() + " --out " +
                      (dir / "again").string()),
              0);
    EXPECT_EQ(slurp(dir / "out" / "diagnostics.csv"), slurp(dir / "again" / "diagnostics.csv"));
    EXPECT_EQ(slurp(dir / "out" / "final.mbef"), slurp(dir / "again" / "final.mbef"));
}

TEST(Cli, SetOverridesConfig) {
    const auto dir = feos::test::scratch_dir("cli_set");
    const auto cfg = write_config(dir, kSmall);
    ASSERT_EQ(run_cli("run --config " + cfg.string() + " --set T=0.02 --set diag_every=0 --out " +
                      (dir / "o").string()),
              0);
    const auto recs = feos::read_diagnostics_csv(dir / "o" / "diagnostics.csv");
    ASSERT_EQ(recs.size(), 2u);
    EXPECT_EQ(recs.back().t, 0.02);
    EXPECT_NE(slurp(dir / "o" / "config.resolved").find("T = 0.02\n"), std::string::npos);
}

TEST(Cli, ExitCodes) {
    const auto dir = feos::test::scratch_dir("cli_codes");
    const auto cfg = write_config(dir, kSmall);
    EXPECT_EQ(run_cli("run --config " + cfg.string() + " --set colour=red --out " + (dir / "o").string()), 2);
    EXPECT_EQ(run_cli("run --config " + cfg.string() + " --set ic=uniform-random --out " + (dir / "o").string()), 2);
    EXPECT_EQ(run_cli("frobnicate"), 2);
    EXPECT_EQ(run_cli("run --config " + (dir / "missing.cfg").string()), 4);
    EXPECT_EQ(run_cli("run --config " + cfg.string() + " --out /proc/feos_forbidden"), 4);
    // The linear factor exp(tau / (8 delta)) overflows for these settings.
    EXPECT_EQ(run_cli("run --config " + cfg.string() + " --set delta=0.001 --set tau=50 --set T=100 --out " +
                      (dir / "b").string()),
              3);
    EXPECT_EQ(run_cli("fit --in " + (dir / "missing.csv").string()), 4);
}

TEST(Cli, FitOnWrittenCsv) {
    const auto dir = feos::test::scratch_dir("cli_fit");
    std::vector<feos::DiagnosticsRecord> recs;
    for (int i = 0; i < 30; ++i) {
        const double t = std::pow(10.0, 1.0 + i / 15.0);
        recs.push_back({t, 2.0 * std::pow(t, -1.0 / 3.0), 0.1 * std::cbrt(t), 0.0, 1.0});
    }
    feos::write_diagnostics_csv(recs, dir / "d.csv");
    ASSERT_EQ(run_cli("fit --in " + (dir / "d.csv").string() + " --column roughness --window 5 2000 --out " +
                      (dir / "f").string()),
              0);
    const auto text = slurp(dir / "f" / "fit.csv");
    EXPECT_NE(text.find("roughness,0.33333333333333"), std::string::npos) << text;
    EXPECT_EQ(run_cli("fit --in " + (dir / "d.csv").string() + " --window 5 6"), 2);
}

TEST(Cli, ThreadsOneIsDeterministic) {
    const auto dir = feos::test::scratch_dir("cli_det");
    const auto cfg = write_config(dir, "dims = 2\nJ = 32\nL = 10\ndelta = 0.1\ntau = 0.05\nT = 2\n"
                                       "ic = uniform-random\nseed = 5\ndiag_every = 4\n");
    ASSERT_EQ(run_cli("--threads 1 run --config " + cfg.string() + " --out " + (dir / "a").string()), 0);
    ASSERT_EQ(run_cli("run --threads 1 --config " + cfg.string() + " --out " + (dir / "b").string()), 0);
    EXPECT_EQ(slurp(dir / "a" / "diagnostics.csv"), slurp(dir / "b" / "diagnostics.csv"));
}
