#include <algorithm>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <sys/wait.h>

#include <gtest/gtest.h>
#include <json.hpp>

#include "support.hpp"
#include "wavefio/field_io.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace wavefio;

namespace {

struct RunResult {
    int code = -1;
    std::string out;
    std::string err;
};

std::string slurp(const fs::path& p) {
    std::ifstream is(p, std::ios::binary);
    std::ostringstream ss;
    ss << is.rdbuf();
    return ss.str();
}

class Cli : public ::testing::Test {
protected:
    void SetUp() override {
        dir_ = fs::temp_directory_path() /
               ("wavefio_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
        fs::remove_all(dir_);
        fs::create_directories(dir_);
    }
    void TearDown() override { fs::remove_all(dir_); }

    RunResult run(const std::string& args) const {
        const fs::path err = dir_ / "stderr.txt";
        const std::string cmd = std::string("\"") + WAVEFIO_CLI_PATH + "\" " + args + " 2>\"" + err.string() + "\"";
        RunResult r;
        FILE* pipe = popen(cmd.c_str(), "r");
        if (!pipe) return r;
        char buf[4096];
        std::size_t n;
        while ((n = std::fread(buf, 1, sizeof buf, pipe)) > 0) r.out.append(buf, n);
        const int status = pclose(pipe);
        r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
        r.err = slurp(err);
        return r;
    }

    fs::path write_config(const std::string& text) const {
        const fs::path p = dir_ / "run.toml";
        std::ofstream(p) << text;
        return p;
    }

    fs::path write_input(std::size_t m = 64) const {
        Rng rng(21);
        const fs::path p = dir_ / "input.f2d";
        write_field(wavefio::testing::random_field(m, rng), p);
        return p;
    }

    json last_manifest(const fs::path& out) const {
        std::ifstream is(out / "manifest.jsonl");
        std::string line, last;
        while (std::getline(is, line)) last = line;
        return json::parse(last);
    }

    fs::path dir_;
};

const char* kSmallTiling = "[tiling]\nside = 64\nk_min = 1\nk_max = 3\nwedges = [8, 8, 16]\n";

}  // namespace

TEST_F(Cli, PolyphaseCheckPrintsPass) {
    const RunResult r = run("polyphase-check --K 9 --levels 1 --seed 7 --out \"" + (dir_ / "o").string() + "\"");
    EXPECT_EQ(r.code, 0) << r.err;
    EXPECT_EQ(r.out.rfind("PASS max_err<1e-10", 0), 0u) << r.out;
    const json m = last_manifest(dir_ / "o");
    EXPECT_EQ(m["command"], "polyphase-check");
    EXPECT_EQ(m["seed"], 7);
    EXPECT_LE(m["metrics"]["max_error"].get<double>(), 1e-10);
}

TEST_F(Cli, DecomposeReportsTinyResidual) {
    const fs::path cfg = write_config(kSmallTiling);
    const fs::path in = write_input();
    const fs::path out = dir_ / "o";
    const RunResult r = run("decompose \"" + in.string() + "\" --config \"" + cfg.string() + "\" --out \"" + out.string() + "\"");
    ASSERT_EQ(r.code, 0) << r.err;
    const json rep = json::parse(slurp(out / "decompose_report.json"));
    EXPECT_LE(rep["reconstruction_residual"].get<double>(), 1e-10);
    EXPECT_LE(rep["partition_max_error"].get<double>(), 1e-10);
    EXPECT_EQ(read_field_stack(out / "channels.f2d").size(), rep["boxes"].get<std::size_t>());
    const json m = last_manifest(out);
    EXPECT_EQ(m["command"], "decompose");
    EXPECT_EQ(m["config_hash"].get<std::string>().size(), 16u);
    EXPECT_FALSE(m["outputs"].empty());
}

TEST_F(Cli, RtcAtZeroTimeReturnsTheInBandInput) {
    const fs::path cfg = write_config(std::string(kSmallTiling) + "[wavespeed]\nkind = \"constant\"\n[sim]\nT = 0\n");
    const fs::path in = write_input();
    const fs::path out = dir_ / "o";
    const RunResult r = run("rtc \"" + in.string() + "\" --config \"" + cfg.string() + "\" --out \"" + out.string() + "\"");
    ASSERT_EQ(r.code, 0) << r.err;
    const json rep = json::parse(slurp(out / "rtc_report.json"));
    EXPECT_LE(rep["relative_error_vs_oracle"].get<double>(), 1e-12);
    EXPECT_LE(rep["relative_error_vs_initial_in_band"].get<double>(), 1e-12);
}

TEST_F(Cli, RaytraceHonoursSampleCountAndIsDeterministic) {
    const fs::path cfg = write_config("[sim]\nT = 0.1\nray_steps = 32\n");
    const std::string common = " --samples 40 --seed 5 --config \"" + cfg.string() + "\"";
    ASSERT_EQ(run("raytrace --out \"" + (dir_ / "a").string() + "\"" + common).code, 0);
    ASSERT_EQ(run("raytrace --out \"" + (dir_ / "b").string() + "\"" + common).code, 0);
    const std::string rays = slurp(dir_ / "a" / "rays.csv");
    EXPECT_EQ(rays, slurp(dir_ / "b" / "rays.csv"));
    EXPECT_EQ(slurp(dir_ / "a" / "manifest.jsonl"), slurp(dir_ / "b" / "manifest.jsonl"));
    EXPECT_EQ(std::count(rays.begin(), rays.end(), '\n'), 41);
    ASSERT_EQ(run("raytrace --out \"" + (dir_ / "c").string() + "\" --samples 40 --seed 6 --config \"" +
                  cfg.string() + "\"").code,
              0);
    EXPECT_NE(rays, slurp(dir_ / "c" / "rays.csv"));
}

TEST_F(Cli, UnknownConfigKeyFailsWithJsonError) {
    const fs::path cfg = write_config("[sim]\nbogus = 1\n");
    const RunResult r = run("raytrace --config \"" + cfg.string() + "\" --out \"" + (dir_ / "o").string() + "\"");
    EXPECT_NE(r.code, 0);
    const json err = json::parse(r.err.substr(r.err.find('{')));
    EXPECT_EQ(err["error"], "invalid_argument");
    EXPECT_EQ(err["command"], "raytrace");
    EXPECT_NE(err["message"].get<std::string>().find("bogus"), std::string::npos);
}

TEST_F(Cli, MissingInputFailsWithJsonError) {
    const RunResult r = run("metric-sweep \"" + (dir_ / "nope.f2d").string() + "\" --out \"" + (dir_ / "o").string() + "\"");
    EXPECT_NE(r.code, 0);
    const json err = json::parse(r.err.substr(r.err.find('{')));
    EXPECT_EQ(err["command"], "metric-sweep");
}

TEST_F(Cli, UsageErrorsAreRejected) {
    EXPECT_NE(run("").code, 0);
    EXPECT_NE(run("no-such-command").code, 0);
    EXPECT_NE(run("polyphase-check --K 4").code, 0);
}
