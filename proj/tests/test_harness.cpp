#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>

#include "lcl/scenarios.hpp"
#include "lcl/sha256.hpp"

using namespace lcl;
namespace fs = std::filesystem;

namespace {

struct TempDir {
    fs::path path;
    explicit TempDir(const std::string& name) {
        path = fs::temp_directory_path() / name;
        fs::remove_all(path);
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
};

const char* kSimulateCfg =
    "scenario = simulate\n"
    "grid.N = 16\n"
    "grid.nu = 0.8\n"
    "grid.dt = 0.002\n"
    "noise.preset = haar-geometric(2)\n"
    "simulate.n = 2\n"
    "seed = 5\n";

}  // namespace

TEST_CASE("sha256 known vectors") {
    CHECK(Sha256::of_string("abc") ==
          "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
    CHECK(Sha256::of_string("") ==
          "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855");
}

TEST_CASE("config parsing") {
    Config cfg = Config::parse_text(
        "# comment\n"
        "grid.N = 32\n"
        "noise.preset = haar-geometric(2)  # trailing\n"
        "flag = true\n",
        "test");
    CHECK(cfg.get_int("grid.N") == 32);
    CHECK(cfg.get_string("noise.preset") == "haar-geometric(2)");
    CHECK(cfg.get_bool("flag", false));
    CHECK(cfg.get_double("absent", 1.5) == 1.5);

    SUBCASE("missing key names the key") {
        try {
            cfg.get_string("grid.nu");
            FAIL("expected ConfigError");
        } catch (const ConfigError& e) {
            CHECK(std::string(e.what()).find("grid.nu") != std::string::npos);
        }
    }
    SUBCASE("type errors name the key") {
        Config bad = Config::parse_text("grid.N = soup\n", "test");
        try {
            bad.get_int("grid.N");
            FAIL("expected ConfigError");
        } catch (const ConfigError& e) {
            CHECK(std::string(e.what()).find("grid.N") != std::string::npos);
        }
    }
    SUBCASE("malformed lines are rejected") {
        CHECK_THROWS_AS(Config::parse_text("just words\n", "test"), ConfigError);
        CHECK_THROWS_AS(Config::parse_text("a = 1\na = 2\n", "test"), ConfigError);
    }
    SUBCASE("fingerprint is stable under reordering") {
        Config a = Config::parse_text("x = 1\ny = 2\n", "t");
        Config b = Config::parse_text("y = 2\nx = 1\n", "t");
        CHECK(a.fingerprint() == b.fingerprint());
    }
}

TEST_CASE("dt stability ceiling is enforced") {
    Config cfg = Config::parse_text(
        "grid.N = 64\n"
        "grid.nu = 0.05\n"
        "grid.dt = 0.02\n"  // far beyond the documented ceiling
        "noise.preset = haar-geometric(2)\n",
        "test");
    CHECK_THROWS_AS(cfg.validate_scenario("simulate"), ConfigError);
}

TEST_CASE("scenario validation cross-checks the scenario key") {
    Config cfg = Config::parse_text(kSimulateCfg, "test");
    CHECK_THROWS_AS(cfg.validate_scenario("lyapunov"), ConfigError);
}

TEST_CASE("simulate scenario writes its artifacts and a manifest") {
    TempDir dir("lcl_harness_sim");
    Config cfg = Config::parse_text(kSimulateCfg, "test");
    Manifest m = run_with_manifest("simulate", cfg, dir.path.string(), 5);
    CHECK(m.outputs.size() == 4);
    for (const auto& e : m.outputs) {
        CHECK(fs::exists(dir.path / e.path));
        CHECK(Sha256::of_file((dir.path / e.path).string()) == e.sha256);
    }
    Manifest back = Manifest::read((dir.path / "manifest.json").string());
    CHECK(back.scenario == "simulate");
    CHECK(back.seed == 5);
    CHECK(back.config_sha256 == cfg.fingerprint());
}

TEST_CASE("replay is byte-identical, detects tampering, flags seed changes") {
    TempDir dir("lcl_harness_replay");
    Config cfg = Config::parse_text(kSimulateCfg, "test");
    run_with_manifest("simulate", cfg, dir.path.string(), 5);
    std::string manifest = (dir.path / "manifest.json").string();

    SUBCASE("clean replay") {
        ReplayReport rep = replay_manifest(manifest);
        CHECK(rep.status == ReplayReport::Status::Identical);
        CHECK(rep.differing.empty());
    }

    SUBCASE("tampered artifact is named") {
        {
            std::ofstream os(dir.path / "summary.json", std::ios::app);
            os << "\n";
        }
        ReplayReport rep = replay_manifest(manifest);
        CHECK(rep.status == ReplayReport::Status::Diff);
        bool named = false;
        for (const auto& d : rep.differing)
            named |= d.path == "summary.json" && d.reason == "original-modified";
        CHECK(named);
    }

    SUBCASE("seed override reports expected differences") {
        ReplayReport rep = replay_manifest(manifest, "", 6);
        CHECK(rep.status == ReplayReport::Status::DiffExpected);
        CHECK(!rep.differing.empty());
    }
}

TEST_CASE("saturate scenario emits the ladder report") {
    TempDir dir("lcl_harness_sat");
    Config cfg = Config::parse_text(
        "scenario = saturate\nsaturate.R = 2\nsaturate.depth = 6\nseed = 1\n",
        "test");
    Manifest m = run_with_manifest("saturate", cfg, dir.path.string(), 1);
    CHECK(m.outputs.size() == 1);
    CHECK(fs::exists(dir.path / "ladder.json"));
}

TEST_CASE("lyapunov scenario with the synthetic diagonal oracle") {
    TempDir dir("lcl_harness_lyap");
    Config cfg = Config::parse_text(
        "scenario = lyapunov\n"
        "grid.N = 16\n"
        "grid.nu = 1\n"
        "grid.dt = 0.002\n"
        "noise.preset = haar-geometric(2)\n"
        "lyapunov.n = 200\n"
        "lyapunov.block = 20\n"
        "lyapunov.synthetic = diag(2,0.5)\n"
        "seed = 3\n",
        "test");
    run_with_manifest("lyapunov", cfg, dir.path.string(), 3);
    std::ifstream is(dir.path / "summary.json");
    std::string text((std::istreambuf_iterator<char>(is)),
                     std::istreambuf_iterator<char>());
    CHECK(text.find("\"lambda_plus\"") != std::string::npos);
    // log 2 = 0.6931471805599453 to machine precision
    CHECK(text.find("0.69314718055994") != std::string::npos);
}

TEST_CASE("unknown scenario is rejected") {
    Config cfg = Config::parse_text("seed = 1\n", "test");
    CHECK_THROWS_AS(run_scenario("dance", cfg, "/tmp/lcl_nope", 1), ConfigError);
}
