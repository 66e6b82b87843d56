#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <string>

#include <json.hpp>

#include "resona1d/cli.hpp"
#include "resona1d/errors.hpp"

using namespace resona1d;
namespace fs = std::filesystem;

namespace {

const fs::path kPresets = RESONA1D_PRESET_DIR;

const char* kMinimal = R"({
  "chain": {"lengths": [1, 1], "gaps": [1, 2]},
  "material": {"delta": 1e-4},
  "modulation": {"Omega": 0.03}
})";

std::string error_of(const std::string& text) {
    try {
        (void)parse_config_text(text);
    } catch (const ConfigError& e) {
        return e.what();
    }
    return {};
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

fs::path scratch(const std::string& name) {
    const auto dir = fs::temp_directory_path() / ("resona1d-test-" + name);
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

int run(const std::string& cmd, const RunConfig& cfg, const fs::path& out, std::optional<Method> m = {}) {
    CommandOptions opt;
    opt.out_dir = out;
    opt.method = m;
    std::ostringstream log, err;
    return run_command(cmd, cfg, opt, log, err);
}

// (alpha index, band) -> omega from a band CSV.
std::map<std::pair<std::string, int>, std::complex<double>> read_csv(const fs::path& p) {
    std::ifstream in(p);
    std::string line;
    std::getline(in, line);
    CHECK(line == "alpha,band,re_omega,im_omega,method");
    std::map<std::pair<std::string, int>, std::complex<double>> rows;
    while (std::getline(in, line)) {
        std::stringstream ss(line);
        std::string alpha, band, re, im;
        std::getline(ss, alpha, ',');
        std::getline(ss, band, ',');
        std::getline(ss, re, ',');
        std::getline(ss, im, ',');
        rows[{alpha, std::stoi(band)}] = {std::stod(re), std::stod(im)};
    }
    return rows;
}

}  // namespace

TEST_CASE("defaults are filled in") {
    const auto cfg = parse_config_text(kMinimal);
    CHECK(cfg.v0 == 1.0);
    CHECK(cfg.vr == 1.0);
    CHECK(cfg.truncation_K == 3);
    CHECK(cfg.alpha_grid == 101);
    CHECK(cfg.method == Method::floquet);
    CHECK(cfg.tolerances.muller == 1e-12);
    CHECK(cfg.tolerances.im == 1e-9);
    CHECK(cfg.eps_kappa == std::vector<double>{0.0, 0.0});
    CHECK(cfg.system().modulation.is_static());
}

TEST_CASE("preset values") {
    const auto cfg = parse_config(kPresets / "kappa-uneven.json");
    CHECK(cfg.Omega == 0.03);
    CHECK(cfg.delta == 1e-4);
    CHECK(cfg.gaps == std::vector<double>{1, 1, 2});
    CHECK(cfg.eps_kappa == std::vector<double>{0.2, 0.2, 0.2});
    CHECK(cfg.eps_rho == std::vector<double>{0, 0, 0});
    CHECK(cfg.phi_kappa[1] == doctest::Approx(std::acos(-1.0) / 2));
    for (const auto& entry : fs::directory_iterator(kPresets)) CHECK_NOTHROW((void)parse_config(entry.path()));
}

TEST_CASE("errors name the offending field") {
    CHECK(error_of(R"({"chain": {"lengths": [1]}, "material": {"delta": 1e-4}, "modulation": {"Omega": 0.03}})")
              .find("chain.gaps") != std::string::npos);
    CHECK(error_of(R"({"chain": {"lengths": [1], "gaps": [1, 2]}, "material": {"delta": 1e-4},
                       "modulation": {"Omega": 0.03}})")
              .find("chain.gaps") != std::string::npos);
    CHECK(error_of(R"({"chain": {"lengths": [1], "gaps": [1]}, "material": {"delta": -1},
                       "modulation": {"Omega": 0.03}})")
              .find("material.delta") != std::string::npos);
    CHECK(error_of(R"({"chain": {"lengths": [1], "gaps": [1]}, "material": {"delta": 1e-4},
                       "modulation": {"Omega": 0.03, "eps_kappa": [1.5]}})")
              .find("modulation.eps_kappa") != std::string::npos);
    CHECK(error_of(R"({"chain": {"lengths": [1], "gaps": [1]}, "material": {"delta": 1e-4},
                       "modulation": {"Omega": 0.03}, "colour": 1})")
              .find("colour") != std::string::npos);
    CHECK(error_of(R"({"chain": {"lengths": [1], "gaps": [1]}, "material": {"delta": 1e-4},
                       "modulation": {"Omega": 0.03}, "alpha_grid": 100})")
              .find("alpha_grid") != std::string::npos);
    CHECK(error_of(R"({"chain": {"lengths": [1], "gaps": [1]}, "material": {"delta": 1e-4},
                       "modulation": {"Omega": 0.03}, "method": "fem"})")
              .find("method") != std::string::npos);
    CHECK_FALSE(error_of("{ not json").empty());
    CHECK_THROWS_AS((void)parse_config(kPresets / "does-not-exist.json"), ConfigError);
}

TEST_CASE("config hash is stable and sensitive") {
    const auto a = parse_config_text(kMinimal);
    const auto b = parse_config_text(canonical_json(a));
    CHECK(config_hash(a) == config_hash(b));
    CHECK(config_hash(a).size() == 16);
    auto c = a;
    c.Omega = 0.031;
    CHECK(config_hash(a) != config_hash(c));
    // Descriptive fields do not change the hash.
    std::string named = kMinimal;
    named.insert(1, R"("name": "x", "description": "y",)");
    CHECK(config_hash(parse_config_text(named)) == config_hash(a));
}

TEST_CASE("overrides") {
    auto cfg = parse_config_text(kMinimal);
    CommandOptions opt;
    opt.grid = 11;
    opt.K = 2;
    opt.method = Method::exact;
    const auto o = apply_overrides(cfg, opt);
    CHECK(o.alpha_grid == 11);
    CHECK(o.truncation_K == 2);
    CHECK(o.method == Method::exact);
    opt.grid = 10;
    CHECK_THROWS_AS((void)apply_overrides(cfg, opt), ConfigError);
}

TEST_CASE("Floquet bands of a static preset equal the static bands") {
    auto cfg = parse_config(kPresets / "static-uneven.json");
    cfg.alpha_grid = 21;
    const auto out = scratch("static");
    REQUIRE(run("static-bands", cfg, out) == kExitOk);
    REQUIRE(run("bands", cfg, out, Method::floquet) == kExitOk);
    const auto s = read_csv(out / "static-bands.csv");
    const auto f = read_csv(out / "bands.csv");
    REQUIRE(s.size() == 21 * 6);
    REQUIRE(f.size() == s.size());
    for (const auto& [key, w] : f) {
        double best = 1e300;
        for (int b = 0; b < 6; ++b) best = std::min(best, std::abs(w - s.at({key.first, b})));
        CHECK(best <= 1e-8);
    }
}

TEST_CASE("outputs are byte-identical across runs") {
    auto cfg = parse_config(kPresets / "kappa-equidistant.json");
    cfg.alpha_grid = 11;
    const auto a = scratch("det-a");
    const auto b = scratch("det-b");
    REQUIRE(run("bands", cfg, a) == kExitOk);
    REQUIRE(run("bands", cfg, b) == kExitOk);
    CHECK(slurp(a / "bands.csv") == slurp(b / "bands.csv"));
    REQUIRE(run("gaps", cfg, a) == kExitOk);
    REQUIRE(run("gaps", cfg, b) == kExitOk);
    CHECK(slurp(a / "gaps.json") == slurp(b / "gaps.json"));
}

TEST_CASE("reports carry the config hash") {
    auto cfg = parse_config(kPresets / "modulated-single.json");
    cfg.alpha_grid = 3;
    const auto out = scratch("compare");
    REQUIRE(run("compare", cfg, out) == kExitOk);
    const auto j = nlohmann::json::parse(slurp(out / "compare.json"));
    CHECK(j.at("config_hash") == config_hash(cfg));
    CHECK(j.at("err_abs").get<double>() < 1e-4);

    auto g = parse_config(kPresets / "static-equidistant.json");
    g.alpha_grid = 11;
    REQUIRE(run("gaps", g, out) == kExitOk);
    const auto gaps = nlohmann::json::parse(slurp(out / "gaps.json"));
    CHECK(gaps.at("config_hash") == config_hash(g));
    CHECK(gaps.at("k_gaps").empty());
}

TEST_CASE("perturbation report on a single crossing") {
    auto cfg = parse_config(kPresets / "single-crossing.json");
    const auto out = scratch("perturbation");
    REQUIRE(run("perturbation", cfg, out) == kExitOk);
    const auto j = nlohmann::json::parse(slurp(out / "perturbation.json"));
    REQUIRE_FALSE(j.at("gaps").empty());
    for (const auto& g : j.at("gaps")) {
        const double est = g.at("gap_estimate").get<double>();
        const double meas = g.at("measured_splitting").get<double>();
        CHECK(est == doctest::Approx(0.05 * 0.03 / 4).epsilon(1e-6));
        CHECK(std::abs(est - meas) <= 0.3 * meas);
    }
}

TEST_CASE("exit codes") {
    const auto out = scratch("exit");
    CHECK(run("nonsense", parse_config_text(kMinimal), out) == kExitConfig);
    // Perturbation theory needs a common amplitude.
    CHECK(run("perturbation", parse_config(kPresets / "kappa-equidistant.json"), out) == kExitSolver);
}
