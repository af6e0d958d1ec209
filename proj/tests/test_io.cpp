#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "semilin/errors.hpp"
#include "semilin/io.hpp"

using namespace semilin;

namespace {

std::string minimal_config = R"({
  "mode": "simulate",
  "model": {
    "a": 0.5,
    "f": {"kind": "linear", "scale": 1.0},
    "noise": {"kind": "iid-bounded", "varsigma2": 1.0}
  },
  "experiment": {"n": 100},
  "seed": 1
})";

std::string slurp(const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    REQUIRE(in);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

struct TempDir {
    std::filesystem::path path;
    TempDir() {
        path = std::filesystem::temp_directory_path() /
               ("semilin_test_" + std::to_string(std::rand()));
        std::filesystem::create_directories(path);
    }
    ~TempDir() { std::filesystem::remove_all(path); }
};

}  // namespace

TEST_CASE("minimal config parses with echoed defaults") {
    RunConfig cfg = parse_config(minimal_config);
    CHECK(cfg.mode == RunMode::Simulate);
    CHECK(cfg.model.a == 0.5);
    CHECK(cfg.n == 100);
    CHECK(cfg.seed == 1);
    CHECK(cfg.reps == 1000);          // default applied
    CHECK(cfg.output_dir == "out");   // default applied
    std::string normalized = serialize_config(cfg);
    CHECK(normalized.find("\"reps\": 1000") != std::string::npos);
}

TEST_CASE("contraction violation is named in the error") {
    std::string bad = R"({"mode": "simulate", "model": {"a": 2.0}})";
    try {
        parse_config(bad);
        FAIL("expected validation_error");
    } catch (const validation_error& e) {
        CHECK(std::string(e.what()).find("|a|*C < 1") != std::string::npos);
    }
}

TEST_CASE("unknown keys are rejected with their path") {
    std::string bad = R"({"mode": "simulate", "model": {"a": 0.5, "alpha": 3}})";
    try {
        parse_config(bad);
        FAIL("expected validation_error");
    } catch (const validation_error& e) {
        CHECK(std::string(e.what()).find("$/model/alpha") != std::string::npos);
    }
}

TEST_CASE("syntax errors carry a line number") {
    std::string bad = "{\n  \"mode\": \"simulate\",\n  oops\n}";
    try {
        parse_config(bad);
        FAIL("expected validation_error");
    } catch (const validation_error& e) {
        CHECK(std::string(e.what()).find("line 3") != std::string::npos);
    }
}

TEST_CASE("parse-serialize-parse is the identity") {
    RunConfig cfg = parse_config(minimal_config);
    std::string once = serialize_config(cfg);
    RunConfig cfg2 = parse_config(once);
    CHECK(serialize_config(cfg2) == once);
    CHECK(config_hash(cfg) == config_hash(cfg2));
}

TEST_CASE("config hash changes when any field changes") {
    RunConfig cfg = parse_config(minimal_config);
    RunConfig other = cfg;
    other.seed = 2;
    CHECK(config_hash(cfg) != config_hash(other));
    other = cfg;
    other.model.a = 0.4999;
    CHECK(config_hash(cfg) != config_hash(other));
    other = cfg;
    CHECK(config_hash(cfg) == config_hash(other));
}

TEST_CASE("custom scheme and heteroscedastic noise round-trip") {
    std::string text = R"({
      "mode": "compare",
      "model": {
        "a": 0.4,
        "f": {"kind": "scaled-tanh", "scale": 0.35},
        "noise": {"kind": "heteroscedastic", "gamma": {"kind": "two-point"},
                  "b": {"kind": "scaled-tanh", "scale": 0.6}, "b0": 1.0}
      },
      "experiment": {
        "n": 500, "reps": 10,
        "schemes": ["lse", "optimal",
                    {"kind": "custom", "h": {"kind": "linear", "scale": 0.7}, "label": "lin07"}]
      }
    })";
    RunConfig cfg = parse_config(text);
    REQUIRE(cfg.schemes.size() == 3);
    CHECK(cfg.schemes[2].name() == "lin07");
    std::string once = serialize_config(cfg);
    CHECK(serialize_config(parse_config(once)) == once);
}

TEST_CASE("series ingestion: noiseless file estimates 0.5") {
    std::string series =
        "# semilin series v1\n"
        "k,xi,sigma2\n"
        "0,1,1\n"
        "1,0.5,1\n"
        "2,0.25,1\n"
        "3,0.125,1\n";
    IngestedSeries s = ingest_series(series);
    REQUIRE(s.path.n() == 3);
    CHECK(s.has_sigma2);
    ModelSpec m;
    m.a = 0.5;
    auto mu = weights_for(WeightScheme::lse(), m, s.path);
    CHECK(estimate_discrete(s.path, m.f, mu).a_hat == doctest::Approx(0.5));
}

TEST_CASE("series ingestion rejects gaps naming the line") {
    std::string series = "k,xi\n0,1\n1,0.5\n3,0.25\n";
    try {
        ingest_series(series);
        FAIL("expected validation_error");
    } catch (const validation_error& e) {
        std::string msg = e.what();
        CHECK(msg.find("line 4") != std::string::npos);
        CHECK(msg.find("k = 2") != std::string::npos);
    }
}

TEST_CASE("series ingestion rejects bad cells and bad variance") {
    CHECK_THROWS_AS(ingest_series("k,xi\n0,abc\n1,2\n"), validation_error);
    CHECK_THROWS_AS(ingest_series("k,xi,sigma2\n0,1,1\n1,2,0\n"), validation_error);
    CHECK_THROWS_AS(ingest_series("t,y\n0,1\n"), validation_error);
    CHECK_THROWS_AS(ingest_series(""), validation_error);
}

TEST_CASE("variance_fn metadata is surfaced when sigma2 is absent") {
    std::string series = "# variance_fn: constant-1\nk,xi\n0,1\n1,0.5\n";
    IngestedSeries s = ingest_series(series);
    CHECK_FALSE(s.has_sigma2);
    CHECK(s.variance_fn == "constant-1");
    CHECK(s.path.sigma2.empty());
}

TEST_CASE("written series round-trips to identical estimates") {
    ModelSpec m;
    m.a = 0.5;
    m.noise.varsigma2 = 1.0;
    auto path = simulate_discrete(m, 200, 14);
    TempDir dir;
    write_series(dir.path.string(), path);
    IngestedSeries back = ingest_series_file((dir.path / "series.csv").string());
    REQUIRE(back.path.n() == 200);
    auto mu1 = weights_for(WeightScheme::optimal(), m, path);
    auto mu2 = weights_for(WeightScheme::optimal(), m, back.path);
    auto r1 = estimate_discrete(path, m.f, mu1);
    auto r2 = estimate_discrete(back.path, m.f, mu2);
    CHECK(r1.a_hat == r2.a_hat);
    CHECK(r1.V_n == r2.V_n);
}

TEST_CASE("mc summary writer emits one deviation row per scheme and time") {
    McSummary summary;
    summary.time_grid = {0.25, 0.5, 1.0};
    for (const char* name : {"lse", "optimal"}) {
        SchemeSummary ss;
        ss.scheme = name;
        ss.by_time.resize(3);
        summary.schemes.push_back(ss);
    }
    TempDir dir;
    write_mc_summary(dir.path.string(), summary);
    std::string text = slurp(dir.path / "deviations.csv");
    long rows = std::count(text.begin(), text.end(), '\n') - 1;  // minus header
    CHECK(rows == 6);
}

TEST_CASE("write_results is deterministic byte for byte") {
    RunConfig cfg = parse_config(minimal_config);
    McSummary summary;
    summary.time_grid = {1.0};
    SchemeSummary ss;
    ss.scheme = "lse";
    ss.by_time.resize(1);
    ss.by_time[0].mean = 0.123456789012345678;
    ss.by_time[0].variance = 0.75;
    summary.schemes.push_back(ss);
    TempDir d1, d2;
    write_mc_summary(d1.path.string(), summary);
    write_manifest(d1.path.string(), cfg, {"deviations.csv"});
    write_mc_summary(d2.path.string(), summary);
    write_manifest(d2.path.string(), cfg, {"deviations.csv"});
    for (const char* f : {"deviations.csv", "schemes.csv", "long.csv", "manifest.json",
                          "config.json"})
        CHECK(slurp(d1.path / f) == slurp(d2.path / f));
}

TEST_CASE("17-digit floats survive the text round trip") {
    ModelSpec m;
    m.a = 0.4;
    m.f = FunctionSpec::scaled_tanh(0.9);
    auto path = simulate_discrete(m, 50, 99);
    TempDir dir;
    write_series(dir.path.string(), path);
    IngestedSeries back = ingest_series_file((dir.path / "series.csv").string());
    for (std::size_t i = 0; i < path.xi.size(); ++i) CHECK(back.path.xi[i] == path.xi[i]);
}
