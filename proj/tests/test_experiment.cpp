#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "rwc/experiment.hpp"

#include <fstream>
#include <string>

using namespace rwc;

TEST_CASE("parse_config reads every field") {
  std::string text = R"({
    "experiment": "clt",
    "cone": "halfline",
    "steps": "data/lazy_1d.steps",
    "start": [1],
    "n": 500,
    "samples": 1000,
    "seed": 42,
    "workers": 4,
    "radius": 120.5,
    "radial_cells": 10,
    "angular_cells": 2,
    "tolerances": {"chi2_p_min": 0.02},
    "out": "/tmp/report.json"
  })";
  ExperimentConfig c = parse_config(text);
  CHECK(c.kind == ExperimentKind::clt);
  CHECK(c.cone_spec == "halfline");
  CHECK(c.steps_path == "data/lazy_1d.steps");
  REQUIRE(c.start.has_value());
  CHECK((*c.start)(0) == 1);
  CHECK(*c.n == 500);
  CHECK(*c.samples == 1000);
  CHECK(*c.seed == 42);
  CHECK(c.workers == 4);
  CHECK(*c.radius == doctest::Approx(120.5));
  CHECK(c.radial_cells == 10);
  CHECK(c.angular_cells == 2);
  CHECK(c.tolerances.at("chi2_p_min") == doctest::Approx(0.02));
  CHECK(c.out_path == "/tmp/report.json");
}

TEST_CASE("unknown keys are rejected") {
  CHECK_THROWS_AS(parse_config(R"({"experiment":"bm","cone":"halfline","bogus":1})"),
                  ConfigInvalid);
}

TEST_CASE("seed is mandatory for stochastic experiments") {
  CHECK_THROWS_AS(
      parse_config(R"({"experiment":"clt","cone":"halfline","steps":"s","start":[1]})"),
      ConfigInvalid);
  CHECK_THROWS_AS(
      parse_config(R"({"experiment":"bridge","cone":"halfline","steps":"s","start":[1]})"),
      ConfigInvalid);
  CHECK_THROWS_AS(
      parse_config(R"({"experiment":"fn-check","cone":"halfline","steps":"s"})"),
      ConfigInvalid);
  CHECK_THROWS_AS(
      parse_config(R"({"experiment":"harmonic","cone":"halfline","steps":"s","start":[1]})"),
      ConfigInvalid);
  // deterministic kinds do not need a seed
  CHECK_NOTHROW(parse_config(R"({"experiment":"bm","cone":"halfline","start":[1]})"));
}

TEST_CASE("malformed documents") {
  CHECK_THROWS_AS(parse_config("not json"), ConfigInvalid);
  CHECK_THROWS_AS(parse_config("[1,2]"), ConfigInvalid);
  CHECK_THROWS_AS(parse_config(R"({"cone":"halfline"})"), ConfigInvalid);
  CHECK_THROWS_AS(parse_config(R"({"experiment":"warp","cone":"halfline"})"), ConfigInvalid);
  CHECK_THROWS_AS(parse_config(R"({"experiment":"bm"})"), ConfigInvalid);
  CHECK_THROWS_AS(parse_config(R"({"experiment":"bm","cone":"halfline","start":[1.5]})"),
                  ConfigInvalid);
}

TEST_CASE("missing step file raises ConfigInvalid at run time") {
  ExperimentConfig c = parse_config(
      R"({"experiment":"tail","cone":"halfline","steps":"data/does_not_exist.steps","start":[1]})");
  CHECK_THROWS_AS(run(c), ConfigInvalid);
}

TEST_CASE("bm experiment runs and passes") {
  ExperimentConfig c = load_config("configs/bm_halfline.json");
  ExperimentReport r = run(c);
  CHECK(r.kind == "bm");
  CHECK(r.all_pass());
  bool found = false;
  for (const auto& m : r.metrics)
    if (m.name == "survival_vs_reflection") {
      found = true;
      CHECK(m.estimate == doctest::Approx(0.6826894921370859).epsilon(1e-9));
    }
  CHECK(found);
}

TEST_CASE("emit json and csv shapes") {
  ExperimentConfig c = load_config("configs/bm_quadrant.json");
  ExperimentReport r = run(c);
  std::string js = emit(r, "json");
  CHECK(js.find("\"kind\":\"bm\"") != std::string::npos);
  CHECK(js.find("wall_clock_sec") != std::string::npos);
  CHECK(js.find("survival_vs_reflection") != std::string::npos);
  std::string cs = emit(r, "csv");
  CHECK(cs.rfind("name,estimate,target,tolerance,pass", 0) == 0);
  CHECK(cs.find("survival_vs_reflection") != std::string::npos);
  CHECK_THROWS_AS(emit(r, "xml"), ConfigInvalid);
}

TEST_CASE("payload excludes the wall clock and has full precision") {
  ExperimentConfig c = load_config("configs/bm_halfline.json");
  ExperimentReport r = run(c);
  std::string payload = r.payload_json();
  CHECK(payload.find("wall_clock_sec") == std::string::npos);
  // 17 significant digits somewhere in the survival value
  CHECK(payload.find("0.6826894921370") != std::string::npos);
}

TEST_CASE("workers do not change the numeric payload") {
  std::string base = R"({
    "experiment": "clt",
    "cone": "halfline",
    "steps": "data/lazy_1d.steps",
    "start": [1],
    "n": 300,
    "samples": 12000,
    "seed": 7,
    "radial_cells": 4,
    "angular_cells": 1,
    "workers": )";
  ExperimentConfig c1 = parse_config(base + "1}");
  ExperimentConfig c8 = parse_config(base + "8}");
  ExperimentReport r1 = run(c1);
  ExperimentReport r8 = run(c8);
  // strip the config echo (differs in the workers field by design)
  std::string p1 = r1.payload_json(), p8 = r8.payload_json();
  std::string m1 = p1.substr(p1.find("\"metrics\""));
  std::string m8 = p8.substr(p8.find("\"metrics\""));
  CHECK(m1 == m8);
}

TEST_CASE("round trip through a file") {
  std::string path = "/tmp/rwc_test_config.json";
  {
    std::ofstream out(path);
    out << R"({"experiment":"bm","cone":"halfline","start":[2],"t":4.0})";
  }
  ExperimentConfig c = load_config(path);
  CHECK(c.kind == ExperimentKind::bm);
  CHECK(c.t == doctest::Approx(4.0));
  CHECK_THROWS_AS(load_config("/tmp/no_such_config_file.json"), ConfigInvalid);
}
