#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>
#include <unistd.h>

#include "scatteq/config.hpp"

using namespace scatteq;
using nlohmann::json;

namespace {

json full_config() {
  return json::parse(R"json({
    "grid": {"n": 32, "scale": 1.5, "partial_wave": 0},
    "two_body": {
      "mu": 0.5,
      "potential": {
        "kind": "separable",
        "strength": -8.0,
        "form_factor": {"kind": "yamaguchi", "scale": 1.5}
      }
    },
    "generator": {"lambda": 0.7, "form_factor": {"kind": "gaussian", "scale": 1.1}},
    "three_body": {
      "pair_grid": {"n": 8, "scale": 1.0},
      "spectator_grid": {"n": 8, "scale": 1.2},
      "mu_pair": 0.5,
      "mu_spectator": 0.75,
      "components": [
        {"partition": "(12)(3)", "strengths": [0.6],
         "form_factor": {"kind": "gaussian", "scale": 0.9}},
        {"partition": "(123)", "strengths": [0.4]}
      ],
      "sweep": [0.0, 0.5, 1.0, 2.0]
    },
    "density": {"kind": "tanh", "alpha": 0.2, "k0": 1.3},
    "search": {"lo": -4.0, "hi": 4.0, "starts": 6},
    "energies": [0.1, 0.5, 1.0],
    "tolerances": {"phase": 1e-6, "bind": 1e-8},
    "output": {"dir": "artifacts"}
  })json");
}

std::string temp_path(const std::string& tag) {
  return (std::filesystem::temp_directory_path() /
          ("scatteq_test_" + tag + "_" + std::to_string(::getpid()) + ".tmp"))
      .string();
}

}  // namespace

TEST_CASE("a full configuration parses into the expected fields") {
  const auto c = ExperimentConfig::from_json(full_config());
  CHECK(c.grid.n == 32);
  CHECK(c.grid.scale == 1.5);
  CHECK(c.two_body.mu == 0.5);
  CHECK(c.two_body.potential.kind == "separable");
  CHECK(c.two_body.potential.strength == -8.0);
  CHECK(c.two_body.potential.form_factor_kind == "yamaguchi");
  CHECK(c.two_body.potential.form_factor_scale == 1.5);
  CHECK(c.generator.lambda == 0.7);
  CHECK(c.generator.form_factor_kind == "gaussian");
  REQUIRE(c.three_body.has_value());
  CHECK(c.three_body->pair_grid.n == 8);
  CHECK(c.three_body->spectator_grid.scale == 1.2);
  REQUIRE(c.three_body->components.size() == 2);
  CHECK(c.three_body->components[0].partition == "(12)(3)");
  CHECK(c.three_body->components[0].form_factor_scale == 0.9);
  CHECK(c.three_body->components[1].strengths == std::vector<double>{0.4});
  CHECK(c.three_body->sweep.size() == 4);
  CHECK(c.density.alpha == 0.2);
  CHECK(c.search.starts == 6);
  CHECK(c.energies.size() == 3);
  CHECK(c.tolerances.phase == 1e-6);
  CHECK(c.output_dir == "artifacts");
}

TEST_CASE("omitted sections fall back to defaults") {
  const auto c = ExperimentConfig::from_json(json::parse(
      R"({"two_body": {"potential": {"kind": "gaussian_well", "depth": -4.0}}})"));
  CHECK(c.grid.n == 48);
  CHECK(c.grid.scale == 1.0);
  CHECK(c.two_body.mu == 1.0);
  CHECK(c.two_body.potential.width == 1.0);
  CHECK(c.generator.lambda == 0.0);
  CHECK(!c.three_body.has_value());
  CHECK(c.density.kind == "tanh");
  CHECK(c.search.lo == -10.0);
  CHECK(c.search.hi == 10.0);
  CHECK(c.energies.empty());
  CHECK(c.tolerances.bind == 1e-8);
  CHECK(c.output_dir == "out");
}

TEST_CASE("unknown keys are rejected with their context path") {
  auto expect_reject = [](json j, const std::string& fragment) {
    try {
      ExperimentConfig::from_json(j);
      FAIL_CHECK("expected rejection mentioning " << fragment);
    } catch (const ConfigError& e) {
      CHECK(std::string(e.what()).find(fragment) != std::string::npos);
    }
  };
  auto j = full_config();
  j["typo"] = 1;
  expect_reject(j, "typo");

  j = full_config();
  j["grid"]["points"] = 10;
  expect_reject(j, "grid");

  j = full_config();
  j["two_body"]["mass"] = 1.0;
  expect_reject(j, "two_body");

  j = full_config();
  j["two_body"]["potential"]["extra"] = 1.0;
  expect_reject(j, "two_body.potential");

  j = full_config();
  j["two_body"]["potential"]["form_factor"]["beta"] = 1.5;
  expect_reject(j, "form_factor");

  j = full_config();
  j["generator"]["strength"] = 1.0;
  expect_reject(j, "generator");

  j = full_config();
  j["three_body"]["grids"] = 1;
  expect_reject(j, "three_body");

  j = full_config();
  j["three_body"]["components"][1]["weight"] = 1.0;
  expect_reject(j, "components[1]");

  j = full_config();
  j["density"]["beta"] = 1.0;
  expect_reject(j, "density");

  j = full_config();
  j["search"]["step"] = 0.1;
  expect_reject(j, "search");

  j = full_config();
  j["tolerances"]["energy"] = 1e-9;
  expect_reject(j, "tolerances");

  j = full_config();
  j["output"]["path"] = "x";
  expect_reject(j, "output");
}

TEST_CASE("type and value errors are rejected") {
  auto j = full_config();
  j["grid"]["n"] = "many";
  CHECK_THROWS_AS(ExperimentConfig::from_json(j), ConfigError);

  j = full_config();
  j["two_body"]["mu"] = -0.5;
  CHECK_THROWS_AS(ExperimentConfig::from_json(j), ConfigError);

  j = full_config();
  j["two_body"]["potential"]["kind"] = "hard_sphere";
  CHECK_THROWS_AS(ExperimentConfig::from_json(j), ConfigError);

  j = full_config();
  j["two_body"]["potential"]["form_factor"]["scale"] = 0.0;
  CHECK_THROWS_AS(ExperimentConfig::from_json(j), ConfigError);

  j = full_config();
  j["energies"] = {0.1, -0.5};
  CHECK_THROWS_AS(ExperimentConfig::from_json(j), ConfigError);

  j = full_config();
  j["search"]["hi"] = -20.0;
  CHECK_THROWS_AS(ExperimentConfig::from_json(j), ConfigError);

  j = full_config();
  j["tolerances"]["phase"] = 0.0;
  CHECK_THROWS_AS(ExperimentConfig::from_json(j), ConfigError);

  // The interaction section is mandatory.
  CHECK_THROWS_AS(ExperimentConfig::from_json(json::object()), ConfigError);
}

TEST_CASE("yukawa term lists are validated") {
  auto j = full_config();
  j["two_body"]["potential"] =
      json{{"kind", "yukawa_sum"}, {"terms", json::array({{-2.5, 1.0}, {0.5, 2.0}})}};
  const auto c = ExperimentConfig::from_json(j);
  REQUIRE(c.two_body.potential.terms.size() == 2);
  CHECK(c.two_body.potential.terms[0] == std::pair<double, double>{-2.5, 1.0});

  j["two_body"]["potential"]["terms"] = json::array();
  CHECK_THROWS_AS(ExperimentConfig::from_json(j), ConfigError);
  j["two_body"]["potential"]["terms"] = json::array({{1.0}});
  CHECK_THROWS_AS(ExperimentConfig::from_json(j), ConfigError);
  j["two_body"]["potential"].erase("terms");
  CHECK_THROWS_AS(ExperimentConfig::from_json(j), ConfigError);
}

TEST_CASE("serialization round trips and hashes deterministically") {
  const auto c = ExperimentConfig::from_json(full_config());
  const json j1 = c.to_json();
  const auto c2 = ExperimentConfig::from_json(j1);
  CHECK(c2.to_json() == j1);
  CHECK(c2.hash() == c.hash());
  CHECK(j1.dump() == c.to_json().dump());
  CHECK(c.hash().size() == 16);

  auto c3 = c;
  c3.generator.lambda += 1e-12;
  CHECK(c3.hash() != c.hash());
}

TEST_CASE("number formatting round trips doubles exactly") {
  for (double v : {0.0, 1.0 / 3.0, -2.5e-17, 6.02214076e23, 0.35992420712151446,
                   -0.2988299571074601, 1e308}) {
    CHECK(std::stod(format_number(v)) == v);
  }
}

TEST_CASE("csv artifacts round trip through write and read") {
  const std::string path = temp_path("csv");
  const std::vector<std::string> header{"energy", "delta"};
  const std::vector<std::vector<double>> rows{{0.1, 0.35992420712151446},
                                             {0.5, -1.0 / 3.0}};
  write_csv(path, header, rows);
  std::vector<std::string> got_header;
  const auto got = read_csv(path, &got_header);
  CHECK(got_header == header);
  REQUIRE(got.size() == 2);
  CHECK(got[0][0] == rows[0][0]);
  CHECK(got[0][1] == rows[0][1]);
  CHECK(got[1][1] == rows[1][1]);
  std::filesystem::remove(path);
}

TEST_CASE("config files load with parse errors reported") {
  CHECK_THROWS_AS(ExperimentConfig::from_file("/nonexistent/config.json"),
                  ConfigError);
  const std::string path = temp_path("badjson");
  {
    std::ofstream out(path);
    out << "{not json";
  }
  CHECK_THROWS_AS(ExperimentConfig::from_file(path), ConfigError);
  std::filesystem::remove(path);

  const std::string good = temp_path("goodjson");
  {
    std::ofstream out(good);
    out << full_config().dump(2);
  }
  const auto c = ExperimentConfig::from_file(good);
  CHECK(c.grid.n == 32);
  std::filesystem::remove(good);
}
