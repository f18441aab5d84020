#pragma once

// Experiment configuration: strict JSON parsing (unknown keys rejected),
// deterministic serialization, and a stable content hash for reports.

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "scatteq/errors.hpp"

namespace scatteq {

struct GridConfig {
  int n = 48;
  double scale = 1.0;
  int partial_wave = 0;
};

struct PotentialConfig {
  std::string kind;  // "separable" | "yukawa_sum" | "gaussian_well"
  // separable
  double strength = 0.0;
  std::string form_factor_kind = "yamaguchi";
  double form_factor_scale = 1.0;
  // yukawa_sum
  std::vector<std::pair<double, double>> terms;  // (strength, range)
  // gaussian_well
  double depth = 0.0;
  double width = 1.0;
  int partial_wave = 0;
};

struct TwoBodyConfig {
  double mu = 1.0;
  PotentialConfig potential;
};

struct GeneratorConfig {
  double lambda = 0.0;
  std::string form_factor_kind = "yamaguchi";
  double form_factor_scale = 1.0;
};

struct ThreeBodyComponentConfig {
  std::string partition;            // e.g. "(12)(3)" or "(123)"
  std::vector<double> strengths;    // channel couplings
  std::string form_factor_kind = "yamaguchi";
  double form_factor_scale = 1.0;
};

struct ThreeBodyConfig {
  GridConfig pair_grid;
  GridConfig spectator_grid;
  double mu_pair = 0.5;
  double mu_spectator = 2.0 / 3.0;
  std::vector<ThreeBodyComponentConfig> components;
  std::vector<double> sweep;  // connected-strength factors
};

struct DensityConfig {
  std::string kind = "tanh";  // "tanh" | "separable"
  double alpha = 0.0;
  double k0 = 1.0;
  // separable kind: rho = |chi><chi| with chi from a form factor
  std::string chi_kind = "gaussian";
  double chi_scale = 1.0;
};

struct SearchConfig {
  double lo = -10.0;
  double hi = 10.0;
  int starts = 8;
};

struct ToleranceConfig {
  double phase = 1e-6;  // radians
  double bind = 1e-8;   // relative
};

struct ExperimentConfig {
  GridConfig grid;
  TwoBodyConfig two_body;
  GeneratorConfig generator;
  std::optional<ThreeBodyConfig> three_body;
  DensityConfig density;
  SearchConfig search;
  std::vector<double> energies;  // empty: default ladder
  ToleranceConfig tolerances;
  std::string output_dir = "out";

  static ExperimentConfig from_json(const nlohmann::json& j);
  static ExperimentConfig from_file(const std::string& path);
  nlohmann::json to_json() const;
  // FNV-1a 64-bit over the sorted-key serialization.
  std::string hash() const;
};

std::string fnv1a_hex(const std::string& bytes);

// Deterministic number formatting for CSV artifacts (round-trip exact).
std::string format_number(double v);

void write_csv(const std::string& path,
               const std::vector<std::string>& header,
               const std::vector<std::vector<double>>& rows);

std::vector<std::vector<double>> read_csv(const std::string& path,
                                          std::vector<std::string>* header);

}  // namespace scatteq
