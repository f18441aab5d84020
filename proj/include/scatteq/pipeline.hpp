#pragma once

// Batch pipelines behind the CLI: each consumes a validated config, writes
// CSV/JSON artifacts into an output directory, and returns the exit status
// (0 verdict true, 2 verdict false; errors escape as exceptions -> 1).

#include <memory>
#include <string>

#include "json.hpp"
#include "scatteq/cayley.hpp"
#include "scatteq/config.hpp"
#include "scatteq/scattering.hpp"
#include "scatteq/three_body.hpp"

namespace scatteq {

struct PipelineResult {
  int exit_code = 0;
  nlohmann::json report;
};

PotentialPtr build_potential(const PotentialConfig& pc);
FormFactor build_form_factor(const std::string& kind, double scale);
GridPtr build_grid(const GridConfig& gc);
TwoBodySystem build_system(const ExperimentConfig& cfg);
std::vector<double> pick_energies(const ExperimentConfig& cfg,
                                  const TwoBodySystem& sys);

// Generator from the three-body config section on a fresh tensor space.
struct ThreeBodySetup {
  std::shared_ptr<TensorSpace> space;
  std::shared_ptr<GeneratorSpec> generator;
};
ThreeBodySetup build_three_body(const ThreeBodyConfig& tc);

PipelineResult run_baseline(const ExperimentConfig& cfg, const std::string& out_dir);
PipelineResult run_transform(const ExperimentConfig& cfg, const std::string& out_dir);
PipelineResult run_soften(const ExperimentConfig& cfg, const std::string& out_dir);
PipelineResult run_three_body(const ExperimentConfig& cfg, const std::string& out_dir);
// Re-checks artifacts a previous run left in out_dir against the same config.
PipelineResult run_verify(const ExperimentConfig& cfg, const std::string& out_dir);

void write_report(const nlohmann::json& report, const std::string& path);

}  // namespace scatteq
