#include "scatteq/pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>

#include "scatteq/transform.hpp"
#include "scatteq/variational.hpp"

namespace scatteq {

using nlohmann::json;

PotentialPtr build_potential(const PotentialConfig& pc) {
  if (pc.kind == "separable") {
    return std::make_shared<SeparablePotential>(
        pc.strength, build_form_factor(pc.form_factor_kind, pc.form_factor_scale));
  }
  if (pc.kind == "yukawa_sum") {
    std::vector<YukawaSumPotential::Term> terms;
    for (const auto& t : pc.terms) terms.push_back({t.first, t.second});
    return std::make_shared<YukawaSumPotential>(std::move(terms), pc.partial_wave);
  }
  if (pc.kind == "gaussian_well") {
    return std::make_shared<GaussianWellPotential>(pc.depth, pc.width,
                                                   pc.partial_wave);
  }
  throw ConfigError("unknown potential kind: " + pc.kind);
}

FormFactor build_form_factor(const std::string& kind, double scale) {
  FormFactor f;
  f.kind = (kind == "gaussian") ? FormFactor::Kind::gaussian
                                : FormFactor::Kind::yamaguchi;
  f.scale = scale;
  return f;
}

GridPtr build_grid(const GridConfig& gc) {
  return std::make_shared<Grid>(gc.n, gc.scale, gc.partial_wave);
}

TwoBodySystem build_system(const ExperimentConfig& cfg) {
  return TwoBodySystem::make(cfg.two_body.mu, build_grid(cfg.grid),
                             build_potential(cfg.two_body.potential));
}

std::vector<double> pick_energies(const ExperimentConfig& cfg,
                                  const TwoBodySystem& sys) {
  if (!cfg.energies.empty()) return cfg.energies;
  return default_energies(sys);
}

ThreeBodySetup build_three_body(const ThreeBodyConfig& tc) {
  ThreeBodySetup setup;
  setup.space = std::make_shared<TensorSpace>(build_grid(tc.pair_grid),
                                              build_grid(tc.spectator_grid));
  std::map<Partition, std::vector<Channel>> comps;
  for (const auto& comp : tc.components) {
    const Partition a = Partition::parse(comp.partition);
    if (a.n_particles() != 3)
      throw ConfigError("three_body component partition must have 3 particles: " +
                        comp.partition);
    if (a.is_bottom())
      throw ConfigError("the fully split partition carries no generator channels");
    const FormFactor ff =
        build_form_factor(comp.form_factor_kind, comp.form_factor_scale);
    auto& slot = comps[a];
    if (a.is_top()) {
      const Vec gp = ff.on_grid(*setup.space->pair_grid());
      const Vec gs = ff.on_grid(*setup.space->spectator_grid());
      const Vec prod = setup.space->product_vec(gp, gs);
      for (double s : comp.strengths) slot.push_back(Channel{s, prod});
    } else {
      // Two-cluster components share the pair-slot realization.
      const Vec gp = ff.on_grid(*setup.space->pair_grid());
      for (double s : comp.strengths) {
        auto band = setup.space->pair_rank_one_channels(s, gp);
        slot.insert(slot.end(), band.begin(), band.end());
      }
    }
  }
  setup.generator =
      std::make_shared<GeneratorSpec>(3, setup.space->space(), std::move(comps));
  return setup;
}

namespace {

void ensure_dir(const std::string& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw Error("cannot create output directory " + dir + ": " + ec.message());
}

json base_report(const char* command, const ExperimentConfig& cfg) {
  json j;
  j["schema_version"] = "1";
  j["command"] = command;
  j["config_hash"] = cfg.hash();
  j["tolerances"] = {{"phase", cfg.tolerances.phase},
                     {"bind", cfg.tolerances.bind}};
  return j;
}

json equivalence_json(const EquivalenceReport& r) {
  json j;
  j["energies"] = r.energies;
  j["delta_before"] = r.delta_before;
  j["delta_after"] = r.delta_after;
  j["bound_before"] = r.bound_before;
  j["bound_after"] = r.bound_after;
  j["max_phase_dev"] = r.max_phase_dev;
  j["max_bind_dev"] = r.max_bind_dev;
  j["verdict"] = r.verdict;
  return j;
}

// Eigenvalue drift normalized by max(1, spectral radius): Hermitian
// perturbation bounds make the absolute drift scale with the norm of H.
double spectrum_deviation(const Op& h, const Op& hp) {
  const Eigen::VectorXd e = hermitian_eigenvalues(h);
  const Eigen::VectorXd ep = hermitian_eigenvalues(hp);
  const double radius =
      std::max(std::abs(e[0]), std::abs(e[e.size() - 1]));
  const double dev = (e - ep).cwiseAbs().maxCoeff();
  return dev / std::max(1.0, radius);
}

std::vector<std::vector<double>> matrix_rows(const Grid& grid, const Op& op) {
  std::vector<std::vector<double>> rows;
  rows.reserve(static_cast<std::size_t>(grid.size()) * grid.size());
  for (int i = 0; i < grid.size(); ++i)
    for (int j = 0; j < grid.size(); ++j)
      rows.push_back({grid.nodes()[i], grid.nodes()[j],
                      std::real(op.kernel()(i, j)), std::imag(op.kernel()(i, j))});
  return rows;
}

std::vector<std::vector<double>> phase_rows(const EquivalenceReport& r) {
  std::vector<std::vector<double>> rows;
  for (std::size_t i = 0; i < r.energies.size(); ++i)
    rows.push_back({r.energies[i], r.delta_before[i], r.delta_after[i]});
  return rows;
}

Vec density_chi(const ExperimentConfig& cfg, const Grid& grid) {
  if (cfg.density.kind == "separable")
    return build_form_factor(cfg.density.chi_kind, cfg.density.chi_scale)
        .on_grid(grid);
  Eigen::VectorXcd d(grid.size());
  for (int i = 0; i < grid.size(); ++i) {
    const double k = grid.nodes()[i];
    d[i] = std::tanh(cfg.density.alpha + k * k / (cfg.density.k0 * cfg.density.k0));
  }
  return Vec(grid.space(), std::move(d));
}

}  // namespace

void write_report(const json& report, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw Error("cannot open for writing: " + path);
  out << report.dump(2) << "\n";
  if (!out) throw Error("write failed: " + path);
}

PipelineResult run_baseline(const ExperimentConfig& cfg,
                            const std::string& out_dir) {
  ensure_dir(out_dir);
  const TwoBodySystem sys = build_system(cfg);
  const auto energies = pick_energies(cfg, sys);
  const auto pts = phase_shifts(sys, energies);
  const auto bound = bound_state_energies(sys);
  const auto ladder = phase_shifts(sys, default_energies(sys, 60));

  std::vector<std::vector<double>> rows;
  for (const auto& p : pts) rows.push_back({p.energy, p.delta, p.delta_raw});
  write_csv(out_dir + "/phases.csv", {"E", "delta", "delta_raw"}, rows);

  json rep = base_report("baseline", cfg);
  rep["energies"] = energies;
  json deltas = json::array(), raws = json::array();
  for (const auto& p : pts) {
    deltas.push_back(p.delta);
    raws.push_back(p.delta_raw);
  }
  rep["delta"] = deltas;
  rep["delta_raw"] = raws;
  rep["bound_states"] = bound;
  rep["levinson_count"] = levinson_count(ladder);
  rep["artifacts"] = {{"phases", "phases.csv"}};
  write_report(rep, out_dir + "/report.json");
  return PipelineResult{0, rep};
}

PipelineResult run_transform(const ExperimentConfig& cfg,
                             const std::string& out_dir) {
  ensure_dir(out_dir);
  const TwoBodySystem before = build_system(cfg);
  const FormFactor gff = build_form_factor(cfg.generator.form_factor_kind,
                                           cfg.generator.form_factor_scale);
  const TwoBodySystem after =
      transformed_system(before, cfg.generator.lambda, gff);
  const auto energies = pick_energies(cfg, before);
  const EquivalenceReport eq = certify_equivalence(
      before, after, energies, cfg.tolerances.phase, cfg.tolerances.bind);
  const double spec_dev =
      spectrum_deviation(before.hamiltonian(), after.hamiltonian());
  const bool verdict = eq.verdict && spec_dev <= 1e-9;

  write_csv(out_dir + "/phases.csv", {"E", "delta_before", "delta_after"},
            phase_rows(eq));
  write_csv(out_dir + "/v_prime.csv", {"k_i", "k_j", "re", "im"},
            matrix_rows(*before.grid, after.vmat));

  json rep = base_report("transform", cfg);
  rep["lambda"] = cfg.generator.lambda;
  rep["equivalence"] = equivalence_json(eq);
  rep["spectrum_deviation"] = spec_dev;
  rep["verdict"] = verdict;
  rep["artifacts"] = {{"phases", "phases.csv"}, {"v_prime", "v_prime.csv"}};
  write_report(rep, out_dir + "/report.json");
  return PipelineResult{verdict ? 0 : 2, rep};
}

PipelineResult run_soften(const ExperimentConfig& cfg,
                          const std::string& out_dir) {
  ensure_dir(out_dir);
  const TwoBodySystem before = build_system(cfg);
  const FormFactor gff = build_form_factor(cfg.generator.form_factor_kind,
                                           cfg.generator.form_factor_scale);
  const Vec g = gff.on_grid(*before.grid);
  const Vec chi = density_chi(cfg, *before.grid);
  const RationalForm rf = RationalForm::build(before.vmat, before.kinetic, g, chi);

  SearchSpec sspec;
  sspec.lo = cfg.search.lo;
  sspec.hi = cfg.search.hi;
  sspec.starts = cfg.search.starts;
  const MinimizeResult min =
      minimize([&](double lam) { return rf.eval(lam); }, sspec);

  std::vector<std::vector<double>> trace;
  for (const auto& [lam, f] : min.trace) trace.push_back({lam, f});
  std::sort(trace.begin(), trace.end());
  write_csv(out_dir + "/trace.csv", {"lambda", "F"}, trace);

  const TwoBodySystem after = transformed_system(before, min.lambda_c, gff);
  const auto energies = pick_energies(cfg, before);
  const EquivalenceReport eq = certify_equivalence(
      before, after, energies, cfg.tolerances.phase, cfg.tolerances.bind);
  const double spec_dev =
      spectrum_deviation(before.hamiltonian(), after.hamiltonian());
  const bool verdict = eq.verdict && spec_dev <= 1e-9;

  write_csv(out_dir + "/phases.csv", {"E", "delta_before", "delta_after"},
            phase_rows(eq));
  write_csv(out_dir + "/v_before.csv", {"k_i", "k_j", "re", "im"},
            matrix_rows(*before.grid, before.vmat));
  write_csv(out_dir + "/v_prime.csv", {"k_i", "k_j", "re", "im"},
            matrix_rows(*before.grid, after.vmat));

  // High-momentum weight before/after; reported with and without the outer
  // square root since both normalizations are in circulation.
  const Op rho = Op::rank_one(1.0, chi, chi);
  const double w_before = functional_direct(before.vmat, rho);
  const double w_after = functional_direct(after.vmat, rho);

  json rep = base_report("soften", cfg);
  rep["lambda_c"] = min.lambda_c;
  rep["f_min"] = min.f_min;
  rep["grad_at_min"] = min.grad;
  rep["grad_at_zero"] = (rf.eval(1e-5) - rf.eval(-1e-5)) / 2e-5;
  rep["flat_objective"] = min.flat_warning;
  rep["evaluations"] = min.evaluations;
  rep["weight_before"] = w_before;
  rep["weight_after"] = w_after;
  rep["weight_before_root"] = std::sqrt(std::max(w_before, 0.0));
  rep["weight_after_root"] = std::sqrt(std::max(w_after, 0.0));
  rep["equivalence"] = equivalence_json(eq);
  rep["spectrum_deviation"] = spec_dev;
  rep["verdict"] = verdict;
  rep["artifacts"] = {{"phases", "phases.csv"},
                      {"trace", "trace.csv"},
                      {"v_before", "v_before.csv"},
                      {"v_prime", "v_prime.csv"}};
  write_report(rep, out_dir + "/report.json");
  return PipelineResult{verdict ? 0 : 2, rep};
}

PipelineResult run_three_body(const ExperimentConfig& cfg,
                              const std::string& out_dir) {
  ensure_dir(out_dir);
  if (!cfg.three_body)
    throw ConfigError("three-body command needs a \"three_body\" config section");
  const ThreeBodyConfig& tc = *cfg.three_body;
  ThreeBodySetup setup = build_three_body(tc);
  const GeneratorSpec& gen = *setup.generator;
  const TensorSpace& ts = *setup.space;

  const ResolventResult rr = solve_R(gen);
  const Op a_full = assemble_A(gen, rr.r);
  const double unit_res = unitarity_residual(a_full);
  const ClusterOperator acomp = cayley_components(gen);

  // Pair interaction rides the pair slot; its cluster label is the partition
  // grouping the pair coordinate.
  ClusterOperator h(3, ts.space());
  h.set(Partition::n_cluster(3), ts.kinetic(tc.mu_pair, tc.mu_spectator));
  const Op v_pair = build_potential(cfg.two_body.potential)->matrix(*ts.pair_grid());
  h.set(Partition::parse("(12)(3)"), ts.embed_pair(v_pair));

  json comp_norms, gamma_norms;
  for (const auto& [p, op] : acomp.components()) comp_norms[p.str()] = op.norm();
  for (const auto& kv : gen.components())
    gamma_norms[kv.first.str()] = gen.component_op(kv.first).norm();

  const Partition top = Partition::one_cluster(3);
  json rep = base_report("three-body", cfg);
  rep["solver"] = {{"system_dim", rr.diag.system_dim},
                   {"condition", rr.diag.condition},
                   {"residual", rr.diag.residual},
                   {"ill_conditioned", rr.diag.ill_conditioned}};
  rep["unitarity_residual"] = unit_res;
  rep["generator_component_norms"] = gamma_norms;
  rep["cayley_component_norms"] = comp_norms;
  rep["induced_connected_norm"] = induced_connected_mobius(h, gen).norm();

  bool verdict = unit_res <= 1e-8 && !rr.diag.ill_conditioned;
  if (!tc.sweep.empty()) {
    const IndependenceSweep sweep = two_body_independence(h, gen, top, tc.sweep);
    std::vector<std::vector<double>> rows;
    for (std::size_t i = 0; i < sweep.factors.size(); ++i)
      rows.push_back({sweep.factors[i], sweep.v123_norms[i]});
    write_csv(out_dir + "/sweep.csv", {"factor", "v123_norm"}, rows);
    rep["sweep"] = {{"factors", sweep.factors},
                    {"v123_norms", sweep.v123_norms},
                    {"max_two_cluster_drift", sweep.max_two_cluster_drift},
                    {"two_body_independent", sweep.two_body_independent},
                    {"three_body_varies", sweep.three_body_varies}};
    rep["artifacts"] = {{"sweep", "sweep.csv"}};
    verdict = verdict && sweep.two_body_independent && sweep.three_body_varies;
  }
  rep["verdict"] = verdict;
  write_report(rep, out_dir + "/report.json");
  return PipelineResult{verdict ? 0 : 2, rep};
}

namespace {

json load_report(const std::string& out_dir) {
  std::ifstream in(out_dir + "/report.json");
  if (!in) throw Error("no report.json in " + out_dir + "; nothing to verify");
  json j;
  try {
    in >> j;
  } catch (const json::parse_error& e) {
    throw Error(std::string("corrupt report.json: ") + e.what());
  }
  return j;
}

struct CheckList {
  json checks = json::array();
  bool all = true;
  void add(const std::string& name, bool pass, double value) {
    checks.push_back({{"name", name}, {"pass", pass}, {"value", value}});
    all = all && pass;
  }
};

// Recompute the phase table at the energies stored in the artifact; the
// artifact is never interpolated or resampled.
void check_phase_table(const std::string& path, const TwoBodySystem& before,
                       const TwoBodySystem* after, CheckList& cl) {
  std::vector<std::string> header;
  const auto rows = read_csv(path, &header);
  std::vector<double> energies;
  for (const auto& r : rows) energies.push_back(r.at(0));
  const auto pb = phase_shifts(before, energies);
  double dev_b = 0.0, dev_a = 0.0;
  std::vector<PhasePoint> pa;
  if (after) pa = phase_shifts(*after, energies);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    dev_b = std::max(dev_b, std::abs(pb[i].delta - rows[i].at(1)));
    if (after) dev_a = std::max(dev_a, std::abs(pa[i].delta - rows[i].at(2)));
  }
  cl.add("phases_reproduce_before", dev_b <= 1e-9, dev_b);
  if (after) cl.add("phases_reproduce_after", dev_a <= 1e-9, dev_a);
}

void check_matrix(const std::string& path, const Grid& grid, const Op& op,
                  CheckList& cl, const std::string& name) {
  if (!std::filesystem::exists(path)) return;
  std::vector<std::string> header;
  const auto rows = read_csv(path, &header);
  const std::size_t n = static_cast<std::size_t>(grid.size());
  if (rows.size() != n * n)
    throw Error(path + ": row count does not match the config grid; refusing "
                       "to reinterpret");
  double node_dev = 0.0, val_dev = 0.0;
  for (std::size_t r = 0; r < rows.size(); ++r) {
    const int i = static_cast<int>(r / n), j = static_cast<int>(r % n);
    node_dev = std::max(node_dev, std::abs(rows[r].at(0) - grid.nodes()[i]));
    node_dev = std::max(node_dev, std::abs(rows[r].at(1) - grid.nodes()[j]));
    const cplx file_v(rows[r].at(2), rows[r].at(3));
    val_dev = std::max(val_dev, std::abs(file_v - op.kernel()(i, j)));
  }
  if (node_dev > 1e-9)
    throw Error(path + ": grid nodes do not match the config grid; refusing "
                       "to reinterpret");
  const double scale = std::max(1.0, op.max_abs());
  cl.add(name + "_matches", val_dev <= 1e-12 * scale, val_dev);
}

void check_bound_states(const json& stored, const std::vector<double>& fresh,
                        CheckList& cl, const std::string& name) {
  if (!stored.is_array()) return;
  if (stored.size() != fresh.size()) {
    cl.add(name + "_match", false,
           static_cast<double>(stored.size()) - static_cast<double>(fresh.size()));
    return;
  }
  double dev = 0.0;
  for (std::size_t i = 0; i < fresh.size(); ++i)
    dev = std::max(dev, std::abs(stored[i].get<double>() - fresh[i]) /
                            std::max(1e-300, std::abs(fresh[i])));
  cl.add(name + "_match", dev <= 1e-9, dev);
}

}  // namespace

PipelineResult run_verify(const ExperimentConfig& cfg,
                          const std::string& out_dir) {
  const json stored = load_report(out_dir);
  if (!stored.contains("config_hash") ||
      stored["config_hash"].get<std::string>() != cfg.hash())
    throw ConfigError("artifacts in " + out_dir +
                      " were produced from a different config (hash mismatch)");
  const std::string cmd = stored.value("command", "");
  CheckList cl;
  json rep = base_report("verify", cfg);
  rep["verified_command"] = cmd;

  if (cmd == "baseline") {
    const TwoBodySystem sys = build_system(cfg);
    check_phase_table(out_dir + "/phases.csv", sys, nullptr, cl);
    check_bound_states(stored.value("bound_states", json()),
                       bound_state_energies(sys), cl, "bound_states");
  } else if (cmd == "transform" || cmd == "soften") {
    const TwoBodySystem before = build_system(cfg);
    const double lambda = (cmd == "transform")
                              ? stored.value("lambda", cfg.generator.lambda)
                              : stored.value("lambda_c", 0.0);
    const FormFactor gff = build_form_factor(cfg.generator.form_factor_kind,
                                             cfg.generator.form_factor_scale);
    const TwoBodySystem after = transformed_system(before, lambda, gff);
    check_phase_table(out_dir + "/phases.csv", before, &after, cl);
    check_matrix(out_dir + "/v_prime.csv", *before.grid, after.vmat, cl, "v_prime");
    if (cmd == "soften")
      check_matrix(out_dir + "/v_before.csv", *before.grid, before.vmat, cl,
                   "v_before");
    if (stored.contains("equivalence")) {
      const json& eq = stored["equivalence"];
      check_bound_states(eq.value("bound_before", json()),
                         bound_state_energies(before), cl, "bound_before");
      check_bound_states(eq.value("bound_after", json()),
                         bound_state_energies(after), cl, "bound_after");
      const double mpd = eq.value("max_phase_dev", 0.0);
      const double mbd = eq.value("max_bind_dev", 0.0);
      cl.add("phase_dev_within_tolerance", mpd <= cfg.tolerances.phase, mpd);
      cl.add("bind_dev_within_tolerance", mbd <= cfg.tolerances.bind, mbd);
    }
  } else if (cmd == "three-body") {
    if (!cfg.three_body)
      throw ConfigError("verify of a three-body run needs the three_body section");
    ThreeBodySetup setup = build_three_body(*cfg.three_body);
    const ResolventResult rr = solve_R(*setup.generator);
    const Op a_full = assemble_A(*setup.generator, rr.r);
    const double unit = unitarity_residual(a_full);
    const double stored_unit = stored.value("unitarity_residual", 0.0);
    cl.add("unitarity_reproduces", std::abs(unit - stored_unit) <= 1e-9,
           std::abs(unit - stored_unit));
    cl.add("unitarity_within_tolerance", unit <= 1e-8, unit);
  } else {
    throw Error("report.json has no verifiable command field");
  }

  const bool stored_verdict = stored.value("verdict", true);
  const bool verdict = cl.all && stored_verdict;
  rep["checks"] = cl.checks;
  rep["stored_verdict"] = stored_verdict;
  rep["verdict"] = verdict;
  write_report(rep, out_dir + "/verify_report.json");
  return PipelineResult{verdict ? 0 : 2, rep};
}

}  // namespace scatteq
