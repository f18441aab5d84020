#include "scatteq/config.hpp"

#include <cstdint>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace scatteq {

using nlohmann::json;

namespace {

void check_keys(const json& j, const std::string& ctx,
                std::initializer_list<const char*> allowed) {
  if (!j.is_object()) throw ConfigError(ctx + ": expected an object");
  for (const auto& item : j.items()) {
    bool ok = false;
    for (const char* a : allowed)
      if (item.key() == a) {
        ok = true;
        break;
      }
    if (!ok) throw ConfigError(ctx + ": unknown key \"" + item.key() + "\"");
  }
}

double num(const json& j, const char* key, double dflt, const std::string& ctx) {
  if (!j.contains(key)) return dflt;
  if (!j[key].is_number()) throw ConfigError(ctx + "." + key + ": expected a number");
  return j[key].get<double>();
}

int integer(const json& j, const char* key, int dflt, const std::string& ctx) {
  if (!j.contains(key)) return dflt;
  if (!j[key].is_number_integer())
    throw ConfigError(ctx + "." + key + ": expected an integer");
  return j[key].get<int>();
}

std::string str(const json& j, const char* key, const std::string& dflt,
                const std::string& ctx) {
  if (!j.contains(key)) return dflt;
  if (!j[key].is_string()) throw ConfigError(ctx + "." + key + ": expected a string");
  return j[key].get<std::string>();
}

GridConfig parse_grid(const json& j, const std::string& ctx) {
  check_keys(j, ctx, {"n", "scale", "partial_wave"});
  GridConfig g;
  g.n = integer(j, "n", g.n, ctx);
  g.scale = num(j, "scale", g.scale, ctx);
  g.partial_wave = integer(j, "partial_wave", g.partial_wave, ctx);
  return g;
}

void parse_form_factor(const json& j, const std::string& ctx, std::string* kind,
                       double* scale) {
  check_keys(j, ctx, {"kind", "scale"});
  *kind = str(j, "kind", *kind, ctx);
  if (*kind != "yamaguchi" && *kind != "gaussian")
    throw ConfigError(ctx + ".kind: expected \"yamaguchi\" or \"gaussian\"");
  *scale = num(j, "scale", *scale, ctx);
  if (!(*scale > 0.0)) throw ConfigError(ctx + ".scale: must be positive");
}

PotentialConfig parse_potential(const json& j, const std::string& ctx) {
  check_keys(j, ctx,
             {"kind", "strength", "form_factor", "terms", "depth", "width",
              "partial_wave"});
  PotentialConfig p;
  p.kind = str(j, "kind", "", ctx);
  p.partial_wave = integer(j, "partial_wave", 0, ctx);
  if (p.kind == "separable") {
    p.strength = num(j, "strength", 0.0, ctx);
    if (j.contains("form_factor"))
      parse_form_factor(j["form_factor"], ctx + ".form_factor",
                        &p.form_factor_kind, &p.form_factor_scale);
  } else if (p.kind == "yukawa_sum") {
    if (!j.contains("terms") || !j["terms"].is_array())
      throw ConfigError(ctx + ".terms: expected an array of [strength, range]");
    for (const auto& t : j["terms"]) {
      if (!t.is_array() || t.size() != 2 || !t[0].is_number() || !t[1].is_number())
        throw ConfigError(ctx + ".terms: each entry must be [strength, range]");
      p.terms.emplace_back(t[0].get<double>(), t[1].get<double>());
    }
    if (p.terms.empty()) throw ConfigError(ctx + ".terms: must be nonempty");
  } else if (p.kind == "gaussian_well") {
    p.depth = num(j, "depth", 0.0, ctx);
    p.width = num(j, "width", 1.0, ctx);
    if (!(p.width > 0.0)) throw ConfigError(ctx + ".width: must be positive");
  } else {
    throw ConfigError(ctx + ".kind: expected \"separable\", \"yukawa_sum\" or "
                            "\"gaussian_well\"");
  }
  return p;
}

ThreeBodyComponentConfig parse_component(const json& j, const std::string& ctx) {
  check_keys(j, ctx, {"partition", "strengths", "form_factor"});
  ThreeBodyComponentConfig c;
  c.partition = str(j, "partition", "", ctx);
  if (c.partition.empty()) throw ConfigError(ctx + ".partition: required");
  if (!j.contains("strengths") || !j["strengths"].is_array())
    throw ConfigError(ctx + ".strengths: expected an array of numbers");
  for (const auto& s : j["strengths"]) {
    if (!s.is_number()) throw ConfigError(ctx + ".strengths: expected numbers");
    c.strengths.push_back(s.get<double>());
  }
  if (j.contains("form_factor"))
    parse_form_factor(j["form_factor"], ctx + ".form_factor",
                      &c.form_factor_kind, &c.form_factor_scale);
  return c;
}

json form_factor_json(const std::string& kind, double scale) {
  return json{{"kind", kind}, {"scale", scale}};
}

}  // namespace

ExperimentConfig ExperimentConfig::from_json(const json& j) {
  check_keys(j, "config",
             {"grid", "two_body", "generator", "three_body", "density",
              "search", "energies", "tolerances", "output"});
  ExperimentConfig c;
  if (j.contains("grid")) c.grid = parse_grid(j["grid"], "grid");
  if (j.contains("two_body")) {
    const auto& tb = j["two_body"];
    check_keys(tb, "two_body", {"mu", "potential"});
    c.two_body.mu = num(tb, "mu", c.two_body.mu, "two_body");
    if (!(c.two_body.mu > 0.0)) throw ConfigError("two_body.mu: must be positive");
    if (!tb.contains("potential"))
      throw ConfigError("two_body.potential: required");
    c.two_body.potential = parse_potential(tb["potential"], "two_body.potential");
  } else {
    throw ConfigError("config: \"two_body\" section is required");
  }
  if (j.contains("generator")) {
    const auto& g = j["generator"];
    check_keys(g, "generator", {"lambda", "form_factor"});
    c.generator.lambda = num(g, "lambda", 0.0, "generator");
    if (g.contains("form_factor"))
      parse_form_factor(g["form_factor"], "generator.form_factor",
                        &c.generator.form_factor_kind,
                        &c.generator.form_factor_scale);
  }
  if (j.contains("three_body")) {
    const auto& t = j["three_body"];
    check_keys(t, "three_body",
               {"pair_grid", "spectator_grid", "mu_pair", "mu_spectator",
                "components", "sweep"});
    ThreeBodyConfig tb;
    if (t.contains("pair_grid"))
      tb.pair_grid = parse_grid(t["pair_grid"], "three_body.pair_grid");
    if (t.contains("spectator_grid"))
      tb.spectator_grid = parse_grid(t["spectator_grid"], "three_body.spectator_grid");
    tb.mu_pair = num(t, "mu_pair", tb.mu_pair, "three_body");
    tb.mu_spectator = num(t, "mu_spectator", tb.mu_spectator, "three_body");
    if (t.contains("components")) {
      if (!t["components"].is_array())
        throw ConfigError("three_body.components: expected an array");
      int idx = 0;
      for (const auto& comp : t["components"])
        tb.components.push_back(parse_component(
            comp, "three_body.components[" + std::to_string(idx++) + "]"));
    }
    if (t.contains("sweep")) {
      if (!t["sweep"].is_array())
        throw ConfigError("three_body.sweep: expected an array of numbers");
      for (const auto& s : t["sweep"]) {
        if (!s.is_number())
          throw ConfigError("three_body.sweep: expected numbers");
        tb.sweep.push_back(s.get<double>());
      }
    }
    c.three_body = std::move(tb);
  }
  if (j.contains("density")) {
    const auto& d = j["density"];
    check_keys(d, "density", {"kind", "alpha", "k0", "form_factor"});
    c.density.kind = str(d, "kind", c.density.kind, "density");
    if (c.density.kind != "tanh" && c.density.kind != "separable")
      throw ConfigError("density.kind: expected \"tanh\" or \"separable\"");
    c.density.alpha = num(d, "alpha", c.density.alpha, "density");
    c.density.k0 = num(d, "k0", c.density.k0, "density");
    if (d.contains("form_factor"))
      parse_form_factor(d["form_factor"], "density.form_factor",
                        &c.density.chi_kind, &c.density.chi_scale);
  }
  if (j.contains("search")) {
    const auto& s = j["search"];
    check_keys(s, "search", {"lo", "hi", "starts"});
    c.search.lo = num(s, "lo", c.search.lo, "search");
    c.search.hi = num(s, "hi", c.search.hi, "search");
    c.search.starts = integer(s, "starts", c.search.starts, "search");
    if (!(c.search.hi > c.search.lo))
      throw ConfigError("search: hi must exceed lo");
    if (c.search.starts < 1) throw ConfigError("search.starts: must be >= 1");
  }
  if (j.contains("energies")) {
    if (!j["energies"].is_array())
      throw ConfigError("energies: expected an array of numbers");
    for (const auto& e : j["energies"]) {
      if (!e.is_number() || !(e.get<double>() > 0.0))
        throw ConfigError("energies: expected positive numbers");
      c.energies.push_back(e.get<double>());
    }
  }
  if (j.contains("tolerances")) {
    const auto& t = j["tolerances"];
    check_keys(t, "tolerances", {"phase", "bind"});
    c.tolerances.phase = num(t, "phase", c.tolerances.phase, "tolerances");
    c.tolerances.bind = num(t, "bind", c.tolerances.bind, "tolerances");
    if (!(c.tolerances.phase > 0.0) || !(c.tolerances.bind > 0.0))
      throw ConfigError("tolerances: must be positive");
  }
  if (j.contains("output")) {
    const auto& o = j["output"];
    check_keys(o, "output", {"dir"});
    c.output_dir = str(o, "dir", c.output_dir, "output");
  }
  return c;
}

ExperimentConfig ExperimentConfig::from_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file: " + path);
  json j;
  try {
    in >> j;
  } catch (const json::parse_error& e) {
    throw ConfigError("config parse error in " + path + ": " + e.what());
  }
  return from_json(j);
}

json ExperimentConfig::to_json() const {
  json j;
  j["grid"] = {{"n", grid.n}, {"scale", grid.scale},
               {"partial_wave", grid.partial_wave}};
  json pot;
  pot["kind"] = two_body.potential.kind;
  pot["partial_wave"] = two_body.potential.partial_wave;
  if (two_body.potential.kind == "separable") {
    pot["strength"] = two_body.potential.strength;
    pot["form_factor"] = form_factor_json(two_body.potential.form_factor_kind,
                                          two_body.potential.form_factor_scale);
  } else if (two_body.potential.kind == "yukawa_sum") {
    pot["terms"] = json::array();
    for (const auto& t : two_body.potential.terms)
      pot["terms"].push_back(json::array({t.first, t.second}));
  } else if (two_body.potential.kind == "gaussian_well") {
    pot["depth"] = two_body.potential.depth;
    pot["width"] = two_body.potential.width;
  }
  j["two_body"] = {{"mu", two_body.mu}, {"potential", pot}};
  j["generator"] = {{"lambda", generator.lambda},
                    {"form_factor",
                     form_factor_json(generator.form_factor_kind,
                                      generator.form_factor_scale)}};
  if (three_body) {
    json t;
    t["pair_grid"] = {{"n", three_body->pair_grid.n},
                      {"scale", three_body->pair_grid.scale},
                      {"partial_wave", three_body->pair_grid.partial_wave}};
    t["spectator_grid"] = {{"n", three_body->spectator_grid.n},
                           {"scale", three_body->spectator_grid.scale},
                           {"partial_wave", three_body->spectator_grid.partial_wave}};
    t["mu_pair"] = three_body->mu_pair;
    t["mu_spectator"] = three_body->mu_spectator;
    t["components"] = json::array();
    for (const auto& comp : three_body->components)
      t["components"].push_back(
          {{"partition", comp.partition},
           {"strengths", comp.strengths},
           {"form_factor",
            form_factor_json(comp.form_factor_kind, comp.form_factor_scale)}});
    t["sweep"] = three_body->sweep;
    j["three_body"] = std::move(t);
  }
  j["density"] = {{"kind", density.kind},
                  {"alpha", density.alpha},
                  {"k0", density.k0},
                  {"form_factor",
                   form_factor_json(density.chi_kind, density.chi_scale)}};
  j["search"] = {{"lo", search.lo}, {"hi", search.hi}, {"starts", search.starts}};
  j["energies"] = energies;
  j["tolerances"] = {{"phase", tolerances.phase}, {"bind", tolerances.bind}};
  j["output"] = {{"dir", output_dir}};
  return j;
}

std::string fnv1a_hex(const std::string& bytes) {
  std::uint64_t h = 14695981039346656037ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return std::string(buf);
}

std::string ExperimentConfig::hash() const { return fnv1a_hex(to_json().dump()); }

std::string format_number(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return std::string(buf);
}

void write_csv(const std::string& path, const std::vector<std::string>& header,
               const std::vector<std::vector<double>>& rows) {
  std::ofstream out(path);
  if (!out) throw Error("cannot open for writing: " + path);
  for (std::size_t i = 0; i < header.size(); ++i)
    out << (i ? "," : "") << header[i];
  out << "\n";
  for (const auto& row : rows) {
    for (std::size_t i = 0; i < row.size(); ++i)
      out << (i ? "," : "") << format_number(row[i]);
    out << "\n";
  }
  if (!out) throw Error("write failed: " + path);
}

std::vector<std::vector<double>> read_csv(const std::string& path,
                                          std::vector<std::string>* header) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open for reading: " + path);
  std::vector<std::vector<double>> rows;
  std::string line;
  bool first = true;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::stringstream ss(line);
    std::string cell;
    if (first) {
      first = false;
      if (header) {
        while (std::getline(ss, cell, ',')) header->push_back(cell);
        continue;
      }
      continue;  // header line is always present in our artifacts
    }
    std::vector<double> row;
    while (std::getline(ss, cell, ',')) row.push_back(std::stod(cell));
    rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace scatteq
