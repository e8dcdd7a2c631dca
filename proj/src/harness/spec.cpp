#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>

#include "harness_internal.hpp"

namespace plab::harness {

namespace {

const std::vector<std::string> kAlgorithms = {"gd",  "cd-random", "cd-lipschitz", "cd-gs", "sign-gd",
                                              "sgd", "svrg",      "prox-gd",      "prox-cd"};

const std::vector<std::string> kProblemKinds = {
    "invex",  "quadratic", "least-squares", "rank-deficient-ls", "finite-sum-ls",
    "logistic", "l1-least-squares", "svm-dual"};

void reject_unknown_keys(const json& obj, std::initializer_list<const char*> allowed,
                         const std::string& where) {
  for (auto it = obj.begin(); it != obj.end(); ++it) {
    if (std::none_of(allowed.begin(), allowed.end(),
                     [&](const char* a) { return it.key() == a; }))
      throw SpecError(where + ": unknown key \"" + it.key() + "\"");
  }
}

MuChoice parse_mu(const json& v, const std::string& where) {
  MuChoice mu;
  if (v.is_number()) {
    mu.kind = MuChoice::Kind::Value;
    mu.value = v.get<double>();
    if (!(mu.value > 0.0)) throw SpecError(where + ": mu must be positive");
  } else if (v.is_string() && v.get<std::string>() == "exact") {
    mu.kind = MuChoice::Kind::Exact;
  } else if (v.is_string() && v.get<std::string>() == "estimated") {
    mu.kind = MuChoice::Kind::Estimated;
  } else {
    throw SpecError(where + ": mu must be a number, \"exact\" or \"estimated\"");
  }
  return mu;
}

SolverSpec parse_solver(const json& j, std::size_t idx) {
  const std::string where = "solvers[" + std::to_string(idx) + "]";
  if (!j.is_object()) throw SpecError(where + ": expected an object");
  reject_unknown_keys(j, {"algorithm", "config"}, where);
  SolverSpec s;
  s.algorithm = get_string(j, "algorithm", where);
  if (std::find(kAlgorithms.begin(), kAlgorithms.end(), s.algorithm) == kAlgorithms.end())
    throw SpecError(where + ": unknown algorithm \"" + s.algorithm + "\"");
  const json cfg = j.value("config", json::object());
  if (!cfg.is_object()) throw SpecError(where + ".config: expected an object");
  const std::string cw = where + ".config";
  const auto& a = s.algorithm;
  if (a == "gd") {
    reject_unknown_keys(cfg, {"iters", "exact_line_search"}, cw);
  } else if (a == "cd-random" || a == "cd-lipschitz") {
    reject_unknown_keys(cfg, {"iters", "seed", "trials"}, cw);
  } else if (a == "cd-gs") {
    reject_unknown_keys(cfg, {"iters"}, cw);
  } else if (a == "sign-gd") {
    reject_unknown_keys(cfg, {"iters", "weights"}, cw);
  } else if (a == "sgd") {
    reject_unknown_keys(cfg, {"iters", "seed", "trials", "schedule", "alpha", "alpha_scale", "mu"}, cw);
  } else if (a == "svrg") {
    reject_unknown_keys(cfg, {"seed", "trials", "m", "alpha", "alpha_scale", "outer"}, cw);
  } else if (a == "prox-gd") {
    reject_unknown_keys(cfg, {"iters", "step_scale"}, cw);
  } else if (a == "prox-cd") {
    reject_unknown_keys(cfg, {"iters", "seed", "trials", "step_scale"}, cw);
  }
  s.iters = get_index(cfg, "iters", cw, 100);
  s.seed = get_u64(cfg, "seed", cw, 0);
  s.trials = static_cast<std::size_t>(get_index(cfg, "trials", cw, 1));
  if (s.trials < 1) throw SpecError(cw + ".trials: must be positive");
  if (cfg.contains("exact_line_search")) {
    if (!cfg["exact_line_search"].is_boolean())
      throw SpecError(cw + ".exact_line_search: expected a boolean");
    s.exact_line_search = cfg["exact_line_search"].get<bool>();
  }
  if (cfg.contains("weights")) {
    const json& w = cfg["weights"];
    if (w.is_string()) {
      if (w.get<std::string>() != "auto") throw SpecError(cw + ".weights: expected \"auto\" or array");
    } else {
      s.weights = json_vector(w, cw + ".weights");
    }
  }
  if (cfg.contains("schedule")) {
    s.schedule = get_string(cfg, "schedule", cw);
    if (s.schedule != "decreasing" && s.schedule != "constant")
      throw SpecError(cw + ".schedule: expected \"decreasing\" or \"constant\"");
  }
  if (cfg.contains("alpha")) s.alpha = get_positive(cfg, "alpha", cw);
  if (cfg.contains("alpha_scale")) s.alpha_scale = get_positive(cfg, "alpha_scale", cw);
  if (s.alpha && s.alpha_scale) throw SpecError(cw + ": give alpha or alpha_scale, not both");
  if (a == "sgd" && s.schedule == "constant" && !s.alpha && !s.alpha_scale)
    throw SpecError(cw + ": constant schedule needs alpha or alpha_scale");
  if (a == "svrg" && !s.alpha && !s.alpha_scale) throw SpecError(cw + ": svrg needs alpha or alpha_scale");
  if (cfg.contains("mu")) s.schedule_mu = parse_mu(cfg["mu"], cw + ".mu");
  if (cfg.contains("m")) {
    if (!(cfg["m"].is_string() && cfg["m"].get<std::string>() == "auto")) {
      s.m = get_index(cfg, "m", cw, 0);
      if (*s.m < 1) throw SpecError(cw + ".m: must be positive");
    }
  }
  s.outer = get_index(cfg, "outer", cw, 10);
  if (cfg.contains("step_scale")) {
    s.step_scale = get_positive(cfg, "step_scale", cw);
    if (s.step_scale > 1.0) throw SpecError(cw + ".step_scale: must lie in (0, 1]");
  }
  if (s.iters < 0 || s.outer < 0) throw SpecError(cw + ": iteration counts must be non-negative");
  return s;
}

CertifySpec parse_certify(const json& j, std::size_t idx, std::size_t solver_count) {
  const std::string where = "certify[" + std::to_string(idx) + "]";
  CertifySpec c;
  std::string name;
  if (j.is_string()) {
    name = j.get<std::string>();
  } else if (j.is_object()) {
    reject_unknown_keys(j, {"theorem", "mu", "run", "checkpoints"}, where);
    name = get_string(j, "theorem", where);
    if (j.contains("mu")) c.mu = parse_mu(j["mu"], where + ".mu");
    if (j.contains("run")) {
      const Index r = get_index(j, "run", where, 0);
      if (r < 0 || static_cast<std::size_t>(r) >= solver_count)
        throw SpecError(where + ".run: no such solver");
      c.run = static_cast<std::size_t>(r);
    }
    if (j.contains("checkpoints")) {
      if (!j["checkpoints"].is_array()) throw SpecError(where + ".checkpoints: expected an array");
      std::vector<std::int64_t> ks;
      for (const auto& k : j["checkpoints"]) {
        if (!k.is_number_integer() || k.get<std::int64_t>() < 0)
          throw SpecError(where + ".checkpoints: expected non-negative integers");
        ks.push_back(k.get<std::int64_t>());
      }
      c.checkpoints = std::move(ks);
    }
  } else {
    throw SpecError(where + ": expected a theorem tag or an object");
  }
  const auto tag = parse_theorem_tag(name);
  if (!tag) throw SpecError(where + ": unknown theorem \"" + name + "\"");
  c.tag = *tag;
  return c;
}

}  // namespace

const std::vector<std::string>& algorithm_tags() { return kAlgorithms; }
const std::vector<std::string>& problem_kinds() { return kProblemKinds; }

std::string get_string(const json& j, const char* key, const std::string& where) {
  if (!j.contains(key) || !j[key].is_string())
    throw SpecError(where + "." + key + ": expected a string");
  return j[key].get<std::string>();
}

double get_number(const json& j, const char* key, const std::string& where) {
  if (!j.contains(key) || !j[key].is_number())
    throw SpecError(where + "." + key + ": expected a number");
  return j[key].get<double>();
}

double get_number(const json& j, const char* key, const std::string& where, double fallback) {
  return j.contains(key) ? get_number(j, key, where) : fallback;
}

double get_positive(const json& j, const char* key, const std::string& where) {
  const double v = get_number(j, key, where);
  if (!(v > 0.0)) throw SpecError(where + "." + key + ": must be positive");
  return v;
}

Index get_index(const json& j, const char* key, const std::string& where, Index fallback) {
  if (!j.contains(key)) return fallback;
  if (!j[key].is_number_integer()) throw SpecError(where + "." + key + ": expected an integer");
  return j[key].get<Index>();
}

std::uint64_t get_u64(const json& j, const char* key, const std::string& where,
                      std::uint64_t fallback) {
  if (!j.contains(key)) return fallback;
  if (!j[key].is_number_unsigned() && !(j[key].is_number_integer() && j[key].get<std::int64_t>() >= 0))
    throw SpecError(where + "." + key + ": expected a non-negative integer");
  return j[key].get<std::uint64_t>();
}

Vector json_vector(const json& j, const std::string& where) {
  if (!j.is_array() || j.empty()) throw SpecError(where + ": expected a non-empty numeric array");
  Vector v(static_cast<Index>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i) {
    if (!j[i].is_number()) throw SpecError(where + ": expected a non-empty numeric array");
    v[static_cast<Index>(i)] = j[i].get<double>();
  }
  return v;
}

Matrix json_matrix(const json& j, const std::string& where) {
  if (!j.is_array() || j.empty() || !j[0].is_array() || j[0].empty())
    throw SpecError(where + ": expected a non-empty array of rows");
  const std::size_t cols = j[0].size();
  Matrix M(static_cast<Index>(j.size()), static_cast<Index>(cols));
  for (std::size_t r = 0; r < j.size(); ++r) {
    if (!j[r].is_array() || j[r].size() != cols) throw SpecError(where + ": rows must be rectangular");
    for (std::size_t c = 0; c < cols; ++c) {
      if (!j[r][c].is_number()) throw SpecError(where + ": non-numeric entry");
      M(static_cast<Index>(r), static_cast<Index>(c)) = j[r][c].get<double>();
    }
  }
  return M;
}

Matrix read_csv_matrix(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw SpecError("cannot read CSV file " + path.string());
  std::vector<std::vector<double>> rows;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.find_first_not_of(" \t") == std::string::npos) continue;
    std::vector<double> row;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) {
      const auto first = cell.find_first_not_of(" \t");
      const auto last = cell.find_last_not_of(" \t");
      if (first == std::string::npos)
        throw SpecError(path.string() + ":" + std::to_string(lineno) + ": empty cell");
      const std::string token = cell.substr(first, last - first + 1);
      std::size_t used = 0;
      double v = 0.0;
      try {
        v = std::stod(token, &used);
      } catch (const std::exception&) {
        used = 0;
      }
      if (used != token.size())
        throw SpecError(path.string() + ":" + std::to_string(lineno) + ": non-numeric cell \"" +
                        token + "\"");
      row.push_back(v);
    }
    if (!rows.empty() && row.size() != rows.front().size())
      throw SpecError(path.string() + ":" + std::to_string(lineno) + ": ragged row");
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw SpecError(path.string() + ": empty CSV");
  Matrix M(static_cast<Index>(rows.size()), static_cast<Index>(rows.front().size()));
  for (std::size_t r = 0; r < rows.size(); ++r)
    for (std::size_t c = 0; c < rows[r].size(); ++c)
      M(static_cast<Index>(r), static_cast<Index>(c)) = rows[r][c];
  return M;
}

ExperimentSpec parse_spec(const json& doc, const std::filesystem::path& base_dir) {
  if (!doc.is_object()) throw SpecError("spec: expected a JSON object");
  reject_unknown_keys(doc, {"name", "problem", "x0", "solvers", "conditions", "certify", "output"},
                      "spec");
  ExperimentSpec spec;
  if (doc.contains("name")) spec.name = get_string(doc, "name", "spec");

  if (!doc.contains("problem") || !doc["problem"].is_object())
    throw SpecError("spec.problem: expected an object");
  const json& p = doc["problem"];
  reject_unknown_keys(p, {"kind", "params", "matrices", "csv", "seed"}, "problem");
  spec.problem.kind = get_string(p, "kind", "problem");
  if (std::find(kProblemKinds.begin(), kProblemKinds.end(), spec.problem.kind) == kProblemKinds.end())
    throw SpecError("problem: unknown kind \"" + spec.problem.kind + "\"");
  spec.problem.params = p.value("params", json::object());
  spec.problem.matrices = p.value("matrices", json::object());
  if (!spec.problem.params.is_object()) throw SpecError("problem.params: expected an object");
  if (!spec.problem.matrices.is_object()) throw SpecError("problem.matrices: expected an object");
  spec.problem.seed = get_u64(p, "seed", "problem", 0);
  if (p.contains("csv")) {
    if (!p["csv"].is_object()) throw SpecError("problem.csv: expected an object of paths");
    for (auto it = p["csv"].begin(); it != p["csv"].end(); ++it) {
      if (!it.value().is_string()) throw SpecError("problem.csv." + it.key() + ": expected a path");
      std::filesystem::path path = it.value().get<std::string>();
      if (path.is_relative() && !base_dir.empty()) path = base_dir / path;
      spec.problem.csv[it.key()] = path;
    }
  }

  if (doc.contains("x0")) spec.x0 = json_vector(doc["x0"], "spec.x0");

  if (!doc.contains("solvers") || !doc["solvers"].is_array() || doc["solvers"].empty())
    throw SpecError("spec.solvers: expected a non-empty array");
  for (std::size_t i = 0; i < doc["solvers"].size(); ++i)
    spec.solvers.push_back(parse_solver(doc["solvers"][i], i));

  if (doc.contains("conditions")) {
    const json& c = doc["conditions"];
    if (!c.is_object()) throw SpecError("spec.conditions: expected an object");
    reject_unknown_keys(c, {"count", "seed", "radius_factor", "lo", "hi", "include_iterates",
                            "iterate_trials", "chain"},
                        "conditions");
    spec.conditions.enabled = true;
    spec.conditions.cloud.count = get_index(c, "count", "conditions", 10000);
    if (spec.conditions.cloud.count < 0) throw SpecError("conditions.count: must be non-negative");
    spec.conditions.cloud.seed = get_u64(c, "seed", "conditions", 0);
    spec.conditions.cloud.radius_factor = get_number(c, "radius_factor", "conditions", 5.0);
    if (c.contains("lo")) spec.conditions.cloud.lo = json_vector(c["lo"], "conditions.lo");
    if (c.contains("hi")) spec.conditions.cloud.hi = json_vector(c["hi"], "conditions.hi");
    if (c.contains("include_iterates")) {
      if (!c["include_iterates"].is_boolean())
        throw SpecError("conditions.include_iterates: expected a boolean");
      spec.conditions.include_iterates = c["include_iterates"].get<bool>();
    }
    spec.conditions.iterate_trials =
        static_cast<std::size_t>(get_index(c, "iterate_trials", "conditions", 50));
    if (c.contains("chain")) {
      if (!c["chain"].is_boolean()) throw SpecError("conditions.chain: expected a boolean");
      spec.conditions.chain = c["chain"].get<bool>();
    }
  }

  if (doc.contains("certify")) {
    if (!doc["certify"].is_array()) throw SpecError("spec.certify: expected an array");
    for (std::size_t i = 0; i < doc["certify"].size(); ++i)
      spec.certify.push_back(parse_certify(doc["certify"][i], i, spec.solvers.size()));
  }
  if (doc.contains("output")) spec.output = get_string(doc, "output", "spec");
  return spec;
}

ExperimentSpec load_spec(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw SpecError("cannot read spec " + path.string());
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& e) {
    throw SpecError("spec " + path.string() + ": " + e.what());
  }
  return parse_spec(doc, path.parent_path());
}

}  // namespace plab::harness
