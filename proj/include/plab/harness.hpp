#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "plab/certify.hpp"
#include "plab/composite.hpp"
#include "plab/conditions.hpp"
#include "plab/objective.hpp"

namespace plab::harness {

using nlohmann::json;

// Malformed spec or unreadable input; maps to exit code 2.
class SpecError : public Error {
 public:
  using Error::Error;
};

struct ProblemSpec {
  std::string kind;
  json params = json::object();
  json matrices = json::object();
  std::map<std::string, std::filesystem::path> csv;
  std::uint64_t seed = 0;
};

struct MuChoice {
  enum class Kind { Default, Exact, Estimated, Value };
  Kind kind = Kind::Default;
  double value = 0.0;
};

struct SolverSpec {
  std::string algorithm;
  Index iters = 100;
  std::uint64_t seed = 0;
  std::size_t trials = 1;
  bool exact_line_search = false;
  std::optional<Vector> weights;  // sign-gd; "auto" when unset
  std::string schedule = "decreasing";
  std::optional<double> alpha;
  std::optional<double> alpha_scale;  // alpha = alpha_scale / L
  MuChoice schedule_mu;               // sgd decreasing schedule
  std::optional<Index> m;             // svrg; auto when unset
  Index outer = 10;
  double step_scale = 1.0;
};

struct CertifySpec {
  TheoremTag tag = TheoremTag::T1;
  MuChoice mu;
  std::optional<std::size_t> run;  // index into solvers; default: every compatible run
  std::optional<std::vector<std::int64_t>> checkpoints;
};

struct ConditionsSpec {
  bool enabled = false;
  CloudSpec cloud;
  bool include_iterates = true;
  std::size_t iterate_trials = 50;  // stochastic runs contribute this many trials
  bool chain = false;
};

struct ExperimentSpec {
  std::string name = "experiment";
  ProblemSpec problem;
  std::optional<Vector> x0;
  std::vector<SolverSpec> solvers;
  ConditionsSpec conditions;
  std::vector<CertifySpec> certify;
  std::optional<std::string> output;
};

// Throws SpecError on unknown tags, bad types, or missing fields. Relative
// CSV paths resolve against base_dir.
ExperimentSpec parse_spec(const json& doc, const std::filesystem::path& base_dir = {});
ExperimentSpec load_spec(const std::filesystem::path& path);

const std::vector<std::string>& algorithm_tags();
const std::vector<std::string>& problem_kinds();

struct BuiltProblem {
  std::string kind;
  std::shared_ptr<const SmoothObjective> smooth;
  std::optional<CompositeProblem> composite;  // l1-least-squares, svm-dual
  std::optional<Matrix> hessian;              // quadratic kinds
  Vector x0;
};

BuiltProblem build_problem(const ProblemSpec& spec);

struct RunOverrides {
  std::optional<std::filesystem::path> out;
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> trials;
};

struct RunResult {
  int exit_code = 0;  // 0 all pass/vacuous, 1 some failure
  std::filesystem::path output_dir;
  json summary;
};

// Runs every solver, estimates conditions, certifies, and writes
// runs/<i>-<algorithm>/trace.csv, conditions.json, certificates.json and
// summary.json under the output directory.
RunResult run_experiment(const ExperimentSpec& spec, const RunOverrides& overrides = {});

std::vector<std::string> list_demos();
// Throws SpecError for an unknown name.
json demo_spec(const std::string& name);

json to_json(const RateCertificate& cert);
json to_json(const ConditionReport& report);
json to_json(const ChainVerdict& verdict);

// Shortest round-trip decimal; "nan", "inf", "-inf" for non-finite values.
std::string format_double(double v);
std::string trace_csv(const std::vector<IterateTrace>& traces);

// Comma-separated numeric matrix without header.
Matrix read_csv_matrix(const std::filesystem::path& path);

}  // namespace plab::harness
