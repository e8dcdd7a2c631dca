#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>
#include <sstream>

#include "plab/harness.hpp"

using namespace plab;
using namespace plab::harness;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / ("plab-test-" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text(const fs::path& p, const std::string& text) {
  std::ofstream out(p, std::ios::binary);
  out << text;
}

json minimal() {
  return json::parse(R"({
    "problem": {"kind": "quadratic", "params": {"diag": [1, 2]}},
    "solvers": [{"algorithm": "gd", "config": {"iters": 10}}]
  })");
}

}  // namespace

TEST_SUITE("harness") {

TEST_CASE("spec parsing defaults") {
  const auto spec = parse_spec(minimal());
  CHECK(spec.name == "experiment");
  CHECK(spec.problem.kind == "quadratic");
  REQUIRE(spec.solvers.size() == 1);
  CHECK(spec.solvers[0].iters == 10);
  CHECK(spec.solvers[0].trials == 1);
  CHECK_FALSE(spec.conditions.enabled);
  CHECK(spec.certify.empty());
  CHECK(algorithm_tags().size() == 9);
  CHECK(problem_kinds().size() == 8);
}

TEST_CASE("spec parsing rejects bad input") {
  auto doc = minimal();
  doc["solvers"][0]["algorithm"] = "adam";
  CHECK_THROWS_AS(parse_spec(doc), SpecError);

  doc = minimal();
  doc["solver"] = json::array();
  CHECK_THROWS_AS(parse_spec(doc), SpecError);

  doc = minimal();
  doc["problem"]["kind"] = "boosting";
  CHECK_THROWS_AS(parse_spec(doc), SpecError);

  doc = minimal();
  doc["certify"] = json::array({"T2"});
  CHECK_THROWS_AS(parse_spec(doc), SpecError);

  doc = minimal();
  doc["solvers"][0]["config"]["trials"] = 0;
  CHECK_THROWS_AS(parse_spec(doc), SpecError);

  doc = minimal();
  doc["solvers"][0] = json::parse(R"({"algorithm": "sgd", "config": {"schedule": "constant"}})");
  CHECK_THROWS_AS(parse_spec(doc), SpecError);

  doc = minimal();
  doc["solvers"].clear();
  CHECK_THROWS_AS(parse_spec(doc), SpecError);

  doc = minimal();
  doc["certify"] = json::parse(R"([{"theorem": "T1", "mu": -1}])");
  CHECK_THROWS_AS(parse_spec(doc), SpecError);

  CHECK_THROWS_AS(parse_spec(json::array()), SpecError);
  CHECK_THROWS_AS(demo_spec("no-such-demo"), SpecError);
  CHECK_THROWS_AS(load_spec("/nonexistent/spec.json"), SpecError);
}

TEST_CASE("CSV matrices") {
  const auto dir = scratch("csv");
  write_text(dir / "A.csv", "1,2\n3.5,-4e-1\n");
  const Matrix A = read_csv_matrix(dir / "A.csv");
  REQUIRE(A.rows() == 2);
  REQUIRE(A.cols() == 2);
  CHECK(A(1, 0) == 3.5);
  CHECK(A(1, 1) == -0.4);

  write_text(dir / "ragged.csv", "1,2\n3\n");
  CHECK_THROWS_AS(read_csv_matrix(dir / "ragged.csv"), SpecError);
  write_text(dir / "text.csv", "1,x\n");
  CHECK_THROWS_AS(read_csv_matrix(dir / "text.csv"), SpecError);
  write_text(dir / "empty.csv", "");
  CHECK_THROWS_AS(read_csv_matrix(dir / "empty.csv"), SpecError);
  CHECK_THROWS_AS(read_csv_matrix(dir / "missing.csv"), SpecError);

  // A least-squares problem read from CSV, with the path relative to the spec.
  write_text(dir / "b.csv", "1\n2\n");
  auto doc = json::parse(R"({
    "problem": {"kind": "least-squares", "csv": {"A": "A.csv", "b": "b.csv"}},
    "solvers": [{"algorithm": "gd", "config": {"iters": 3}}]
  })");
  const auto spec = parse_spec(doc, dir);
  const auto built = build_problem(spec.problem);
  CHECK(built.smooth->dimension() == 2);
}

TEST_CASE("format_double round-trips") {
  for (double v : {0.0, 1.0, -2.5, 0.1, 1.0 / 3.0, 6.02214076e23, 5e-324,
                   std::numeric_limits<double>::max()}) {
    const std::string s = format_double(v);
    CHECK(std::strtod(s.c_str(), nullptr) == v);
  }
  CHECK(format_double(std::numeric_limits<double>::infinity()) == "inf");
  CHECK(format_double(-std::numeric_limits<double>::infinity()) == "-inf");
  CHECK(format_double(std::nan("")) == "nan");
}

TEST_CASE("every demo parses") {
  const auto names = list_demos();
  CHECK(names.size() == 9);
  for (const auto& n : names) {
    CAPTURE(n);
    CHECK_NOTHROW(parse_spec(demo_spec(n)));
  }
}

TEST_CASE("running a demo writes its outputs") {
  const auto dir = scratch("invex");
  RunOverrides ov;
  ov.out = dir;
  const auto res = run_experiment(parse_spec(demo_spec("invex-gd")), ov);
  CHECK(res.exit_code == 0);
  CHECK(fs::exists(dir / "summary.json"));
  CHECK(fs::exists(dir / "certificates.json"));
  CHECK(fs::exists(dir / "runs" / "0-gd" / "trace.csv"));
  const auto summary = json::parse(slurp(dir / "summary.json"));
  CHECK(summary["all_passed"] == true);
  CHECK(summary["certificates"][0]["verdict"] == "pass");
  CHECK(summary["runs"][0]["records"] == 501);
}

TEST_CASE("summary verdict is the conjunction of certificates") {
  auto doc = json::parse(R"({
    "problem": {"kind": "quadratic", "params": {"diag": [1, 4]}},
    "x0": [1, 1],
    "solvers": [{"algorithm": "gd", "config": {"iters": 20}}],
    "certify": [{"theorem": "T1", "mu": "exact"}, {"theorem": "T1", "mu": 3.9}]
  })");
  const auto dir = scratch("conj");
  RunOverrides ov;
  ov.out = dir;
  const auto res = run_experiment(parse_spec(doc), ov);
  CHECK(res.exit_code == 1);
  CHECK(res.summary["all_passed"] == false);
  CHECK(res.summary["certificates"][0]["verdict"] == "pass");
  CHECK(res.summary["certificates"][1]["verdict"] == "fail");
}

TEST_CASE("a vacuous certificate is not a failure") {
  auto doc = json::parse(R"({
    "problem": {"kind": "finite-sum-ls", "matrices": {"A": [[1.0], [1.0]], "b": [1.0, -1.0]}},
    "x0": [3.0],
    "solvers": [{"algorithm": "sgd", "config": {"iters": 50, "trials": 30, "schedule": "constant", "alpha": 0.6}}],
    "certify": [{"theorem": "T4-const", "mu": "exact"}]
  })");
  const auto dir = scratch("vacuous");
  RunOverrides ov;
  ov.out = dir;
  const auto res = run_experiment(parse_spec(doc), ov);
  CHECK(res.exit_code == 0);
  CHECK(res.summary["certificates"][0]["verdict"] == "vacuous");
  CHECK_FALSE(res.summary["warnings"].empty());
}

TEST_CASE("reruns are byte-identical") {
  const auto spec = parse_spec(demo_spec("svm-dual-proxcd"));
  RunOverrides ov;
  ov.trials = 30;
  ov.out = scratch("rerun-a");
  run_experiment(spec, ov);
  ov.out = scratch("rerun-b");
  run_experiment(spec, ov);
  const fs::path a = fs::temp_directory_path() / "plab-test-rerun-a";
  const fs::path b = fs::temp_directory_path() / "plab-test-rerun-b";
  for (const char* f : {"runs/0-prox-cd/trace.csv", "certificates.json", "conditions.json", "summary.json"}) {
    CAPTURE(f);
    const std::string sa = slurp(a / f);
    CHECK_FALSE(sa.empty());
    CHECK(sa == slurp(b / f));
  }
}

TEST_CASE("seed override changes stochastic output") {
  const auto spec = parse_spec(demo_spec("svm-dual-proxcd"));
  RunOverrides ov;
  ov.trials = 30;
  ov.out = scratch("seed-a");
  run_experiment(spec, ov);
  ov.seed = 1234;
  ov.out = scratch("seed-b");
  run_experiment(spec, ov);
  CHECK(slurp(fs::temp_directory_path() / "plab-test-seed-a/runs/0-prox-cd/trace.csv") !=
        slurp(fs::temp_directory_path() / "plab-test-seed-b/runs/0-prox-cd/trace.csv"));
}

}  // TEST_SUITE
