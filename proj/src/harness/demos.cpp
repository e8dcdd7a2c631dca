#include "harness_internal.hpp"

namespace plab::harness {

namespace {

struct Demo {
  const char* name;
  const char* spec;
};

const Demo kDemos[] = {
    {"invex-gd", R"({
  "name": "invex-gd",
  "problem": {"kind": "invex"},
  "x0": [2.0],
  "solvers": [{"algorithm": "gd", "config": {"iters": 500}}],
  "certify": [{"theorem": "T1", "mu": "exact"}]
})"},
    {"rankdef-ls-gd", R"({
  "name": "rankdef-ls-gd",
  "problem": {"kind": "rank-deficient-ls", "params": {"m": 20, "d": 10, "r": 6}, "seed": 7},
  "solvers": [{"algorithm": "gd", "config": {"iters": 300}}],
  "certify": [{"theorem": "T1", "mu": "exact"}]
})"},
    {"cd-random-vs-gs", R"({
  "name": "cd-random-vs-gs",
  "problem": {"kind": "quadratic", "params": {"diag": [1, 2, 4, 8, 16]}},
  "solvers": [
    {"algorithm": "cd-random", "config": {"iters": 250, "seed": 1, "trials": 2000}},
    {"algorithm": "cd-gs", "config": {"iters": 250}}
  ],
  "conditions": {"count": 10000, "seed": 3},
  "certify": [
    {"theorem": "T3", "mu": "exact", "checkpoints": [10, 50, 250]},
    {"theorem": "GS", "mu": "estimated"}
  ]
})"},
    {"sign-gd", R"({
  "name": "sign-gd",
  "problem": {"kind": "quadratic", "params": {"diag": [1, 4]}},
  "x0": [1.0, 1.0],
  "solvers": [{"algorithm": "sign-gd", "config": {"iters": 200, "weights": "auto"}}],
  "conditions": {"count": 10000, "seed": 5},
  "certify": [{"theorem": "SIGN", "mu": "estimated"}]
})"},
    {"sgd-two-schedules", R"({
  "name": "sgd-two-schedules",
  "problem": {"kind": "finite-sum-ls", "matrices": {"A": [[1.0], [1.0]], "b": [1.0, -1.0]}},
  "x0": [3.0],
  "solvers": [
    {"algorithm": "sgd", "config": {"iters": 2000, "seed": 11, "trials": 100, "schedule": "decreasing", "mu": "exact"}},
    {"algorithm": "sgd", "config": {"iters": 2000, "seed": 12, "trials": 100, "schedule": "constant", "alpha": 0.25}}
  ],
  "certify": [
    {"theorem": "T4-dec", "mu": "exact", "checkpoints": [10, 100, 1000, 2000]},
    {"theorem": "T4-const", "mu": "exact", "checkpoints": [10, 100, 1000, 2000]}
  ]
})"},
    {"svrg-finite-sum", R"({
  "name": "svrg-finite-sum",
  "problem": {"kind": "finite-sum-ls", "params": {"n": 10, "d": 3}, "seed": 3},
  "solvers": [{"algorithm": "svrg", "config": {"seed": 21, "trials": 100, "m": "auto", "alpha_scale": 0.1, "outer": 12}}],
  "certify": [{"theorem": "SVRG", "mu": "exact", "checkpoints": [1, 2, 4, 8, 12]}]
})"},
    {"l1ls-proxgrad", R"({
  "name": "l1ls-proxgrad",
  "problem": {"kind": "l1-least-squares", "params": {"m": 30, "d": 10, "lambda": 0.1}, "seed": 5},
  "solvers": [{"algorithm": "prox-gd", "config": {"iters": 200}}],
  "conditions": {"count": 10000, "seed": 9},
  "certify": [{"theorem": "T5", "mu": "estimated"}]
})"},
    {"svm-dual-proxcd", R"({
  "name": "svm-dual-proxcd",
  "problem": {"kind": "svm-dual", "params": {"n": 20, "dim": 5, "lambda_svm": 1.0, "U": 1.0}, "seed": 11},
  "solvers": [{"algorithm": "prox-cd", "config": {"iters": 1000, "seed": 31, "trials": 100}}],
  "conditions": {"count": 10000, "seed": 13},
  "certify": [{"theorem": "T6", "mu": "estimated", "checkpoints": [10, 100, 500, 1000]}]
})"},
    {"condition-chain", R"({
  "name": "condition-chain",
  "problem": {"kind": "rank-deficient-ls", "params": {"m": 20, "d": 10, "r": 6}, "seed": 7},
  "solvers": [{"algorithm": "gd", "config": {"iters": 100}}],
  "conditions": {"count": 10000, "seed": 17, "chain": true},
  "certify": [{"theorem": "T1", "mu": "estimated"}]
})"},
};

}  // namespace

std::vector<std::string> list_demos() {
  std::vector<std::string> names;
  for (const auto& d : kDemos) names.emplace_back(d.name);
  return names;
}

json demo_spec(const std::string& name) {
  for (const auto& d : kDemos)
    if (name == d.name) return json::parse(d.spec);
  throw SpecError("unknown demo \"" + name + "\" (see `plab list`)");
}

}  // namespace plab::harness
