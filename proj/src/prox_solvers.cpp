#include "plab/prox_solvers.hpp"

#include <cmath>
#include <limits>

#include "plab/prox.hpp"
#include "plab/rng.hpp"
#include "plab/trials.hpp"

namespace plab {

namespace {

double effective_lambda(const CompositeProblem& problem, const ProxSolverConfig& cfg,
                        const char* who) {
  if (!(cfg.step_scale > 0.0 && cfg.step_scale <= 1.0))
    throw ConfigError(std::string(who) + ": step_scale must lie in (0, 1]");
  if (cfg.iters < 0) throw ConfigError(std::string(who) + ": iteration count must be non-negative");
  const double L = problem.lipschitz();
  if (!(L > 0.0) || !std::isfinite(L))
    throw ConfigError(std::string(who) + ": Lipschitz constant must be positive");
  return L / cfg.step_scale;
}

class Recorder {
 public:
  Recorder(const CompositeProblem& problem, std::string algorithm, const ProxSolverConfig& cfg,
           std::uint64_t seed)
      : problem_(problem), seed_(seed) {
    trace_.algorithm_tag = std::move(algorithm);
    trace_.problem_tag = problem.tag();
    trace_.store_points = cfg.run.store_points;
  }

  void record(Index k, const Vector& x, double step, std::optional<Index> index = std::nullopt) {
    if (!x.allFinite())
      throw EvaluationError(trace_.algorithm_tag + ": non-finite iterate at k = " +
                            std::to_string(k));
    IterateRecord r;
    r.k = k;
    r.objective = problem_.value(x);
    if (std::isnan(r.objective))
      throw EvaluationError(trace_.algorithm_tag + ": NaN objective at k = " + std::to_string(k));
    r.objective_gap = recorded_gap(problem_, x);
    r.step_size = step;
    r.selected_index = index;
    r.seed = seed_;
    trace_.append(r, x);
  }

  IterateTrace take() { return std::move(trace_); }

 private:
  const CompositeProblem& problem_;
  std::uint64_t seed_;
  IterateTrace trace_;
};

}  // namespace

double recorded_gap(const CompositeProblem& problem, const Vector& x) {
  if (!problem.optimum_value()) return std::numeric_limits<double>::quiet_NaN();
  return problem.optimality_gap(x);
}

IterateTrace proximal_gradient(const CompositeProblem& problem, const Vector& x0,
                               const ProxSolverConfig& cfg) {
  if (x0.size() != problem.dimension()) throw ConfigError("proximal_gradient: x0 dimension mismatch");
  const double lambda = effective_lambda(problem, cfg, "proximal_gradient");
  Recorder rec(problem, "prox-gd", cfg, 0);
  Vector x = x0;
  rec.record(0, x, 0.0);
  for (Index k = 0; k < cfg.iters; ++k) {
    x = prox::forward_backward_step(problem, x, lambda);
    rec.record(k + 1, x, 1.0 / lambda);
  }
  return rec.take();
}

IterateTrace proximal_coordinate_descent(const CompositeProblem& problem, const Vector& x0,
                                         const ProxSolverConfig& cfg) {
  const auto* sep = problem.reg().separable();
  if (!sep) throw ConfigError("proximal_coordinate_descent: regularizer is not separable");
  const Index d = problem.dimension();
  if (x0.size() != d) throw ConfigError("proximal_coordinate_descent: x0 dimension mismatch");
  const double lambda = effective_lambda(problem, cfg, "proximal_coordinate_descent");
  Rng rng(cfg.seed);
  Recorder rec(problem, "prox-cd", cfg, cfg.seed);
  Vector x = x0;
  rec.record(0, x, 0.0);
  for (Index k = 0; k < cfg.iters; ++k) {
    const Index i = rng.uniform_index(d);
    const double gi = problem.smooth().coord_gradient(x, i);
    x[i] = sep->coord_prox(i, x[i] - gi / lambda, 1.0 / lambda);
    rec.record(k + 1, x, 1.0 / lambda, i);
  }
  return rec.take();
}

std::vector<IterateTrace> proximal_coordinate_descent_trials(const CompositeProblem& problem,
                                                             const Vector& x0,
                                                             const ProxSolverConfig& cfg) {
  return run_trials(cfg.trials, cfg.seed, [&](std::uint64_t seed) {
    ProxSolverConfig one = cfg;
    one.seed = seed;
    return proximal_coordinate_descent(problem, x0, one);
  });
}

double coordinate_surrogate_min(const CompositeProblem& problem, const Vector& x, const Vector& grad,
                                Index i, double lambda) {
  const auto* sep = problem.reg().separable();
  if (!sep) throw ConfigError("coordinate_surrogate_min: regularizer is not separable");
  if (!(lambda > 0.0)) throw ConfigError("coordinate_surrogate_min: lambda must be positive");
  const double gxi = sep->coord_value(i, x[i]);
  if (gxi == kInfinity) throw DomainError("coordinate_surrogate_min: x outside dom g");
  const double yi = sep->coord_prox(i, x[i] - grad[i] / lambda, 1.0 / lambda);
  const double t = yi - x[i];
  return t * grad[i] + 0.5 * lambda * t * t + sep->coord_value(i, yi) - gxi;
}

double joint_surrogate_min(const CompositeProblem& problem, const Vector& x, const Vector& grad,
                           double lambda) {
  if (problem.reg().value(x) == kInfinity)
    throw DomainError("joint_surrogate_min: x outside dom g");
  const Vector y = prox::forward_backward_step(problem, x, grad, lambda);
  return prox::surrogate_value(problem, x, grad, y, lambda);
}

}  // namespace plab
