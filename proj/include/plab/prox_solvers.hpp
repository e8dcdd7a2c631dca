#pragma once

#include <cstdint>
#include <vector>

#include "plab/composite.hpp"
#include "plab/smooth_solvers.hpp"
#include "plab/trace.hpp"

namespace plab {

struct ProxSolverConfig {
  Index iters = 100;
  double step_scale = 1.0;  // step = step_scale / L, i.e. lambda = L / step_scale
  std::uint64_t seed = 0;
  std::size_t trials = 1;
  RunOptions run;
};

// x_{k+1} = prox(x_k - grad f(x_k) / lambda, 1 / lambda). An infeasible x0
// is recorded with an infinite gap and made feasible by the first step. The
// recorded step is 1 / lambda.
IterateTrace proximal_gradient(const CompositeProblem& problem, const Vector& x0,
                               const ProxSolverConfig& cfg);

// Uniform coordinate i, x_i <- prox_i(x_i - grad_i f(x) / lambda, 1 / lambda)
// with lambda = L / step_scale (global L). Requires a separable regularizer.
IterateTrace proximal_coordinate_descent(const CompositeProblem& problem, const Vector& x0,
                                         const ProxSolverConfig& cfg);
// cfg.trials runs with seeds cfg.seed + t.
std::vector<IterateTrace> proximal_coordinate_descent_trials(const CompositeProblem& problem,
                                                             const Vector& x0,
                                                             const ProxSolverConfig& cfg);

// min_t [t grad_i f(x) + (lambda/2) t^2 + g_i(x_i + t) - g_i(x_i)], via the univariate prox.
double coordinate_surrogate_min(const CompositeProblem& problem, const Vector& x, const Vector& grad,
                                Index i, double lambda);
// min_y [<grad f(x), y - x> + (lambda/2) ||y - x||^2 + g(y) - g(x)], via the full prox.
double joint_surrogate_min(const CompositeProblem& problem, const Vector& x, const Vector& grad,
                           double lambda);

// Gap recorded in traces: F(x) - F* (+inf outside dom g), NaN when F* is unknown.
double recorded_gap(const CompositeProblem& problem, const Vector& x);

}  // namespace plab
