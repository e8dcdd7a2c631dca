#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "plab/objective.hpp"
#include "plab/trace.hpp"

namespace plab {

struct RunOptions {
  bool store_points = true;
};

// x_{k+1} = x_k - grad f(x_k) / L. With exact_line_search the step is
// g'g / g'Hg, which needs obj.curvature() (quadratics only).
IterateTrace gradient_descent(const SmoothObjective& obj, const Vector& x0, Index iters,
                              bool exact_line_search = false, RunOptions opts = {});

// Uniform coordinate, step 1/L with the global L.
IterateTrace coordinate_descent_random(const SmoothObjective& obj, const Vector& x0, Index iters,
                                       std::uint64_t seed, RunOptions opts = {});
std::vector<IterateTrace> coordinate_descent_random_trials(const SmoothObjective& obj,
                                                           const Vector& x0, Index iters,
                                                           std::uint64_t base_seed,
                                                           std::size_t trials,
                                                           RunOptions opts = {});

// i ~ L_i / sum_j L_j, step 1/L_i.
IterateTrace coordinate_descent_lipschitz_sampled(const SmoothObjective& obj, const Vector& x0,
                                                  Index iters, std::uint64_t seed,
                                                  RunOptions opts = {});
std::vector<IterateTrace> coordinate_descent_lipschitz_sampled_trials(
    const SmoothObjective& obj, const Vector& x0, Index iters, std::uint64_t base_seed,
    std::size_t trials, RunOptions opts = {});

// argmax_j |g_j|, lowest index on ties.
Index gauss_southwell_index(const Vector& grad);

// Greedy coordinate, step 1/L with the global L.
IterateTrace coordinate_descent_gs(const SmoothObjective& obj, const Vector& x0, Index iters,
                                   RunOptions opts = {});

// ||z||_{L^-1[1]} = sum_i |z_i| / sqrt(L_i).
double dual_weighted_norm(const Vector& z, const Vector& weights);
// ||z||_{L[inf]} = max_i sqrt(L_i) |z_i|.
double primal_weighted_norm(const Vector& z, const Vector& weights);

// Weights L_i = d * sum_j |H_ij|, which make x -> Hx 1-Lipschitz from the
// L[inf] norm to the L^-1[1] norm.
Vector sign_weights_for_quadratic(const Matrix& H);

struct WeightContractCheck {
  double worst_ratio = 0.0;  // max ||grad f(x) - grad f(y)||_{L^-1[1]} / ||x - y||_{L[inf]}
  Index pairs = 0;
  Index violations = 0;  // pairs with ratio > 1 + 1e-9
};

// Samples pairs in center +- radius and measures the weighted Lipschitz ratio.
WeightContractCheck check_sign_weights(const SmoothObjective& obj, const Vector& weights,
                                       const Vector& center, double radius, Index samples,
                                       std::uint64_t seed);

// x_{k+1} = x_k - ||g||_{L^-1[1]} Lambda sign(g), Lambda = diag(1/sqrt(L_i)).
// Without explicit weights, L_i = d L for every i, which satisfies the
// weighted contract for any L-smooth f. The recorded step is ||g||_{L^-1[1]}.
IterateTrace sign_gradient_descent(const SmoothObjective& obj, const Vector& x0, Index iters,
                                   std::optional<Vector> weights = std::nullopt,
                                   RunOptions opts = {});

class SgdSchedule {
 public:
  enum class Kind { Decreasing, Constant };

  // alpha_k = (2k + 1) / (2 mu (k + 1)^2).
  static SgdSchedule decreasing(double mu);
  static SgdSchedule constant(double alpha);

  Kind kind() const { return kind_; }
  double mu() const { return value_; }
  double alpha() const { return value_; }
  double step(Index k) const;

 private:
  SgdSchedule(Kind kind, double value) : kind_(kind), value_(value) {}
  Kind kind_;
  double value_;
};

// x_{k+1} = x_k - alpha_k grad f_{i_k}(x_k) with i_k uniform. Trial t uses
// seed base_seed + t.
std::vector<IterateTrace> sgd(const SmoothObjective& obj, const Vector& x0, Index iters,
                              const SgdSchedule& schedule, std::uint64_t base_seed,
                              std::size_t trials, RunOptions opts = {});

struct SvrgConfig {
  Index inner_length = 0;  // m
  double alpha = 0.0;
  Index outer_count = 0;
  std::optional<double> mu;  // PL constant, used only to check the contraction factor
};

// (1 / (1 - 2 alpha L)) (1 / (m mu alpha) + 2 L alpha); +inf when 2 alpha L >= 1.
double svrg_contraction(double mu, double L, double alpha, Index m);

// Records the outer iterates x^s. Each outer step draws the index t* of the
// retained inner iterate uniformly from {1..m} before the inner loop, then the
// m component indices. L is the shared component Lipschitz constant.
IterateTrace svrg(const SmoothObjective& obj, const Vector& x0, const SvrgConfig& cfg,
                  std::uint64_t seed, RunOptions opts = {});
std::vector<IterateTrace> svrg_trials(const SmoothObjective& obj, const Vector& x0,
                                      const SvrgConfig& cfg, std::uint64_t base_seed,
                                      std::size_t trials, RunOptions opts = {});

// Gap recorded in traces: f(x) - f* when f* is known, NaN otherwise.
double recorded_gap(const SmoothObjective& obj, const Vector& x);

}  // namespace plab
