#include "plab/smooth_solvers.hpp"

#include <cmath>
#include <limits>

#include "plab/rng.hpp"
#include "plab/trials.hpp"

namespace plab {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

class Recorder {
 public:
  Recorder(const SmoothObjective& obj, std::string algorithm, RunOptions opts,
           std::uint64_t seed = 0)
      : obj_(obj), seed_(seed) {
    trace_.algorithm_tag = std::move(algorithm);
    trace_.problem_tag = obj.tag();
    trace_.store_points = opts.store_points;
  }

  void record(Index k, const Vector& x, double step, std::optional<Index> index = std::nullopt) {
    IterateRecord r;
    r.k = k;
    r.objective = obj_.value(x);
    if (!std::isfinite(r.objective) || !x.allFinite())
      throw EvaluationError(trace_.algorithm_tag + ": non-finite objective at k = " +
                            std::to_string(k));
    r.objective_gap = recorded_gap(obj_, x);
    r.step_size = step;
    r.selected_index = index;
    r.seed = seed_;
    trace_.append(r, x);
  }

  IterateTrace& trace() { return trace_; }
  IterateTrace take() { return std::move(trace_); }

 private:
  const SmoothObjective& obj_;
  std::uint64_t seed_;
  IterateTrace trace_;
};

void check_start(const SmoothObjective& obj, const Vector& x0, Index iters, const char* who) {
  if (obj.dimension() < 1) throw ConfigError(std::string(who) + ": dimension must be positive");
  if (x0.size() != obj.dimension()) throw ConfigError(std::string(who) + ": x0 dimension mismatch");
  if (iters < 0) throw ConfigError(std::string(who) + ": iteration count must be non-negative");
}

double checked_lipschitz(double L, const char* who) {
  if (!(L > 0.0) || !std::isfinite(L))
    throw ConfigError(std::string(who) + ": Lipschitz constant must be positive");
  return L;
}

Vector checked_coord_lipschitz(const SmoothObjective& obj, const char* who) {
  const auto Li = obj.coord_lipschitz();
  if (!Li) throw ConfigError(std::string(who) + ": coordinate Lipschitz constants required");
  for (Index i = 0; i < Li->size(); ++i)
    if (!((*Li)[i] > 0.0)) throw ConfigError(std::string(who) + ": every L_i must be positive");
  return *Li;
}

}  // namespace

double recorded_gap(const SmoothObjective& obj, const Vector& x) {
  if (!obj.optimum_value()) return kNaN;
  return obj.optimality_gap(x);
}

IterateTrace gradient_descent(const SmoothObjective& obj, const Vector& x0, Index iters,
                              bool exact_line_search, RunOptions opts) {
  check_start(obj, x0, iters, "gradient_descent");
  const double L = checked_lipschitz(obj.lipschitz(), "gradient_descent");
  Recorder rec(obj, exact_line_search ? "gd-exact" : "gd", opts);
  Vector x = x0;
  rec.record(0, x, 0.0);
  for (Index k = 0; k < iters; ++k) {
    const Vector g = obj.gradient(x);
    double step = 1.0 / L;
    if (exact_line_search) {
      const auto curv = obj.curvature(g);
      if (!curv) throw ConfigError("gradient_descent: exact line search needs a quadratic");
      const double gg = g.squaredNorm();
      step = (*curv > 0.0) ? gg / *curv : 0.0;
      x -= step * g;
    } else {
      x -= g / L;
    }
    rec.record(k + 1, x, step);
  }
  return rec.take();
}

IterateTrace coordinate_descent_random(const SmoothObjective& obj, const Vector& x0, Index iters,
                                       std::uint64_t seed, RunOptions opts) {
  check_start(obj, x0, iters, "coordinate_descent_random");
  const double L = checked_lipschitz(obj.lipschitz(), "coordinate_descent_random");
  const Index d = obj.dimension();
  Rng rng(seed);
  Recorder rec(obj, "cd-random", opts, seed);
  Vector x = x0;
  rec.record(0, x, 0.0);
  for (Index k = 0; k < iters; ++k) {
    const Index i = rng.uniform_index(d);
    x[i] -= obj.coord_gradient(x, i) / L;
    rec.record(k + 1, x, 1.0 / L, i);
  }
  return rec.take();
}

std::vector<IterateTrace> coordinate_descent_random_trials(const SmoothObjective& obj,
                                                           const Vector& x0, Index iters,
                                                           std::uint64_t base_seed,
                                                           std::size_t trials, RunOptions opts) {
  return run_trials(trials, base_seed, [&](std::uint64_t seed) {
    return coordinate_descent_random(obj, x0, iters, seed, opts);
  });
}

IterateTrace coordinate_descent_lipschitz_sampled(const SmoothObjective& obj, const Vector& x0,
                                                  Index iters, std::uint64_t seed,
                                                  RunOptions opts) {
  check_start(obj, x0, iters, "coordinate_descent_lipschitz_sampled");
  const Vector Li = checked_coord_lipschitz(obj, "coordinate_descent_lipschitz_sampled");
  const std::span<const double> weights(Li.data(), static_cast<std::size_t>(Li.size()));
  Rng rng(seed);
  Recorder rec(obj, "cd-lipschitz", opts, seed);
  Vector x = x0;
  rec.record(0, x, 0.0);
  for (Index k = 0; k < iters; ++k) {
    const Index i = rng.weighted_index(weights);
    x[i] -= obj.coord_gradient(x, i) / Li[i];
    rec.record(k + 1, x, 1.0 / Li[i], i);
  }
  return rec.take();
}

std::vector<IterateTrace> coordinate_descent_lipschitz_sampled_trials(
    const SmoothObjective& obj, const Vector& x0, Index iters, std::uint64_t base_seed,
    std::size_t trials, RunOptions opts) {
  return run_trials(trials, base_seed, [&](std::uint64_t seed) {
    return coordinate_descent_lipschitz_sampled(obj, x0, iters, seed, opts);
  });
}

Index gauss_southwell_index(const Vector& grad) {
  if (grad.size() == 0) throw ConfigError("gauss_southwell_index: empty gradient");
  Index best = 0;
  for (Index j = 1; j < grad.size(); ++j)
    if (std::abs(grad[j]) > std::abs(grad[best])) best = j;
  return best;
}

IterateTrace coordinate_descent_gs(const SmoothObjective& obj, const Vector& x0, Index iters,
                                   RunOptions opts) {
  check_start(obj, x0, iters, "coordinate_descent_gs");
  const double L = checked_lipschitz(obj.lipschitz(), "coordinate_descent_gs");
  Recorder rec(obj, "cd-gs", opts);
  Vector x = x0;
  rec.record(0, x, 0.0);
  for (Index k = 0; k < iters; ++k) {
    const Vector g = obj.gradient(x);
    const Index i = gauss_southwell_index(g);
    x[i] -= g[i] / L;
    rec.record(k + 1, x, 1.0 / L, i);
  }
  return rec.take();
}

double dual_weighted_norm(const Vector& z, const Vector& weights) {
  return (z.array().abs() / weights.array().sqrt()).sum();
}

double primal_weighted_norm(const Vector& z, const Vector& weights) {
  return (z.array().abs() * weights.array().sqrt()).maxCoeff();
}

Vector sign_weights_for_quadratic(const Matrix& H) {
  const double d = static_cast<double>(H.rows());
  Vector w = d * H.cwiseAbs().rowwise().sum();
  for (Index i = 0; i < w.size(); ++i)
    if (!(w[i] > 0.0)) throw ConfigError("sign_weights_for_quadratic: zero row in H");
  return w;
}

WeightContractCheck check_sign_weights(const SmoothObjective& obj, const Vector& weights,
                                       const Vector& center, double radius, Index samples,
                                       std::uint64_t seed) {
  const Index d = obj.dimension();
  if (weights.size() != d || center.size() != d)
    throw ConfigError("check_sign_weights: dimension mismatch");
  Rng rng(seed);
  WeightContractCheck out;
  for (Index s = 0; s < samples; ++s) {
    Vector x(d), y(d);
    for (Index i = 0; i < d; ++i) {
      x[i] = center[i] + rng.uniform(-radius, radius);
      y[i] = center[i] + rng.uniform(-radius, radius);
    }
    const double denom = primal_weighted_norm(x - y, weights);
    if (!(denom > 0.0)) continue;
    const double ratio = dual_weighted_norm(obj.gradient(x) - obj.gradient(y), weights) / denom;
    ++out.pairs;
    out.worst_ratio = std::max(out.worst_ratio, ratio);
    if (ratio > 1.0 + 1e-9) ++out.violations;
  }
  return out;
}

IterateTrace sign_gradient_descent(const SmoothObjective& obj, const Vector& x0, Index iters,
                                   std::optional<Vector> weights, RunOptions opts) {
  check_start(obj, x0, iters, "sign_gradient_descent");
  const Index d = obj.dimension();
  Vector w;
  if (weights) {
    w = *weights;
    if (w.size() != d) throw ConfigError("sign_gradient_descent: weight dimension mismatch");
    for (Index i = 0; i < d; ++i)
      if (!(w[i] > 0.0)) throw ConfigError("sign_gradient_descent: weights must be positive");
  } else {
    w = Vector::Constant(d, static_cast<double>(d) *
                                checked_lipschitz(obj.lipschitz(), "sign_gradient_descent"));
  }
  const Vector inv_sqrt = w.array().sqrt().inverse();
  Recorder rec(obj, "sign-gd", opts);
  Vector x = x0;
  rec.record(0, x, 0.0);
  for (Index k = 0; k < iters; ++k) {
    const Vector g = obj.gradient(x);
    const double scale = dual_weighted_norm(g, w);
    if (scale > 0.0) {
      for (Index i = 0; i < d; ++i) {
        if (g[i] > 0.0) x[i] -= scale * inv_sqrt[i];
        else if (g[i] < 0.0) x[i] += scale * inv_sqrt[i];
      }
    }
    rec.record(k + 1, x, scale);
  }
  return rec.take();
}

SgdSchedule SgdSchedule::decreasing(double mu) {
  if (!(mu > 0.0)) throw ConfigError("SgdSchedule: mu must be positive");
  return SgdSchedule(Kind::Decreasing, mu);
}

SgdSchedule SgdSchedule::constant(double alpha) {
  if (!(alpha > 0.0)) throw ConfigError("SgdSchedule: alpha must be positive");
  return SgdSchedule(Kind::Constant, alpha);
}

double SgdSchedule::step(Index k) const {
  if (kind_ == Kind::Constant) return value_;
  const double kk = static_cast<double>(k);
  return (2.0 * kk + 1.0) / (2.0 * value_ * (kk + 1.0) * (kk + 1.0));
}

std::vector<IterateTrace> sgd(const SmoothObjective& obj, const Vector& x0, Index iters,
                              const SgdSchedule& schedule, std::uint64_t base_seed,
                              std::size_t trials, RunOptions opts) {
  check_start(obj, x0, iters, "sgd");
  const Index n = obj.num_components();
  if (n < 1) throw ConfigError("sgd: objective is not a finite sum");
  const std::string tag =
      schedule.kind() == SgdSchedule::Kind::Decreasing ? "sgd-decreasing" : "sgd-constant";
  return run_trials(trials, base_seed, [&](std::uint64_t seed) {
    Rng rng(seed);
    Recorder rec(obj, tag, opts, seed);
    Vector x = x0;
    rec.record(0, x, 0.0);
    for (Index k = 0; k < iters; ++k) {
      const Index i = rng.uniform_index(n);
      const double alpha = schedule.step(k);
      x -= alpha * obj.component_gradient(i, x);
      rec.record(k + 1, x, alpha, i);
    }
    return rec.take();
  });
}

double svrg_contraction(double mu, double L, double alpha, Index m) {
  const double shrink = 1.0 - 2.0 * alpha * L;
  if (!(shrink > 0.0) || !(mu > 0.0) || m < 1) return kInfinity;
  return (1.0 / shrink) * (1.0 / (static_cast<double>(m) * mu * alpha) + 2.0 * L * alpha);
}

IterateTrace svrg(const SmoothObjective& obj, const Vector& x0, const SvrgConfig& cfg,
                  std::uint64_t seed, RunOptions opts) {
  check_start(obj, x0, cfg.outer_count, "svrg");
  const Index n = obj.num_components();
  if (n < 1) throw ConfigError("svrg: objective is not a finite sum");
  if (cfg.inner_length < 1) throw ConfigError("svrg: inner length m must be positive");
  const double L = checked_lipschitz(obj.component_lipschitz(), "svrg");
  if (!(cfg.alpha > 0.0) || !(cfg.alpha < 2.0 / L))
    throw ConfigError("svrg: step must satisfy 0 < alpha < 2/L");

  Rng rng(seed);
  Recorder rec(obj, "svrg", opts, seed);
  if (cfg.mu) {
    const double rho = svrg_contraction(*cfg.mu, L, cfg.alpha, cfg.inner_length);
    if (!(rho < 1.0))
      rec.trace().warnings.push_back("svrg: contraction factor >= 1, rate not certifiable");
  }
  Vector anchor = x0;
  rec.record(0, anchor, cfg.alpha);
  for (Index s = 0; s < cfg.outer_count; ++s) {
    const Vector full = obj.gradient(anchor);
    const Index keep = 1 + rng.uniform_index(cfg.inner_length);
    Vector x = anchor;
    Vector kept = anchor;
    for (Index t = 1; t <= cfg.inner_length; ++t) {
      const Index i = rng.uniform_index(n);
      x -= cfg.alpha * (obj.component_gradient(i, x) - obj.component_gradient(i, anchor) + full);
      if (t == keep) kept = x;
    }
    anchor = kept;
    rec.record(s + 1, anchor, cfg.alpha, keep);
  }
  return rec.take();
}

std::vector<IterateTrace> svrg_trials(const SmoothObjective& obj, const Vector& x0,
                                      const SvrgConfig& cfg, std::uint64_t base_seed,
                                      std::size_t trials, RunOptions opts) {
  return run_trials(trials, base_seed,
                    [&](std::uint64_t seed) { return svrg(obj, x0, cfg, seed, opts); });
}

}  // namespace plab
