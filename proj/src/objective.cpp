#include "plab/objective.hpp"

#include <cmath>

#include "plab/rng.hpp"

namespace plab {

double SmoothObjective::coord_gradient(const Vector& x, Index i) const {
  return gradient(x)[i];
}

double SmoothObjective::optimality_gap(const Vector& x) const {
  const auto fstar = optimum_value();
  if (!fstar) throw ConfigError(tag() + ": optimum value unknown");
  return value(x) - *fstar;
}

double SmoothObjective::component_value(Index, const Vector&) const {
  throw ConfigError(tag() + ": not a finite sum");
}

Vector SmoothObjective::component_gradient(Index, const Vector&) const {
  throw ConfigError(tag() + ": not a finite sum");
}

double SmoothObjective::component_lipschitz() const {
  throw ConfigError(tag() + ": not a finite sum");
}

double check_gradient(const SmoothObjective& obj, const Vector& x, double h) {
  if (!(h > 0.0)) throw ConfigError("check_gradient: step must be positive");
  if (x.size() != obj.dimension())
    throw ConfigError("check_gradient: dimension mismatch");
  const double fx = obj.value(x);
  const Vector g = obj.gradient(x);
  if (!std::isfinite(fx) || !g.allFinite())
    throw EvaluationError("check_gradient: non-finite value or gradient at x");

  double worst = 0.0;
  Vector probe = x;
  for (Index i = 0; i < x.size(); ++i) {
    const double step = h * (1.0 + std::abs(x[i]));
    probe[i] = x[i] + step;
    const double fp = obj.value(probe);
    probe[i] = x[i] - step;
    const double fm = obj.value(probe);
    probe[i] = x[i];
    if (!std::isfinite(fp) || !std::isfinite(fm))
      throw EvaluationError("check_gradient: non-finite value near x");
    const double fd = (fp - fm) / (2.0 * step);
    worst = std::max(worst, std::abs(fd - g[i]) / (1.0 + std::abs(g[i])));
  }
  return worst;
}

double estimate_lipschitz(const SmoothObjective& obj, const LipschitzSampling& cfg) {
  if (cfg.samples < 2) throw ConfigError("estimate_lipschitz: need at least 2 samples");
  const Index d = obj.dimension();
  const Vector center = cfg.center.value_or(Vector::Zero(d));
  Rng rng(cfg.seed);

  auto draw = [&] {
    Vector x(d);
    for (Index i = 0; i < d; ++i) x[i] = center[i] + rng.uniform(-cfg.radius, cfg.radius);
    return x;
  };

  double best = 0.0;
  bool any = false;
  for (Index s = 0; s < cfg.samples; ++s) {
    const Vector x = draw();
    Vector y;
    if (s % 2 == 0) {
      y = draw();
    } else {
      Vector dir(d);
      for (Index i = 0; i < d; ++i) dir[i] = rng.normal();
      y = x + (1e-4 * cfg.radius) * dir;
    }
    const double dist = (x - y).norm();
    if (!(dist > 0.0)) continue;
    const double ratio = (obj.gradient(x) - obj.gradient(y)).norm() / dist;
    if (!std::isfinite(ratio)) continue;
    best = std::max(best, ratio);
    any = true;
  }
  if (!any) throw EstimationError("estimate_lipschitz: all sampled pairs degenerate");
  return best;
}

}  // namespace plab
