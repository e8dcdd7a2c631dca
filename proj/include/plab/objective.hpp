#pragma once

#include <optional>
#include <string>

#include "plab/types.hpp"

namespace plab {

// A differentiable f : R^d -> R together with the metadata the solvers and
// estimators rely on. Implementations are immutable after construction and
// safe to share between concurrent runs.
//
// Optional capabilities are signalled by std::nullopt / zero component count:
//  - coord_lipschitz():   per-coordinate constants L_i
//  - optimum_value():     f*
//  - project_to_solutions(x): the nearest minimizer x_p
//  - num_components() > 0: f is the uniform mean (1/n) sum_i f_i
//  - curvature(v):        v' H v for quadratics (closed-form line search)
//  - known_pl_constant(): a PL constant valid on all of R^d
class SmoothObjective {
 public:
  virtual ~SmoothObjective() = default;

  virtual Index dimension() const = 0;
  virtual double value(const Vector& x) const = 0;
  virtual Vector gradient(const Vector& x) const = 0;
  virtual double coord_gradient(const Vector& x, Index i) const;

  // Global Lipschitz constant of the gradient.
  virtual double lipschitz() const = 0;
  virtual std::optional<Vector> coord_lipschitz() const { return std::nullopt; }

  virtual std::optional<double> optimum_value() const { return std::nullopt; }
  virtual std::optional<Vector> project_to_solutions(const Vector& /*x*/) const {
    return std::nullopt;
  }

  // f(x) - f*. Quadratic problems override this with a cancellation-free
  // formula. Throws ConfigError when f* is unknown.
  virtual double optimality_gap(const Vector& x) const;

  virtual Index num_components() const { return 0; }
  virtual double component_value(Index i, const Vector& x) const;
  virtual Vector component_gradient(Index i, const Vector& x) const;
  // Lipschitz constant shared by every component gradient.
  virtual double component_lipschitz() const;

  virtual std::optional<double> curvature(const Vector& /*direction*/) const {
    return std::nullopt;
  }
  virtual std::optional<double> known_pl_constant() const { return std::nullopt; }

  virtual std::string tag() const = 0;

  bool is_finite_sum() const { return num_components() > 0; }
};

// Max over coordinates of |fd_i - g_i| / (1 + |g_i|) with centered
// differences of step h * (1 + |x_i|).
double check_gradient(const SmoothObjective& obj, const Vector& x, double h);

struct LipschitzSampling {
  Index samples = 2000;
  std::uint64_t seed = 0;
  double radius = 1.0;        // pairs drawn in center +- radius
  std::optional<Vector> center;
};

// max over sampled pairs of ||grad f(x) - grad f(y)|| / ||x - y||.
// Half the pairs are independent box draws, half are local perturbations,
// so the estimate approaches the local curvature maximum. A lower bound on L.
double estimate_lipschitz(const SmoothObjective& obj, const LipschitzSampling& cfg);

}  // namespace plab
