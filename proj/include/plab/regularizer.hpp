#pragma once

#include <optional>
#include <string>

#include "plab/types.hpp"

namespace plab {

class SeparableRegularizer;

// A simple closed convex g : R^d -> R U {+inf} with an exact proximal map
//   prox(v, t) = argmin_y 1/2 ||y - v||^2 + t g(y),  t > 0.
class Regularizer {
 public:
  virtual ~Regularizer() = default;

  virtual double value(const Vector& x) const = 0;
  virtual Vector prox(const Vector& v, double t) const = 0;

  // Non-null when g(x) = sum_i g_i(x_i).
  virtual const SeparableRegularizer* separable() const { return nullptr; }

  virtual std::string tag() const = 0;
};

// Closed interval [lo, hi]; either end may be infinite.
struct Interval {
  double lo;
  double hi;
  double clamp(double v) const { return v < lo ? lo : (v > hi ? hi : v); }
};

// g(x) = sum_i g_i(x_i). The full-vector value and prox are defined
// coordinate-wise from the univariate parts, so the two always agree exactly.
class SeparableRegularizer : public Regularizer {
 public:
  virtual double coord_value(Index i, double xi) const = 0;
  virtual double coord_prox(Index i, double v, double t) const = 0;
  // Subdifferential of g_i at xi; nullopt outside dom g_i.
  virtual std::optional<Interval> coord_subdifferential(Index i, double xi) const = 0;
  // dom g_i.
  virtual Interval coord_domain(Index) const { return Interval{-kInfinity, kInfinity}; }

  double value(const Vector& x) const override;
  Vector prox(const Vector& v, double t) const override;
  const SeparableRegularizer* separable() const override { return this; }
};

}  // namespace plab
