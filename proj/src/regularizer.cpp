#include "plab/regularizer.hpp"

namespace plab {

double SeparableRegularizer::value(const Vector& x) const {
  double total = 0.0;
  for (Index i = 0; i < x.size(); ++i) {
    const double gi = coord_value(i, x[i]);
    if (gi == kInfinity) return kInfinity;
    total += gi;
  }
  return total;
}

Vector SeparableRegularizer::prox(const Vector& v, double t) const {
  if (!(t > 0.0)) throw ConfigError(tag() + ": prox step must be positive");
  Vector y(v.size());
  for (Index i = 0; i < v.size(); ++i) y[i] = coord_prox(i, v[i], t);
  return y;
}

}  // namespace plab
