#include "plab/composite.hpp"

namespace plab {

CompositeProblem::CompositeProblem(std::shared_ptr<const SmoothObjective> smooth,
                                   std::shared_ptr<const Regularizer> reg,
                                   std::optional<double> optimum_value,
                                   Projection projection, std::string tag)
    : smooth_(std::move(smooth)),
      reg_(std::move(reg)),
      optimum_value_(optimum_value),
      projection_(std::move(projection)),
      tag_(std::move(tag)) {
  if (!smooth_ || !reg_) throw ConfigError("CompositeProblem: null component");
  if (tag_.empty()) tag_ = smooth_->tag() + "+" + reg_->tag();
}

double CompositeProblem::value(const Vector& x) const {
  const double g = reg_->value(x);
  if (g == kInfinity) return kInfinity;
  return smooth_->value(x) + g;
}

double CompositeProblem::optimality_gap(const Vector& x) const {
  if (!optimum_value_) throw ConfigError(tag_ + ": optimum value unknown");
  const double F = value(x);
  if (F == kInfinity) return kInfinity;
  return F - *optimum_value_;
}

std::optional<Vector> CompositeProblem::project_to_solutions(const Vector& x) const {
  if (!projection_) return std::nullopt;
  return projection_(x);
}

}  // namespace plab
