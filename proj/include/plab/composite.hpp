#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <string>

#include "plab/objective.hpp"
#include "plab/regularizer.hpp"

namespace plab {

// F(x) = f(x) + g(x) with optional F* and solution-set projection.
class CompositeProblem {
 public:
  using Projection = std::function<Vector(const Vector&)>;

  CompositeProblem(std::shared_ptr<const SmoothObjective> smooth,
                   std::shared_ptr<const Regularizer> reg,
                   std::optional<double> optimum_value = std::nullopt,
                   Projection projection = {}, std::string tag = {});

  const SmoothObjective& smooth() const { return *smooth_; }
  const Regularizer& reg() const { return *reg_; }
  std::shared_ptr<const SmoothObjective> smooth_ptr() const { return smooth_; }
  std::shared_ptr<const Regularizer> reg_ptr() const { return reg_; }

  Index dimension() const { return smooth_->dimension(); }
  double lipschitz() const { return smooth_->lipschitz(); }

  // +inf when x is outside dom g.
  double value(const Vector& x) const;
  // F(x) - F*; +inf outside dom g. Throws ConfigError when F* is unknown.
  double optimality_gap(const Vector& x) const;

  const std::optional<double>& optimum_value() const { return optimum_value_; }
  bool has_projection() const { return static_cast<bool>(projection_); }
  std::optional<Vector> project_to_solutions(const Vector& x) const;

  const std::string& tag() const { return tag_; }

 private:
  std::shared_ptr<const SmoothObjective> smooth_;
  std::shared_ptr<const Regularizer> reg_;
  std::optional<double> optimum_value_;
  Projection projection_;
  std::string tag_;
};

}  // namespace plab
