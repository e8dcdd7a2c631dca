#pragma once

#include <memory>

#include "plab/composite.hpp"
#include "plab/regularizer.hpp"

namespace plab::prox {

// g(x) = lambda ||x||_1; prox is soft-thresholding.
class L1Norm final : public SeparableRegularizer {
 public:
  explicit L1Norm(double lambda);
  double lambda() const { return lambda_; }
  double coord_value(Index i, double xi) const override;
  double coord_prox(Index i, double v, double t) const override;
  std::optional<Interval> coord_subdifferential(Index i, double xi) const override;
  std::string tag() const override;

 private:
  double lambda_;
};

// Indicator of the box [lo, hi]^d; prox is the clamp.
class BoxIndicator final : public SeparableRegularizer {
 public:
  BoxIndicator(double lo, double hi);
  double lo() const { return lo_; }
  double hi() const { return hi_; }
  double coord_value(Index i, double xi) const override;
  double coord_prox(Index i, double v, double t) const override;
  std::optional<Interval> coord_subdifferential(Index i, double xi) const override;
  Interval coord_domain(Index) const override { return Interval{lo_, hi_}; }
  std::string tag() const override;

 private:
  double lo_;
  double hi_;
};

// g = 0; prox is the identity.
class Zero final : public SeparableRegularizer {
 public:
  double coord_value(Index, double) const override { return 0.0; }
  double coord_prox(Index, double v, double) const override { return v; }
  std::optional<Interval> coord_subdifferential(Index, double) const override {
    return Interval{0.0, 0.0};
  }
  std::string tag() const override { return "zero"; }
};

std::shared_ptr<const Regularizer> l1(double lambda);
std::shared_ptr<const Regularizer> box(double lo, double hi);
std::shared_ptr<const Regularizer> zero();

// Minimizer of <grad f(x), y - x> + (lambda/2)||y - x||^2 + g(y):
//   y+ = prox(x - grad f(x) / lambda, 1 / lambda).
Vector forward_backward_step(const CompositeProblem& problem, const Vector& x, double lambda);
Vector forward_backward_step(const CompositeProblem& problem, const Vector& x,
                             const Vector& grad, double lambda);

// Value of the bracketed surrogate at a given y.
double surrogate_value(const CompositeProblem& problem, const Vector& x, const Vector& grad,
                       const Vector& y, double lambda);

// D_g(x, lambda) = -2 lambda min_y [<grad f(x), y-x> + lambda/2 ||y-x||^2 + g(y) - g(x)],
// evaluated at the exact prox minimizer. Throws DomainError when g(x) = +inf.
double compute_Dg(const CompositeProblem& problem, const Vector& x, double lambda);

// R_g(lambda, x, a) = min_y ||lambda (y - x) + a||^2 + 2 lambda (g(y) - g(x)).
double compute_Rg(const Regularizer& reg, double lambda, const Vector& x, const Vector& a);

// Forward-backward envelope: f(x) + <grad f(x), y+ - x> + lambda/2 ||y+ - x||^2 + g(y+).
double fb_envelope(const CompositeProblem& problem, const Vector& x, double lambda);
inline double fb_envelope(const CompositeProblem& problem, const Vector& x) {
  return fb_envelope(problem, x, problem.lipschitz());
}

// ||x - prox_{g/L}(x - grad f(x) / L)||.
double prox_residual(const CompositeProblem& problem, const Vector& x);

}  // namespace plab::prox
