#include "plab/prox.hpp"

#include <cmath>
#include <sstream>

namespace plab::prox {

namespace {

void require_positive(double lambda, const char* what) {
  if (!(lambda > 0.0) || !std::isfinite(lambda))
    throw ConfigError(std::string(what) + ": lambda must be positive and finite");
}

std::string number(double v) {
  std::ostringstream os;
  os.precision(17);
  os << v;
  return os.str();
}

}  // namespace

L1Norm::L1Norm(double lambda) : lambda_(lambda) {
  if (!(lambda >= 0.0)) throw ConfigError("l1: lambda must be non-negative");
}

double L1Norm::coord_value(Index, double xi) const { return lambda_ * std::abs(xi); }

double L1Norm::coord_prox(Index, double v, double t) const {
  const double shrunk = std::abs(v) - t * lambda_;
  if (shrunk <= 0.0) return 0.0;
  return std::copysign(shrunk, v);
}

std::optional<Interval> L1Norm::coord_subdifferential(Index, double xi) const {
  if (xi > 0.0) return Interval{lambda_, lambda_};
  if (xi < 0.0) return Interval{-lambda_, -lambda_};
  return Interval{-lambda_, lambda_};
}

std::string L1Norm::tag() const { return "l1(" + number(lambda_) + ")"; }

BoxIndicator::BoxIndicator(double lo, double hi) : lo_(lo), hi_(hi) {
  if (!(lo <= hi)) throw ConfigError("box: need lo <= hi");
}

double BoxIndicator::coord_value(Index, double xi) const {
  return (xi >= lo_ && xi <= hi_) ? 0.0 : kInfinity;
}

double BoxIndicator::coord_prox(Index, double v, double) const {
  return v < lo_ ? lo_ : (v > hi_ ? hi_ : v);
}

std::optional<Interval> BoxIndicator::coord_subdifferential(Index, double xi) const {
  if (xi < lo_ || xi > hi_) return std::nullopt;
  // Normal cone of [lo, hi] at xi.
  const double lower = (xi == lo_) ? -kInfinity : 0.0;
  const double upper = (xi == hi_) ? kInfinity : 0.0;
  return Interval{lower, upper};
}

std::string BoxIndicator::tag() const {
  return "box(" + number(lo_) + "," + number(hi_) + ")";
}

std::shared_ptr<const Regularizer> l1(double lambda) { return std::make_shared<L1Norm>(lambda); }
std::shared_ptr<const Regularizer> box(double lo, double hi) {
  return std::make_shared<BoxIndicator>(lo, hi);
}
std::shared_ptr<const Regularizer> zero() { return std::make_shared<Zero>(); }

Vector forward_backward_step(const CompositeProblem& problem, const Vector& x, double lambda) {
  return forward_backward_step(problem, x, problem.smooth().gradient(x), lambda);
}

Vector forward_backward_step(const CompositeProblem& problem, const Vector& x,
                             const Vector& grad, double lambda) {
  require_positive(lambda, "forward_backward_step");
  Vector y = problem.reg().prox(x - grad / lambda, 1.0 / lambda);
  if (!y.allFinite()) throw EvaluationError("forward_backward_step: prox returned non-finite point");
  return y;
}

double surrogate_value(const CompositeProblem& problem, const Vector& x, const Vector& grad,
                       const Vector& y, double lambda) {
  const double gy = problem.reg().value(y);
  if (gy == kInfinity) return kInfinity;
  const Vector step = y - x;
  return grad.dot(step) + 0.5 * lambda * step.squaredNorm() + gy - problem.reg().value(x);
}

double compute_Dg(const CompositeProblem& problem, const Vector& x, double lambda) {
  require_positive(lambda, "compute_Dg");
  if (problem.reg().value(x) == kInfinity)
    throw DomainError("compute_Dg: g(x) = +inf (x outside dom g)");
  const Vector grad = problem.smooth().gradient(x);
  const Vector y = forward_backward_step(problem, x, grad, lambda);
  return -2.0 * lambda * surrogate_value(problem, x, grad, y, lambda);
}

double compute_Rg(const Regularizer& reg, double lambda, const Vector& x, const Vector& a) {
  require_positive(lambda, "compute_Rg");
  const double gx = reg.value(x);
  if (gx == kInfinity) throw DomainError("compute_Rg: g(x) = +inf (x outside dom g)");
  // ||lambda (y - x) + a||^2 + 2 lambda g(y) = lambda^2 [||y - (x - a/lambda)||^2 + (2/lambda) g(y)]
  const Vector y = reg.prox(x - a / lambda, 1.0 / lambda);
  return (lambda * (y - x) + a).squaredNorm() + 2.0 * lambda * (reg.value(y) - gx);
}

double fb_envelope(const CompositeProblem& problem, const Vector& x, double lambda) {
  require_positive(lambda, "fb_envelope");
  if (problem.reg().value(x) == kInfinity)
    throw DomainError("fb_envelope: g(x) = +inf (x outside dom g)");
  const Vector grad = problem.smooth().gradient(x);
  const Vector y = forward_backward_step(problem, x, grad, lambda);
  const Vector step = y - x;
  return problem.smooth().value(x) + grad.dot(step) + 0.5 * lambda * step.squaredNorm() +
         problem.reg().value(y);
}

double prox_residual(const CompositeProblem& problem, const Vector& x) {
  return (x - forward_backward_step(problem, x, problem.lipschitz())).norm();
}

}  // namespace plab::prox
