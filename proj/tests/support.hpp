#pragma once

#include <cmath>
#include <memory>
#include <numeric>
#include <vector>

#include "plab/objective.hpp"
#include "plab/rng.hpp"
#include "plab/trace.hpp"

namespace plab::testing {

// f(x) = a'x: constant gradient, L = 0 in truth.
class Linear final : public SmoothObjective {
 public:
  explicit Linear(Vector a) : a_(std::move(a)) {}
  Index dimension() const override { return a_.size(); }
  double value(const Vector& x) const override { return a_.dot(x); }
  Vector gradient(const Vector&) const override { return a_; }
  double lipschitz() const override { return 1.0; }
  std::string tag() const override { return "linear"; }

 private:
  Vector a_;
};

// c * f for a wrapped objective.
class Scaled final : public SmoothObjective {
 public:
  Scaled(std::shared_ptr<const SmoothObjective> f, double c) : f_(std::move(f)), c_(c) {}
  Index dimension() const override { return f_->dimension(); }
  double value(const Vector& x) const override { return c_ * f_->value(x); }
  Vector gradient(const Vector& x) const override { return c_ * f_->gradient(x); }
  double lipschitz() const override { return c_ * f_->lipschitz(); }
  std::optional<double> optimum_value() const override {
    auto v = f_->optimum_value();
    if (v) return c_ * *v;
    return std::nullopt;
  }
  std::optional<Vector> project_to_solutions(const Vector& x) const override {
    return f_->project_to_solutions(x);
  }
  double optimality_gap(const Vector& x) const override { return c_ * f_->optimality_gap(x); }
  std::string tag() const override { return "scaled-" + f_->tag(); }

 private:
  std::shared_ptr<const SmoothObjective> f_;
  double c_;
};

inline Vector random_point(Rng& rng, Index d, double radius) {
  Vector x(d);
  for (Index i = 0; i < d; ++i) x[i] = rng.uniform(-radius, radius);
  return x;
}

inline Vector vec(std::initializer_list<double> v) {
  Vector out(static_cast<Index>(v.size()));
  Index i = 0;
  for (double x : v) out[i++] = x;
  return out;
}

// Trial mean and standard error of the gap at record k.
struct MeanGap {
  double mean = 0.0;
  double stderr_of_mean = 0.0;
};

inline MeanGap mean_gap(const std::vector<IterateTrace>& traces, std::size_t k) {
  const double n = static_cast<double>(traces.size());
  double sum = 0.0;
  for (const auto& t : traces) sum += t.records.at(k).objective_gap;
  const double mean = sum / n;
  double ss = 0.0;
  for (const auto& t : traces) {
    const double e = t.records.at(k).objective_gap - mean;
    ss += e * e;
  }
  return {mean, std::sqrt(ss / (n - 1.0) / n)};
}

}  // namespace plab::testing
