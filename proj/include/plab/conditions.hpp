#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "plab/composite.hpp"
#include "plab/objective.hpp"
#include "plab/trace.hpp"

namespace plab {

// How a cloud was produced. Box points are uniform in [lo, hi]; explicit and
// trace points are appended afterwards in order.
struct CloudGeneration {
  Vector lo;
  Vector hi;
  Index count = 0;            // box draws requested
  std::uint64_t seed = 0;
  double exclusion = 1e-12;   // points with gap below this are dropped
  Index added = 0;            // explicit / trace points offered
  Index excluded = 0;         // offered points dropped (near-optimal or infeasible)
};

// Finite stand-in for the "for all x" quantifiers. Keeps each accepted point
// with its gap and, when the problem has one, its solution-set projection.
//
// The cloud holds references to the objective it was built from; it must not
// outlive it.
class SampleCloud {
 public:
  using GapFn = std::function<double(const Vector&)>;
  using ProjectFn = std::function<std::optional<Vector>(const Vector&)>;

  SampleCloud(GapFn gap, ProjectFn project, CloudGeneration generation);

  // Offers a point; returns false when it is excluded.
  bool add(const Vector& x);
  void add_points(std::span<const Vector> xs);
  void add_trace(const IterateTrace& trace);

  std::size_t size() const { return points_.size(); }
  bool empty() const { return points_.empty(); }
  Index dimension() const { return points_.empty() ? 0 : points_.front().size(); }
  const Vector& point(std::size_t j) const { return points_[j]; }
  double gap(std::size_t j) const { return gaps_[j]; }
  bool has_projections() const { return has_projections_; }
  const Vector& projection(std::size_t j) const;
  const CloudGeneration& generation() const { return generation_; }

 private:
  GapFn gap_fn_;
  ProjectFn project_fn_;
  CloudGeneration generation_;
  bool has_projections_ = true;
  std::vector<Vector> points_;
  std::vector<Vector> projections_;
  std::vector<double> gaps_;
};

struct CloudSpec {
  Index count = 10000;
  std::uint64_t seed = 0;
  std::optional<Vector> lo;
  std::optional<Vector> hi;
  // Default box: x0 +- radius_factor * ||x0 - x_p|| (||x0 - x_p|| replaced by
  // max(1, ||x0||) when it is zero or x_p is unknown).
  double radius_factor = 5.0;
};

// Requires f*. The box is intersected with dom g for separable g.
SampleCloud make_cloud(const SmoothObjective& obj, const Vector& x0, const CloudSpec& spec);
SampleCloud make_cloud(const CompositeProblem& problem, const Vector& x0, const CloudSpec& spec);
// Explicit point set (e.g. a grid), no box draws.
SampleCloud make_cloud(const SmoothObjective& obj, std::span<const Vector> points);

enum class Condition { SC, ESC, WSC, RSI, EB, QG, PLinf };
std::string to_string(Condition c);

// Constants come from infima of the defining ratios, clamped at 0.
//   PL:    1/2 ||g||^2 / gap
//   PLinf: 1/2 ||g||_inf^2 / gap
//   SC:    2 B(x, y) / ||y - x||^2 over pairs, B the Bregman divergence
//   ESC:   SC restricted to pairs with x_p = y_p
//   WSC:   the SC ratio on the pair (x, x_p)
//   RSI:   <g, x - x_p> / ||x - x_p||^2
//   EB:    ||g|| / ||x - x_p||
//   QG:    2 gap / ||x - x_p||^2
// Pairs are prefix-stable: the partner of point i is drawn with Rng(seed + i)
// among points j < i, so appending points can only lower a constant.
double estimate_pl(const SmoothObjective& obj, const SampleCloud& cloud);
double estimate_condition(const SmoothObjective& obj, const SampleCloud& cloud, Condition which);

// 1/2 ||g||_{L^-1[1]}^2 / gap for the sign method's weights.
double estimate_sign_pl(const SmoothObjective& obj, const SampleCloud& cloud, const Vector& weights);

// max over cloud points and components of ||grad f_i(x)||^2.
double estimate_variance_bound(const SmoothObjective& obj, const SampleCloud& cloud);
double estimate_variance_bound(const SmoothObjective& obj, std::span<const IterateTrace> traces);

// 1/2 D_g(x, lambda) / (F(x) - F*), lambda = L by default.
double estimate_proximal_pl(const CompositeProblem& problem, const SampleCloud& cloud,
                            std::optional<double> lambda = std::nullopt);
// 2 (F(x) - F*) / ||x - x_p||^2.
double estimate_composite_qg(const CompositeProblem& problem, const SampleCloud& cloud);

struct ProxEbPair {
  double distance;  // ||x - x_p||
  double residual;  // ||x - prox_{g/L}(x - grad f(x) / L)||
};
ProxEbPair proximal_eb_residual(const CompositeProblem& problem, const Vector& x);
// c = max over the cloud of distance / residual.
double estimate_proximal_eb(const CompositeProblem& problem, const SampleCloud& cloud);

// min over s in grad f(x) + dg(x) of ||s||^2 (coordinate-wise selection).
double kl_residual(const CompositeProblem& problem, const Vector& x);
// mu~ = min over the cloud of 1/2 kl_residual / (F - F*).
double estimate_kl(const CompositeProblem& problem, const SampleCloud& cloud);

// Largest gap among cloud points with ||grad f|| <= grad_tol (0 if none).
double max_gap_at_stationary(const SmoothObjective& obj, const SampleCloud& cloud,
                             double grad_tol = 1e-8);

struct ConditionReport {
  std::string problem_tag;
  double L = 0.0;
  std::optional<double> sc, esc, wsc, rsi, eb, pl, qg, pl_inf;
  std::optional<double> sign_pl;         // mu_{L[inf]}
  std::optional<double> proximal_pl;
  std::optional<double> kl;              // mu~
  std::optional<double> proximal_eb;     // c
  std::optional<double> variance_bound;  // C^2
  CloudGeneration cloud;
  std::size_t cloud_size = 0;
};

struct ReportOptions {
  std::optional<Vector> sign_weights;
  bool variance_bound = true;  // only used for finite sums
};

// Every smooth condition the objective's oracles allow.
ConditionReport estimate_conditions(const SmoothObjective& obj, const SampleCloud& cloud,
                                    const ReportOptions& opts = {});
// Composite family (proximal-PL, KL, proximal-EB, QG).
ConditionReport estimate_conditions(const CompositeProblem& problem, const SampleCloud& cloud);

struct ChainCheck {
  std::string problem_tag;
  std::string name;  // e.g. "EB >= RSI"
  double lhs = 0.0;
  double rhs = 0.0;
  bool pass = false;
};

struct ChainVerdict {
  bool pass = true;
  std::vector<ChainCheck> checks;
};

inline constexpr double kPositiveThreshold = 1e-8;

// Per report: the positivity implications SC => ESC => WSC => RSI => EB <=> PL => QG
// and the quantitative steps ESC >= SC, WSC >= ESC, RSI >= WSC/2, EB >= RSI,
// PL >= EB^2/L, EB^2 >= PL*QG, each with tolerance tol.
ChainVerdict verify_implication_chain(std::span<const ConditionReport> reports, double tol = 1e-8);

}  // namespace plab
