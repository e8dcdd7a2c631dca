#include "plab/conditions.hpp"

#include <algorithm>
#include <cmath>

#include "plab/prox.hpp"
#include "plab/rng.hpp"

namespace plab {

SampleCloud::SampleCloud(GapFn gap, ProjectFn project, CloudGeneration generation)
    : gap_fn_(std::move(gap)), project_fn_(std::move(project)), generation_(std::move(generation)) {}

bool SampleCloud::add(const Vector& x) {
  const double g = gap_fn_(x);
  if (!std::isfinite(g) || !(g >= generation_.exclusion)) {
    ++generation_.excluded;
    return false;
  }
  std::optional<Vector> p = project_fn_ ? project_fn_(x) : std::nullopt;
  if (!p) has_projections_ = false;
  points_.push_back(x);
  projections_.push_back(p ? std::move(*p) : Vector());
  gaps_.push_back(g);
  return true;
}

void SampleCloud::add_points(std::span<const Vector> xs) {
  for (const auto& x : xs) {
    ++generation_.added;
    add(x);
  }
}

void SampleCloud::add_trace(const IterateTrace& trace) {
  if (!trace.has_points()) throw ConfigError("SampleCloud: trace has no stored points");
  for (std::size_t j = 0; j < trace.size(); ++j) {
    ++generation_.added;
    add(Vector(trace.point(j)));
  }
}

const Vector& SampleCloud::projection(std::size_t j) const {
  if (!has_projections_) throw ConfigError("SampleCloud: projections unavailable");
  return projections_[j];
}

namespace {

struct BoxFrame {
  Vector lo;
  Vector hi;
};

BoxFrame default_box(const Vector& x0, const std::optional<Vector>& xp, const CloudSpec& spec) {
  double spread = xp ? (x0 - *xp).norm() : 0.0;
  if (!(spread > 0.0)) spread = std::max(1.0, x0.norm());
  const double r = spec.radius_factor * spread;
  BoxFrame box{spec.lo.value_or(x0.array() - r), spec.hi.value_or(x0.array() + r)};
  if (box.lo.size() != x0.size() || box.hi.size() != x0.size())
    throw ConfigError("make_cloud: box dimension mismatch");
  return box;
}

void fill_box(SampleCloud& cloud, const Vector& lo, const Vector& hi, Index count,
              std::uint64_t seed) {
  Rng rng(seed);
  const Index d = lo.size();
  Vector x(d);
  for (Index s = 0; s < count; ++s) {
    for (Index i = 0; i < d; ++i) x[i] = lo[i] + (hi[i] - lo[i]) * rng.uniform();
    cloud.add(x);
  }
}

void require_finite_optimum(bool known, const char* who) {
  if (!known) throw ConfigError(std::string(who) + ": optimum value required");
}

}  // namespace

SampleCloud make_cloud(const SmoothObjective& obj, const Vector& x0, const CloudSpec& spec) {
  require_finite_optimum(obj.optimum_value().has_value(), "make_cloud");
  if (x0.size() != obj.dimension()) throw ConfigError("make_cloud: x0 dimension mismatch");
  if (spec.count < 0) throw ConfigError("make_cloud: count must be non-negative");
  const BoxFrame box = default_box(x0, obj.project_to_solutions(x0), spec);
  CloudGeneration gen{box.lo, box.hi, spec.count, spec.seed};
  SampleCloud cloud([&obj](const Vector& x) { return obj.optimality_gap(x); },
                    [&obj](const Vector& x) { return obj.project_to_solutions(x); }, gen);
  fill_box(cloud, box.lo, box.hi, spec.count, spec.seed);
  return cloud;
}

SampleCloud make_cloud(const CompositeProblem& problem, const Vector& x0, const CloudSpec& spec) {
  require_finite_optimum(problem.optimum_value().has_value(), "make_cloud");
  if (x0.size() != problem.dimension()) throw ConfigError("make_cloud: x0 dimension mismatch");
  if (spec.count < 0) throw ConfigError("make_cloud: count must be non-negative");
  BoxFrame box = default_box(x0, problem.project_to_solutions(x0), spec);
  if (const auto* sep = problem.reg().separable()) {
    for (Index i = 0; i < box.lo.size(); ++i) {
      const Interval dom = sep->coord_domain(i);
      box.lo[i] = std::max(box.lo[i], dom.lo);
      box.hi[i] = std::min(box.hi[i], dom.hi);
      if (!(box.lo[i] <= box.hi[i])) throw ConfigError("make_cloud: box misses dom g");
    }
  }
  CloudGeneration gen{box.lo, box.hi, spec.count, spec.seed};
  SampleCloud cloud([&problem](const Vector& x) { return problem.optimality_gap(x); },
                    [&problem](const Vector& x) { return problem.project_to_solutions(x); }, gen);
  fill_box(cloud, box.lo, box.hi, spec.count, spec.seed);
  return cloud;
}

SampleCloud make_cloud(const SmoothObjective& obj, std::span<const Vector> points) {
  require_finite_optimum(obj.optimum_value().has_value(), "make_cloud");
  CloudGeneration gen;
  SampleCloud cloud([&obj](const Vector& x) { return obj.optimality_gap(x); },
                    [&obj](const Vector& x) { return obj.project_to_solutions(x); }, gen);
  cloud.add_points(points);
  return cloud;
}

std::string to_string(Condition c) {
  switch (c) {
    case Condition::SC: return "SC";
    case Condition::ESC: return "ESC";
    case Condition::WSC: return "WSC";
    case Condition::RSI: return "RSI";
    case Condition::EB: return "EB";
    case Condition::QG: return "QG";
    case Condition::PLinf: return "PLinf";
  }
  return "?";
}

namespace {

// Running infimum; reports 0 for a negative infimum.
class Infimum {
 public:
  void offer(double v) {
    if (std::isnan(v)) return;
    best_ = std::min(best_, v);
    any_ = true;
  }
  double result(const char* who) const {
    if (!any_) throw EstimationError(std::string(who) + ": no usable sample");
    return std::max(0.0, best_);
  }

 private:
  double best_ = kInfinity;
  bool any_ = false;
};

void require_points(const SampleCloud& cloud, const char* who) {
  if (cloud.empty()) throw EstimationError(std::string(who) + ": empty cloud");
}

void require_projections(const SampleCloud& cloud, const char* who) {
  if (!cloud.has_projections())
    throw ConfigError(std::string(who) + ": condition needs a solution-set projection");
}

// Bregman divergence f(y) - f(x) - <grad f(x), y - x>.
double bregman(const SmoothObjective& obj, const Vector& x, const Vector& gx, const Vector& y) {
  const Vector step = y - x;
  if (const auto c = obj.curvature(step)) return 0.5 * *c;
  return obj.value(y) - obj.value(x) - gx.dot(step);
}

double sc_ratio(const SmoothObjective& obj, const Vector& x, const Vector& gx, const Vector& y) {
  const double dist2 = (y - x).squaredNorm();
  if (!(dist2 > 0.0)) return std::nan("");
  return 2.0 * bregman(obj, x, gx, y) / dist2;
}

bool same_projection(const Vector& a, const Vector& b) {
  return (a - b).norm() <= 1e-12 * (1.0 + a.norm());
}

struct Partner {
  std::optional<std::size_t> j;
  double s;  // in (0, 2]
};

Partner partner_of(const SampleCloud& cloud, std::size_t i) {
  Rng rng(cloud.generation().seed + static_cast<std::uint64_t>(i));
  Partner p;
  p.s = 2.0 * (1.0 - rng.uniform());
  if (i > 0) p.j = static_cast<std::size_t>(rng.uniform_index(static_cast<Index>(i)));
  return p;
}

double estimate_sc_family(const SmoothObjective& obj, const SampleCloud& cloud, bool essential) {
  const char* who = essential ? "estimate_condition(ESC)" : "estimate_condition(SC)";
  require_points(cloud, who);
  if (essential) require_projections(cloud, who);
  const bool proj = cloud.has_projections();
  Infimum inf;
  auto both = [&](const Vector& x, const Vector& y) {
    inf.offer(sc_ratio(obj, x, obj.gradient(x), y));
    inf.offer(sc_ratio(obj, y, obj.gradient(y), x));
  };
  for (std::size_t i = 0; i < cloud.size(); ++i) {
    const Vector& x = cloud.point(i);
    const Partner partner = partner_of(cloud, i);
    if (proj) {
      const Vector& p = cloud.projection(i);
      both(x, p);
      both(x, Vector(p + partner.s * (x - p)));
    }
    if (!partner.j) continue;
    const std::size_t j = *partner.j;
    const bool equal = proj && same_projection(cloud.projection(i), cloud.projection(j));
    if (!essential || equal) both(x, cloud.point(j));
    if (!essential && proj && !equal) both(cloud.projection(i), cloud.projection(j));
  }
  return inf.result(who);
}

}  // namespace

double estimate_pl(const SmoothObjective& obj, const SampleCloud& cloud) {
  require_points(cloud, "estimate_pl");
  Infimum inf;
  for (std::size_t i = 0; i < cloud.size(); ++i)
    inf.offer(0.5 * obj.gradient(cloud.point(i)).squaredNorm() / cloud.gap(i));
  return inf.result("estimate_pl");
}

double estimate_condition(const SmoothObjective& obj, const SampleCloud& cloud, Condition which) {
  const std::string who = "estimate_condition(" + to_string(which) + ")";
  if (which == Condition::SC) return estimate_sc_family(obj, cloud, false);
  if (which == Condition::ESC) return estimate_sc_family(obj, cloud, true);
  require_points(cloud, who.c_str());
  if (which != Condition::PLinf) require_projections(cloud, who.c_str());
  Infimum inf;
  for (std::size_t i = 0; i < cloud.size(); ++i) {
    const Vector& x = cloud.point(i);
    const Vector g = obj.gradient(x);
    if (which == Condition::PLinf) {
      const double ginf = g.lpNorm<Eigen::Infinity>();
      inf.offer(0.5 * ginf * ginf / cloud.gap(i));
      continue;
    }
    const Vector& p = cloud.projection(i);
    const Vector e = x - p;
    const double dist2 = e.squaredNorm();
    if (!(dist2 > 0.0)) continue;
    switch (which) {
      case Condition::WSC: inf.offer(sc_ratio(obj, x, g, p)); break;
      case Condition::RSI: inf.offer(g.dot(e) / dist2); break;
      case Condition::EB: inf.offer(g.norm() / std::sqrt(dist2)); break;
      case Condition::QG: inf.offer(2.0 * cloud.gap(i) / dist2); break;
      default: break;
    }
  }
  return inf.result(who.c_str());
}

double estimate_sign_pl(const SmoothObjective& obj, const SampleCloud& cloud, const Vector& weights) {
  require_points(cloud, "estimate_sign_pl");
  if (weights.size() != obj.dimension()) throw ConfigError("estimate_sign_pl: weight dimension");
  const Vector inv_sqrt = weights.array().sqrt().inverse();
  Infimum inf;
  for (std::size_t i = 0; i < cloud.size(); ++i) {
    const double n1 = obj.gradient(cloud.point(i)).cwiseAbs().dot(inv_sqrt);
    inf.offer(0.5 * n1 * n1 / cloud.gap(i));
  }
  return inf.result("estimate_sign_pl");
}

namespace {

double max_component_grad_sq(const SmoothObjective& obj, const Vector& x) {
  double best = 0.0;
  for (Index c = 0; c < obj.num_components(); ++c)
    best = std::max(best, obj.component_gradient(c, x).squaredNorm());
  return best;
}

}  // namespace

double estimate_variance_bound(const SmoothObjective& obj, const SampleCloud& cloud) {
  if (!obj.is_finite_sum()) throw ConfigError("estimate_variance_bound: not a finite sum");
  require_points(cloud, "estimate_variance_bound");
  double best = 0.0;
  for (std::size_t i = 0; i < cloud.size(); ++i)
    best = std::max(best, max_component_grad_sq(obj, cloud.point(i)));
  return best;
}

double estimate_variance_bound(const SmoothObjective& obj, std::span<const IterateTrace> traces) {
  if (!obj.is_finite_sum()) throw ConfigError("estimate_variance_bound: not a finite sum");
  double best = 0.0;
  bool any = false;
  for (const auto& trace : traces) {
    if (!trace.has_points()) throw ConfigError("estimate_variance_bound: trace has no points");
    for (std::size_t j = 0; j < trace.size(); ++j) {
      best = std::max(best, max_component_grad_sq(obj, Vector(trace.point(j))));
      any = true;
    }
  }
  if (!any) throw EstimationError("estimate_variance_bound: no iterates");
  return best;
}

double estimate_proximal_pl(const CompositeProblem& problem, const SampleCloud& cloud,
                            std::optional<double> lambda) {
  require_points(cloud, "estimate_proximal_pl");
  const double lam = lambda.value_or(problem.lipschitz());
  Infimum inf;
  for (std::size_t i = 0; i < cloud.size(); ++i) {
    const Vector& x = cloud.point(i);
    if (problem.reg().value(x) == kInfinity) continue;
    inf.offer(0.5 * prox::compute_Dg(problem, x, lam) / cloud.gap(i));
  }
  return inf.result("estimate_proximal_pl");
}

double estimate_composite_qg(const CompositeProblem& problem, const SampleCloud& cloud) {
  require_points(cloud, "estimate_composite_qg");
  require_projections(cloud, "estimate_composite_qg");
  (void)problem;
  Infimum inf;
  for (std::size_t i = 0; i < cloud.size(); ++i) {
    const double dist2 = (cloud.point(i) - cloud.projection(i)).squaredNorm();
    if (dist2 > 0.0) inf.offer(2.0 * cloud.gap(i) / dist2);
  }
  return inf.result("estimate_composite_qg");
}

ProxEbPair proximal_eb_residual(const CompositeProblem& problem, const Vector& x) {
  const auto p = problem.project_to_solutions(x);
  if (!p) throw ConfigError("proximal_eb_residual: solution-set projection required");
  return ProxEbPair{(x - *p).norm(), prox::prox_residual(problem, x)};
}

double estimate_proximal_eb(const CompositeProblem& problem, const SampleCloud& cloud) {
  require_points(cloud, "estimate_proximal_eb");
  double best = 0.0;
  bool any = false;
  for (std::size_t i = 0; i < cloud.size(); ++i) {
    const ProxEbPair pr = proximal_eb_residual(problem, cloud.point(i));
    if (!(pr.residual > 0.0)) continue;
    best = std::max(best, pr.distance / pr.residual);
    any = true;
  }
  if (!any) throw EstimationError("estimate_proximal_eb: no usable sample");
  return best;
}

double kl_residual(const CompositeProblem& problem, const Vector& x) {
  const auto* sep = problem.reg().separable();
  if (!sep) throw ConfigError("kl_residual: regularizer has no coordinate subdifferential");
  const Vector g = problem.smooth().gradient(x);
  double total = 0.0;
  for (Index i = 0; i < x.size(); ++i) {
    const auto sub = sep->coord_subdifferential(i, x[i]);
    if (!sub) throw DomainError("kl_residual: x outside dom g");
    const double s = g[i] + sub->clamp(-g[i]);
    total += s * s;
  }
  return total;
}

double estimate_kl(const CompositeProblem& problem, const SampleCloud& cloud) {
  require_points(cloud, "estimate_kl");
  Infimum inf;
  for (std::size_t i = 0; i < cloud.size(); ++i)
    inf.offer(0.5 * kl_residual(problem, cloud.point(i)) / cloud.gap(i));
  return inf.result("estimate_kl");
}

double max_gap_at_stationary(const SmoothObjective& obj, const SampleCloud& cloud,
                             double grad_tol) {
  double worst = 0.0;
  for (std::size_t i = 0; i < cloud.size(); ++i)
    if (obj.gradient(cloud.point(i)).norm() <= grad_tol) worst = std::max(worst, cloud.gap(i));
  return worst;
}

ConditionReport estimate_conditions(const SmoothObjective& obj, const SampleCloud& cloud,
                                    const ReportOptions& opts) {
  ConditionReport r;
  r.problem_tag = obj.tag();
  r.L = obj.lipschitz();
  r.cloud = cloud.generation();
  r.cloud_size = cloud.size();
  r.pl = estimate_pl(obj, cloud);
  r.pl_inf = estimate_condition(obj, cloud, Condition::PLinf);
  r.sc = estimate_condition(obj, cloud, Condition::SC);
  if (cloud.has_projections()) {
    r.esc = estimate_condition(obj, cloud, Condition::ESC);
    r.wsc = estimate_condition(obj, cloud, Condition::WSC);
    r.rsi = estimate_condition(obj, cloud, Condition::RSI);
    r.eb = estimate_condition(obj, cloud, Condition::EB);
    r.qg = estimate_condition(obj, cloud, Condition::QG);
  }
  if (opts.sign_weights) r.sign_pl = estimate_sign_pl(obj, cloud, *opts.sign_weights);
  if (opts.variance_bound && obj.is_finite_sum()) r.variance_bound = estimate_variance_bound(obj, cloud);
  return r;
}

ConditionReport estimate_conditions(const CompositeProblem& problem, const SampleCloud& cloud) {
  ConditionReport r;
  r.problem_tag = problem.tag();
  r.L = problem.lipschitz();
  r.cloud = cloud.generation();
  r.cloud_size = cloud.size();
  r.proximal_pl = estimate_proximal_pl(problem, cloud);
  if (problem.reg().separable()) r.kl = estimate_kl(problem, cloud);
  if (cloud.has_projections()) {
    r.proximal_eb = estimate_proximal_eb(problem, cloud);
    r.qg = estimate_composite_qg(problem, cloud);
  }
  return r;
}

ChainVerdict verify_implication_chain(std::span<const ConditionReport> reports, double tol) {
  ChainVerdict verdict;
  auto add = [&](const ConditionReport& r, std::string name, double lhs, double rhs, bool pass) {
    verdict.checks.push_back(ChainCheck{r.problem_tag, std::move(name), lhs, rhs, pass});
    verdict.pass = verdict.pass && pass;
  };
  auto geq = [&](const ConditionReport& r, const std::string& name, double lhs, double rhs) {
    add(r, name, lhs, rhs, lhs >= rhs - tol * (1.0 + std::abs(rhs)));
  };
  auto implies = [&](const ConditionReport& r, const std::string& a, const std::optional<double>& va,
                     const std::string& b, const std::optional<double>& vb) {
    if (!va || !vb) return;
    const bool antecedent = *va > kPositiveThreshold;
    add(r, a + " > 0 => " + b + " > 0", *va, *vb, !antecedent || *vb > kPositiveThreshold);
  };
  for (const auto& r : reports) {
    if (!r.sc || !r.esc || !r.wsc || !r.rsi || !r.eb || !r.pl || !r.qg)
      throw ConfigError("verify_implication_chain: report for " + r.problem_tag +
                        " lacks smooth-condition constants");
    implies(r, "SC", r.sc, "ESC", r.esc);
    implies(r, "ESC", r.esc, "WSC", r.wsc);
    implies(r, "WSC", r.wsc, "RSI", r.rsi);
    implies(r, "RSI", r.rsi, "EB", r.eb);
    implies(r, "EB", r.eb, "PL", r.pl);
    implies(r, "PL", r.pl, "EB", r.eb);
    implies(r, "PL", r.pl, "QG", r.qg);
    geq(r, "ESC >= SC", *r.esc, *r.sc);
    geq(r, "WSC >= ESC", *r.wsc, *r.esc);
    geq(r, "RSI >= WSC/2", *r.rsi, 0.5 * *r.wsc);
    geq(r, "EB >= RSI", *r.eb, *r.rsi);
    geq(r, "PL >= EB^2/L", *r.pl, *r.eb * *r.eb / r.L);
    geq(r, "EB^2 >= PL*QG", *r.eb * *r.eb, *r.pl * *r.qg);
  }
  return verdict;
}

}  // namespace plab
