#include "plab/certify.hpp"

#include <algorithm>
#include <cmath>
#include <functional>

#include "plab/smooth_solvers.hpp"

namespace plab {

namespace {

struct TagName {
  TheoremTag tag;
  const char* name;
};

constexpr TagName kTagNames[] = {
    {TheoremTag::T1, "T1"},           {TheoremTag::T3, "T3"},
    {TheoremTag::T3Lbar, "T3-Lbar"},  {TheoremTag::GS, "GS"},
    {TheoremTag::SIGN, "SIGN"},       {TheoremTag::T4Dec, "T4-dec"},
    {TheoremTag::T4Const, "T4-const"}, {TheoremTag::SVRG, "SVRG"},
    {TheoremTag::T5, "T5"},           {TheoremTag::T6, "T6"},
};

double require(const std::optional<double>& v, TheoremTag tag, const char* name) {
  if (!v) throw ConfigError(to_string(tag) + ": parameter " + name + " required");
  return *v;
}

Index require(const std::optional<Index>& v, TheoremTag tag, const char* name) {
  if (!v) throw ConfigError(to_string(tag) + ": parameter " + name + " required");
  return *v;
}

std::vector<std::int64_t> select_checkpoints(const CertifyOptions& opts, std::size_t length) {
  std::vector<std::int64_t> ks = opts.checkpoints ? *opts.checkpoints : default_checkpoints(length);
  std::vector<std::int64_t> out;
  for (auto k : ks)
    if (k >= 0 && static_cast<std::size_t>(k) < length) out.push_back(k);
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

// Geometric factor; a negative factor is clamped to 0 and noted.
double clamp_rate(double rho, RateCertificate& cert) {
  if (rho < 0.0) {
    cert.notes.push_back("misconfiguration: rate factor " + std::to_string(rho) +
                         " < 0 (constant exceeds its admissible range); clamped to 0");
    return 0.0;
  }
  return rho;
}

}  // namespace

std::string to_string(TheoremTag tag) {
  for (const auto& t : kTagNames)
    if (t.tag == tag) return t.name;
  return "?";
}

std::optional<TheoremTag> parse_theorem_tag(const std::string& s) {
  for (const auto& t : kTagNames)
    if (s == t.name) return t.tag;
  return std::nullopt;
}

bool is_stochastic(TheoremTag tag) {
  switch (tag) {
    case TheoremTag::T1:
    case TheoremTag::GS:
    case TheoremTag::SIGN:
    case TheoremTag::T5:
      return false;
    default:
      return true;
  }
}

const std::vector<TheoremTag>& all_theorem_tags() {
  static const std::vector<TheoremTag> tags = [] {
    std::vector<TheoremTag> v;
    for (const auto& t : kTagNames) v.push_back(t.tag);
    return v;
  }();
  return tags;
}

std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::Pass: return "pass";
    case Verdict::Fail: return "fail";
    case Verdict::Vacuous: return "vacuous";
  }
  return "?";
}

std::vector<std::int64_t> default_checkpoints(std::size_t trace_length) {
  std::vector<std::int64_t> out;
  for (std::int64_t k : {1, 5, 25, 125, 625})
    if (static_cast<std::size_t>(k) < trace_length) out.push_back(k);
  return out;
}

double t4_constant_plateau(double L, double C2, double alpha, double mu) {
  return L * C2 * alpha / (4.0 * mu);
}

RateCertificate certify_deterministic(const IterateTrace& trace, const BoundParams& params,
                                      TheoremTag tag, const CertifyOptions& opts) {
  if (is_stochastic(tag))
    throw ConfigError(to_string(tag) + " is a statistical certificate; use certify_stochastic");
  RateCertificate cert;
  cert.tag = tag;
  cert.params = params;
  cert.algorithm_tag = trace.algorithm_tag;
  cert.problem_tag = trace.problem_tag;
  const double mu = require(params.mu, tag, "mu");
  double rho = 0.0;
  if (tag == TheoremTag::SIGN) {
    rho = 1.0 - mu;
  } else {
    const double L = require(params.L, tag, "L");
    if (!(L > 0.0)) throw ConfigError(to_string(tag) + ": L must be positive");
    rho = 1.0 - mu / L;
  }
  if (!(mu >= 0.0)) throw ConfigError(to_string(tag) + ": mu must be non-negative");
  rho = clamp_rate(rho, cert);
  cert.rate = rho;

  const std::size_t k0 = trace.first_finite();
  if (k0 >= trace.size()) throw ConfigError(to_string(tag) + ": trace has no finite gap");
  if (k0 > 0)
    cert.notes.push_back("certification starts at k = " + std::to_string(k0) +
                         " (earlier records have infinite gap)");
  const double gap0 = trace.records[k0].objective_gap;
  if (std::isnan(gap0)) throw ConfigError(to_string(tag) + ": exact gap_0 required");

  auto check = [&](std::size_t j) {
    const auto& rec = trace.records[j];
    const double bound = std::pow(rho, static_cast<double>(j - k0)) * gap0;
    Checkpoint cp{rec.k, rec.objective_gap, bound, 0.0,
                  rec.objective_gap <= bound * (1.0 + opts.tolerance)};
    return cp;
  };

  bool ok = true;
  std::optional<Checkpoint> first_failure;
  if (opts.all_iterations) {
    for (std::size_t j = k0; j < trace.size(); ++j) {
      const Checkpoint cp = check(j);
      if (!cp.pass && !first_failure) first_failure = cp;
      ok = ok && cp.pass;
    }
  }
  for (auto k : select_checkpoints(opts, trace.size())) {
    if (static_cast<std::size_t>(k) < k0) continue;
    const Checkpoint cp = check(static_cast<std::size_t>(k));
    ok = ok && cp.pass;
    cert.checkpoints.push_back(cp);
  }
  if (first_failure) {
    cert.checkpoints.push_back(*first_failure);
    std::sort(cert.checkpoints.begin(), cert.checkpoints.end(),
              [](const Checkpoint& a, const Checkpoint& b) { return a.k < b.k; });
    cert.checkpoints.erase(std::unique(cert.checkpoints.begin(), cert.checkpoints.end(),
                                       [](const Checkpoint& a, const Checkpoint& b) {
                                         return a.k == b.k;
                                       }),
                           cert.checkpoints.end());
    cert.notes.push_back("first violation at k = " + std::to_string(first_failure->k));
  }
  cert.verdict = ok ? Verdict::Pass : Verdict::Fail;
  return cert;
}

RateCertificate certify_stochastic(std::span<const IterateTrace> traces, const BoundParams& params,
                                   TheoremTag tag, const CertifyOptions& opts) {
  if (!is_stochastic(tag))
    throw ConfigError(to_string(tag) + " is a deterministic certificate; use certify_deterministic");
  if (traces.size() < kMinStochasticTrials)
    throw ConfigError(to_string(tag) + ": at least 30 trials required");
  RateCertificate cert;
  cert.tag = tag;
  cert.params = params;
  cert.statistical = StatisticalInfo{traces.size(), opts.stderr_multiplier};
  cert.algorithm_tag = traces.front().algorithm_tag;
  cert.problem_tag = traces.front().problem_tag;

  std::size_t length = traces.front().size();
  for (const auto& t : traces) length = std::min(length, t.size());
  if (length == 0) throw ConfigError(to_string(tag) + ": empty trace");
  const double gap0 = traces.front().records.front().objective_gap;
  if (!std::isfinite(gap0)) throw ConfigError(to_string(tag) + ": exact finite gap_0 required");
  for (const auto& t : traces)
    if (t.records.front().objective_gap != gap0)
      throw ConfigError(to_string(tag) + ": trials must share the starting point");

  const double mu = require(params.mu, tag, "mu");
  if (!(mu > 0.0)) throw ConfigError(to_string(tag) + ": mu must be positive");

  // bound(k) for this tag; vacuous bounds short-circuit below.
  std::function<double(double)> bound;
  bool vacuous = false;
  switch (tag) {
    case TheoremTag::T3:
    case TheoremTag::T6:
    case TheoremTag::T3Lbar: {
      const double Lc = tag == TheoremTag::T3Lbar ? require(params.Lbar, tag, "Lbar")
                                                  : require(params.L, tag, "L");
      const double d = static_cast<double>(require(params.d, tag, "d"));
      const double rho = clamp_rate(1.0 - mu / (d * Lc), cert);
      cert.rate = rho;
      bound = [=](double k) { return std::pow(rho, k) * gap0; };
      break;
    }
    case TheoremTag::T4Dec: {
      const double L = require(params.L, tag, "L");
      const double C2 = require(params.C2, tag, "C2");
      bound = [=](double k) { return L * C2 / (2.0 * k * mu * mu); };
      break;
    }
    case TheoremTag::T4Const: {
      const double L = require(params.L, tag, "L");
      const double C2 = require(params.C2, tag, "C2");
      const double alpha = require(params.alpha, tag, "alpha");
      if (!(alpha < 1.0 / (2.0 * mu))) {
        vacuous = true;
        cert.notes.push_back("step precondition alpha < 1/(2 mu) violated; bound vacuous");
        break;
      }
      const double rho = 1.0 - 2.0 * mu * alpha;
      const double plateau = t4_constant_plateau(L, C2, alpha, mu);
      cert.rate = rho;
      bound = [=](double k) { return std::pow(rho, k) * gap0 + plateau; };
      break;
    }
    case TheoremTag::SVRG: {
      const double L = require(params.L, tag, "L");
      const double alpha = require(params.alpha, tag, "alpha");
      const Index m = require(params.m, tag, "m");
      const double rho = svrg_contraction(mu, L, alpha, m);
      if (!(rho < 1.0)) {
        vacuous = true;
        cert.notes.push_back("contraction factor >= 1; bound vacuous");
        break;
      }
      cert.rate = rho;
      bound = [=](double s) { return std::pow(rho, s) * gap0; };
      break;
    }
    default:
      throw ConfigError("certify_stochastic: unsupported tag");
  }

  if (vacuous) {
    cert.verdict = Verdict::Vacuous;
    return cert;
  }

  bool ok = true;
  const double n = static_cast<double>(traces.size());
  for (auto k : select_checkpoints(opts, length)) {
    if (tag == TheoremTag::T4Dec && k == 0) continue;
    double sum = 0.0;
    for (const auto& t : traces) sum += t.records[static_cast<std::size_t>(k)].objective_gap;
    const double mean = sum / n;
    double ss = 0.0;
    for (const auto& t : traces) {
      const double e = t.records[static_cast<std::size_t>(k)].objective_gap - mean;
      ss += e * e;
    }
    const double se = std::sqrt(ss / (n - 1.0)) / std::sqrt(n);
    const double b = bound(static_cast<double>(k));
    const bool pass = std::isfinite(mean) &&
                      mean <= b * (1.0 + opts.tolerance) + opts.stderr_multiplier * se;
    cert.checkpoints.push_back(Checkpoint{k, mean, b, se, pass});
    ok = ok && pass;
  }
  if (cert.checkpoints.empty()) throw ConfigError(to_string(tag) + ": no checkpoint within traces");
  cert.verdict = ok ? Verdict::Pass : Verdict::Fail;
  return cert;
}

}  // namespace plab
