#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "plab/trace.hpp"

namespace plab {

enum class TheoremTag { T1, T3, T3Lbar, GS, SIGN, T4Dec, T4Const, SVRG, T5, T6 };

std::string to_string(TheoremTag tag);
std::optional<TheoremTag> parse_theorem_tag(const std::string& s);
bool is_stochastic(TheoremTag tag);
const std::vector<TheoremTag>& all_theorem_tags();

struct BoundParams {
  std::optional<double> mu;     // PL-type constant (mu_1 for GS, mu_{L[inf]} for SIGN)
  std::optional<double> L;
  std::optional<double> Lbar;   // mean coordinate constant (T3-Lbar)
  std::optional<double> C2;     // variance bound (T4)
  std::optional<double> alpha;  // constant step (T4-const, SVRG)
  std::optional<Index> d;
  std::optional<Index> m;       // SVRG inner length
};

enum class Verdict { Pass, Fail, Vacuous };
std::string to_string(Verdict v);

struct Checkpoint {
  std::int64_t k = 0;
  double observed = 0.0;  // gap, or trial-mean gap
  double bound = 0.0;
  double stderr_of_mean = 0.0;  // 0 for deterministic certificates
  bool pass = false;
};

struct StatisticalInfo {
  std::size_t trials = 0;
  double stderr_multiplier = 3.0;
};

struct RateCertificate {
  TheoremTag tag = TheoremTag::T1;
  BoundParams params;
  std::optional<double> rate;  // per-step factor where the bound is geometric
  std::vector<Checkpoint> checkpoints;
  Verdict verdict = Verdict::Fail;
  std::optional<StatisticalInfo> statistical;
  std::vector<std::string> notes;
  std::string algorithm_tag;
  std::string problem_tag;

  bool passed() const { return verdict != Verdict::Fail; }
};

struct CertifyOptions {
  // Defaults to {1, 5, 25, 125, 625} within the trace.
  std::optional<std::vector<std::int64_t>> checkpoints;
  // Deterministic only: check every recorded k, not just the checkpoints.
  bool all_iterations = true;
  double tolerance = 1e-9;
  double stderr_multiplier = 3.0;
};

inline constexpr std::size_t kMinStochasticTrials = 30;

std::vector<std::int64_t> default_checkpoints(std::size_t trace_length);

// gap_k <= rho^(k - k0) gap_k0 (1 + tol), rho = 1 - mu/L (T1, T5, GS) or
// 1 - mu (SIGN), clamped at 0. k0 is the first record with a finite gap.
RateCertificate certify_deterministic(const IterateTrace& trace, const BoundParams& params,
                                      TheoremTag tag, const CertifyOptions& opts = {});

// mean gap_k <= bound_k + m * stderr at each checkpoint. Needs >= 30 trials
// sharing x0.
RateCertificate certify_stochastic(std::span<const IterateTrace> traces, const BoundParams& params,
                                   TheoremTag tag, const CertifyOptions& opts = {});

// L C^2 alpha / (4 mu).
double t4_constant_plateau(double L, double C2, double alpha, double mu);

}  // namespace plab
