#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "harness_internal.hpp"
#include "plab/prox.hpp"
#include "plab/prox_solvers.hpp"
#include "plab/smooth_solvers.hpp"

namespace plab::harness {

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

std::string trace_csv(const std::vector<IterateTrace>& traces) {
  std::ostringstream os;
  os << "k,gap,step,index,seed\n";
  for (const auto& t : traces) {
    for (const auto& r : t.records) {
      os << r.k << ',' << format_double(r.objective_gap) << ',' << format_double(r.step_size) << ',';
      if (r.selected_index) os << *r.selected_index;
      os << ',' << r.seed << '\n';
    }
  }
  return os.str();
}

json vector_json(const Vector& v) {
  json a = json::array();
  for (Index i = 0; i < v.size(); ++i) a.push_back(v[i]);
  return a;
}

namespace {

json opt_json(const std::optional<double>& v) { return v ? json(*v) : json(nullptr); }

}  // namespace

json to_json(const RateCertificate& cert) {
  json params = json::object();
  const auto& p = cert.params;
  if (p.mu) params["mu"] = *p.mu;
  if (p.L) params["L"] = *p.L;
  if (p.Lbar) params["Lbar"] = *p.Lbar;
  if (p.C2) params["C2"] = *p.C2;
  if (p.alpha) params["alpha"] = *p.alpha;
  if (p.d) params["d"] = *p.d;
  if (p.m) params["m"] = *p.m;
  json cps = json::array();
  for (const auto& c : cert.checkpoints) {
    json jc = {{"k", c.k}, {"observed", c.observed}, {"bound", c.bound}, {"pass", c.pass}};
    if (cert.statistical) jc["stderr"] = c.stderr_of_mean;
    cps.push_back(std::move(jc));
  }
  json out = {{"theorem", to_string(cert.tag)},
              {"algorithm", cert.algorithm_tag},
              {"problem", cert.problem_tag},
              {"params", params},
              {"rate", opt_json(cert.rate)},
              {"checkpoints", cps},
              {"verdict", to_string(cert.verdict)},
              {"notes", cert.notes}};
  if (cert.statistical)
    out["statistical"] = {{"trials", cert.statistical->trials},
                          {"stderr_multiplier", cert.statistical->stderr_multiplier}};
  return out;
}

json to_json(const ConditionReport& r) {
  json constants = {{"SC", opt_json(r.sc)},
                    {"ESC", opt_json(r.esc)},
                    {"WSC", opt_json(r.wsc)},
                    {"RSI", opt_json(r.rsi)},
                    {"EB", opt_json(r.eb)},
                    {"PL", opt_json(r.pl)},
                    {"QG", opt_json(r.qg)},
                    {"PL_inf", opt_json(r.pl_inf)},
                    {"sign_PL", opt_json(r.sign_pl)},
                    {"proximal_PL", opt_json(r.proximal_pl)},
                    {"KL", opt_json(r.kl)},
                    {"proximal_EB_c", opt_json(r.proximal_eb)},
                    {"C2", opt_json(r.variance_bound)}};
  json cloud = {{"box_lo", vector_json(r.cloud.lo)},
                {"box_hi", vector_json(r.cloud.hi)},
                {"box_count", r.cloud.count},
                {"seed", r.cloud.seed},
                {"exclusion_gap", r.cloud.exclusion},
                {"added_points", r.cloud.added},
                {"excluded_points", r.cloud.excluded},
                {"size", r.cloud_size}};
  return {{"problem", r.problem_tag}, {"L", r.L}, {"constants", constants}, {"cloud", cloud}};
}

json to_json(const ChainVerdict& v) {
  json checks = json::array();
  for (const auto& c : v.checks)
    checks.push_back({{"problem", c.problem_tag},
                      {"check", c.name},
                      {"lhs", c.lhs},
                      {"rhs", c.rhs},
                      {"pass", c.pass}});
  return {{"pass", v.pass}, {"checks", checks}};
}

namespace {

bool tag_matches(TheoremTag tag, const SolverSpec& s) {
  switch (tag) {
    case TheoremTag::T1: return s.algorithm == "gd";
    case TheoremTag::T3: return s.algorithm == "cd-random";
    case TheoremTag::T3Lbar: return s.algorithm == "cd-lipschitz";
    case TheoremTag::GS: return s.algorithm == "cd-gs";
    case TheoremTag::SIGN: return s.algorithm == "sign-gd";
    case TheoremTag::T4Dec: return s.algorithm == "sgd" && s.schedule == "decreasing";
    case TheoremTag::T4Const: return s.algorithm == "sgd" && s.schedule == "constant";
    case TheoremTag::SVRG: return s.algorithm == "svrg";
    case TheoremTag::T5: return s.algorithm == "prox-gd";
    case TheoremTag::T6: return s.algorithm == "prox-cd";
  }
  return false;
}

bool is_smooth_algorithm(const std::string& a) { return a != "prox-gd" && a != "prox-cd"; }

struct Run {
  std::size_t index = 0;
  SolverSpec spec;
  std::vector<IterateTrace> traces;
  std::optional<Vector> sign_weights;
  std::optional<double> alpha;
  std::optional<Index> m;
};

class Experiment {
 public:
  Experiment(const ExperimentSpec& spec, const RunOverrides& ov) : spec_(spec), ov_(ov) {
    problem_ = build_problem(spec.problem);
    x0_ = spec.x0.value_or(problem_.x0);
    if (x0_.size() != problem_.smooth->dimension())
      throw SpecError("spec.x0: dimension " + std::to_string(x0_.size()) + " does not match problem " +
                      std::to_string(problem_.smooth->dimension()));
    if (problem_.composite) {
      composite_ = problem_.composite;
    } else {
      auto smooth = problem_.smooth;
      CompositeProblem::Projection proj;
      if (smooth->project_to_solutions(x0_))
        proj = [smooth](const Vector& x) { return *smooth->project_to_solutions(x); };
      composite_ = CompositeProblem(smooth, prox::zero(), smooth->optimum_value(), proj,
                                    smooth->tag());
    }
    validate();
  }

  RunResult run() {
    for (std::size_t i = 0; i < spec_.solvers.size(); ++i) runs_.push_back(run_solver(i));
    build_cloud_if_needed();
    json reports = json::object();
    std::optional<ChainVerdict> chain;
    if (spec_.conditions.enabled) {
      if (!problem_.composite) {
        ReportOptions ro;
        for (const auto& r : runs_)
          if (r.sign_weights) ro.sign_weights = r.sign_weights;
        smooth_report_ = guard([&] { return estimate_conditions(*problem_.smooth, *cloud_, ro); });
        reports["smooth"] = to_json(*smooth_report_);
        if (spec_.conditions.chain) {
          const ConditionReport one[] = {*smooth_report_};
          chain = guard([&] { return verify_implication_chain(one); });
        }
      }
      if (problem_.composite || needs_composite_constants()) {
        composite_report_ = guard([&] { return estimate_conditions(*composite_, *cloud_); });
        reports["composite"] = to_json(*composite_report_);
      }
      if (chain) reports["chain"] = to_json(*chain);
    }

    std::vector<std::pair<std::size_t, RateCertificate>> certs;
    for (const auto& c : spec_.certify)
      for (const auto& r : runs_)
        if (c.run ? *c.run == r.index : tag_matches(c.tag, r.spec)) certs.emplace_back(r.index, certify(c, r));

    return write(reports, chain, certs);
  }

 private:
  template <class Fn>
  auto guard(Fn&& fn) -> decltype(fn()) {
    try {
      return fn();
    } catch (const SpecError&) {
      throw;
    } catch (const Error& e) {
      throw SpecError(e.what());
    }
  }

  const SmoothObjective& smooth() const { return *problem_.smooth; }

  bool needs_composite_constants() const {
    for (const auto& c : spec_.certify)
      if (c.tag == TheoremTag::T5 || c.tag == TheoremTag::T6) return true;
    return false;
  }

  void validate() const {
    for (std::size_t i = 0; i < spec_.solvers.size(); ++i) {
      const auto& s = spec_.solvers[i];
      const std::string where = "solvers[" + std::to_string(i) + "]";
      if (is_smooth_algorithm(s.algorithm) && problem_.composite)
        throw SpecError(where + ": " + s.algorithm + " needs a smooth problem, got " + problem_.kind);
      if ((s.algorithm == "sgd" || s.algorithm == "svrg") && !smooth().is_finite_sum())
        throw SpecError(where + ": " + s.algorithm + " needs a finite-sum problem");
      if (s.algorithm == "cd-lipschitz" && !smooth().coord_lipschitz())
        throw SpecError(where + ": cd-lipschitz needs coordinate Lipschitz constants");
      if (s.weights && s.weights->size() != smooth().dimension())
        throw SpecError(where + ".config.weights: dimension mismatch");
    }
    for (std::size_t i = 0; i < spec_.certify.size(); ++i) {
      const auto& c = spec_.certify[i];
      const std::string where = "certify[" + std::to_string(i) + "]";
      bool any = false;
      for (std::size_t r = 0; r < spec_.solvers.size(); ++r)
        if (c.run ? *c.run == r : tag_matches(c.tag, spec_.solvers[r])) {
          if (!tag_matches(c.tag, spec_.solvers[r]))
            throw SpecError(where + ": " + to_string(c.tag) + " does not apply to " +
                            spec_.solvers[r].algorithm);
          any = true;
        }
      if (!any) throw SpecError(where + ": no solver run matches " + to_string(c.tag));
    }
  }

  std::uint64_t seed_for(const SolverSpec& s) const { return ov_.seed.value_or(s.seed); }
  std::size_t trials_for(const SolverSpec& s) const { return ov_.trials.value_or(s.trials); }

  std::optional<double> exact_mu() const { return smooth().known_pl_constant(); }

  Run run_solver(std::size_t i) {
    Run run;
    run.index = i;
    run.spec = spec_.solvers[i];
    const auto& s = run.spec;
    const auto& f = smooth();
    run.traces = guard([&]() -> std::vector<IterateTrace> {
      if (s.algorithm == "gd") return {gradient_descent(f, x0_, s.iters, s.exact_line_search)};
      if (s.algorithm == "cd-random")
        return coordinate_descent_random_trials(f, x0_, s.iters, seed_for(s), trials_for(s));
      if (s.algorithm == "cd-lipschitz")
        return coordinate_descent_lipschitz_sampled_trials(f, x0_, s.iters, seed_for(s), trials_for(s));
      if (s.algorithm == "cd-gs") return {coordinate_descent_gs(f, x0_, s.iters)};
      if (s.algorithm == "sign-gd") {
        if (s.weights) run.sign_weights = s.weights;
        else if (problem_.hessian) run.sign_weights = sign_weights_for_quadratic(*problem_.hessian);
        else run.sign_weights = Vector::Constant(f.dimension(), f.dimension() * f.lipschitz());
        return {sign_gradient_descent(f, x0_, s.iters, run.sign_weights)};
      }
      if (s.algorithm == "sgd") {
        std::optional<SgdSchedule> schedule;
        if (s.schedule == "constant") {
          run.alpha = s.alpha ? *s.alpha : *s.alpha_scale / f.lipschitz();
          schedule = SgdSchedule::constant(*run.alpha);
        } else {
          schedule = SgdSchedule::decreasing(schedule_mu(s));
        }
        return sgd(f, x0_, s.iters, *schedule, seed_for(s), trials_for(s));
      }
      if (s.algorithm == "svrg") {
        const double Lc = f.component_lipschitz();
        SvrgConfig cfg;
        cfg.alpha = s.alpha ? *s.alpha : *s.alpha_scale / Lc;
        cfg.mu = exact_mu();
        if (s.m) {
          cfg.inner_length = *s.m;
        } else {
          if (!cfg.mu) throw SpecError("svrg: m = auto needs an exact PL constant");
          cfg.inner_length = static_cast<Index>(std::ceil(40.0 * Lc / *cfg.mu));
        }
        cfg.outer_count = s.outer;
        run.alpha = cfg.alpha;
        run.m = cfg.inner_length;
        return svrg_trials(f, x0_, cfg, seed_for(s), trials_for(s));
      }
      ProxSolverConfig pc;
      pc.iters = s.iters;
      pc.step_scale = s.step_scale;
      pc.seed = seed_for(s);
      pc.trials = trials_for(s);
      if (s.algorithm == "prox-gd") return {proximal_gradient(*composite_, x0_, pc)};
      return proximal_coordinate_descent_trials(*composite_, x0_, pc);
    });
    return run;
  }

  double schedule_mu(const SolverSpec& s) const {
    switch (s.schedule_mu.kind) {
      case MuChoice::Kind::Value: return s.schedule_mu.value;
      case MuChoice::Kind::Estimated:
        throw SpecError("sgd: the schedule needs mu before the run; use a number or \"exact\"");
      default: {
        const auto mu = exact_mu();
        if (!mu) throw SpecError("sgd: problem has no exact PL constant; give config.mu");
        return *mu;
      }
    }
  }

  bool needs_cloud() const {
    if (spec_.conditions.enabled) return true;
    for (const auto& c : spec_.certify) {
      if (c.mu.kind == MuChoice::Kind::Estimated) return true;
      if (c.mu.kind == MuChoice::Kind::Default && !default_is_exact(c.tag)) return true;
    }
    return false;
  }

  bool default_is_exact(TheoremTag tag) const {
    switch (tag) {
      case TheoremTag::GS:
      case TheoremTag::SIGN:
        return false;
      case TheoremTag::T5:
      case TheoremTag::T6:
        return !problem_.composite && exact_mu().has_value();
      default:
        return exact_mu().has_value();
    }
  }

  void build_cloud_if_needed() {
    if (!needs_cloud()) return;
    const CloudSpec cs = [&] {
      CloudSpec c = spec_.conditions.cloud;
      if (ov_.seed) c.seed = *ov_.seed;
      return c;
    }();
    cloud_ = guard([&] {
      return problem_.composite ? make_cloud(*composite_, x0_, cs) : make_cloud(smooth(), x0_, cs);
    });
    if (!spec_.conditions.enabled || spec_.conditions.include_iterates) {
      for (const auto& r : runs_) {
        const std::size_t n = std::min(r.traces.size(), spec_.conditions.iterate_trials);
        for (std::size_t t = 0; t < n; ++t) cloud_->add_trace(r.traces[t]);
      }
    }
  }

  double resolve_mu(const CertifySpec& c, const Run& r) {
    MuChoice::Kind kind = c.mu.kind;
    if (kind == MuChoice::Kind::Value) return c.mu.value;
    if (kind == MuChoice::Kind::Default)
      kind = default_is_exact(c.tag) ? MuChoice::Kind::Exact : MuChoice::Kind::Estimated;
    if (kind == MuChoice::Kind::Exact) {
      if (c.tag == TheoremTag::GS || c.tag == TheoremTag::SIGN ||
          ((c.tag == TheoremTag::T5 || c.tag == TheoremTag::T6) && problem_.composite) ||
          !exact_mu())
        throw SpecError(to_string(c.tag) + ": no exact constant available; use \"estimated\"");
      return *exact_mu();
    }
    return guard([&] {
      switch (c.tag) {
        case TheoremTag::GS: return estimate_condition(smooth(), *cloud_, Condition::PLinf);
        case TheoremTag::SIGN: return estimate_sign_pl(smooth(), *cloud_, *r.sign_weights);
        case TheoremTag::T5:
        case TheoremTag::T6: return estimate_proximal_pl(*composite_, *cloud_);
        default: return estimate_pl(smooth(), *cloud_);
      }
    });
  }

  RateCertificate certify(const CertifySpec& c, const Run& r) {
    BoundParams bp;
    bp.mu = resolve_mu(c, r);
    const auto& f = smooth();
    bp.L = f.lipschitz();
    bp.d = f.dimension();
    CertifyOptions opts;
    opts.checkpoints = c.checkpoints;
    switch (c.tag) {
      case TheoremTag::T3Lbar: bp.Lbar = f.coord_lipschitz()->mean(); break;
      case TheoremTag::T4Dec:
      case TheoremTag::T4Const:
        bp.C2 = guard([&] { return estimate_variance_bound(f, r.traces); });
        bp.alpha = r.alpha;
        break;
      case TheoremTag::SVRG:
        bp.L = f.component_lipschitz();
        bp.alpha = r.alpha;
        bp.m = r.m;
        break;
      default: break;
    }
    return guard([&] {
      if (is_stochastic(c.tag)) return certify_stochastic(r.traces, bp, c.tag, opts);
      return certify_deterministic(r.traces.front(), bp, c.tag, opts);
    });
  }

  static void write_file(const std::filesystem::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw SpecError("cannot write " + path.string());
    out << text;
  }

  RunResult write(const json& reports, const std::optional<ChainVerdict>& chain,
                  const std::vector<std::pair<std::size_t, RateCertificate>>& certs) {
    namespace fs = std::filesystem;
    RunResult result;
    result.output_dir = ov_.out ? *ov_.out : fs::path(spec_.output.value_or("plab-out/" + spec_.name));
    std::error_code ec;
    fs::create_directories(result.output_dir / "runs", ec);
    if (ec) throw SpecError("cannot create " + result.output_dir.string() + ": " + ec.message());

    json warnings = json::array();
    json runs = json::array();
    for (const auto& r : runs_) {
      const fs::path dir = result.output_dir / "runs" / (std::to_string(r.index) + "-" + r.spec.algorithm);
      fs::create_directories(dir, ec);
      if (ec) throw SpecError("cannot create " + dir.string() + ": " + ec.message());
      write_file(dir / "trace.csv", trace_csv(r.traces));
      double final_sum = 0.0;
      for (const auto& t : r.traces) final_sum += t.back().objective_gap;
      json rw = json::array();
      for (const auto& t : r.traces)
        for (const auto& w : t.warnings) rw.push_back(w);
      if (!rw.empty()) {
        rw = json::array({rw.front()});
        warnings.push_back(r.spec.algorithm + ": " + rw.front().get<std::string>());
      }
      runs.push_back({{"index", r.index},
                      {"algorithm", r.spec.algorithm},
                      {"trials", r.traces.size()},
                      {"records", r.traces.front().size()},
                      {"final_gap_mean", final_sum / static_cast<double>(r.traces.size())},
                      {"warnings", rw}});
    }

    json cert_json = json::array();
    json verdicts = json::array();
    bool all_pass = true;
    for (const auto& [run, cert] : certs) {
      json jc = to_json(cert);
      jc["run"] = run;
      cert_json.push_back(jc);
      verdicts.push_back({{"theorem", to_string(cert.tag)},
                          {"run", run},
                          {"algorithm", cert.algorithm_tag},
                          {"verdict", to_string(cert.verdict)}});
      if (cert.verdict == Verdict::Fail) all_pass = false;
      if (cert.verdict == Verdict::Vacuous)
        warnings.push_back(to_string(cert.tag) + " on run " + std::to_string(run) +
                           ": bound vacuous (" + (cert.notes.empty() ? "" : cert.notes.front()) + ")");
    }
    if (chain && !chain->pass) all_pass = false;

    if (!reports.empty()) write_file(result.output_dir / "conditions.json", reports.dump(2) + "\n");
    write_file(result.output_dir / "certificates.json", cert_json.dump(2) + "\n");

    result.exit_code = all_pass ? 0 : 1;
    result.summary = {{"name", spec_.name},
                      {"problem",
                       {{"kind", problem_.kind},
                        {"tag", composite_->tag()},
                        {"dimension", composite_->dimension()},
                        {"L", composite_->lipschitz()}}},
                      {"runs", runs},
                      {"certificates", verdicts},
                      {"chain", chain ? json(chain->pass) : json(nullptr)},
                      {"warnings", warnings},
                      {"all_passed", all_pass},
                      {"exit_code", result.exit_code}};
    write_file(result.output_dir / "summary.json", result.summary.dump(2) + "\n");
    return result;
  }

  const ExperimentSpec& spec_;
  const RunOverrides& ov_;
  BuiltProblem problem_;
  Vector x0_;
  std::optional<CompositeProblem> composite_;
  std::vector<Run> runs_;
  std::optional<SampleCloud> cloud_;
  std::optional<ConditionReport> smooth_report_;
  std::optional<ConditionReport> composite_report_;
};

}  // namespace

RunResult run_experiment(const ExperimentSpec& spec, const RunOverrides& overrides) {
  Experiment ex(spec, overrides);
  return ex.run();
}

}  // namespace plab::harness
