#include "harness_internal.hpp"
#include "plab/problems.hpp"
#include "plab/prox.hpp"

namespace plab::harness {

namespace {

std::optional<Matrix> find_matrix(const ProblemSpec& spec, const char* name) {
  if (spec.matrices.contains(name))
    return json_matrix(spec.matrices[name], std::string("problem.matrices.") + name);
  if (auto it = spec.csv.find(name); it != spec.csv.end()) return read_csv_matrix(it->second);
  return std::nullopt;
}

std::optional<Vector> find_vector(const ProblemSpec& spec, const char* name) {
  if (spec.matrices.contains(name))
    return json_vector(spec.matrices[name], std::string("problem.matrices.") + name);
  if (auto it = spec.csv.find(name); it != spec.csv.end()) {
    const Matrix M = read_csv_matrix(it->second);
    if (M.cols() == 1) return Vector(M.col(0));
    if (M.rows() == 1) return Vector(M.row(0).transpose());
    throw SpecError(it->second.string() + ": expected a single row or column");
  }
  return std::nullopt;
}

Matrix need_matrix(const ProblemSpec& spec, const char* name) {
  auto M = find_matrix(spec, name);
  if (!M) throw SpecError("problem " + spec.kind + ": matrix \"" + name + "\" required");
  return *M;
}

Vector need_vector(const ProblemSpec& spec, const char* name) {
  auto v = find_vector(spec, name);
  if (!v) throw SpecError("problem " + spec.kind + ": vector \"" + name + "\" required");
  return *v;
}

bool has_data(const ProblemSpec& spec, const char* name) {
  return spec.matrices.contains(name) || spec.csv.count(name) > 0;
}

bool get_bool(const json& j, const char* key, bool fallback) {
  if (!j.contains(key)) return fallback;
  if (!j[key].is_boolean()) throw SpecError(std::string("problem.params.") + key + ": expected a boolean");
  return j[key].get<bool>();
}

Index positive_index(const json& j, const char* key, Index fallback) {
  const Index v = get_index(j, key, "problem.params", fallback);
  if (v < 1) throw SpecError(std::string("problem.params.") + key + ": must be positive");
  return v;
}

}  // namespace

BuiltProblem build_problem(const ProblemSpec& spec) {
  using namespace plab::problems;
  BuiltProblem out;
  out.kind = spec.kind;
  const json& p = spec.params;
  try {
    if (spec.kind == "invex") {
      out.smooth = std::make_shared<InvexExample>();
      out.x0 = Vector::Constant(1, 2.0);
    } else if (spec.kind == "quadratic") {
      std::shared_ptr<Quadratic> q;
      if (p.contains("diag")) {
        const Vector diag = json_vector(p["diag"], "problem.params.diag");
        std::optional<Vector> center = find_vector(spec, "center");
        q = Quadratic::diagonal(diag, center);
      } else {
        const Matrix Q = need_matrix(spec, "Q");
        Vector center = find_vector(spec, "center").value_or(Vector::Zero(Q.rows()));
        q = std::make_shared<Quadratic>(Q, center);
      }
      out.hessian = q->Q();
      out.x0 = Vector::Ones(q->dimension());
      out.smooth = q;
    } else if (spec.kind == "least-squares") {
      auto ls = std::make_shared<LeastSquares>(need_matrix(spec, "A"), need_vector(spec, "b"),
                                               get_bool(p, "halved", true));
      out.hessian = ls->scale() * ls->A().transpose() * ls->A();
      out.x0 = Vector::Zero(ls->dimension());
      out.smooth = ls;
    } else if (spec.kind == "rank-deficient-ls") {
      const auto rd = build_rank_deficient_ls(positive_index(p, "m", 20), positive_index(p, "d", 10),
                                              positive_index(p, "r", 6), spec.seed,
                                              get_bool(p, "halved", true));
      out.hessian = rd.problem->scale() * rd.problem->A().transpose() * rd.problem->A();
      out.x0 = Vector::Ones(rd.problem->dimension());
      out.smooth = rd.problem;
    } else if (spec.kind == "finite-sum-ls") {
      std::shared_ptr<FiniteSumLeastSquares> fs;
      if (has_data(spec, "A"))
        fs = std::make_shared<FiniteSumLeastSquares>(need_matrix(spec, "A"), need_vector(spec, "b"));
      else
        fs = random_finite_sum_ls(positive_index(p, "n", 10), positive_index(p, "d", 3), spec.seed);
      out.hessian = fs->scale() * fs->A().transpose() * fs->A();
      out.x0 = Vector::Ones(fs->dimension());
      out.smooth = fs;
    } else if (spec.kind == "logistic") {
      const double l2 = get_number(p, "l2", "problem.params", 0.1);
      std::shared_ptr<LogisticRegression> lr;
      if (has_data(spec, "features"))
        lr = std::make_shared<LogisticRegression>(need_matrix(spec, "features"),
                                                  need_vector(spec, "labels"), l2);
      else
        lr = random_logistic(positive_index(p, "n", 50), positive_index(p, "d", 5), l2, spec.seed);
      out.x0 = Vector::Zero(lr->dimension());
      out.smooth = lr;
    } else if (spec.kind == "l1-least-squares") {
      const double lambda = get_number(p, "lambda", "problem.params", 0.1);
      CompositeProblem cp =
          has_data(spec, "A")
              ? make_l1_least_squares(need_matrix(spec, "A"), need_vector(spec, "b"), lambda)
              : random_l1_least_squares(positive_index(p, "m", 30), positive_index(p, "d", 10),
                                        lambda, spec.seed);
      const auto& ls = static_cast<const LeastSquares&>(cp.smooth());
      out.hessian = ls.A().transpose() * ls.A();
      out.x0 = Vector::Zero(cp.dimension());
      out.smooth = cp.smooth_ptr();
      out.composite = std::move(cp);
    } else if (spec.kind == "svm-dual") {
      const double U = get_number(p, "U", "problem.params", 1.0);
      const double lambda_svm = get_number(p, "lambda_svm", "problem.params", 1.0);
      std::optional<CompositeProblem> cp;
      if (has_data(spec, "M"))
        cp = make_svm_dual(need_matrix(spec, "M"), U);
      else if (has_data(spec, "points"))
        cp = svm_dual_from_data(need_matrix(spec, "points"), need_vector(spec, "labels"),
                                lambda_svm, U);
      else
        cp = random_svm_dual(positive_index(p, "n", 20), positive_index(p, "dim", 5), lambda_svm,
                             U, spec.seed);
      out.hessian = static_cast<const SvmDualObjective&>(cp->smooth()).M();
      out.x0 = Vector::Zero(cp->dimension());
      out.smooth = cp->smooth_ptr();
      out.composite = std::move(cp);
    } else {
      throw SpecError("problem: unknown kind \"" + spec.kind + "\"");
    }
  } catch (const SpecError&) {
    throw;
  } catch (const Error& e) {
    throw SpecError(std::string("problem ") + spec.kind + ": " + e.what());
  }
  return out;
}

}  // namespace plab::harness
