#include <cmath>

#include "plab/problems.hpp"
#include "plab/prox.hpp"
#include "plab/rng.hpp"

namespace plab::problems {

ReferenceSolution solve_composite_reference(const CompositeProblem& problem, const Vector& x0,
                                            double rel_tol, Index max_iters) {
  const double L = problem.lipschitz();
  Vector x = problem.reg().prox(x0, 1.0);
  double best = kInfinity;
  Index since_best = 0;
  ReferenceSolution out;
  for (Index k = 0; k < max_iters; ++k) {
    const Vector y = prox::forward_backward_step(problem, x, L);
    const double res = (y - x).norm();
    out.iterations = k;
    if (res <= rel_tol * (1.0 + x.norm())) break;
    // Stop once rounding noise dominates: no new best residual for a long stretch.
    if (res < best) {
      best = res;
      since_best = 0;
    } else if (++since_best > 5000) {
      break;
    }
    x = y;
  }
  out.x = x;
  out.value = problem.value(x);
  out.residual = prox::prox_residual(problem, x);
  return out;
}

namespace {

CompositeProblem with_reference(std::shared_ptr<const SmoothObjective> smooth,
                                std::shared_ptr<const Regularizer> reg, const std::string& tag) {
  const CompositeProblem bare(smooth, reg, std::nullopt, {}, tag);
  const Vector start = Vector::Zero(smooth->dimension());
  const ReferenceSolution ref = solve_composite_reference(bare, start);
  if (!(ref.residual <= 1e-8))
    throw EstimationError(tag + ": reference solve did not reach residual 1e-8");
  Vector xstar = ref.x;
  return CompositeProblem(std::move(smooth), std::move(reg), ref.value,
                          [xstar](const Vector&) { return xstar; }, tag);
}

}  // namespace

CompositeProblem make_l1_least_squares(Matrix A, Vector b, double lambda) {
  if (!(lambda > 0.0)) throw ConfigError("l1-least-squares: lambda must be positive");
  auto smooth = std::make_shared<LeastSquares>(std::move(A), std::move(b), true);
  return with_reference(smooth, prox::l1(lambda), "l1-least-squares");
}

CompositeProblem random_l1_least_squares(Index m, Index d, double lambda, std::uint64_t seed) {
  if (m < 1 || d < 1) throw ConfigError("random_l1_least_squares: need m, d >= 1");
  Rng rng(seed);
  Matrix A = normal_matrix(rng, m, d) / std::sqrt(static_cast<double>(m));
  Vector truth = Vector::Zero(d);
  for (Index i = 0; i < d; i += 3) truth[i] = rng.normal();
  Vector b = A * truth + 0.1 * normal_vector(rng, m);
  return make_l1_least_squares(std::move(A), std::move(b), lambda);
}

CompositeProblem make_svm_dual(Matrix M, double U) {
  if (!(U > 0.0)) throw ConfigError("svm-dual: U must be positive");
  auto smooth = std::make_shared<SvmDualObjective>(std::move(M));
  return with_reference(smooth, prox::box(0.0, U), "svm-dual");
}

Matrix svm_gram(const Matrix& points, const Vector& labels, double lambda_svm) {
  if (points.rows() == 0 || points.cols() == 0) throw ConfigError("svm-dual: empty data");
  if (labels.size() != points.rows()) throw ConfigError("svm-dual: label count mismatch");
  if (!(lambda_svm > 0.0)) throw ConfigError("svm-dual: lambda_svm must be positive");
  for (Index i = 0; i < labels.size(); ++i)
    if (labels[i] != 1.0 && labels[i] != -1.0)
      throw ConfigError("svm-dual: labels must be +1 or -1");
  const Matrix Z = labels.asDiagonal() * points;
  return (Z * Z.transpose()) / lambda_svm;
}

CompositeProblem svm_dual_from_data(const Matrix& points, const Vector& labels, double lambda_svm,
                                    double U) {
  return make_svm_dual(svm_gram(points, labels, lambda_svm), U);
}

CompositeProblem random_svm_dual(Index n, Index dim, double lambda_svm, double U,
                                 std::uint64_t seed) {
  if (n < 1 || dim < 1) throw ConfigError("random_svm_dual: need n, dim >= 1");
  Rng rng(seed);
  const Matrix points = normal_matrix(rng, n, dim);
  const Vector w = normal_vector(rng, dim);
  Vector labels(n);
  for (Index i = 0; i < n; ++i) {
    double s = points.row(i).dot(w) >= 0.0 ? 1.0 : -1.0;
    if (rng.uniform() < 0.1) s = -s;
    labels[i] = s;
  }
  return svm_dual_from_data(points, labels, lambda_svm, U);
}

}  // namespace plab::problems
