#pragma once

#include <memory>
#include <optional>
#include <string>

#include "plab/composite.hpp"
#include "plab/objective.hpp"

namespace plab::problems {

// Eigen-decomposition of a symmetric PSD matrix with the rank decided at a
// relative tolerance: eigenvalues below tol * max(1, lambda_max) count as zero.
struct PsdSpectrum {
  Vector eigenvalues;   // ascending
  Matrix eigenvectors;  // columns
  Index rank = 0;
  double lambda_max = 0.0;
  double lambda_min_positive = 0.0;  // 0 when the matrix is zero
  Matrix range_projector() const;

  static PsdSpectrum of(const Matrix& symmetric, double rel_tol = 1e-10);
};

// f(x) = 1/2 (x - c)' Q (x - c) + f0 with Q symmetric PSD. Minimizers form
// the affine set c + null(Q).
class Quadratic final : public SmoothObjective {
 public:
  Quadratic(Matrix Q, Vector center, double offset = 0.0);

  static std::shared_ptr<Quadratic> diagonal(const Vector& diag, std::optional<Vector> center = {});

  const Matrix& Q() const { return Q_; }
  const Vector& center() const { return center_; }
  double offset() const { return offset_; }
  const PsdSpectrum& spectrum() const { return spectrum_; }

  Index dimension() const override { return Q_.rows(); }
  double value(const Vector& x) const override;
  Vector gradient(const Vector& x) const override;
  double coord_gradient(const Vector& x, Index i) const override;
  double lipschitz() const override { return spectrum_.lambda_max; }
  std::optional<Vector> coord_lipschitz() const override { return Vector(Q_.diagonal()); }
  std::optional<double> optimum_value() const override { return offset_; }
  std::optional<Vector> project_to_solutions(const Vector& x) const override;
  double optimality_gap(const Vector& x) const override;
  std::optional<double> curvature(const Vector& v) const override { return v.dot(Q_ * v); }
  std::optional<double> known_pl_constant() const override {
    return spectrum_.lambda_min_positive;
  }
  std::string tag() const override { return "quadratic"; }

 private:
  Matrix Q_;
  Vector center_;
  double offset_;
  PsdSpectrum spectrum_;
  Matrix range_projector_;
};

// f(x) = (s/2) ||Ax - b||^2 with s = 1 when halved, s = 2 otherwise.
// f* is the residual at the least-norm solution pinv(A) b.
class LeastSquares : public SmoothObjective {
 public:
  LeastSquares(Matrix A, Vector b, bool halved = true);

  const Matrix& A() const { return A_; }
  const Vector& b() const { return b_; }
  bool halved() const { return halved_; }
  double scale() const { return scale_; }
  const Vector& least_norm_solution() const { return x_star_; }
  Index rank() const { return rank_; }
  // Smallest non-zero singular value of A.
  double theta() const { return theta_; }

  Index dimension() const override { return A_.cols(); }
  double value(const Vector& x) const override;
  Vector gradient(const Vector& x) const override;
  double coord_gradient(const Vector& x, Index i) const override;
  double lipschitz() const override { return lipschitz_; }
  std::optional<Vector> coord_lipschitz() const override;
  std::optional<double> optimum_value() const override { return f_star_; }
  std::optional<Vector> project_to_solutions(const Vector& x) const override;
  double optimality_gap(const Vector& x) const override;
  std::optional<double> curvature(const Vector& v) const override;
  // scale * theta^2 = lambda_min^+ of the Hessian.
  std::optional<double> known_pl_constant() const override;
  std::string tag() const override { return halved_ ? "least-squares" : "least-squares-full"; }

 protected:
  LeastSquares(Matrix A, Vector b, double scale, bool halved);

 private:
  void factor();

  Matrix A_;
  Vector b_;
  bool halved_;
  double scale_;
  Vector x_star_;
  Matrix row_space_;  // orthonormal basis of range(A')
  Index rank_ = 0;
  double theta_ = 0.0;
  double lipschitz_ = 0.0;
  double f_star_ = 0.0;
};

// f(x) = (1/n) sum_i f_i(x), f_i(x) = 1/2 (a_i' x - b_i)^2 (row i of A).
class FiniteSumLeastSquares final : public LeastSquares {
 public:
  FiniteSumLeastSquares(Matrix A, Vector b);

  Index num_components() const override { return A().rows(); }
  double component_value(Index i, const Vector& x) const override;
  Vector component_gradient(Index i, const Vector& x) const override;
  double component_lipschitz() const override { return component_lipschitz_; }
  std::string tag() const override { return "finite-sum-ls"; }

 private:
  double component_lipschitz_ = 0.0;
};

// f(x) = sum_i log(1 + exp(b_i a_i' x)) + (l2/2) ||x||^2, rows of `features`
// are the a_i. When a minimizer is found by Newton's method it is stored and
// serves as f* / x_p (l2 > 0 guarantees existence).
class LogisticRegression final : public SmoothObjective {
 public:
  LogisticRegression(Matrix features, Vector labels, double l2 = 0.0);

  const Matrix& features() const { return A_; }
  const Vector& labels() const { return labels_; }
  double l2() const { return l2_; }
  const std::optional<Vector>& minimizer() const { return x_star_; }

  Index dimension() const override { return A_.cols(); }
  double value(const Vector& x) const override;
  Vector gradient(const Vector& x) const override;
  double lipschitz() const override { return lipschitz_; }
  std::optional<Vector> coord_lipschitz() const override;
  std::optional<double> optimum_value() const override { return f_star_; }
  std::optional<Vector> project_to_solutions(const Vector& x) const override;
  std::string tag() const override { return "logistic"; }

 private:
  void solve_newton();

  Matrix A_;
  Vector labels_;
  double l2_;
  double lipschitz_ = 0.0;
  std::optional<Vector> x_star_;
  std::optional<double> f_star_;
};

// f(x) = x^2 + 3 sin^2(x): invex, not convex, PL with mu = 1/32, L = 8.
class InvexExample final : public SmoothObjective {
 public:
  static constexpr double kPlConstant = 1.0 / 32.0;
  static constexpr double kLipschitz = 8.0;  // max f''(x) = 2 + 6 cos(2x)

  Index dimension() const override { return 1; }
  double value(const Vector& x) const override;
  Vector gradient(const Vector& x) const override;
  double second_derivative(double x) const;
  double lipschitz() const override { return kLipschitz; }
  std::optional<Vector> coord_lipschitz() const override { return Vector::Constant(1, kLipschitz); }
  std::optional<double> optimum_value() const override { return 0.0; }
  std::optional<Vector> project_to_solutions(const Vector& x) const override {
    return Vector::Zero(x.size());
  }
  double optimality_gap(const Vector& x) const override { return value(x); }
  std::optional<double> known_pl_constant() const override { return kPlConstant; }
  std::string tag() const override { return "invex"; }
};

// f(w) = 1/2 w' M w - sum_i w_i (the smooth part of the SVM dual).
class SvmDualObjective final : public SmoothObjective {
 public:
  explicit SvmDualObjective(Matrix M);

  const Matrix& M() const { return M_; }

  Index dimension() const override { return M_.rows(); }
  double value(const Vector& w) const override;
  Vector gradient(const Vector& w) const override;
  double coord_gradient(const Vector& w, Index i) const override;
  double lipschitz() const override { return lipschitz_; }
  std::optional<Vector> coord_lipschitz() const override { return Vector(M_.diagonal()); }
  std::optional<double> curvature(const Vector& v) const override { return v.dot(M_ * v); }
  std::string tag() const override { return "svm-dual-smooth"; }

 private:
  Matrix M_;
  double lipschitz_;
};

struct RankDeficientLS {
  std::shared_ptr<LeastSquares> problem;
  double theta = 0.0;  // smallest non-zero singular value of A
  double mu = 0.0;     // PL constant, lambda_min^+ of the Hessian
  double L = 0.0;      // lambda_max of the Hessian
};

// A = U V' with U (m x r), V (d x r) Gaussian, so rank(A) = r exactly and
// f is PL but not strongly convex. mu and L come from an eigen-decomposition
// of the Hessian s A'A.
RankDeficientLS build_rank_deficient_ls(Index m, Index d, Index r, std::uint64_t seed,
                                        bool halved = true);

// Row-normalized Gaussian design with Gaussian targets.
std::shared_ptr<FiniteSumLeastSquares> random_finite_sum_ls(Index n, Index d, std::uint64_t seed);

std::shared_ptr<LogisticRegression> random_logistic(Index n, Index d, double l2,
                                                    std::uint64_t seed);

struct ReferenceSolution {
  Vector x;
  double value = 0.0;
  double residual = 0.0;  // ||x - prox_{g/L}(x - grad f(x)/L)||
  Index iterations = 0;
};

// Proximal-gradient run with step 1/L to a stationarity residual of
// rel_tol * (1 + ||x||) or max_iters, whichever comes first.
ReferenceSolution solve_composite_reference(const CompositeProblem& problem, const Vector& x0,
                                            double rel_tol = 1e-14, Index max_iters = 2'000'000);

// 1/2 ||Ax - b||^2 + lambda ||x||_1. F* and the (singleton) projection come
// from solve_composite_reference; the optimality residual must reach 1e-8.
CompositeProblem make_l1_least_squares(Matrix A, Vector b, double lambda);
CompositeProblem random_l1_least_squares(Index m, Index d, double lambda, std::uint64_t seed);

// 1/2 w' M w - sum w over [0, U]^n.
CompositeProblem make_svm_dual(Matrix M, double U);

// M_ij = b_i b_j a_i' a_j / lambda_svm: the Gram form of the Fenchel dual of
//   (lambda_svm / 2) ||x||^2 + sum_i max(0, 1 - b_i x' a_i).
CompositeProblem svm_dual_from_data(const Matrix& points, const Vector& labels, double lambda_svm,
                                    double U);

// Gaussian points labelled by a random hyperplane (10% of labels flipped).
CompositeProblem random_svm_dual(Index n, Index dim, double lambda_svm, double U,
                                 std::uint64_t seed);

Matrix svm_gram(const Matrix& points, const Vector& labels, double lambda_svm);

}  // namespace plab::problems
