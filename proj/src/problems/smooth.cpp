#include <cmath>

#include "plab/problems.hpp"
#include "plab/rng.hpp"

namespace plab::problems {

PsdSpectrum PsdSpectrum::of(const Matrix& symmetric, double rel_tol) {
  if (symmetric.rows() != symmetric.cols()) throw ConfigError("PsdSpectrum: matrix not square");
  Eigen::SelfAdjointEigenSolver<Matrix> solver(symmetric);
  if (solver.info() != Eigen::Success) throw ConfigError("PsdSpectrum: eigen-decomposition failed");
  PsdSpectrum s;
  s.eigenvalues = solver.eigenvalues();
  s.eigenvectors = solver.eigenvectors();
  const Index n = s.eigenvalues.size();
  s.lambda_max = n > 0 ? std::max(0.0, s.eigenvalues[n - 1]) : 0.0;
  const double cutoff = rel_tol * s.lambda_max;
  for (Index i = 0; i < n; ++i) {
    if (s.eigenvalues[i] > cutoff && s.lambda_max > 0.0) {
      if (s.rank == 0) s.lambda_min_positive = s.eigenvalues[i];
      ++s.rank;
    }
  }
  return s;
}

Matrix PsdSpectrum::range_projector() const {
  const Index n = eigenvalues.size();
  const Matrix basis = eigenvectors.rightCols(rank);
  if (rank == 0) return Matrix::Zero(n, n);
  return basis * basis.transpose();
}

// ---------------------------------------------------------------------------

Quadratic::Quadratic(Matrix Q, Vector center, double offset)
    : Q_(std::move(Q)), center_(std::move(center)), offset_(offset) {
  if (Q_.rows() == 0 || Q_.rows() != Q_.cols() || center_.size() != Q_.rows())
    throw ConfigError("Quadratic: shape mismatch");
  if (!(Q_ - Q_.transpose()).isZero(1e-12 * (1.0 + Q_.cwiseAbs().maxCoeff())))
    throw ConfigError("Quadratic: Q must be symmetric");
  spectrum_ = PsdSpectrum::of(Q_);
  if (spectrum_.eigenvalues[0] < -1e-10 * (1.0 + spectrum_.lambda_max))
    throw ConfigError("Quadratic: Q must be positive semidefinite");
  if (spectrum_.rank == 0) throw ConfigError("Quadratic: Q must be non-zero");
  range_projector_ = spectrum_.range_projector();
}

std::shared_ptr<Quadratic> Quadratic::diagonal(const Vector& diag, std::optional<Vector> center) {
  Vector c = center.value_or(Vector::Zero(diag.size()));
  return std::make_shared<Quadratic>(Matrix(diag.asDiagonal()), std::move(c));
}

double Quadratic::value(const Vector& x) const {
  const Vector e = x - center_;
  return 0.5 * e.dot(Q_ * e) + offset_;
}

Vector Quadratic::gradient(const Vector& x) const { return Q_ * (x - center_); }

double Quadratic::coord_gradient(const Vector& x, Index i) const {
  return Q_.row(i).dot(x - center_);
}

std::optional<Vector> Quadratic::project_to_solutions(const Vector& x) const {
  return Vector(x - range_projector_ * (x - center_));
}

double Quadratic::optimality_gap(const Vector& x) const {
  const Vector e = x - center_;
  return 0.5 * e.dot(Q_ * e);
}

// ---------------------------------------------------------------------------

LeastSquares::LeastSquares(Matrix A, Vector b, bool halved)
    : LeastSquares(std::move(A), std::move(b), halved ? 1.0 : 2.0, halved) {}

LeastSquares::LeastSquares(Matrix A, Vector b, double scale, bool halved)
    : A_(std::move(A)), b_(std::move(b)), halved_(halved), scale_(scale) {
  if (A_.rows() == 0 || A_.cols() == 0 || b_.size() != A_.rows())
    throw ConfigError("LeastSquares: shape mismatch");
  factor();
}

void LeastSquares::factor() {
  Eigen::BDCSVD<Matrix> svd(A_, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const Vector& sigma = svd.singularValues();
  const double smax = sigma.size() > 0 ? sigma[0] : 0.0;
  if (!(smax > 0.0)) throw ConfigError("LeastSquares: A must be non-zero");
  rank_ = 0;
  for (Index i = 0; i < sigma.size(); ++i)
    if (sigma[i] > 1e-10 * smax) ++rank_;
  theta_ = sigma[rank_ - 1];
  const Matrix U = svd.matrixU().leftCols(rank_);
  row_space_ = svd.matrixV().leftCols(rank_);
  x_star_ = row_space_ * (U.transpose() * b_).cwiseQuotient(sigma.head(rank_));
  lipschitz_ = scale_ * smax * smax;
  f_star_ = 0.5 * scale_ * (A_ * x_star_ - b_).squaredNorm();
}

double LeastSquares::value(const Vector& x) const {
  return 0.5 * scale_ * (A_ * x - b_).squaredNorm();
}

Vector LeastSquares::gradient(const Vector& x) const {
  return scale_ * (A_.transpose() * (A_ * x - b_));
}

double LeastSquares::coord_gradient(const Vector& x, Index i) const {
  return scale_ * A_.col(i).dot(A_ * x - b_);
}

std::optional<Vector> LeastSquares::coord_lipschitz() const {
  return Vector(scale_ * A_.colwise().squaredNorm().transpose());
}

std::optional<Vector> LeastSquares::project_to_solutions(const Vector& x) const {
  const Vector e = x - x_star_;
  return Vector(x - row_space_ * (row_space_.transpose() * e));
}

double LeastSquares::optimality_gap(const Vector& x) const {
  // A'(A x* - b) = 0, so f(x) - f* = (s/2) ||A (x - x*)||^2 exactly.
  return 0.5 * scale_ * (A_ * (x - x_star_)).squaredNorm();
}

std::optional<double> LeastSquares::curvature(const Vector& v) const {
  return scale_ * (A_ * v).squaredNorm();
}

std::optional<double> LeastSquares::known_pl_constant() const {
  return scale_ * theta_ * theta_;
}

// ---------------------------------------------------------------------------

FiniteSumLeastSquares::FiniteSumLeastSquares(Matrix A, Vector b)
    : LeastSquares(A, b, 1.0 / static_cast<double>(A.rows()), true) {
  component_lipschitz_ = this->A().rowwise().squaredNorm().maxCoeff();
}

double FiniteSumLeastSquares::component_value(Index i, const Vector& x) const {
  const double r = A().row(i).dot(x) - b()[i];
  return 0.5 * r * r;
}

Vector FiniteSumLeastSquares::component_gradient(Index i, const Vector& x) const {
  const double r = A().row(i).dot(x) - b()[i];
  return r * A().row(i).transpose();
}

// ---------------------------------------------------------------------------

namespace {

double softplus(double z) { return std::max(z, 0.0) + std::log1p(std::exp(-std::abs(z))); }

double sigmoid(double z) {
  if (z >= 0.0) return 1.0 / (1.0 + std::exp(-z));
  const double e = std::exp(z);
  return e / (1.0 + e);
}

}  // namespace

LogisticRegression::LogisticRegression(Matrix features, Vector labels, double l2)
    : A_(std::move(features)), labels_(std::move(labels)), l2_(l2) {
  if (A_.rows() == 0 || A_.cols() == 0 || labels_.size() != A_.rows())
    throw ConfigError("LogisticRegression: shape mismatch");
  if (!(l2_ >= 0.0)) throw ConfigError("LogisticRegression: l2 must be non-negative");
  for (Index i = 0; i < labels_.size(); ++i)
    if (labels_[i] != 1.0 && labels_[i] != -1.0)
      throw ConfigError("LogisticRegression: labels must be +1 or -1");
  Eigen::JacobiSVD<Matrix> svd(A_);
  const double smax = svd.singularValues()[0];
  lipschitz_ = 0.25 * smax * smax + l2_;
  solve_newton();
}

double LogisticRegression::value(const Vector& x) const {
  const Vector z = labels_.cwiseProduct(A_ * x);
  double total = 0.0;
  for (Index i = 0; i < z.size(); ++i) total += softplus(z[i]);
  return total + 0.5 * l2_ * x.squaredNorm();
}

Vector LogisticRegression::gradient(const Vector& x) const {
  const Vector z = labels_.cwiseProduct(A_ * x);
  Vector weights(z.size());
  for (Index i = 0; i < z.size(); ++i) weights[i] = labels_[i] * sigmoid(z[i]);
  return A_.transpose() * weights + l2_ * x;
}

std::optional<Vector> LogisticRegression::coord_lipschitz() const {
  return Vector((0.25 * A_.colwise().squaredNorm().array() + l2_).transpose());
}

std::optional<Vector> LogisticRegression::project_to_solutions(const Vector&) const {
  return x_star_;
}

void LogisticRegression::solve_newton() {
  const Index d = A_.cols();
  Vector x = Vector::Zero(d);
  double fx = value(x);
  for (int iter = 0; iter < 200; ++iter) {
    const Vector g = gradient(x);
    if (g.norm() <= 1e-13 * (1.0 + std::abs(fx))) {
      x_star_ = x;
      f_star_ = fx;
      return;
    }
    const Vector z = labels_.cwiseProduct(A_ * x);
    Vector curv(z.size());
    for (Index i = 0; i < z.size(); ++i) {
      const double s = sigmoid(z[i]);
      curv[i] = s * (1.0 - s);
    }
    const Matrix H = A_.transpose() * curv.asDiagonal() * A_ + l2_ * Matrix::Identity(d, d);
    Eigen::LDLT<Matrix> ldlt(H);
    if (ldlt.info() != Eigen::Success) return;
    const Vector step = ldlt.solve(g);
    if (!step.allFinite()) return;
    double t = 1.0;
    Vector trial = x - step;
    double ft = value(trial);
    while (ft > fx - 1e-4 * t * g.dot(step) && t > 1e-12) {
      t *= 0.5;
      trial = x - t * step;
      ft = value(trial);
    }
    if (t <= 1e-12) {
      // No further decrease representable; accept if stationary enough.
      if (g.norm() <= 1e-9 * (1.0 + std::abs(fx))) {
        x_star_ = x;
        f_star_ = fx;
      }
      return;
    }
    x = trial;
    fx = ft;
  }
}

// ---------------------------------------------------------------------------

double InvexExample::value(const Vector& x) const {
  const double s = std::sin(x[0]);
  return x[0] * x[0] + 3.0 * s * s;
}

Vector InvexExample::gradient(const Vector& x) const {
  return Vector::Constant(1, 2.0 * x[0] + 3.0 * std::sin(2.0 * x[0]));
}

double InvexExample::second_derivative(double x) const { return 2.0 + 6.0 * std::cos(2.0 * x); }

// ---------------------------------------------------------------------------

SvmDualObjective::SvmDualObjective(Matrix M) : M_(std::move(M)) {
  if (M_.rows() == 0 || M_.rows() != M_.cols()) throw ConfigError("SvmDual: M must be square");
  const auto spectrum = PsdSpectrum::of(M_);
  if (spectrum.eigenvalues[0] < -1e-10 * (1.0 + spectrum.lambda_max))
    throw ConfigError("SvmDual: M must be positive semidefinite");
  lipschitz_ = spectrum.lambda_max;
  if (!(lipschitz_ > 0.0)) throw ConfigError("SvmDual: M must be non-zero");
}

double SvmDualObjective::value(const Vector& w) const { return 0.5 * w.dot(M_ * w) - w.sum(); }

Vector SvmDualObjective::gradient(const Vector& w) const {
  return M_ * w - Vector::Ones(w.size());
}

double SvmDualObjective::coord_gradient(const Vector& w, Index i) const {
  return M_.row(i).dot(w) - 1.0;
}

// ---------------------------------------------------------------------------

RankDeficientLS build_rank_deficient_ls(Index m, Index d, Index r, std::uint64_t seed,
                                        bool halved) {
  if (!(r >= 1 && r < std::min(m, d))) throw ConfigError("build_rank_deficient_ls: need 1 <= r < min(m, d)");
  Rng rng(seed);
  const Matrix U = normal_matrix(rng, m, r);
  const Matrix V = normal_matrix(rng, d, r);
  const Vector b = normal_vector(rng, m);
  Matrix A = U * V.transpose();
  RankDeficientLS out;
  out.problem = std::make_shared<LeastSquares>(std::move(A), b, halved);
  out.theta = out.problem->theta();
  const double scale = out.problem->scale();
  const auto spectrum = PsdSpectrum::of(scale * out.problem->A().transpose() * out.problem->A());
  out.mu = spectrum.lambda_min_positive;
  out.L = spectrum.lambda_max;
  return out;
}

std::shared_ptr<FiniteSumLeastSquares> random_finite_sum_ls(Index n, Index d, std::uint64_t seed) {
  if (n < 1 || d < 1) throw ConfigError("random_finite_sum_ls: need n, d >= 1");
  Rng rng(seed);
  Matrix A = normal_matrix(rng, n, d);
  A.rowwise().normalize();
  Vector b = normal_vector(rng, n);
  return std::make_shared<FiniteSumLeastSquares>(std::move(A), std::move(b));
}

std::shared_ptr<LogisticRegression> random_logistic(Index n, Index d, double l2,
                                                    std::uint64_t seed) {
  if (n < 1 || d < 1) throw ConfigError("random_logistic: need n, d >= 1");
  Rng rng(seed);
  const Matrix A = normal_matrix(rng, n, d);
  const Vector w = normal_vector(rng, d);
  Vector labels(n);
  for (Index i = 0; i < n; ++i) {
    double s = A.row(i).dot(w) >= 0.0 ? 1.0 : -1.0;
    if (rng.uniform() < 0.1) s = -s;
    labels[i] = s;
  }
  return std::make_shared<LogisticRegression>(A, labels, l2);
}

}  // namespace plab::problems
