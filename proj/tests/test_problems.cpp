#include <doctest.h>

#include <cmath>

#include "plab/conditions.hpp"
#include "plab/problems.hpp"
#include "plab/prox.hpp"
#include "plab/smooth_solvers.hpp"
#include "support.hpp"

using namespace plab;
using namespace plab::problems;
using plab::testing::random_point;
using plab::testing::vec;

TEST_SUITE("problems") {

TEST_CASE("least squares optimum matches a pseudoinverse oracle") {
  Rng rng(21);
  const Matrix A = normal_matrix(rng, 9, 4);
  const Vector b = normal_vector(rng, 9);
  for (bool halved : {true, false}) {
    LeastSquares ls(A, b, halved);
    const Vector x_pinv = A.completeOrthogonalDecomposition().pseudoInverse() * b;
    const double s = halved ? 1.0 : 2.0;
    CHECK((ls.least_norm_solution() - x_pinv).norm() <= 1e-10 * (1 + x_pinv.norm()));
    CHECK(*ls.optimum_value() == doctest::Approx(0.5 * s * (A * x_pinv - b).squaredNorm()).epsilon(1e-12));
    CHECK(ls.gradient(ls.least_norm_solution()).norm() <= 1e-8);
    const Eigen::SelfAdjointEigenSolver<Matrix> es(s * A.transpose() * A);
    CHECK(ls.lipschitz() == doctest::Approx(es.eigenvalues().maxCoeff()).epsilon(1e-12));
    CHECK(*ls.known_pl_constant() == doctest::Approx(es.eigenvalues().minCoeff()).epsilon(1e-10));
  }
}

TEST_CASE("unhalved least squares doubles value and gradient") {
  Rng rng(3);
  const Matrix A = normal_matrix(rng, 5, 3);
  const Vector b = normal_vector(rng, 5);
  LeastSquares half(A, b, true), full(A, b, false);
  const Vector x = normal_vector(rng, 3);
  CHECK(full.value(x) == doctest::Approx(2 * half.value(x)));
  CHECK((full.gradient(x) - 2 * half.gradient(x)).norm() <= 1e-12);
  CHECK(full.value(x) == doctest::Approx((A * x - b).squaredNorm()));
}

TEST_CASE("least squares satisfies PL globally with lambda_min^+") {
  const auto rd = build_rank_deficient_ls(20, 10, 6, 7);
  const auto& f = *rd.problem;
  Rng rng(1);
  double worst = kInfinity;
  for (int s = 0; s < 10000; ++s) {
    const Vector x = random_point(rng, 10, 5.0);
    worst = std::min(worst, 0.5 * f.gradient(x).squaredNorm() - rd.mu * f.optimality_gap(x));
  }
  CHECK(worst >= -1e-10);
}

TEST_CASE("rank-deficient construction") {
  const auto rd = build_rank_deficient_ls(5, 3, 2, 13);
  const Matrix& A = rd.problem->A();
  Eigen::FullPivLU<Matrix> lu(A);
  lu.setThreshold(1e-10);
  CHECK(lu.rank() == 2);
  const Matrix N = lu.kernel();
  REQUIRE(N.cols() == 1);
  const Vector xs = rd.problem->least_norm_solution();
  for (double t : {-3.0, -0.5, 1.0, 10.0}) {
    const Vector x = xs + t * N.col(0);
    CHECK(rd.problem->gradient(x).norm() <= 1e-9 * (1 + std::abs(t)));
    CHECK(rd.problem->optimality_gap(x) <= 1e-12 * (1 + t * t));
  }
  CHECK(rd.theta > 0.0);
  CHECK(rd.mu == doctest::Approx(rd.theta * rd.theta).epsilon(1e-8));

  CHECK_THROWS_AS(build_rank_deficient_ls(5, 3, 3, 1), ConfigError);
  CHECK_THROWS_AS(build_rank_deficient_ls(5, 3, 0, 1), ConfigError);
}

TEST_CASE("rank-deficient diag(1,0) example") {
  Matrix A = Matrix::Zero(2, 2);
  A(0, 0) = 1.0;
  auto ls = std::make_shared<LeastSquares>(A, Vector::Zero(2), true);
  const Eigen::SelfAdjointEigenSolver<Matrix> es(A.transpose() * A);
  CHECK(*ls->known_pl_constant() == doctest::Approx(1.0));
  CHECK(ls->lipschitz() == doctest::Approx(es.eigenvalues().maxCoeff()));
  CHECK(ls->theta() == doctest::Approx(1.0));
  CHECK(ls->rank() == 1);

  const auto trace = gradient_descent(*ls, vec({1.0, 1.0}), 3);
  CHECK(trace.records[1].objective_gap == 0.0);
  for (std::size_t k = 0; k < trace.size(); ++k) {
    const Vector xk = trace.point(k);
    const Vector xp = *ls->project_to_solutions(xk);
    CHECK(xk[1] == 1.0);
    if (k >= 1) CHECK((xk - ls->least_norm_solution()).norm() == doctest::Approx(1.0));
    if (k >= 1) CHECK((xk - xp).norm() == 0.0);
  }
}

TEST_CASE("logistic regression is convex and nonnegative without l2") {
  auto lr = random_logistic(40, 3, 0.0, 2);
  Rng rng(6);
  for (int s = 0; s < 500; ++s) {
    const Vector x = random_point(rng, 3, 4.0);
    const Vector y = random_point(rng, 3, 4.0);
    CHECK(lr->value(0.5 * (x + y)) <= 0.5 * (lr->value(x) + lr->value(y)) + 1e-12);
    CHECK(lr->value(x) >= 0.0);
  }
  // Large margins do not overflow.
  CHECK(std::isfinite(lr->value(Vector::Constant(3, 800.0))));
  CHECK(lr->gradient(Vector::Constant(3, 800.0)).allFinite());
}

TEST_CASE("logistic value follows the log(1 + exp(b a'x)) form") {
  Matrix feats(2, 2);
  feats << 1.0, 0.0, 0.0, 2.0;
  LogisticRegression lr(feats, vec({1.0, -1.0}), 0.5);
  const Vector x = vec({0.3, -0.7});
  const double expected = std::log1p(std::exp(0.3)) + std::log1p(std::exp(-1.0 * 2.0 * -0.7)) +
                          0.25 * x.squaredNorm();
  CHECK(lr.value(x) == doctest::Approx(expected).epsilon(1e-14));
  REQUIRE(lr.minimizer().has_value());
  CHECK(lr.gradient(*lr.minimizer()).norm() <= 1e-10);
}

TEST_CASE("logistic PL holds on a compact box") {
  // Flipped labels make the data non-separable; a small l2 fixes f* regardless.
  auto lr2 = random_logistic(50, 3, 0.05, 4);
  REQUIRE(lr2->optimum_value().has_value());
  CloudSpec spec;
  spec.count = 4000;
  spec.lo = Vector::Constant(3, -3.0);
  spec.hi = Vector::Constant(3, 3.0);
  const auto cloud = make_cloud(*lr2, Vector::Zero(3), spec);
  CHECK(estimate_pl(*lr2, cloud) > 0.0);
}

TEST_CASE("invex example properties") {
  InvexExample f;
  CHECK(f.value(vec({0.0})) == 0.0);
  Rng rng(9);
  for (int s = 0; s < 2000; ++s) {
    const double x = rng.uniform(-10.0, 10.0);
    if (x == 0.0) continue;
    CHECK(f.value(vec({x})) > 0.0);
  }
  for (int i = 0; i <= 40000; ++i) {
    const double x = -20.0 + 40.0 * i / 40000.0;
    const double g = f.gradient(vec({x}))[0];
    CHECK(0.5 * g * g >= InvexExample::kPlConstant * f.value(vec({x})) - 1e-15);
  }
  bool nonconvex = false;
  double fpp_max = -kInfinity;
  for (int i = 0; i <= 1000; ++i) {
    const double x = 1.0 + i / 1000.0;
    nonconvex |= f.second_derivative(x) < 0.0;
  }
  for (int i = 0; i <= 100000; ++i) fpp_max = std::max(fpp_max, f.second_derivative(-4.0 + 8.0 * i / 100000.0));
  CHECK(nonconvex);
  CHECK(fpp_max <= 8.0);
  CHECK(fpp_max == doctest::Approx(8.0).epsilon(1e-8));
  CHECK(f.second_derivative(0.3) == doctest::Approx(2 + 6 * std::cos(0.6)));
}

TEST_CASE("svm dual from data") {
  SUBCASE("identical points with opposite labels give rank one") {
    Matrix pts(2, 3);
    pts << 1.0, 2.0, -1.0, 1.0, 2.0, -1.0;
    const Matrix M = svm_gram(pts, vec({1.0, -1.0}), 1.0);
    CHECK(PsdSpectrum::of(M).rank == 1);
    CHECK(M(0, 1) == doctest::Approx(-6.0));
  }
  SUBCASE("one point") {
    Matrix pts(1, 1);
    pts << 1.0;
    for (double U : {0.5, 1.0, 3.0}) {
      const auto cp = svm_dual_from_data(pts, vec({1.0}), 1.0, U);
      const auto& M = static_cast<const SvmDualObjective&>(cp.smooth()).M();
      CHECK(M(0, 0) == 1.0);
      const Vector xp = *cp.project_to_solutions(vec({0.0}));
      CHECK(xp[0] == doctest::Approx(std::min(1.0, U)).epsilon(1e-10));
    }
  }
  SUBCASE("random instance is PSD") {
    const auto cp = random_svm_dual(10, 4, 1.0, 1.0, 5);
    const auto& M = static_cast<const SvmDualObjective&>(cp.smooth()).M();
    const Eigen::SelfAdjointEigenSolver<Matrix> es(M);
    CHECK(es.eigenvalues().minCoeff() >= -1e-10);
    Rng rng(1);
    for (int s = 0; s < 100; ++s) {
      const Vector v = normal_vector(rng, 10);
      CHECK(v.dot(M * v) >= -1e-10);
    }
  }
  SUBCASE("errors") {
    CHECK_THROWS_AS(svm_dual_from_data(Matrix(0, 2), Vector(0), 1.0, 1.0), ConfigError);
    Matrix pts(1, 1);
    pts << 1.0;
    CHECK_THROWS_AS(svm_dual_from_data(pts, vec({0.5}), 1.0, 1.0), ConfigError);
  }
}

TEST_CASE("svm dual gram matches the defining formula") {
  Rng rng(14);
  const Matrix pts = normal_matrix(rng, 6, 3);
  const Vector labels = vec({1, -1, 1, 1, -1, -1});
  const Matrix M = svm_gram(pts, labels, 2.0);
  for (Index i = 0; i < 6; ++i)
    for (Index j = 0; j < 6; ++j)
      CHECK(M(i, j) == doctest::Approx(labels[i] * labels[j] * pts.row(i).dot(pts.row(j)) / 2.0));
}

TEST_CASE("l1 least squares reference solution") {
  const auto cp = random_l1_least_squares(30, 10, 0.1, 5);
  const Vector xs = *cp.project_to_solutions(Vector::Zero(10));
  CHECK(prox::prox_residual(cp, xs) <= 1e-8);
  CHECK(cp.value(xs) == doctest::Approx(*cp.optimum_value()).epsilon(1e-14));
  // Optimality: zero in grad f + lambda * sign set.
  const Vector g = cp.smooth().gradient(xs);
  for (Index i = 0; i < 10; ++i) {
    if (xs[i] != 0.0)
      CHECK(g[i] == doctest::Approx(-0.1 * (xs[i] > 0 ? 1.0 : -1.0)).epsilon(1e-6));
    else
      CHECK(std::abs(g[i]) <= 0.1 + 1e-8);
  }
  CHECK_THROWS_AS(make_l1_least_squares(Matrix::Identity(2, 2), Vector::Zero(2), 0.0), ConfigError);
}

TEST_CASE("l1 least squares with a diagonal design has a closed-form optimum") {
  const auto cp = make_l1_least_squares(Matrix::Identity(2, 2), vec({3.0, 0.0}), 1.0);
  const Vector xs = *cp.project_to_solutions(Vector::Zero(2));
  CHECK(xs[0] == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(std::abs(xs[1]) <= 1e-12);
  // 1/2 (2-3)^2 + |2| = 5/2
  CHECK(*cp.optimum_value() == doctest::Approx(2.5).epsilon(1e-12));
}

TEST_CASE("quadratic projection lands on the minimizer set") {
  auto q = Quadratic::diagonal(vec({2.0, 0.0, 1.0}), vec({1.0, 5.0, -1.0}));
  const Vector x = vec({4.0, -2.0, 3.0});
  const Vector xp = *q->project_to_solutions(x);
  CHECK((xp - vec({1.0, -2.0, -1.0})).norm() <= 1e-12);
  CHECK(q->optimality_gap(x) == doctest::Approx(0.5 * (2 * 9 + 16)));
  CHECK(*q->known_pl_constant() == doctest::Approx(1.0));
  Matrix bad(2, 2);
  bad << 1, 2, 0, 1;
  CHECK_THROWS_AS(Quadratic(bad, Vector::Zero(2)), ConfigError);
  CHECK_THROWS_AS(Quadratic(-Matrix::Identity(2, 2), Vector::Zero(2)), ConfigError);
}

TEST_CASE("finite-sum least squares components") {
  auto fs = random_finite_sum_ls(12, 3, 8);
  CHECK(fs->num_components() == 12);
  double max_row = 0.0;
  for (Index i = 0; i < 12; ++i) max_row = std::max(max_row, fs->A().row(i).squaredNorm());
  CHECK(fs->component_lipschitz() == doctest::Approx(max_row));
  Rng rng(2);
  const Vector x = normal_vector(rng, 3);
  double mean = 0.0;
  for (Index i = 0; i < 12; ++i) mean += fs->component_value(i, x) / 12.0;
  CHECK(mean == doctest::Approx(fs->value(x)).epsilon(1e-12));
}

}  // TEST_SUITE
