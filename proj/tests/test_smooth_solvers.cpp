#include <doctest.h>

#include <cmath>

#include "plab/conditions.hpp"
#include "plab/problems.hpp"
#include "plab/smooth_solvers.hpp"
#include "support.hpp"

using namespace plab;
using namespace plab::problems;
using plab::testing::mean_gap;
using plab::testing::vec;

namespace {

std::shared_ptr<FiniteSumLeastSquares> tiny_sum() {
  Matrix A(2, 1);
  A << 1.0, 1.0;
  return std::make_shared<FiniteSumLeastSquares>(A, vec({1.0, -1.0}));
}

}  // namespace

TEST_SUITE("smooth-solvers") {

TEST_CASE("gradient descent one-step example") {
  auto f = Quadratic::diagonal(vec({1.0}));
  const auto t = gradient_descent(*f, vec({1.0}), 3);
  CHECK(t.point(1)[0] == 0.0);
  CHECK(t.records[1].objective_gap == 0.0);
  CHECK(t.algorithm_tag == "gd");
  CHECK(t.records[1].step_size == 1.0);
}

TEST_CASE("gradient descent on the invex example follows the linear rate") {
  InvexExample f;
  const auto t = gradient_descent(f, vec({2.0}), 200);
  const double rho = 1.0 - (1.0 / 32.0) / 8.0;
  const double g0 = t.records[0].objective_gap;
  for (const auto& r : t.records) CHECK(r.objective_gap <= std::pow(rho, r.k) * g0 * (1 + 1e-9));
  // Direct recurrence oracle: x <- x - f'(x)/8.
  double x = 2.0;
  for (int k = 0; k < 200; ++k) x -= (2 * x + 3 * std::sin(2 * x)) / 8.0;
  CHECK(t.point(200)[0] == doctest::Approx(x).epsilon(1e-14).scale(1e-300));
}

TEST_CASE("gradient descent on rank-deficient least squares") {
  const auto rd = build_rank_deficient_ls(5, 3, 2, 3);
  const auto t = gradient_descent(*rd.problem, Vector::Ones(3), 200);
  const Eigen::SelfAdjointEigenSolver<Matrix> es(rd.problem->A().transpose() * rd.problem->A());
  const double L = es.eigenvalues()(2), mu = es.eigenvalues()(1);
  CHECK(es.eigenvalues()(0) == doctest::Approx(0.0).scale(1.0));
  const double g0 = t.records[0].objective_gap;
  for (const auto& r : t.records) CHECK(r.objective_gap <= std::pow(1 - mu / L, r.k) * g0 * (1 + 1e-9) + 1e-300);
}

TEST_CASE("gradient descent decrease meets the descent-lemma bound") {
  std::vector<std::shared_ptr<const SmoothObjective>> objs = {
      std::make_shared<InvexExample>(), build_rank_deficient_ls(12, 6, 4, 2).problem,
      random_logistic(30, 4, 0.1, 3), Quadratic::diagonal(vec({1, 3, 9}))};
  for (const auto& f : objs) {
    CAPTURE(f->tag());
    const auto t = gradient_descent(*f, Vector::Constant(f->dimension(), 1.5), 100);
    for (std::size_t k = 0; k + 1 < t.size(); ++k) {
      const Vector g = f->gradient(t.point(k));
      CHECK(t.records[k].objective - t.records[k + 1].objective >=
            g.squaredNorm() / (2 * f->lipschitz()) - 1e-12);
    }
  }
}

TEST_CASE("exact line search on a quadratic minimizes along the ray") {
  Matrix Q(2, 2);
  Q << 3.0, 1.0, 1.0, 2.0;
  auto f = std::make_shared<Quadratic>(Q, vec({1.0, -1.0}));
  const auto t = gradient_descent(*f, vec({4.0, 2.0}), 5, true);
  CHECK(t.algorithm_tag == "gd-exact");
  for (std::size_t k = 0; k + 1 < t.size(); ++k) {
    const Vector x = t.point(k);
    const Vector g = f->gradient(x);
    for (double s = 0.0; s < 1.0; s += 0.01) CHECK(t.records[k + 1].objective <= f->value(x - s * g) + 1e-12);
    // new gradient is orthogonal to the search direction
    CHECK(f->gradient(t.point(k + 1)).dot(g) == doctest::Approx(0.0).scale(g.squaredNorm()));
  }
  InvexExample invex;
  CHECK_THROWS_AS(gradient_descent(invex, vec({1.0}), 1, true), ConfigError);
}

TEST_CASE("random coordinate descent basics") {
  auto f = Quadratic::diagonal(vec({1.0, 1.0}));
  const auto t = coordinate_descent_random(*f, vec({1.0, -2.0}), 20, 5);
  for (std::size_t k = 1; k < t.size(); ++k) CHECK(t.point(k)[*t.records[k].selected_index] == 0.0);

  auto one = Quadratic::diagonal(vec({2.0}), vec({1.0}));
  const auto cd = coordinate_descent_random(*one, vec({4.0}), 10, 1);
  const auto gd = gradient_descent(*one, vec({4.0}), 10);
  for (std::size_t k = 0; k < cd.size(); ++k) CHECK(cd.point(k)[0] == gd.point(k)[0]);

  auto q = Quadratic::diagonal(vec({1.0, 4.0, 2.0}));
  const auto tr = coordinate_descent_random(*q, vec({1.0, 1.0, 1.0}), 50, 9);
  for (std::size_t k = 0; k + 1 < tr.size(); ++k) {
    const Index i = *tr.records[k + 1].selected_index;
    const double gi = q->gradient(tr.point(k))[i];
    CHECK(tr.records[k].objective - tr.records[k + 1].objective >= gi * gi / (2 * q->lipschitz()) - 1e-12);
  }
}

TEST_CASE("random coordinate descent meets the expected rate on d = 2") {
  auto f = Quadratic::diagonal(vec({1.0, 3.0}));
  const auto traces = coordinate_descent_random_trials(*f, vec({1.0, 1.0}), 50, 100, 2000);
  const auto mg = mean_gap(traces, 50);
  const double bound = std::pow(1 - 1.0 / (2 * 3.0), 50) * traces[0].records[0].objective_gap;
  CHECK(mg.mean <= bound + 3 * mg.stderr_of_mean);
}

TEST_CASE("lipschitz-sampled coordinate descent") {
  // Equal L_i: uniform coordinates, step 1/L_i = 1/L.
  auto eq = Quadratic::diagonal(vec({2.0, 2.0, 2.0}));
  const auto t = coordinate_descent_lipschitz_sampled(*eq, vec({1.0, 2.0, 3.0}), 3000, 4);
  std::vector<int> counts(3, 0);
  for (std::size_t k = 1; k < t.size(); ++k) {
    ++counts[*t.records[k].selected_index];
    CHECK(t.records[k].step_size == 0.5);
  }
  for (int c : counts) CHECK(c == doctest::Approx(1000).epsilon(0.1));

  auto one = Quadratic::diagonal(vec({5.0}));
  const auto cd = coordinate_descent_lipschitz_sampled(*one, vec({1.0}), 3, 0);
  const auto gd = gradient_descent(*one, vec({1.0}), 3);
  for (std::size_t k = 0; k < cd.size(); ++k) CHECK(cd.point(k)[0] == gd.point(k)[0]);

  // Diagonal quadratics decouple: coordinate i's gap term shrinks in expectation by
  // 1 - p_i (1 - (1 - s_i L_i)^2) per step, p_i its probability and s_i its step.
  Vector diag = Vector::Ones(10);
  diag[9] = 100.0;
  auto skew = Quadratic::diagonal(diag);
  const Vector x0 = Vector::Ones(10);
  const std::size_t K = 200;
  auto expected = [&](bool sampled) {
    double total = 0.0;
    for (Index i = 0; i < 10; ++i) {
      const double p = sampled ? diag[i] / diag.sum() : 0.1;
      const double s = sampled ? 1.0 / diag[i] : 1.0 / 100.0;
      const double keep = 1.0 - s * diag[i];
      total += 0.5 * diag[i] * std::pow(1.0 - p * (1.0 - keep * keep), static_cast<double>(K));
    }
    return total;
  };
  const auto uni = coordinate_descent_random_trials(*skew, x0, K, 0, 2000, {.store_points = false});
  const auto lip = coordinate_descent_lipschitz_sampled_trials(*skew, x0, K, 0, 2000, {.store_points = false});
  const auto mu_uni = mean_gap(uni, K), mu_lip = mean_gap(lip, K);
  CHECK(std::abs(mu_uni.mean - expected(false)) <= 4 * mu_uni.stderr_of_mean);
  CHECK(std::abs(mu_lip.mean - expected(true)) <= 4 * mu_lip.stderr_of_mean);
  CHECK(expected(true) < 0.5 * expected(false));
  CHECK(mu_lip.mean < mu_uni.mean);

  plab::testing::Linear lin(vec({1.0}));
  CHECK_THROWS_AS(coordinate_descent_lipschitz_sampled(lin, vec({0.0}), 1, 0), ConfigError);
}

TEST_CASE("gauss-southwell selection") {
  CHECK(gauss_southwell_index(vec({3.0, -5.0, 1.0})) == 1);
  CHECK(gauss_southwell_index(vec({2.0, -2.0})) == 0);
  CHECK(gauss_southwell_index(vec({0.0, 0.0, 0.0})) == 0);
}

TEST_CASE("gauss-southwell beats the uniform mean on diag(1,4)") {
  auto f = Quadratic::diagonal(vec({1.0, 4.0}));
  const Vector x0 = vec({1.0, 1.0});
  const auto gs = coordinate_descent_gs(*f, x0, 40);
  const auto uni = coordinate_descent_random_trials(*f, x0, 40, 1, 4000);
  for (std::size_t k = 0; k <= 40; ++k) CHECK(gs.records[k].objective_gap <= mean_gap(uni, k).mean);
  CHECK(coordinate_descent_gs(*f, x0, 40) == gs);
}

TEST_CASE("sign method basics") {
  auto f = Quadratic::diagonal(vec({1.0}), vec({0.5}));
  const auto t = sign_gradient_descent(*f, vec({3.0}), 1, vec({1.0}));
  CHECK(t.point(1)[0] == doctest::Approx(3.0 - f->gradient(vec({3.0}))[0]));
  CHECK(dual_weighted_norm(vec({2.0, -3.0}), vec({4.0, 9.0})) == doctest::Approx(2.0));
  CHECK(primal_weighted_norm(vec({2.0, -3.0}), vec({4.0, 9.0})) == doctest::Approx(9.0));
}

TEST_CASE("sign method decrease on diag(1,4)") {
  auto f = Quadratic::diagonal(vec({1.0, 4.0}));
  for (const auto& w : {std::optional<Vector>{}, std::optional<Vector>{sign_weights_for_quadratic(f->Q())}}) {
    const auto t = sign_gradient_descent(*f, vec({1.0, 1.0}), 200, w);
    const Vector weights = w.value_or(Vector::Constant(2, 2 * 4.0));
    for (std::size_t k = 0; k + 1 < t.size(); ++k) {
      const double n1 = dual_weighted_norm(f->gradient(t.point(k)), weights);
      CHECK(t.records[k].objective - t.records[k + 1].objective >= 0.5 * n1 * n1 - 1e-10);
    }
  }
}

TEST_CASE("sign weights satisfy the weighted Lipschitz contract") {
  Rng rng(2);
  for (int trial = 0; trial < 5; ++trial) {
    const Matrix B = normal_matrix(rng, 4, 4);
    auto f = std::make_shared<Quadratic>(B * B.transpose() + 0.1 * Matrix::Identity(4, 4), Vector::Zero(4));
    const auto quad = check_sign_weights(*f, sign_weights_for_quadratic(f->Q()), Vector::Zero(4), 3.0, 3000, trial);
    CHECK(quad.violations == 0);
    CHECK(quad.pairs == 3000);
    const auto uniform = check_sign_weights(*f, Vector::Constant(4, 4 * f->lipschitz()), Vector::Zero(4), 3.0, 3000, trial);
    CHECK(uniform.violations == 0);
  }
  auto lr = random_logistic(30, 3, 0.1, 1);
  CHECK(check_sign_weights(*lr, Vector::Constant(3, 3 * lr->lipschitz()), Vector::Zero(3), 4.0, 3000, 1).violations == 0);
}

TEST_CASE("sgd schedules") {
  const auto dec = SgdSchedule::decreasing(2.0);
  CHECK(dec.step(0) == doctest::Approx(1.0 / 4.0));
  for (Index k = 0; k < 1000; ++k) CHECK(dec.step(k + 1) < dec.step(k));
  CHECK(dec.step(9) == doctest::Approx(19.0 / (4.0 * 100.0)));
  CHECK(SgdSchedule::constant(0.3).step(77) == 0.3);
  CHECK_THROWS_AS(SgdSchedule::decreasing(0.0), ConfigError);
  CHECK_THROWS_AS(SgdSchedule::constant(-1.0), ConfigError);
}

TEST_CASE("sgd with a single component is gradient descent") {
  Matrix A(1, 2);
  A << 1.0, 2.0;
  auto f = std::make_shared<FiniteSumLeastSquares>(A, vec({3.0}));
  const double alpha = 1.0 / f->lipschitz();
  const auto traces = sgd(*f, vec({1.0, -1.0}), 10, SgdSchedule::constant(alpha), 3, 2);
  Vector x = vec({1.0, -1.0});
  for (int k = 1; k <= 10; ++k) {
    x -= alpha * f->gradient(x);
    CHECK((traces[0].point(k) - x).norm() <= 1e-14);
    CHECK((traces[1].point(k) - x).norm() <= 1e-14);
  }
  CHECK(traces[0].records[1].seed == 3);
  CHECK(traces[1].records[1].seed == 4);
}

TEST_CASE("sgd is reproducible and independent of thread scheduling") {
  auto f = tiny_sum();
  const auto a = sgd(*f, vec({3.0}), 200, SgdSchedule::decreasing(1.0), 7, 40);
  const auto b = sgd(*f, vec({3.0}), 200, SgdSchedule::decreasing(1.0), 7, 40);
  REQUIRE(a.size() == b.size());
  for (std::size_t t = 0; t < a.size(); ++t) CHECK(a[t] == b[t]);
  // Trial t equals a solo run with seed base + t.
  const auto solo = sgd(*f, vec({3.0}), 200, SgdSchedule::decreasing(1.0), 7 + 13, 1);
  CHECK(solo[0] == a[13]);
  CHECK_THROWS_AS(sgd(*Quadratic::diagonal(vec({1.0})), vec({1.0}), 1, SgdSchedule::constant(0.1), 0, 1), ConfigError);
}

TEST_CASE("svrg contraction formula") {
  const double mu = 0.5, L = 2.0, alpha = 0.05;
  const Index m = 200;
  CHECK(svrg_contraction(mu, L, alpha, m) ==
        doctest::Approx((1 / (1 - 2 * alpha * L)) * (1 / (m * mu * alpha) + 2 * L * alpha)));
  CHECK(svrg_contraction(mu, L, 0.25, m) == kInfinity);
}

TEST_CASE("svrg with one component reduces to gradient steps") {
  Matrix A(1, 1);
  A << 2.0;
  auto f = std::make_shared<FiniteSumLeastSquares>(A, vec({1.0}));
  SvrgConfig cfg{.inner_length = 5, .alpha = 0.1, .outer_count = 6, .mu = std::nullopt};
  const auto t = svrg(*f, vec({3.0}), cfg, 11);
  // f = 1/2 (2x - 1)^2, minimizer 1/2; a gradient step scales x - 1/2 by 1 - 0.4.
  for (std::size_t s = 0; s + 1 < t.size(); ++s) {
    const Index keep = *t.records[s + 1].selected_index;
    CHECK(keep >= 1);
    CHECK(keep <= 5);
    const double expected = 0.5 + std::pow(0.6, static_cast<double>(keep)) * (t.point(s)[0] - 0.5);
    CHECK(t.point(s + 1)[0] == doctest::Approx(expected).epsilon(1e-12));
  }
}

TEST_CASE("svrg configuration checks and determinism") {
  auto f = random_finite_sum_ls(10, 3, 3);
  const double L = f->component_lipschitz();
  SvrgConfig bad{.inner_length = 10, .alpha = 2.0 / L, .outer_count = 2, .mu = std::nullopt};
  CHECK_THROWS_AS(svrg(*f, Vector::Ones(3), bad, 0), ConfigError);

  SvrgConfig weak{.inner_length = 2, .alpha = 0.1 / L, .outer_count = 2, .mu = 1e-3};
  CHECK_FALSE(svrg(*f, Vector::Ones(3), weak, 0).warnings.empty());

  SvrgConfig ok{.inner_length = 50, .alpha = 0.1 / L, .outer_count = 5, .mu = std::nullopt};
  CHECK(svrg(*f, Vector::Ones(3), ok, 4) == svrg(*f, Vector::Ones(3), ok, 4));
  CHECK_FALSE(svrg(*f, Vector::Ones(3), ok, 4) == svrg(*f, Vector::Ones(3), ok, 5));
}

TEST_CASE("deterministic solvers are monotone and gaps stay non-negative") {
  std::vector<std::shared_ptr<const SmoothObjective>> objs = {
      std::make_shared<InvexExample>(), build_rank_deficient_ls(20, 10, 6, 7).problem,
      random_logistic(40, 3, 0.1, 3), Quadratic::diagonal(vec({1, 2, 4, 8, 16})),
      random_finite_sum_ls(10, 3, 3)};
  for (const auto& f : objs) {
    CAPTURE(f->tag());
    const Vector x0 = Vector::Constant(f->dimension(), 1.3);
    const double tol = 1e-12 * (1 + std::abs(*f->optimum_value()));
    std::vector<IterateTrace> runs = {gradient_descent(*f, x0, 150), coordinate_descent_gs(*f, x0, 150),
                                      sign_gradient_descent(*f, x0, 150),
                                      coordinate_descent_random(*f, x0, 150, 2)};
    if (f->coord_lipschitz()) runs.push_back(coordinate_descent_lipschitz_sampled(*f, x0, 150, 2));
    for (const auto& t : runs) {
      CAPTURE(t.algorithm_tag);
      for (std::size_t k = 0; k < t.size(); ++k) {
        CHECK(t.records[k].objective_gap >= -tol);
        if (k > 0) CHECK(t.records[k].objective <= t.records[k - 1].objective + 1e-14 * (1 + std::abs(t.records[k - 1].objective)));
      }
    }
  }
}

TEST_CASE("estimated sign-PL constant bounds the sign method contraction") {
  auto f = Quadratic::diagonal(vec({1.0, 4.0}));
  const Vector w = sign_weights_for_quadratic(f->Q());
  const auto t = sign_gradient_descent(*f, vec({1.0, 1.0}), 200, w);
  CloudSpec spec;
  spec.seed = 3;
  auto cloud = make_cloud(*f, vec({1.0, 1.0}), spec);
  cloud.add_trace(t);
  const double mu = estimate_sign_pl(*f, cloud, w);
  REQUIRE(mu > 0.0);
  for (std::size_t k = 0; k + 1 < t.size(); ++k) {
    if (t.records[k].objective_gap < 1e-12) break;  // excluded from the cloud
    CHECK(t.records[k + 1].objective_gap <= (1 - mu) * t.records[k].objective_gap * (1 + 1e-9));
  }
}

}  // TEST_SUITE
