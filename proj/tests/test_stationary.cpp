#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <Eigen/Dense>
#include <cmath>
#include <random>
#include <vector>

#include "poro/errors.hpp"
#include "poro/stationary.hpp"

using namespace poro;

namespace {

Eigen::VectorXd vec1(double v) {
  Eigen::VectorXd x(1);
  x[0] = v;
  return x;
}

}  // namespace

TEST_CASE("secant step solves a scalar affine fixed point exactly") {
  // g(x) = 1 + x/2 has the fixed point 2
  std::vector<Eigen::VectorXd> xs = {vec1(0.0), vec1(1.0)};
  std::vector<Eigen::VectorXd> gs = {vec1(1.0), vec1(1.5)};
  Eigen::VectorXd w;
  bool fb = true;
  Eigen::VectorXd next = anderson_update(xs, gs, 1, &w, &fb);
  CHECK(next[0] == doctest::Approx(2.0).epsilon(1e-12));
  CHECK_FALSE(fb);
  REQUIRE(w.size() == 2);
  CHECK(w[0] == doctest::Approx(-1.0).epsilon(1e-12));
  CHECK(w[1] == doctest::Approx(2.0).epsilon(1e-12));
}

TEST_CASE("depth zero reduces to the Picard iterate") {
  std::vector<Eigen::VectorXd> xs = {vec1(0.0), vec1(1.0)};
  std::vector<Eigen::VectorXd> gs = {vec1(1.0), vec1(1.5)};
  Eigen::VectorXd w;
  bool fb = true;
  Eigen::VectorXd next = anderson_update(xs, gs, 0, &w, &fb);
  CHECK(next[0] == doctest::Approx(1.5).epsilon(1e-14));
  CHECK_FALSE(fb);  // no acceleration requested, not a fallback
  CHECK(w[0] == doctest::Approx(0.0).epsilon(1e-14));
  CHECK(w[1] == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("full-depth anderson solves an affine map in n+1 iterations") {
  const int n = 5;
  std::mt19937 rng(17);
  std::uniform_real_distribution<double> uni(-1.0, 1.0);
  Eigen::MatrixXd A(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) A(i, j) = 0.18 * uni(rng);  // ||A||_inf < 1
  Eigen::VectorXd b(n);
  for (int i = 0; i < n; ++i) b[i] = uni(rng);

  // direct-solve oracle for the fixed point of x -> A x + b
  Eigen::MatrixXd M = Eigen::MatrixXd::Identity(n, n) - A;
  Eigen::VectorXd xstar = M.partialPivLu().solve(b);

  AndersonAccelerator aa(n);
  Eigen::VectorXd x(n);
  for (int i = 0; i < n; ++i) x[i] = uni(rng);
  int iters = 0;
  double err = (x - xstar).norm();
  while (err > 1e-12 * (1.0 + xstar.norm())) {
    Eigen::VectorXd g = A * x + b;
    bool fb = false;
    x = aa.propose(x, g, &fb);
    CHECK_FALSE(fb);
    err = (x - xstar).norm();
    REQUIRE(++iters <= n + 1);
  }
  CHECK(iters <= n + 1);
}

TEST_CASE("plain picard needs far more steps than anderson on the same map") {
  const int n = 5;
  std::mt19937 rng(17);
  std::uniform_real_distribution<double> uni(-1.0, 1.0);
  Eigen::MatrixXd A(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) A(i, j) = 0.18 * uni(rng);
  Eigen::VectorXd b(n);
  for (int i = 0; i < n; ++i) b[i] = uni(rng);
  Eigen::VectorXd xstar =
      (Eigen::MatrixXd::Identity(n, n) - A).partialPivLu().solve(b);
  Eigen::VectorXd x(n);
  for (int i = 0; i < n; ++i) x[i] = uni(rng);
  int iters = 0;
  while ((x - xstar).norm() > 1e-12 * (1.0 + xstar.norm())) {
    x = A * x + b;
    REQUIRE(++iters <= 200);
  }
  CHECK(iters > n + 1);  // acceleration actually buys something
}

TEST_CASE("rank-deficient histories fall back gracefully") {
  Eigen::VectorXd x0 = vec1(1.0), g0 = vec1(2.0);
  // a frozen history carries no secant information at all
  std::vector<Eigen::VectorXd> xs = {x0, x0, x0};
  std::vector<Eigen::VectorXd> gs = {g0, g0, g0};
  bool fb = false;
  Eigen::VectorXd next = anderson_update(xs, gs, 2, nullptr, &fb);
  CHECK(fb);
  CHECK(next[0] == doctest::Approx(2.0).epsilon(1e-14));

  // a stale oldest pair only shrinks the window
  std::vector<Eigen::VectorXd> xs2 = {vec1(0.0), vec1(0.0), vec1(1.0)};
  std::vector<Eigen::VectorXd> gs2 = {vec1(1.0), vec1(1.0), vec1(1.5)};
  fb = true;
  next = anderson_update(xs2, gs2, 2, nullptr, &fb);
  CHECK_FALSE(fb);
  CHECK(next[0] == doctest::Approx(2.0).epsilon(1e-12));
}

TEST_CASE("weights sum to one and reproduce the combination") {
  std::mt19937 rng(99);
  std::uniform_real_distribution<double> uni(-1.0, 1.0);
  for (int trial = 0; trial < 10; ++trial) {
    int n = 4, h = 4, depth = 3;
    std::vector<Eigen::VectorXd> xs(h), gs(h);
    for (int i = 0; i < h; ++i) {
      xs[i].resize(n);
      gs[i].resize(n);
      for (int j = 0; j < n; ++j) {
        xs[i][j] = uni(rng);
        gs[i][j] = uni(rng);
      }
    }
    Eigen::VectorXd w;
    bool fb = false;
    Eigen::VectorXd next = anderson_update(xs, gs, depth, &w, &fb);
    REQUIRE(w.size() == h);
    CHECK(w.sum() == doctest::Approx(1.0).epsilon(1e-12));
    Eigen::VectorXd combo = Eigen::VectorXd::Zero(n);
    for (int i = 0; i < h; ++i) combo += w[i] * gs[i];
    CHECK((combo - next).norm() < 1e-11 * (1.0 + next.norm()));
  }
}

TEST_CASE("anderson update is translation equivariant") {
  std::mt19937 rng(5);
  std::uniform_real_distribution<double> uni(-1.0, 1.0);
  int n = 3, h = 3;
  std::vector<Eigen::VectorXd> xs(h), gs(h), xs2(h), gs2(h);
  Eigen::VectorXd c(n);
  for (int j = 0; j < n; ++j) c[j] = uni(rng);
  for (int i = 0; i < h; ++i) {
    xs[i].resize(n);
    gs[i].resize(n);
    for (int j = 0; j < n; ++j) {
      xs[i][j] = uni(rng);
      gs[i][j] = uni(rng);
    }
    xs2[i] = xs[i] + c;
    gs2[i] = gs[i] + c;
  }
  Eigen::VectorXd a = anderson_update(xs, gs, 2, nullptr, nullptr);
  Eigen::VectorXd bshift = anderson_update(xs2, gs2, 2, nullptr, nullptr);
  CHECK((bshift - (a + c)).norm() < 1e-10 * (1.0 + a.norm()));
}

TEST_CASE("update rejects inconsistent histories") {
  std::vector<Eigen::VectorXd> xs = {vec1(0.0)};
  std::vector<Eigen::VectorXd> gs;
  CHECK_THROWS_AS(anderson_update(xs, gs, 1, nullptr, nullptr),
                  DimensionMismatchError);
  gs = {Eigen::VectorXd::Zero(2)};
  CHECK_THROWS_AS(anderson_update(xs, gs, 1, nullptr, nullptr),
                  DimensionMismatchError);
}

TEST_CASE("accelerator window keeps depth + 1 pairs") {
  // with depth 1 only the newest two pairs matter: feeding a misleading old
  // pair first must not change the secant result
  AndersonAccelerator aa(1);
  aa.observe(vec1(100.0), vec1(-50.0));
  aa.observe(vec1(0.0), vec1(1.0));
  bool fb = false;
  Eigen::VectorXd next = aa.propose(vec1(1.0), vec1(1.5), &fb);
  CHECK(next[0] == doctest::Approx(2.0).epsilon(1e-12));
  aa.reset();
  // after a reset the next propose sees a single pair: plain Picard
  next = aa.propose(vec1(7.0), vec1(4.0), &fb);
  CHECK(next[0] == doctest::Approx(4.0).epsilon(1e-14));
}

TEST_CASE("stationarity monitor captures R0 and applies the relative test") {
  StationarityMonitor mon{1e-5, -1.0};
  CHECK_FALSE(mon.captured());
  CHECK_FALSE(mon.stationary(0.0));  // nothing captured yet
  mon.capture(2.0);
  CHECK(mon.captured());
  CHECK(mon.r0 == 2.0);
  CHECK_FALSE(mon.stationary(1.0));
  CHECK(mon.stationary(2e-5));        // exactly tol * R0 counts
  CHECK(mon.stationary(1.9e-5));
  CHECK_FALSE(mon.stationary(2.1e-5));
}

TEST_CASE("zero captured residual means immediately stationary") {
  StationarityMonitor mon{1e-6, -1.0};
  mon.capture(0.0);
  CHECK(mon.stationary(0.0));
  CHECK_FALSE(mon.stationary(1e-300));
}
