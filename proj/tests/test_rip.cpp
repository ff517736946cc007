#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "pursuit/harness.hpp"
#include "pursuit/rip.hpp"

using namespace pursuit;

namespace {

// Two orthonormal columns plus their normalized sum; delta_2 = 1/sqrt(2).
Matrix correlated_triple() {
  Matrix A(2, 3);
  const double s = 1.0 / std::sqrt(2.0);
  A << 1, 0, s, 0, 1, s;
  return A;
}

}  // namespace

TEST_CASE("exact_ric is zero for orthonormal columns") {
  const Matrix I = Matrix::Identity(3, 3);
  const RicEstimate est = exact_ric(I, 2);
  CHECK(est.delta == Catch::Approx(0.0).margin(1e-14));
  CHECK(est.subsets_examined == 3);
  CHECK(est.method == RicMethod::exact);
  CHECK(est.rip_holds());
}

TEST_CASE("exact_ric resolves a correlated column pair") {
  const RicEstimate est = exact_ric(correlated_triple(), 2);
  CHECK(est.delta == Catch::Approx(1.0 / std::sqrt(2.0)).margin(1e-12));
  CHECK(est.subsets_examined == 3);
}

TEST_CASE("exact_ric at order 1 is zero for unit columns") {
  const Matrix A = correlated_triple();
  CHECK(exact_ric(A, 1).delta == Catch::Approx(0.0).margin(1e-12));
}

TEST_CASE("exact_ric enforces the combinatorial guard") {
  const Matrix A = Matrix::Zero(4, 300);
  CHECK_THROWS_AS(exact_ric(A, 10), capacity_error);
  CHECK_THROWS_AS(exact_ric(A, 0), argument_error);
}

TEST_CASE("exact_ric is monotone in the order") {
  const Matrix A = gaussian_sensing_matrix(8, 10, 13);
  double previous = 0.0;
  for (int K = 1; K <= 5; ++K) {
    const double delta = exact_ric(A, K).delta;
    CHECK(delta >= previous - 1e-12);
    previous = delta;
  }
}

TEST_CASE("monte carlo estimate never exceeds the exact constant") {
  const Matrix A = gaussian_sensing_matrix(8, 12, 29);
  for (int K : {2, 3}) {
    const double exact = exact_ric(A, K).delta;
    for (std::uint64_t seed : {0ULL, 1ULL, 99ULL}) {
      const RicEstimate mc = monte_carlo_ric_lower_bound(A, K, 30, seed);
      CHECK(mc.delta <= exact + 1e-12);
      CHECK(mc.method == RicMethod::monte_carlo_lower_bound);
      CHECK(mc.subsets_examined == 30);
    }
  }
}

TEST_CASE("monte carlo with enough samples hits the exact constant") {
  const Matrix A = correlated_triple();
  // C(3,2) = 3 subsets; 50 draws will sample a correlated pair
  const RicEstimate mc = monte_carlo_ric_lower_bound(A, 2, 50, 1);
  CHECK(mc.delta == Catch::Approx(1.0 / std::sqrt(2.0)).margin(1e-12));

  CHECK(monte_carlo_ric_lower_bound(Matrix::Identity(3, 3), 2, 10, 5).delta ==
        Catch::Approx(0.0).margin(1e-14));
}

TEST_CASE("monte carlo is deterministic given the seed") {
  const Matrix A = gaussian_sensing_matrix(6, 14, 4);
  const RicEstimate a = monte_carlo_ric_lower_bound(A, 3, 40, 77);
  const RicEstimate b = monte_carlo_ric_lower_bound(A, 3, 40, 77);
  CHECK(a.delta == b.delta);
}

TEST_CASE("the isometry sandwich holds on the extremal subset") {
  const Matrix A = gaussian_sensing_matrix(8, 10, 31);
  const int K = 3;
  const double delta = exact_ric(A, K).delta;

  // locate an extremal subset and test random restricted vectors on it
  std::vector<int> extremal;
  detail::for_each_subset(10, K, [&](const std::vector<int>& idx) {
    if (detail::subset_deviation(A, idx) >= delta - 1e-12 &&
        extremal.empty()) {
      extremal = idx;
    }
  });
  REQUIRE(!extremal.empty());

  std::mt19937_64 rng(8);
  std::normal_distribution<double> normal;
  for (int rep = 0; rep < 1000; ++rep) {
    Vector x = Vector::Zero(10);
    for (int i : extremal) x[i] = normal(rng);
    const double xn = x.squaredNorm();
    const double axn = (A * x).squaredNorm();
    CHECK(axn >= (1.0 - delta) * xn - 1e-9 * xn);
    CHECK(axn <= (1.0 + delta) * xn + 1e-9 * xn);
  }
}
