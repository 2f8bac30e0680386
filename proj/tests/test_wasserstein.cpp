#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>
#include <vector>

#include "doctest.h"
#include "levystab/errors.hpp"
#include "levystab/wasserstein.hpp"

using namespace levystab;

namespace {

double brute_force_assignment(const std::vector<double>& cost, std::size_t n) {
  std::vector<std::size_t> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  double best = std::numeric_limits<double>::infinity();
  do {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) s += cost[i * n + perm[i]];
    best = std::min(best, s);
  } while (std::next_permutation(perm.begin(), perm.end()));
  return best;
}

EmpiricalMeasure random_cloud(RngStream& rng, std::size_t n, std::size_t d, double shift = 0.0) {
  std::vector<double> flat(n * d);
  for (double& v : flat) v = shift + rng.normal();
  return EmpiricalMeasure(d, flat);
}

}  // namespace

TEST_CASE("sorted 1-d distance") {
  const EmpiricalMeasure a(1, {2.0, 0.0, 1.0});
  const EmpiricalMeasure b(1, {3.0, 1.0, 2.0});
  CHECK(w1_exact_1d(a, b) == doctest::Approx(1.0));
  CHECK(w1_exact_1d(a, a) == 0.0);
  CHECK(w1_exact_1d(EmpiricalMeasure(1, {0.0, 10.0}), EmpiricalMeasure(1, {4.0, 6.0})) == doctest::Approx(4.0));
  CHECK_THROWS_AS(w1_exact_1d(a, EmpiricalMeasure(1, {1.0})), DomainError);
}

TEST_CASE("1-d distance for unequal sample counts") {
  CHECK(w1_1d({0.0}, {0.0, 1.0}) == doctest::Approx(0.5));
  CHECK(w1_1d({0.0, 1.0, 2.0, 3.0}, {0.5, 2.5}) == doctest::Approx(0.5));
  RngStream rng(1, 0);
  std::vector<double> a(40), b(40);
  for (double& v : a) v = rng.normal();
  for (double& v : b) v = rng.normal() + 1.0;
  CHECK(w1_1d(a, b) == doctest::Approx(w1_exact_1d(EmpiricalMeasure(1, a), EmpiricalMeasure(1, b))).epsilon(1e-12));
}

TEST_CASE("assignment solver is optimal on small matrices") {
  RngStream rng(2, 0);
  for (int trial = 0; trial < 30; ++trial) {
    const std::size_t n = 2 + static_cast<std::size_t>(trial % 6);
    std::vector<double> cost(n * n);
    for (double& v : cost) v = rng.uniform(-3.0, 5.0);
    const auto col = solve_assignment(cost, n);
    std::vector<std::size_t> sorted = col;
    std::sort(sorted.begin(), sorted.end());
    for (std::size_t i = 0; i < n; ++i) CHECK(sorted[i] == i);
    double total = 0.0;
    for (std::size_t i = 0; i < n; ++i) total += cost[i * n + col[i]];
    CHECK(total == doctest::Approx(brute_force_assignment(cost, n)).epsilon(1e-12));
  }
}

TEST_CASE("assignment W1 is a metric on clouds") {
  RngStream rng(3, 0);
  const auto a = random_cloud(rng, 30, 3);
  const auto b = random_cloud(rng, 30, 3, 0.5);
  const auto c = random_cloud(rng, 30, 3, -0.5);
  const double ab = w1_assignment(a, b);
  CHECK(w1_assignment(a, a) == 0.0);
  CHECK(ab == doctest::Approx(w1_assignment(b, a)).epsilon(1e-12));
  CHECK(w1_assignment(a, c) <= ab + w1_assignment(b, c) + 1e-12);
}

TEST_CASE("assignment W1 in one dimension delegates to sorting") {
  RngStream rng(4, 0);
  const auto a = random_cloud(rng, 100, 1);
  const auto b = random_cloud(rng, 100, 1, 2.0);
  CHECK(w1_assignment(a, b) == w1_exact_1d(a, b));
}

TEST_CASE("assignment W1 size guard") {
  const EmpiricalMeasure big(2, std::vector<double>(2 * (kAssignmentCap + 1), 0.0));
  CHECK_THROWS_AS(w1_assignment(big, big), DomainError);
  CHECK_THROWS_AS(w1_assignment(EmpiricalMeasure(2, {0, 0}), EmpiricalMeasure(3, {0, 0, 0})), DomainError);
}

TEST_CASE("sliced W1 lower-bounds the exact distance") {
  RngStream rng(5, 0);
  const auto a = random_cloud(rng, 64, 4);
  const auto b = random_cloud(rng, 64, 4, 0.7);
  RngStream proj(6, 0);
  const double sliced = w1_sliced(a, b, 200, proj);
  CHECK(sliced > 0.0);
  CHECK(sliced <= w1_assignment(a, b) + 1e-12);
}

TEST_CASE("sliced W1 of a translation is E|<v, u>| |v|") {
  // For u uniform on the sphere in R^d, E|u_1| is 2/pi (d=2), 1/2 (d=3), 3/8 (d=5).
  const double c[] = {0.0, 0.0, 2.0 / std::numbers::pi, 0.5, 0.0, 0.375};
  RngStream rng(7, 0);
  for (std::size_t d : {2, 3, 5}) {
    const auto a = random_cloud(rng, 20, d);
    std::vector<double> shifted = a.flat();
    for (std::size_t i = 0; i < shifted.size(); i += d) shifted[i] += 2.0;
    RngStream proj(8, d);
    const double sliced = w1_sliced(a, EmpiricalMeasure(d, shifted), 20000, proj);
    CAPTURE(d);
    CHECK(sliced == doctest::Approx(2.0 * c[d]).epsilon(0.02));
  }
}

TEST_CASE("sliced W1 is reproducible from the stream") {
  RngStream rng(9, 0);
  const auto a = random_cloud(rng, 50, 3);
  const auto b = random_cloud(rng, 50, 3, 1.0);
  RngStream p1(10, 0), p2(10, 0);
  CHECK(w1_sliced(a, b, 50, p1) == w1_sliced(a, b, 50, p2));
}

TEST_CASE("empirical p-moment") {
  const EmpiricalMeasure a(2, {3.0, 4.0, 0.0, 0.0});
  CHECK(empirical_p_moment(a, 2.0) == doctest::Approx(12.5));
  CHECK(empirical_p_moment(a, 1.0) == doctest::Approx(2.5));
}
