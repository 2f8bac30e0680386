#include <cmath>
#include <vector>

#include "doctest.h"
#include "levystab/errors.hpp"
#include "levystab/stable.hpp"

using namespace levystab;

namespace {

constexpr std::size_t kDraws = 100000;

double ecf_scalar(const StableNoiseSpec& spec, double u, std::uint64_t stream) {
  RngStream rng(7, stream);
  double acc = 0.0;
  for (std::size_t i = 0; i < kDraws; ++i) acc += std::cos(u * sample_sas_scalar(spec, rng));
  return acc / kDraws;
}

}  // namespace

TEST_CASE("noise spec validation") {
  const auto check = [](double alpha, double scale) { StableNoiseSpec{alpha, scale}.validate(); };
  CHECK_NOTHROW(check(1.5, 1.0));
  CHECK_NOTHROW(check(2.0, 0.3));
  CHECK_THROWS_AS(check(1.0, 1.0), DomainError);
  CHECK_THROWS_AS(check(2.01, 1.0), DomainError);
  CHECK_THROWS_AS(check(0.8, 1.0), DomainError);
  CHECK_THROWS_AS(check(1.5, 0.0), DomainError);
  CHECK_THROWS_AS(check(1.5, -1.0), DomainError);
}

TEST_CASE("streams are reproducible and distinct") {
  RngStream a(42, 3), b(42, 3), c(42, 4), d(43, 3);
  const StableNoiseSpec spec{1.5, 1.0};
  bool c_differs = false, d_differs = false;
  for (int i = 0; i < 100; ++i) {
    const double x = sample_sas_scalar(spec, a);
    CHECK(x == sample_sas_scalar(spec, b));
    c_differs = c_differs || x != sample_sas_scalar(spec, c);
    d_differs = d_differs || x != sample_sas_scalar(spec, d);
  }
  CHECK(c_differs);
  CHECK(d_differs);
  RngStream u(1, 0);
  for (int i = 0; i < 1000; ++i) {
    const double v = u.uniform_open();
    CHECK(v > 0.0);
    CHECK(v < 1.0);
  }
}

TEST_CASE("scalar sampler matches the stable characteristic function") {
  // Monte-Carlo error of a cosine mean is at most 1/sqrt(1e5) ~ 0.003.
  for (double alpha : {1.1, 1.5, 1.9}) {
    for (double scale : {0.5, 2.0}) {
      const StableNoiseSpec spec{alpha, scale};
      for (double u : {0.3, 1.0}) {
        CAPTURE(alpha);
        CAPTURE(scale);
        CAPTURE(u);
        const double target = std::exp(-std::pow(scale * u, alpha));
        CHECK(std::fabs(ecf_scalar(spec, u, 11) - target) < 0.012);
      }
    }
  }
}

TEST_CASE("alpha = 2 is Gaussian with variance 2 scale^2") {
  RngStream rng(5, 0);
  const StableNoiseSpec spec{2.0, 1.5};
  double s2 = 0.0;
  for (std::size_t i = 0; i < kDraws; ++i) {
    const double x = sample_sas_scalar(spec, rng);
    s2 += x * x;
  }
  // Var of x^2 is 2 (2 scale^2)^2 = 40.5, so the mean has SE 0.02.
  CHECK(std::fabs(s2 / kDraws - 4.5) < 0.1);
}

TEST_CASE("positive stable draws have the right Laplace transform") {
  for (double index : {0.55, 0.75, 0.95}) {
    RngStream rng(9, 1);
    std::vector<double> acc(3, 0.0);
    const double s[] = {0.5, 1.0, 2.0};
    for (std::size_t i = 0; i < kDraws; ++i) {
      const double a = sample_positive_stable(index, rng);
      REQUIRE(a > 0.0);
      for (int j = 0; j < 3; ++j) acc[j] += std::exp(-s[j] * a);
    }
    for (int j = 0; j < 3; ++j) {
      CAPTURE(index);
      CHECK(std::fabs(acc[j] / kDraws - std::exp(-std::pow(s[j], index))) < 0.01);
    }
  }
  RngStream rng(1, 1);
  CHECK(sample_positive_stable(1.0, rng) == 1.0);
}

TEST_CASE("isotropic sampler is rotation invariant") {
  const StableNoiseSpec spec{1.4, 0.8};
  const std::size_t d = 5;
  RngStream rng(3, 2);
  // Two different unit directions and a frequency vector of norm 1.5 each.
  const double u = 1.5;
  double acc_axis = 0.0, acc_diag = 0.0;
  std::vector<double> x(d);
  for (std::size_t i = 0; i < kDraws; ++i) {
    sample_isotropic_vector(spec, rng, x);
    acc_axis += std::cos(u * x[2]);
    double proj = 0.0;
    for (double v : x) proj += v;
    acc_diag += std::cos(u * proj / std::sqrt(static_cast<double>(d)));
  }
  const double target = std::exp(-std::pow(spec.scale * u, spec.alpha));
  CHECK(std::fabs(acc_axis / kDraws - target) < 0.012);
  CHECK(std::fabs(acc_diag / kDraws - target) < 0.012);
}

TEST_CASE("increment is the unit draw scaled by scale * dt^(1/alpha)") {
  const StableNoiseSpec spec{1.5, 2.0};
  const double dt = 0.01;
  RngStream a(8, 0), b(8, 0);
  const auto inc = sample_increment(spec, 4, dt, a);
  const auto unit = sample_isotropic_vector(StableNoiseSpec{1.5, 1.0}, 4, b);
  const double factor = 2.0 * std::pow(dt, 1.0 / 1.5);
  for (std::size_t i = 0; i < 4; ++i) CHECK(inc[i] == doctest::Approx(factor * unit[i]).epsilon(1e-14));
  RngStream c(8, 0);
  CHECK_THROWS_AS(sample_increment(spec, 4, 0.0, c), DomainError);
}

TEST_CASE("Hill estimator recovers the tail index") {
  RngStream rng(12, 0);
  std::vector<double> pareto(kDraws);
  for (double& v : pareto) v = std::pow(rng.uniform_open(), -1.0 / 1.5);
  CHECK(std::fabs(tail_index_estimate(pareto, 5000) - 1.5) < 0.08);

  const StableNoiseSpec spec{1.5, 1.0};
  std::vector<double> sas(kDraws);
  for (double& v : sas) v = sample_sas_scalar(spec, rng);
  CHECK(std::fabs(tail_index_estimate(sas, 500) - 1.5) < 0.25);

  const std::vector<double> flat(10, 1.0);
  CHECK(std::isinf(tail_index_estimate(flat, 3)));
  CHECK_THROWS_AS(tail_index_estimate(flat, 10), DomainError);
  CHECK_THROWS_AS(tail_index_estimate(std::vector<double>(5, 0.0), 2), DomainError);
}
