#include <cmath>
#include <numeric>
#include <vector>

#include "doctest.h"
#include "levystab/bounds.hpp"
#include "levystab/errors.hpp"
#include "levystab/losses.hpp"

namespace {
#include "oracle_values.inc"
}  // namespace

using namespace levystab;
using namespace levystab::bounds;

namespace {

ConstantBundle quadratic_bundle() { return LossModel::quadratic_1d(0.5, 1.5).constants(); }

double sum(const std::vector<double>& v) { return std::accumulate(v.begin(), v.end(), 0.0); }

}  // namespace

TEST_CASE("log g and C_{d,alpha} against closed forms") {
  for (const auto& row : kGCurve) {
    const double alpha = row[0];
    const auto d = static_cast<std::size_t>(row[1]);
    CAPTURE(alpha);
    CAPTURE(d);
    CHECK(std::fabs(log_g(alpha, d) - row[2]) < 1e-12 * std::max(1.0, std::fabs(row[2])));
    CHECK(C_d_alpha(alpha, d) == doctest::Approx(row[3]).epsilon(1e-12));
  }
}

TEST_CASE("g matches the direct product form where it is representable") {
  CHECK(g(1.5, 1) == doctest::Approx(2.1213203435596426).epsilon(1e-14));
  CHECK(g(1.2, 3) == doctest::Approx(4.6595917585384765).epsilon(1e-14));
  for (double alpha : {1.1, 1.4, 1.9}) {
    for (std::size_t d : {1, 5, 50}) CHECK(g(alpha, d) == doctest::Approx(g_direct(alpha, d)).epsilon(1e-12));
  }
  CHECK(std::isinf(g(1.5, 1000)));
  CHECK(std::isfinite(log_g(1.5, 1000)));
}

TEST_CASE("g has a finite limit at alpha = 2") {
  // |Gamma(-alpha/2)| (2 - alpha) -> 2, so g(2-; d) = 2 Gamma(d/2 + 1) sqrt(d).
  for (std::size_t d : {1, 10, 100}) {
    CAPTURE(d);
    const double dd = static_cast<double>(d);
    const double limit = std::log(2.0) + std::lgamma(dd / 2 + 1) + 0.5 * std::log(dd);
    CHECK(std::fabs(log_g(2.0 - 1e-6, d) - limit) < 1e-4);
  }
  // Endpoint ratios against g(1.5; d), mpmath at 30 digits.
  const double ratios[3][3] = {{1, 0.83621241418982755, 26.976160412928374},
                               {10, 1.9494981901083343, 8.0621495000661439},
                               {100, 4.0264000661891893, 1.8624697934474264}};
  for (const auto& r : ratios) {
    const auto d = static_cast<std::size_t>(r[0]);
    CAPTURE(d);
    CHECK(std::exp(log_g(1.99, d) - log_g(1.5, d)) == doctest::Approx(r[1]).epsilon(1e-12));
    CHECK(std::exp(log_g(1.01, d) - log_g(1.5, d)) == doctest::Approx(r[2]).epsilon(1e-12));
  }
}

TEST_CASE("alpha-dependent formulas reject the endpoints") {
  for (double alpha : {1.0, 2.0, 0.5, 2.5}) {
    CAPTURE(alpha);
    CHECK_THROWS_AS(log_g(alpha, 1), DomainError);
    CHECK_THROWS_AS(C_d_alpha(alpha, 1), DomainError);
    CHECK_THROWS_AS(compute_C0(alpha, 1, quadratic_bundle()), DomainError);
  }
  CHECK_THROWS_AS(log_g(1.5, 0), DomainError);
}

TEST_CASE("C0 against the closed form and the Lyapunov identity") {
  for (const auto& row : kC0) {
    ConstantBundle b;
    b.K = row[2];
    b.B = row[3];
    b.m = row[4];
    const auto d = static_cast<std::size_t>(row[1]);
    CAPTURE(row[0]);
    CHECK(compute_C0(row[0], d, b) == doctest::Approx(row[5]).epsilon(1e-12));
    const auto lp = lyapunov_params(b, row[0], d);
    CHECK(lp.lambda1 == doctest::Approx(0.5 * b.m));
    CHECK(compute_C0(row[0], d, b) == doctest::Approx(1.0 + lp.q1 / lp.lambda1).epsilon(1e-12));
  }
  CHECK(C_d_alpha(1.5, 1) == doctest::Approx(2.3936536824085961).epsilon(1e-13));
  ConstantBundle unit;
  CHECK(compute_C0(1.5, 1, unit) == doctest::Approx(7.7873073648171921).epsilon(1e-13));
}

TEST_CASE("critical constants") {
  const auto c = critical_alpha0();
  CHECK(std::fabs(c.c0 - kC0Root) < 1e-15);
  CHECK(std::fabs(c.alpha0 - kAlpha0) < 4e-15);
  CHECK(std::fabs(c.c0 - 1.46163211) < 1e-6);
  CHECK(d0(c.alpha0) == doctest::Approx(kD0AtAlpha0).epsilon(1e-10));
  CHECK(d0(1.5) == doctest::Approx(kD0At1p5).epsilon(1e-14));
  CHECK(d0(0.0) == doctest::Approx(kD0AtZero).epsilon(1e-14));
  CHECK(d0(3.0) == 2.0);
  CHECK_THROWS_AS(d0(1.0), DomainError);
}

TEST_CASE("alpha0 prime") {
  for (const auto& row : kAlpha0Prime) {
    const auto r = alpha0_prime_detail(static_cast<std::size_t>(row[0]), row[1], row[2]);
    CAPTURE(row[0]);
    CAPTURE(row[1]);
    CHECK(r.value == doctest::Approx(row[3]).epsilon(1e-13));
    CHECK(r.y0 == doctest::Approx(row[4]).epsilon(1e-13));
  }
  CHECK(alpha0_prime(1, 1.5) == doctest::Approx(kAlpha0Prime[0][3]).epsilon(1e-13));
  CHECK_THROWS_AS(alpha0_prime(1, 1.5, 2.0), DomainError);
  CHECK_THROWS_AS(alpha0_prime(1, 2.0, 1.5), DomainError);
}

TEST_CASE("bound constants defaults and provenance") {
  const auto b = quadratic_bundle();
  const auto k = make_bound_constants(1.5, 1, b, {}, 1.7, 1.0);
  CHECK(k.C1 == 1.0);
  CHECK(k.lambda == doctest::Approx(0.25));
  CHECK(k.C == doctest::Approx(1.0));
  CHECK(k.Q == 1.0);
  CHECK(k.C0 == doctest::Approx(compute_C0(1.5, 1, b)));
  int external = 0;
  for (const auto& p : k.provenance) {
    if (p.status == "external-unspecified") {
      ++external;
      CHECK(p.source == "default");
    }
  }
  CHECK(external == 4);

  ExternalConstants given;
  given.Q = 2.5;
  const auto k2 = make_bound_constants(1.5, 1, b, given, 1.7, 1.0);
  CHECK(k2.Q == 2.5);
  bool saw_config = false;
  for (const auto& p : k2.provenance) saw_config = saw_config || (p.name == "Q" && p.source == "config");
  CHECK(saw_config);

  given.C1 = -1.0;
  CHECK_THROWS_AS(make_bound_constants(1.5, 1, b, given, 1.7, 1.0), DomainError);
}

TEST_CASE("finite-time bound case selection") {
  CHECK(a1_case_for(1, 0.1) == A1Case::I);
  CHECK(a1_case_for(11, 0.1) == A1Case::II);
  CHECK(a1_case_for(12, 0.1) == A1Case::III);
  CHECK_THROWS_AS(a1_case_for(0, 0.1), DomainError);
  CHECK_THROWS_AS(a1_case_for(5, 1.0), DomainError);
}

TEST_CASE("finite-time bound terms") {
  ConstantBundle b;
  b.K1 = 2.0;
  b.K2 = 1.5;
  b.m = 1.0;
  b.L = 0.7;
  const auto k = make_bound_constants(1.5, 2, b, {}, 1.0, 1.0);
  const double eta = 0.04, rho = 0.1, w = 0.5;
  const double lip = 2.0 + rho * 1.5;
  const double e1a = std::pow(eta, 1.0 + 1.0 / 1.5);

  const auto t1 = theorem_A1_terms(A1Case::I, {eta, 1, w, rho}, k);
  REQUIRE(t1.size() == 2);
  CHECK(t1[0] == doctest::Approx(lip * 2.0 * k.C * (1.0 + w) * e1a));
  CHECK(t1[1] == doctest::Approx(rho * 1.5 * (2.0 * w + 1.0) * eta));

  const double mom = 1.0 + k.C0 * (1.0 + w);
  const double mom2 = 2.0 * k.C0 * (1.0 + w) + 1.0;
  const double eL = std::exp(0.7);
  const auto t2 = theorem_A1_terms(A1Case::II, {eta, 10, w, rho}, k);
  REQUIRE(t2.size() == 4);
  CHECK(t2[0] == doctest::Approx(lip * 2.0 * k.C * mom * e1a));
  CHECK(t2[1] == doctest::Approx(rho * 1.5 * mom2 * eta));
  CHECK(t2[2] == doctest::Approx(eL * lip * 2.0 * k.C * mom * std::pow(eta, 1.0 / 1.5)));
  CHECK(t2[3] == doctest::Approx(eL * rho * 1.5 * mom2));
  CHECK(theorem_A1_bound(A1Case::II, {eta, 10, w, rho}, k) == doctest::Approx(sum(t2)));

  const double mix = k.C1 / k.lambda * std::exp(k.lambda) + 1.0;
  const auto t3 = theorem_A1_terms(A1Case::III, {eta, 100, w, rho}, k);
  CHECK(t3[0] == doctest::Approx(t2[0]));
  CHECK(t3[1] == doctest::Approx(t2[1]));
  CHECK(t3[2] == doctest::Approx(mix * t2[2]));
  CHECK(t3[3] == doctest::Approx(mix * t2[3]));

  CHECK_THROWS_AS(theorem_A1_bound(A1Case::II, {eta, 100, w, rho}, k), DomainError);
}

TEST_CASE("case III at eta = 0 and |w| = 0 is the stationary bound") {
  ConstantBundle b;
  b.K1 = 2.0;
  b.K2 = 1.5;
  b.m = 1.0;
  b.L = 0.7;
  const auto k = make_bound_constants(1.5, 2, b, {}, 1.0, 1.0);
  const double total = sum(theorem_A1_terms(A1Case::III, {0.0, 1000, 0.0, 0.1}, k));
  CHECK(std::fabs(total - stationary_bound(0.1, k)) <= 1e-12 * stationary_bound(0.1, k));
}

TEST_CASE("stationary, generalization and discrete bounds") {
  const auto b = quadratic_bundle();
  const auto k = make_bound_constants(1.5, 1, b, {}, 1.7, 1.0);
  CHECK(stationary_bound(0.0, k) == 0.0);
  CHECK(stationary_bound(0.02, k) == doctest::Approx(2.0 * stationary_bound(0.01, k)));
  CHECK(generalization_bound(k, 200) == doctest::Approx(0.5 * generalization_bound(k, 100)));
  // The generalization bound is L_surrogate * D times the stationary bound at rho = 1/n.
  CHECK(generalization_bound(k, 100) == doctest::Approx(1.7 * 1.0 * stationary_bound(0.01, k)));

  CHECK(discretization_term(0.01, 1.5, 1.0) == doctest::Approx(0.43088693800637673).epsilon(1e-14));
  for (double eta : {0.3, 1e-4}) CHECK(discretization_term(eta, 2.0, 1.3) == 2.0 * 1.3);

  CHECK(max_step_size(b) == doctest::Approx(0.5 / (4.5 * 4.5)));
  CHECK(discrete_bound(0.01, 0.0, k) == doctest::Approx(discretization_term(0.01, 1.5, 1.0)));
  CHECK(discrete_bound(0.01, 0.01, k) == doctest::Approx(stationary_bound(0.01, k) + 0.43088693800637673));
  CHECK_THROWS_AS(discrete_bound(0.03, 0.01, k), DomainError);
  CHECK_THROWS_AS(stationary_bound(-1.0, k), DomainError);
}
