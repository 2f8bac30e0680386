#include "levystab/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "levystab/errors.hpp"
#include "levystab/specfun.hpp"

namespace levystab::bounds {

namespace {

constexpr double kLn2 = std::numbers::ln2;

void check_alpha(double alpha, const char* fn) {
  if (!(alpha > 1.0 && alpha < 2.0)) {
    throw DomainError(std::string(fn) + ": alpha must lie strictly inside (1, 2), got " +
                      diag(alpha));
  }
}

void check_d(std::size_t d, const char* fn) {
  if (d == 0) throw DomainError(std::string(fn) + ": d must be positive");
}

// sqrt(d)/(2-a) + 1/(a-1)
double bracket(double alpha, std::size_t d) {
  return std::sqrt(static_cast<double>(d)) / (2.0 - alpha) + 1.0 / (alpha - 1.0);
}

void check_bundle(const ConstantBundle& b) { b.validate(); }

}  // namespace

double log_g(double alpha, std::size_t d) {
  check_alpha(alpha, "g");
  check_d(d, "g");
  const double dd = static_cast<double>(d);
  return alpha * kLn2 + specfun::log_abs_gamma(0.5 * (dd + alpha)) -
         specfun::log_abs_gamma(-0.5 * alpha) + std::log(bracket(alpha, d));
}

double g(double alpha, std::size_t d) { return std::exp(log_g(alpha, d)); }

double g_direct(double alpha, std::size_t d) {
  check_alpha(alpha, "g_direct");
  check_d(d, "g_direct");
  const double dd = static_cast<double>(d);
  const double common =
      std::pow(2.0, alpha) * specfun::gamma(0.5 * (dd + alpha)) / std::fabs(specfun::gamma(-0.5 * alpha));
  return common * std::sqrt(dd) / (2.0 - alpha) + common / (alpha - 1.0);
}

double log_d_alpha(double alpha, std::size_t d) {
  check_alpha(alpha, "d_alpha");
  check_d(d, "d_alpha");
  const double dd = static_cast<double>(d);
  return alpha * kLn2 + specfun::log_abs_gamma(0.5 * (dd + alpha)) -
         0.5 * dd * std::log(std::numbers::pi) - specfun::log_abs_gamma(-0.5 * alpha);
}

double log_sphere_area(std::size_t d) {
  check_d(d, "sphere area");
  const double dd = static_cast<double>(d);
  return kLn2 + 0.5 * dd * std::log(std::numbers::pi) - specfun::log_abs_gamma(0.5 * dd);
}

double C_d_alpha(double alpha, std::size_t d) {
  return std::exp(log_d_alpha(alpha, d) + log_sphere_area(d) + std::log(bracket(alpha, d)));
}

double compute_C0(double alpha, std::size_t d, const ConstantBundle& bundle) {
  check_alpha(alpha, "C0");
  check_d(d, "C0");
  check_bundle(bundle);
  const double dd = static_cast<double>(d);
  const double m = bundle.m;
  // 2^(a+1) Gamma((d+a)/2) pi^(-d/2) area / (|Gamma(-a/2)| m), in log space.
  const double log_coef = (alpha + 1.0) * kLn2 + specfun::log_abs_gamma(0.5 * (dd + alpha)) -
                          0.5 * dd * std::log(std::numbers::pi) + log_sphere_area(d) -
                          specfun::log_abs_gamma(-0.5 * alpha) - std::log(m);
  return 3.0 + 2.0 * (bundle.K + bundle.B) / m + std::exp(log_coef) * bracket(alpha, d);
}

LyapunovParams lyapunov_params(const ConstantBundle& bundle, double alpha, std::size_t d) {
  check_bundle(bundle);
  return {0.5 * bundle.m, bundle.m + bundle.K + bundle.B + C_d_alpha(alpha, d)};
}

CriticalAlpha critical_alpha0() {
  const double c0 = specfun::find_root([](double x) { return specfun::digamma(x); }, 1.0, 2.0, 1e-15);
  return {c0, 2.0 * (c0 - 1.0)};
}

double d0(double alpha0) {
  if (alpha0 == 1.0 || !std::isfinite(alpha0)) throw DomainError("d0: singular at alpha0 = 1");
  const double t = alpha0 - 1.0;
  return std::max(2.0, 1.0 / (kLn2 * kLn2 * t * t * t * t));
}

Alpha0Prime alpha0_prime_detail(std::size_t d, double alpha0, double alpha_y) {
  check_d(d, "alpha0_prime");
  if (!(alpha0 < 2.0) || !std::isfinite(alpha0)) throw DomainError("alpha0_prime: alpha0 must be below 2");
  if (!(alpha_y > 0.0 && alpha_y < 2.0)) {
    throw DomainError("alpha0_prime: alpha for y0 must lie in (0, 2)");
  }
  const double dd = static_cast<double>(d);
  const double y0 = kLn2 + 0.5 * specfun::digamma(dd + 0.5 * alpha_y) + (3.0 - alpha0) / (2.0 - alpha0);
  if (!(y0 > 0.0)) throw DomainError("alpha0_prime: y0 is not positive");
  const double sd = std::sqrt(dd);
  const double branch = 1.0 + (-1.0 + std::sqrt(1.0 + 4.0 * sd / y0)) / (2.0 * sd);
  return {std::min(alpha0, branch), y0};
}

double alpha0_prime(std::size_t d, double alpha0, double alpha_y) {
  return alpha0_prime_detail(d, alpha0, alpha_y).value;
}

double alpha0_prime(std::size_t d, double alpha0) { return alpha0_prime(d, alpha0, alpha0); }

BoundConstants make_bound_constants(double alpha, std::size_t d, const ConstantBundle& bundle,
                                    const ExternalConstants& external, double lipschitz,
                                    double diameter) {
  if (!(lipschitz >= 0.0) || !(diameter >= 0.0)) {
    throw DomainError("bound constants: lipschitz and diameter must be nonnegative");
  }
  BoundConstants k;
  k.alpha = alpha;
  k.d = d;
  k.bundle = bundle;
  k.C0 = compute_C0(alpha, d, bundle);
  k.lipschitz = lipschitz;
  k.diameter = diameter;

  auto pick = [&](const char* name, const std::optional<double>& given, double fallback) {
    const double v = given.value_or(fallback);
    if (!(v > 0.0) || !std::isfinite(v)) {
      throw DomainError(std::string("bound constants: ") + name + " must be positive");
    }
    k.provenance.push_back({name, v, "external-unspecified", given ? "config" : "default"});
    return v;
  };
  k.provenance.push_back({"C0", k.C0, "computed", "formula"});
  k.C1 = pick("C1", external.C1, 1.0);
  k.lambda = pick("lambda", external.lambda, 0.5 * bundle.m);
  k.C = pick("C", external.C, 1.0 + bundle.B / bundle.m);
  k.Q = pick("Q", external.Q, 1.0);
  return k;
}

A1Case a1_case_for(std::size_t N, double eta) {
  if (N == 0) throw DomainError("finite-time bound: N must be at least 1");
  if (!(eta > 0.0 && eta < 1.0)) throw DomainError("finite-time bound: eta must lie in (0, 1)");
  if (N == 1) return A1Case::I;
  return static_cast<double>(N) <= 1.0 / eta + 1.0 ? A1Case::II : A1Case::III;
}

const char* to_string(A1Case c) {
  switch (c) {
    case A1Case::I: return "I";
    case A1Case::II: return "II";
    case A1Case::III: return "III";
  }
  return "?";
}

std::vector<double> theorem_A1_terms(A1Case c, const A1Inputs& in, const BoundConstants& k) {
  if (!(in.eta >= 0.0 && in.eta < 1.0)) throw DomainError("finite-time bound: eta must lie in [0, 1)");
  if (!(in.rho >= 0.0) || !(in.w_norm >= 0.0)) {
    throw DomainError("finite-time bound: rho and |w| must be nonnegative");
  }
  const auto& b = k.bundle;
  const double a = k.alpha;
  const double lip = b.K1 + in.rho * b.K2;        // K1 + rho K2
  const double eta_a = std::pow(in.eta, 1.0 / a);  // eta^(1/alpha)
  const double eta_1a = in.eta * eta_a;            // eta^(1 + 1/alpha)
  if (c == A1Case::I) {
    return {lip * (2.0 * k.C) * (1.0 + in.w_norm) * eta_1a,
            in.rho * b.K2 * (2.0 * in.w_norm + 1.0) * in.eta};
  }
  const double moment = 1.0 + k.C0 * (1.0 + in.w_norm);      // 1 + C0 (1 + |w|)
  const double moment2 = 2.0 * k.C0 * (1.0 + in.w_norm) + 1.0;  // 2 C0 (1 + |w|) + 1
  const double eL = std::exp(b.L);
  const double mix = c == A1Case::III ? k.C1 / k.lambda * std::exp(k.lambda) + 1.0 : 1.0;
  return {lip * (2.0 * k.C) * moment * eta_1a, in.rho * b.K2 * moment2 * in.eta,
          mix * eL * lip * (2.0 * k.C) * moment * eta_a, mix * eL * in.rho * b.K2 * moment2};
}

double theorem_A1_bound(A1Case c, const A1Inputs& in, const BoundConstants& k) {
  const A1Case expected = a1_case_for(in.N, in.eta);
  if (expected != c) {
    throw DomainError(std::string("finite-time bound: case ") + to_string(c) + " does not apply to N = " +
                      std::to_string(in.N) + ", eta = " + diag(in.eta) + " (case " +
                      to_string(expected) + ")");
  }
  double total = 0.0;
  for (double t : theorem_A1_terms(c, in, k)) total += t;
  return total;
}

double stationary_bound(double rho, const BoundConstants& k) {
  if (!(rho >= 0.0)) throw DomainError("stationary bound: rho must be nonnegative");
  return (k.C1 / k.lambda * std::exp(k.lambda) + 1.0) * std::exp(k.bundle.L) * rho * k.bundle.K2 *
         (2.0 * k.C0 + 1.0);
}

double generalization_bound(const BoundConstants& k, std::size_t n) {
  if (n == 0) throw DomainError("generalization bound: n must be positive");
  return k.lipschitz * k.diameter * (k.C1 / k.lambda * std::exp(k.lambda) + 1.0) *
         std::exp(k.bundle.L) * k.bundle.K2 * (2.0 * k.C0 + 1.0) / static_cast<double>(n);
}

double discretization_term(double eta, double alpha, double Q) {
  if (!(eta > 0.0)) throw DomainError("discretization term: eta must be positive");
  if (!(alpha > 1.0 && alpha <= 2.0)) throw DomainError("discretization term: alpha must lie in (1, 2]");
  return 2.0 * Q * std::pow(eta, 2.0 / alpha - 1.0);
}

double max_step_size(const ConstantBundle& bundle) {
  check_bundle(bundle);
  const double by_L = bundle.L > 0.0 ? bundle.m / (bundle.L * bundle.L)
                                     : std::numeric_limits<double>::infinity();
  return std::min({1.0, by_L, 1.0 / bundle.m});
}

double discrete_bound(double eta, double rho, const BoundConstants& k) {
  const double cap = max_step_size(k.bundle);
  if (!(eta > 0.0 && eta < cap)) {
    throw DomainError("discrete bound: eta = " + diag(eta) +
                      " must lie in (0, min(1, m/L^2, 1/m)) = (0, " + diag(cap) + ")");
  }
  return stationary_bound(rho, k) + discretization_term(eta, k.alpha, k.Q);
}

}  // namespace levystab::bounds
