#include "levystab/specfun.hpp"

#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "levystab/errors.hpp"

namespace levystab::specfun {

namespace {

// Lanczos coefficients for g = 7, n = 9.
constexpr double kLanczosG = 7.0;
constexpr std::array<double, 9> kLanczos = {
    0.99999999999980993,     676.5203681218851,     -1259.1392167224028,
    771.32342877765313,      -176.61502916214059,   12.507343278686905,
    -0.13857109526572012,    9.9843695780195716e-6, 1.5056327351493116e-7};

double lanczos_sum(double x) {
  // x is the shifted argument (original minus one).
  double sum = kLanczos[0];
  for (std::size_t i = 1; i < kLanczos.size(); ++i) {
    sum += kLanczos[i] / (x + static_cast<double>(i));
  }
  return sum;
}

bool is_pole(double x) { return x <= 0.0 && std::floor(x) == x; }

void check_pole(double x, const char* fn) {
  if (std::isnan(x)) {
    throw DomainError(std::string(fn) + ": argument is NaN");
  }
  if (is_pole(x)) {
    throw DomainError(std::string(fn) + ": pole at x = " + diag(x));
  }
}

// Valid for x >= 0.5.
double gamma_positive(double x) {
  const double xm1 = x - 1.0;
  const double t = xm1 + kLanczosG + 0.5;
  const double s = std::sqrt(2.0 * std::numbers::pi) * lanczos_sum(xm1);
  // Split the power so t^(x-0.5) does not overflow before the e^-t factor.
  const double half = std::pow(t, 0.5 * (xm1 + 0.5));
  return s * half * std::exp(-t) * half;
}

double log_gamma_positive(double x) {
  const double xm1 = x - 1.0;
  const double t = xm1 + kLanczosG + 0.5;
  return 0.5 * std::log(2.0 * std::numbers::pi) + (xm1 + 0.5) * std::log(t) - t +
         std::log(lanczos_sum(xm1));
}

}  // namespace

double sin_pi(double x) {
  if (!std::isfinite(x)) return std::numeric_limits<double>::quiet_NaN();
  // Reduce to r in [-1, 1) using sin(pi(x + 2k)) = sin(pi x).
  double r = std::fmod(x, 2.0);
  if (r >= 1.0) r -= 2.0;
  if (r < -1.0) r += 2.0;
  if (r == 0.0 || r == -1.0) return 0.0;
  // Fold to [-0.5, 0.5] where std::sin is accurate relative to the argument.
  if (r > 0.5) r = 1.0 - r;
  if (r < -0.5) r = -1.0 - r;
  return std::sin(std::numbers::pi * r);
}

double gamma(double x) {
  check_pole(x, "gamma");
  if (x >= 0.5) return gamma_positive(x);
  // Reflection: Gamma(x) Gamma(1 - x) = pi / sin(pi x).
  return std::numbers::pi / (sin_pi(x) * gamma_positive(1.0 - x));
}

double log_abs_gamma(double x) {
  check_pole(x, "log_abs_gamma");
  if (x >= 0.5) return log_gamma_positive(x);
  return std::log(std::numbers::pi) - std::log(std::fabs(sin_pi(x))) - log_gamma_positive(1.0 - x);
}

double digamma(double x) {
  if (!(x > 0.0)) {
    throw DomainError("digamma: requires x > 0, got " + diag(x));
  }
  double result = 0.0;
  while (x < 10.0) {
    result -= 1.0 / x;
    x += 1.0;
  }
  // Asymptotic expansion, Bernoulli terms through B_14.
  const double inv = 1.0 / x;
  const double inv2 = inv * inv;
  const double series =
      inv2 * (1.0 / 12.0 -
              inv2 * (1.0 / 120.0 -
                      inv2 * (1.0 / 252.0 -
                              inv2 * (1.0 / 240.0 -
                                      inv2 * (1.0 / 132.0 -
                                              inv2 * (691.0 / 32760.0 - inv2 * (1.0 / 12.0)))))));
  return result + std::log(x) - 0.5 * inv - series;
}

RootResult find_root_bracketed(const std::function<double(double)>& f, double lo, double hi,
                               double tol) {
  if (!(tol > 0.0)) {
    throw DomainError("find_root: tolerance must be positive");
  }
  if (!(lo < hi)) {
    throw DomainError("find_root: requires lo < hi");
  }
  double flo = f(lo);
  double fhi = f(hi);
  if (flo == 0.0) return {lo, {lo, lo}, 0};
  if (fhi == 0.0) return {hi, {hi, hi}, 0};
  if (std::signbit(flo) == std::signbit(fhi)) {
    throw DomainError("find_root: f(lo) and f(hi) have the same sign");
  }

  int iterations = 0;
  while (hi - lo > tol) {
    const double mid = lo + 0.5 * (hi - lo);
    if (mid <= lo || mid >= hi) break;  // bracket at floating-point resolution
    const double fmid = f(mid);
    ++iterations;
    if (fmid == 0.0) return {mid, {mid, mid}, iterations};
    if (std::signbit(fmid) == std::signbit(flo)) {
      lo = mid;
      flo = fmid;
    } else {
      hi = mid;
      fhi = fmid;
    }
  }

  // Secant polish inside the final bracket; never leaves [lo, hi].
  double root = lo + 0.5 * (hi - lo);
  const double denom = fhi - flo;
  if (denom != 0.0 && std::isfinite(denom)) {
    const double secant = lo - flo * (hi - lo) / denom;
    if (secant >= lo && secant <= hi) root = secant;
  }
  return {root, {lo, hi}, iterations};
}

double find_root(const std::function<double(double)>& f, double lo, double hi, double tol) {
  return find_root_bracketed(f, lo, hi, tol).root;
}

}  // namespace levystab::specfun
