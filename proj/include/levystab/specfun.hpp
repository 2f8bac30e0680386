#pragma once

#include <functional>

namespace levystab::specfun {

/// Gamma function. Lanczos approximation for x >= 0.5, reflection below.
/// Throws DomainError at the poles x = 0, -1, -2, ...
double gamma(double x);

/// log|Gamma(x)|, finite for large x where gamma() overflows.
double log_abs_gamma(double x);

/// Digamma psi(x) = Gamma'(x)/Gamma(x) for x > 0.
double digamma(double x);

/// sin(pi * x) with exact zeros at the integers.
double sin_pi(double x);

struct Bracket {
  double lo;
  double hi;
};

struct RootResult {
  double root;
  Bracket bracket;  // final bracket, width <= tol, sign change preserved
  int iterations;
};

/// Bisection to a bracket of width <= tol, then one secant step clamped to
/// the final bracket. Requires f(lo) * f(hi) < 0 (or a zero at an endpoint).
RootResult find_root_bracketed(const std::function<double(double)>& f, double lo, double hi,
                               double tol);

double find_root(const std::function<double(double)>& f, double lo, double hi, double tol);

}  // namespace levystab::specfun
