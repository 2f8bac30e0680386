#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "levystab/losses.hpp"

namespace levystab::bounds {

// Tail-index dependent constants. Unless stated otherwise alpha must lie in the
// open interval (1, 2) and d >= 1; violations throw DomainError.

/// log g(alpha; d) with
///   g = 2^a Gamma((d+a)/2) / |Gamma(-a/2)| * (sqrt(d)/(2-a) + 1/(a-1)).
double log_g(double alpha, std::size_t d);
/// exp(log_g); +inf once the value leaves double range.
double g(double alpha, std::size_t d);
/// Same quantity evaluated in direct space, for cross-checking at small d.
double g_direct(double alpha, std::size_t d);

/// log d_alpha = log(2^a Gamma((d+a)/2) pi^(-d/2) / |Gamma(-a/2)|).
double log_d_alpha(double alpha, std::size_t d);
/// log of the surface area 2 pi^(d/2) / Gamma(d/2) of the unit sphere in R^d.
double log_sphere_area(std::size_t d);
/// C_{d,alpha} = d_alpha * sphere_area * (sqrt(d)/(2-a) + 1/(a-1)).
double C_d_alpha(double alpha, std::size_t d);

/// C0 = 3 + 2(K+B)/m + 2^(a+1) Gamma((d+a)/2) pi^(-d/2) area / (|Gamma(-a/2)| m)
///      * (sqrt(d)/(2-a) + 1/(a-1)).
double compute_C0(double alpha, std::size_t d, const ConstantBundle& bundle);

struct LyapunovParams {
  double lambda1;  // m / 2
  double q1;       // m + K + B + C_{d,alpha}
};
LyapunovParams lyapunov_params(const ConstantBundle& bundle, double alpha, std::size_t d);

struct CriticalAlpha {
  double c0;      // positive root of the digamma function
  double alpha0;  // 2 (c0 - 1)
};
CriticalAlpha critical_alpha0();

/// max(2, 1 / ((log 2)^2 (alpha0 - 1)^4)); singular at alpha0 = 1.
double d0(double alpha0);

struct Alpha0Prime {
  double value;
  double y0;
};
/// min(alpha0, 1 + (-1 + sqrt(1 + 4 sqrt(d) / y0)) / (2 sqrt(d))) with
/// y0 = log 2 + psi(d + alpha_y/2)/2 + (3 - alpha0)/(2 - alpha0).
/// Needs alpha0 < 2 and 0 < alpha_y < 2.
Alpha0Prime alpha0_prime_detail(std::size_t d, double alpha0, double alpha_y);
double alpha0_prime(std::size_t d, double alpha0, double alpha_y);
double alpha0_prime(std::size_t d, double alpha0);

/// Constants the analysis only asserts to exist. Unset fields take defaults
/// C1 = 1, lambda = m/2, C = 1 + B/m, Q = 1.
struct ExternalConstants {
  std::optional<double> C1;
  std::optional<double> lambda;
  std::optional<double> C;
  std::optional<double> Q;
};

struct ProvenanceEntry {
  std::string name;
  double value;
  std::string status;  // "computed" or "external-unspecified"
  std::string source;  // "formula", "default" or "config"
};

struct BoundConstants {
  double alpha = 1.5;
  std::size_t d = 1;
  double C0 = 0.0;
  double C1 = 1.0;
  double lambda = 0.5;
  double C = 1.0;
  double Q = 1.0;
  ConstantBundle bundle;
  double lipschitz = 1.0;  // Lipschitz constant of the surrogate loss in theta
  double diameter = 0.0;   // data domain diameter D
  std::vector<ProvenanceEntry> provenance;
};

BoundConstants make_bound_constants(double alpha, std::size_t d, const ConstantBundle& bundle,
                                    const ExternalConstants& external, double lipschitz,
                                    double diameter);

enum class A1Case { I, II, III };
/// I for N = 1, II for 2 <= N <= 1/eta + 1, III beyond.
A1Case a1_case_for(std::size_t N, double eta);
const char* to_string(A1Case c);

struct A1Inputs {
  double eta;
  std::size_t N;
  double w_norm;
  double rho;
};

/// Individual summands of the finite-time bound, in the order they are written.
/// Case I has two terms, cases II and III four. The last term of case III is the
/// only one that survives eta -> 0.
std::vector<double> theorem_A1_terms(A1Case c, const A1Inputs& in, const BoundConstants& k);
/// Sum of the terms. Throws DomainError if the case does not match (N, eta).
double theorem_A1_bound(A1Case c, const A1Inputs& in, const BoundConstants& k);

/// (C1 e^lambda / lambda + 1) e^L rho K2 (2 C0 + 1).
double stationary_bound(double rho, const BoundConstants& k);
/// lipschitz * D * (C1 e^lambda / lambda + 1) e^L K2 (2 C0 + 1) / n.
double generalization_bound(const BoundConstants& k, std::size_t n);
/// 2 Q eta^(2/alpha - 1).
double discretization_term(double eta, double alpha, double Q);
/// Largest admissible step size min(1, m/L^2, 1/m); eta must be strictly below it.
double max_step_size(const ConstantBundle& bundle);
/// stationary_bound + discretization_term. Throws DomainError when eta is too large.
double discrete_bound(double eta, double rho, const BoundConstants& k);

}  // namespace levystab::bounds
