#pragma once

#include <cstddef>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "levystab/stable.hpp"

namespace levystab {

/// Regularity constants of a loss f(theta, x):
///   |grad f(t,x) - grad f(t',x')| <= K1 |t - t'| + K2 |x - x'| (|t| + |t'| + 1)
///   |grad f(0,x)| <= B
///   <grad f(t1,x) - grad f(t2,x), t1 - t2> >= m |t1 - t2|^2 - K
///   second and third directional derivatives of grad f bounded by L and M.
/// The dissipativity line uses the standard sign.
struct ConstantBundle {
  double K1 = 0.0;
  double K2 = 0.0;
  double B = 0.0;
  double m = 1.0;
  double K = 0.0;
  double L = 0.0;
  double M = 0.0;

  void validate() const;
};

/// Axis-aligned box holding the data points.
struct DataDomain {
  std::vector<double> lo;
  std::vector<double> hi;

  std::size_t dim() const noexcept { return lo.size(); }
  double diameter() const;
  bool contains(std::span<const double> x) const;
};

/// n points in R^{data_dim}, stored row-major. Immutable after construction.
class Dataset {
 public:
  Dataset(std::vector<std::vector<double>> points, double domain_diameter);
  Dataset(std::size_t dim, std::vector<double> flat, double domain_diameter);

  std::size_t size() const noexcept { return dim_ == 0 ? 0 : flat_.size() / dim_; }
  std::size_t dim() const noexcept { return dim_; }
  double domain_diameter() const noexcept { return diameter_; }
  std::span<const double> point(std::size_t i) const {
    return {flat_.data() + i * dim_, dim_};
  }
  const std::vector<double>& flat() const noexcept { return flat_; }

  /// First `count` points, same declared diameter.
  Dataset prefix(std::size_t count) const;

  bool operator==(const Dataset& other) const = default;

 private:
  void check_invariants() const;

  std::size_t dim_;
  std::vector<double> flat_;
  double diameter_;
};

enum class ModelKind { Quadratic1d, DissipativeNonconvex };

/// Loss catalogue:
///  - quadratic-1d: f(theta, x) = (theta x)^2 with x in [x_min, x_max], x_min > 0.
///  - dissipative-nonconvex: f(theta, x) = (m0/2)|theta|^2 + a <x, sin(theta)>
///    with x in [-x_max, x_max]^d and a x_max < m0.
class LossModel {
 public:
  static LossModel quadratic_1d(double x_min, double x_max);
  static LossModel dissipative_nonconvex(std::size_t d, double m0, double a, double x_max);

  ModelKind kind() const noexcept { return kind_; }
  std::string name() const;
  std::size_t theta_dim() const noexcept { return theta_dim_; }
  std::size_t data_dim() const noexcept { return domain_.dim(); }
  const ConstantBundle& constants() const noexcept { return constants_; }
  const DataDomain& domain() const noexcept { return domain_; }
  const std::vector<double>& parameters() const noexcept { return params_; }

  double value(std::span<const double> theta, std::span<const double> x) const;
  /// Writes grad_theta f(theta, x) into out (size theta_dim).
  void grad(std::span<const double> theta, std::span<const double> x, std::span<double> out) const;

 private:
  LossModel(ModelKind kind, std::vector<double> params, std::size_t theta_dim, DataDomain domain,
            ConstantBundle constants);

  ModelKind kind_;
  std::vector<double> params_;
  std::size_t theta_dim_;
  DataDomain domain_;
  ConstantBundle constants_;
};

/// Gradient of f at one data point. Throws DomainError on dimension mismatch.
std::vector<double> grad_f(const LossModel& model, std::span<const double> theta,
                           std::span<const double> x);

/// Gradient of the empirical risk (1/n) sum_i f(theta, x_i).
void grad_F_hat(const LossModel& model, std::span<const double> theta, const Dataset& data,
                std::span<double> out);
std::vector<double> grad_F_hat(const LossModel& model, std::span<const double> theta,
                               const Dataset& data);

/// rho(X, X') = (1/n) sum_i |x_i - x'_i| for aligned datasets.
double rho(const Dataset& a, const Dataset& b);

/// Replace point `index` by point + displacement. The new point must keep every
/// pairwise distance within the declared domain diameter.
Dataset perturb_one(const Dataset& data, std::size_t index, std::span<const double> displacement);

/// Random index and random direction of the given norm, retried until the
/// perturbed point stays inside `domain`.
Dataset perturb_one_random(const Dataset& data, const DataDomain& domain, double norm,
                           RngStream& rng);

/// n points drawn uniformly from the model's data domain.
Dataset sample_dataset(const LossModel& model, std::size_t n, RngStream& rng);
std::vector<double> sample_domain_point(const DataDomain& domain, RngStream& rng);

/// Bounded surrogate: cap * tanh(f / cap).
double surrogate_loss(const LossModel& model, std::span<const double> theta,
                      std::span<const double> x, double cap);
void surrogate_grad(const LossModel& model, std::span<const double> theta,
                    std::span<const double> x, double cap, std::span<double> out);

/// Radius 10 (1 + B/m) of the ball on which constants are verified.
double envelope_radius(const ConstantBundle& constants);

/// Numerical sup of |grad_theta surrogate| over |theta| <= radius and x in the
/// model domain (grid plus random search with local refinement). Deterministic.
double surrogate_lipschitz(const LossModel& model, double cap, double radius, std::uint64_t seed);

/// Mean surrogate loss over all (theta, x_i) pairs. thetas is row-major.
double empirical_risk(const LossModel& model, std::span<const double> thetas,
                      const Dataset& data, double cap);

struct RiskEstimate {
  double mean;
  double standard_error;
};

/// Monte-Carlo estimate of E_x[surrogate(theta, x)] with x uniform on the model
/// domain, averaged over the thetas.
RiskEstimate population_risk_estimate(const LossModel& model, std::span<const double> thetas,
                                      double cap, std::size_t draws, RngStream& rng);

// Dataset files. CSV: one point per row, no header. JSON:
// {"domain_diameter": D, "points": [[...], ...]}.
Dataset load_dataset_csv(std::istream& in, double domain_diameter);
void save_dataset_csv(std::ostream& out, const Dataset& data);
Dataset load_dataset_json(std::istream& in);
void save_dataset_json(std::ostream& out, const Dataset& data);

/// Largest pairwise distance between points.
double max_pairwise_distance(const Dataset& data);

}  // namespace levystab
