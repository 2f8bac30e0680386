#pragma once

#include <cstddef>
#include <cstdint>
#include <random>
#include <span>
#include <vector>

namespace levystab {

/// Tail index and scale of a symmetric alpha-stable law with characteristic
/// function exp(-scale^alpha |u|^alpha). Restricted to 1 < alpha <= 2.
struct StableNoiseSpec {
  double alpha = 2.0;
  double scale = 1.0;

  /// Throws DomainError unless 1 < alpha <= 2 and scale > 0.
  void validate() const;
};

/// Reproducible random stream keyed by (seed, stream id). Replicas and
/// projections each take their own stream id.
class RngStream {
 public:
  RngStream(std::uint64_t seed, std::uint64_t stream);

  std::uint64_t seed() const noexcept { return seed_; }
  std::uint64_t stream() const noexcept { return stream_; }

  /// Uniform on the open interval (0, 1).
  double uniform_open();
  double uniform(double lo, double hi);
  double normal();
  double exponential();
  std::uint64_t next_u64() { return engine_(); }

 private:
  std::uint64_t seed_;
  std::uint64_t stream_;
  std::mt19937_64 engine_;
  std::uniform_real_distribution<double> unit_{0.0, 1.0};
  std::normal_distribution<double> normal_{0.0, 1.0};
  std::exponential_distribution<double> exponential_{1.0};
};

/// One SaS(scale) draw (Chambers-Mallows-Stuck). Gaussian with variance
/// 2 scale^2 at alpha = 2.
double sample_sas_scalar(const StableNoiseSpec& spec, RngStream& rng);

/// Positive stable variable with Laplace transform E[exp(-s A)] = exp(-s^index),
/// 0 < index <= 1 (Kanter's representation). Returns 1 at index = 1.
double sample_positive_stable(double index, RngStream& rng);

/// Rotationally symmetric draw with E[exp(i<u,X>)] = exp(-scale^alpha |u|^alpha),
/// built as sqrt(A) * G with G ~ N(0, 2 scale^2 I) and A positive (alpha/2)-stable.
void sample_isotropic_vector(const StableNoiseSpec& spec, RngStream& rng, std::span<double> out);
std::vector<double> sample_isotropic_vector(const StableNoiseSpec& spec, std::size_t d,
                                            RngStream& rng);

/// Increment of the driving Levy process over a step dt:
/// scale * dt^(1/alpha) * S with S a unit-scale isotropic draw.
void sample_increment(const StableNoiseSpec& spec, double dt, RngStream& rng,
                      std::span<double> out);
std::vector<double> sample_increment(const StableNoiseSpec& spec, std::size_t d, double dt,
                                     RngStream& rng);

/// Hill estimator of the tail index from the k largest |samples|.
/// Returns +infinity when all k log-spacings are zero.
double tail_index_estimate(std::span<const double> samples, std::size_t k);

}  // namespace levystab
