#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <span>
#include <vector>

#include "levystab/losses.hpp"
#include "levystab/stable.hpp"

namespace levystab {

/// Step size, horizon and replication of an Euler-Maruyama run.
struct ChainConfig {
  double eta = 0.01;
  std::size_t steps = 0;    // total iterations N
  std::size_t burn_in = 0;  // iterations discarded before harvesting
  std::size_t replicas = 1;
  std::uint64_t seed = 42;
  std::vector<double> theta0;  // starting point w; empty means the origin

  void validate(std::size_t theta_dim) const;
};

/// ceil(10 / (m eta)): about twenty time constants of the m/2 Lyapunov rate.
std::size_t default_burn_in(double m, double eta);

/// Writes the gradient of the potential at theta into out. The update is
/// theta - eta * drift(theta) + eta^(1/alpha) S.
using DriftFn = std::function<void(std::span<const double>, std::span<double>)>;

/// Full empirical gradient of the model on the dataset. Keeps references to
/// both arguments, which must outlive the returned function.
DriftFn empirical_drift(const LossModel& model, const Dataset& data);
/// Ornstein-Uhlenbeck potential gradient a * theta.
DriftFn linear_drift(double a);
DriftFn zero_drift();

/// theta <- theta - eta * drift(theta) + increment, in place. The increment is
/// a precomputed noise draw (see sample_increment) so coupled chains can share it.
/// Returns false if any coordinate became non-finite.
bool euler_step(const DriftFn& drift, std::span<double> theta, double eta,
                std::span<const double> increment, std::span<double> scratch);

/// One update of theta under the model's empirical gradient, drawing fresh noise.
std::vector<double> step(const LossModel& model, const Dataset& data,
                         std::span<const double> theta, const ChainConfig& config,
                         const StableNoiseSpec& noise, RngStream& rng);

struct CoupledTrajectoryResult {
  std::size_t dim = 0;
  std::vector<double> theta_samples;      // replicas x dim, row-major
  std::vector<double> theta_hat_samples;  // replicas x dim, row-major
  std::vector<double> coupled_distances;  // per replica |theta_N - theta_hat_N|
  std::vector<double> time_series;        // per step mean coupled distance (optional)
};

struct RunOptions {
  bool record_time_series = false;
  /// Trajectory CSV sink (columns step, replica, theta_*, theta_hat_*); null disables.
  std::ostream* trajectory = nullptr;
  std::size_t trajectory_every = 1;
};

/// Twin chains on data_a and data_b driven by the same noise sequence.
/// Replica r uses RngStream(config.seed, r).
CoupledTrajectoryResult run_coupled(const DriftFn& drift_a, const DriftFn& drift_b,
                                    std::size_t dim, const StableNoiseSpec& noise,
                                    const ChainConfig& config, const RunOptions& options = {});
CoupledTrajectoryResult run_coupled(const LossModel& model, const Dataset& data_a,
                                    const Dataset& data_b, const StableNoiseSpec& noise,
                                    const ChainConfig& config, const RunOptions& options = {});

/// Terminal iterates of `replicas` independent chains (replicas x dim, row-major).
std::vector<double> run_single(const DriftFn& drift, std::size_t dim,
                               const StableNoiseSpec& noise, const ChainConfig& config);
std::vector<double> run_single(const LossModel& model, const Dataset& data,
                               const StableNoiseSpec& noise, const ChainConfig& config);

/// `count` post-burn-in iterates taken every `thin` steps from config.replicas
/// chains, interleaved round-robin: sample j comes from chain j mod R.
/// Any prefix is therefore a balanced draw across chains. Row-major, dim columns.
std::vector<double> harvest_stationary(const DriftFn& drift, std::size_t dim,
                                       const StableNoiseSpec& noise, const ChainConfig& config,
                                       std::size_t thin, std::size_t count);

}  // namespace levystab
