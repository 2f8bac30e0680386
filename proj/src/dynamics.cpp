#include "levystab/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <string>

#include "levystab/errors.hpp"
#include "parallel.hpp"

namespace levystab {

void ChainConfig::validate(std::size_t theta_dim) const {
  if (!(eta > 0.0 && eta < 1.0)) throw DomainError("chain: eta must lie in (0, 1)");
  if (steps == 0) throw DomainError("chain: steps must be positive");
  if (burn_in >= steps) throw DomainError("chain: burn_in must be smaller than steps");
  if (replicas == 0) throw DomainError("chain: replicas must be positive");
  if (!theta0.empty() && theta0.size() != theta_dim) {
    throw DomainError("chain: theta0 has " + std::to_string(theta0.size()) +
                      " coordinates, model has " + std::to_string(theta_dim));
  }
  for (double v : theta0) {
    if (!std::isfinite(v)) throw DomainError("chain: theta0 must be finite");
  }
}

std::size_t default_burn_in(double m, double eta) {
  if (!(m > 0.0 && eta > 0.0)) throw DomainError("default_burn_in: m and eta must be positive");
  return static_cast<std::size_t>(std::ceil(10.0 / (m * eta)));
}

DriftFn empirical_drift(const LossModel& model, const Dataset& data) {
  if (data.dim() != model.data_dim()) throw DomainError("empirical_drift: data dimension mismatch");
  if (model.kind() == ModelKind::Quadratic1d) {
    double s = 0.0;
    for (double x : data.flat()) s += x * x;
    const double coef = 2.0 * s / static_cast<double>(data.size());
    return [coef](std::span<const double> theta, std::span<double> out) { out[0] = coef * theta[0]; };
  }
  return [&model, &data](std::span<const double> theta, std::span<double> out) {
    grad_F_hat(model, theta, data, out);
  };
}

DriftFn linear_drift(double a) {
  return [a](std::span<const double> theta, std::span<double> out) {
    for (std::size_t i = 0; i < theta.size(); ++i) out[i] = a * theta[i];
  };
}

DriftFn zero_drift() {
  return [](std::span<const double>, std::span<double> out) {
    for (double& v : out) v = 0.0;
  };
}

bool euler_step(const DriftFn& drift, std::span<double> theta, double eta,
                std::span<const double> increment, std::span<double> scratch) {
  drift(theta, scratch);
  bool finite = true;
  for (std::size_t i = 0; i < theta.size(); ++i) {
    theta[i] = theta[i] - eta * scratch[i] + increment[i];
    finite = finite && std::isfinite(theta[i]);
  }
  return finite;
}

std::vector<double> step(const LossModel& model, const Dataset& data,
                         std::span<const double> theta, const ChainConfig& config,
                         const StableNoiseSpec& noise, RngStream& rng) {
  noise.validate();
  if (!(config.eta > 0.0)) throw DomainError("step: eta must be positive");
  const std::size_t d = model.theta_dim();
  if (theta.size() != d) throw DomainError("step: theta dimension mismatch");
  std::vector<double> next(theta.begin(), theta.end());
  std::vector<double> inc(d);
  std::vector<double> scratch(d);
  sample_increment(noise, config.eta, rng, inc);
  if (!euler_step(empirical_drift(model, data), next, config.eta, inc, scratch)) {
    throw DivergenceError(0, 1, "single step");
  }
  return next;
}

namespace {

std::vector<double> start_point(const ChainConfig& config, std::size_t dim) {
  return config.theta0.empty() ? std::vector<double>(dim, 0.0) : config.theta0;
}

double distance(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += (a[i] - b[i]) * (a[i] - b[i]);
  return std::sqrt(s);
}

}  // namespace

CoupledTrajectoryResult run_coupled(const DriftFn& drift_a, const DriftFn& drift_b,
                                    std::size_t dim, const StableNoiseSpec& noise,
                                    const ChainConfig& config, const RunOptions& options) {
  noise.validate();
  config.validate(dim);
  const std::size_t R = config.replicas;
  const std::size_t N = config.steps;
  const std::size_t every = std::max<std::size_t>(1, options.trajectory_every);
  const bool want_traj = options.trajectory != nullptr;

  CoupledTrajectoryResult result;
  result.dim = dim;
  result.theta_samples.assign(R * dim, 0.0);
  result.theta_hat_samples.assign(R * dim, 0.0);
  result.coupled_distances.assign(R, 0.0);
  std::vector<std::vector<double>> series(options.record_time_series ? R : 0);
  std::vector<std::vector<double>> traj(want_traj ? R : 0);

  detail::parallel_for(R, [&](std::size_t r) {
    RngStream rng(config.seed, r);
    std::vector<double> a = start_point(config, dim);
    std::vector<double> b = a;
    std::vector<double> inc(dim);
    std::vector<double> scratch(dim);
    if (options.record_time_series) series[r].reserve(N);
    for (std::size_t k = 1; k <= N; ++k) {
      sample_increment(noise, config.eta, rng, inc);
      const bool ok_a = euler_step(drift_a, a, config.eta, inc, scratch);
      const bool ok_b = euler_step(drift_b, b, config.eta, inc, scratch);
      if (!ok_a || !ok_b) throw DivergenceError(r, k, ok_a ? "chain on perturbed data" : "chain on original data");
      if (options.record_time_series) series[r].push_back(distance(a, b));
      if (want_traj && k % every == 0) {
        traj[r].insert(traj[r].end(), a.begin(), a.end());
        traj[r].insert(traj[r].end(), b.begin(), b.end());
      }
    }
    std::copy(a.begin(), a.end(), result.theta_samples.begin() + static_cast<std::ptrdiff_t>(r * dim));
    std::copy(b.begin(), b.end(), result.theta_hat_samples.begin() + static_cast<std::ptrdiff_t>(r * dim));
    result.coupled_distances[r] = distance(a, b);
  });

  if (options.record_time_series) {
    result.time_series.assign(N, 0.0);
    for (std::size_t k = 0; k < N; ++k) {
      double s = 0.0;
      for (std::size_t r = 0; r < R; ++r) s += series[r][k];
      result.time_series[k] = s / static_cast<double>(R);
    }
  }

  if (want_traj) {
    std::ostream& out = *options.trajectory;
    const auto old = out.precision(12);
    out << "step,replica";
    for (std::size_t i = 0; i < dim; ++i) out << ",theta_" << i;
    for (std::size_t i = 0; i < dim; ++i) out << ",theta_hat_" << i;
    out << '\n';
    const std::size_t rows = N / every;
    for (std::size_t j = 0; j < rows; ++j) {
      for (std::size_t r = 0; r < R; ++r) {
        out << (j + 1) * every << ',' << r;
        for (std::size_t i = 0; i < 2 * dim; ++i) out << ',' << traj[r][j * 2 * dim + i];
        out << '\n';
      }
    }
    out.precision(old);
  }
  return result;
}

CoupledTrajectoryResult run_coupled(const LossModel& model, const Dataset& data_a,
                                    const Dataset& data_b, const StableNoiseSpec& noise,
                                    const ChainConfig& config, const RunOptions& options) {
  if (data_a.size() != data_b.size() || data_a.dim() != data_b.dim()) {
    throw DomainError("run_coupled: datasets are not aligned");
  }
  return run_coupled(empirical_drift(model, data_a), empirical_drift(model, data_b),
                     model.theta_dim(), noise, config, options);
}

std::vector<double> run_single(const DriftFn& drift, std::size_t dim,
                               const StableNoiseSpec& noise, const ChainConfig& config) {
  noise.validate();
  config.validate(dim);
  std::vector<double> out(config.replicas * dim);
  detail::parallel_for(config.replicas, [&](std::size_t r) {
    RngStream rng(config.seed, r);
    std::vector<double> theta = start_point(config, dim);
    std::vector<double> inc(dim);
    std::vector<double> scratch(dim);
    for (std::size_t k = 1; k <= config.steps; ++k) {
      sample_increment(noise, config.eta, rng, inc);
      if (!euler_step(drift, theta, config.eta, inc, scratch)) throw DivergenceError(r, k, "");
    }
    std::copy(theta.begin(), theta.end(), out.begin() + static_cast<std::ptrdiff_t>(r * dim));
  });
  return out;
}

std::vector<double> run_single(const LossModel& model, const Dataset& data,
                               const StableNoiseSpec& noise, const ChainConfig& config) {
  return run_single(empirical_drift(model, data), model.theta_dim(), noise, config);
}

std::vector<double> harvest_stationary(const DriftFn& drift, std::size_t dim,
                                       const StableNoiseSpec& noise, const ChainConfig& config,
                                       std::size_t thin, std::size_t count) {
  noise.validate();
  if (thin == 0 || count == 0) throw DomainError("harvest_stationary: thin and count must be positive");
  if (!(config.eta > 0.0 && config.eta < 1.0)) throw DomainError("chain: eta must lie in (0, 1)");
  if (config.replicas == 0) throw DomainError("chain: replicas must be positive");
  if (!config.theta0.empty() && config.theta0.size() != dim) {
    throw DomainError("chain: theta0 dimension mismatch");
  }
  const std::size_t R = config.replicas;
  std::vector<double> out(count * dim);
  detail::parallel_for(R, [&](std::size_t c) {
    RngStream rng(config.seed, c);
    std::vector<double> theta = start_point(config, dim);
    std::vector<double> inc(dim);
    std::vector<double> scratch(dim);
    std::size_t k = 0;
    auto advance = [&](std::size_t n) {
      for (std::size_t s = 0; s < n; ++s) {
        ++k;
        sample_increment(noise, config.eta, rng, inc);
        if (!euler_step(drift, theta, config.eta, inc, scratch)) throw DivergenceError(c, k, "harvest");
      }
    };
    advance(config.burn_in);
    for (std::size_t j = c; j < count; j += R) {
      advance(thin);
      std::copy(theta.begin(), theta.end(), out.begin() + static_cast<std::ptrdiff_t>(j * dim));
    }
  });
  return out;
}

}  // namespace levystab
