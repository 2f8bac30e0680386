#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "levystab/bounds.hpp"
#include "levystab/config.hpp"
#include "levystab/losses.hpp"
#include "levystab/report.hpp"

namespace levystab {

// ------------------------------------------------------------------ g curves

struct GCurveRow {
  double alpha;
  std::size_t d;
  double g;             // may be +inf for large d
  double g_normalized;  // g / max over the grid for this d
  double log_g;
};

/// Every (d, alpha) pair, d-major. Alphas must keep a 0.005 margin from 1 and 2.
std::vector<GCurveRow> g_curve(const std::vector<double>& alphas, const std::vector<std::size_t>& ds,
                               bool normalize);
/// alpha_min, alpha_min + step, ... up to alpha_max (inclusive within rounding).
std::vector<double> alpha_grid(double alpha_min, double alpha_max, double step);

// ------------------------------------------------------------------ stability sweep

struct ModelSpec {
  std::string kind = "quadratic-1d";
  double x_min = 0.5;
  double x_max = 1.5;
  std::size_t dim = 2;  // dissipative-nonconvex only
  double m0 = 2.0;
  double a = 0.5;
};
LossModel make_model(const ModelSpec& spec);

struct SweepParams {
  ModelSpec model;
  std::vector<std::size_t> n_list{32, 64, 128, 256, 512, 1024};
  std::vector<double> alpha_list{1.5};
  double eta = 0.01;
  std::optional<std::size_t> steps;    // default 2 * burn_in
  std::optional<std::size_t> burn_in;  // default ceil(10 / (m eta))
  std::size_t replicas = 256;
  double perturbation = 0.25;
  std::size_t perturb_index = 0;
  double surrogate_cap = 1.0;
  std::size_t risk_draws = 1000;
  std::vector<double> theta0;
  std::uint64_t seed = 42;
  bounds::ExternalConstants external;
  std::string data_file;  // optional CSV or JSON master dataset
  std::string trajectory_prefix;  // optional per-row trajectory CSV files
  std::size_t trajectory_every = 10;
};

struct SweepRow {
  std::size_t n;
  double alpha;
  double rho;
  double coupled_mean;
  double coupled_se;
  double w1;
  std::string w1_method;  // "assignment" or "sliced"
  double loss_stability;  // |E_x[mean_r l(theta_r, x) - mean_r l(theta_hat_r, x)]|
  double loss_stability_se;
  double gen_gap;  // empirical minus population surrogate risk on the original data
  double gen_gap_se;
  double stationary_bound;
  double discrete_bound;
  double generalization_bound;
};

struct SweepResult {
  std::vector<SweepRow> rows;
  double lipschitz;
  double diameter;
  std::size_t steps;
  std::size_t burn_in;
  std::vector<bounds::ProvenanceEntry> provenance;  // from the first alpha
};

SweepResult stability_sweep(const SweepParams& params);

/// Least-squares slope of log(y) against log(x).
double log_log_slope(const std::vector<double>& x, const std::vector<double>& y);

// ------------------------------------------------------------------ moment divergence

struct MomentCase {
  double alpha;
  double p;
};

struct MomentParams {
  std::vector<MomentCase> cases{{1.5, 0.75}, {1.5, 2.0}, {1.5, 2.5}, {2.0, 3.0}};
  std::vector<std::size_t> n_list{1000, 1000000};
  double ou_rate = 1.0;
  double eta = 0.1;
  std::size_t thin = 10;
  std::size_t burn_in = 10000;
  std::size_t chains = 64;
  std::uint64_t seed = 42;
};

struct MomentRow {
  double alpha;
  double p;
  std::size_t N;
  double moment;
  double ratio;      // moment / moment at the smallest N
  std::string flag;  // set on the largest-N row only
};

/// Harvests OU-stationary samples once per distinct alpha and evaluates the
/// p-th absolute moment on prefixes of length N.
std::vector<MomentRow> moment_divergence(const MomentParams& params);

// ------------------------------------------------------------------ commands

std::vector<std::string> command_names();
std::vector<KeySpec> command_schema(const std::string& command);

/// Runs a named command. Errors surface as levystab::Error subclasses; a
/// completed run that fails its own checks returns a nonzero Report::status.
Report run_command(const std::string& command, const Config& config);

}  // namespace levystab
