#include "levystab/validation.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numeric>

#include "levystab/bounds.hpp"
#include "levystab/dynamics.hpp"
#include "levystab/errors.hpp"
#include "levystab/experiments.hpp"
#include "levystab/report.hpp"
#include "levystab/specfun.hpp"
#include "levystab/stable.hpp"
#include "levystab/wasserstein.hpp"

namespace levystab {

namespace {

struct RefRow {
  int k;
  double gamma;
  double digamma;
};

constexpr RefRow kReference[] = {
#include "reference_table.inc"
};

std::string fmt(double v) { return format_number(v); }

bool wanted(const ValidationOptions& o, int criterion) {
  return o.criteria.empty() || std::find(o.criteria.begin(), o.criteria.end(), criterion) != o.criteria.end();
}

// ---- 1. special functions

void special_functions(const ValidationOptions& o, std::vector<CheckResult>& out) {
  const double skew = o.corrupt_gamma ? 1.0 + 1e-9 : 1.0;
  double worst_gamma = 0.0;
  double worst_psi = 0.0;
  for (const auto& row : kReference) {
    const double x = row.k / 10.0;
    const double g = specfun::gamma(x) * skew;
    worst_gamma = std::max(worst_gamma, std::fabs(g - row.gamma) / std::fabs(row.gamma));
    worst_psi = std::max(worst_psi, std::fabs(specfun::digamma(x) - row.digamma) / std::fabs(row.digamma));
  }
  out.push_back({1, "gamma vs reference table on [0.1, 50]", worst_gamma <= 1e-10,
                 "max rel err " + fmt(worst_gamma), "<= 1e-10"});
  out.push_back({1, "digamma vs reference table on [0.1, 50]", worst_psi <= 1e-10,
                 "max rel err " + fmt(worst_psi), "<= 1e-10"});
  const auto crit = bounds::critical_alpha0();
  out.push_back({1, "digamma root c0", std::fabs(crit.c0 - 1.46163211) <= 1e-6, fmt(crit.c0),
                 "1.46163211 +- 1e-6"});
  out.push_back({1, "alpha0 = 2 (c0 - 1)", std::fabs(crit.alpha0 - 0.92326422) <= 2e-6, fmt(crit.alpha0),
                 "0.92326422 +- 2e-6"});
}

// ---- 2. sampler characteristic functions

constexpr std::size_t kDraws = 100000;
constexpr std::array<double, 3> kUNorms = {0.5, 1.0, 2.0};
constexpr std::array<double, 4> kAlphas = {1.2, 1.5, 1.8, 2.0};

void sampler_fidelity(const ValidationOptions& o, std::vector<CheckResult>& out) {
  const std::array<double, 3> dir = {1.0 / 3.0, 2.0 / 3.0, 2.0 / 3.0};
  for (std::size_t ai = 0; ai < kAlphas.size(); ++ai) {
    const StableNoiseSpec spec{kAlphas[ai], 1.0};
    {
      RngStream rng(o.seed, 0x2000 + ai);
      std::array<double, 3> acc{};
      for (std::size_t i = 0; i < kDraws; ++i) {
        const double x = sample_sas_scalar(spec, rng);
        for (std::size_t j = 0; j < kUNorms.size(); ++j) acc[j] += std::cos(kUNorms[j] * x);
      }
      double worst = 0.0;
      for (std::size_t j = 0; j < kUNorms.size(); ++j) {
        const double target = std::exp(-std::pow(kUNorms[j], spec.alpha));
        worst = std::max(worst, std::fabs(acc[j] / kDraws - target));
      }
      out.push_back({2, "scalar ECF, alpha=" + fmt(spec.alpha), worst <= 0.02, "max dev " + fmt(worst), "<= 0.02"});
    }
    {
      RngStream rng(o.seed, 0x2100 + ai);
      std::array<double, 3> acc{};
      std::vector<double> x(3);
      for (std::size_t i = 0; i < kDraws; ++i) {
        sample_isotropic_vector(spec, rng, x);
        const double proj = dir[0] * x[0] + dir[1] * x[1] + dir[2] * x[2];
        for (std::size_t j = 0; j < kUNorms.size(); ++j) acc[j] += std::cos(kUNorms[j] * proj);
      }
      double worst = 0.0;
      for (std::size_t j = 0; j < kUNorms.size(); ++j) {
        const double target = std::exp(-std::pow(kUNorms[j], spec.alpha));
        worst = std::max(worst, std::fabs(acc[j] / kDraws - target));
      }
      out.push_back({2, "isotropic ECF d=3, alpha=" + fmt(spec.alpha), worst <= 0.02, "max dev " + fmt(worst), "<= 0.02"});
    }
  }
}

// ---- 3. OU stationary scale

void ou_stationary(const ValidationOptions& o, std::vector<CheckResult>& out) {
  const double a = 1.0;
  const double alpha = 1.5;
  ChainConfig chain;
  chain.eta = 0.01;
  chain.burn_in = 10000;
  chain.replicas = 64;
  chain.seed = o.seed;
  const auto samples = harvest_stationary(linear_drift(a), 1, StableNoiseSpec{alpha, 1.0}, chain, 100, 100000);
  // Under exp(-(s|u|)^alpha), log(-log phi(u)) / alpha - log u = log s.
  double log_s = 0.0;
  for (double u : kUNorms) {
    double phi = 0.0;
    for (double x : samples) phi += std::cos(u * x);
    phi /= static_cast<double>(samples.size());
    log_s += std::log(-std::log(phi)) / alpha - std::log(u);
  }
  const double fitted = std::exp(log_s / kUNorms.size());
  const double target = std::pow(a * alpha, -1.0 / alpha);
  const double rel = std::fabs(fitted / target - 1.0);
  out.push_back({3, "OU stationary scale (a=1, alpha=1.5, eta=0.01)", rel <= 0.1,
                 "fitted " + fmt(fitted) + " target " + fmt(target) + " rel err " + fmt(rel), "rel err <= 0.1"});
}

// ---- 4. g curve shape

void g_shape(std::vector<CheckResult>& out) {
  const auto alphas = alpha_grid(1.01, 1.99, 0.01);
  for (std::size_t d : {1, 10, 100, 1000}) {
    const auto rows = g_curve(alphas, {d}, true);
    std::size_t best = 0;
    for (std::size_t i = 1; i < rows.size(); ++i) {
      if (rows[i].log_g < rows[best].log_g) best = i;
    }
    const bool interior = best != 0 && best + 1 != rows.size();
    const double left = std::exp(rows.front().log_g - rows[best].log_g);
    const double right = std::exp(rows.back().log_g - rows[best].log_g);
    const double h = 1e-5;
    const double slope = (std::exp(bounds::log_g(1.02 + h, d)) - std::exp(bounds::log_g(1.02 - h, d))) / (2 * h);
    // For large d, g itself overflows; the sign of d(log g) is the same.
    const double log_slope = (bounds::log_g(1.02 + h, d) - bounds::log_g(1.02 - h, d)) / (2 * h);
    const double sign_slope = std::isfinite(slope) ? slope : log_slope;
    const bool pass = interior && left > 2.0 && right > 2.0 && sign_slope < 0.0;
    out.push_back({4, "g curve d=" + std::to_string(d), pass,
                   "argmin " + fmt(rows[best].alpha) + (interior ? " (interior)" : " (endpoint)") +
                       ", g(1.01)/min " + fmt(left) + ", g(1.99)/min " + fmt(right) +
                       ", dlog g/dalpha(1.02) " + fmt(log_slope),
                   "interior min, both ratios > 2, slope < 0"});
  }
}

// ---- 5. stability scaling

void stability_scaling(const ValidationOptions& o, std::vector<CheckResult>& out) {
  SweepParams p;
  p.seed = o.seed;
  const auto res = stability_sweep(p);
  std::vector<double> ns, ys;
  for (const auto& r : res.rows) {
    ns.push_back(static_cast<double>(r.n));
    ys.push_back(r.coupled_mean);
  }
  const double slope = log_log_slope(ns, ys);
  out.push_back({5, "log-log slope of coupled distance vs n", std::fabs(slope + 1.0) <= 0.3, fmt(slope),
                 "-1 +- 0.3"});
}

// ---- 6. moment divergence

void moment_checks(const ValidationOptions& o, std::vector<CheckResult>& out) {
  MomentParams p;
  p.seed = o.seed;
  const auto rows = moment_divergence(p);
  for (const auto& r : rows) {
    if (r.flag.empty()) continue;
    const bool infinite = r.alpha < 2.0 && r.p >= r.alpha;
    const bool pass = infinite ? r.ratio > 10.0 : (r.ratio >= 0.5 && r.ratio <= 2.0);
    out.push_back({6, "p-moment ratio alpha=" + fmt(r.alpha) + " p=" + fmt(r.p), pass,
                   "ratio " + fmt(r.ratio), infinite ? "> 10" : "in [0.5, 2]"});
  }
}

// ---- 7. bound identities

void bound_identities(std::vector<CheckResult>& out) {
  ConstantBundle b1;
  b1.m = 1.0;
  ConstantBundle b2;
  b2.m = 0.5;
  b2.K = 0.2;
  b2.B = 0.3;
  b2.K2 = 1.0;
  double worst = 0.0;
  for (const auto& [alpha, d] : {std::pair<double, std::size_t>{1.5, 1}, {1.3, 3}, {1.8, 10}, {1.1, 100}}) {
    for (const auto* b : {&b1, &b2}) {
      const double c0 = bounds::compute_C0(alpha, d, *b);
      const auto lp = bounds::lyapunov_params(*b, alpha, d);
      worst = std::max(worst, std::fabs(c0 - (1.0 + lp.q1 / lp.lambda1)) / c0);
    }
  }
  out.push_back({7, "C0 = 1 + q1 / lambda1", worst <= 1e-12, "max rel diff " + fmt(worst), "<= 1e-12"});

  ConstantBundle b3;
  b3.K1 = 2.0;
  b3.K2 = 1.5;
  b3.m = 1.0;
  b3.L = 0.7;
  const auto k = bounds::make_bound_constants(1.5, 2, b3, {}, 1.0, 1.0);
  const auto terms = bounds::theorem_A1_terms(bounds::A1Case::III, {0.0, 1000, 0.0, 0.1}, k);
  const double total = std::accumulate(terms.begin(), terms.end(), 0.0);
  const double stat = bounds::stationary_bound(0.1, k);
  const double rel = std::fabs(total - stat) / stat;
  out.push_back({7, "finite-time case III at eta=0, |w|=0 vs stationary bound", rel <= 1e-12,
                 "rel diff " + fmt(rel), "<= 1e-12"});

  bool exact = true;
  for (double eta : {0.5, 0.01, 1e-6}) exact = exact && bounds::discretization_term(eta, 2.0, 1.7) == 2.0 * 1.7;
  out.push_back({7, "discretization term at alpha=2 equals 2Q", exact,
                 "term " + fmt(bounds::discretization_term(0.01, 2.0, 1.7)) + " for Q=1.7", "exactly 2Q"});
}

// ---- 8. Wasserstein estimators

double brute_force_w1(const EmpiricalMeasure& a, const EmpiricalMeasure& b) {
  std::vector<std::size_t> perm(a.size());
  std::iota(perm.begin(), perm.end(), 0);
  double best = std::numeric_limits<double>::infinity();
  do {
    double s = 0.0;
    for (std::size_t i = 0; i < perm.size(); ++i) {
      double d2 = 0.0;
      for (std::size_t j = 0; j < a.dim(); ++j) {
        const double diff = a.point(i)[j] - b.point(perm[i])[j];
        d2 += diff * diff;
      }
      s += std::sqrt(d2);
    }
    best = std::min(best, s / static_cast<double>(perm.size()));
  } while (std::next_permutation(perm.begin(), perm.end()));
  return best;
}

void wasserstein_checks(const ValidationOptions& o, std::vector<CheckResult>& out) {
  RngStream rng(o.seed, 0x8000);
  const std::array<double, 3> e = {1.0 / 3.0, 2.0 / 3.0, 2.0 / 3.0};
  double worst_embed = 0.0;
  for (int trial = 0; trial < 10; ++trial) {
    std::vector<double> a(50), b(50), ea, eb;
    for (double& v : a) v = rng.normal();
    for (double& v : b) v = 0.5 + 2.0 * rng.normal();
    for (std::size_t i = 0; i < a.size(); ++i) {
      for (double c : e) {
        ea.push_back(c * a[i]);
        eb.push_back(c * b[i]);
      }
    }
    const double exact = w1_exact_1d(EmpiricalMeasure(1, a), EmpiricalMeasure(1, b));
    const double assign = w1_assignment(EmpiricalMeasure(3, ea), EmpiricalMeasure(3, eb));
    worst_embed = std::max(worst_embed, std::fabs(exact - assign));
  }
  out.push_back({8, "assignment vs sorted 1-d on embedded lines", worst_embed <= 1e-12,
                 "max abs diff " + fmt(worst_embed), "<= 1e-12"});

  double worst_brute = 0.0;
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<double> a(18), b(18);
    for (double& v : a) v = rng.normal();
    for (double& v : b) v = rng.normal();
    const EmpiricalMeasure A(3, a), B(3, b);
    worst_brute = std::max(worst_brute, std::fabs(w1_assignment(A, B) - brute_force_w1(A, B)));
  }
  out.push_back({8, "assignment vs exhaustive permutations (6 points, d=3)", worst_brute <= 1e-12,
                 "max abs diff " + fmt(worst_brute), "<= 1e-12"});

  const std::array<double, 3> v = {0.3, -0.4, 1.2};
  const double vnorm = std::sqrt(v[0] * v[0] + v[1] * v[1] + v[2] * v[2]);
  std::vector<double> a(64 * 3), b(64 * 3);
  for (std::size_t i = 0; i < a.size(); ++i) {
    a[i] = rng.normal();
    b[i] = a[i] + v[i % 3];
  }
  const double shifted = w1_assignment(EmpiricalMeasure(3, a), EmpiricalMeasure(3, b));
  const double dev = std::fabs(shifted - vnorm);
  out.push_back({8, "translation W1(a, a + v) = |v|", dev <= 1e-9, "abs diff " + fmt(dev), "<= 1e-9"});
}

}  // namespace

std::vector<CheckResult> run_validation(const ValidationOptions& options) {
  std::vector<CheckResult> out;
  if (wanted(options, 1)) special_functions(options, out);
  if (wanted(options, 2)) sampler_fidelity(options, out);
  if (wanted(options, 3)) ou_stationary(options, out);
  if (wanted(options, 4)) g_shape(out);
  if (wanted(options, 5)) stability_scaling(options, out);
  if (wanted(options, 6)) moment_checks(options, out);
  if (wanted(options, 7)) bound_identities(out);
  if (wanted(options, 8)) wasserstein_checks(options, out);
  return out;
}

}  // namespace levystab
