#include "levystab/stable.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numbers>
#include <string>

#include "levystab/errors.hpp"

namespace levystab {

void StableNoiseSpec::validate() const {
  if (!(alpha > 1.0 && alpha <= 2.0)) {
    throw DomainError("stable noise: alpha must lie in (1, 2], got " + diag(alpha));
  }
  if (!(scale > 0.0) || !std::isfinite(scale)) {
    throw DomainError("stable noise: scale must be positive, got " + diag(scale));
  }
}

namespace {

std::seed_seq make_seed_seq(std::uint64_t seed, std::uint64_t stream) {
  return std::seed_seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                       static_cast<std::uint32_t>(stream),
                       static_cast<std::uint32_t>(stream >> 32), 0x6c657679u};
}

}  // namespace

RngStream::RngStream(std::uint64_t seed, std::uint64_t stream) : seed_(seed), stream_(stream) {
  auto seq = make_seed_seq(seed, stream);
  engine_.seed(seq);
}

double RngStream::uniform_open() {
  double u = 0.0;
  do {
    u = unit_(engine_);
  } while (u <= 0.0);
  return u;
}

double RngStream::uniform(double lo, double hi) { return lo + (hi - lo) * unit_(engine_); }

double RngStream::normal() { return normal_(engine_); }

double RngStream::exponential() {
  double w = 0.0;
  do {
    w = exponential_(engine_);
  } while (w <= 0.0);
  return w;
}

double sample_sas_scalar(const StableNoiseSpec& spec, RngStream& rng) {
  const double a = spec.alpha;
  const double v = std::numbers::pi * (rng.uniform_open() - 0.5);
  const double w = rng.exponential();
  double x = 0.0;
  if (a == 2.0) {
    x = 2.0 * std::sin(v) * std::sqrt(w);
  } else {
    const double cos_v = std::cos(v);
    x = std::sin(a * v) / std::pow(cos_v, 1.0 / a) *
        std::pow(std::cos(v - a * v) / w, (1.0 - a) / a);
  }
  return spec.scale * x;
}

double sample_positive_stable(double index, RngStream& rng) {
  if (!(index > 0.0 && index <= 1.0)) {
    throw DomainError("positive stable: index must lie in (0, 1]");
  }
  if (index == 1.0) return 1.0;
  const double u = std::numbers::pi * rng.uniform_open();
  const double w = rng.exponential();
  const double a = index;
  return std::sin(a * u) / std::pow(std::sin(u), 1.0 / a) *
         std::pow(std::sin((1.0 - a) * u) / w, (1.0 - a) / a);
}

void sample_isotropic_vector(const StableNoiseSpec& spec, RngStream& rng, std::span<double> out) {
  const double mix = std::sqrt(sample_positive_stable(0.5 * spec.alpha, rng));
  const double gauss_scale = std::numbers::sqrt2 * spec.scale * mix;
  for (double& x : out) x = gauss_scale * rng.normal();
}

std::vector<double> sample_isotropic_vector(const StableNoiseSpec& spec, std::size_t d,
                                            RngStream& rng) {
  std::vector<double> out(d);
  sample_isotropic_vector(spec, rng, out);
  return out;
}

void sample_increment(const StableNoiseSpec& spec, double dt, RngStream& rng,
                      std::span<double> out) {
  if (!(dt > 0.0)) throw DomainError("sample_increment: dt must be positive");
  const StableNoiseSpec scaled{spec.alpha, spec.scale * std::pow(dt, 1.0 / spec.alpha)};
  sample_isotropic_vector(scaled, rng, out);
}

std::vector<double> sample_increment(const StableNoiseSpec& spec, std::size_t d, double dt,
                                     RngStream& rng) {
  std::vector<double> out(d);
  sample_increment(spec, dt, rng, out);
  return out;
}

double tail_index_estimate(std::span<const double> samples, std::size_t k) {
  if (samples.empty()) throw DomainError("tail_index_estimate: no samples");
  if (k == 0 || k >= samples.size()) {
    throw DomainError("tail_index_estimate: need 0 < k < sample count");
  }
  std::vector<double> mags(samples.size());
  std::transform(samples.begin(), samples.end(), mags.begin(),
                 [](double x) { return std::fabs(x); });
  // Only the k+1 largest magnitudes matter.
  std::nth_element(mags.begin(), mags.begin() + static_cast<std::ptrdiff_t>(k), mags.end(),
                   std::greater<>());
  const double threshold = mags[k];
  if (!(threshold > 0.0)) {
    throw DomainError("tail_index_estimate: (k+1)-th largest magnitude is zero");
  }
  const double log_threshold = std::log(threshold);
  double sum = 0.0;
  for (std::size_t i = 0; i < k; ++i) sum += std::log(mags[i]) - log_threshold;
  if (sum <= 0.0) return std::numeric_limits<double>::infinity();
  return static_cast<double>(k) / sum;
}

}  // namespace levystab
