#include "levystab/losses.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <numeric>
#include <ostream>
#include <sstream>

#include <json.hpp>

#include "levystab/errors.hpp"

namespace levystab {

namespace {

double norm2(std::span<const double> v) {
  double s = 0.0;
  for (double x : v) s += x * x;
  return std::sqrt(s);
}

double distance(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double d = a[i] - b[i];
    s += d * d;
  }
  return std::sqrt(s);
}

void require_dim(std::size_t got, std::size_t want, const char* what) {
  if (got != want) {
    throw DomainError(std::string(what) + ": dimension mismatch (got " + std::to_string(got) +
                      ", expected " + std::to_string(want) + ")");
  }
}

// Relative slack for the diameter check so that a displacement of exactly D
// survives rounding.
constexpr double kDiameterSlack = 1e-12;

}  // namespace

void ConstantBundle::validate() const {
  const double all[] = {K1, K2, B, m, K, L, M};
  for (double v : all) {
    if (!std::isfinite(v) || v < 0.0) throw DomainError("constant bundle: entries must be finite and nonnegative");
  }
  if (!(m > 0.0)) throw DomainError("constant bundle: m must be positive");
}

double DataDomain::diameter() const {
  double s = 0.0;
  for (std::size_t i = 0; i < lo.size(); ++i) s += (hi[i] - lo[i]) * (hi[i] - lo[i]);
  return std::sqrt(s);
}

bool DataDomain::contains(std::span<const double> x) const {
  if (x.size() != lo.size()) return false;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (!(x[i] >= lo[i] && x[i] <= hi[i])) return false;
  }
  return true;
}

// ---------------------------------------------------------------- Dataset

Dataset::Dataset(std::vector<std::vector<double>> points, double domain_diameter)
    : dim_(points.empty() ? 0 : points.front().size()), diameter_(domain_diameter) {
  flat_.reserve(points.size() * dim_);
  for (const auto& p : points) {
    require_dim(p.size(), dim_, "dataset");
    flat_.insert(flat_.end(), p.begin(), p.end());
  }
  check_invariants();
}

Dataset::Dataset(std::size_t dim, std::vector<double> flat, double domain_diameter)
    : dim_(dim), flat_(std::move(flat)), diameter_(domain_diameter) {
  if (dim_ == 0 || flat_.size() % dim_ != 0) {
    throw DomainError("dataset: flat storage is not a whole number of points");
  }
  check_invariants();
}

Dataset Dataset::prefix(std::size_t count) const {
  if (count == 0 || count > size()) throw DomainError("dataset prefix: count out of range");
  return Dataset(dim_, std::vector<double>(flat_.begin(), flat_.begin() + count * dim_),
                 diameter_);
}

double max_pairwise_distance(const Dataset& data) {
  const std::size_t n = data.size();
  if (data.dim() == 1) {
    const auto [lo, hi] = std::minmax_element(data.flat().begin(), data.flat().end());
    return *hi - *lo;
  }
  double best = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) best = std::max(best, distance(data.point(i), data.point(j)));
  }
  return best;
}

void Dataset::check_invariants() const {
  if (dim_ == 0 || flat_.empty()) throw DomainError("dataset: need at least one point");
  if (!(diameter_ >= 0.0) || !std::isfinite(diameter_)) {
    throw DomainError("dataset: domain diameter must be finite and nonnegative");
  }
  for (double v : flat_) {
    if (!std::isfinite(v)) throw DomainError("dataset: non-finite coordinate");
  }
  const double spread = max_pairwise_distance(*this);
  if (spread > diameter_ * (1.0 + kDiameterSlack) + kDiameterSlack) {
    std::ostringstream msg;
    msg << "dataset: pairwise distance " << spread << " exceeds domain diameter " << diameter_;
    throw DomainError(msg.str());
  }
}

// ---------------------------------------------------------------- LossModel

LossModel::LossModel(ModelKind kind, std::vector<double> params, std::size_t theta_dim,
                     DataDomain domain, ConstantBundle constants)
    : kind_(kind),
      params_(std::move(params)),
      theta_dim_(theta_dim),
      domain_(std::move(domain)),
      constants_(constants) {
  constants_.validate();
}

LossModel LossModel::quadratic_1d(double x_min, double x_max) {
  if (!(x_min > 0.0 && x_max >= x_min && std::isfinite(x_max))) {
    throw DomainError("quadratic-1d: need 0 < x_min <= x_max");
  }
  ConstantBundle c;
  c.K1 = 2.0 * x_max * x_max;
  c.K2 = 4.0 * x_max;
  c.B = 0.0;
  c.m = 2.0 * x_min * x_min;
  c.K = 0.0;
  c.L = 2.0 * x_max * x_max;
  c.M = 0.0;
  return LossModel(ModelKind::Quadratic1d, {x_min, x_max}, 1, DataDomain{{x_min}, {x_max}}, c);
}

LossModel LossModel::dissipative_nonconvex(std::size_t d, double m0, double a, double x_max) {
  if (d == 0) throw DomainError("dissipative-nonconvex: d must be positive");
  if (!(a > 0.0 && x_max > 0.0 && m0 > a * x_max)) {
    throw DomainError("dissipative-nonconvex: need a > 0, x_max > 0 and a * x_max < m0");
  }
  const double ax = a * x_max;
  ConstantBundle c;
  c.K1 = m0 + ax;
  c.K2 = a;
  c.B = ax * std::sqrt(static_cast<double>(d));
  c.m = m0 - ax;
  c.K = 0.0;
  c.L = m0 + ax;
  c.M = ax;
  return LossModel(ModelKind::DissipativeNonconvex, {m0, a, x_max}, d,
                   DataDomain{std::vector<double>(d, -x_max), std::vector<double>(d, x_max)}, c);
}

std::string LossModel::name() const {
  return kind_ == ModelKind::Quadratic1d ? "quadratic-1d" : "dissipative-nonconvex";
}

double LossModel::value(std::span<const double> theta, std::span<const double> x) const {
  require_dim(theta.size(), theta_dim_, "loss value (theta)");
  require_dim(x.size(), data_dim(), "loss value (x)");
  if (kind_ == ModelKind::Quadratic1d) {
    const double p = theta[0] * x[0];
    return p * p;
  }
  const double m0 = params_[0];
  const double a = params_[1];
  double quad = 0.0;
  double inner = 0.0;
  for (std::size_t i = 0; i < theta_dim_; ++i) {
    quad += theta[i] * theta[i];
    inner += x[i] * std::sin(theta[i]);
  }
  return 0.5 * m0 * quad + a * inner;
}

void LossModel::grad(std::span<const double> theta, std::span<const double> x,
                     std::span<double> out) const {
  require_dim(theta.size(), theta_dim_, "gradient (theta)");
  require_dim(x.size(), data_dim(), "gradient (x)");
  require_dim(out.size(), theta_dim_, "gradient (out)");
  if (kind_ == ModelKind::Quadratic1d) {
    out[0] = 2.0 * x[0] * x[0] * theta[0];
    return;
  }
  const double m0 = params_[0];
  const double a = params_[1];
  for (std::size_t i = 0; i < theta_dim_; ++i) {
    out[i] = m0 * theta[i] + a * x[i] * std::cos(theta[i]);
  }
}

std::vector<double> grad_f(const LossModel& model, std::span<const double> theta,
                           std::span<const double> x) {
  std::vector<double> out(model.theta_dim());
  model.grad(theta, x, out);
  return out;
}

void grad_F_hat(const LossModel& model, std::span<const double> theta, const Dataset& data,
                std::span<double> out) {
  require_dim(data.dim(), model.data_dim(), "empirical gradient (data)");
  require_dim(out.size(), model.theta_dim(), "empirical gradient (out)");
  const std::size_t n = data.size();
  if (n == 0) throw DomainError("empirical gradient: empty dataset");
  // The quadratic model's gradient is linear in x^2; use the cached form.
  if (model.kind() == ModelKind::Quadratic1d) {
    double s = 0.0;
    for (double x : data.flat()) s += x * x;
    out[0] = 2.0 * (s / static_cast<double>(n)) * theta[0];
    return;
  }
  std::fill(out.begin(), out.end(), 0.0);
  std::vector<double> g(model.theta_dim());
  for (std::size_t i = 0; i < n; ++i) {
    model.grad(theta, data.point(i), g);
    for (std::size_t j = 0; j < g.size(); ++j) out[j] += g[j];
  }
  const double inv = 1.0 / static_cast<double>(n);
  for (double& v : out) v *= inv;
}

std::vector<double> grad_F_hat(const LossModel& model, std::span<const double> theta,
                               const Dataset& data) {
  std::vector<double> out(model.theta_dim());
  grad_F_hat(model, theta, data, out);
  return out;
}

double rho(const Dataset& a, const Dataset& b) {
  if (a.size() != b.size()) throw DomainError("rho: datasets differ in size");
  require_dim(b.dim(), a.dim(), "rho");
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += distance(a.point(i), b.point(i));
  return s / static_cast<double>(a.size());
}

Dataset perturb_one(const Dataset& data, std::size_t index, std::span<const double> displacement) {
  if (index >= data.size()) throw DomainError("perturb_one: index out of range");
  require_dim(displacement.size(), data.dim(), "perturb_one");
  std::vector<double> flat = data.flat();
  for (std::size_t j = 0; j < data.dim(); ++j) flat[index * data.dim() + j] += displacement[j];
  return Dataset(data.dim(), std::move(flat), data.domain_diameter());
}

Dataset perturb_one_random(const Dataset& data, const DataDomain& domain, double norm,
                           RngStream& rng) {
  require_dim(domain.dim(), data.dim(), "perturb_one_random");
  if (!(norm >= 0.0)) throw DomainError("perturb_one_random: norm must be nonnegative");
  constexpr int kMaxTries = 10000;
  std::vector<double> dir(data.dim());
  std::vector<double> moved(data.dim());
  for (int attempt = 0; attempt < kMaxTries; ++attempt) {
    const auto index = static_cast<std::size_t>(rng.next_u64() % data.size());
    double len = 0.0;
    do {
      for (double& v : dir) v = rng.normal();
      len = norm2(dir);
    } while (len == 0.0);
    for (std::size_t j = 0; j < dir.size(); ++j) {
      dir[j] *= norm / len;
      moved[j] = data.point(index)[j] + dir[j];
    }
    if (domain.contains(moved)) return perturb_one(data, index, dir);
  }
  throw DomainError("perturb_one_random: no in-domain perturbation found");
}

std::vector<double> sample_domain_point(const DataDomain& domain, RngStream& rng) {
  std::vector<double> x(domain.dim());
  for (std::size_t j = 0; j < x.size(); ++j) x[j] = rng.uniform(domain.lo[j], domain.hi[j]);
  return x;
}

Dataset sample_dataset(const LossModel& model, std::size_t n, RngStream& rng) {
  if (n == 0) throw DomainError("sample_dataset: n must be positive");
  std::vector<double> flat;
  flat.reserve(n * model.data_dim());
  for (std::size_t i = 0; i < n; ++i) {
    const auto x = sample_domain_point(model.domain(), rng);
    flat.insert(flat.end(), x.begin(), x.end());
  }
  return Dataset(model.data_dim(), std::move(flat), model.domain().diameter());
}

// ---------------------------------------------------------------- surrogate

double surrogate_loss(const LossModel& model, std::span<const double> theta,
                      std::span<const double> x, double cap) {
  if (!(cap > 0.0)) throw DomainError("surrogate loss: cap must be positive");
  return cap * std::tanh(model.value(theta, x) / cap);
}

void surrogate_grad(const LossModel& model, std::span<const double> theta,
                    std::span<const double> x, double cap, std::span<double> out) {
  if (!(cap > 0.0)) throw DomainError("surrogate loss: cap must be positive");
  const double t = std::tanh(model.value(theta, x) / cap);
  model.grad(theta, x, out);
  const double sech2 = 1.0 - t * t;
  for (double& v : out) v *= sech2;
}

double envelope_radius(const ConstantBundle& constants) {
  return 10.0 * (1.0 + constants.B / constants.m);
}

namespace {

struct Probe {
  std::vector<double> theta;
  std::vector<double> x;
  double value;
};

double surrogate_grad_norm(const LossModel& model, std::span<const double> theta,
                           std::span<const double> x, double cap, std::vector<double>& scratch) {
  surrogate_grad(model, theta, x, cap, scratch);
  return norm2(scratch);
}

void project_ball(std::vector<double>& theta, double radius) {
  const double n = norm2(theta);
  if (n > radius) {
    for (double& v : theta) v *= radius / n;
  }
}

void project_box(std::vector<double>& x, const DataDomain& domain) {
  for (std::size_t j = 0; j < x.size(); ++j) x[j] = std::clamp(x[j], domain.lo[j], domain.hi[j]);
}

}  // namespace

double surrogate_lipschitz(const LossModel& model, double cap, double radius, std::uint64_t seed) {
  if (!(cap > 0.0) || !(radius > 0.0)) {
    throw DomainError("surrogate_lipschitz: cap and radius must be positive");
  }
  const std::size_t dt = model.theta_dim();
  const std::size_t dx = model.data_dim();
  const DataDomain& dom = model.domain();
  std::vector<double> scratch(dt);
  std::vector<Probe> probes;

  auto add_probe = [&](std::vector<double> theta, std::vector<double> x) {
    const double v = surrogate_grad_norm(model, theta, x, cap, scratch);
    probes.push_back({std::move(theta), std::move(x), v});
  };

  if (dt == 1 && dx == 1) {
    constexpr int kThetaGrid = 4001;
    constexpr int kXGrid = 101;
    for (int i = 0; i < kThetaGrid; ++i) {
      const double t = -radius + 2.0 * radius * i / (kThetaGrid - 1);
      for (int j = 0; j < kXGrid; ++j) {
        const double x = dom.lo[0] + (dom.hi[0] - dom.lo[0]) * j / (kXGrid - 1);
        add_probe({t}, {x});
      }
    }
  } else {
    RngStream rng(seed, 0x4c49505343ULL);
    constexpr int kRandomProbes = 20000;
    for (int i = 0; i < kRandomProbes; ++i) {
      std::vector<double> theta(dt);
      double len = 0.0;
      do {
        for (double& v : theta) v = rng.normal();
        len = norm2(theta);
      } while (len == 0.0);
      const double r = radius * std::pow(rng.uniform_open(), 1.0 / static_cast<double>(dt));
      for (double& v : theta) v *= r / len;
      std::vector<double> x(dx);
      for (std::size_t j = 0; j < dx; ++j) {
        // Favour the box corners, where |grad f| tends to peak.
        const double u = rng.uniform(0.0, 1.0);
        x[j] = u < 0.25 ? dom.lo[j] : (u < 0.5 ? dom.hi[j] : rng.uniform(dom.lo[j], dom.hi[j]));
      }
      add_probe(std::move(theta), std::move(x));
    }
  }

  // Coordinate pattern search from the best probes.
  constexpr std::size_t kRefine = 16;
  const std::size_t keep = std::min(kRefine, probes.size());
  std::partial_sort(probes.begin(), probes.begin() + static_cast<std::ptrdiff_t>(keep), probes.end(),
                    [](const Probe& a, const Probe& b) { return a.value > b.value; });
  double best = probes.front().value;
  const double x_span = dom.diameter();
  for (std::size_t p = 0; p < keep; ++p) {
    Probe cur = probes[p];
    double step_t = 0.05 * radius;
    double step_x = 0.05 * x_span;
    for (int iter = 0; iter < 400 && (step_t > 1e-10 * radius); ++iter) {
      bool improved = false;
      for (std::size_t k = 0; k < dt + dx; ++k) {
        for (double sign : {1.0, -1.0}) {
          Probe cand = cur;
          if (k < dt) {
            cand.theta[k] += sign * step_t;
            project_ball(cand.theta, radius);
          } else {
            cand.x[k - dt] += sign * step_x;
            project_box(cand.x, dom);
          }
          cand.value = surrogate_grad_norm(model, cand.theta, cand.x, cap, scratch);
          if (cand.value > cur.value) {
            cur = std::move(cand);
            improved = true;
          }
        }
      }
      if (!improved) {
        step_t *= 0.5;
        step_x *= 0.5;
      }
    }
    best = std::max(best, cur.value);
  }
  // Margin for whatever the search missed between probes.
  return best * 1.02;
}

double empirical_risk(const LossModel& model, std::span<const double> thetas,
                      const Dataset& data, double cap) {
  const std::size_t dt = model.theta_dim();
  if (thetas.empty() || thetas.size() % dt != 0) {
    throw DomainError("empirical_risk: need a nonempty whole number of parameter vectors");
  }
  require_dim(data.dim(), model.data_dim(), "empirical_risk");
  const std::size_t r = thetas.size() / dt;
  double sum = 0.0;
  for (std::size_t k = 0; k < r; ++k) {
    const auto theta = thetas.subspan(k * dt, dt);
    double row = 0.0;
    for (std::size_t i = 0; i < data.size(); ++i) row += surrogate_loss(model, theta, data.point(i), cap);
    sum += row / static_cast<double>(data.size());
  }
  return sum / static_cast<double>(r);
}

RiskEstimate population_risk_estimate(const LossModel& model, std::span<const double> thetas,
                                      double cap, std::size_t draws, RngStream& rng) {
  const std::size_t dt = model.theta_dim();
  if (thetas.empty() || thetas.size() % dt != 0 || draws == 0) {
    throw DomainError("population_risk_estimate: empty inputs");
  }
  const std::size_t r = thetas.size() / dt;
  double mean = 0.0;
  double m2 = 0.0;
  for (std::size_t j = 0; j < draws; ++j) {
    const auto x = sample_domain_point(model.domain(), rng);
    double v = 0.0;
    for (std::size_t k = 0; k < r; ++k) v += surrogate_loss(model, thetas.subspan(k * dt, dt), x, cap);
    v /= static_cast<double>(r);
    // Welford update.
    const double delta = v - mean;
    mean += delta / static_cast<double>(j + 1);
    m2 += delta * (v - mean);
  }
  const double var = draws > 1 ? m2 / static_cast<double>(draws - 1) : 0.0;
  return {mean, std::sqrt(var / static_cast<double>(draws))};
}

// ---------------------------------------------------------------- file I/O

Dataset load_dataset_csv(std::istream& in, double domain_diameter) {
  std::vector<std::vector<double>> points;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line[0] == '#') continue;
    std::vector<double> row;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) {
      try {
        std::size_t used = 0;
        row.push_back(std::stod(cell, &used));
      } catch (const std::exception&) {
        throw ConfigError("dataset csv: bad number on line " + std::to_string(line_no));
      }
    }
    points.push_back(std::move(row));
  }
  if (points.empty()) throw ConfigError("dataset csv: no points");
  return Dataset(std::move(points), domain_diameter);
}

void save_dataset_csv(std::ostream& out, const Dataset& data) {
  const auto old = out.precision(17);
  for (std::size_t i = 0; i < data.size(); ++i) {
    const auto p = data.point(i);
    for (std::size_t j = 0; j < p.size(); ++j) out << (j ? "," : "") << p[j];
    out << '\n';
  }
  out.precision(old);
}

Dataset load_dataset_json(std::istream& in) {
  try {
    const auto doc = nlohmann::json::parse(in);
    auto points = doc.at("points").get<std::vector<std::vector<double>>>();
    return Dataset(std::move(points), doc.at("domain_diameter").get<double>());
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("dataset json: ") + e.what());
  }
}

void save_dataset_json(std::ostream& out, const Dataset& data) {
  nlohmann::json doc;
  doc["domain_diameter"] = data.domain_diameter();
  auto& pts = doc["points"] = nlohmann::json::array();
  for (std::size_t i = 0; i < data.size(); ++i) {
    const auto p = data.point(i);
    pts.push_back(std::vector<double>(p.begin(), p.end()));
  }
  out << doc.dump(2) << '\n';
}

}  // namespace levystab
