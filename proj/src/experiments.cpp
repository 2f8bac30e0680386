#include "levystab/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <map>
#include <set>

#include "levystab/dynamics.hpp"
#include "levystab/errors.hpp"
#include "levystab/stable.hpp"
#include "levystab/validation.hpp"
#include "levystab/wasserstein.hpp"
#include "summation.hpp"

namespace levystab {

namespace {

// Stream ids for the auxiliary random streams; chain replicas use 0..R-1.
constexpr std::uint64_t kDatasetStream = 0x6461746100000000ULL;
constexpr std::uint64_t kLossStream = 0x6c6f737300000000ULL;
constexpr std::uint64_t kRiskStream = 0x7269736b00000000ULL;

constexpr double kAlphaMargin = 0.005;

double mean_of(const std::vector<double>& v) {
  detail::CompensatedSum s;
  for (double x : v) s.add(x);
  return s.value() / static_cast<double>(v.size());
}

double standard_error(const std::vector<double>& v, double mean) {
  if (v.size() < 2) return 0.0;
  detail::CompensatedSum s;
  for (double x : v) s.add((x - mean) * (x - mean));
  return std::sqrt(s.value() / static_cast<double>(v.size() - 1) / static_cast<double>(v.size()));
}

}  // namespace

// ------------------------------------------------------------------ g curves

std::vector<double> alpha_grid(double alpha_min, double alpha_max, double step) {
  if (!(step > 0.0) || !(alpha_max >= alpha_min)) {
    throw ConfigError("alpha grid: need step > 0 and alpha_max >= alpha_min");
  }
  const auto count = static_cast<std::size_t>(std::floor((alpha_max - alpha_min) / step + 1e-9)) + 1;
  std::vector<double> out(count);
  for (std::size_t i = 0; i < count; ++i) {
    // Snap to 12 decimals so 1.01 + 3 * 0.01 prints as 1.04.
    out[i] = std::round((alpha_min + static_cast<double>(i) * step) * 1e12) / 1e12;
  }
  return out;
}

std::vector<GCurveRow> g_curve(const std::vector<double>& alphas, const std::vector<std::size_t>& ds,
                               bool normalize) {
  if (alphas.empty()) throw ConfigError("gcurve: alpha grid is empty");
  if (ds.empty()) throw ConfigError("gcurve: d list is empty");
  for (double a : alphas) {
    if (!(a - 1.0 >= kAlphaMargin - 1e-12 && 2.0 - a >= kAlphaMargin - 1e-12)) {
      throw DomainError("gcurve: alpha = " + format_number(a) +
                        " is closer than 0.005 to the poles at 1 and 2");
    }
  }
  std::vector<GCurveRow> rows;
  rows.reserve(alphas.size() * ds.size());
  for (std::size_t d : ds) {
    if (d == 0) throw ConfigError("gcurve: d must be positive");
    std::vector<double> logs(alphas.size());
    for (std::size_t i = 0; i < alphas.size(); ++i) logs[i] = bounds::log_g(alphas[i], d);
    const double top = *std::max_element(logs.begin(), logs.end());
    for (std::size_t i = 0; i < alphas.size(); ++i) {
      const double gval = std::exp(logs[i]);
      rows.push_back({alphas[i], d, gval, normalize ? std::exp(logs[i] - top) : gval, logs[i]});
    }
  }
  return rows;
}

// ------------------------------------------------------------------ stability sweep

LossModel make_model(const ModelSpec& spec) {
  if (spec.kind == "quadratic-1d") return LossModel::quadratic_1d(spec.x_min, spec.x_max);
  if (spec.kind == "dissipative-nonconvex") {
    return LossModel::dissipative_nonconvex(spec.dim, spec.m0, spec.a, spec.x_max);
  }
  throw ConfigError("unknown model '" + spec.kind + "' (expected quadratic-1d or dissipative-nonconvex)");
}

double log_log_slope(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2) throw DomainError("log_log_slope: need two or more points");
  double sx = 0.0, sy = 0.0;
  const double n = static_cast<double>(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (!(x[i] > 0.0 && y[i] > 0.0)) throw DomainError("log_log_slope: values must be positive");
    sx += std::log(x[i]);
    sy += std::log(y[i]);
  }
  const double mx = sx / n;
  const double my = sy / n;
  double sxy = 0.0, sxx = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double dx = std::log(x[i]) - mx;
    sxy += dx * (std::log(y[i]) - my);
    sxx += dx * dx;
  }
  if (sxx == 0.0) throw DomainError("log_log_slope: x values are all equal");
  return sxy / sxx;
}

namespace {

Dataset load_master(const SweepParams& p, const LossModel& model, std::size_t nmax) {
  if (p.data_file.empty()) {
    RngStream rng(p.seed, kDatasetStream);
    return sample_dataset(model, nmax, rng);
  }
  std::ifstream in(p.data_file);
  if (!in) throw ConfigError("cannot open data file '" + p.data_file + "'");
  const bool json = p.data_file.size() >= 5 && p.data_file.substr(p.data_file.size() - 5) == ".json";
  Dataset data = json ? load_dataset_json(in) : load_dataset_csv(in, model.domain().diameter());
  if (data.dim() != model.data_dim()) throw ConfigError("data file: point dimension does not match the model");
  for (std::size_t i = 0; i < data.size(); ++i) {
    if (!model.domain().contains(data.point(i))) {
      throw DomainError("data file: point " + std::to_string(i) + " lies outside the model domain");
    }
  }
  if (data.size() < nmax) {
    throw ConfigError("data file has " + std::to_string(data.size()) + " points, sweep needs " +
                      std::to_string(nmax));
  }
  return data;
}

// Moves point `index` by +delta along the first axis, or by -delta when that
// leaves the domain.
Dataset perturb_along_axis(const Dataset& data, const DataDomain& domain, std::size_t index,
                           double delta) {
  if (index >= data.size()) throw ConfigError("perturb_index is out of range for the smallest n");
  std::vector<double> disp(data.dim(), 0.0);
  for (double sign : {1.0, -1.0}) {
    disp[0] = sign * delta;
    std::vector<double> moved(data.point(index).begin(), data.point(index).end());
    moved[0] += disp[0];
    if (domain.contains(moved)) return perturb_one(data, index, disp);
  }
  throw DomainError("perturbation of size " + format_number(delta) + " leaves the data domain");
}

}  // namespace

SweepResult stability_sweep(const SweepParams& p) {
  if (p.n_list.empty() || p.alpha_list.empty()) throw ConfigError("stability-sweep: n and alpha lists must be nonempty");
  for (std::size_t n : p.n_list) {
    if (n == 0) throw ConfigError("stability-sweep: n must be positive");
  }
  if (!(p.perturbation >= 0.0)) throw ConfigError("stability-sweep: perturbation must be nonnegative");
  if (p.risk_draws == 0) throw ConfigError("stability-sweep: risk_draws must be positive");
  const LossModel model = make_model(p.model);
  const ConstantBundle& bundle = model.constants();
  const std::size_t nmax = *std::max_element(p.n_list.begin(), p.n_list.end());
  const Dataset master = load_master(p, model, nmax);

  SweepResult out;
  out.burn_in = p.burn_in.value_or(default_burn_in(bundle.m, p.eta));
  out.steps = p.steps.value_or(2 * out.burn_in);
  out.diameter = model.domain().diameter();
  out.lipschitz = surrogate_lipschitz(model, p.surrogate_cap, envelope_radius(bundle), p.seed);

  const ChainConfig chain{p.eta, out.steps, out.burn_in, p.replicas, p.seed, p.theta0};
  chain.validate(model.theta_dim());
  const std::size_t dim = model.theta_dim();

  std::uint64_t row_id = 0;
  for (double alpha : p.alpha_list) {
    const auto k = bounds::make_bound_constants(alpha, dim, bundle, p.external, out.lipschitz, out.diameter);
    if (out.provenance.empty()) out.provenance = k.provenance;
    const StableNoiseSpec noise{alpha, 1.0};
    for (std::size_t n : p.n_list) {
      const Dataset X = master.prefix(n);
      const Dataset Xh = perturb_along_axis(X, model.domain(), p.perturb_index, p.perturbation);

      RunOptions opts;
      std::ofstream traj;
      if (!p.trajectory_prefix.empty()) {
        const std::string path =
            p.trajectory_prefix + "_n" + std::to_string(n) + "_alpha" + format_number(alpha) + ".csv";
        traj.open(path);
        if (!traj) throw ConfigError("cannot write trajectory file '" + path + "'");
        opts.trajectory = &traj;
        opts.trajectory_every = p.trajectory_every;
      }
      const auto res = run_coupled(model, X, Xh, noise, chain, opts);

      SweepRow row{};
      row.n = n;
      row.alpha = alpha;
      row.rho = rho(X, Xh);
      row.coupled_mean = mean_of(res.coupled_distances);
      row.coupled_se = standard_error(res.coupled_distances, row.coupled_mean);
      const EmpiricalMeasure A(dim, res.theta_samples);
      const EmpiricalMeasure B(dim, res.theta_hat_samples);
      if (p.replicas <= kAssignmentCap) {
        row.w1 = w1_assignment(A, B);
        row.w1_method = "assignment";
      } else {
        RngStream proj_rng(p.seed, kLossStream ^ 0xffffULL ^ row_id);
        row.w1 = w1_sliced(A, B, 64, proj_rng);
        row.w1_method = "sliced";
      }

      // Loss-level stability on fresh data points.
      RngStream loss_rng(p.seed, kLossStream + row_id);
      const std::size_t R = p.replicas;
      std::vector<double> diffs(p.risk_draws);
      for (std::size_t j = 0; j < p.risk_draws; ++j) {
        const auto x = sample_domain_point(model.domain(), loss_rng);
        detail::CompensatedSum s;
        for (std::size_t r = 0; r < R; ++r) {
          const std::span<const double> ta(res.theta_samples.data() + r * dim, dim);
          const std::span<const double> tb(res.theta_hat_samples.data() + r * dim, dim);
          s.add(surrogate_loss(model, ta, x, p.surrogate_cap) - surrogate_loss(model, tb, x, p.surrogate_cap));
        }
        diffs[j] = s.value() / static_cast<double>(R);
      }
      const double dmean = mean_of(diffs);
      row.loss_stability = std::fabs(dmean);
      row.loss_stability_se = standard_error(diffs, dmean);

      RngStream risk_rng(p.seed, kRiskStream + row_id);
      const double emp = empirical_risk(model, res.theta_samples, X, p.surrogate_cap);
      const auto pop = population_risk_estimate(model, res.theta_samples, p.surrogate_cap, p.risk_draws, risk_rng);
      row.gen_gap = emp - pop.mean;
      row.gen_gap_se = pop.standard_error;

      row.stationary_bound = bounds::stationary_bound(row.rho, k);
      row.discrete_bound = bounds::discrete_bound(p.eta, row.rho, k);
      row.generalization_bound = bounds::generalization_bound(k, n);
      out.rows.push_back(std::move(row));
      ++row_id;
    }
  }
  return out;
}

// ------------------------------------------------------------------ moment divergence

std::vector<MomentRow> moment_divergence(const MomentParams& p) {
  if (p.cases.empty()) throw ConfigError("moment-divergence: no (alpha, p) cases");
  if (p.n_list.empty()) throw ConfigError("moment-divergence: N list is empty");
  for (const auto& c : p.cases) {
    if (!(c.alpha > 1.0 && c.alpha <= 2.0)) throw DomainError("moment-divergence: alpha must lie in (1, 2]");
    if (!(c.p > 0.0)) throw DomainError("moment-divergence: p must be positive");
  }
  if (!(p.ou_rate > 0.0)) throw DomainError("moment-divergence: ou_rate must be positive");
  if (p.chains == 0) throw ConfigError("moment-divergence: chains must be positive");
  std::vector<std::size_t> ns = p.n_list;
  std::sort(ns.begin(), ns.end());
  if (ns.front() == 0) throw ConfigError("moment-divergence: N must be positive");
  const std::size_t nmax = ns.back();

  std::map<double, std::vector<double>> samples;
  for (const auto& c : p.cases) {
    if (samples.count(c.alpha)) continue;
    ChainConfig chain;
    chain.eta = p.eta;
    chain.burn_in = p.burn_in;
    chain.replicas = p.chains;
    chain.seed = p.seed;
    samples[c.alpha] = harvest_stationary(linear_drift(p.ou_rate), 1, StableNoiseSpec{c.alpha, 1.0},
                                          chain, p.thin, nmax);
  }

  std::vector<MomentRow> rows;
  for (const auto& c : p.cases) {
    const auto& all = samples.at(c.alpha);
    double base = 0.0;
    for (std::size_t N : ns) {
      const EmpiricalMeasure m(1, std::vector<double>(all.begin(), all.begin() + static_cast<std::ptrdiff_t>(N)));
      const double mom = empirical_p_moment(m, c.p);
      if (N == ns.front()) base = mom;
      MomentRow row{c.alpha, c.p, N, mom, mom / base, ""};
      if (N == nmax) {
        // Stable laws with alpha < 2 have infinite moments of order >= alpha;
        // the Gaussian case has all moments.
        const bool infinite = c.alpha < 2.0 && c.p >= c.alpha;
        if (infinite) {
          row.flag = row.ratio > 10.0 ? "divergent" : "no-divergence-detected";
        } else {
          row.flag = (row.ratio >= 0.5 && row.ratio <= 2.0) ? "stable" : "unstable";
        }
      }
      rows.push_back(std::move(row));
    }
  }
  return rows;
}

// ------------------------------------------------------------------ commands

namespace {

const std::vector<KeySpec> kCommon = {{"seed", "42"}, {"format", "csv"}};

const std::vector<KeySpec> kModelKeys = {
    {"model", "quadratic-1d"}, {"x_min", "0.5"}, {"x_max", "1.5"},
    {"dim", "2"},              {"m0", "2"},      {"a", "0.5"}};

const std::vector<KeySpec> kExternalKeys = {{"C1", ""}, {"lambda", ""}, {"C", ""}, {"Q", ""}};

std::vector<KeySpec> join(std::initializer_list<std::vector<KeySpec>> parts) {
  std::vector<KeySpec> out;
  for (const auto& p : parts) out.insert(out.end(), p.begin(), p.end());
  return out;
}

std::vector<KeySpec> with_format(std::vector<KeySpec> keys, const std::string& fmt) {
  for (auto& k : keys) {
    if (k.key == "format") k.default_value = fmt;
  }
  return keys;
}

std::string output_format(const Settings& s) {
  const std::string f = s.str("format");
  if (f != "csv" && f != "json") throw ConfigError("format must be csv or json, got '" + f + "'");
  return f;
}

ModelSpec model_from(const Settings& s) {
  ModelSpec m;
  m.kind = s.str("model");
  m.x_min = s.real("x_min");
  m.x_max = s.real("x_max");
  m.dim = s.count("dim");
  m.m0 = s.real("m0");
  m.a = s.real("a");
  return m;
}

bounds::ExternalConstants external_from(const Settings& s) {
  return {s.optional_real("C1"), s.optional_real("lambda"), s.optional_real("C"), s.optional_real("Q")};
}

std::optional<std::size_t> auto_count(const Settings& s, const std::string& key) {
  if (trim(s.str(key)) == "auto") return std::nullopt;
  return s.count(key);
}

std::vector<std::pair<std::string, std::string>> base_metadata(const std::string& command,
                                                               const Settings& s) {
  std::vector<std::pair<std::string, std::string>> meta = {
      {"schema_version", std::to_string(kSchemaVersion)}, {"command", command}, {"seed", s.str("seed")}};
  for (const auto& [k, v] : s.effective()) meta.emplace_back("config." + k, v);
  return meta;
}

nlohmann::ordered_json provenance_json(const std::vector<bounds::ProvenanceEntry>& entries) {
  auto out = nlohmann::ordered_json::object();
  for (const auto& e : entries) {
    out[e.name] = {{"value", json_number(e.value)}, {"status", e.status}, {"source", e.source}};
  }
  return out;
}

void add_provenance_metadata(std::vector<std::pair<std::string, std::string>>& meta,
                             const std::vector<bounds::ProvenanceEntry>& entries) {
  for (const auto& e : entries) {
    meta.emplace_back("provenance." + e.name, e.status + " (" + e.source + ") " + format_number(e.value));
  }
}

// ---- gcurve

std::vector<KeySpec> gcurve_schema() {
  return join({kCommon,
               {{"alpha_min", "1.01"},
                {"alpha_max", "1.99"},
                {"alpha_step", "0.01"},
                {"alphas", ""},
                {"d_list", "1,10,100,1000"},
                {"normalize", "true"}}});
}

Report cmd_gcurve(const Config& cfg) {
  const Settings s(cfg, gcurve_schema(), "gcurve");
  const std::string fmt = output_format(s);
  s.u64("seed");
  const auto alphas = trim(s.str("alphas")).empty()
                          ? alpha_grid(s.real("alpha_min"), s.real("alpha_max"), s.real("alpha_step"))
                          : s.reals("alphas");
  const auto ds = s.counts("d_list");
  const auto rows = g_curve(alphas, ds, s.flag("normalize"));

  Table table({"alpha", "d", "g", "g_normalized", "log_g"});
  for (const auto& r : rows) {
    table.add_row({r.alpha, static_cast<std::int64_t>(r.d), r.g, r.g_normalized, r.log_g});
  }
  Report rep;
  rep.format = fmt;
  if (fmt == "csv") {
    rep.text = render_csv(base_metadata("gcurve", s), table);
    return rep;
  }
  auto summary = nlohmann::ordered_json::array();
  for (std::size_t d : ds) {
    std::size_t best = 0;
    std::size_t first = rows.size();
    for (std::size_t i = 0; i < rows.size(); ++i) {
      if (rows[i].d != d) continue;
      if (first == rows.size()) first = best = i;
      if (rows[i].log_g < rows[best].log_g) best = i;
    }
    const bool interior = best != first && best != first + alphas.size() - 1;
    summary.push_back({{"d", d}, {"argmin_alpha", rows[best].alpha}, {"min_log_g", rows[best].log_g},
                       {"interior_minimum", interior}});
  }
  nlohmann::ordered_json results;
  results["rows"] = table_to_json(table);
  results["summary"] = std::move(summary);
  nlohmann::ordered_json prov;
  prov["g"] = {{"status", "computed"}, {"source", "formula"}};
  rep.text = render_json("gcurve", s.effective(), s.u64("seed"), results, prov);
  return rep;
}

// ---- stability-sweep

std::vector<KeySpec> sweep_schema() {
  return join({kCommon, kModelKeys, kExternalKeys,
               {{"n_list", "32,64,128,256,512,1024"},
                {"alpha_list", "1.5"},
                {"eta", "0.01"},
                {"steps", "auto"},
                {"burn_in", "auto"},
                {"replicas", "256"},
                {"perturbation", "0.25"},
                {"perturb_index", "0"},
                {"surrogate_cap", "1"},
                {"risk_draws", "1000"},
                {"theta0", ""},
                {"consistency_mode", "false"},
                {"data_file", ""},
                {"trajectory_prefix", ""},
                {"trajectory_every", "10"}}});
}

Report cmd_stability_sweep(const Config& cfg) {
  const Settings s(cfg, sweep_schema(), "stability-sweep");
  const std::string fmt = output_format(s);
  SweepParams p;
  p.model = model_from(s);
  p.n_list = s.counts("n_list");
  p.alpha_list = s.reals("alpha_list");
  p.eta = s.real("eta");
  p.steps = auto_count(s, "steps");
  p.burn_in = auto_count(s, "burn_in");
  p.replicas = s.count("replicas");
  p.perturbation = s.real("perturbation");
  p.perturb_index = s.count("perturb_index");
  p.surrogate_cap = s.real("surrogate_cap");
  p.risk_draws = s.count("risk_draws");
  p.theta0 = s.reals("theta0");
  p.seed = s.u64("seed");
  p.external = external_from(s);
  p.data_file = s.str("data_file");
  p.trajectory_prefix = s.str("trajectory_prefix");
  p.trajectory_every = s.count("trajectory_every");
  const bool consistency = s.flag("consistency_mode");

  const SweepResult res = stability_sweep(p);

  Table table({"n", "alpha", "rho", "coupled_mean", "coupled_se", "w1_empirical", "w1_method",
               "loss_stability", "loss_stability_se", "gen_gap", "gen_gap_se", "stationary_bound",
               "discrete_bound", "generalization_bound"});
  for (const auto& r : res.rows) {
    table.add_row({static_cast<std::int64_t>(r.n), r.alpha, r.rho, r.coupled_mean, r.coupled_se, r.w1,
                   r.w1_method, r.loss_stability, r.loss_stability_se, r.gen_gap, r.gen_gap_se,
                   r.stationary_bound, r.discrete_bound, r.generalization_bound});
  }

  // Slope of the mean coupled distance against n, per alpha.
  auto slopes = nlohmann::ordered_json::array();
  std::vector<std::pair<std::string, std::string>> slope_meta;
  for (double alpha : p.alpha_list) {
    std::vector<double> ns, ys;
    for (const auto& r : res.rows) {
      if (r.alpha == alpha && r.coupled_mean > 0.0) {
        ns.push_back(static_cast<double>(r.n));
        ys.push_back(r.coupled_mean);
      }
    }
    std::set<double> distinct(ns.begin(), ns.end());
    const double slope = distinct.size() >= 2 ? log_log_slope(ns, ys) : std::numeric_limits<double>::quiet_NaN();
    slopes.push_back({{"alpha", alpha}, {"coupled_slope", json_number(slope)}});
    slope_meta.emplace_back("coupled_slope[alpha=" + format_number(alpha) + "]", format_number(slope));
  }

  std::vector<std::string> violations;
  if (consistency) {
    for (const auto& r : res.rows) {
      const std::string where = "n=" + std::to_string(r.n) + " alpha=" + format_number(r.alpha);
      if (r.coupled_mean > r.discrete_bound) violations.push_back(where + ": coupled_mean > discrete_bound");
      if (r.w1 > r.discrete_bound) violations.push_back(where + ": w1_empirical > discrete_bound");
      if (std::fabs(r.gen_gap) > r.generalization_bound) {
        violations.push_back(where + ": |gen_gap| > generalization_bound");
      }
    }
  }

  Report rep;
  rep.format = fmt;
  rep.status = violations.empty() ? 0 : static_cast<int>(ErrorCode::Acceptance);
  if (fmt == "csv") {
    auto meta = base_metadata("stability-sweep", s);
    meta.emplace_back("steps", std::to_string(res.steps));
    meta.emplace_back("burn_in", std::to_string(res.burn_in));
    meta.emplace_back("surrogate_lipschitz", format_number(res.lipschitz));
    meta.emplace_back("domain_diameter", format_number(res.diameter));
    add_provenance_metadata(meta, res.provenance);
    meta.insert(meta.end(), slope_meta.begin(), slope_meta.end());
    if (consistency) {
      meta.emplace_back("consistency", violations.empty() ? "pass" : "fail");
      for (const auto& v : violations) meta.emplace_back("consistency_violation", v);
    }
    rep.text = render_csv(meta, table);
    return rep;
  }
  nlohmann::ordered_json results;
  results["steps"] = res.steps;
  results["burn_in"] = res.burn_in;
  results["surrogate_lipschitz"] = json_number(res.lipschitz);
  results["domain_diameter"] = json_number(res.diameter);
  results["rows"] = table_to_json(table);
  results["slopes"] = std::move(slopes);
  if (consistency) results["consistency"] = {{"pass", violations.empty()}, {"violations", violations}};
  auto prov = provenance_json(res.provenance);
  prov["surrogate_lipschitz"] = {{"value", json_number(res.lipschitz)}, {"status", "computed"}, {"source", "numerical search"}};
  rep.text = render_json("stability-sweep", s.effective(), p.seed, results, prov);
  return rep;
}

// ---- moment-divergence

std::vector<KeySpec> moment_schema() {
  return join({kCommon,
               {{"cases", "1.5:0.75, 1.5:2.0, 1.5:2.5, 2.0:3.0"},
                {"n_list", "1000,1000000"},
                {"ou_rate", "1"},
                {"eta", "0.1"},
                {"thin", "10"},
                {"burn_in", "10000"},
                {"chains", "64"}}});
}

std::vector<MomentCase> parse_cases(const std::string& text) {
  std::vector<MomentCase> out;
  for (const auto& piece : split_list(text)) {
    const auto parts = split_list(piece, ':');
    const auto a = parts.size() == 2 ? parse_real(parts[0]) : std::nullopt;
    const auto p = parts.size() == 2 ? parse_real(parts[1]) : std::nullopt;
    if (!a || !p) throw ConfigError("moment-divergence: case '" + piece + "' is not alpha:p");
    out.push_back({*a, *p});
  }
  return out;
}

Report cmd_moment_divergence(const Config& cfg) {
  const Settings s(cfg, moment_schema(), "moment-divergence");
  const std::string fmt = output_format(s);
  MomentParams p;
  p.cases = parse_cases(s.str("cases"));
  p.n_list = s.counts("n_list");
  p.ou_rate = s.real("ou_rate");
  p.eta = s.real("eta");
  p.thin = s.count("thin");
  p.burn_in = s.count("burn_in");
  p.chains = s.count("chains");
  p.seed = s.u64("seed");
  const auto rows = moment_divergence(p);

  Table table({"alpha", "p", "N", "moment", "ratio", "flag"});
  for (const auto& r : rows) {
    table.add_row({r.alpha, r.p, static_cast<std::int64_t>(r.N), r.moment, r.ratio, r.flag});
  }
  Report rep;
  rep.format = fmt;
  if (fmt == "csv") {
    rep.text = render_csv(base_metadata("moment-divergence", s), table);
    return rep;
  }
  nlohmann::ordered_json results;
  results["rows"] = table_to_json(table);
  rep.text = render_json("moment-divergence", s.effective(), p.seed, results, nlohmann::ordered_json::object());
  return rep;
}

// ---- validate

std::vector<KeySpec> validate_schema() {
  return join({kCommon, {{"criteria", ""}, {"fault_injection", "none"}}});
}

Report cmd_validate(const Config& cfg) {
  const Settings s(cfg, validate_schema(), "validate");
  const std::string fmt = output_format(s);
  ValidationOptions opts;
  opts.seed = s.u64("seed");
  for (std::size_t c : s.counts("criteria")) {
    if (c < 1 || c > 8) throw ConfigError("validate: criteria must lie in 1..8");
    opts.criteria.push_back(static_cast<int>(c));
  }
  const std::string fault = s.str("fault_injection");
  if (fault == "gamma") {
    opts.corrupt_gamma = true;
  } else if (fault != "none" && !fault.empty()) {
    throw ConfigError("validate: fault_injection must be none or gamma");
  }
  const auto checks = run_validation(opts);

  Table table({"criterion", "check", "status", "measured", "tolerance"});
  std::size_t failed = 0;
  for (const auto& c : checks) {
    table.add_row({static_cast<std::int64_t>(c.criterion), c.check, std::string(c.pass ? "pass" : "FAIL"),
                   c.measured, c.tolerance});
    if (!c.pass) ++failed;
  }
  Report rep;
  rep.format = fmt;
  rep.status = failed == 0 ? 0 : static_cast<int>(ErrorCode::Acceptance);
  const std::string summary = failed == 0 ? "pass" : "FAIL (" + std::to_string(failed) + " of " +
                                                         std::to_string(checks.size()) + " checks failed)";
  if (fmt == "csv") {
    auto meta = base_metadata("validate", s);
    meta.emplace_back("result", summary);
    rep.text = render_csv(meta, table);
    return rep;
  }
  nlohmann::ordered_json results;
  results["result"] = summary;
  results["checks"] = table_to_json(table);
  rep.text = render_json("validate", s.effective(), opts.seed, results, nlohmann::ordered_json::object());
  return rep;
}

// ---- bounds

std::vector<KeySpec> bounds_schema() {
  return with_format(
      join({kCommon, kModelKeys, kExternalKeys,
            {{"alpha", "1.5"},
             {"d", ""},
             {"n", "100"},
             {"rho", ""},
             {"eta", "0.01"},
             {"N", "1000"},
             {"w_norm", "0"},
             {"surrogate_cap", "1"},
             {"lipschitz", ""},
             {"alpha_y", ""},
             {"K1", ""},
             {"K2", ""},
             {"B", ""},
             {"m", ""},
             {"K", ""},
             {"L", ""},
             {"M", ""}}}),
      "json");
}

Report cmd_bounds(const Config& cfg) {
  const Settings s(cfg, bounds_schema(), "bounds");
  const std::string fmt = output_format(s);
  const std::uint64_t seed = s.u64("seed");
  const LossModel model = make_model(model_from(s));
  ConstantBundle bundle = model.constants();
  std::vector<bounds::ProvenanceEntry> bundle_prov;
  const std::pair<const char*, double*> fields[] = {{"K1", &bundle.K1}, {"K2", &bundle.K2}, {"B", &bundle.B},
                                                    {"m", &bundle.m},   {"K", &bundle.K},   {"L", &bundle.L},
                                                    {"M", &bundle.M}};
  for (const auto& [name, ptr] : fields) {
    const auto given = s.optional_real(name);
    if (given) *ptr = *given;
    bundle_prov.push_back({name, *ptr, "computed", given ? "config" : "model " + model.name()});
  }
  bundle.validate();

  const double alpha = s.real("alpha");
  const std::size_t d = trim(s.str("d")).empty() ? model.theta_dim() : s.count("d");
  const std::size_t n = s.count("n");
  if (n == 0) throw ConfigError("bounds: n must be positive");
  const double D = model.domain().diameter();
  const double rho_value = s.optional_real("rho").value_or(D / static_cast<double>(n));
  const double eta = s.real("eta");
  const std::size_t N = s.count("N");
  const double w_norm = s.real("w_norm");
  const double cap = s.real("surrogate_cap");
  const auto lip_given = s.optional_real("lipschitz");
  const double lip = lip_given.value_or(surrogate_lipschitz(model, cap, envelope_radius(bundle), seed));

  // Everything alpha dependent is evaluated first so an endpoint alpha fails
  // with the formula's own diagnostic.
  const double log_g_value = bounds::log_g(alpha, d);
  const auto k = bounds::make_bound_constants(alpha, d, bundle, external_from(s), lip, D);
  const auto lyap = bounds::lyapunov_params(bundle, alpha, d);
  const auto crit = bounds::critical_alpha0();
  const double alpha_y = s.optional_real("alpha_y").value_or(crit.alpha0);
  const auto a0p = bounds::alpha0_prime_detail(d, crit.alpha0, alpha_y);
  const auto a1_case = bounds::a1_case_for(N, eta);
  const bounds::A1Inputs a1_in{eta, N, w_norm, rho_value};
  const auto a1_terms = bounds::theorem_A1_terms(a1_case, a1_in, k);
  const double a1_total = bounds::theorem_A1_bound(a1_case, a1_in, k);
  const double stat = bounds::stationary_bound(rho_value, k);
  const double gen = bounds::generalization_bound(k, n);
  const double disc = bounds::discrete_bound(eta, rho_value, k);
  const double disc_term = bounds::discretization_term(eta, alpha, k.Q);

  nlohmann::ordered_json results;
  results["inputs"] = {{"model", model.name()}, {"alpha", alpha}, {"d", d}, {"n", n},
                       {"rho", rho_value},      {"eta", eta},     {"N", N}, {"w_norm", w_norm},
                       {"domain_diameter", D},  {"surrogate_cap", cap}};
  results["critical"] = {{"c0", crit.c0},
                         {"alpha0", crit.alpha0},
                         {"d0", bounds::d0(crit.alpha0)},
                         {"alpha_for_y0", alpha_y},
                         {"y0", a0p.y0},
                         {"alpha0_prime", a0p.value},
                         {"alpha0_double_prime", "not computed"}};
  results["g"] = {{"g", json_number(std::exp(log_g_value))}, {"log_g", log_g_value}};
  results["constants"] = {{"C0", k.C0},
                          {"C0_via_lyapunov", 1.0 + lyap.q1 / lyap.lambda1},
                          {"C_d_alpha", bounds::C_d_alpha(alpha, d)},
                          {"d_alpha", std::exp(bounds::log_d_alpha(alpha, d))},
                          {"sphere_area", std::exp(bounds::log_sphere_area(d))},
                          {"lambda1", lyap.lambda1},
                          {"q1", lyap.q1},
                          {"K1", bundle.K1},
                          {"K2", bundle.K2},
                          {"B", bundle.B},
                          {"m", bundle.m},
                          {"K", bundle.K},
                          {"L", bundle.L},
                          {"M", bundle.M},
                          {"C1", k.C1},
                          {"lambda", k.lambda},
                          {"C", k.C},
                          {"Q", k.Q},
                          {"surrogate_lipschitz", lip}};
  results["bounds"] = {{"stationary", stat},
                       {"generalization", gen},
                       {"discretization_term", disc_term},
                       {"discrete", disc},
                       {"max_step_size", bounds::max_step_size(bundle)},
                       {"finite_time", {{"case", bounds::to_string(a1_case)}, {"terms", a1_terms}, {"total", a1_total}}}};

  auto prov = provenance_json(k.provenance);
  for (const auto& e : bundle_prov) prov[e.name] = {{"value", e.value}, {"status", e.status}, {"source", e.source}};
  prov["surrogate_lipschitz"] = {{"value", lip}, {"status", lip_given ? "external-unspecified" : "computed"},
                                 {"source", lip_given ? "config" : "numerical search"}};
  prov["alpha0_double_prime"] = {{"value", nullptr}, {"status", "not computed"}, {"source", "no closed form"}};

  Report rep;
  rep.format = fmt;
  if (fmt == "json") {
    rep.text = render_json("bounds", s.effective(), seed, results, prov);
    return rep;
  }
  // Flatten to key,value rows.
  Table table({"key", "value"});
  for (const auto& section : {"inputs", "critical", "g", "constants", "bounds"}) {
    for (const auto& [key, val] : results[section].items()) {
      if (val.is_object()) {
        for (const auto& [k2, v2] : val.items()) {
          table.add_row({std::string(section) + "." + key + "." + k2, v2.is_string() ? v2.get<std::string>() : v2.dump()});
        }
      } else if (val.is_number_float()) {
        table.add_row({std::string(section) + "." + key, val.get<double>()});
      } else {
        table.add_row({std::string(section) + "." + key, val.is_string() ? val.get<std::string>() : val.dump()});
      }
    }
  }
  auto meta = base_metadata("bounds", s);
  add_provenance_metadata(meta, k.provenance);
  rep.text = render_csv(meta, table);
  return rep;
}

}  // namespace

std::vector<std::string> command_names() {
  return {"gcurve", "stability-sweep", "moment-divergence", "validate", "bounds"};
}

std::vector<KeySpec> command_schema(const std::string& command) {
  if (command == "gcurve") return gcurve_schema();
  if (command == "stability-sweep") return sweep_schema();
  if (command == "moment-divergence") return moment_schema();
  if (command == "validate") return validate_schema();
  if (command == "bounds") return bounds_schema();
  throw ConfigError("unknown command '" + command + "'");
}

Report run_command(const std::string& command, const Config& config) {
  if (command == "gcurve") return cmd_gcurve(config);
  if (command == "stability-sweep") return cmd_stability_sweep(config);
  if (command == "moment-divergence") return cmd_moment_divergence(config);
  if (command == "validate") return cmd_validate(config);
  if (command == "bounds") return cmd_bounds(config);
  throw ConfigError("unknown command '" + command + "'");
}

}  // namespace levystab
