#include <algorithm>
#include <cmath>
#include <sstream>
#include <string>

#include "doctest.h"
#include "levystab/bounds.hpp"
#include "levystab/errors.hpp"
#include "levystab/experiments.hpp"

using namespace levystab;

namespace {

Config cfg(const std::string& text) { return Config::from_text(text); }

std::string header_line(const std::string& csv) {
  std::istringstream in(csv);
  for (std::string line; std::getline(in, line);) {
    if (!line.empty() && line[0] != '#') return line;
  }
  return {};
}

SweepParams small_sweep() {
  SweepParams p;
  p.n_list = {16, 32};
  p.replicas = 32;
  p.steps = 600;
  p.burn_in = 300;
  p.risk_draws = 200;
  return p;
}

}  // namespace

TEST_CASE("alpha grid") {
  const auto grid = alpha_grid(1.01, 1.99, 0.01);
  CHECK(grid.size() == 99);
  CHECK(grid.front() == 1.01);
  CHECK(grid.back() == doctest::Approx(1.99).epsilon(1e-14));
  CHECK_THROWS_AS(alpha_grid(1.5, 1.4, 0.01), ConfigError);
}

TEST_CASE("g curve rows") {
  const auto one = g_curve({1.5}, {1}, true);
  REQUIRE(one.size() == 1);
  CHECK(one[0].g == doctest::Approx(bounds::g(1.5, 1)).epsilon(1e-15));
  CHECK(one[0].g_normalized == 1.0);

  const auto rows = g_curve(alpha_grid(1.01, 1.99, 0.01), {1, 10, 100, 1000}, true);
  CHECK(rows.size() == 4 * 99);
  for (std::size_t d : {1, 10, 100, 1000}) {
    double top = 0.0;
    for (const auto& r : rows)
      if (r.d == d) top = std::max(top, r.g_normalized);
    CHECK(top == doctest::Approx(1.0).epsilon(1e-15));
  }
  CHECK_THROWS_AS(g_curve({1.004, 1.5}, {1}, true), DomainError);
  CHECK_THROWS_AS(g_curve({1.5, 1.996}, {1}, true), DomainError);
}

TEST_CASE("d = 100 curve has its minimum strictly inside the grid") {
  // Dense-grid oracle for the location of the minimum.
  double best_alpha = 0.0, best = 1e300;
  for (int i = 0; i <= 9800; ++i) {
    const double a = 1.01 + i * 1e-4;
    const double v = bounds::log_g(a, 100);
    if (v < best) {
      best = v;
      best_alpha = a;
    }
  }
  const auto rows = g_curve(alpha_grid(1.01, 1.99, 0.01), {100}, true);
  const auto it = std::min_element(rows.begin(), rows.end(),
                                    [](const GCurveRow& a, const GCurveRow& b) { return a.log_g < b.log_g; });
  CHECK(it != rows.begin());
  CHECK(it != rows.end() - 1);
  CHECK(std::fabs(it->alpha - best_alpha) <= 0.01);
}

TEST_CASE("log-log slope") {
  CHECK(log_log_slope({1, 2, 4, 8}, {3, 1.5, 0.75, 0.375}) == doctest::Approx(-1.0));
  CHECK(log_log_slope({1, 10, 100}, {2, 200, 20000}) == doctest::Approx(2.0));
}

TEST_CASE("zero perturbation gives zero coupled quantities") {
  auto p = small_sweep();
  p.perturbation = 0.0;
  const auto res = stability_sweep(p);
  for (const auto& r : res.rows) {
    CHECK(r.rho == 0.0);
    CHECK(r.coupled_mean == 0.0);
    CHECK(r.w1 == 0.0);
    CHECK(r.loss_stability == 0.0);
    CHECK(r.stationary_bound == 0.0);
  }
}

TEST_CASE("sweep rows are consistent") {
  const auto res = stability_sweep(small_sweep());
  REQUIRE(res.rows.size() == 2);
  CHECK(res.steps == 600);
  CHECK(res.burn_in == 300);
  CHECK(res.diameter == doctest::Approx(1.0));
  for (const auto& r : res.rows) {
    CHECK(r.rho == doctest::Approx(0.25 / static_cast<double>(r.n)));
    CHECK(r.w1_method == "assignment");
    // Coupling feasibility: the optimal transport cost cannot exceed the coupled cost.
    CHECK(r.w1 <= r.coupled_mean + 2.0 * r.coupled_se);
    CHECK(r.coupled_mean > 0.0);
    CHECK(r.discrete_bound > r.stationary_bound);
  }
  const auto again = stability_sweep(small_sweep());
  CHECK(again.rows[1].coupled_mean == res.rows[1].coupled_mean);
  CHECK(again.rows[1].gen_gap == res.rows[1].gen_gap);
}

TEST_CASE("dissipative model sweep runs") {
  auto p = small_sweep();
  p.model.kind = "dissipative-nonconvex";
  p.n_list = {16};
  p.replicas = 8;
  const auto res = stability_sweep(p);
  REQUIRE(res.rows.size() == 1);
  CHECK(std::isfinite(res.rows[0].coupled_mean));
  CHECK(res.rows[0].w1 <= res.rows[0].coupled_mean + 2.0 * res.rows[0].coupled_se);
}

TEST_CASE("moment divergence on a short run") {
  MomentParams p;
  p.cases = {{1.5, 0.75}, {1.5, 2.5}};
  p.n_list = {1000, 100000};
  p.burn_in = 200;
  p.chains = 8;
  const auto rows = moment_divergence(p);
  REQUIRE(rows.size() == 4);
  for (const auto& r : rows) {
    if (r.N == 1000) {
      CHECK(r.ratio == 1.0);
      CHECK(r.flag.empty());
    }
  }
  CHECK(rows[1].flag == "stable");
  CHECK(rows[1].ratio >= 0.5);
  CHECK(rows[1].ratio <= 2.0);
  CHECK(rows[3].flag.find("divergent") != std::string::npos);
}

TEST_CASE("command dispatch and schemas") {
  const auto names = command_names();
  CHECK(names == std::vector<std::string>{"gcurve", "stability-sweep", "moment-divergence", "validate", "bounds"});
  for (const auto& n : names) CHECK_FALSE(command_schema(n).empty());
  CHECK_THROWS_AS(run_command("nope", Config{}), ConfigError);
  CHECK_THROWS_AS(run_command("gcurve", cfg("unknown_key = 1")), ConfigError);
}

TEST_CASE("gcurve command output") {
  const auto rep = run_command("gcurve", cfg("alphas = 1.5\nd_list = 1"));
  CHECK(rep.status == 0);
  CHECK(header_line(rep.text) == "alpha,d,g,g_normalized,log_g");
  CHECK(rep.text.find("# seed=42") != std::string::npos);
  const auto json = run_command("gcurve", cfg("alphas = 1.5\nd_list = 1\nformat = json"));
  const auto doc = nlohmann::ordered_json::parse(json.text);
  CHECK(doc["schema_version"] == kSchemaVersion);
  CHECK_THROWS_AS(run_command("gcurve", cfg("alpha_min = 1.0")), DomainError);
}

TEST_CASE("bounds command") {
  const auto rep = run_command("bounds", Config{});
  CHECK(rep.format == "json");
  const auto doc = nlohmann::ordered_json::parse(rep.text);
  CHECK(std::fabs(doc["results"]["critical"]["c0"].get<double>() - 1.46163) < 1e-5);
  for (const char* key : {"schema_version", "config_echo", "seed", "results", "constants_provenance"}) {
    CHECK(doc.contains(key));
  }
  CHECK(doc["constants_provenance"]["C1"]["status"] == "external-unspecified");

  const auto zero = nlohmann::ordered_json::parse(run_command("bounds", cfg("rho = 0\nN = 1")).text);
  const auto& b = zero["results"]["bounds"];
  CHECK(b["stationary"].get<double>() == 0.0);
  CHECK(b["generalization"].get<double>() > 0.0);  // depends on n, not rho
  CHECK(b["discrete"].get<double>() == doctest::Approx(b["discretization_term"].get<double>()));

  try {
    run_command("bounds", cfg("alpha = 2"));
    FAIL("expected a domain error");
  } catch (const DomainError& e) {
    CHECK(std::string(e.what()).find("alpha") != std::string::npos);
  }
  const auto csv = run_command("bounds", cfg("format = csv"));
  CHECK(header_line(csv.text) == "key,value");
}

TEST_CASE("validate command negative control") {
  const auto ok = run_command("validate", cfg("criteria = 1, 7"));
  CHECK(ok.status == 0);
  const auto bad = run_command("validate", cfg("criteria = 1\nfault_injection = gamma"));
  CHECK(bad.status == 4);
  CHECK(bad.text.find("gamma vs reference table on [0.1, 50]\",FAIL") != std::string::npos);
  CHECK_THROWS_AS(run_command("validate", cfg("criteria = 9")), ConfigError);
  CHECK_THROWS_AS(run_command("validate", cfg("fault_injection = other")), ConfigError);
}

TEST_CASE("commands are deterministic") {
  const auto text = "n_list = 16, 32\nreplicas = 16\nsteps = 400\nburn_in = 200\nrisk_draws = 100\n";
  CHECK(run_command("stability-sweep", cfg(text)).text == run_command("stability-sweep", cfg(text)).text);
  const auto other_seed = run_command("stability-sweep", cfg(std::string(text) + "seed = 7\n")).text;
  CHECK(other_seed != run_command("stability-sweep", cfg(text)).text);
}
