#include <algorithm>
#include <cmath>
#include <sstream>
#include <vector>

#include "doctest.h"
#include "levystab/errors.hpp"
#include "levystab/losses.hpp"

using namespace levystab;

namespace {

double norm(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s += x * x;
  return std::sqrt(s);
}

std::vector<double> central_difference(const LossModel& model, std::vector<double> theta,
                                       std::span<const double> x) {
  const double h = 1e-6;
  std::vector<double> g(theta.size());
  for (std::size_t i = 0; i < theta.size(); ++i) {
    const double t = theta[i];
    theta[i] = t + h;
    const double up = model.value(theta, x);
    theta[i] = t - h;
    const double down = model.value(theta, x);
    theta[i] = t;
    g[i] = (up - down) / (2 * h);
  }
  return g;
}

std::vector<double> random_vector(RngStream& rng, std::size_t d, double scale) {
  std::vector<double> v(d);
  for (double& x : v) x = scale * rng.normal();
  return v;
}

}  // namespace

TEST_CASE("quadratic-1d constants") {
  const auto model = LossModel::quadratic_1d(0.5, 1.5);
  const auto& c = model.constants();
  CHECK(c.K1 == doctest::Approx(4.5));
  CHECK(c.K2 == doctest::Approx(6.0));
  CHECK(c.B == 0.0);
  CHECK(c.m == doctest::Approx(0.5));
  CHECK(c.K == 0.0);
  CHECK(c.L == doctest::Approx(4.5));
  CHECK(c.M == 0.0);
  CHECK(model.theta_dim() == 1);
  CHECK(model.data_dim() == 1);
  CHECK(model.domain().diameter() == doctest::Approx(1.0));
  CHECK_THROWS_AS(LossModel::quadratic_1d(0.0, 1.0), DomainError);
  CHECK_THROWS_AS(LossModel::quadratic_1d(2.0, 1.0), DomainError);
}

TEST_CASE("dissipative-nonconvex constants") {
  const auto model = LossModel::dissipative_nonconvex(2, 2.0, 0.5, 1.0);
  const auto& c = model.constants();
  CHECK(c.K1 == doctest::Approx(2.5));
  CHECK(c.L == doctest::Approx(2.5));
  CHECK(c.K2 == doctest::Approx(0.5));
  CHECK(c.B == doctest::Approx(0.5 * std::sqrt(2.0)));
  CHECK(c.m == doctest::Approx(1.5));
  CHECK(c.K == 0.0);
  CHECK(c.M == doctest::Approx(0.5));
  CHECK(model.domain().diameter() == doctest::Approx(2.0 * std::sqrt(2.0)));
  CHECK_THROWS_AS(LossModel::dissipative_nonconvex(2, 1.0, 1.0, 1.0), DomainError);
  CHECK_THROWS_AS(LossModel::dissipative_nonconvex(0, 2.0, 0.5, 1.0), DomainError);
}

TEST_CASE("gradients match finite differences") {
  RngStream rng(1, 0);
  const auto quad = LossModel::quadratic_1d(0.5, 1.5);
  const auto diss = LossModel::dissipative_nonconvex(3, 2.0, 0.5, 1.0);
  for (int trial = 0; trial < 20; ++trial) {
    for (const auto* model : {&quad, &diss}) {
      const auto theta = random_vector(rng, model->theta_dim(), 2.0);
      const auto x = sample_domain_point(model->domain(), rng);
      const auto g = grad_f(*model, theta, x);
      const auto fd = central_difference(*model, theta, x);
      for (std::size_t i = 0; i < g.size(); ++i) CHECK(g[i] == doctest::Approx(fd[i]).epsilon(1e-6));
    }
  }
}

TEST_CASE("dissipative model satisfies its declared constants") {
  const auto model = LossModel::dissipative_nonconvex(3, 2.0, 0.5, 1.0);
  const auto& c = model.constants();
  RngStream rng(2, 0);
  const std::vector<double> zero(3, 0.0);
  for (int trial = 0; trial < 500; ++trial) {
    const auto t1 = random_vector(rng, 3, 3.0);
    const auto t2 = random_vector(rng, 3, 3.0);
    const auto x = sample_domain_point(model.domain(), rng);
    const auto x2 = sample_domain_point(model.domain(), rng);
    const auto g1 = grad_f(model, t1, x);
    const auto g2 = grad_f(model, t2, x);
    std::vector<double> dt(3), dg(3);
    double inner = 0.0;
    for (int i = 0; i < 3; ++i) {
      dt[i] = t1[i] - t2[i];
      dg[i] = g1[i] - g2[i];
      inner += dg[i] * dt[i];
    }
    CHECK(inner >= c.m * norm(dt) * norm(dt) - c.K - 1e-12);
    CHECK(norm(dg) <= c.K1 * norm(dt) + 1e-12);
    CHECK(norm(grad_f(model, zero, x)) <= c.B + 1e-12);

    // Cross term: |grad f(t, x) - grad f(t, x')| <= K2 |x - x'| (2|t| + 1).
    const auto gx2 = grad_f(model, t1, x2);
    std::vector<double> dx(3), dgx(3);
    for (int i = 0; i < 3; ++i) {
      dx[i] = x[i] - x2[i];
      dgx[i] = g1[i] - gx2[i];
    }
    CHECK(norm(dgx) <= c.K2 * norm(dx) * (2 * norm(t1) + 1) + 1e-12);
  }
}

TEST_CASE("empirical gradient is the mean of per-point gradients") {
  RngStream rng(3, 0);
  for (const auto& model : {LossModel::quadratic_1d(0.5, 1.5), LossModel::dissipative_nonconvex(2, 2.0, 0.5, 1.0)}) {
    const auto data = sample_dataset(model, 37, rng);
    const auto theta = random_vector(rng, model.theta_dim(), 1.0);
    std::vector<double> mean(model.theta_dim(), 0.0);
    for (std::size_t i = 0; i < data.size(); ++i) {
      const auto g = grad_f(model, theta, data.point(i));
      for (std::size_t j = 0; j < g.size(); ++j) mean[j] += g[j] / 37.0;
    }
    const auto got = grad_F_hat(model, theta, data);
    for (std::size_t j = 0; j < got.size(); ++j) CHECK(got[j] == doctest::Approx(mean[j]).epsilon(1e-13));
  }
}

TEST_CASE("dataset invariants") {
  CHECK_NOTHROW(Dataset({{0.0}, {1.0}}, 1.0));
  CHECK_THROWS_AS(Dataset({{0.0}, {1.5}}, 1.0), DomainError);
  CHECK_THROWS_AS(Dataset(std::vector<std::vector<double>>{}, 1.0), DomainError);
  CHECK_THROWS_AS(Dataset({{0.0}, {std::nan("")}}, 1.0), DomainError);
  CHECK_THROWS_AS(Dataset(2, {1.0, 2.0, 3.0}, 5.0), DomainError);
  const Dataset d({{0.0, 0.0}, {3.0, 4.0}, {1.0, 1.0}}, 5.0);
  CHECK(d.size() == 3);
  CHECK(d.dim() == 2);
  CHECK(max_pairwise_distance(d) == doctest::Approx(5.0));
  CHECK(d.prefix(2).size() == 2);
  CHECK(d.prefix(2).point(1)[1] == 4.0);
}

TEST_CASE("one-point perturbation and rho") {
  const Dataset data({{0.5}, {0.7}, {1.0}, {1.2}}, 1.0);
  const std::vector<double> shift{0.25};
  const auto moved = perturb_one(data, 2, shift);
  CHECK(moved.point(2)[0] == doctest::Approx(1.25));
  CHECK(moved.point(0)[0] == 0.5);
  CHECK(rho(data, moved) == doctest::Approx(0.25 / 4));
  CHECK(rho(data, data) == 0.0);
  CHECK_THROWS_AS(perturb_one(data, 4, shift), DomainError);
  CHECK_THROWS_AS(perturb_one(data, 0, std::vector<double>{2.0}), DomainError);

  const auto model = LossModel::dissipative_nonconvex(3, 2.0, 0.5, 1.0);
  RngStream rng(4, 0);
  const auto cloud = sample_dataset(model, 50, rng);
  const auto hat = perturb_one_random(cloud, model.domain(), 0.3, rng);
  CHECK(rho(cloud, hat) == doctest::Approx(0.3 / 50));
  for (std::size_t i = 0; i < hat.size(); ++i) CHECK(model.domain().contains(hat.point(i)));
}

TEST_CASE("sampled datasets are deterministic and in the domain") {
  const auto model = LossModel::dissipative_nonconvex(2, 2.0, 0.5, 1.0);
  RngStream a(5, 1), b(5, 1);
  const auto da = sample_dataset(model, 100, a);
  const auto db = sample_dataset(model, 100, b);
  CHECK(da == db);
  for (std::size_t i = 0; i < da.size(); ++i) CHECK(model.domain().contains(da.point(i)));
}

TEST_CASE("surrogate loss is bounded and its gradient is consistent") {
  const auto model = LossModel::quadratic_1d(0.5, 1.5);
  const std::vector<double> x{1.2};
  for (double t : {0.0, 0.5, 3.0, 50.0}) {
    const std::vector<double> theta{t};
    const double v = surrogate_loss(model, theta, x, 2.0);
    CHECK(v >= 0.0);
    CHECK(v <= 2.0);
    std::vector<double> g(1);
    surrogate_grad(model, theta, x, 2.0, g);
    const double h = 1e-6;
    const double fd = (surrogate_loss(model, std::vector<double>{t + h}, x, 2.0) -
                       surrogate_loss(model, std::vector<double>{t - h}, x, 2.0)) / (2 * h);
    CHECK(g[0] == doctest::Approx(fd).epsilon(1e-6).scale(1e-8));
  }
}

TEST_CASE("surrogate Lipschitz search brackets the analytic supremum") {
  // |d/dt cap tanh(t^2 x^2 / cap)| = 2 x sqrt(cap) sqrt(u) sech^2(u), u = t^2 x^2 / cap.
  double peak = 0.0;
  for (int i = 1; i <= 200000; ++i) {
    const double u = i * 1e-5;
    const double s = 1.0 / std::cosh(u);
    peak = std::max(peak, std::sqrt(u) * s * s);
  }
  for (double cap : {0.5, 1.0, 4.0}) {
    const auto model = LossModel::quadratic_1d(0.5, 1.5);
    const double exact = 2.0 * 1.5 * std::sqrt(cap) * peak;
    const double est = surrogate_lipschitz(model, cap, envelope_radius(model.constants()), 42);
    CAPTURE(cap);
    CHECK(est >= exact);
    CHECK(est <= 1.03 * exact);
  }
  CHECK(envelope_radius(LossModel::dissipative_nonconvex(2, 2.0, 0.5, 1.0).constants()) ==
        doctest::Approx(10.0 * (1.0 + 0.5 * std::sqrt(2.0) / 1.5)));
}

TEST_CASE("empirical and population risk") {
  const auto model = LossModel::quadratic_1d(0.5, 1.5);
  const Dataset data({{0.5}, {1.0}}, 1.0);
  const std::vector<double> thetas{1.0, 2.0};
  double want = 0.0;
  for (double t : thetas)
    for (double x : {0.5, 1.0}) want += std::tanh(t * t * x * x) / 4.0;
  CHECK(empirical_risk(model, thetas, data, 1.0) == doctest::Approx(want).epsilon(1e-14));

  // Population risk by Simpson's rule over x ~ U[0.5, 1.5].
  const int panels = 2000;
  double simpson = 0.0;
  for (int i = 0; i <= panels; ++i) {
    const double x = 0.5 + static_cast<double>(i) / panels;
    const double w = (i == 0 || i == panels) ? 1.0 : (i % 2 ? 4.0 : 2.0);
    double v = 0.0;
    for (double t : thetas) v += std::tanh(t * t * x * x) / 2.0;
    simpson += w * v;
  }
  simpson /= 3.0 * panels;
  RngStream rng(6, 0);
  const auto est = population_risk_estimate(model, thetas, 1.0, 20000, rng);
  CHECK(est.standard_error > 0.0);
  CHECK(std::fabs(est.mean - simpson) < 4.0 * est.standard_error);
}

TEST_CASE("dataset files round trip") {
  const Dataset data({{0.125, -1.5}, {1e-3, 2.0}, {0.0, 0.0}}, 5.0);
  std::stringstream csv;
  save_dataset_csv(csv, data);
  CHECK(load_dataset_csv(csv, 5.0) == data);

  std::stringstream json;
  save_dataset_json(json, data);
  CHECK(load_dataset_json(json) == data);

  std::stringstream bad("1.0\nabc\n");
  CHECK_THROWS_AS(load_dataset_csv(bad, 1.0), ConfigError);
  std::stringstream bad_json("{\"points\": 3}");
  CHECK_THROWS_AS(load_dataset_json(bad_json), ConfigError);
}
