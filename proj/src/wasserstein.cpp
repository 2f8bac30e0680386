#include "levystab/wasserstein.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "levystab/errors.hpp"
#include "parallel.hpp"
#include "summation.hpp"

namespace levystab {

EmpiricalMeasure::EmpiricalMeasure(std::size_t dim, std::vector<double> flat)
    : dim_(dim), flat_(std::move(flat)) {
  if (dim_ == 0) throw DomainError("empirical measure: dimension must be positive");
  if (flat_.empty() || flat_.size() % dim_ != 0) {
    throw DomainError("empirical measure: need a nonempty whole number of points");
  }
  for (double v : flat_) {
    if (!std::isfinite(v)) throw DomainError("empirical measure: non-finite sample");
  }
}

EmpiricalMeasure EmpiricalMeasure::from_points(const std::vector<std::vector<double>>& points) {
  if (points.empty()) throw DomainError("empirical measure: no points");
  const std::size_t d = points.front().size();
  std::vector<double> flat;
  flat.reserve(points.size() * d);
  for (const auto& p : points) {
    if (p.size() != d) throw DomainError("empirical measure: inconsistent point dimensions");
    flat.insert(flat.end(), p.begin(), p.end());
  }
  return EmpiricalMeasure(d, std::move(flat));
}

namespace {

void require_same_dim(const EmpiricalMeasure& a, const EmpiricalMeasure& b, const char* fn) {
  if (a.dim() != b.dim()) {
    throw DomainError(std::string(fn) + ": dimension mismatch (" + std::to_string(a.dim()) +
                      " vs " + std::to_string(b.dim()) + ")");
  }
}

void require_same_size(const EmpiricalMeasure& a, const EmpiricalMeasure& b, const char* fn) {
  if (a.size() != b.size()) {
    throw DomainError(std::string(fn) + ": sample counts differ (" + std::to_string(a.size()) +
                      " vs " + std::to_string(b.size()) + ")");
  }
}

double euclid(std::span<const double> x, std::span<const double> y) {
  double s = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) s += (x[i] - y[i]) * (x[i] - y[i]);
  return std::sqrt(s);
}

double sorted_gap_mean(std::vector<double> a, std::vector<double> b) {
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  detail::CompensatedSum s;
  for (std::size_t i = 0; i < a.size(); ++i) s.add(std::fabs(a[i] - b[i]));
  return s.value() / static_cast<double>(a.size());
}

}  // namespace

double w1_exact_1d(const EmpiricalMeasure& a, const EmpiricalMeasure& b) {
  if (a.dim() != 1 || b.dim() != 1) throw DomainError("w1_exact_1d: inputs must be 1-dimensional");
  require_same_size(a, b, "w1_exact_1d");
  return sorted_gap_mean(a.flat(), b.flat());
}

double w1_1d(std::vector<double> a, std::vector<double> b) {
  if (a.empty() || b.empty()) throw DomainError("w1_1d: empty sample");
  if (a.size() == b.size()) return sorted_gap_mean(std::move(a), std::move(b));
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  const double wa = 1.0 / static_cast<double>(a.size());
  const double wb = 1.0 / static_cast<double>(b.size());
  // Sweep the merged support, integrating |F_a - F_b| between breakpoints.
  std::size_t i = 0;
  std::size_t j = 0;
  double fa = 0.0;
  double fb = 0.0;
  double x = std::min(a.front(), b.front());
  detail::CompensatedSum s;
  while (i < a.size() || j < b.size()) {
    const double next = (j >= b.size() || (i < a.size() && a[i] <= b[j])) ? a[i] : b[j];
    s.add(std::fabs(fa - fb) * (next - x));
    x = next;
    while (i < a.size() && a[i] == x) {
      fa += wa;
      ++i;
    }
    while (j < b.size() && b[j] == x) {
      fb += wb;
      ++j;
    }
  }
  return s.value();
}

std::vector<std::size_t> solve_assignment(std::span<const double> cost, std::size_t n) {
  if (n == 0 || cost.size() != n * n) throw DomainError("solve_assignment: cost must be n x n");
  // Shortest augmenting paths with row/column potentials, 1-based with a
  // virtual column 0.
  const double inf = std::numeric_limits<double>::infinity();
  std::vector<double> u(n + 1, 0.0), v(n + 1, 0.0), minv(n + 1);
  std::vector<std::size_t> p(n + 1, 0), way(n + 1, 0);
  std::vector<char> used(n + 1);
  for (std::size_t i = 1; i <= n; ++i) {
    p[0] = i;
    std::size_t j0 = 0;
    std::fill(minv.begin(), minv.end(), inf);
    std::fill(used.begin(), used.end(), 0);
    do {
      used[j0] = 1;
      const std::size_t i0 = p[j0];
      double delta = inf;
      std::size_t j1 = 0;
      const double* row = cost.data() + (i0 - 1) * n;
      for (std::size_t j = 1; j <= n; ++j) {
        if (used[j]) continue;
        const double cur = row[j - 1] - u[i0] - v[j];
        if (cur < minv[j]) {
          minv[j] = cur;
          way[j] = j0;
        }
        if (minv[j] < delta) {
          delta = minv[j];
          j1 = j;
        }
      }
      for (std::size_t j = 0; j <= n; ++j) {
        if (used[j]) {
          u[p[j]] += delta;
          v[j] -= delta;
        } else {
          minv[j] -= delta;
        }
      }
      j0 = j1;
    } while (p[j0] != 0);
    do {
      const std::size_t j1 = way[j0];
      p[j0] = p[j1];
      j0 = j1;
    } while (j0 != 0);
  }
  std::vector<std::size_t> col(n);
  for (std::size_t j = 1; j <= n; ++j) col[p[j] - 1] = j - 1;
  return col;
}

double w1_assignment(const EmpiricalMeasure& a, const EmpiricalMeasure& b) {
  require_same_dim(a, b, "w1_assignment");
  require_same_size(a, b, "w1_assignment");
  const std::size_t n = a.size();
  if (n > kAssignmentCap) {
    throw DomainError("w1_assignment: " + std::to_string(n) + " points exceed the cap of " +
                      std::to_string(kAssignmentCap) + "; use the sliced estimator");
  }
  if (a.dim() == 1) return w1_exact_1d(a, b);
  std::vector<double> cost(n * n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) cost[i * n + j] = euclid(a.point(i), b.point(j));
  }
  const auto col = solve_assignment(cost, n);
  detail::CompensatedSum s;
  for (std::size_t i = 0; i < n; ++i) s.add(cost[i * n + col[i]]);
  return s.value() / static_cast<double>(n);
}

double w1_sliced(const EmpiricalMeasure& a, const EmpiricalMeasure& b,
                 std::size_t num_projections, RngStream& rng) {
  require_same_dim(a, b, "w1_sliced");
  if (num_projections == 0) throw DomainError("w1_sliced: need at least one projection");
  const std::size_t d = a.dim();
  const std::uint64_t base = rng.next_u64();
  std::vector<double> per(num_projections);
  detail::parallel_for(num_projections, [&](std::size_t p) {
    std::vector<double> dir(d);
    if (d == 1) {
      dir[0] = 1.0;
    } else {
      RngStream sub(base, p);
      double len = 0.0;
      do {
        for (double& x : dir) x = sub.normal();
        len = std::sqrt(std::inner_product(dir.begin(), dir.end(), dir.begin(), 0.0));
      } while (len == 0.0);
      for (double& x : dir) x /= len;
    }
    auto project = [&](const EmpiricalMeasure& m) {
      std::vector<double> out(m.size());
      for (std::size_t i = 0; i < m.size(); ++i) {
        const auto pt = m.point(i);
        out[i] = std::inner_product(dir.begin(), dir.end(), pt.begin(), 0.0);
      }
      return out;
    };
    per[p] = w1_1d(project(a), project(b));
  });
  detail::CompensatedSum s;
  for (double v : per) s.add(v);
  return s.value() / static_cast<double>(num_projections);
}

double empirical_p_moment(const EmpiricalMeasure& a, double p) {
  if (!(p > 0.0)) throw DomainError("empirical_p_moment: p must be positive");
  detail::CompensatedSum s;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const auto pt = a.point(i);
    double r2 = 0.0;
    for (double x : pt) r2 += x * x;
    s.add(std::pow(r2, 0.5 * p));
  }
  return s.value() / static_cast<double>(a.size());
}

}  // namespace levystab
