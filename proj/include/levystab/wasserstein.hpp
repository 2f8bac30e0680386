#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "levystab/stable.hpp"

namespace levystab {

/// Finite sample cloud in R^d with uniform weights, stored row-major.
class EmpiricalMeasure {
 public:
  EmpiricalMeasure(std::size_t dim, std::vector<double> flat);
  static EmpiricalMeasure from_points(const std::vector<std::vector<double>>& points);

  std::size_t size() const noexcept { return flat_.size() / dim_; }
  std::size_t dim() const noexcept { return dim_; }
  std::span<const double> point(std::size_t i) const { return {flat_.data() + i * dim_, dim_}; }
  const std::vector<double>& flat() const noexcept { return flat_; }

 private:
  std::size_t dim_;
  std::vector<double> flat_;
};

/// Largest count accepted by w1_assignment.
inline constexpr std::size_t kAssignmentCap = 2048;

/// Exact W1 between two 1-d clouds of equal size: mean gap of the sorted samples.
double w1_exact_1d(const EmpiricalMeasure& a, const EmpiricalMeasure& b);

/// W1 between 1-d samples of possibly different sizes: integral of |F_a - F_b|.
double w1_1d(std::vector<double> a, std::vector<double> b);

/// Minimum-cost perfect matching of a square cost matrix (row-major, n x n).
/// Returns col[i], the column assigned to row i.
std::vector<std::size_t> solve_assignment(std::span<const double> cost, std::size_t n);

/// Exact W1 between equal-size clouds under Euclidean ground cost, by optimal
/// assignment. Throws DomainError above kAssignmentCap points; use w1_sliced then.
double w1_assignment(const EmpiricalMeasure& a, const EmpiricalMeasure& b);

/// Mean over random unit directions of the 1-d W1 of the projected clouds.
/// A proxy, not the exact distance. Projection p draws its direction from its
/// own substream, so the result does not depend on evaluation order.
double w1_sliced(const EmpiricalMeasure& a, const EmpiricalMeasure& b,
                 std::size_t num_projections, RngStream& rng);

/// Mean of |x|^p over the cloud.
double empirical_p_moment(const EmpiricalMeasure& a, double p);

}  // namespace levystab
