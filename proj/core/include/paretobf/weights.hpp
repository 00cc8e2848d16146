#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace paretobf {

/// Convex weights on the unit simplex: every entry in [0,1], entries sum to 1.
class SimplexWeight {
 public:
  static constexpr double kSumTolerance = 1e-12;

  /// Validates; throws DomainError when an entry leaves [0,1] or the sum misses 1.
  explicit SimplexWeight(std::vector<double> weights);

  /// Weight vector with all mass on `index`.
  static SimplexWeight indicator(std::size_t size, std::size_t index);
  /// Uniform weight over the indices in `support`.
  static SimplexWeight uniform_over(std::size_t size, std::span<const std::size_t> support);

  std::size_t size() const { return weights_.size(); }
  double operator[](std::size_t i) const { return weights_[i]; }
  const std::vector<double>& values() const { return weights_; }

  friend bool operator==(const SimplexWeight&, const SimplexWeight&) = default;

 private:
  std::vector<double> weights_;
};

/// Sign pattern e in {-1,+1}^K selecting a boundary part of a gain-region.
/// The all -1 pattern is not a feasible direction and is rejected.
class DirectionVector {
 public:
  explicit DirectionVector(std::vector<int> signs);

  std::size_t size() const { return signs_.size(); }
  int operator[](std::size_t i) const { return signs_[i]; }
  const std::vector<int>& values() const { return signs_; }

  std::size_t positive_count() const;
  std::size_t negative_count() const { return size() - positive_count(); }

  friend bool operator==(const DirectionVector&, const DirectionVector&) = default;

 private:
  std::vector<int> signs_;
};

/// All points of the simplex grid with spacing `step` over `parts` coordinates,
/// in ascending lexicographic order. `step` must lie in (0,1] and divide 1.
std::vector<SimplexWeight> simplex_grid(std::size_t parts, double step);

/// Number of grid divisions 1/step; throws DomainError unless step is in (0,1]
/// and 1/step is an integer within 1e-12.
std::size_t grid_divisions(double step);

/// Number of points simplex_grid(parts, step) would produce, C(n + parts - 1, parts - 1).
std::size_t simplex_grid_size(std::size_t parts, std::size_t divisions);

}  // namespace paretobf
