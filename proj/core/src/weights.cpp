#include "paretobf/weights.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "paretobf/error.hpp"

namespace paretobf {

SimplexWeight::SimplexWeight(std::vector<double> weights) : weights_(std::move(weights)) {
  if (weights_.empty()) throw DomainError("simplex weight must have at least one entry");
  double sum = 0.0;
  for (std::size_t i = 0; i < weights_.size(); ++i) {
    const double w = weights_[i];
    if (!std::isfinite(w) || w < 0.0 || w > 1.0) {
      throw DomainError("simplex weight entry " + std::to_string(i) + " = " + std::to_string(w) +
                        " outside [0,1]");
    }
    sum += w;
  }
  if (std::abs(sum - 1.0) > kSumTolerance) {
    throw DomainError("simplex weights sum to " + std::to_string(sum) + ", expected 1");
  }
}

SimplexWeight SimplexWeight::indicator(std::size_t size, std::size_t index) {
  if (index >= size) throw DomainError("indicator index out of range");
  std::vector<double> w(size, 0.0);
  w[index] = 1.0;
  return SimplexWeight(std::move(w));
}

SimplexWeight SimplexWeight::uniform_over(std::size_t size, std::span<const std::size_t> support) {
  if (support.empty()) throw DomainError("uniform weight needs a nonempty support");
  std::vector<double> w(size, 0.0);
  for (std::size_t i : support) {
    if (i >= size) throw DomainError("uniform weight support index out of range");
    w[i] = 1.0 / static_cast<double>(support.size());
  }
  return SimplexWeight(std::move(w));
}

DirectionVector::DirectionVector(std::vector<int> signs) : signs_(std::move(signs)) {
  if (signs_.empty()) throw DomainError("direction vector must have at least one entry");
  for (int s : signs_) {
    if (s != 1 && s != -1) throw DomainError("direction vector entries must be +1 or -1");
  }
  if (positive_count() == 0) {
    throw DomainError("direction vector with all entries -1 is not a feasible direction");
  }
}

std::size_t DirectionVector::positive_count() const {
  return static_cast<std::size_t>(std::count(signs_.begin(), signs_.end(), 1));
}

std::size_t grid_divisions(double step) {
  if (!(step > 0.0) || step > 1.0) {
    throw DomainError("step " + std::to_string(step) + " outside (0,1]");
  }
  const double inv = 1.0 / step;
  const double rounded = std::round(inv);
  // |1/step - n| <= 1e-12 * n  <=>  |step * n - 1| <= ~1e-12
  if (std::abs(rounded * step - 1.0) > 1e-12) {
    throw DomainError("step " + std::to_string(step) + " does not divide 1");
  }
  return static_cast<std::size_t>(rounded);
}

std::size_t simplex_grid_size(std::size_t parts, std::size_t divisions) {
  if (parts == 0) return 0;
  // C(divisions + parts - 1, parts - 1), computed incrementally to stay exact
  std::size_t result = 1;
  for (std::size_t i = 1; i < parts; ++i) {
    result = result * (divisions + i) / i;
  }
  return result;
}

namespace {

void compose(std::size_t parts, std::size_t remaining, std::vector<std::size_t>& prefix,
             std::size_t divisions, std::vector<SimplexWeight>& out) {
  if (prefix.size() + 1 == parts) {
    prefix.push_back(remaining);
    std::vector<double> w(parts);
    for (std::size_t i = 0; i < parts; ++i) {
      w[i] = static_cast<double>(prefix[i]) / static_cast<double>(divisions);
    }
    out.emplace_back(std::move(w));
    prefix.pop_back();
    return;
  }
  for (std::size_t c = 0; c <= remaining; ++c) {
    prefix.push_back(c);
    compose(parts, remaining - c, prefix, divisions, out);
    prefix.pop_back();
  }
}

}  // namespace

std::vector<SimplexWeight> simplex_grid(std::size_t parts, double step) {
  if (parts == 0) throw DomainError("simplex grid needs at least one coordinate");
  const std::size_t n = grid_divisions(step);
  std::vector<SimplexWeight> out;
  out.reserve(simplex_grid_size(parts, n));
  std::vector<std::size_t> prefix;
  compose(parts, n, prefix, n, out);
  return out;
}

}  // namespace paretobf
