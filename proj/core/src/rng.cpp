#include "paretobf/rng.hpp"

#include <cmath>
#include <numbers>

namespace paretobf {

namespace {
constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ULL;
}

std::uint64_t splitmix64(std::uint64_t x) {
  x += kGolden;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

std::uint64_t fnv1a64(std::string_view bytes) {
  std::uint64_t h = 0xCBF29CE484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001B3ULL;
  }
  return h;
}

std::uint64_t stream_key(std::uint64_t seed, std::string_view label, std::uint64_t index) {
  std::uint64_t k = splitmix64(seed);
  k = splitmix64(k ^ fnv1a64(label));
  return splitmix64(k ^ splitmix64(index));
}

std::uint64_t CounterRng::next_bits() {
  ++counter_;
  return splitmix64(key_ + counter_ * kGolden);
}

double CounterRng::next_uniform() {
  // (bits >> 11) in [0, 2^53); shift to (0, 1]
  return (static_cast<double>(next_bits() >> 11) + 1.0) * 0x1.0p-53;
}

double CounterRng::next_normal() {
  const double u1 = next_uniform();
  const double u2 = next_uniform();
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

Complex CounterRng::next_complex_normal() {
  const double re = next_normal();
  const double im = next_normal();
  return Complex(re, im) * std::numbers::sqrt2 * 0.5;
}

CVec CounterRng::complex_normal_vector(Eigen::Index dim) {
  CVec v(dim);
  for (Eigen::Index i = 0; i < dim; ++i) v[i] = next_complex_normal();
  return v;
}

CMat CounterRng::complex_normal_matrix(Eigen::Index rows, Eigen::Index cols) {
  CMat m(rows, cols);
  for (Eigen::Index j = 0; j < cols; ++j) {
    for (Eigen::Index i = 0; i < rows; ++i) m(i, j) = next_complex_normal();
  }
  return m;
}

CVec CounterRng::unit_vector(Eigen::Index dim) {
  CVec v = complex_normal_vector(dim);
  while (v.norm() == 0.0) v = complex_normal_vector(dim);
  return v.normalized();
}

}  // namespace paretobf
