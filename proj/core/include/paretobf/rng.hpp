#pragma once

#include <cstdint>
#include <string_view>

#include "paretobf/hermitian.hpp"

namespace paretobf {

/// SplitMix64 finalizer (Steele, Lea, Flood 2014).
std::uint64_t splitmix64(std::uint64_t x);

/// 64-bit FNV-1a of a byte string.
std::uint64_t fnv1a64(std::string_view bytes);

/// Derives an independent stream key from a seed, a label and an index.
/// Channel streams use label = power-group id and index = receiver, so adding
/// receivers or groups never changes the draws of existing pairs.
std::uint64_t stream_key(std::uint64_t seed, std::string_view label, std::uint64_t index);

/// Counter-based generator: draw i of stream `key` is splitmix64(key + (i+1) * golden).
/// Sequential access goes through a running counter; the sequence is a pure
/// function of (key, draw index).
class CounterRng {
 public:
  explicit CounterRng(std::uint64_t key) : key_(key) {}

  std::uint64_t next_bits();
  /// Uniform in (0, 1], 53 bits of resolution.
  double next_uniform();
  /// Standard real normal via Box-Muller (consumes two uniforms).
  double next_normal();
  /// Circularly symmetric complex normal, zero mean, E|x|^2 = 1.
  Complex next_complex_normal();
  CVec complex_normal_vector(Eigen::Index dim);
  CMat complex_normal_matrix(Eigen::Index rows, Eigen::Index cols);
  /// Uniform unit vector (normalized complex normal vector).
  CVec unit_vector(Eigen::Index dim);

  std::uint64_t counter() const { return counter_; }

 private:
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
};

}  // namespace paretobf
