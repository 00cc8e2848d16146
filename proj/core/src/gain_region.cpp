#include "paretobf/gain_region.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <string>

#include "paretobf/error.hpp"
#include "paretobf/rng.hpp"

namespace paretobf {

FeasibleCovariance::FeasibleCovariance(const CMat& q) : q_(q) {
  const double min_eig = eig_hermitian(q_).values[0];
  if (min_eig < -kEigenTolerance) {
    std::ostringstream os;
    os << "covariance is not positive semidefinite: min eigenvalue " << min_eig;
    throw DomainError(os.str());
  }
  if (q_.trace() > 1.0 + kTraceTolerance) {
    std::ostringstream os;
    os << "covariance violates the power budget: trace " << q_.trace();
    throw DomainError(os.str());
  }
}

FeasibleCovariance FeasibleCovariance::rank_one(const CVec& direction, double power) {
  if (!(power >= 0.0) || power > 1.0) throw DomainError("power must lie in [0, 1]");
  if (std::abs(direction.norm() - 1.0) > 1e-9) throw DomainError("direction must be a unit vector");
  return FeasibleCovariance(outer_product(direction) * power);
}

FeasibleCovariance FeasibleCovariance::zero(Eigen::Index dim) {
  return FeasibleCovariance(HermitianMatrix::zero(dim));
}

const char* to_string(PowerClass c) {
  switch (c) {
    case PowerClass::Full:
      return "full";
    case PowerClass::Free:
      return "free";
    case PowerClass::Zero:
      return "zero";
  }
  return "?";
}

double power_gain(const FeasibleCovariance& q, const CVec& h) {
  if (h.size() != q.dim()) {
    throw DimensionError("channel dimension " + std::to_string(h.size()) +
                         " does not match covariance dimension " + std::to_string(q.dim()));
  }
  return std::max(0.0, (h.adjoint() * q.matrix() * h).value().real());
}

double beamformer_gain(const CVec& w, const CVec& h) {
  if (w.size() != h.size()) throw DimensionError("beamformer and channel dimensions differ");
  return std::norm(w.dot(h));
}

GainTuple gain_tuple(const FeasibleCovariance& q, std::span<const CVec> channels) {
  GainTuple x;
  x.reserve(channels.size());
  for (const auto& h : channels) x.push_back(power_gain(q, h));
  return x;
}

double zero_tolerance(const HermitianMatrix& z) { return 1e-9 * (1.0 + max_abs(z.matrix())); }

PowerClass classify_top_eigenvalue(double mu_max, double tau) {
  if (mu_max > tau) return PowerClass::Full;
  if (mu_max < -tau) return PowerClass::Zero;
  return PowerClass::Free;
}

PowerClass power_rule(const HermitianMatrix& z) {
  return classify_top_eigenvalue(eig_hermitian(z).max_value(), zero_tolerance(z));
}

bool needs_power_control(Eigen::Index antennas, const DirectionVector& e) {
  return static_cast<std::size_t>(antennas) <= e.negative_count();
}

GainTuple BoundaryStrategy::gains(std::span<const CVec> channels) const {
  GainTuple x;
  x.reserve(channels.size());
  for (const auto& h : channels) x.push_back(power * beamformer_gain(direction, h));
  return x;
}

BoundaryStrategy boundary_strategy(std::span<const CVec> channels, const SimplexWeight& lambda,
                                   const DirectionVector& e, double p_free) {
  if (!(p_free >= 0.0) || p_free > 1.0) throw DomainError("p_free must lie in [0, 1]");
  const HermitianMatrix z = weighted_combination(channels, lambda, e);
  const EigenSystem es = eig_hermitian(z);
  const DominantEigenvector top = dominant_eigvec(es, channels);
  const PowerClass cls = classify_top_eigenvalue(top.eigenvalue, zero_tolerance(z));
  double power = 1.0;
  if (cls == PowerClass::Free) power = p_free;
  if (cls == PowerClass::Zero) power = 0.0;
  return BoundaryStrategy{top.vector, power, lambda, e, cls, top.eigenvalue};
}

std::vector<double> free_power_levels(std::size_t samples) {
  if (samples == 0) throw DomainError("free power sampling needs at least one level");
  if (samples == 1) return {1.0};
  std::vector<double> levels(samples);
  for (std::size_t i = 0; i < samples; ++i) {
    levels[i] = static_cast<double>(i) / static_cast<double>(samples - 1);
  }
  return levels;
}

std::vector<BoundarySample> sweep_boundary(std::span<const CVec> channels, const DirectionVector& e,
                                           double step, std::size_t p_free_samples) {
  if (channels.empty()) throw DimensionError("sweep needs at least one channel");
  const std::vector<SimplexWeight> grid = simplex_grid(channels.size(), step);
  const std::vector<double> levels = free_power_levels(p_free_samples);
  const bool power_control = needs_power_control(channels.front().size(), e);

  std::vector<BoundarySample> out;
  out.reserve(grid.size());
  for (const auto& lambda : grid) {
    BoundaryStrategy s = boundary_strategy(channels, lambda, e, 1.0);
    if (s.power_class == PowerClass::Free && power_control) {
      for (double p : levels) {
        BoundaryStrategy sp = s;
        sp.power = p;
        GainTuple x = sp.gains(channels);
        out.push_back({lambda, std::move(sp), std::move(x)});
      }
    } else {
      GainTuple x = s.gains(channels);
      out.push_back({lambda, std::move(s), std::move(x)});
    }
  }
  return out;
}

bool dominates(std::span<const double> x, std::span<const double> y, const DirectionVector& e) {
  if (x.size() != y.size() || x.size() != e.size()) {
    throw DimensionError("dominance test on tuples of different lengths");
  }
  bool strict = false;
  for (std::size_t l = 0; l < x.size(); ++l) {
    const double a = x[l] * e[l];
    const double b = y[l] * e[l];
    if (a < b) return false;
    if (a > b) strict = true;
  }
  return strict;
}

FeasibleCovariance segment_covariance(const FeasibleCovariance& qx, const FeasibleCovariance& qy,
                                      double t) {
  if (!(t >= 0.0) || t > 1.0) throw DomainError("segment parameter t must lie in [0, 1]");
  if (qx.dim() != qy.dim()) throw DimensionError("segment endpoints have different dimensions");
  return FeasibleCovariance(t * qx.matrix() + (1.0 - t) * qy.matrix());
}

FeasibleCovariance full_power_completion(const FeasibleCovariance& p,
                                         std::span<const CVec> channels, std::size_t target) {
  const std::size_t k = channels.size();
  const Eigen::Index n = p.dim();
  if (target >= k) throw DomainError("target receiver out of range");
  if (static_cast<std::size_t>(n) < k) {
    throw DomainError("full power completion needs N >= K (N = " + std::to_string(n) +
                      ", K = " + std::to_string(k) + ")");
  }
  if (p.trace() >= 1.0 - FeasibleCovariance::kTraceTolerance) {
    throw DomainError("covariance is already full power");
  }
  std::vector<CVec> others;
  for (std::size_t l = 0; l < k; ++l) {
    if (l != target) others.push_back(channels[l]);
  }
  const Projector perp = projector_complement(as_columns(others, n));
  const CVec& h = channels[target];
  if (h.size() != n) throw DimensionError("channel dimension does not match covariance");
  const CVec u = perp.apply(h);
  const double norm = u.norm();
  if (norm <= 1e-12 * h.norm()) {
    throw RankDeficientError("target channel lies in the span of the other channels");
  }
  const CVec dir = u / norm;
  return FeasibleCovariance(p.matrix() + (1.0 - p.trace()) * (dir * dir.adjoint()));
}

FeasibleCovariance random_feasible_covariance(std::uint64_t seed, Eigen::Index dim,
                                              std::optional<Eigen::Index> rank, bool full_power) {
  if (dim < 1) throw DomainError("covariance dimension must be positive");
  CounterRng rng(stream_key(seed, "covariance", static_cast<std::uint64_t>(dim)));
  Eigen::Index r = 0;
  if (rank) {
    r = *rank;
    if (r < 1 || r > dim) throw DomainError("rank must lie in 1..N");
  } else {
    r = std::min<Eigen::Index>(dim, 1 + static_cast<Eigen::Index>(rng.next_uniform() * dim));
  }
  const double target = full_power ? 1.0 : rng.next_uniform();
  const CMat g = rng.complex_normal_matrix(dim, r);
  CMat q = g * g.adjoint();
  q *= target / q.trace().real();
  return FeasibleCovariance(q);
}

}  // namespace paretobf
