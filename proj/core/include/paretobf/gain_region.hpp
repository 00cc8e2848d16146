#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "paretobf/hermitian.hpp"
#include "paretobf/weights.hpp"

namespace paretobf {

/// Received power gains (x_1, ..., x_K) produced by one transmitter.
using GainTuple = std::vector<double>;

/// Transmit covariance Q: positive semidefinite with trace(Q) <= 1.
class FeasibleCovariance {
 public:
  static constexpr double kEigenTolerance = 1e-10;
  static constexpr double kTraceTolerance = 1e-12;

  /// Validates Hermitian, min eigenvalue >= -1e-10 and trace <= 1 + 1e-12.
  explicit FeasibleCovariance(const CMat& q);
  /// p * w w^H for a unit direction w and p in [0, 1].
  static FeasibleCovariance rank_one(const CVec& direction, double power);
  static FeasibleCovariance zero(Eigen::Index dim);

  Eigen::Index dim() const { return q_.dim(); }
  const CMat& matrix() const { return q_.matrix(); }
  double trace() const { return q_.trace(); }

 private:
  explicit FeasibleCovariance(HermitianMatrix q) : q_(std::move(q)) {}
  HermitianMatrix q_;
};

/// Power classification of a boundary weight from the sign of mu_max(Z).
enum class PowerClass { Full, Free, Zero };

const char* to_string(PowerClass c);

/// x = h^H Q h.
double power_gain(const FeasibleCovariance& q, const CVec& h);
/// |w^H h|^2 for a beamformer w (covariance w w^H).
double beamformer_gain(const CVec& w, const CVec& h);
GainTuple gain_tuple(const FeasibleCovariance& q, std::span<const CVec> channels);

/// tau = 1e-9 (1 + max|Z|).
double zero_tolerance(const HermitianMatrix& z);

/// Full when mu_max(Z) > tau, Zero when mu_max(Z) < -tau, Free otherwise.
PowerClass power_rule(const HermitianMatrix& z);
PowerClass classify_top_eigenvalue(double mu_max, double tau);

/// True when power control can matter on the boundary part `e` with `antennas`
/// transmit antennas, i.e. antennas <= number of -1 entries of e. Otherwise
/// full power reaches every boundary point and Free weights use p = 1.
bool needs_power_control(Eigen::Index antennas, const DirectionVector& e);

/// A boundary beamformer of one transmitter's gain-region with its power level.
/// The realized covariance is power * direction direction^H.
struct BoundaryStrategy {
  CVec direction;
  double power = 0.0;
  SimplexWeight lambda;
  DirectionVector e;
  PowerClass power_class = PowerClass::Full;
  /// mu_max(Z(lambda, e)).
  double top_eigenvalue = 0.0;

  FeasibleCovariance covariance() const { return FeasibleCovariance::rank_one(direction, power); }
  /// sqrt(power) * direction.
  CVec beamformer() const { return std::sqrt(power) * direction; }
  GainTuple gains(std::span<const CVec> channels) const;
};

/// Direction = dominant eigenvector of Z(lambda, e) with the span(H) tie-break;
/// power = 1, p_free or 0 for the classes Full, Free and Zero.
BoundaryStrategy boundary_strategy(std::span<const CVec> channels, const SimplexWeight& lambda,
                                   const DirectionVector& e, double p_free = 1.0);

struct BoundarySample {
  SimplexWeight lambda;
  BoundaryStrategy strategy;
  GainTuple gains;
};

/// Power levels {0, 1/(m-1), ..., 1} used for Free-class points (m >= 2), or {1} for m = 1.
std::vector<double> free_power_levels(std::size_t samples);

/// Enumerates the simplex grid of spacing `step` (ascending lexicographic in
/// lambda). Free-class points expand into free_power_levels(p_free_samples)
/// when needs_power_control(N, e) holds, and use p = 1 otherwise. Output
/// order is lexicographic in lambda, then p.
std::vector<BoundarySample> sweep_boundary(std::span<const CVec> channels, const DirectionVector& e,
                                           double step, std::size_t p_free_samples = 11);

/// x dominates y in direction e: x_l e_l >= y_l e_l for all l, one strict.
bool dominates(std::span<const double> x, std::span<const double> y, const DirectionVector& e);

/// t Qx + (1 - t) Qy.
FeasibleCovariance segment_covariance(const FeasibleCovariance& qx, const FeasibleCovariance& qy,
                                      double t);

/// Q = P + (1 - tr P) Pi h h^H Pi / ||Pi h||^2 with Pi the projector onto the
/// orthogonal complement of all channels except `target`. Keeps every other
/// receiver's gain, raises the target gain, and uses the full power budget.
/// Requires N >= K, linearly independent channels, and trace(P) < 1.
FeasibleCovariance full_power_completion(const FeasibleCovariance& p,
                                         std::span<const CVec> channels, std::size_t target);

/// Random PSD covariance G G^H scaled to trace 1 (full_power) or to a uniform
/// trace in (0, 1). Rank defaults to a uniform draw in 1..N.
FeasibleCovariance random_feasible_covariance(std::uint64_t seed, Eigen::Index dim,
                                              std::optional<Eigen::Index> rank, bool full_power);

}  // namespace paretobf
