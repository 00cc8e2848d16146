#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "paretobf/gain_region.hpp"
#include "paretobf/network.hpp"

namespace paretobf {

/// Utilities u_l of all receivers, in bits per channel use.
using UtilityPoint = std::vector<double>;

/// Rate of one receiver: log2(1 + sum_signal x / (sigma^2 + sum_interference x)).
/// Transmitter indices refer to Scenario transmitters.
struct ReceiverUtility {
  std::vector<std::size_t> signal;
  std::vector<std::size_t> interference;
};

/// Log-SINR utilities for every receiver plus the noise power. Signal and
/// interference sets are disjoint, which makes each u_l increasing in its
/// signal gains and decreasing in its interference gains.
struct UtilitySpec {
  std::vector<ReceiverUtility> receivers;
  double noise_power = 1.0;

  /// Signal set of receiver l = transmitters that intend l; interference set =
  /// every other transmitter. Reproduces the MISO IC rate and the
  /// broadcast/MAC/multicast example rates.
  static UtilitySpec from_scenario(const Scenario& s);
  void validate(std::size_t transmitters) const;
};

/// u_l from the gains of every transmitter at receiver l (gains_at_receiver[t]).
double rate_general(std::span<const double> gains_at_receiver, const ReceiverUtility& receiver,
                    double noise_power);

/// Utilities from per-transmitter gain tuples (gains[t][l]).
UtilityPoint evaluate_utilities(const std::vector<GainTuple>& gains, const UtilitySpec& spec);

/// One point of the joint strategy parametrization.
struct ParameterPoint {
  /// lambda_k per transmitter.
  std::vector<SimplexWeight> lambdas;
  /// Split of each power group's unit budget over its members (member order).
  std::vector<SimplexWeight> splits;
  /// Power level used when transmitter k's weight is Free class; ignored otherwise.
  std::vector<double> free_power;

  /// All-ones free power and equal splits: the defaults for `s`.
  static ParameterPoint with_lambdas(const Scenario& s, std::vector<SimplexWeight> lambdas);
};

struct TransmitterStrategy {
  BoundaryStrategy boundary;
  /// Fraction of the power group's budget assigned to this transmitter.
  double share = 1.0;

  /// share * power.
  double transmit_power() const { return share * boundary.power; }
  FeasibleCovariance covariance() const;
  GainTuple gains(std::span<const CVec> channels) const;
};

/// Per-transmitter Pareto-relevant boundary strategies for the parameters theta.
std::vector<TransmitterStrategy> pareto_strategies(const Scenario& s, const ParameterPoint& theta);

/// Gains of every transmitter at every receiver for a strategy profile.
std::vector<GainTuple> profile_gains(const Scenario& s,
                                     const std::vector<TransmitterStrategy>& strategies);

struct SweepOptions {
  double step = 0.1;
  /// Free-class power samples for transmitters that need power control.
  std::size_t free_power_samples = 11;
  std::size_t point_budget = 10'000'000;
};

/// Utility cloud over the Cartesian product of per-transmitter boundary
/// candidates and per-group split grids. Point i's parameters are recovered
/// from its mixed-radix index; enumeration order is lexicographic with
/// transmitter 0's candidates varying slowest and the last group's split
/// varying fastest.
class UtilityCloud {
 public:
  /// One boundary candidate of a transmitter: its weight, realized strategy
  /// (power already resolved) and unit-share gains.
  struct Candidate {
    BoundaryStrategy strategy;
    GainTuple gains;
  };

  std::size_t size() const { return count_; }
  std::size_t receivers() const { return receivers_; }
  std::size_t transmitters() const { return candidates_.size(); }
  std::size_t groups() const { return splits_.size(); }

  std::span<const double> utility(std::size_t i) const {
    return {utilities_.data() + i * receivers_, receivers_};
  }
  UtilityPoint utility_point(std::size_t i) const;
  std::vector<UtilityPoint> points() const;

  ParameterPoint parameters(std::size_t i) const;
  /// Candidate index per transmitter followed by split index per group.
  std::vector<std::size_t> digits(std::size_t i) const;
  /// Linear index of a digit tuple (inverse of digits()).
  std::size_t index_of(std::span<const std::size_t> digits) const;

  const std::vector<Candidate>& candidates(std::size_t t) const { return candidates_[t]; }
  const std::vector<SimplexWeight>& splits(std::size_t g) const { return splits_[g]; }

 private:
  friend UtilityCloud sweep_utility_region(const Scenario&, const UtilitySpec&,
                                           const SweepOptions&);
  std::size_t receivers_ = 0;
  std::size_t count_ = 0;
  std::vector<std::vector<Candidate>> candidates_;
  std::vector<std::vector<SimplexWeight>> splits_;
  std::vector<std::size_t> radix_;
  std::vector<double> utilities_;
};

/// Number of points sweep_utility_region would produce (no evaluation).
std::size_t utility_sweep_size(const Scenario& s, const SweepOptions& options);

/// Throws BudgetError (with the exact count) above options.point_budget.
UtilityCloud sweep_utility_region(const Scenario& s, const UtilitySpec& spec,
                                  const SweepOptions& options);

/// Indices (ascending) of points not dominated in the Pareto sense: no other
/// point is componentwise >= with one strict inequality. Exact duplicates are
/// all kept.
std::vector<std::size_t> pareto_filter(const std::vector<UtilityPoint>& points);
std::vector<std::size_t> pareto_filter(const UtilityCloud& cloud);

/// h / ||h||.
CVec mrt_beamformer(const CVec& h_own);
/// Pi^perp_{h_cross} h_own normalized; throws RankDeficientError when collinear.
CVec zf_beamformer(const CVec& h_own, const CVec& h_cross);

/// normalize(lambda_hat w_MRT + (1 - lambda_hat) w_ZF) for the two-user MISO IC.
CVec two_user_combination(double lambda_hat, const CVec& h_own, const CVec& h_cross);

/// Residual of the projector form of the two-user eigenvalue equation at the
/// dominant eigenvector w of lambda1 h11 h11^H - (1 - lambda1) h12 h12^H:
/// || (lambda1 ||h11||^2 Pi_h11 + (1-lambda1) ||h12||^2 Pi^perp_h12) w
///    - (mu + (1-lambda1) ||h12||^2) w ||.
double verify_two_user_identity(double lambda1, const CVec& h11, const CVec& h12);

}  // namespace paretobf
