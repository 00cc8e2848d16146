#include "paretobf/pareto.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "paretobf/error.hpp"

namespace paretobf {

UtilitySpec UtilitySpec::from_scenario(const Scenario& s) {
  UtilitySpec spec;
  spec.noise_power = s.noise_power();
  spec.receivers.resize(s.receivers());
  for (std::size_t t = 0; t < s.transmitter_count(); ++t) {
    const auto& intended = s.transmitter(t).intended;
    for (std::size_t l = 0; l < s.receivers(); ++l) {
      if (std::binary_search(intended.begin(), intended.end(), l)) {
        spec.receivers[l].signal.push_back(t);
      } else {
        spec.receivers[l].interference.push_back(t);
      }
    }
  }
  return spec;
}

void UtilitySpec::validate(std::size_t transmitters) const {
  if (!(noise_power > 0.0) || !std::isfinite(noise_power)) {
    throw DomainError("noise power must be positive and finite");
  }
  for (std::size_t l = 0; l < receivers.size(); ++l) {
    std::vector<bool> seen(transmitters, false);
    auto mark = [&](const std::vector<std::size_t>& set) {
      for (std::size_t t : set) {
        if (t >= transmitters) {
          throw DomainError("utility of receiver " + std::to_string(l + 1) +
                            " references unknown transmitter index " + std::to_string(t));
        }
        if (seen[t]) {
          throw DomainError("utility of receiver " + std::to_string(l + 1) +
                            ": signal and interference sets overlap");
        }
        seen[t] = true;
      }
    };
    mark(receivers[l].signal);
    mark(receivers[l].interference);
  }
}

double rate_general(std::span<const double> gains_at_receiver, const ReceiverUtility& receiver,
                    double noise_power) {
  if (!(noise_power > 0.0)) throw DomainError("noise power must be positive");
  double signal = 0.0;
  double interference = 0.0;
  for (std::size_t t : receiver.signal) signal += gains_at_receiver[t];
  for (std::size_t t : receiver.interference) interference += gains_at_receiver[t];
  return std::log2(1.0 + signal / (noise_power + interference));
}

UtilityPoint evaluate_utilities(const std::vector<GainTuple>& gains, const UtilitySpec& spec) {
  UtilityPoint u(spec.receivers.size());
  std::vector<double> at_receiver(gains.size());
  for (std::size_t l = 0; l < spec.receivers.size(); ++l) {
    for (std::size_t t = 0; t < gains.size(); ++t) at_receiver[t] = gains[t].at(l);
    u[l] = rate_general(at_receiver, spec.receivers[l], spec.noise_power);
  }
  return u;
}

ParameterPoint ParameterPoint::with_lambdas(const Scenario& s, std::vector<SimplexWeight> lambdas) {
  ParameterPoint theta;
  theta.lambdas = std::move(lambdas);
  for (std::size_t g = 0; g < s.power_groups().size(); ++g) {
    std::vector<std::size_t> all(s.group_members(g).size());
    std::iota(all.begin(), all.end(), std::size_t{0});
    theta.splits.push_back(SimplexWeight::uniform_over(all.size(), all));
  }
  theta.free_power.assign(s.transmitter_count(), 1.0);
  return theta;
}

FeasibleCovariance TransmitterStrategy::covariance() const {
  return FeasibleCovariance::rank_one(boundary.direction, transmit_power());
}

GainTuple TransmitterStrategy::gains(std::span<const CVec> channels) const {
  GainTuple x = boundary.gains(channels);
  for (double& v : x) v *= share;
  return x;
}

namespace {

std::size_t position_in_group(const Scenario& s, std::size_t t) {
  const auto& members = s.group_members(s.group_of(t));
  return static_cast<std::size_t>(std::find(members.begin(), members.end(), t) - members.begin());
}

void check_parameters(const Scenario& s, const ParameterPoint& theta) {
  if (theta.lambdas.size() != s.transmitter_count()) {
    throw DimensionError("parameter point has " + std::to_string(theta.lambdas.size()) +
                         " weights for " + std::to_string(s.transmitter_count()) + " transmitters");
  }
  if (theta.splits.size() != s.power_groups().size()) {
    throw DimensionError("parameter point has " + std::to_string(theta.splits.size()) +
                         " splits for " + std::to_string(s.power_groups().size()) + " power groups");
  }
  if (theta.free_power.size() != s.transmitter_count()) {
    throw DimensionError("parameter point free power list does not match transmitters");
  }
  for (std::size_t g = 0; g < theta.splits.size(); ++g) {
    if (theta.splits[g].size() != s.group_members(g).size()) {
      throw DimensionError("split of power group '" + s.power_groups()[g].id +
                           "' does not match its member count");
    }
  }
  for (std::size_t t = 0; t < theta.lambdas.size(); ++t) {
    if (theta.lambdas[t].size() != s.receivers()) {
      throw DimensionError("weight of transmitter '" + s.transmitter(t).id +
                           "' does not match the receiver count");
    }
  }
}

}  // namespace

std::vector<TransmitterStrategy> pareto_strategies(const Scenario& s, const ParameterPoint& theta) {
  check_parameters(s, theta);
  std::vector<TransmitterStrategy> out;
  out.reserve(s.transmitter_count());
  for (std::size_t t = 0; t < s.transmitter_count(); ++t) {
    const auto& tx = s.transmitter(t);
    const DirectionVector e = direction_vector(tx, s.receivers());
    const double p_free = needs_power_control(tx.antennas, e) ? theta.free_power[t] : 1.0;
    BoundaryStrategy b = boundary_strategy(s.channels_of(t), theta.lambdas[t], e, p_free);
    const double share = theta.splits[s.group_of(t)][position_in_group(s, t)];
    out.push_back({std::move(b), share});
  }
  return out;
}

std::vector<GainTuple> profile_gains(const Scenario& s,
                                     const std::vector<TransmitterStrategy>& strategies) {
  if (strategies.size() != s.transmitter_count()) {
    throw DimensionError("strategy profile does not match the transmitter count");
  }
  std::vector<GainTuple> gains;
  gains.reserve(strategies.size());
  for (std::size_t t = 0; t < strategies.size(); ++t) {
    gains.push_back(strategies[t].gains(s.channels_of(t)));
  }
  return gains;
}

UtilityPoint UtilityCloud::utility_point(std::size_t i) const {
  const auto u = utility(i);
  return {u.begin(), u.end()};
}

std::vector<UtilityPoint> UtilityCloud::points() const {
  std::vector<UtilityPoint> out;
  out.reserve(count_);
  for (std::size_t i = 0; i < count_; ++i) out.push_back(utility_point(i));
  return out;
}

std::vector<std::size_t> UtilityCloud::digits(std::size_t i) const {
  if (i >= count_) throw DomainError("utility cloud index out of range");
  std::vector<std::size_t> d(radix_.size());
  for (std::size_t pos = radix_.size(); pos-- > 0;) {
    d[pos] = i % radix_[pos];
    i /= radix_[pos];
  }
  return d;
}

std::size_t UtilityCloud::index_of(std::span<const std::size_t> digits) const {
  if (digits.size() != radix_.size()) throw DimensionError("digit tuple has the wrong length");
  std::size_t i = 0;
  for (std::size_t pos = 0; pos < radix_.size(); ++pos) {
    if (digits[pos] >= radix_[pos]) throw DomainError("digit out of range");
    i = i * radix_[pos] + digits[pos];
  }
  return i;
}

ParameterPoint UtilityCloud::parameters(std::size_t i) const {
  const auto d = digits(i);
  ParameterPoint theta;
  for (std::size_t t = 0; t < candidates_.size(); ++t) {
    const auto& b = candidates_[t][d[t]].strategy;
    theta.lambdas.push_back(b.lambda);
    theta.free_power.push_back(b.power_class == PowerClass::Free ? b.power : 1.0);
  }
  for (std::size_t g = 0; g < splits_.size(); ++g) {
    theta.splits.push_back(splits_[g][d[candidates_.size() + g]]);
  }
  return theta;
}

namespace {

std::size_t checked_product(std::size_t a, std::size_t b) {
  if (a != 0 && b > std::numeric_limits<std::size_t>::max() / a) {
    throw BudgetError("utility sweep size overflows");
  }
  return a * b;
}

std::vector<std::size_t> radices(const Scenario& s, const SweepOptions& options) {
  const std::size_t n = grid_divisions(options.step);
  std::vector<std::size_t> r;
  for (std::size_t t = 0; t < s.transmitter_count(); ++t) {
    // upper bound: only Free points expand into power levels
    const auto& tx = s.transmitter(t);
    std::size_t c = simplex_grid_size(s.receivers(), n);
    if (needs_power_control(tx.antennas, direction_vector(tx, s.receivers()))) {
      c = checked_product(c, std::max<std::size_t>(options.free_power_samples, 1));
    }
    r.push_back(c);
  }
  for (std::size_t g = 0; g < s.power_groups().size(); ++g) {
    r.push_back(simplex_grid_size(s.group_members(g).size(), n));
  }
  return r;
}

}  // namespace

std::size_t utility_sweep_size(const Scenario& s, const SweepOptions& options) {
  const std::size_t n = grid_divisions(options.step);
  std::size_t count = 1;
  for (std::size_t t = 0; t < s.transmitter_count(); ++t) {
    const auto& tx = s.transmitter(t);
    const DirectionVector e = direction_vector(tx, s.receivers());
    std::size_t c = simplex_grid_size(s.receivers(), n);
    if (needs_power_control(tx.antennas, e)) {
      c = sweep_boundary(s.channels_of(t), e, options.step, options.free_power_samples).size();
    }
    count = checked_product(count, c);
  }
  for (std::size_t g = 0; g < s.power_groups().size(); ++g) {
    count = checked_product(count, simplex_grid_size(s.group_members(g).size(), n));
  }
  return count;
}

UtilityCloud sweep_utility_region(const Scenario& s, const UtilitySpec& spec,
                                  const SweepOptions& options) {
  spec.validate(s.transmitter_count());
  if (spec.receivers.size() != s.receivers()) {
    throw DimensionError("utility spec does not match the receiver count");
  }
  // cheap bound first so oversized grids are refused before any eigen work
  std::size_t bound = 1;
  for (std::size_t r : radices(s, options)) bound = checked_product(bound, r);
  if (bound > options.point_budget) {
    const std::size_t exact = utility_sweep_size(s, options);
    if (exact > options.point_budget) {
      throw BudgetError("utility sweep has " + std::to_string(exact) +
                        " points, above the point budget of " +
                        std::to_string(options.point_budget));
    }
  }

  UtilityCloud cloud;
  cloud.receivers_ = s.receivers();
  for (std::size_t t = 0; t < s.transmitter_count(); ++t) {
    const DirectionVector e = direction_vector(s.transmitter(t), s.receivers());
    auto samples = sweep_boundary(s.channels_of(t), e, options.step, options.free_power_samples);
    std::vector<UtilityCloud::Candidate> cands;
    cands.reserve(samples.size());
    for (auto& sample : samples) cands.push_back({std::move(sample.strategy), std::move(sample.gains)});
    cloud.radix_.push_back(cands.size());
    cloud.candidates_.push_back(std::move(cands));
  }
  for (std::size_t g = 0; g < s.power_groups().size(); ++g) {
    cloud.splits_.push_back(simplex_grid(s.group_members(g).size(), options.step));
    cloud.radix_.push_back(cloud.splits_.back().size());
  }
  cloud.count_ = 1;
  for (std::size_t r : cloud.radix_) cloud.count_ *= r;

  const std::size_t tx_count = s.transmitter_count();
  const std::size_t k = s.receivers();
  std::vector<double> share(tx_count, 1.0);
  std::vector<std::size_t> slot(tx_count);
  for (std::size_t t = 0; t < tx_count; ++t) slot[t] = position_in_group(s, t);

  cloud.utilities_.resize(cloud.count_ * k);
  std::vector<std::size_t> d(cloud.radix_.size(), 0);
  std::vector<double> at_receiver(tx_count);
  for (std::size_t i = 0; i < cloud.count_; ++i) {
    for (std::size_t t = 0; t < tx_count; ++t) {
      share[t] = cloud.splits_[s.group_of(t)][d[tx_count + s.group_of(t)]][slot[t]];
    }
    for (std::size_t l = 0; l < k; ++l) {
      for (std::size_t t = 0; t < tx_count; ++t) {
        at_receiver[t] = share[t] * cloud.candidates_[t][d[t]].gains[l];
      }
      cloud.utilities_[i * k + l] = rate_general(at_receiver, spec.receivers[l], spec.noise_power);
    }
    // odometer, last digit fastest
    for (std::size_t pos = d.size(); pos-- > 0;) {
      if (++d[pos] < cloud.radix_[pos]) break;
      d[pos] = 0;
    }
  }
  return cloud;
}

namespace {

std::vector<std::size_t> pareto_filter_flat(const double* data, std::size_t n, std::size_t dim) {
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  auto row = [&](std::size_t i) { return data + i * dim; };
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return std::lexicographical_compare(row(b), row(b) + dim, row(a), row(a) + dim);
  });
  // a point can only be dominated by points preceding it in descending
  // lexicographic order, and any dominated predecessor is itself dominated by
  // a front member, so checking against the running front is exact.
  std::vector<std::size_t> front;
  std::vector<std::size_t> kept;
  for (std::size_t i : order) {
    const double* p = row(i);
    bool dominated = false;
    for (std::size_t f = 0; f < front.size(); ++f) {
      const double* q = row(front[f]);
      bool geq = true;
      bool strict = false;
      for (std::size_t c = 0; c < dim; ++c) {
        if (q[c] < p[c]) {
          geq = false;
          break;
        }
        if (q[c] > p[c]) strict = true;
      }
      if (geq && strict) {
        dominated = true;
        if (f != 0) std::swap(front[f], front[0]);
        break;
      }
    }
    if (!dominated) {
      front.push_back(i);
      kept.push_back(i);
    }
  }
  std::sort(kept.begin(), kept.end());
  return kept;
}

}  // namespace

std::vector<std::size_t> pareto_filter(const std::vector<UtilityPoint>& points) {
  if (points.empty()) return {};
  const std::size_t dim = points.front().size();
  std::vector<double> flat;
  flat.reserve(points.size() * dim);
  for (const auto& p : points) {
    if (p.size() != dim) throw DimensionError("utility points of different dimensions");
    flat.insert(flat.end(), p.begin(), p.end());
  }
  return pareto_filter_flat(flat.data(), points.size(), dim);
}

std::vector<std::size_t> pareto_filter(const UtilityCloud& cloud) {
  if (cloud.size() == 0) return {};
  return pareto_filter_flat(cloud.utility(0).data(), cloud.size(), cloud.receivers());
}

CVec mrt_beamformer(const CVec& h_own) {
  const double n = h_own.norm();
  if (n == 0.0) throw DomainError("MRT undefined for a zero channel");
  return h_own / n;
}

CVec zf_beamformer(const CVec& h_own, const CVec& h_cross) {
  if (h_own.size() != h_cross.size()) throw DimensionError("channels of different dimensions");
  const CVec u = projector_complement(as_columns(std::span<const CVec>(&h_cross, 1),
                                                 h_cross.size()))
                     .apply(h_own);
  if (u.norm() <= 1e-12 * h_own.norm()) {
    throw RankDeficientError("own and cross channels are collinear; zero-forcing direction vanishes");
  }
  return u.normalized();
}

CVec two_user_combination(double lambda_hat, const CVec& h_own, const CVec& h_cross) {
  if (!(lambda_hat >= 0.0) || lambda_hat > 1.0) throw DomainError("lambda_hat must lie in [0, 1]");
  if (h_own.size() < 2) throw DimensionError("two-user combination needs N >= 2");
  const CVec w = lambda_hat * mrt_beamformer(h_own) + (1.0 - lambda_hat) * zf_beamformer(h_own, h_cross);
  return w.normalized();
}

double verify_two_user_identity(double lambda1, const CVec& h11, const CVec& h12) {
  if (!(lambda1 >= 0.0) || lambda1 > 1.0) throw DomainError("lambda1 must lie in [0, 1]");
  if (h11.size() != h12.size()) throw DimensionError("channels of different dimensions");
  const std::vector<CVec> channels{h11, h12};
  const SimplexWeight lambda({lambda1, 1.0 - lambda1});
  const DirectionVector e({1, -1});
  const DominantEigenvector top = dominant_eigvec(weighted_combination(channels, lambda, e), channels);
  const Eigen::Index n = h11.size();
  const CMat pi_own = projector_onto(as_columns(std::span<const CVec>(&h11, 1), n)).matrix;
  const CMat perp_cross = projector_complement(as_columns(std::span<const CVec>(&h12, 1), n)).matrix;
  const double g11 = h11.squaredNorm();
  const double g12 = h12.squaredNorm();
  const CVec lhs = (lambda1 * g11 * pi_own + (1.0 - lambda1) * g12 * perp_cross) * top.vector;
  const CVec rhs = (top.eigenvalue + (1.0 - lambda1) * g12) * top.vector;
  return (lhs - rhs).norm();
}

}  // namespace paretobf
