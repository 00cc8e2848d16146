#include "paretobf_tools/verify.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "paretobf/error.hpp"
#include "paretobf/gain_region.hpp"
#include "paretobf/null_shaping.hpp"
#include "paretobf/pareto.hpp"
#include "paretobf/rng.hpp"

namespace paretobf::tools {

namespace {

CounterRng trial_rng(const VerifyOptions& o, const std::string& suite, std::size_t trial) {
  return CounterRng(stream_key(o.seed, "verify/" + suite, trial));
}

std::uint64_t trial_seed(const VerifyOptions& o, const std::string& label, std::size_t trial) {
  return stream_key(o.seed, "verify/" + label, trial);
}

std::vector<CVec> random_channels(CounterRng& rng, Eigen::Index n, std::size_t k) {
  std::vector<CVec> h;
  for (std::size_t l = 0; l < k; ++l) h.push_back(rng.complex_normal_vector(n));
  return h;
}

SimplexWeight random_simplex(CounterRng& rng, std::size_t k) {
  std::vector<double> w(k);
  double sum = 0.0;
  for (double& x : w) {
    x = -std::log(rng.next_uniform());
    sum += x;
  }
  double partial = 0.0;
  for (std::size_t l = 0; l + 1 < k; ++l) {
    w[l] /= sum;
    partial += w[l];
  }
  w[k - 1] = std::max(0.0, 1.0 - partial);
  return SimplexWeight(std::move(w));
}

std::size_t scenario_transmitter(const VerifyOptions& o) {
  if (o.transmitter.empty()) return 0;
  return o.scenario->transmitter_index(o.transmitter);
}

// Channels and direction for single-transmitter suites: the scenario's, or a
// fresh random draw of the suite's default shape.
struct Setup {
  std::vector<CVec> channels;
  DirectionVector e;
};

Setup setup_for(const VerifyOptions& o, CounterRng& rng, Eigen::Index n, const DirectionVector& e) {
  if (o.scenario) {
    const std::size_t t = scenario_transmitter(o);
    return {o.scenario->channels_of(t), direction_vector(o.scenario->transmitter(t),
                                                         o.scenario->receivers())};
  }
  return {random_channels(rng, n, e.size()), e};
}

std::string num(double x) {
  std::ostringstream os;
  os.precision(3);
  os << std::scientific << x;
  return os.str();
}

CheckResult at_most(std::string name, double measured, double tol, std::string detail = {}) {
  return {std::move(name), measured <= tol, measured, tol, std::move(detail)};
}

CheckResult at_least(std::string name, double measured, double tol, std::string detail = {}) {
  return {std::move(name), measured >= tol, measured, tol, std::move(detail)};
}

double objective(const SimplexWeight& lambda, const DirectionVector& e, const GainTuple& x) {
  double s = 0.0;
  for (std::size_t l = 0; l < x.size(); ++l) s += lambda[l] * e[l] * x[l];
  return s;
}

std::vector<CheckResult> convexity(const VerifyOptions& o, std::size_t trials) {
  double worst = 0.0;
  for (std::size_t i = 0; i < trials; ++i) {
    CounterRng rng = trial_rng(o, "convexity", i);
    const Setup s = setup_for(o, rng, 3, DirectionVector({1, -1, -1}));
    const Eigen::Index n = s.channels.front().size();
    const auto qx = random_feasible_covariance(trial_seed(o, "convexity/x", i), n, std::nullopt,
                                               rng.next_uniform() < 0.5);
    const auto qy = random_feasible_covariance(trial_seed(o, "convexity/y", i), n, std::nullopt,
                                               rng.next_uniform() < 0.5);
    const GainTuple x = gain_tuple(qx, s.channels);
    const GainTuple y = gain_tuple(qy, s.channels);
    const GainTuple mid = gain_tuple(segment_covariance(qx, qy, 0.5), s.channels);
    for (std::size_t l = 0; l < mid.size(); ++l) {
      worst = std::max(worst, std::abs(mid[l] - 0.5 * (x[l] + y[l])));
    }
  }
  return {at_most("convexity.segment-average", worst, 1e-12,
                  std::to_string(trials) + " covariance pairs at t = 0.5")};
}

std::vector<CheckResult> hyperplane(const VerifyOptions& o, std::size_t trials) {
  CounterRng rng = trial_rng(o, "hyperplane", 0);
  const Setup s = setup_for(o, rng, 3, DirectionVector({1, -1, -1}));
  const Eigen::Index n = s.channels.front().size();
  const auto grid = simplex_grid(s.channels.size(), 0.02);

  std::vector<double> bound(grid.size());
  double attain = 0.0;
  std::size_t full = 0;
  for (std::size_t g = 0; g < grid.size(); ++g) {
    const BoundaryStrategy b = boundary_strategy(s.channels, grid[g], s.e);
    bound[g] = std::max(0.0, b.top_eigenvalue);
    if (b.power_class == PowerClass::Full) {
      ++full;
      attain = std::max(attain, std::abs(objective(grid[g], s.e, b.gains(s.channels)) -
                                         b.top_eigenvalue));
    }
  }
  std::size_t violations = 0;
  double excess = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < trials; ++i) {
    const Eigen::Index rank = 1 + static_cast<Eigen::Index>(i % static_cast<std::size_t>(n));
    const auto q = random_feasible_covariance(trial_seed(o, "hyperplane/q", i), n, rank, i % 2 == 0);
    const GainTuple x = gain_tuple(q, s.channels);
    for (std::size_t g = 0; g < grid.size(); ++g) {
      const double gap = objective(grid[g], s.e, x) - bound[g];
      excess = std::max(excess, gap);
      if (gap > 1e-9) ++violations;
    }
  }
  return {at_most("hyperplane.violations", static_cast<double>(violations), 0.0,
                  std::to_string(trials) + " covariances x " + std::to_string(grid.size()) +
                      " weights, max excess " + num(excess)),
          at_most("hyperplane.full-class-attains", attain, 1e-9,
                  std::to_string(full) + " Full-class grid weights")};
}

std::vector<CheckResult> full_power(const VerifyOptions& o, std::size_t trials) {
  double trace_err = 0.0;
  double off_target = 0.0;
  double min_gain = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < trials; ++i) {
    CounterRng rng = trial_rng(o, "full-power", i);
    const Eigen::Index dim = i % 2 == 0 ? 2 : 3;
    std::vector<int> signs(static_cast<std::size_t>(dim), -1);
    signs[0] = 1;
    const Setup s = setup_for(o, rng, dim, DirectionVector(signs));
    const Eigen::Index n = s.channels.front().size();
    const double level = 0.05 + 0.9 * rng.next_uniform();
    const auto full = random_feasible_covariance(trial_seed(o, "full-power/p", i), n, std::nullopt, true);
    const FeasibleCovariance p(full.matrix() * level);
    const std::size_t target = i % s.channels.size();
    const auto q = full_power_completion(p, s.channels, target);
    trace_err = std::max(trace_err, std::abs(q.trace() - 1.0));
    const GainTuple before = gain_tuple(p, s.channels);
    const GainTuple after = gain_tuple(q, s.channels);
    for (std::size_t l = 0; l < before.size(); ++l) {
      if (l == target) {
        min_gain = std::min(min_gain, after[l] - before[l]);
      } else {
        off_target = std::max(off_target, std::abs(after[l] - before[l]));
      }
    }
  }
  return {at_most("full-power.trace", trace_err, 1e-12),
          at_most("full-power.off-target-unchanged", off_target, 1e-10),
          at_least("full-power.target-increase", min_gain, 1e-6)};
}

double alignment(const CVec& w, double lambda1, const CVec& h11, const CVec& h12) {
  const std::vector<CVec> h{h11, h12};
  const SimplexWeight lambda({lambda1, 1.0 - lambda1});
  const auto top = dominant_eigvec(weighted_combination(h, lambda, DirectionVector({1, -1})), h);
  return std::norm(w.dot(top.vector));
}

double best_alignment(const CVec& w, const CVec& h11, const CVec& h12) {
  constexpr int kGrid = 400;
  int best = 0;
  double best_value = -1.0;
  for (int j = 0; j <= kGrid; ++j) {
    const double v = alignment(w, static_cast<double>(j) / kGrid, h11, h12);
    if (v > best_value) {
      best_value = v;
      best = j;
    }
  }
  double a = std::max(0, best - 1) / static_cast<double>(kGrid);
  double b = std::min(kGrid, best + 1) / static_cast<double>(kGrid);
  const double ratio = (std::sqrt(5.0) - 1.0) / 2.0;
  double c = b - ratio * (b - a);
  double d = a + ratio * (b - a);
  double fc = alignment(w, c, h11, h12);
  double fd = alignment(w, d, h11, h12);
  for (int it = 0; it < 200 && b - a > 1e-15; ++it) {
    if (fc > fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - ratio * (b - a);
      fc = alignment(w, c, h11, h12);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + ratio * (b - a);
      fd = alignment(w, d, h11, h12);
    }
  }
  return std::max({best_value, fc, fd});
}

std::vector<CheckResult> two_user(const VerifyOptions& o, std::size_t trials) {
  auto pair = [&](CounterRng& rng, Eigen::Index n) -> std::pair<CVec, CVec> {
    if (o.scenario) {
      const std::size_t t = scenario_transmitter(o);
      const auto& tx = o.scenario->transmitter(t);
      if (tx.unintended.empty()) throw DomainError("two-user suite needs an unintended receiver");
      return {o.scenario->channel(t, tx.intended.front()),
              o.scenario->channel(t, tx.unintended.front())};
    }
    return {rng.complex_normal_vector(n), rng.complex_normal_vector(n)};
  };
  double residual = 0.0;
  for (std::size_t i = 0; i < trials; ++i) {
    CounterRng rng = trial_rng(o, "two-user", i);
    const auto [h11, h12] = pair(rng, 2 + static_cast<Eigen::Index>(i % 3));
    residual = std::max(residual, verify_two_user_identity(rng.next_uniform() * (1.0 - 1e-12),
                                                           h11, h12));
  }
  constexpr std::size_t kHats = 50;
  double worst_align = 1.0;
  for (std::size_t j = 0; j < kHats; ++j) {
    CounterRng rng = trial_rng(o, "two-user/align", j);
    const auto [h11, h12] = pair(rng, 2 + static_cast<Eigen::Index>(j % 3));
    const double hat = static_cast<double>(j) / static_cast<double>(kHats - 1);
    const CVec w = two_user_combination(hat, h11, h12);
    worst_align = std::min(worst_align, best_alignment(w, h11, h12));
  }
  return {at_most("two-user.identity-residual", residual, 1e-9,
                  std::to_string(trials) + " draws at N in {2,3,4}"),
          at_least("two-user.combination-alignment", worst_align, 1.0 - 1e-6,
                   std::to_string(kHats) + " lambda_hat values")};
}

std::vector<CheckResult> null_shaping(const VerifyOptions& o, std::size_t trials) {
  constexpr std::size_t kProbes = 50;
  double equiv = 0.0;
  double annihilation = 0.0;
  double completeness = 0.0;
  bool sign_ok = true;
  bool zero_count_ok = true;
  auto run = [&](const std::vector<CVec>& h, const SimplexWeight& lambda, const DirectionVector& e,
                 std::uint64_t seed) {
    equiv = std::max(equiv, verify_gain_equivalence(h, lambda, e, kProbes, seed));
    const NullConstraintSet z = null_constraints(h, lambda, e);
    const EigenStructureReport r = check_eigen_structure(h, z);
    sign_ok = sign_ok && r.negative_part && r.zero_part;
    const std::size_t expected =
        static_cast<std::size_t>(h.front().size()) - e.negative_count() - e.positive_count();
    zero_count_ok = zero_count_ok && r.zero_count >= expected;
    annihilation = std::max(annihilation, r.max_annihilation);
    completeness = std::max(completeness, r.completeness);
  };
  for (std::size_t i = 0; i < trials; ++i) {
    CounterRng rng = trial_rng(o, "null-shaping", i);
    const Setup s = setup_for(o, rng, 4, DirectionVector({1, -1, -1}));
    run(s.channels, random_simplex(rng, s.channels.size()), s.e, trial_seed(o, "null-shaping/g", i));
  }
  // weight concentrated on one unintended receiver: repeated top eigenvalue
  {
    CounterRng rng = trial_rng(o, "null-shaping/degenerate", 0);
    const Setup s = setup_for(o, rng, 4, DirectionVector({1, -1, -1}));
    for (std::size_t l = 0; l < s.e.size(); ++l) {
      if (s.e[l] < 0) {
        run(s.channels, SimplexWeight::indicator(s.channels.size(), l), s.e,
            trial_seed(o, "null-shaping/degenerate", l));
      }
    }
  }
  return {at_most("null-shaping.gain-equivalence", equiv, 1e-8,
                  std::to_string(trials) + " weights x " + std::to_string(kProbes) + " probes"),
          {"null-shaping.eigen-sign-structure", sign_ok, sign_ok ? 0.0 : 1.0, 0.0, ""},
          {"null-shaping.zero-count", zero_count_ok, zero_count_ok ? 0.0 : 1.0, 0.0, ""},
          at_most("null-shaping.dropped-annihilate", annihilation, 1e-9),
          at_most("null-shaping.completeness", completeness, 1e-10)};
}

std::vector<std::size_t> brute_force_front(const std::vector<UtilityPoint>& pts) {
  std::vector<std::size_t> keep;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    bool dominated = false;
    for (std::size_t j = 0; j < pts.size() && !dominated; ++j) {
      bool geq = true;
      bool strict = false;
      for (std::size_t c = 0; c < pts[i].size(); ++c) {
        geq = geq && pts[j][c] >= pts[i][c];
        strict = strict || pts[j][c] > pts[i][c];
      }
      dominated = geq && strict;
    }
    if (!dominated) keep.push_back(i);
  }
  return keep;
}

std::vector<CheckResult> pareto_oracle(const VerifyOptions& o, std::size_t trials) {
  CounterRng rng = trial_rng(o, "pareto-oracle", 0);
  std::vector<UtilityPoint> pts;
  while (pts.size() < trials) {
    const double r = rng.next_uniform();
    if (pts.empty() || r < 0.6) {
      UtilityPoint p(3);
      // half on a coarse lattice so equal coordinates are common
      const bool lattice = rng.next_uniform() < 0.5;
      for (double& x : p) x = lattice ? std::floor(rng.next_uniform() * 10.0) / 10.0 : rng.next_uniform();
      pts.push_back(p);
    } else {
      const auto src = static_cast<std::size_t>(rng.next_uniform() * static_cast<double>(pts.size())) %
                       pts.size();
      UtilityPoint p = pts[src];
      if (r < 0.8) {
        pts.push_back(p);  // duplicate
      } else {
        const auto c = static_cast<std::size_t>(rng.next_uniform() * 3.0) % 3;
        p[c] -= 0.05 * rng.next_uniform();  // weakly dominated by its source
        pts.push_back(p);
      }
    }
  }
  const auto fast = pareto_filter(pts);
  const auto oracle = brute_force_front(pts);
  const bool same = fast == oracle;
  return {{"pareto-oracle.identical", same, same ? 0.0 : 1.0, 0.0,
           std::to_string(pts.size()) + " points, " + std::to_string(oracle.size()) +
               " nondominated"}};
}

std::vector<CheckResult> power_rule_suite(const VerifyOptions& o, std::size_t trials) {
  std::size_t mismatches = 0;
  double shortfall = -std::numeric_limits<double>::infinity();
  double free_flat = 0.0;
  std::size_t free_cases = 0;
  for (std::size_t i = 0; i < trials; ++i) {
    CounterRng rng = trial_rng(o, "power-rule", i);
    const Setup s = setup_for(o, rng, 2, DirectionVector({1, -1, -1}));
    SimplexWeight lambda = random_simplex(rng, s.channels.size());
    if (i % 5 == 4) {
      // face where only one receiver carries weight: Free for an unintended one
      lambda = SimplexWeight::indicator(s.channels.size(), i / 5 % s.channels.size());
    }
    const HermitianMatrix z = weighted_combination(s.channels, lambda, s.e);
    const EigenSystem es = eig_hermitian(z);
    const double tau = zero_tolerance(z);
    const double mu = es.max_value();
    const PowerClass expected = mu > tau ? PowerClass::Full : (mu < -tau ? PowerClass::Zero : PowerClass::Free);
    const BoundaryStrategy b = boundary_strategy(s.channels, lambda, s.e, rng.next_uniform());
    if (b.power_class != expected) ++mismatches;
    auto obj = [&](double p) {
      BoundaryStrategy c = b;
      c.power = p;
      return objective(lambda, s.e, c.gains(s.channels));
    };
    const double chosen = objective(lambda, s.e, b.gains(s.channels));
    shortfall = std::max({shortfall, obj(0.0) - chosen, obj(1.0) - chosen});
    if (b.power_class == PowerClass::Free) {
      ++free_cases;
      free_flat = std::max(free_flat, std::abs(obj(1.0) - obj(0.0)));
    }
  }
  return {at_most("power-rule.classification", static_cast<double>(mismatches), 0.0),
          at_most("power-rule.chosen-power-optimal", shortfall, 1e-9),
          at_most("power-rule.free-flat", free_flat, 1e-8,
                  std::to_string(free_cases) + " Free-class cases")};
}

}  // namespace

const std::vector<std::string>& suite_names() {
  static const std::vector<std::string> names{"convexity",    "hyperplane",    "full-power",
                                              "two-user",     "null-shaping",  "pareto-oracle",
                                              "power-rule"};
  return names;
}

std::size_t default_trials(const std::string& suite) {
  if (suite == "convexity") return 1000;
  if (suite == "hyperplane") return 100000;
  if (suite == "full-power") return 500;
  if (suite == "two-user") return 100;
  if (suite == "null-shaping") return 200;
  if (suite == "pareto-oracle") return 1000;
  if (suite == "power-rule") return 500;
  throw std::invalid_argument("unknown suite '" + suite + "'");
}

std::vector<CheckResult> run_suite(const std::string& suite, const VerifyOptions& options) {
  const std::size_t trials = options.trials ? options.trials : default_trials(suite);
  if (suite == "convexity") return convexity(options, trials);
  if (suite == "hyperplane") return hyperplane(options, trials);
  if (suite == "full-power") return full_power(options, trials);
  if (suite == "two-user") return two_user(options, trials);
  if (suite == "null-shaping") return null_shaping(options, trials);
  if (suite == "pareto-oracle") return pareto_oracle(options, trials);
  if (suite == "power-rule") return power_rule_suite(options, trials);
  throw std::invalid_argument("unknown suite '" + suite + "'");
}

}  // namespace paretobf::tools
