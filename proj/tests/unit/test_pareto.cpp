#include <gtest/gtest.h>

#include <cmath>

#include "paretobf/error.hpp"
#include "paretobf/pareto.hpp"
#include "paretobf/rng.hpp"

using namespace paretobf;

namespace {

std::vector<SimplexWeight> own_indicators(const Scenario& s) {
  std::vector<SimplexWeight> out;
  for (std::size_t t = 0; t < s.transmitter_count(); ++t) {
    out.push_back(SimplexWeight::indicator(s.receivers(), s.transmitter(t).intended.front()));
  }
  return out;
}

// log2(1 + |h_kk|^2 / (sigma^2 + sum_j |h_jk^H h_jj|^2 / |h_jj|^2))
std::vector<double> ne_rates(const Scenario& s) {
  const std::size_t k = s.receivers();
  std::vector<double> u(k);
  for (std::size_t r = 0; r < k; ++r) {
    double interference = 0.0;
    for (std::size_t j = 0; j < k; ++j) {
      if (j == r) continue;
      const CVec& own = s.channel(j, j);
      interference += std::norm(own.dot(s.channel(j, r))) / own.squaredNorm();
    }
    u[r] = std::log2(1.0 + s.channel(r, r).squaredNorm() / (s.noise_power() + interference));
  }
  return u;
}

std::vector<std::size_t> oracle_front(const std::vector<UtilityPoint>& pts) {
  std::vector<std::size_t> keep;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    bool dominated = false;
    for (std::size_t j = 0; j < pts.size(); ++j) {
      bool geq = true;
      bool strict = false;
      for (std::size_t c = 0; c < pts[i].size(); ++c) {
        geq = geq && pts[j][c] >= pts[i][c];
        strict = strict || pts[j][c] > pts[i][c];
      }
      if (geq && strict) dominated = true;
    }
    if (!dominated) keep.push_back(i);
  }
  return keep;
}

}  // namespace

TEST(RateGeneral, Examples) {
  const ReceiverUtility r{{0}, {1}};
  EXPECT_DOUBLE_EQ(rate_general(std::vector<double>{0.5, 0.0}, r, 0.5), 1.0);
  EXPECT_DOUBLE_EQ(rate_general(std::vector<double>{0.0, 0.0}, r, 0.5), 0.0);
  CounterRng rng(stream_key(1, "rates", 0));
  const ReceiverUtility multi{{0, 2}, {1, 3}};
  for (int i = 0; i < 50; ++i) {
    std::vector<double> g(4);
    for (double& x : g) x = 3.0 * rng.next_uniform();
    const double direct = std::log2(1.0 + (g[0] + g[2]) / (0.7 + g[1] + g[3]));
    EXPECT_NEAR(rate_general(g, multi, 0.7), direct, 1e-14);
  }
}

TEST(UtilitySpec, FromScenario) {
  const Scenario s = generate_channels(1, mixed_layout(1.0));
  const auto spec = UtilitySpec::from_scenario(s);
  EXPECT_EQ(spec.receivers[0].signal, (std::vector<std::size_t>{0}));
  EXPECT_EQ(spec.receivers[0].interference, (std::vector<std::size_t>{1, 2}));
  EXPECT_EQ(spec.receivers[1].signal, (std::vector<std::size_t>{1, 2}));
  EXPECT_EQ(spec.receivers[2].signal, (std::vector<std::size_t>{2}));
  UtilitySpec bad = spec;
  bad.receivers[0].interference.push_back(0);
  EXPECT_THROW(bad.validate(3), DomainError);
}

TEST(ParetoStrategies, AllMrtIsNashEquilibrium) {
  const Scenario s = generate_channels(3, ic_layout(3, 3, snr_to_noise(10)));
  const auto theta = ParameterPoint::with_lambdas(s, own_indicators(s));
  const auto strategies = pareto_strategies(s, theta);
  for (std::size_t k = 0; k < 3; ++k) {
    EXPECT_NEAR(std::norm(strategies[k].boundary.direction.dot(s.channel(k, k).normalized())), 1.0, 1e-12);
  }
  const auto u = evaluate_utilities(profile_gains(s, strategies), UtilitySpec::from_scenario(s));
  const auto ne = ne_rates(s);
  for (std::size_t k = 0; k < 3; ++k) EXPECT_NEAR(u[k], ne[k], 1e-12);
}

TEST(ParetoStrategies, ZeroForcingAnchor) {
  for (std::size_t users : {2u, 3u}) {
    for (Eigen::Index n = static_cast<Eigen::Index>(users); n <= 4; ++n) {
      const Scenario s = generate_channels(9 + n, ic_layout(users, n, 1.0));
      std::vector<SimplexWeight> lambdas;
      for (std::size_t k = 0; k < users; ++k) {
        std::vector<double> w(users, 1.0 / static_cast<double>(users - 1));
        w[k] = 0.0;
        lambdas.emplace_back(w);
      }
      const auto strategies = pareto_strategies(s, ParameterPoint::with_lambdas(s, lambdas));
      for (std::size_t k = 0; k < users; ++k) {
        for (std::size_t l = 0; l < users; ++l) {
          if (l == k) continue;
          const double cross = beamformer_gain(strategies[k].boundary.beamformer(), s.channel(k, l));
          EXPECT_LE(cross, 1e-12 * s.channel(k, l).squaredNorm());
        }
      }
    }
  }
}

TEST(ParetoStrategies, DegenerateSplitSilencesSecondMember) {
  const Scenario s = generate_channels(4, mixed_layout(snr_to_noise(15)));
  auto theta = ParameterPoint::with_lambdas(s, own_indicators(s));
  theta.splits[0] = SimplexWeight({1.0, 0.0});
  const auto strategies = pareto_strategies(s, theta);
  EXPECT_EQ(strategies[1].covariance().trace(), 0.0);
  const auto u = evaluate_utilities(profile_gains(s, strategies), UtilitySpec::from_scenario(s));
  const double only2 = beamformer_gain(strategies[2].boundary.beamformer(), s.channel(2, 1));
  const double interf = beamformer_gain(strategies[0].boundary.beamformer(), s.channel(0, 1));
  EXPECT_NEAR(u[1], std::log2(1.0 + only2 / (s.noise_power() + interf)), 1e-14);
  EXPECT_THROW(pareto_strategies(s, ParameterPoint::with_lambdas(s, {})), DimensionError);
}

TEST(SweepUtilityRegion, SizesAndBudget) {
  const Scenario ic2 = generate_channels(1, ic_layout(2, 2, 1.0));
  const auto spec2 = UtilitySpec::from_scenario(ic2);
  EXPECT_EQ(sweep_utility_region(ic2, spec2, {0.5, 11, 1000}).size(), 9u);

  const Scenario mixed = generate_channels(1, mixed_layout(1.0));
  EXPECT_EQ(utility_sweep_size(mixed, {0.1, 11, 10'000'000}), 66u * 66u * 66u * 11u);
  try {
    sweep_utility_region(mixed, UtilitySpec::from_scenario(mixed), {0.05, 11, 10'000'000});
    FAIL();
  } catch (const BudgetError& e) {
    const std::size_t exact = 231u * 231u * 231u * 21u;
    EXPECT_NE(std::string(e.what()).find(std::to_string(exact)), std::string::npos);
  }
}

TEST(SweepUtilityRegion, IndexingAndReproducibility) {
  const Scenario s = generate_channels(2, mixed_layout(snr_to_noise(15)));
  const auto spec = UtilitySpec::from_scenario(s);
  const auto cloud = sweep_utility_region(s, spec, {0.5, 3, 100000});
  EXPECT_EQ(cloud.size(), 6u * 6u * 6u * 3u);
  CounterRng rng(stream_key(1, "cloud", 0));
  for (int i = 0; i < 40; ++i) {
    const auto idx = static_cast<std::size_t>(rng.next_bits() % cloud.size());
    const auto d = cloud.digits(idx);
    EXPECT_EQ(cloud.index_of(d), idx);
    const auto u = evaluate_utilities(profile_gains(s, pareto_strategies(s, cloud.parameters(idx))), spec);
    for (std::size_t l = 0; l < 3; ++l) EXPECT_NEAR(u[l], cloud.utility(idx)[l], 1e-12);
  }
}

TEST(SweepUtilityRegion, MrtGridPointMatchesNashRates) {
  const Scenario s = generate_channels(8, ic_layout(3, 3, snr_to_noise(-10)));
  const auto cloud = sweep_utility_region(s, UtilitySpec::from_scenario(s), {0.1, 11, 10'000'000});
  std::vector<std::size_t> digits;
  for (std::size_t t = 0; t < 3; ++t) {
    const auto& c = cloud.candidates(t);
    const auto target = SimplexWeight::indicator(3, t);
    digits.push_back(static_cast<std::size_t>(
        std::find_if(c.begin(), c.end(), [&](const auto& x) { return x.strategy.lambda == target; }) -
        c.begin()));
  }
  for (std::size_t g = 0; g < 3; ++g) digits.push_back(0);
  const auto u = cloud.utility(cloud.index_of(digits));
  const auto ne = ne_rates(s);
  for (std::size_t k = 0; k < 3; ++k) EXPECT_NEAR(u[k], ne[k], 1e-12);
}

TEST(ParetoFilter, Examples) {
  const std::vector<UtilityPoint> pts{{1, 1}, {2, 0.5}, {1.5, 1.5}};
  EXPECT_EQ(pareto_filter(pts), (std::vector<std::size_t>{1, 2}));
  EXPECT_EQ(pareto_filter(std::vector<UtilityPoint>{{3, 4}}), (std::vector<std::size_t>{0}));
  EXPECT_EQ(pareto_filter(std::vector<UtilityPoint>{{1, 1}, {1, 1}}), (std::vector<std::size_t>{0, 1}));
  EXPECT_THROW(pareto_filter(std::vector<UtilityPoint>{{1, 1}, {1}}), DimensionError);
}

TEST(ParetoFilter, MatchesOracleOnRandomPoints) {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    CounterRng rng(stream_key(seed, "front", 0));
    std::vector<UtilityPoint> pts;
    for (int i = 0; i < 300; ++i) {
      if (i > 0 && rng.next_uniform() < 0.3) {
        UtilityPoint p = pts[rng.next_bits() % pts.size()];
        if (rng.next_uniform() < 0.5) p[rng.next_bits() % 3] -= 0.01;
        pts.push_back(p);
      } else {
        pts.push_back({std::round(rng.next_uniform() * 8), rng.next_uniform(), std::round(rng.next_uniform() * 8)});
      }
    }
    EXPECT_EQ(pareto_filter(pts), oracle_front(pts));
  }
}

TEST(ParetoFilter, CloudOverloadMatchesVectorOverload) {
  const Scenario s = generate_channels(5, ic_layout(3, 3, 1.0));
  const auto cloud = sweep_utility_region(s, UtilitySpec::from_scenario(s), {0.25, 11, 1'000'000});
  EXPECT_EQ(pareto_filter(cloud), pareto_filter(cloud.points()));
}

TEST(TwoUser, CombinationEndpoints) {
  CounterRng rng(stream_key(4, "two-user", 0));
  const CVec own = rng.complex_normal_vector(3);
  const CVec cross = rng.complex_normal_vector(3);
  const CVec mrt = two_user_combination(1.0, own, cross);
  EXPECT_LE((mrt - own.normalized()).norm(), 1e-15);
  const CVec zf = two_user_combination(0.0, own, cross);
  EXPECT_LE(std::norm(zf.dot(cross)), 1e-12 * cross.squaredNorm());
  EXPECT_THROW(zf_beamformer(own, own * Complex(0, 2)), RankDeficientError);
  EXPECT_THROW(two_user_combination(1.5, own, cross), DomainError);
}

TEST(TwoUser, IdentityResidual) {
  CounterRng rng(stream_key(5, "two-user", 0));
  for (int i = 0; i < 100; ++i) {
    const CVec h11 = rng.complex_normal_vector(3);
    const CVec h12 = rng.complex_normal_vector(3);
    EXPECT_LE(verify_two_user_identity(rng.next_uniform() * 0.999, h11, h12), 1e-9);
  }
  const CVec h11 = rng.complex_normal_vector(3);
  const CVec h12 = rng.complex_normal_vector(3);
  const double l1 = 1.0 - 1e-6;
  EXPECT_LE(verify_two_user_identity(l1, h11, h12), 1e-6);
  const std::vector<CVec> h{h11, h12};
  const auto top = dominant_eigvec(weighted_combination(h, SimplexWeight({l1, 1 - l1}), DirectionVector({1, -1})), h);
  EXPECT_GE(std::norm(top.vector.dot(h11.normalized())), 1.0 - 1e-4);
}
