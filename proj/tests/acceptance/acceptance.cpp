// Acceptance checks. Every oracle below is computed here from first
// principles (direct quadratic forms, a separate eigen solve, brute-force
// scans) and compared against the library's answer.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <limits>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "paretobf/gain_region.hpp"
#include "paretobf/network.hpp"
#include "paretobf/null_shaping.hpp"
#include "paretobf/pareto.hpp"
#include "paretobf/rng.hpp"

using namespace paretobf;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

struct Outcome {
  bool passed;
  std::string detail;
};

std::string fmt(const char* f, double a) {
  char buf[128];
  std::snprintf(buf, sizeof buf, f, a);
  return buf;
}

// --- oracles -----------------------------------------------------------------

double quad_gain(const CMat& q, const CVec& h) { return (h.adjoint() * q * h).value().real(); }

CMat combination(const std::vector<CVec>& h, const std::vector<double>& lambda,
                 const std::vector<int>& e) {
  const Eigen::Index n = h.front().size();
  CMat z = CMat::Zero(n, n);
  for (std::size_t l = 0; l < h.size(); ++l) z += lambda[l] * e[l] * h[l] * h[l].adjoint();
  return (z + z.adjoint()) * 0.5;
}

double top_eigenvalue(const CMat& z) {
  Eigen::SelfAdjointEigenSolver<CMat> es(z, Eigen::EigenvaluesOnly);
  return es.eigenvalues().maxCoeff();
}

double objective(const std::vector<double>& lambda, const std::vector<int>& e,
                 const std::vector<double>& x) {
  double s = 0.0;
  for (std::size_t l = 0; l < x.size(); ++l) s += lambda[l] * e[l] * x[l];
  return s;
}

std::vector<CVec> draw_channels(CounterRng& rng, Eigen::Index n, std::size_t k) {
  std::vector<CVec> h;
  for (std::size_t l = 0; l < k; ++l) h.push_back(rng.complex_normal_vector(n));
  return h;
}

std::vector<double> random_simplex(CounterRng& rng, std::size_t k) {
  std::vector<double> w(k);
  double sum = 0.0;
  for (double& x : w) sum += (x = -std::log(rng.next_uniform()));
  double partial = 0.0;
  for (std::size_t l = 0; l + 1 < k; ++l) partial += (w[l] /= sum);
  w[k - 1] = std::max(0.0, 1.0 - partial);
  return w;
}

std::vector<std::size_t> brute_force_front(const std::vector<std::vector<double>>& pts) {
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

// --- criteria ----------------------------------------------------------------

Outcome convexity() {
  const auto t0 = Clock::now();
  CounterRng rng(stream_key(101, "acceptance/convexity", 0));
  double worst = 0.0;
  for (std::uint64_t i = 0; i < 1000; ++i) {
    const auto h = draw_channels(rng, 3, 3);
    const auto qx = random_feasible_covariance(stream_key(101, "qx", i), 3, std::nullopt, i % 2 == 0);
    const auto qy = random_feasible_covariance(stream_key(101, "qy", i), 3, std::nullopt, i % 3 == 0);
    const auto mid = segment_covariance(qx, qy, 0.5);
    for (const auto& g : h) {
      const double avg = 0.5 * (quad_gain(qx.matrix(), g) + quad_gain(qy.matrix(), g));
      worst = std::max(worst, std::abs(power_gain(mid, g) - avg));
    }
  }
  const double secs = seconds_since(t0);
  return {worst <= 1e-12 && secs < 5.0,
          "1000 pairs, max |x(mid) - avg| = " + fmt("%.3e", worst) + " (tol 1e-12), " +
              fmt("%.2f", secs) + " s (limit 5 s)"};
}

Outcome hyperplane() {
  const auto t0 = Clock::now();
  CounterRng rng(stream_key(202, "acceptance/hyperplane", 0));
  const auto h = draw_channels(rng, 3, 3);
  const std::vector<int> e{1, -1, -1};
  const DirectionVector dir(e);
  const auto grid = simplex_grid(3, 0.02);
  std::vector<double> bound(grid.size());
  double attain = 0.0;
  std::size_t full = 0;
  for (std::size_t g = 0; g < grid.size(); ++g) {
    const double mu = top_eigenvalue(combination(h, grid[g].values(), e));
    bound[g] = std::max(0.0, mu);
    const BoundaryStrategy b = boundary_strategy(h, grid[g], dir);
    if (b.power_class == PowerClass::Full) {
      ++full;
      const CMat q = b.power * b.direction * b.direction.adjoint();
      std::vector<double> x;
      for (const auto& c : h) x.push_back(quad_gain(q, c));
      attain = std::max(attain, std::abs(objective(grid[g].values(), e, x) - mu));
    }
  }
  std::size_t violations = 0;
  std::vector<double> x(3);
  for (std::uint64_t i = 0; i < 100000; ++i) {
    const Eigen::Index rank = 1 + static_cast<Eigen::Index>(i % 3);
    const auto q = random_feasible_covariance(stream_key(202, "q", i), 3, rank, i % 2 == 0);
    for (std::size_t l = 0; l < 3; ++l) x[l] = quad_gain(q.matrix(), h[l]);
    for (std::size_t g = 0; g < grid.size(); ++g) {
      if (objective(grid[g].values(), e, x) > bound[g] + 1e-9) ++violations;
    }
  }
  const double secs = seconds_since(t0);
  return {violations == 0 && attain <= 1e-9 && full > 0 && secs < 60.0,
          "1e5 covariances x " + std::to_string(grid.size()) + " weights, " +
              std::to_string(violations) + " violations; " + std::to_string(full) +
              " Full weights attain within " + fmt("%.3e", attain) + " (tol 1e-9), " +
              fmt("%.2f", secs) + " s (limit 60 s)"};
}

Outcome full_power() {
  CounterRng rng(stream_key(303, "acceptance/full-power", 0));
  double trace_err = 0.0;
  double off = 0.0;
  double min_gain = std::numeric_limits<double>::infinity();
  for (std::uint64_t i = 0; i < 500; ++i) {
    const Eigen::Index n = i % 2 == 0 ? 2 : 3;
    const auto h = draw_channels(rng, n, static_cast<std::size_t>(n));
    const double level = 0.05 + 0.9 * rng.next_uniform();
    const auto base = random_feasible_covariance(stream_key(303, "p", i), n, std::nullopt, true);
    const FeasibleCovariance p(base.matrix() * level);
    const std::size_t target = i % h.size();
    const auto q = full_power_completion(p, h, target);
    trace_err = std::max(trace_err, std::abs(q.matrix().trace().real() - 1.0));
    for (std::size_t l = 0; l < h.size(); ++l) {
      const double before = quad_gain(p.matrix(), h[l]);
      const double after = quad_gain(q.matrix(), h[l]);
      if (l == target) {
        min_gain = std::min(min_gain, after - before);
      } else {
        off = std::max(off, std::abs(after - before));
      }
    }
  }
  return {trace_err <= 1e-12 && off <= 1e-10 && min_gain >= 1e-6,
          "500 covariances, |trace - 1| <= " + fmt("%.3e", trace_err) + " (tol 1e-12), off-target " +
              fmt("%.3e", off) + " (tol 1e-10), min target increase " + fmt("%.3e", min_gain) +
              " (need >= 1e-6)"};
}

Outcome power_rule_check() {
  CounterRng rng(stream_key(404, "acceptance/power-rule", 0));
  const std::vector<int> e{1, -1, -1};
  const DirectionVector dir(e);
  std::size_t mismatches = 0;
  std::size_t free_cases = 0;
  double shortfall = -std::numeric_limits<double>::infinity();
  double free_flat = 0.0;
  // 500 interior weights, then 100 on one-receiver faces where Free occurs
  for (std::size_t i = 0; i < 600; ++i) {
    const auto h = draw_channels(rng, 2, 3);
    std::vector<double> lambda = random_simplex(rng, 3);
    if (i >= 500) {
      lambda.assign(3, 0.0);
      lambda[i % 3] = 1.0;
    }
    const CMat z = combination(h, lambda, e);
    const double mu = top_eigenvalue(z);
    const double tau = 1e-9 * (1.0 + z.cwiseAbs().maxCoeff());
    const PowerClass expected = mu > tau ? PowerClass::Full : (mu < -tau ? PowerClass::Zero : PowerClass::Free);
    const BoundaryStrategy b = boundary_strategy(h, SimplexWeight(lambda), dir, rng.next_uniform());
    if (b.power_class != expected) ++mismatches;
    auto obj = [&](double p) {
      std::vector<double> x;
      for (const auto& c : h) x.push_back(p * std::norm(b.direction.dot(c)));
      return objective(lambda, e, x);
    };
    const double chosen = obj(b.power);
    shortfall = std::max({shortfall, obj(0.0) - chosen, obj(1.0) - chosen});
    if (expected == PowerClass::Free) {
      ++free_cases;
      free_flat = std::max(free_flat, std::abs(obj(1.0) - obj(0.0)));
    }
  }
  return {mismatches == 0 && shortfall <= 1e-9 && free_flat <= 1e-8 && free_cases > 0,
          std::to_string(mismatches) + " class mismatches, objective shortfall " +
              fmt("%.3e", shortfall) + " (tol 1e-9), " + std::to_string(free_cases) +
              " Free cases with |obj(1) - obj(0)| <= " + fmt("%.3e", free_flat) + " (tol 1e-8)"};
}

double alignment(const CVec& w, double l1, const CVec& h11, const CVec& h12) {
  const std::vector<CVec> h{h11, h12};
  const auto top = dominant_eigvec(
      weighted_combination(h, SimplexWeight({l1, 1.0 - l1}), DirectionVector({1, -1})), h);
  return std::norm(w.dot(top.vector));
}

double golden_alignment(const CVec& w, const CVec& h11, const CVec& h12) {
  constexpr int kGrid = 400;
  int best = 0;
  double best_value = -1.0;
  for (int j = 0; j <= kGrid; ++j) {
    const double v = alignment(w, j / double(kGrid), h11, h12);
    if (v > best_value) {
      best_value = v;
      best = j;
    }
  }
  double a = std::max(0, best - 1) / double(kGrid);
  double b = std::min(kGrid, best + 1) / double(kGrid);
  const double r = (std::sqrt(5.0) - 1.0) / 2.0;
  double c = b - r * (b - a);
  double d = a + r * (b - a);
  double fc = alignment(w, c, h11, h12);
  double fd = alignment(w, d, h11, h12);
  while (b - a > 1e-14) {
    if (fc > fd) {
      b = d, d = c, fd = fc;
      c = b - r * (b - a);
      fc = alignment(w, c, h11, h12);
    } else {
      a = c, c = d, fc = fd;
      d = a + r * (b - a);
      fd = alignment(w, d, h11, h12);
    }
  }
  return std::max({best_value, fc, fd});
}

Outcome two_user() {
  CounterRng rng(stream_key(505, "acceptance/two-user", 0));
  double lib_residual = 0.0;
  double own_residual = 0.0;
  for (std::size_t i = 0; i < 100; ++i) {
    const Eigen::Index n = 2 + static_cast<Eigen::Index>(i % 3);
    const CVec h11 = rng.complex_normal_vector(n);
    const CVec h12 = rng.complex_normal_vector(n);
    const double l1 = 0.02 + 0.96 * rng.next_uniform();
    lib_residual = std::max(lib_residual, verify_two_user_identity(l1, h11, h12));
    // projector form evaluated at an independently computed top eigenvector
    const CMat z = l1 * h11 * h11.adjoint() - (1.0 - l1) * h12 * h12.adjoint();
    Eigen::SelfAdjointEigenSolver<CMat> es((z + z.adjoint()) * 0.5);
    const CVec w = es.eigenvectors().col(n - 1);
    const double mu = es.eigenvalues()[n - 1];
    const CMat pi11 = h11 * h11.adjoint() / h11.squaredNorm();
    const CMat perp12 = CMat::Identity(n, n) - h12 * h12.adjoint() / h12.squaredNorm();
    const CVec lhs = (l1 * h11.squaredNorm() * pi11 + (1.0 - l1) * h12.squaredNorm() * perp12) * w;
    const CVec rhs = (mu + (1.0 - l1) * h12.squaredNorm()) * w;
    own_residual = std::max(own_residual, (lhs - rhs).norm());
  }
  double worst_align = 1.0;
  for (std::size_t j = 0; j < 50; ++j) {
    const Eigen::Index n = 2 + static_cast<Eigen::Index>(j % 3);
    const CVec h11 = rng.complex_normal_vector(n);
    const CVec h12 = rng.complex_normal_vector(n);
    const CVec w = two_user_combination(j / 49.0, h11, h12);
    worst_align = std::min(worst_align, golden_alignment(w, h11, h12));
  }
  return {lib_residual <= 1e-9 && own_residual <= 1e-9 && worst_align >= 1.0 - 1e-6,
          "identity residual " + fmt("%.3e", std::max(lib_residual, own_residual)) +
              " (tol 1e-9) over 100 draws; worst golden-section alignment " +
              fmt("%.12f", worst_align) + " over 50 lambda_hat (need >= 1 - 1e-6)"};
}

Outcome null_shaping() {
  CounterRng rng(stream_key(606, "acceptance/null-shaping", 0));
  const std::vector<int> e{1, -1, -1};
  const DirectionVector dir(e);
  double worst = 0.0;
  bool sign_ok = true;
  bool zero_count_ok = true;
  for (std::size_t i = 0; i < 200; ++i) {
    const auto h = draw_channels(rng, 4, 3);
    std::vector<double> lambda = random_simplex(rng, 3);
    const SimplexWeight w(lambda);
    const auto z = null_constraints(h, w, dir);
    const CVec wp = projected_mrt(z, h[0]);
    const CVec vt = dominant_eigvec(weighted_combination(h, w, dir), h).vector;
    for (int p = 0; p < 50; ++p) {
      const CVec g = rng.unit_vector(4);
      worst = std::max(worst, std::abs(std::norm(g.dot(wp)) - std::norm(g.dot(vt))) / g.squaredNorm());
    }
    const CMat m = combination(h, lambda, e);
    const double tau = 1e-9 * (1.0 + m.cwiseAbs().maxCoeff());
    Eigen::SelfAdjointEigenSolver<CMat> es(m, Eigen::EigenvaluesOnly);
    const auto& mu = es.eigenvalues();
    // |K-| = 2 nonpositive, positions 3 .. N - |K+| = 3 zero
    sign_ok = sign_ok && mu[0] <= tau && mu[1] <= tau && std::abs(mu[2]) <= tau;
    int zeros = 0;
    for (Eigen::Index j = 0; j < 4; ++j) zeros += std::abs(mu[j]) <= tau;
    zero_count_ok = zero_count_ok && zeros >= 1;
  }
  return {worst <= 1e-8 && sign_ok && zero_count_ok,
          "200 weights x 50 probes, max relative gain difference " + fmt("%.3e", worst) +
              " (tol 1e-8); sign structure " + (sign_ok ? "holds" : "BROKEN") + ", zero count " +
              (zero_count_ok ? "holds" : "BROKEN")};
}

Outcome zf_anchor() {
  double worst = 0.0;
  std::size_t cases = 0;
  for (std::size_t k : {2u, 3u}) {
    for (Eigen::Index n = static_cast<Eigen::Index>(k); n <= 4; ++n) {
      for (std::uint64_t seed = 0; seed < 10; ++seed) {
        const Scenario s = generate_channels(700 + seed, ic_layout(k, n, 1.0));
        std::vector<SimplexWeight> lambdas;
        for (std::size_t t = 0; t < k; ++t) {
          std::vector<double> w(k, 1.0 / double(k - 1));
          w[t] = 0.0;
          lambdas.emplace_back(w);
        }
        const auto strategies = pareto_strategies(s, ParameterPoint::with_lambdas(s, lambdas));
        for (std::size_t t = 0; t < k; ++t) {
          const CVec b = strategies[t].boundary.beamformer() * std::sqrt(strategies[t].share);
          for (std::size_t l = 0; l < k; ++l) {
            if (l == t) continue;
            ++cases;
            worst = std::max(worst, std::norm(b.dot(s.channel(t, l))) / s.channel(t, l).squaredNorm());
          }
        }
      }
    }
  }
  return {worst <= 1e-12, std::to_string(cases) + " cross links, max |w^H h|^2 / |h|^2 = " +
                              fmt("%.3e", worst) + " (tol 1e-12)"};
}

Outcome pareto_oracle() {
  CounterRng rng(stream_key(808, "acceptance/pareto", 0));
  std::vector<std::vector<double>> pts;
  std::size_t dups = 0;
  std::size_t weak = 0;
  while (pts.size() < 1000) {
    const double r = rng.next_uniform();
    if (pts.empty() || r < 0.6) {
      std::vector<double> p(3);
      const bool lattice = rng.next_uniform() < 0.5;
      for (double& x : p) x = lattice ? std::floor(rng.next_uniform() * 6.0) : 6.0 * rng.next_uniform();
      pts.push_back(p);
    } else {
      std::vector<double> p = pts[rng.next_bits() % pts.size()];
      if (r < 0.8) {
        ++dups;
      } else {
        p[rng.next_bits() % 3] -= 0.5 * rng.next_uniform();
        ++weak;
      }
      pts.push_back(p);
    }
  }
  const auto fast = pareto_filter(pts);
  const auto oracle = brute_force_front(pts);
  return {fast == oracle, "1000 points (" + std::to_string(dups) + " duplicates, " +
                              std::to_string(weak) + " weakly dominated), filter " +
                              std::to_string(fast.size()) + " vs oracle " +
                              std::to_string(oracle.size()) + (fast == oracle ? ", identical" : ", DIFFER")};
}

std::size_t candidate_with(const UtilityCloud& cloud, std::size_t t, const SimplexWeight& w) {
  const auto& c = cloud.candidates(t);
  for (std::size_t i = 0; i < c.size(); ++i) {
    if (c[i].strategy.lambda == w) return i;
  }
  return c.size();
}

Outcome three_user_ic() {
  bool ok = true;
  std::string detail;
  for (double snr : {-10.0, 30.0}) {
    const auto t0 = Clock::now();
    const Scenario s = generate_channels(909, ic_layout(3, 3, snr_to_noise(snr)));
    const auto cloud = sweep_utility_region(s, UtilitySpec::from_scenario(s), SweepOptions{0.1, 11, 10'000'000});
    const auto front = pareto_filter(cloud);
    const double secs = seconds_since(t0);
    const double sigma2 = s.noise_power();

    // all-MRT point against closed-form NE rates
    std::vector<std::size_t> digits;
    for (std::size_t t = 0; t < 3; ++t) digits.push_back(candidate_with(cloud, t, SimplexWeight::indicator(3, t)));
    digits.insert(digits.end(), 3, 0);
    const auto u = cloud.utility(cloud.index_of(digits));
    double ne_err = 0.0;
    for (std::size_t k = 0; k < 3; ++k) {
      double interf = 0.0;
      for (std::size_t j = 0; j < 3; ++j) {
        if (j != k) interf += std::norm(s.channel(j, j).dot(s.channel(j, k))) / s.channel(j, j).squaredNorm();
      }
      ne_err = std::max(ne_err, std::abs(u[k] - std::log2(1.0 + s.channel(k, k).squaredNorm() / (sigma2 + interf))));
    }

    // corner k: own MRT, every other transmitter zero-forcing toward k
    bool corners = !front.empty();
    double corner_err = 0.0;
    for (std::size_t k = 0; k < 3; ++k) {
      const double best = std::log2(1.0 + s.channel(k, k).squaredNorm() / sigma2);
      std::vector<std::size_t> d;
      for (std::size_t t = 0; t < 3; ++t) d.push_back(candidate_with(cloud, t, SimplexWeight::indicator(3, k)));
      d.insert(d.end(), 3, 0);
      corner_err = std::max(corner_err, std::abs(cloud.utility(cloud.index_of(d))[k] - best));
      bool on_front = false;
      for (std::size_t i : front) on_front = on_front || std::abs(cloud.utility(i)[k] - best) <= 1e-12;
      corners = corners && on_front;
    }
    const bool pass = secs < 60.0 && ne_err <= 1e-12 && corner_err <= 1e-12 && corners;
    ok = ok && pass;
    detail += (detail.empty() ? "" : "; ") + fmt("SNR %.0f dB: ", snr) + std::to_string(cloud.size()) +
              " points in " + fmt("%.2f", secs) + " s, NE error " + fmt("%.1e", ne_err) + ", corner error " +
              fmt("%.1e", corner_err) + ", front " + std::to_string(front.size()) +
              (corners ? " holds all corners" : " MISSING corners");
  }
  return {ok, detail};
}

Outcome mixed_example() {
  const auto t0 = Clock::now();
  const Scenario s = generate_channels(1010, mixed_layout(snr_to_noise(15)));
  const UtilitySpec spec = UtilitySpec::from_scenario(s);
  const auto cloud = sweep_utility_region(s, spec, SweepOptions{0.1, 11, 10'000'000});
  const double secs = seconds_since(t0);

  const std::size_t tx2 = s.transmitter_index("2");
  const auto& h2 = s.channels_of(tx2);
  CounterRng rng(stream_key(1010, "acceptance/monotone", 0));
  std::size_t checks = 0;
  std::size_t decreases = 0;
  double min_delta = std::numeric_limits<double>::infinity();
  for (int i = 0; i < 500; ++i) {
    const std::size_t idx = rng.next_bits() % cloud.size();
    const auto strategies = pareto_strategies(s, cloud.parameters(idx));
    std::vector<GainTuple> gains = profile_gains(s, strategies);
    const CMat q2 = strategies[tx2].covariance().matrix();
    const FeasibleCovariance scaled(q2 * 0.5);
    const auto completed = full_power_completion(scaled, h2, 2);
    GainTuple before;
    GainTuple after;
    for (const auto& h : h2) {
      before.push_back(quad_gain(scaled.matrix(), h));
      after.push_back(quad_gain(completed.matrix(), h));
    }
    gains[tx2] = before;
    const double u3_before = evaluate_utilities(gains, spec)[2];
    gains[tx2] = after;
    const double u3_after = evaluate_utilities(gains, spec)[2];
    ++checks;
    min_delta = std::min(min_delta, u3_after - u3_before);
    if (u3_after < u3_before) ++decreases;
  }
  const bool ok = cloud.size() == 66u * 66u * 66u * 11u && secs < 600.0 && decreases == 0;
  return {ok, std::to_string(cloud.size()) + " points in " + fmt("%.2f", secs) + " s (limit 600 s); " +
                  std::to_string(checks) + " monotonicity checks, " + std::to_string(decreases) +
                  " decreases of u3, min change " + fmt("%.3e", min_delta)};
}

}  // namespace

int main() {
  struct Criterion {
    int id;
    const char* name;
    std::function<Outcome()> run;
  };
  const std::vector<Criterion> criteria{
      {1, "convexity construction", convexity},
      {2, "supporting hyperplane", hyperplane},
      {3, "full-power completion", full_power},
      {4, "power rule", power_rule_check},
      {5, "two-user equivalence", two_user},
      {6, "null-shaping equivalence", null_shaping},
      {7, "zero-forcing anchor", zf_anchor},
      {8, "pareto filter oracle", pareto_oracle},
      {9, "3-user IC utility sweep", three_user_ic},
      {10, "mixed example sweep", mixed_example},
  };
  int failures = 0;
  for (const auto& c : criteria) {
    Outcome o{false, ""};
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    failures += !o.passed;
    std::printf("[%s] criterion %d (%s): %s\n", o.passed ? "PASS" : "FAIL", c.id, c.name, o.detail.c_str());
    std::fflush(stdout);
  }
  std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failures, criteria.size());
  return failures == 0 ? 0 : 1;
}
