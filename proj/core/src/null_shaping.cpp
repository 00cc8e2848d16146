#include "paretobf/null_shaping.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "paretobf/error.hpp"
#include "paretobf/gain_region.hpp"
#include "paretobf/rng.hpp"

namespace paretobf {

namespace {

constexpr double kTouchThreshold = 1e-9;

void fix_phase(Eigen::Ref<CVec> v) {
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    const double mag = std::abs(v[i]);
    if (mag > 1e-12) {
      v *= std::conj(v[i]) / mag;
      v[i] = Complex(v[i].real(), 0.0);
      return;
    }
  }
}

// Orthogonalize `r` against the columns of `basis` (twice, for stability).
CVec orthogonalize(CVec r, const std::vector<CVec>& basis) {
  for (int pass = 0; pass < 2; ++pass) {
    for (const auto& b : basis) r -= b * b.dot(r);
  }
  return r;
}

struct Cluster {
  Eigen::Index first;
  Eigen::Index last;
};

std::vector<Cluster> clusters(const RVec& values, Eigen::Index top_multiplicity, double tol) {
  const Eigen::Index n = values.size();
  const Eigen::Index top_first = n - top_multiplicity;
  std::vector<Cluster> out;
  Eigen::Index start = 0;
  for (Eigen::Index i = 1; i <= top_first; ++i) {
    if (i == top_first || values[i] - values[i - 1] > tol) {
      out.push_back({start, i - 1});
      start = i;
    }
  }
  out.push_back({top_first, n - 1});
  return out;
}

}  // namespace

std::size_t null_shaping_intended(const SimplexWeight& lambda, const DirectionVector& e) {
  if (lambda.size() != e.size()) throw DimensionError("weight and direction lengths differ");
  std::size_t best = e.size();
  for (std::size_t l = 0; l < e.size(); ++l) {
    if (e[l] > 0 && (best == e.size() || lambda[l] > lambda[best])) best = l;
  }
  return best;
}

NullConstraintSet null_constraints(std::span<const CVec> channels, const SimplexWeight& lambda,
                                   const DirectionVector& e) {
  const HermitianMatrix m = weighted_combination(channels, lambda, e);
  const Eigen::Index n = m.dim();
  const auto k = static_cast<Eigen::Index>(channels.size());
  if (n < k) {
    throw DomainError("null shaping needs N >= K (N = " + std::to_string(n) +
                      ", K = " + std::to_string(k) + ")");
  }
  const auto neg = static_cast<Eigen::Index>(e.negative_count());
  const auto pos = static_cast<Eigen::Index>(e.positive_count());
  // 1-based ranges 1..neg and n-pos+1..n-1
  const Eigen::Index second_first = n - pos + 1;
  if (second_first <= neg && second_first <= n - 1) {
    throw DomainError("null-shaping index ranges overlap: 1.." + std::to_string(neg) + " and " +
                      std::to_string(second_first) + ".." + std::to_string(n - 1));
  }

  EigenSystem es = eig_hermitian(m);
  const DominantEigenvector top = dominant_eigvec(es, channels);

  std::vector<bool> is_constraint(static_cast<std::size_t>(n), false);
  for (Eigen::Index i = 0; i < neg; ++i) is_constraint[i] = true;
  for (Eigen::Index i = second_first - 1; i < n - 1; ++i) is_constraint[i] = true;

  const std::size_t intended = null_shaping_intended(lambda, e);
  std::vector<std::size_t> touching{intended};
  for (std::size_t l = 0; l < channels.size(); ++l) {
    if (l != intended && lambda[l] > 0.0) touching.push_back(l);
  }

  EigenSystem adapted = es;
  const double tol = zero_tolerance(m);
  for (const Cluster& c : clusters(es.values, top.multiplicity, tol)) {
    const Eigen::Index size = c.last - c.first + 1;
    const bool has_top = c.last == n - 1;
    if (size == 1) {
      if (has_top) adapted.vectors.col(n - 1) = top.vector;
      continue;
    }
    const CMat u = es.vectors.middleCols(c.first, size);
    std::vector<CVec> basis;
    if (has_top) basis.push_back(top.vector);
    std::vector<CVec> ordered;
    for (std::size_t l : touching) {
      const CVec& h = channels[l];
      CVec r = orthogonalize(u * (u.adjoint() * h), basis);
      if (r.norm() > kTouchThreshold * h.norm() && static_cast<Eigen::Index>(basis.size()) < size) {
        r.normalize();
        basis.push_back(r);
        ordered.push_back(r);
      }
    }
    // remaining directions of the cluster subspace
    CMat rest = u * u.adjoint();
    for (const auto& b : basis) rest -= b * b.adjoint();
    const Eigen::Index missing = size - static_cast<Eigen::Index>(basis.size());
    if (missing > 0) {
      Eigen::JacobiSVD<CMat> svd(rest, Eigen::ComputeThinU);
      for (Eigen::Index j = 0; j < missing; ++j) {
        CVec r = orthogonalize(svd.matrixU().col(j), basis);
        r.normalize();
        basis.push_back(r);
        ordered.push_back(r);
      }
    }

    std::vector<Eigen::Index> slots;
    const Eigen::Index end = has_top ? c.last - 1 : c.last;
    for (Eigen::Index i = c.first; i <= end; ++i) {
      if (is_constraint[i]) slots.push_back(i);
    }
    for (Eigen::Index i = c.first; i <= end; ++i) {
      if (!is_constraint[i]) slots.push_back(i);
    }
    for (std::size_t j = 0; j < slots.size(); ++j) {
      CVec v = ordered[j];
      fix_phase(v);
      adapted.vectors.col(slots[j]) = v;
    }
    if (has_top) adapted.vectors.col(n - 1) = top.vector;
  }

  NullConstraintSet z{CMat(n, 0), {}, {}, lambda, e, std::move(adapted), intended};
  for (Eigen::Index i = 0; i < n - 1; ++i) {
    (is_constraint[i] ? z.indices : z.dropped).push_back(i);
  }
  z.columns.resize(n, static_cast<Eigen::Index>(z.indices.size()));
  for (std::size_t j = 0; j < z.indices.size(); ++j) {
    z.columns.col(static_cast<Eigen::Index>(j)) = z.eigensystem.vectors.col(z.indices[j]);
  }
  return z;
}

CVec projected_mrt(const NullConstraintSet& z, const CVec& h_intended) {
  if (h_intended.size() != z.columns.rows()) {
    throw DimensionError("intended channel does not match the constraint dimension");
  }
  // columns are orthonormal, so Pi^perp_Z = I - Z Z^H
  const CVec u = h_intended - z.columns * (z.columns.adjoint() * h_intended);
  const double norm = u.norm();
  if (norm < 1e-12 * h_intended.norm() || norm == 0.0) {
    throw RankDeficientError("intended channel lies in the span of the null-shaping constraints");
  }
  return u / norm;
}

double verify_gain_equivalence(std::span<const CVec> channels, const SimplexWeight& lambda,
                               const DirectionVector& e, std::size_t probes, std::uint64_t seed) {
  const NullConstraintSet z = null_constraints(channels, lambda, e);
  const CVec w = projected_mrt(z, channels[z.intended]);
  const CVec v = z.top();
  const Eigen::Index n = w.size();
  CounterRng rng(stream_key(seed, "probe", static_cast<std::uint64_t>(n)));
  double worst = 0.0;
  auto compare = [&](const CVec& g) {
    const double scale = g.squaredNorm();
    if (scale == 0.0) return;
    worst = std::max(worst, std::abs(beamformer_gain(w, g) - beamformer_gain(v, g)) / scale);
  };
  for (std::size_t i = 0; i < probes; ++i) compare(rng.unit_vector(n));
  for (const auto& h : channels) compare(h);
  return worst;
}

EigenStructureReport check_eigen_structure(std::span<const CVec> channels,
                                           const NullConstraintSet& z) {
  const HermitianMatrix m = weighted_combination(channels, z.lambda, z.e);
  EigenStructureReport r;
  r.tau = zero_tolerance(m);
  const RVec& values = z.eigensystem.values;
  const Eigen::Index n = values.size();
  const auto neg = static_cast<Eigen::Index>(z.e.negative_count());
  const auto pos = static_cast<Eigen::Index>(z.e.positive_count());
  for (Eigen::Index i = 0; i < neg; ++i) r.negative_part = r.negative_part && values[i] <= r.tau;
  for (Eigen::Index i = neg; i < n - pos; ++i) {
    r.zero_part = r.zero_part && std::abs(values[i]) <= r.tau;
  }
  for (Eigen::Index i = 0; i < n; ++i) {
    if (std::abs(values[i]) <= r.tau) ++r.zero_count;
  }
  for (Eigen::Index i : z.dropped) {
    const CVec v = z.eigensystem.vectors.col(i);
    for (std::size_t l = 0; l < channels.size(); ++l) {
      if (z.lambda[l] > 0.0) {
        r.max_annihilation =
            std::max(r.max_annihilation, std::abs(channels[l].dot(v)) / channels[l].norm());
      }
    }
  }
  const CMat others = z.eigensystem.vectors.leftCols(n - 1);
  const CVec top = z.top();
  const CMat diff = top * top.adjoint() - (CMat::Identity(n, n) - others * others.adjoint());
  r.completeness = max_abs(diff);
  return r;
}

}  // namespace paretobf
