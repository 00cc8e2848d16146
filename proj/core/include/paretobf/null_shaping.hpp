#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "paretobf/hermitian.hpp"
#include "paretobf/weights.hpp"

namespace paretobf {

/// Null-shaping constraints of one transmitter: eigenvectors of
/// M = sum_l lambda_l e_l h_l h_l^H at the positions 1..|K-| and
/// N-|K+|+1..N-1 (1-based, nondecreasing eigenvalue order), where K+ and K-
/// are the receivers with e_l = +1 and e_l = -1.
///
/// `eigensystem` is an eigenbasis of M adapted to the channels: its last
/// column is dominant_eigvec(M, channels), and inside every repeated
/// eigenvalue the directions touched by the intended channel and by the
/// channels with lambda_l > 0 come before the remaining ones on constraint
/// positions.
struct NullConstraintSet {
  CMat columns;
  /// 0-based eigen positions of the columns.
  std::vector<Eigen::Index> indices;
  /// 0-based eigen positions left out (neither constraint nor top).
  std::vector<Eigen::Index> dropped;
  SimplexWeight lambda;
  DirectionVector e;
  EigenSystem eigensystem;
  /// Channel used as the projected-MRT input.
  std::size_t intended = 0;

  std::size_t size() const { return static_cast<std::size_t>(columns.cols()); }
  CVec top() const { return eigensystem.vectors.col(eigensystem.dim() - 1); }
};

/// Intended receiver feeding the projected MRT: the e_l = +1 receiver with the
/// largest lambda_l (first one on ties).
std::size_t null_shaping_intended(const SimplexWeight& lambda, const DirectionVector& e);

/// Throws DomainError when N < K or when the two position ranges overlap.
NullConstraintSet null_constraints(std::span<const CVec> channels, const SimplexWeight& lambda,
                                   const DirectionVector& e);

/// Pi^perp_Z h / ||Pi^perp_Z h||; plain MRT for an empty set. Throws
/// RankDeficientError when the projection is below 1e-12 ||h||.
CVec projected_mrt(const NullConstraintSet& z, const CVec& h_intended);

/// Largest | |g^H w_proj|^2 - |g^H v_top|^2 | / ||g||^2 over `probes` random
/// unit vectors g plus the K channels.
double verify_gain_equivalence(std::span<const CVec> channels, const SimplexWeight& lambda,
                               const DirectionVector& e, std::size_t probes, std::uint64_t seed);

struct EigenStructureReport {
  /// Smallest |K-| eigenvalues are <= tau.
  bool negative_part = true;
  /// Eigenvalues at positions |K-|+1 .. N-|K+| vanish within tau.
  bool zero_part = true;
  /// Number of eigenvalues within tau of zero.
  std::size_t zero_count = 0;
  /// Dropped eigenvectors annihilate the channels with lambda_l > 0.
  double max_annihilation = 0.0;
  /// max entry of v_top v_top^H - Pi^perp over the other eigenvectors.
  double completeness = 0.0;
  double tau = 0.0;
};

EigenStructureReport check_eigen_structure(std::span<const CVec> channels,
                                           const NullConstraintSet& z);

}  // namespace paretobf
