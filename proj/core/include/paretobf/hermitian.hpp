#pragma once

#include <complex>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "paretobf/weights.hpp"

namespace paretobf {

using Complex = std::complex<double>;
using CVec = Eigen::VectorXcd;
using CMat = Eigen::MatrixXcd;
using RVec = Eigen::VectorXd;

/// Largest entry modulus, max_ij |A_ij|; 0 for an empty matrix.
double max_abs(const CMat& a);

/// Columns of `vectors` stacked into a dim x n matrix. All vectors must share a dimension.
CMat as_columns(std::span<const CVec> vectors, Eigen::Index dim);

/// A square complex matrix that is Hermitian within
/// max|A - A^H| <= 1e-12 (1 + max|A|). Construction symmetrizes the stored
/// value to (A + A^H)/2 so downstream solvers see an exactly Hermitian input.
class HermitianMatrix {
 public:
  static constexpr double kTolerance = 1e-12;

  explicit HermitianMatrix(const CMat& a);
  static HermitianMatrix zero(Eigen::Index dim);

  Eigen::Index dim() const { return m_.rows(); }
  const CMat& matrix() const { return m_; }
  double trace() const { return m_.trace().real(); }

  HermitianMatrix operator+(const HermitianMatrix& other) const;
  HermitianMatrix operator*(double scale) const;

 private:
  struct Trusted {};
  HermitianMatrix(CMat a, Trusted) : m_(std::move(a)) {}
  CMat m_;
};

/// Eigen-decomposition with eigenvalues in nondecreasing order and matching
/// unit eigenvector columns. Phase convention: the first entry of each
/// eigenvector with modulus above 1e-12 is real and positive.
struct EigenSystem {
  RVec values;
  CMat vectors;

  Eigen::Index dim() const { return values.size(); }
  double max_value() const { return values[values.size() - 1]; }
  CVec vector(Eigen::Index i) const { return vectors.col(i); }
};

/// Top eigenvector chosen with the span tie-break.
struct DominantEigenvector {
  CVec vector;
  double eigenvalue = 0.0;
  /// Dimension of the eigenspace clustered with the top eigenvalue.
  Eigen::Index multiplicity = 1;
  /// The top eigenspace (multiplicity > 1) meets span(H) only trivially.
  bool degenerate_outside_span = false;
};

struct Projector {
  enum class Kind { OntoColumnSpace, OntoOrthogonalComplement };
  CMat matrix;
  Kind kind;

  CVec apply(const CVec& v) const { return matrix * v; }
};

/// h h^H.
HermitianMatrix outer_product(const CVec& h);

/// Z = sum_l lambda_l e_l h_l h_l^H. Throws DimensionError when the list sizes
/// differ or the channels do not share a dimension.
HermitianMatrix weighted_combination(std::span<const CVec> channels, const SimplexWeight& lambda,
                                     const DirectionVector& e);

/// Full eigendecomposition; eigenvalues nondecreasing, deterministic for equal input.
EigenSystem eig_hermitian(const HermitianMatrix& z);

/// Relative tolerance used to decide that two eigenvalues coincide with the top one.
double multiplicity_tolerance(double top_eigenvalue);

/// Unit eigenvector for the largest eigenvalue of `z`.
///
/// When the top eigenvalue is repeated (within multiplicity_tolerance), the
/// eigenspace is orthonormalized and the returned vector is the member
/// maximizing ||Pi_H v|| with H = span_basis. Inside a maximizing subspace of
/// dimension > 1 the member with the largest total projected channel energy
/// sum_l |v^H h_l|^2 is taken. If the eigenspace misses span(H) entirely the
/// flag `degenerate_outside_span` is set.
DominantEigenvector dominant_eigvec(const HermitianMatrix& z, std::span<const CVec> span_basis);

/// Same as above with an eigensystem computed already for `z`.
DominantEigenvector dominant_eigvec(const EigenSystem& es, std::span<const CVec> span_basis);

/// Orthonormal basis of the column space of `a` (rank decided with a 1e-12
/// relative singular value threshold). May have zero columns.
CMat orthonormal_basis(const CMat& a);

/// Pi_A = A (A^H A)^{-1} A^H. Columns must be linearly independent.
Projector projector_onto(const CMat& a);

/// Pi_A^perp = I - A (A^H A)^{-1} A^H; identity for an empty A (dim x 0).
/// Throws RankDeficientError naming the first dependent column set when the
/// smallest singular value is <= 1e-12 times the largest.
Projector projector_complement(const CMat& a);

}  // namespace paretobf
