#include "paretobf/hermitian.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <string>

#include "paretobf/error.hpp"

namespace paretobf {

namespace {

constexpr double kPhaseThreshold = 1e-12;
constexpr double kRankThreshold = 1e-12;
constexpr double kSingularTie = 1e-9;

void fix_phase(Eigen::Ref<CVec> v) {
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    const double mag = std::abs(v[i]);
    if (mag > kPhaseThreshold) {
      v *= std::conj(v[i]) / mag;
      v[i] = Complex(v[i].real(), 0.0);
      return;
    }
  }
}

Eigen::JacobiSVD<CMat> thin_svd(const CMat& a) {
  return Eigen::JacobiSVD<CMat>(a, Eigen::ComputeThinU | Eigen::ComputeThinV);
}

Eigen::Index numerical_rank(const RVec& singular_values) {
  if (singular_values.size() == 0 || singular_values[0] <= 0.0) return 0;
  const double cutoff = kRankThreshold * singular_values[0];
  Eigen::Index r = 0;
  while (r < singular_values.size() && singular_values[r] > cutoff) ++r;
  return r;
}

std::string column_set(Eigen::Index count) {
  std::ostringstream os;
  os << '{';
  for (Eigen::Index j = 0; j < count; ++j) os << (j ? "," : "") << j;
  os << '}';
  return os.str();
}

void require_independent(const CMat& a) {
  const auto svd = thin_svd(a);
  if (numerical_rank(svd.singularValues()) == a.cols()) return;
  // smallest leading column block that loses rank names the offending set
  for (Eigen::Index j = 1; j <= a.cols(); ++j) {
    const auto prefix = thin_svd(a.leftCols(j));
    if (numerical_rank(prefix.singularValues()) < j) {
      throw RankDeficientError("columns " + column_set(j) +
                               " are linearly dependent (column " + std::to_string(j - 1) +
                               " lies in the span of the preceding ones)");
    }
  }
  throw RankDeficientError("columns " + column_set(a.cols()) + " are linearly dependent");
}

}  // namespace

double max_abs(const CMat& a) {
  return a.size() == 0 ? 0.0 : a.cwiseAbs().maxCoeff();
}

CMat as_columns(std::span<const CVec> vectors, Eigen::Index dim) {
  CMat out(dim, static_cast<Eigen::Index>(vectors.size()));
  for (std::size_t j = 0; j < vectors.size(); ++j) {
    if (vectors[j].size() != dim) {
      throw DimensionError("vector " + std::to_string(j) + " has dimension " +
                           std::to_string(vectors[j].size()) + ", expected " + std::to_string(dim));
    }
    out.col(static_cast<Eigen::Index>(j)) = vectors[j];
  }
  return out;
}

HermitianMatrix::HermitianMatrix(const CMat& a) {
  if (a.rows() != a.cols()) {
    throw DimensionError("Hermitian matrix must be square, got " + std::to_string(a.rows()) + "x" +
                         std::to_string(a.cols()));
  }
  if (!a.allFinite()) throw DomainError("Hermitian matrix has non-finite entries");
  const CMat skew = a - a.adjoint();
  const double asym = max_abs(skew);
  if (asym > kTolerance * (1.0 + max_abs(a))) {
    std::ostringstream os;
    os << "matrix is not Hermitian: max|A - A^H| = " << asym;
    throw NotHermitianError(os.str());
  }
  m_ = (a + a.adjoint()) * 0.5;
}

HermitianMatrix HermitianMatrix::zero(Eigen::Index dim) {
  return HermitianMatrix(CMat::Zero(dim, dim), Trusted{});
}

HermitianMatrix HermitianMatrix::operator+(const HermitianMatrix& other) const {
  if (other.dim() != dim()) throw DimensionError("Hermitian sum of different dimensions");
  return HermitianMatrix(m_ + other.m_, Trusted{});
}

HermitianMatrix HermitianMatrix::operator*(double scale) const {
  return HermitianMatrix(m_ * scale, Trusted{});
}

HermitianMatrix outer_product(const CVec& h) {
  if (h.size() == 0) throw DimensionError("outer product of an empty vector");
  CMat m = h * h.adjoint();
  // exact real diagonal
  for (Eigen::Index i = 0; i < m.rows(); ++i) m(i, i) = Complex(std::norm(h[i]), 0.0);
  return HermitianMatrix(m);
}

HermitianMatrix weighted_combination(std::span<const CVec> channels, const SimplexWeight& lambda,
                                     const DirectionVector& e) {
  if (channels.empty()) throw DimensionError("weighted combination needs at least one channel");
  if (channels.size() != lambda.size() || channels.size() != e.size()) {
    throw DimensionError("weighted combination: " + std::to_string(channels.size()) +
                         " channels, " + std::to_string(lambda.size()) + " weights, " +
                         std::to_string(e.size()) + " directions");
  }
  const Eigen::Index n = channels.front().size();
  CMat z = CMat::Zero(n, n);
  for (std::size_t l = 0; l < channels.size(); ++l) {
    if (channels[l].size() != n) {
      throw DimensionError("channel " + std::to_string(l) + " has dimension " +
                           std::to_string(channels[l].size()) + ", expected " + std::to_string(n));
    }
    const double coeff = lambda[l] * static_cast<double>(e[l]);
    if (coeff != 0.0) z.noalias() += coeff * (channels[l] * channels[l].adjoint());
  }
  return HermitianMatrix(z);
}

EigenSystem eig_hermitian(const HermitianMatrix& z) {
  if (z.dim() == 0) throw DomainError("eigendecomposition of a zero-dimensional matrix");
  Eigen::SelfAdjointEigenSolver<CMat> solver(z.matrix(), Eigen::ComputeEigenvectors);
  if (solver.info() != Eigen::Success) throw DomainError("Hermitian eigensolver did not converge");
  EigenSystem es{solver.eigenvalues(), solver.eigenvectors()};
  for (Eigen::Index j = 0; j < es.vectors.cols(); ++j) {
    es.vectors.col(j).normalize();
    fix_phase(es.vectors.col(j));
  }
  return es;
}

double multiplicity_tolerance(double top_eigenvalue) {
  return 1e-9 * (1.0 + std::abs(top_eigenvalue));
}

DominantEigenvector dominant_eigvec(const HermitianMatrix& z, std::span<const CVec> span_basis) {
  return dominant_eigvec(eig_hermitian(z), span_basis);
}

DominantEigenvector dominant_eigvec(const EigenSystem& es, std::span<const CVec> span_basis) {
  const Eigen::Index n = es.dim();
  if (n == 0) throw DomainError("dominant eigenvector of a zero-dimensional matrix");
  DominantEigenvector out;
  out.eigenvalue = es.max_value();
  const double tol = multiplicity_tolerance(out.eigenvalue);
  Eigen::Index m = 1;
  while (m < n && es.values[n - 1 - m] >= out.eigenvalue - tol) ++m;
  out.multiplicity = m;
  if (m == 1) {
    out.vector = es.vectors.col(n - 1);
    return out;
  }

  const CMat eigenspace = es.vectors.rightCols(m);
  const CMat channels = as_columns(span_basis, n);
  const CMat span_q = orthonormal_basis(channels);
  if (span_q.cols() == 0) {
    out.degenerate_outside_span = true;
    out.vector = es.vectors.col(n - 1);
    return out;
  }

  // coordinates (in the eigenspace basis) of directions ordered by ||Pi_H v||
  const auto svd = thin_svd(eigenspace.adjoint() * span_q);
  const RVec& s = svd.singularValues();
  if (s[0] < 1.0 - kSingularTie) out.degenerate_outside_span = true;
  Eigen::Index ties = 1;
  while (ties < s.size() && s[ties] >= s[0] - kSingularTie) ++ties;

  CVec v;
  if (ties == 1) {
    v = eigenspace * svd.matrixU().col(0);
  } else {
    const CMat best = eigenspace * svd.matrixU().leftCols(ties);
    const CMat energy = best.adjoint() * channels;
    if (max_abs(energy) == 0.0) {
      v = best.col(0);
    } else {
      v = best * thin_svd(energy).matrixU().col(0);
    }
  }
  v.normalize();
  fix_phase(v);
  out.vector = std::move(v);
  return out;
}

CMat orthonormal_basis(const CMat& a) {
  if (a.cols() == 0 || a.rows() == 0) return CMat(a.rows(), 0);
  const auto svd = thin_svd(a);
  return svd.matrixU().leftCols(numerical_rank(svd.singularValues()));
}

Projector projector_onto(const CMat& a) {
  if (a.cols() == 0) return {CMat::Zero(a.rows(), a.rows()), Projector::Kind::OntoColumnSpace};
  require_independent(a);
  const CMat q = thin_svd(a).matrixU();
  CMat p = q * q.adjoint();
  p = (p + p.adjoint()) * 0.5;
  return {std::move(p), Projector::Kind::OntoColumnSpace};
}

Projector projector_complement(const CMat& a) {
  const Eigen::Index n = a.rows();
  if (a.cols() == 0) return {CMat::Identity(n, n), Projector::Kind::OntoOrthogonalComplement};
  CMat p = CMat::Identity(n, n) - projector_onto(a).matrix;
  p = (p + p.adjoint()) * 0.5;
  return {std::move(p), Projector::Kind::OntoOrthogonalComplement};
}

}  // namespace paretobf
