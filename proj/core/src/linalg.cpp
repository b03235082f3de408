#include "douglaskit/linalg.hpp"

#include <limits>

namespace douglaskit::linalg {

namespace {

bool degenerate(const Matrix& m) { return m.rows() == 0 || m.cols() == 0; }

// sigma cutoff and marginality in one place so every rank decision matches.
struct Cut {
  double cutoff = 0.0;
  int rank = 0;
  bool marginal = false;
};

Cut cut_singular_values(const RealVector& sv, double rtol) {
  Cut c;
  if (sv.size() == 0 || sv(0) <= 0.0) return c;
  c.cutoff = rtol * sv(0);
  for (Eigen::Index i = 0; i < sv.size(); ++i) {
    if (sv(i) > c.cutoff) ++c.rank;
    if (sv(i) > c.cutoff * 0.1 && sv(i) < c.cutoff * 10.0) c.marginal = true;
  }
  return c;
}

}  // namespace

double spectral_norm(const Matrix& m) {
  if (degenerate(m)) return 0.0;
  Eigen::BDCSVD<Matrix> svd(m);
  return svd.singularValues()(0);
}

RealVector singular_values(const Matrix& m) {
  if (degenerate(m)) return RealVector(0);
  Eigen::BDCSVD<Matrix> svd(m);
  return svd.singularValues();
}

RankedBasis column_space(const Matrix& m, double rtol) {
  if (degenerate(m)) return {Matrix(m.rows(), 0), 0, false};
  Eigen::BDCSVD<Matrix> svd(m, Eigen::ComputeThinU);
  const Cut c = cut_singular_values(svd.singularValues(), rtol);
  return {svd.matrixU().leftCols(c.rank), c.rank, c.marginal};
}

RankedBasis null_space(const Matrix& m, double rtol) {
  if (m.cols() == 0) return {Matrix(0, 0), 0, false};
  if (m.rows() == 0)
    return {Matrix::Identity(m.cols(), m.cols()), static_cast<int>(m.cols()),
            false};
  Eigen::BDCSVD<Matrix> svd(m, Eigen::ComputeFullV);
  const Cut c = cut_singular_values(svd.singularValues(), rtol);
  const Eigen::Index n = m.cols();
  return {svd.matrixV().rightCols(n - c.rank), static_cast<int>(n - c.rank),
          c.marginal};
}

Matrix pseudoinverse(const Matrix& m, double rtol) {
  if (degenerate(m)) return Matrix::Zero(m.cols(), m.rows());
  Eigen::BDCSVD<Matrix> svd(m, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const RealVector sv = svd.singularValues();
  const Cut c = cut_singular_values(sv, rtol);
  RealVector inv = RealVector::Zero(sv.size());
  for (int i = 0; i < c.rank; ++i) inv(i) = 1.0 / sv(i);
  return svd.matrixV() * inv.asDiagonal() * svd.matrixU().adjoint();
}

HermitianEigen hermitian_eigen(const Matrix& m) {
  HermitianEigen out;
  if (m.rows() == 0) {
    out.values = RealVector(0);
    out.vectors = Matrix(0, 0);
    return out;
  }
  const Matrix sym = 0.5 * (m + m.adjoint());
  Eigen::SelfAdjointEigenSolver<Matrix> es(sym);
  out.values = es.eigenvalues();
  out.vectors = es.eigenvectors();
  return out;
}

Matrix hermitian_sqrt(const Matrix& m) {
  const HermitianEigen ev = hermitian_eigen(m);
  RealVector roots(ev.values.size());
  for (Eigen::Index i = 0; i < ev.values.size(); ++i)
    roots(i) = ev.values(i) > 0.0 ? std::sqrt(ev.values(i)) : 0.0;
  return ev.vectors * roots.asDiagonal() * ev.vectors.adjoint();
}

Matrix orthogonal_complement_basis(const Matrix& basis, Eigen::Index dim) {
  if (basis.cols() == 0) return Matrix::Identity(dim, dim);
  if (basis.cols() >= dim) return Matrix(dim, 0);
  Eigen::HouseholderQR<Matrix> qr(basis);
  const Matrix q = qr.householderQ();
  return q.rightCols(dim - basis.cols());
}

double min_hermitian_eigenvalue(const Matrix& m) {
  if (m.rows() == 0) return std::numeric_limits<double>::infinity();
  return hermitian_eigen(m).values(0);
}

}  // namespace douglaskit::linalg
