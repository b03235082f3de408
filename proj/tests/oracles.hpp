#pragma once

// Test-side oracles, deliberately independent of the library's computation
// paths. The bisection oracle decides lambda* purely through PSD probes of
// assembled Gram differences; singular values come from power iteration
// instead of an SVD; pseudoinverse actions go through a complete orthogonal
// decomposition instead of the library's SVD cutoff; 2x2 eigenvalues come
// from the characteristic polynomial.

#include <cmath>
#include <limits>
#include <vector>

#include <Eigen/Dense>

#include "douglaskit/module.hpp"

namespace oracles {

using douglaskit::AdjointableOperator;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;

inline constexpr double kInf = std::numeric_limits<double>::infinity();

/// Is lambda * T T^H - T' T'^H PSD in every block? Pure eigenvalue probe.
inline bool psd_at_lambda(const AdjointableOperator& tp,
                          const AdjointableOperator& t, double lambda) {
  for (std::size_t i = 0; i < t.mats.size(); ++i) {
    if (t.mats[i].rows() == 0) continue;
    const Matrix h = lambda * (t.mats[i] * t.mats[i].adjoint()) -
                     tp.mats[i] * tp.mats[i].adjoint();
    Eigen::SelfAdjointEigenSolver<Matrix> es(0.5 * (h + h.adjoint()));
    const double scale =
        std::max(std::abs(es.eigenvalues()(0)),
                 std::abs(es.eigenvalues()(es.eigenvalues().size() - 1)));
    if (es.eigenvalues()(0) < -1e-12 * std::max(1.0, scale)) return false;
  }
  return true;
}

/// Minimal admissible lambda by pure bisection over the PSD probe;
/// +inf when doubling the upper bound never reaches an admissible value.
inline double bisection_lambda(const AdjointableOperator& tp,
                               const AdjointableOperator& t) {
  double hi = 1.0;
  int doublings = 0;
  while (!psd_at_lambda(tp, t, hi)) {
    hi *= 2.0;
    if (++doublings > 80) return kInf;
  }
  double lo = 0.0;
  if (psd_at_lambda(tp, t, 0.0)) return 0.0;
  for (int iter = 0; iter < 200; ++iter) {
    const double mid = 0.5 * (lo + hi);
    if (psd_at_lambda(tp, t, mid))
      hi = mid;
    else
      lo = mid;
    if (hi - lo <= 1e-9 * std::max(1.0, hi)) break;
  }
  return hi;
}

/// Largest singular value via power iteration on M^H M.
inline double power_sigma_max(const Matrix& m) {
  if (m.rows() == 0 || m.cols() == 0) return 0.0;
  const Matrix gram = m.adjoint() * m;
  Vector v = Vector::Ones(gram.rows());
  for (Eigen::Index i = 0; i < v.size(); ++i)
    v(i) += douglaskit::Complex(0.01 * static_cast<double>(i + 1), 0.003);
  v /= v.norm();
  double prev = 0.0;
  for (int iter = 0; iter < 2000; ++iter) {
    Vector w = gram * v;
    const double n = w.norm();
    if (n == 0.0) return 0.0;
    v = w / n;
    if (iter > 4 && std::abs(n - prev) <= 1e-15 * std::max(1.0, n)) {
      prev = n;
      break;
    }
    prev = n;
  }
  return std::sqrt(prev);
}

/// Eigenvalues of a Hermitian 2x2 matrix from the characteristic polynomial,
/// ascending.
inline std::pair<double, double> charpoly_eigs_2x2(const Matrix& m) {
  const double tr = (m(0, 0) + m(1, 1)).real();
  const double det = (m(0, 0) * m(1, 1) - m(0, 1) * m(1, 0)).real();
  const double disc = std::sqrt(std::max(0.0, tr * tr - 4.0 * det));
  return {(tr - disc) / 2.0, (tr + disc) / 2.0};
}

/// Minimal-norm least-squares action through a complete orthogonal
/// decomposition: an independent route to pinv(A) * B.
inline Matrix cod_pinv_apply(const Matrix& a, const Matrix& b) {
  Eigen::CompleteOrthogonalDecomposition<Matrix> cod(a);
  return cod.solve(b);
}

/// Least-squares residual of b against the columns of A.
inline double lstsq_residual(const Matrix& a, const Vector& b) {
  if (a.cols() == 0) return b.norm();
  const Vector x = Eigen::ColPivHouseholderQR<Matrix>(a).solve(b);
  return (a * x - b).norm();
}

/// Rank through a column-pivoted QR, independent of the SVD cutoff rule.
inline int qr_rank(const Matrix& m, double rtol) {
  if (m.rows() == 0 || m.cols() == 0) return 0;
  Eigen::ColPivHouseholderQR<Matrix> qr(m);
  qr.setThreshold(rtol);
  return static_cast<int>(qr.rank());
}

}  // namespace oracles
