#pragma once

#include <complex>

#include <Eigen/Dense>

// Dense complex helpers shared by the domain modules. Everything here is a
// thin, empty-matrix-safe layer over Eigen decompositions; the rank rule
// (keep sigma > rtol * sigma_max) is applied uniformly so that range,
// kernel and pseudoinverse computations agree on what the rank is.

namespace douglaskit::linalg {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;

/// Largest singular value; 0 for matrices with no rows or no columns.
double spectral_norm(const Matrix& m);

/// Singular values in descending order (empty for degenerate sizes).
RealVector singular_values(const Matrix& m);

struct RankedBasis {
  Matrix basis;         // orthonormal columns
  int rank = 0;
  bool marginal = false;  // some sigma fell within a decade of the cutoff
};

/// Orthonormal basis of the column space, rank decided by rtol.
RankedBasis column_space(const Matrix& m, double rtol);

/// Orthonormal basis of the null space, rank decided by rtol.
RankedBasis null_space(const Matrix& m, double rtol);

/// Moore-Penrose pseudoinverse with the same sigma cutoff.
Matrix pseudoinverse(const Matrix& m, double rtol);

struct HermitianEigen {
  RealVector values;  // ascending
  Matrix vectors;     // unitary, columns match values
};

/// Eigendecomposition of (m + m^H)/2. Callers decide beforehand whether the
/// symmetrization is legitimate for their tolerance.
HermitianEigen hermitian_eigen(const Matrix& m);

/// Positive square root of a Hermitian PSD matrix; eigenvalues below zero
/// (rounding noise) are clipped to zero.
Matrix hermitian_sqrt(const Matrix& m);

/// Orthonormal basis of the orthogonal complement of span(basis) in C^dim.
/// basis must have orthonormal columns.
Matrix orthogonal_complement_basis(const Matrix& basis, Eigen::Index dim);

/// Smallest eigenvalue of (m + m^H)/2; +inf for 0x0 input.
double min_hermitian_eigenvalue(const Matrix& m);

}  // namespace douglaskit::linalg
