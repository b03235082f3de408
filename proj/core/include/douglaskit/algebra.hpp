#pragma once

#include <complex>
#include <functional>
#include <optional>
#include <vector>

#include <Eigen/Dense>

#include "douglaskit/errors.hpp"
#include "douglaskit/tolerance.hpp"

// Finite-dimensional C*-algebras presented as direct sums of complex matrix
// blocks: arithmetic, the C*-norm, positivity with witnesses, spectra,
// continuous functional calculus and vector states. Every finite-dimensional
// C*-algebra is isomorphic to such a direct sum, so nothing is lost by the
// concrete presentation and everything becomes computable.

namespace douglaskit {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;

/// Shape of a block algebra: one side length per matrix summand.
struct AlgebraShape {
  std::vector<int> block_dims;

  AlgebraShape() = default;
  explicit AlgebraShape(std::vector<int> dims);

  int block_count() const { return static_cast<int>(block_dims.size()); }
  int total_dim() const;

  friend bool operator==(const AlgebraShape&, const AlgebraShape&) = default;
};

/// An element of the block algebra: one square complex matrix per block.
struct AlgebraElement {
  AlgebraShape shape;
  std::vector<Matrix> blocks;

  AlgebraElement() = default;
  AlgebraElement(AlgebraShape s, std::vector<Matrix> b);

  static AlgebraElement zero(const AlgebraShape& s);
  static AlgebraElement identity(const AlgebraShape& s);
};

AlgebraElement operator+(const AlgebraElement& x, const AlgebraElement& y);
AlgebraElement operator-(const AlgebraElement& x, const AlgebraElement& y);
AlgebraElement operator*(const AlgebraElement& x, const AlgebraElement& y);
AlgebraElement operator*(Complex c, const AlgebraElement& x);
AlgebraElement operator*(double c, const AlgebraElement& x);

/// Blockwise product. Same as operator*, kept as a named operation.
AlgebraElement multiply(const AlgebraElement& x, const AlgebraElement& y);

/// Involution: conjugate transpose per block.
AlgebraElement adjoint(const AlgebraElement& x);

/// C*-norm: the largest singular value over all blocks.
double norm(const AlgebraElement& x);

/// Operator-norm distance ||x - y||.
double distance(const AlgebraElement& x, const AlgebraElement& y);

/// ||x - x*||, the self-adjointness defect.
double self_adjoint_defect(const AlgebraElement& x);

bool is_self_adjoint(const AlgebraElement& x, const ToleranceConfig& tol = {});

/// Why a positivity check failed.
struct PositivityWitness {
  enum class Kind { NotSelfAdjoint, NegativeDirection };
  Kind kind = Kind::NegativeDirection;
  int block = 0;
  Vector direction;  // unit vector in the offending block
  double value = 0;  // defect norm, or the negative quadratic-form value
};

struct PositivityResult {
  bool positive = false;
  double min_eigenvalue = 0;  // over all blocks, after symmetrization
  double sa_defect = 0;
  std::optional<PositivityWitness> witness;

  explicit operator bool() const { return positive; }
};

/// x >= 0: self-adjoint within tol.sa_tol and spectrum above -psd_tol*norm.
/// On failure the witness carries either the defect or a unit direction v
/// with <v, xv> below the floor.
PositivityResult is_positive(const AlgebraElement& x,
                             const ToleranceConfig& tol = {});

/// Eigenvalues of a self-adjoint element, union over blocks with
/// multiplicity, ascending.
struct Spectrum {
  std::vector<double> values;

  double min_value() const;
  double max_value() const;
};

/// Requires x self-adjoint within tol.sa_tol (throws InvalidInputError).
Spectrum spectrum(const AlgebraElement& x, const ToleranceConfig& tol = {});

/// Continuous functional calculus: per block x = U diag(t) U*, result
/// U diag(f(t)) U*. Requires x self-adjoint within tolerance.
AlgebraElement functional_calculus(const std::function<double(double)>& f,
                                   const AlgebraElement& x,
                                   const ToleranceConfig& tol = {});

/// A vector state on the block algebra: rho(x) = v^H x_b v for a unit v
/// supported on one block. Positive, unital, linear.
struct State {
  AlgebraShape shape;
  int block_index = 0;
  Vector unit_vector;

  State() = default;
  State(AlgebraShape s, int block, Vector v);

  Complex evaluate(const AlgebraElement& x) const;
};

/// A state attaining the largest eigenvalue: rho(x) = max sp(x). For
/// positive x this equals norm(x). Requires x self-adjoint and nonzero.
State norm_attaining_state(const AlgebraElement& x,
                           const ToleranceConfig& tol = {});

}  // namespace douglaskit
