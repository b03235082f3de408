#pragma once

#include <optional>
#include <vector>

#include "douglaskit/algebra.hpp"

// Hilbert C*-modules over block algebras in their concrete form: block i of
// the module is the space of p_i x n_i complex matrices over the algebra
// block M_{n_i}, the algebra-valued inner product is <x,y> = x^H y per block,
// and every adjointable map between such modules acts as blockwise left
// multiplication. Closed submodules are parameterized by column subspaces.

namespace douglaskit {

struct ModuleShape {
  AlgebraShape algebra;
  std::vector<int> row_dims;  // p_i >= 0, one per algebra block

  ModuleShape() = default;
  ModuleShape(AlgebraShape alg, std::vector<int> rows);

  int block_count() const { return static_cast<int>(row_dims.size()); }

  friend bool operator==(const ModuleShape&, const ModuleShape&) = default;
};

struct ModuleElement {
  ModuleShape shape;
  std::vector<Matrix> blocks;  // p_i x n_i

  ModuleElement() = default;
  ModuleElement(ModuleShape s, std::vector<Matrix> b);

  static ModuleElement zero(const ModuleShape& s);
};

ModuleElement operator+(const ModuleElement& x, const ModuleElement& y);
ModuleElement operator-(const ModuleElement& x, const ModuleElement& y);
ModuleElement operator*(Complex c, const ModuleElement& x);
/// Right algebra action x.a, blockwise x_i a_i.
ModuleElement operator*(const ModuleElement& x, const AlgebraElement& a);

/// <x,y> = x^H y per block: conjugate-linear in x, algebra-linear in y.
AlgebraElement inner_product(const ModuleElement& x, const ModuleElement& y);

/// sqrt(norm(<x,x>)) = largest singular value over blocks.
double element_norm(const ModuleElement& x);

/// A module map acting as left multiplication by mats[i] on block i.
struct AdjointableOperator {
  ModuleShape domain;
  ModuleShape codomain;  // same algebra
  std::vector<Matrix> mats;  // q_i x p_i

  AdjointableOperator() = default;
  AdjointableOperator(ModuleShape dom, ModuleShape codom,
                      std::vector<Matrix> m);

  static AdjointableOperator identity(const ModuleShape& s);
  static AdjointableOperator zero(const ModuleShape& dom,
                                  const ModuleShape& codom);
};

ModuleElement apply(const AdjointableOperator& t, const ModuleElement& x);

/// The adjoint T*: blockwise conjugate transpose; <Tx,y> = <x,T*y>.
AdjointableOperator adjoint_op(const AdjointableOperator& t);

/// Composition a after b.
AdjointableOperator compose(const AdjointableOperator& a,
                            const AdjointableOperator& b);

AdjointableOperator operator+(const AdjointableOperator& a,
                              const AdjointableOperator& b);
AdjointableOperator operator-(const AdjointableOperator& a,
                              const AdjointableOperator& b);
AdjointableOperator operator*(Complex c, const AdjointableOperator& a);
AdjointableOperator operator*(double c, const AdjointableOperator& a);

double operator_norm(const AdjointableOperator& t);
double operator_distance(const AdjointableOperator& a,
                         const AdjointableOperator& b);

/// A square operator on the module with rows p is an element of the algebra
/// with blocks M_{p_i}. Requires domain == codomain and every p_i >= 1.
AlgebraElement as_algebra_element(const AdjointableOperator& t);

/// A closed submodule {x : every column of x_i lies in W_i}, stored by
/// orthonormal bases of the subspaces W_i.
struct Submodule {
  ModuleShape ambient;
  std::vector<Matrix> bases;  // q_i x r_i, orthonormal columns
  bool rank_marginal = false; // a generating rank decision was near the cutoff

  Submodule() = default;
  Submodule(ModuleShape amb, std::vector<Matrix> b, bool marginal = false);

  static Submodule zero(const ModuleShape& amb);
  static Submodule full(const ModuleShape& amb);

  std::vector<int> dims() const;
};

/// Column space of T, blockwise, as a submodule of the codomain. Closed
/// because everything here is finite-dimensional.
Submodule range_submodule(const AdjointableOperator& t,
                          const ToleranceConfig& tol = {});

/// {x : Tx = 0} as a submodule of the domain.
Submodule null_submodule(const AdjointableOperator& t,
                         const ToleranceConfig& tol = {});

Submodule orthogonal_complement(const Submodule& f);

/// Orthogonal projection onto the submodule, as an operator on the ambient.
AdjointableOperator projector(const Submodule& f);

struct ComplementCertificate {
  bool complemented = false;
  std::vector<int> dims;    // r_i
  std::vector<int> codims;  // q_i - r_i
  double projector_residual = 0;  // || P_F + P_Fperp - I ||
  bool rank_marginal = false;
};

/// Verifies E = F (+) Fperp blockwise: dimensions add up and the two
/// projectors sum to the identity. Always true at finite dimension; the
/// certificate records the arithmetic that proves it for this input.
ComplementCertificate check_orthogonally_complemented(const Submodule& f);

struct ContainsWitness {
  int block = 0;
  Vector column;     // unit direction in G not captured by F
  double residual = 0;
};

struct ContainsResult {
  bool contains = false;
  std::optional<ContainsWitness> witness;
  bool rank_marginal = false;

  explicit operator bool() const { return contains; }
};

/// G subset-of F: every basis column of G lies in span(F) within
/// 100 * rank_rtol. On failure the worst column is returned as a witness.
ContainsResult submodule_contains(const Submodule& f, const Submodule& g,
                                  const ToleranceConfig& tol = {});

}  // namespace douglaskit
