#pragma once

#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

#include "douglaskit/douglas.hpp"

// Finite truncations of the multiplication-operator construction whose
// infinite-dimensional version defeats range inclusion: T(x) = s x for a
// positive s with dense range, T' = (TT*)^(1/2). At every finite size the
// equation TX = T' is solvable, but the solution is forced to act as the
// identity, so the element a = X*(I) is the full identity matrix whose
// column norms never decay. The sweep measures exactly that: the obstruction
// to a compact-like limit shows up as tail mass pinned at one.

namespace douglaskit {

struct TruncationFamily {
  enum class Kind { Harmonic, Geometric, Custom };

  Kind kind = Kind::Harmonic;
  std::string name = "harmonic";
  std::vector<int> sizes;
  /// sigma(j) for j = 1, 2, ...: strictly positive, decreasing toward zero.
  std::function<double(int)> sigma;

  static TruncationFamily harmonic(std::vector<int> sizes);
  static TruncationFamily geometric(std::vector<int> sizes);
  static TruncationFamily custom(std::vector<int> sizes,
                                 std::vector<double> sigmas);

  void validate() const;  // throws InvalidInputError
};

/// Diagonal s_n = diag(sigma(1), ..., sigma(n)) as a one-block element.
AlgebraElement truncated_multiplier(const TruncationFamily& family, int n);

struct MultiplicationPair {
  AdjointableOperator T;       // x -> s x
  AdjointableOperator Tprime;  // (TT*)^(1/2), equals s-multiplication
  double sqrt_residual = 0;    // opnorm((TT*)^(1/2) - T)
};

/// Throws InvalidInputError unless s is positive with a single block.
MultiplicationPair build_multiplication_pair(const AlgebraElement& s,
                                             const ToleranceConfig& tol = {});

struct Restriction {
  Submodule G;             // closure of range(T*), always closed here
  AdjointableOperator S;   // T restricted to G, in G's basis coordinates
  double adjoint_agreement = 0;  // max over samples of ||emb(S*u) - T*u||
  bool range_contained = false;  // range(S) inside range(T)
};

Restriction restriction_S(const AdjointableOperator& t,
                          const ToleranceConfig& tol = {});

struct RestrictionCertificate {
  AdjointableOperator X;  // reduced solution of S = TX
  double forced_identity_residual = 0;  // max ||X* z - z|| over basis z of G
  bool complemented = false;
  bool passed = false;
};

/// Solves S = TX and verifies the identity X* z = z on G forced by taking
/// adjoints, plus the orthogonal complementation of G.
RestrictionCertificate verify_restriction_solution(
    const AdjointableOperator& t, const ToleranceConfig& tol = {});

struct ObstructionReport {
  int n = 0;
  double forced_identity_residual = 0;  // max over test u of ||Xu - u||
  AlgebraElement a_element;             // a = X*(I)
  std::vector<double> tail_mass;   // k -> sup_{j>k} ||column_j(a)||
  std::vector<double> sigma_tail;  // k -> sup_{j>k} sigma_j(a)
  std::vector<double> sigma_values;  // the multiplier spectrum sigma_1..sigma_n
  double lambda_star = 0;
};

/// One report per size in the family, ordered by n.
std::vector<ObstructionReport> obstruction_sweep(
    const TruncationFamily& family, const ToleranceConfig& tol = {});

/// Deterministic CSV: one "tail" row per (n, k) and one "summary" row per n.
/// Byte-identical for identical inputs.
void write_sweep_csv(const std::vector<ObstructionReport>& reports,
                     const TruncationFamily& family,
                     const ToleranceConfig& tol, std::ostream& out);

}  // namespace douglaskit
