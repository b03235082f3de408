#pragma once

#include <optional>

#include "douglaskit/douglas.hpp"

// Executable verifiers for the order lemmas that drive the majorization
// machinery, including the full constructive pipeline for the square
// comparison statement: if ||ac|| <= ||bc|| for every positive c then
// a^2 <= b^2. The contrapositive is what a computer can certify: whenever
// a^2 <= b^2 fails, a cutoff function of a^2 - b^2 produces a concrete
// positive c with ||ac|| > ||bc||, and every inequality along the proof
// chain is checked numerically.

namespace douglaskit {

/// Piecewise-linear cutoff: 0 below m/2, linear ramp on (m/2, m), 1 above m.
/// Continuous with 0 <= f <= 1.
struct CutoffFunction {
  double m = 1.0;

  explicit CutoffFunction(double top);
  double operator()(double t) const;
};

/// Positivity of a square operator characterized two ways that must agree:
/// by its spectrum and by the sign of <Tx, x> over probes and samples.
struct PositivityCharacterization {
  bool spectral = false;
  bool quadratic = false;
  bool agree = false;
  std::optional<ModuleElement> witness_x;  // x with <Tx,x> not positive
};

PositivityCharacterization check_positivity_characterization(
    const AdjointableOperator& t, const ToleranceConfig& tol = {});

/// Consequences of 0 <= x <= y: the norms compare and the order survives
/// congruence by any z.
struct OrderConsequences {
  double norm_x = 0;
  double norm_y = 0;
  bool norms_ordered = false;
  PositivityResult congruence;  // positivity of z* y z - z* x z
  bool ok = false;
};

/// Throws HypothesisError unless x, y are positive with x <= y.
OrderConsequences check_order_consequences(const AlgebraElement& x,
                                           const AlgebraElement& y,
                                           const AlgebraElement& z,
                                           const ToleranceConfig& tol = {});

/// Forward direction of the square comparison for positive a, b: decide
/// a^2 <= b^2 exactly by spectrum, and check the sampled norm hypothesis
/// against it for consistency.
struct SquareMonotonicityVerdict {
  bool squares_ordered = false;  // a^2 <= b^2, decided spectrally
  int samples = 0;
  /// max over sampled positive c of ||ac|| - ||bc|| (positive = violation)
  double max_violation = 0;
  /// when squares_ordered, no sampled c may violate the norm inequality
  bool consistent = false;
};

SquareMonotonicityVerdict square_monotonicity_forward(
    const AlgebraElement& a, const AlgebraElement& b,
    const ToleranceConfig& tol = {});

/// The constructive witness. Inputs are rescaled so both norms are <= 1
/// (recorded in scale); all members refer to the rescaled elements.
struct WitnessBundle {
  AlgebraElement a;
  AlgebraElement b;
  AlgebraElement c;
  double scale = 1.0;  // original inputs were divided by this
  double m = 0;        // top of sp(a^2 - b^2), positive
  State rho;
  double lhs_norm = 0;  // ||ac||
  double rhs_norm = 0;  // ||bc||

  struct Chain {
    double top_norm_residual = 0;  // | ||c(a^2-b^2)c|| - m |
    double psd_margin = 0;         // min eig of c(a^2-b^2)c - (m/2) c^2
    double state_gap = 0;  // rho(c a^2 c) - rho(c b^2 c) - (m/2) rho(c^2)
    bool b_branch_zero = false;  // c b^2 c = 0, the proof's second branch
  } chain;
};

/// Builds and verifies the witness for positive a, b with a^2 not below
/// b^2. Throws HypothesisError when a^2 <= b^2 (no witness exists) and
/// InvalidInputError when a or b is not positive.
WitnessBundle lemma_witness(const AlgebraElement& a, const AlgebraElement& b,
                            const ToleranceConfig& tol = {});

}  // namespace douglaskit
