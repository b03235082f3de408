#pragma once

#include <optional>
#include <string>
#include <vector>

#include "douglaskit/module.hpp"

// Majorization and range inclusion for adjointable operators T' and T with a
// common codomain. Four classically equivalent conditions are decided here,
// each by its own computation:
//
//   (i)   T'(T')* <= lambda T T* for some lambda > 0
//   (ii)  ||(T')* z|| <= mu ||T* z|| for all z
//   (iii) T' = TX has an adjointable solution
//   (iv)  range(T') is contained in range(T)
//
// plus the minimal constant lambda* (attained because the positive cone is
// closed), the unique reduced solution D with range(D) in N(T)-perp and
// ||D||^2 = lambda*, and the operator V with V T* = (T')* and ||V||^2 =
// lambda*. lambda* is computed twice on purpose: once from restricted
// factors of the Gram products and once as ||D||^2 via the pseudoinverse;
// the library refuses to answer when the two routes disagree.

namespace douglaskit {

/// T' = TX has no adjointable solution; carries a direction in the codomain
/// witnessing range(T') not contained in range(T).
struct NoSolutionError : Error {
  NoSolutionError(const std::string& what, ModuleElement w)
      : Error(what), witness(std::move(w)) {}
  ModuleElement witness;
};

/// No finite lambda works; same witness semantics as NoSolutionError.
struct NotMajorizedError : Error {
  NotMajorizedError(const std::string& what, ModuleElement w)
      : Error(what), witness(std::move(w)) {}
  ModuleElement witness;
};

/// Outcome of condition (i).
struct MajorizationCheck {
  bool holds = false;
  /// Minimal constant from the restricted-factor route; +inf when !holds.
  double lambda_star = 0;
  /// Unit direction z with T* z = 0 but (T')* z != 0, when !holds.
  std::optional<ModuleElement> witness;
  bool rank_marginal = false;

  explicit operator bool() const { return holds; }
};

/// Outcome of condition (ii).
struct NormMajorizationCheck {
  bool holds = false;
  double mu_star = 0;  // +inf when !holds
  std::optional<ModuleElement> witness;
  /// Sampled evidence: sup of ||(T')*z|| / ||T*z|| over the sample set,
  /// which includes a ratio-maximizing direction.
  double empirical_ratio_sup = 0;
  bool evidence_ok = false;
  int samples = 0;
  bool rank_marginal = false;

  explicit operator bool() const { return holds; }
};

/// The unique reduced solution of T' = TD.
struct DouglasSolution {
  AdjointableOperator D;
  double residual = 0;          // opnorm(TD - T')
  bool reduced = false;         // range(D) in N(T)-perp, verified
  double reduced_residual = 0;  // opnorm of the N(T) component of D
  double norm_sq = 0;           // ||D||^2, pseudoinverse route
  double lambda_star = 0;       // factor route; must match norm_sq
  bool rank_marginal = false;
};

/// The Theorem-style four-way report.
struct MajorizationReport {
  bool holds_i = false;
  bool holds_ii = false;
  bool holds_iii = false;
  bool holds_iv = false;
  double lambda_star = 0;  // factor route; +inf when condition (i) fails
  double mu_star = 0;      // sqrt of the pseudoinverse-route lambda; +inf
  bool consistent = false;
  std::optional<ModuleElement> witness;
  std::vector<std::string> flags;

  // evidence for humans; not part of the decision
  double lambda_pinv = 0;
  double empirical_ratio_sup = 0;
  double solve_residual = 0;
  int samples = 0;
};

/// The operator V of the factorization remark: V T* = (T')*, V = 0 on N(T),
/// ||V||^2 = lambda*. At finite dimension V is adjointable and V* = D.
struct VConstruction {
  AdjointableOperator V;
  double alpha = 0;            // ||V||^2
  double vt_residual = 0;      // opnorm(V T* - (T')*)
  double alpha_gap = 0;        // |alpha - lambda*| (pseudoinverse route)
  double d_distance = 0;       // opnorm(V* - D)
  bool rank_marginal = false;
};

/// Condition (i): decided via containment of the blockwise factor ranges
/// followed by the restricted generalized-eigenvalue computation of lambda*.
MajorizationCheck check_majorization(const AdjointableOperator& tp,
                                     const AdjointableOperator& t,
                                     const ToleranceConfig& tol = {});

/// Minimal lambda with T'(T')* <= lambda TT*. Computed as ||D||^2 and cross
/// validated: against the factor route, and by PSD checks at
/// lambda(1 +/- 1e-6). Throws NotMajorizedError when no lambda exists.
double minimal_lambda(const AdjointableOperator& tp,
                      const AdjointableOperator& t,
                      const ToleranceConfig& tol = {});

/// Minimal mu with ||(T')* z|| <= mu ||T* z|| for all z; mu* = sqrt(lambda*).
double minimal_mu(const AdjointableOperator& tp, const AdjointableOperator& t,
                  const ToleranceConfig& tol = {});

/// Condition (ii): decided through the equivalence with (i) (mu* =
/// sqrt(lambda*)); sampled ratios are gathered as human-readable evidence.
NormMajorizationCheck check_norm_majorization(const AdjointableOperator& tp,
                                              const AdjointableOperator& t,
                                              const ToleranceConfig& tol = {});

/// Condition (iv): containment of range submodules.
ContainsResult range_inclusion(const AdjointableOperator& tp,
                               const AdjointableOperator& t,
                               const ToleranceConfig& tol = {});

/// Condition (iii): the unique reduced solution, blockwise pinv(T) T'.
/// Throws NoSolutionError when range inclusion fails.
DouglasSolution douglas_solve(const AdjointableOperator& tp,
                              const AdjointableOperator& t,
                              const ToleranceConfig& tol = {});

/// The remark's V. Throws NotMajorizedError when condition (i) fails.
VConstruction build_V(const AdjointableOperator& tp,
                      const AdjointableOperator& t,
                      const ToleranceConfig& tol = {});

/// All four conditions, each by its own computation, with the consistency
/// verdict. At finite dimension the four must agree.
MajorizationReport theorem_report(const AdjointableOperator& tp,
                                  const AdjointableOperator& t,
                                  const ToleranceConfig& tol = {});

}  // namespace douglaskit
