#include "douglaskit/douglas.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "douglaskit/linalg.hpp"
#include "douglaskit/sampling.hpp"

namespace douglaskit {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void require_same_codomain(const AdjointableOperator& tp,
                           const AdjointableOperator& t, const char* op) {
  if (!(tp.codomain == t.codomain)) {
    std::ostringstream msg;
    msg << op << ": operators do not share a codomain";
    throw ShapeError(msg.str());
  }
}

/// Module element supported on one block, first column = w, rest zero.
ModuleElement embed_direction(const ModuleShape& shape, int block,
                              const Vector& w) {
  ModuleElement z = ModuleElement::zero(shape);
  z.blocks[block].col(0) = w;
  return z;
}

/// Everything condition (i) needs, computed from the factor matrices T_i and
/// T'_i directly (never from the squared Gram products, which would halve
/// the usable precision).
struct FactorAnalysis {
  bool contained = false;
  double lambda = kInf;  // factor-route lambda*, finite iff contained
  bool rank_marginal = false;
  // when !contained: worst out-of-range direction
  std::optional<ModuleElement> witness;
  double witness_strength = 0;  // ||(T')* z|| for the witness z
  // when contained and lambda > 0: a codomain direction attaining the ratio
  std::optional<ModuleElement> top_direction;
  double top_weight = 0;  // <v, TT* v> at that direction
};

FactorAnalysis analyze_factors(const AdjointableOperator& tp,
                               const AdjointableOperator& t,
                               const ToleranceConfig& tol) {
  FactorAnalysis out;
  out.contained = true;
  out.lambda = 0.0;

  double worst_escape = 0.0;
  int worst_block = -1;
  Vector worst_dir;

  double best_lambda = 0.0;
  int best_block = -1;
  Vector best_dir;

  for (std::size_t i = 0; i < t.mats.size(); ++i) {
    const Matrix& tm = t.mats[i];
    const Matrix& pm = tp.mats[i];
    const double pnorm = linalg::spectral_norm(pm);
    if (pm.rows() == 0) continue;

    const linalg::RankedBasis rb = linalg::column_space(tm, tol.rank_rtol);
    out.rank_marginal = out.rank_marginal || rb.marginal;

    if (pnorm == 0.0) continue;  // zero block is contained with lambda 0

    // component of T' outside the numerical range of T
    const Matrix escape = pm - rb.basis * (rb.basis.adjoint() * pm);
    Eigen::BDCSVD<Matrix> esvd(escape, Eigen::ComputeThinU);
    const double sigma_escape =
        esvd.singularValues().size() > 0 ? esvd.singularValues()(0) : 0.0;
    const double threshold = 100.0 * tol.rank_rtol * pnorm;
    if (sigma_escape > threshold * 0.1 && sigma_escape < threshold * 10.0)
      out.rank_marginal = true;

    if (sigma_escape > threshold) {
      out.contained = false;
      if (sigma_escape > worst_escape) {
        worst_escape = sigma_escape;
        worst_block = static_cast<int>(i);
        worst_dir = esvd.matrixU().col(0);
      }
      continue;
    }

    if (rb.rank == 0) continue;  // T' vanished against a zero T block

    // restricted generalized problem: on the range of T the ratio
    //   <z, T'(T')^* z> / <z, T T^* z>
    // becomes ||N^H u||^2 / ||u||^2 for N = Sigma^-1 U^H (B^H T'), so the
    // block's contribution to lambda* is sigma_max(N)^2.
    const Matrix w = rb.basis.adjoint() * tm;
    Eigen::BDCSVD<Matrix> wsvd(w, Eigen::ComputeThinU);
    const Eigen::VectorXd sig = wsvd.singularValues();
    const Matrix wp = rb.basis.adjoint() * pm;
    Matrix n = wsvd.matrixU().adjoint() * wp;
    for (Eigen::Index r = 0; r < n.rows(); ++r) n.row(r) /= sig(r);
    Eigen::BDCSVD<Matrix> nsvd(n, Eigen::ComputeThinU);
    if (nsvd.singularValues().size() == 0) continue;
    const double block_lambda =
        nsvd.singularValues()(0) * nsvd.singularValues()(0);
    if (block_lambda > best_lambda) {
      best_lambda = block_lambda;
      best_block = static_cast<int>(i);
      Eigen::VectorXd inv_sig = sig;
      for (Eigen::Index r = 0; r < inv_sig.size(); ++r)
        inv_sig(r) = 1.0 / inv_sig(r);
      Vector v = rb.basis *
                 (wsvd.matrixU() *
                  (inv_sig.asDiagonal() * nsvd.matrixU().col(0)));
      best_dir = v / v.norm();
      out.top_weight = (tm.adjoint() * best_dir).squaredNorm();
    }
    out.lambda = std::max(out.lambda, block_lambda);
  }

  if (!out.contained) {
    out.lambda = kInf;
    out.witness = embed_direction(t.codomain, worst_block, worst_dir);
    out.witness_strength = worst_escape;
  } else if (best_block >= 0) {
    out.top_direction = embed_direction(t.codomain, best_block, best_dir);
  }
  return out;
}

std::vector<Matrix> reduced_solution_mats(const AdjointableOperator& tp,
                                          const AdjointableOperator& t,
                                          const ToleranceConfig& tol) {
  std::vector<Matrix> d;
  d.reserve(t.mats.size());
  for (std::size_t i = 0; i < t.mats.size(); ++i)
    d.push_back(linalg::pseudoinverse(t.mats[i], tol.rank_rtol) * tp.mats[i]);
  return d;
}

double mats_norm(const std::vector<Matrix>& m) {
  double n = 0.0;
  for (const Matrix& x : m) n = std::max(n, linalg::spectral_norm(x));
  return n;
}

/// min over blocks of the smallest eigenvalue of lambda T T^* - T' (T')^*,
/// and the magnitude scale of those blocks.
struct PsdProbe {
  double min_eig = kInf;
  double scale = 0.0;
};

PsdProbe psd_probe(const AdjointableOperator& tp, const AdjointableOperator& t,
                   double lambda) {
  PsdProbe probe;
  for (std::size_t i = 0; i < t.mats.size(); ++i) {
    if (t.mats[i].rows() == 0) continue;
    const Matrix h = lambda * (t.mats[i] * t.mats[i].adjoint()) -
                     tp.mats[i] * tp.mats[i].adjoint();
    const linalg::HermitianEigen ev = linalg::hermitian_eigen(h);
    probe.min_eig = std::min(probe.min_eig, ev.values(0));
    probe.scale = std::max(
        probe.scale, std::max(std::abs(ev.values(0)),
                              std::abs(ev.values(ev.values.size() - 1))));
  }
  if (probe.min_eig == kInf) probe.min_eig = 0.0;
  return probe;
}

/// lambda* from the pseudoinverse route with both cross-validations.
double validated_lambda(const AdjointableOperator& tp,
                        const AdjointableOperator& t,
                        const FactorAnalysis& fa, const ToleranceConfig& tol) {
  const double lambda = mats_norm(reduced_solution_mats(tp, t, tol));
  const double lambda_sq = lambda * lambda;

  const double route_tol = fa.rank_marginal ? 1e-6 : 1e-8;
  if (std::abs(lambda_sq - fa.lambda) >
      route_tol * std::max(1.0, lambda_sq)) {
    std::ostringstream msg;
    msg << "minimal_lambda: factor route " << fa.lambda
        << " and pseudoinverse route " << lambda_sq << " disagree";
    if (fa.rank_marginal) msg << " (rank-marginal input)";
    throw NumericError(msg.str());
  }

  const PsdProbe up = psd_probe(tp, t, lambda_sq * (1.0 + 1e-6));
  if (up.min_eig < -tol.psd_tol * std::max(1.0, up.scale)) {
    std::ostringstream msg;
    msg << "minimal_lambda: lambda*(1+1e-6) failed the PSD check, min eig "
        << up.min_eig;
    throw NumericError(msg.str());
  }

  if (lambda_sq > 1e-6 && !fa.rank_marginal) {
    const PsdProbe down = psd_probe(tp, t, lambda_sq * (1.0 - 1e-6));
    const double floor =
        100.0 * std::numeric_limits<double>::epsilon() * down.scale;
    // the attaining direction v pushes <v, (lambda' TT* - T'T'*) v> down to
    // -1e-6 lambda* <v, TT* v>; the check is decisive only when that dip is
    // measurable above the eigenvalue noise floor
    const double expected_dip = 1e-6 * lambda_sq * fa.top_weight;
    if (expected_dip > 10.0 * floor && down.min_eig >= -floor) {
      std::ostringstream msg;
      msg << "minimal_lambda: lambda*(1-1e-6) still PSD (min eig "
          << down.min_eig << "); lambda* is not minimal";
      throw NumericError(msg.str());
    }
  }
  return lambda_sq;
}

}  // namespace

MajorizationCheck check_majorization(const AdjointableOperator& tp,
                                     const AdjointableOperator& t,
                                     const ToleranceConfig& tol) {
  require_same_codomain(tp, t, "check_majorization");
  FactorAnalysis fa = analyze_factors(tp, t, tol);
  MajorizationCheck out;
  out.holds = fa.contained;
  out.lambda_star = fa.lambda;
  out.witness = std::move(fa.witness);
  out.rank_marginal = fa.rank_marginal;
  return out;
}

double minimal_lambda(const AdjointableOperator& tp,
                      const AdjointableOperator& t,
                      const ToleranceConfig& tol) {
  require_same_codomain(tp, t, "minimal_lambda");
  FactorAnalysis fa = analyze_factors(tp, t, tol);
  if (!fa.contained)
    throw NotMajorizedError("minimal_lambda: no finite lambda exists",
                            std::move(*fa.witness));
  return validated_lambda(tp, t, fa, tol);
}

double minimal_mu(const AdjointableOperator& tp, const AdjointableOperator& t,
                  const ToleranceConfig& tol) {
  return std::sqrt(minimal_lambda(tp, t, tol));
}

NormMajorizationCheck check_norm_majorization(const AdjointableOperator& tp,
                                              const AdjointableOperator& t,
                                              const ToleranceConfig& tol) {
  require_same_codomain(tp, t, "check_norm_majorization");
  FactorAnalysis fa = analyze_factors(tp, t, tol);
  NormMajorizationCheck out;
  out.rank_marginal = fa.rank_marginal;
  if (!fa.contained) {
    out.holds = false;
    out.mu_star = kInf;
    out.witness = std::move(fa.witness);
    return out;
  }
  out.holds = true;
  out.mu_star = std::sqrt(validated_lambda(tp, t, fa, tol));

  // sampled evidence, with the ratio-maximizing direction included
  const AdjointableOperator tp_adj = adjoint_op(tp);
  const AdjointableOperator t_adj = adjoint_op(t);
  const double scale = std::max(
      {1.0, operator_norm(t), operator_norm(tp)});
  Sampler sampler(tol.rng_seed);
  std::vector<ModuleElement> zs;
  zs.reserve(tol.sample_count + 1);
  for (int k = 0; k < tol.sample_count; ++k)
    zs.push_back(sampler.module_element(t.codomain));
  if (fa.top_direction) zs.push_back(*fa.top_direction);

  bool all_bounded = true;
  double sup = 0.0;
  for (const ModuleElement& z : zs) {
    const double lhs = element_norm(apply(tp_adj, z));
    const double rhs = element_norm(apply(t_adj, z));
    if (lhs > out.mu_star * rhs + 1e-9) all_bounded = false;
    if (rhs > 1e-12 * scale * element_norm(z))
      sup = std::max(sup, lhs / rhs);
  }
  out.samples = static_cast<int>(zs.size());
  out.empirical_ratio_sup = sup;
  out.evidence_ok = all_bounded && sup >= 0.99 * out.mu_star;
  return out;
}

ContainsResult range_inclusion(const AdjointableOperator& tp,
                               const AdjointableOperator& t,
                               const ToleranceConfig& tol) {
  require_same_codomain(tp, t, "range_inclusion");
  return submodule_contains(range_submodule(t, tol), range_submodule(tp, tol),
                            tol);
}

DouglasSolution douglas_solve(const AdjointableOperator& tp,
                              const AdjointableOperator& t,
                              const ToleranceConfig& tol) {
  require_same_codomain(tp, t, "douglas_solve");
  const ContainsResult inc = range_inclusion(tp, t, tol);
  if (!inc.contains) {
    const ContainsWitness& w = *inc.witness;
    throw NoSolutionError(
        "douglas_solve: range(T') is not contained in range(T)",
        embed_direction(t.codomain, w.block, w.column));
  }

  FactorAnalysis fa = analyze_factors(tp, t, tol);
  if (!fa.contained)
    throw NumericError(
        "douglas_solve: range-inclusion routes disagree (rank-marginal "
        "input); refusing to solve");

  DouglasSolution sol;
  sol.rank_marginal = inc.rank_marginal || fa.rank_marginal;
  sol.D = AdjointableOperator(tp.domain, t.domain,
                              reduced_solution_mats(tp, t, tol));

  const double d_norm = operator_norm(sol.D);
  sol.norm_sq = d_norm * d_norm;
  sol.lambda_star = fa.lambda;

  sol.residual = operator_distance(compose(t, sol.D), tp);
  const double res_bound = 1e-10 * (1.0 + operator_norm(t) * d_norm);
  if (sol.residual > res_bound) {
    std::ostringstream msg;
    msg << "douglas_solve: TD - T' residual " << sol.residual
        << " exceeds bound " << res_bound;
    throw NumericError(msg.str());
  }

  // range(D) must lie in N(T)-perp: the kernel component of D vanishes.
  const Submodule ker = null_submodule(t, tol);
  double red = 0.0;
  for (std::size_t i = 0; i < sol.D.mats.size(); ++i) {
    const Matrix& kb = ker.bases[i];
    if (kb.cols() == 0) continue;
    red = std::max(red, linalg::spectral_norm(
                            Matrix(kb * (kb.adjoint() * sol.D.mats[i]))));
  }
  sol.reduced_residual = red;
  sol.reduced = red <= 1e-10 * std::max(1.0, d_norm);
  if (!sol.reduced) {
    std::ostringstream msg;
    msg << "douglas_solve: solution is not reduced, kernel component " << red;
    throw NumericError(msg.str());
  }

  const double id_tol = sol.rank_marginal ? 1e-6 : 1e-8;
  if (std::abs(sol.norm_sq - sol.lambda_star) >
      id_tol * std::max(1.0, sol.norm_sq)) {
    std::ostringstream msg;
    msg << "douglas_solve: ||D||^2 = " << sol.norm_sq
        << " does not match lambda* = " << sol.lambda_star;
    throw NumericError(msg.str());
  }
  return sol;
}

VConstruction build_V(const AdjointableOperator& tp,
                      const AdjointableOperator& t,
                      const ToleranceConfig& tol) {
  require_same_codomain(tp, t, "build_V");
  FactorAnalysis fa = analyze_factors(tp, t, tol);
  if (!fa.contained)
    throw NotMajorizedError("build_V: no finite lambda exists",
                            std::move(*fa.witness));

  // V(T^* z) = (T')^* z extended by zero on N(T): blockwise
  // V_i = (T'_i)^H pinv(T_i^H). Built from its own pseudoinverse so the
  // comparison against D is a genuine cross-check.
  std::vector<Matrix> vmats;
  vmats.reserve(t.mats.size());
  for (std::size_t i = 0; i < t.mats.size(); ++i)
    vmats.push_back(tp.mats[i].adjoint() *
                    linalg::pseudoinverse(t.mats[i].adjoint(), tol.rank_rtol));

  VConstruction out;
  out.rank_marginal = fa.rank_marginal;
  out.V = AdjointableOperator(t.domain, tp.domain, std::move(vmats));

  const double v_norm = operator_norm(out.V);
  out.alpha = v_norm * v_norm;

  out.vt_residual =
      operator_distance(compose(out.V, adjoint_op(t)), adjoint_op(tp));
  const double bound = 1e-10 * (1.0 + v_norm * operator_norm(t));
  if (out.vt_residual > bound) {
    std::ostringstream msg;
    msg << "build_V: V T* - (T')* residual " << out.vt_residual
        << " exceeds bound " << bound;
    throw NumericError(msg.str());
  }

  const double lambda = validated_lambda(tp, t, fa, tol);
  out.alpha_gap = std::abs(out.alpha - lambda);

  const AdjointableOperator d(tp.domain, t.domain,
                              reduced_solution_mats(tp, t, tol));
  out.d_distance = operator_distance(adjoint_op(out.V), d);
  return out;
}

MajorizationReport theorem_report(const AdjointableOperator& tp,
                                  const AdjointableOperator& t,
                                  const ToleranceConfig& tol) {
  require_same_codomain(tp, t, "theorem_report");
  MajorizationReport rep;

  const MajorizationCheck c1 = check_majorization(tp, t, tol);
  rep.holds_i = c1.holds;
  rep.lambda_star = c1.lambda_star;

  const NormMajorizationCheck c2 = check_norm_majorization(tp, t, tol);
  rep.holds_ii = c2.holds;
  rep.mu_star = c2.mu_star;
  rep.empirical_ratio_sup = c2.empirical_ratio_sup;
  rep.samples = c2.samples;
  rep.lambda_pinv = std::isfinite(c2.mu_star) ? c2.mu_star * c2.mu_star : kInf;

  const ContainsResult c4 = range_inclusion(tp, t, tol);
  rep.holds_iv = c4.contains;

  try {
    const DouglasSolution sol = douglas_solve(tp, t, tol);
    rep.holds_iii = true;
    rep.solve_residual = sol.residual;
  } catch (const NoSolutionError&) {
    rep.holds_iii = false;
  }

  if (c1.rank_marginal || c2.rank_marginal || c4.rank_marginal)
    rep.flags.push_back("rank-marginal");
  if (c2.holds && !c2.evidence_ok) rep.flags.push_back("evidence-shortfall");

  const bool agreement = rep.holds_i == rep.holds_ii &&
                         rep.holds_ii == rep.holds_iii &&
                         rep.holds_iii == rep.holds_iv;
  bool lambda_ok = true;
  if (agreement && rep.holds_i) {
    lambda_ok = std::abs(rep.mu_star * rep.mu_star - rep.lambda_star) <=
                1e-8 * std::max(1.0, rep.lambda_star);
    if (!lambda_ok) rep.flags.push_back("lambda-route-gap");
  }
  rep.consistent = agreement && lambda_ok;

  if (c1.witness)
    rep.witness = c1.witness;
  else if (!rep.holds_iv && c4.witness)
    rep.witness =
        embed_direction(t.codomain, c4.witness->block, c4.witness->column);
  return rep;
}

}  // namespace douglaskit
