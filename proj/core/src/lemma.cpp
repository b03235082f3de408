#include "douglaskit/lemma.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "douglaskit/linalg.hpp"
#include "douglaskit/sampling.hpp"

namespace douglaskit {

namespace {

void require_positive(const AlgebraElement& x, const ToleranceConfig& tol,
                      const char* who, const char* name) {
  if (!is_positive(x, tol)) {
    std::ostringstream msg;
    msg << who << ": " << name << " is not positive";
    throw InvalidInputError(msg.str());
  }
}

ModuleElement single_column(const ModuleShape& shape, int block,
                            const Vector& v) {
  ModuleElement x = ModuleElement::zero(shape);
  x.blocks[block].col(0) = v;
  return x;
}

}  // namespace

CutoffFunction::CutoffFunction(double top) : m(top) {
  if (!(m > 0.0)) throw InvalidInputError("CutoffFunction: m must be positive");
}

double CutoffFunction::operator()(double t) const {
  if (t <= 0.5 * m) return 0.0;
  if (t >= m) return 1.0;
  return 2.0 * t / m - 1.0;
}

PositivityCharacterization check_positivity_characterization(
    const AdjointableOperator& t, const ToleranceConfig& tol) {
  if (!(t.domain == t.codomain))
    throw ShapeError("check_positivity_characterization: operator not square");

  PositivityCharacterization out;

  // spectral route: blockwise self-adjointness plus eigenvalue floor
  const double scale = operator_norm(t);
  double defect = 0.0;
  double min_eig = 0.0;
  for (const Matrix& m : t.mats) {
    if (m.rows() == 0) continue;
    defect = std::max(defect,
                      linalg::spectral_norm(Matrix(m - m.adjoint())));
    min_eig = std::min(min_eig, linalg::hermitian_eigen(m).values(0));
  }
  out.spectral = defect <= tol.sa_tol * scale && min_eig >= -tol.psd_tol * scale;

  // quadratic route: positivity of <Tx, x> for targeted probes and samples
  std::vector<ModuleElement> probes;
  for (std::size_t i = 0; i < t.mats.size(); ++i) {
    const Matrix& m = t.mats[i];
    if (m.rows() == 0) continue;
    const Matrix herm = 0.5 * (m + m.adjoint());
    const linalg::HermitianEigen hev = linalg::hermitian_eigen(herm);
    probes.push_back(single_column(t.domain, static_cast<int>(i),
                                   hev.vectors.col(0)));
    const Matrix skew = Matrix((m - m.adjoint()) / Complex(0.0, 2.0));
    if (linalg::spectral_norm(skew) > 0.0) {
      const linalg::HermitianEigen sev = linalg::hermitian_eigen(skew);
      const Eigen::Index top =
          std::abs(sev.values(0)) > std::abs(sev.values(sev.values.size() - 1))
              ? 0
              : sev.values.size() - 1;
      probes.push_back(single_column(t.domain, static_cast<int>(i),
                                     sev.vectors.col(top)));
    }
  }
  Sampler sampler(tol.rng_seed);
  for (int k = 0; k < tol.sample_count; ++k)
    probes.push_back(sampler.module_element(t.domain));

  out.quadratic = true;
  for (const ModuleElement& x : probes) {
    const AlgebraElement form = inner_product(apply(t, x), x);
    if (!is_positive(form, tol)) {
      out.quadratic = false;
      out.witness_x = x;
      break;
    }
  }

  out.agree = out.spectral == out.quadratic;
  return out;
}

OrderConsequences check_order_consequences(const AlgebraElement& x,
                                           const AlgebraElement& y,
                                           const AlgebraElement& z,
                                           const ToleranceConfig& tol) {
  require_positive(x, tol, "check_order_consequences", "x");
  require_positive(y, tol, "check_order_consequences", "y");
  if (!is_positive(y - x, tol))
    throw HypothesisError("check_order_consequences: x <= y does not hold");

  OrderConsequences out;
  out.norm_x = norm(x);
  out.norm_y = norm(y);
  out.norms_ordered = out.norm_x <= out.norm_y + 1e-10;

  const AlgebraElement zs = adjoint(z);
  out.congruence = is_positive(zs * y * z - zs * x * z, tol);
  out.ok = out.norms_ordered && out.congruence.positive;
  return out;
}

SquareMonotonicityVerdict square_monotonicity_forward(
    const AlgebraElement& a, const AlgebraElement& b,
    const ToleranceConfig& tol) {
  require_positive(a, tol, "square_monotonicity_forward", "a");
  require_positive(b, tol, "square_monotonicity_forward", "b");

  SquareMonotonicityVerdict out;
  out.squares_ordered = is_positive(b * b - a * a, tol).positive;

  Sampler sampler(tol.rng_seed);
  out.max_violation = -std::numeric_limits<double>::infinity();
  for (int k = 0; k < tol.sample_count; ++k) {
    const AlgebraElement c = sampler.positive(a.shape);
    out.max_violation =
        std::max(out.max_violation, norm(a * c) - norm(b * c));
  }
  out.samples = tol.sample_count;

  // when a^2 <= b^2, congruence by c and the C*-identity force
  // ||ac|| <= ||bc|| for every positive c
  out.consistent = !out.squares_ordered || out.max_violation <= 1e-9;
  return out;
}

WitnessBundle lemma_witness(const AlgebraElement& a_in,
                            const AlgebraElement& b_in,
                            const ToleranceConfig& tol) {
  require_positive(a_in, tol, "lemma_witness", "a");
  require_positive(b_in, tol, "lemma_witness", "b");

  WitnessBundle bundle;
  bundle.scale = std::max({norm(a_in), norm(b_in), 1.0});
  bundle.a = (1.0 / bundle.scale) * a_in;
  bundle.b = (1.0 / bundle.scale) * b_in;
  const AlgebraElement& a = bundle.a;
  const AlgebraElement& b = bundle.b;

  const AlgebraElement diff = a * a - b * b;
  const Spectrum sp = spectrum(diff, tol);
  bundle.m = sp.max_value();
  if (!(bundle.m > tol.psd_tol * norm(diff)) || bundle.m <= 0.0)
    throw HypothesisError(
        "lemma_witness: a^2 <= b^2 already holds, no witness exists");
  const double m = bundle.m;

  const CutoffFunction f(m);
  bundle.c = functional_calculus([&f](double t) { return f(t); }, diff, tol);
  const AlgebraElement& c = bundle.c;

  // step 1: ||c (a^2-b^2) c|| = max{t f(t)^2} = m
  const AlgebraElement cdc = c * diff * c;
  bundle.chain.top_norm_residual = std::abs(norm(cdc) - m);
  if (bundle.chain.top_norm_residual > 1e-9)
    throw NumericError("lemma_witness: ||c(a^2-b^2)c|| deviates from m");

  // step 2: c (a^2-b^2) c >= (m/2) c^2, since f vanishes below m/2
  const AlgebraElement slack = cdc - (0.5 * m) * (c * c);
  const PositivityResult slack_pos = is_positive(slack, tol);
  bundle.chain.psd_margin = slack_pos.min_eigenvalue;
  if (!slack_pos.positive)
    throw NumericError("lemma_witness: c(a^2-b^2)c - (m/2)c^2 is not positive");

  // step 3: a norm-attaining state on c b^2 c pushes the gap into scalars
  const AlgebraElement cac = c * (a * a) * c;
  const AlgebraElement cbc = c * (b * b) * c;
  const double cbc_norm = norm(cbc);
  bundle.chain.b_branch_zero = cbc_norm <= tol.psd_tol * std::max(1.0, norm(c));
  if (bundle.chain.b_branch_zero) {
    // second branch of the proof: c b^2 c = 0 while ||c a^2 c|| = m > 0
    bundle.rho = norm_attaining_state(cac, tol);
  } else {
    bundle.rho = norm_attaining_state(cbc, tol);
  }
  const double rho_cac = bundle.rho.evaluate(cac).real();
  const double rho_cbc = bundle.rho.evaluate(cbc).real();
  const double rho_cc = bundle.rho.evaluate(c * c).real();
  bundle.chain.state_gap = rho_cac - rho_cbc - 0.5 * m * rho_cc;
  if (!bundle.chain.b_branch_zero && bundle.chain.state_gap < -1e-9)
    throw NumericError("lemma_witness: state inequality failed");

  bundle.lhs_norm = norm(a * c);
  bundle.rhs_norm = norm(b * c);
  if (bundle.lhs_norm <= bundle.rhs_norm)
    throw NumericError("lemma_witness: ||ac|| > ||bc|| failed");
  return bundle;
}

}  // namespace douglaskit
