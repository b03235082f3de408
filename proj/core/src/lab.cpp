#include "douglaskit/lab.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <ostream>
#include <sstream>

#include "douglaskit/linalg.hpp"
#include "douglaskit/sampling.hpp"

namespace douglaskit {

namespace {

std::string format_double(double v) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

ModuleShape square_matrix_module(int n) {
  return ModuleShape(AlgebraShape({n}), {n});
}

}  // namespace

TruncationFamily TruncationFamily::harmonic(std::vector<int> sizes) {
  TruncationFamily f;
  f.kind = Kind::Harmonic;
  f.name = "harmonic";
  f.sizes = std::move(sizes);
  f.sigma = [](int j) { return 1.0 / j; };
  f.validate();
  return f;
}

TruncationFamily TruncationFamily::geometric(std::vector<int> sizes) {
  TruncationFamily f;
  f.kind = Kind::Geometric;
  f.name = "geometric";
  f.sizes = std::move(sizes);
  f.sigma = [](int j) { return std::ldexp(1.0, -(j - 1)); };
  f.validate();
  return f;
}

TruncationFamily TruncationFamily::custom(std::vector<int> sizes,
                                          std::vector<double> sigmas) {
  TruncationFamily f;
  f.kind = Kind::Custom;
  f.name = "custom";
  f.sizes = std::move(sizes);
  const int need = f.sizes.empty()
                       ? 0
                       : *std::max_element(f.sizes.begin(), f.sizes.end());
  if (static_cast<int>(sigmas.size()) < need)
    throw InvalidInputError(
        "TruncationFamily: custom sigma list shorter than largest size");
  f.sigma = [values = std::move(sigmas)](int j) { return values[j - 1]; };
  f.validate();
  return f;
}

void TruncationFamily::validate() const {
  if (sizes.empty())
    throw InvalidInputError("TruncationFamily: sizes must be nonempty");
  for (std::size_t i = 0; i < sizes.size(); ++i) {
    if (sizes[i] < 1)
      throw InvalidInputError("TruncationFamily: sizes must be >= 1");
    if (i > 0 && sizes[i] <= sizes[i - 1])
      throw InvalidInputError("TruncationFamily: sizes must be increasing");
  }
  if (!sigma) throw InvalidInputError("TruncationFamily: missing sigma rule");
  const int largest = sizes.back();
  for (int j = 1; j <= largest; ++j)
    if (!(sigma(j) > 0.0))
      throw InvalidInputError("TruncationFamily: sigma must stay positive");
}

AlgebraElement truncated_multiplier(const TruncationFamily& family, int n) {
  Matrix s = Matrix::Zero(n, n);
  for (int j = 1; j <= n; ++j) s(j - 1, j - 1) = family.sigma(j);
  return AlgebraElement(AlgebraShape({n}), {s});
}

MultiplicationPair build_multiplication_pair(const AlgebraElement& s,
                                             const ToleranceConfig& tol) {
  if (s.shape.block_count() != 1)
    throw InvalidInputError("build_multiplication_pair: s must be one block");
  if (!is_positive(s, tol))
    throw InvalidInputError("build_multiplication_pair: s is not positive");

  const int n = s.shape.block_dims[0];
  const ModuleShape mod = square_matrix_module(n);

  MultiplicationPair pair;
  pair.T = AdjointableOperator(mod, mod, {s.blocks[0]});
  const Matrix gram = s.blocks[0] * s.blocks[0].adjoint();
  Matrix root = linalg::hermitian_sqrt(gram);
  pair.sqrt_residual = linalg::spectral_norm(Matrix(root - s.blocks[0]));
  if (pair.sqrt_residual > 1e-10 * std::max(1.0, norm(s)))
    throw NumericError(
        "build_multiplication_pair: (TT*)^(1/2) drifted away from s");
  pair.Tprime = AdjointableOperator(mod, mod, {std::move(root)});
  return pair;
}

Restriction restriction_S(const AdjointableOperator& t,
                          const ToleranceConfig& tol) {
  Restriction out;
  out.G = range_submodule(adjoint_op(t), tol);

  std::vector<int> g_rows;
  g_rows.reserve(out.G.bases.size());
  for (const Matrix& b : out.G.bases) g_rows.push_back(static_cast<int>(b.cols()));
  const ModuleShape g_shape(t.domain.algebra, std::move(g_rows));

  std::vector<Matrix> smats;
  smats.reserve(t.mats.size());
  for (std::size_t i = 0; i < t.mats.size(); ++i)
    smats.push_back(t.mats[i] * out.G.bases[i]);
  out.S = AdjointableOperator(g_shape, t.codomain, std::move(smats));

  // S* u = T* u for every u in the codomain, after embedding G back in E
  const AdjointableOperator s_adj = adjoint_op(out.S);
  const AdjointableOperator t_adj = adjoint_op(t);
  Sampler sampler(tol.rng_seed);
  double worst = 0.0;
  for (int k = 0; k < tol.sample_count; ++k) {
    const ModuleElement u = sampler.module_element(t.codomain);
    const ModuleElement via_s = apply(s_adj, u);
    ModuleElement embedded = ModuleElement::zero(t.domain);
    for (std::size_t i = 0; i < embedded.blocks.size(); ++i)
      embedded.blocks[i] = out.G.bases[i] * via_s.blocks[i];
    worst = std::max(worst, element_norm(embedded - apply(t_adj, u)));
  }
  out.adjoint_agreement = worst;

  out.range_contained =
      submodule_contains(range_submodule(t, tol),
                         range_submodule(out.S, tol), tol)
          .contains;
  return out;
}

RestrictionCertificate verify_restriction_solution(
    const AdjointableOperator& t, const ToleranceConfig& tol) {
  const Restriction restr = restriction_S(t, tol);
  RestrictionCertificate cert;
  cert.X = douglas_solve(restr.S, t, tol).D;

  // taking adjoints in S = TX forces X* z = z for every z in G; in basis
  // coordinates that is X_i^H B_i = I
  double worst = 0.0;
  for (std::size_t i = 0; i < cert.X.mats.size(); ++i) {
    const Matrix& b = restr.G.bases[i];
    if (b.cols() == 0) continue;
    const Matrix gap = cert.X.mats[i].adjoint() * b -
                       Matrix::Identity(b.cols(), b.cols());
    worst = std::max(worst, linalg::spectral_norm(gap));
  }
  cert.forced_identity_residual = worst;
  cert.complemented = check_orthogonally_complemented(restr.G).complemented;
  cert.passed = cert.forced_identity_residual <= 1e-10 && cert.complemented;
  return cert;
}

std::vector<ObstructionReport> obstruction_sweep(
    const TruncationFamily& family, const ToleranceConfig& tol) {
  family.validate();
  std::vector<ObstructionReport> reports;
  reports.reserve(family.sizes.size());

  for (int n : family.sizes) {
    const AlgebraElement s = truncated_multiplier(family, n);
    const MultiplicationPair pair = build_multiplication_pair(s, tol);
    const DouglasSolution sol = douglas_solve(pair.Tprime, pair.T, tol);
    const Matrix& x = sol.D.mats[0];

    ObstructionReport rep;
    rep.n = n;
    rep.lambda_star = sol.norm_sq;
    rep.sigma_values.reserve(n);
    for (int j = 1; j <= n; ++j) rep.sigma_values.push_back(family.sigma(j));

    // forced identity Xu = u: matrix units of the module are columns, so a
    // sweep over them is a sweep over columns of X - I; seeded random test
    // elements are added on top
    const Matrix gap = x - Matrix::Identity(n, n);
    double worst = 0.0;
    for (int j = 0; j < n; ++j) worst = std::max(worst, gap.col(j).norm());
    Sampler sampler(tol.rng_seed);
    for (int k = 0; k < 8; ++k) {
      const Matrix u = sampler.matrix(n, n);
      worst = std::max(worst, linalg::spectral_norm(Matrix(x * u - u)) /
                                  std::max(1.0, linalg::spectral_norm(u)));
    }
    rep.forced_identity_residual = worst;

    // a = X*(I), the element the infinite-dimensional argument forbids
    const Matrix a = x.adjoint();
    rep.a_element = AlgebraElement(AlgebraShape({n}), {a});

    std::vector<double> col_norms(n);
    for (int j = 0; j < n; ++j) col_norms[j] = a.col(j).norm();
    rep.tail_mass.resize(n);
    double running = 0.0;
    for (int k = n - 1; k >= 0; --k) {
      running = std::max(running, col_norms[k]);
      rep.tail_mass[k] = running;  // sup over 1-indexed columns j > k
    }

    const Eigen::VectorXd sv = linalg::singular_values(a);
    rep.sigma_tail.resize(n);
    for (int k = 0; k < n; ++k) rep.sigma_tail[k] = sv(k);

    reports.push_back(std::move(rep));
  }
  return reports;
}

void write_sweep_csv(const std::vector<ObstructionReport>& reports,
                     const TruncationFamily& family,
                     const ToleranceConfig& tol, std::ostream& out) {
  out << "row,family,seed,n,k,tail_mass,sigma_tail,lambda_star,"
         "forced_identity_residual,max_tail_mass\n";
  for (const ObstructionReport& rep : reports) {
    for (int k = 0; k < rep.n; ++k) {
      out << "tail," << family.name << ',' << tol.rng_seed << ',' << rep.n
          << ',' << k << ',' << format_double(rep.tail_mass[k]) << ','
          << format_double(rep.sigma_tail[k]) << ",,,\n";
    }
    const double max_tail =
        *std::max_element(rep.tail_mass.begin(), rep.tail_mass.end());
    out << "summary," << family.name << ',' << tol.rng_seed << ',' << rep.n
        << ",,,," << format_double(rep.lambda_star) << ','
        << format_double(rep.forced_identity_residual) << ','
        << format_double(max_tail) << '\n';
  }
}

}  // namespace douglaskit
