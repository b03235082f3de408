#include "douglaskit/module.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "douglaskit/linalg.hpp"

namespace douglaskit {

namespace {

void require_same_shape(const ModuleShape& a, const ModuleShape& b,
                        const char* op) {
  if (!(a == b)) {
    std::ostringstream msg;
    msg << op << ": module shapes differ";
    throw ShapeError(msg.str());
  }
}

}  // namespace

ModuleShape::ModuleShape(AlgebraShape alg, std::vector<int> rows)
    : algebra(std::move(alg)), row_dims(std::move(rows)) {
  if (row_dims.size() != algebra.block_dims.size())
    throw ShapeError("ModuleShape: row_dims length must match algebra blocks");
  for (int p : row_dims)
    if (p < 0) throw ShapeError("ModuleShape: row dimensions must be >= 0");
}

ModuleElement::ModuleElement(ModuleShape s, std::vector<Matrix> b)
    : shape(std::move(s)), blocks(std::move(b)) {
  if (blocks.size() != shape.row_dims.size())
    throw ShapeError("ModuleElement: block count does not match shape");
  for (std::size_t i = 0; i < blocks.size(); ++i) {
    if (blocks[i].rows() != shape.row_dims[i] ||
        blocks[i].cols() != shape.algebra.block_dims[i])
      throw ShapeError("ModuleElement: block size does not match shape");
  }
}

ModuleElement ModuleElement::zero(const ModuleShape& s) {
  std::vector<Matrix> b;
  b.reserve(s.row_dims.size());
  for (int i = 0; i < s.block_count(); ++i)
    b.push_back(Matrix::Zero(s.row_dims[i], s.algebra.block_dims[i]));
  return {s, std::move(b)};
}

ModuleElement operator+(const ModuleElement& x, const ModuleElement& y) {
  require_same_shape(x.shape, y.shape, "operator+");
  std::vector<Matrix> b;
  b.reserve(x.blocks.size());
  for (std::size_t i = 0; i < x.blocks.size(); ++i)
    b.push_back(x.blocks[i] + y.blocks[i]);
  return {x.shape, std::move(b)};
}

ModuleElement operator-(const ModuleElement& x, const ModuleElement& y) {
  require_same_shape(x.shape, y.shape, "operator-");
  std::vector<Matrix> b;
  b.reserve(x.blocks.size());
  for (std::size_t i = 0; i < x.blocks.size(); ++i)
    b.push_back(x.blocks[i] - y.blocks[i]);
  return {x.shape, std::move(b)};
}

ModuleElement operator*(Complex c, const ModuleElement& x) {
  std::vector<Matrix> b;
  b.reserve(x.blocks.size());
  for (const Matrix& m : x.blocks) b.push_back(c * m);
  return {x.shape, std::move(b)};
}

ModuleElement operator*(const ModuleElement& x, const AlgebraElement& a) {
  if (!(x.shape.algebra == a.shape))
    throw ShapeError("right action: algebra shape mismatch");
  std::vector<Matrix> b;
  b.reserve(x.blocks.size());
  for (std::size_t i = 0; i < x.blocks.size(); ++i)
    b.push_back(x.blocks[i] * a.blocks[i]);
  return {x.shape, std::move(b)};
}

AlgebraElement inner_product(const ModuleElement& x, const ModuleElement& y) {
  require_same_shape(x.shape, y.shape, "inner_product");
  std::vector<Matrix> b;
  b.reserve(x.blocks.size());
  for (std::size_t i = 0; i < x.blocks.size(); ++i)
    b.push_back(x.blocks[i].adjoint() * y.blocks[i]);
  return {x.shape.algebra, std::move(b)};
}

double element_norm(const ModuleElement& x) {
  double n = 0.0;
  for (const Matrix& m : x.blocks)
    n = std::max(n, linalg::spectral_norm(m));
  return n;
}

AdjointableOperator::AdjointableOperator(ModuleShape dom, ModuleShape codom,
                                         std::vector<Matrix> m)
    : domain(std::move(dom)), codomain(std::move(codom)), mats(std::move(m)) {
  if (!(domain.algebra == codomain.algebra))
    throw ShapeError("AdjointableOperator: domain and codomain algebras differ");
  if (mats.size() != domain.row_dims.size())
    throw ShapeError("AdjointableOperator: wrong number of blocks");
  for (std::size_t i = 0; i < mats.size(); ++i) {
    if (mats[i].rows() != codomain.row_dims[i] ||
        mats[i].cols() != domain.row_dims[i])
      throw ShapeError("AdjointableOperator: block size does not match shapes");
  }
}

AdjointableOperator AdjointableOperator::identity(const ModuleShape& s) {
  std::vector<Matrix> m;
  m.reserve(s.row_dims.size());
  for (int p : s.row_dims) m.push_back(Matrix::Identity(p, p));
  return {s, s, std::move(m)};
}

AdjointableOperator AdjointableOperator::zero(const ModuleShape& dom,
                                              const ModuleShape& codom) {
  std::vector<Matrix> m;
  m.reserve(dom.row_dims.size());
  for (std::size_t i = 0; i < dom.row_dims.size(); ++i)
    m.push_back(Matrix::Zero(codom.row_dims[i], dom.row_dims[i]));
  return {dom, codom, std::move(m)};
}

ModuleElement apply(const AdjointableOperator& t, const ModuleElement& x) {
  require_same_shape(t.domain, x.shape, "apply");
  std::vector<Matrix> b;
  b.reserve(t.mats.size());
  for (std::size_t i = 0; i < t.mats.size(); ++i)
    b.push_back(t.mats[i] * x.blocks[i]);
  return {t.codomain, std::move(b)};
}

AdjointableOperator adjoint_op(const AdjointableOperator& t) {
  std::vector<Matrix> m;
  m.reserve(t.mats.size());
  for (const Matrix& a : t.mats) m.push_back(a.adjoint());
  return {t.codomain, t.domain, std::move(m)};
}

AdjointableOperator compose(const AdjointableOperator& a,
                            const AdjointableOperator& b) {
  require_same_shape(a.domain, b.codomain, "compose");
  std::vector<Matrix> m;
  m.reserve(a.mats.size());
  for (std::size_t i = 0; i < a.mats.size(); ++i)
    m.push_back(a.mats[i] * b.mats[i]);
  return {b.domain, a.codomain, std::move(m)};
}

AdjointableOperator operator+(const AdjointableOperator& a,
                              const AdjointableOperator& b) {
  require_same_shape(a.domain, b.domain, "operator+");
  require_same_shape(a.codomain, b.codomain, "operator+");
  std::vector<Matrix> m;
  m.reserve(a.mats.size());
  for (std::size_t i = 0; i < a.mats.size(); ++i)
    m.push_back(a.mats[i] + b.mats[i]);
  return {a.domain, a.codomain, std::move(m)};
}

AdjointableOperator operator-(const AdjointableOperator& a,
                              const AdjointableOperator& b) {
  require_same_shape(a.domain, b.domain, "operator-");
  require_same_shape(a.codomain, b.codomain, "operator-");
  std::vector<Matrix> m;
  m.reserve(a.mats.size());
  for (std::size_t i = 0; i < a.mats.size(); ++i)
    m.push_back(a.mats[i] - b.mats[i]);
  return {a.domain, a.codomain, std::move(m)};
}

AdjointableOperator operator*(Complex c, const AdjointableOperator& a) {
  std::vector<Matrix> m;
  m.reserve(a.mats.size());
  for (const Matrix& x : a.mats) m.push_back(c * x);
  return {a.domain, a.codomain, std::move(m)};
}

AdjointableOperator operator*(double c, const AdjointableOperator& a) {
  return Complex(c, 0.0) * a;
}

double operator_norm(const AdjointableOperator& t) {
  double n = 0.0;
  for (const Matrix& m : t.mats)
    n = std::max(n, linalg::spectral_norm(m));
  return n;
}

double operator_distance(const AdjointableOperator& a,
                         const AdjointableOperator& b) {
  return operator_norm(a - b);
}

AlgebraElement as_algebra_element(const AdjointableOperator& t) {
  require_same_shape(t.domain, t.codomain, "as_algebra_element");
  for (int p : t.domain.row_dims)
    if (p < 1)
      throw ShapeError(
          "as_algebra_element: zero-dimensional block cannot be an algebra "
          "summand");
  return {AlgebraShape(t.domain.row_dims), t.mats};
}

Submodule::Submodule(ModuleShape amb, std::vector<Matrix> b, bool marginal)
    : ambient(std::move(amb)), bases(std::move(b)), rank_marginal(marginal) {
  if (bases.size() != ambient.row_dims.size())
    throw ShapeError("Submodule: wrong number of basis blocks");
  for (std::size_t i = 0; i < bases.size(); ++i) {
    if (bases[i].rows() != ambient.row_dims[i])
      throw ShapeError("Submodule: basis rows do not match ambient");
    if (bases[i].cols() > bases[i].rows())
      throw ShapeError("Submodule: more basis columns than ambient dimension");
    if (bases[i].cols() > 0) {
      const Matrix gram = bases[i].adjoint() * bases[i];
      const double defect = linalg::spectral_norm(
          Matrix(gram - Matrix::Identity(gram.rows(), gram.cols())));
      if (defect > 1e-12)
        throw InvalidInputError("Submodule: basis columns are not orthonormal");
    }
  }
}

Submodule Submodule::zero(const ModuleShape& amb) {
  std::vector<Matrix> b;
  b.reserve(amb.row_dims.size());
  for (int q : amb.row_dims) b.push_back(Matrix(q, 0));
  return {amb, std::move(b)};
}

Submodule Submodule::full(const ModuleShape& amb) {
  std::vector<Matrix> b;
  b.reserve(amb.row_dims.size());
  for (int q : amb.row_dims) b.push_back(Matrix::Identity(q, q));
  return {amb, std::move(b)};
}

std::vector<int> Submodule::dims() const {
  std::vector<int> d;
  d.reserve(bases.size());
  for (const Matrix& b : bases) d.push_back(static_cast<int>(b.cols()));
  return d;
}

Submodule range_submodule(const AdjointableOperator& t,
                          const ToleranceConfig& tol) {
  std::vector<Matrix> bases;
  bases.reserve(t.mats.size());
  bool marginal = false;
  for (const Matrix& m : t.mats) {
    linalg::RankedBasis rb = linalg::column_space(m, tol.rank_rtol);
    marginal = marginal || rb.marginal;
    bases.push_back(std::move(rb.basis));
  }
  return {t.codomain, std::move(bases), marginal};
}

Submodule null_submodule(const AdjointableOperator& t,
                         const ToleranceConfig& tol) {
  std::vector<Matrix> bases;
  bases.reserve(t.mats.size());
  bool marginal = false;
  for (const Matrix& m : t.mats) {
    linalg::RankedBasis rb = linalg::null_space(m, tol.rank_rtol);
    marginal = marginal || rb.marginal;
    bases.push_back(std::move(rb.basis));
  }
  return {t.domain, std::move(bases), marginal};
}

Submodule orthogonal_complement(const Submodule& f) {
  std::vector<Matrix> bases;
  bases.reserve(f.bases.size());
  for (std::size_t i = 0; i < f.bases.size(); ++i)
    bases.push_back(linalg::orthogonal_complement_basis(
        f.bases[i], f.ambient.row_dims[i]));
  return {f.ambient, std::move(bases), f.rank_marginal};
}

AdjointableOperator projector(const Submodule& f) {
  std::vector<Matrix> m;
  m.reserve(f.bases.size());
  for (const Matrix& b : f.bases) m.push_back(b * b.adjoint());
  return {f.ambient, f.ambient, std::move(m)};
}

ComplementCertificate check_orthogonally_complemented(const Submodule& f) {
  ComplementCertificate cert;
  const Submodule perp = orthogonal_complement(f);
  cert.dims = f.dims();
  cert.codims = perp.dims();
  cert.rank_marginal = f.rank_marginal;

  bool dims_ok = true;
  for (std::size_t i = 0; i < f.bases.size(); ++i)
    dims_ok = dims_ok &&
              (cert.dims[i] + cert.codims[i] == f.ambient.row_dims[i]);

  const AdjointableOperator sum = projector(f) + projector(perp);
  cert.projector_residual = operator_distance(
      sum, AdjointableOperator::identity(f.ambient));
  cert.complemented = dims_ok && cert.projector_residual <= 1e-10;
  return cert;
}

ContainsResult submodule_contains(const Submodule& f, const Submodule& g,
                                  const ToleranceConfig& tol) {
  if (!(f.ambient == g.ambient))
    throw ShapeError("submodule_contains: ambient modules differ");
  ContainsResult res;
  res.rank_marginal = f.rank_marginal || g.rank_marginal;
  const double threshold = 100.0 * tol.rank_rtol;

  double worst = 0.0;
  std::optional<ContainsWitness> witness;
  for (std::size_t i = 0; i < g.bases.size(); ++i) {
    const Matrix& gb = g.bases[i];
    if (gb.cols() == 0) continue;
    const Matrix& fb = f.bases[i];
    // residual of each (unit) basis column of G against span(F)
    const Matrix resid = gb - fb * (fb.adjoint() * gb);
    for (Eigen::Index j = 0; j < resid.cols(); ++j) {
      const double r = resid.col(j).norm();
      if (r > worst) {
        worst = r;
        ContainsWitness w;
        w.block = static_cast<int>(i);
        w.column = gb.col(j);
        w.residual = r;
        witness = std::move(w);
      }
    }
  }
  res.contains = worst <= threshold;
  if (!res.contains) res.witness = std::move(witness);
  return res;
}

}  // namespace douglaskit
