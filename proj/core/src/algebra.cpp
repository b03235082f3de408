#include "douglaskit/algebra.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "douglaskit/linalg.hpp"

namespace douglaskit {

namespace {

void require_same_shape(const AlgebraElement& x, const AlgebraElement& y,
                        const char* op) {
  if (!(x.shape == y.shape)) {
    std::ostringstream msg;
    msg << op << ": algebra shapes differ";
    throw ShapeError(msg.str());
  }
}

void require_self_adjoint(const AlgebraElement& x, const ToleranceConfig& tol,
                          const char* op) {
  const double defect = self_adjoint_defect(x);
  const double scale = norm(x);
  if (defect > tol.sa_tol * scale) {
    std::ostringstream msg;
    msg << op << ": input is not self-adjoint (defect " << defect
        << ", norm " << scale << ")";
    throw InvalidInputError(msg.str());
  }
}

}  // namespace

AlgebraShape::AlgebraShape(std::vector<int> dims) : block_dims(std::move(dims)) {
  if (block_dims.empty())
    throw ShapeError("AlgebraShape: at least one block required");
  for (int d : block_dims)
    if (d < 1) throw ShapeError("AlgebraShape: block dimensions must be >= 1");
}

int AlgebraShape::total_dim() const {
  int t = 0;
  for (int d : block_dims) t += d;
  return t;
}

AlgebraElement::AlgebraElement(AlgebraShape s, std::vector<Matrix> b)
    : shape(std::move(s)), blocks(std::move(b)) {
  if (blocks.size() != shape.block_dims.size())
    throw ShapeError("AlgebraElement: block count does not match shape");
  for (std::size_t i = 0; i < blocks.size(); ++i) {
    const int n = shape.block_dims[i];
    if (blocks[i].rows() != n || blocks[i].cols() != n)
      throw ShapeError("AlgebraElement: block size does not match shape");
  }
}

AlgebraElement AlgebraElement::zero(const AlgebraShape& s) {
  std::vector<Matrix> b;
  b.reserve(s.block_dims.size());
  for (int n : s.block_dims) b.push_back(Matrix::Zero(n, n));
  return {s, std::move(b)};
}

AlgebraElement AlgebraElement::identity(const AlgebraShape& s) {
  std::vector<Matrix> b;
  b.reserve(s.block_dims.size());
  for (int n : s.block_dims) b.push_back(Matrix::Identity(n, n));
  return {s, std::move(b)};
}

AlgebraElement operator+(const AlgebraElement& x, const AlgebraElement& y) {
  require_same_shape(x, y, "operator+");
  std::vector<Matrix> b;
  b.reserve(x.blocks.size());
  for (std::size_t i = 0; i < x.blocks.size(); ++i)
    b.push_back(x.blocks[i] + y.blocks[i]);
  return {x.shape, std::move(b)};
}

AlgebraElement operator-(const AlgebraElement& x, const AlgebraElement& y) {
  require_same_shape(x, y, "operator-");
  std::vector<Matrix> b;
  b.reserve(x.blocks.size());
  for (std::size_t i = 0; i < x.blocks.size(); ++i)
    b.push_back(x.blocks[i] - y.blocks[i]);
  return {x.shape, std::move(b)};
}

AlgebraElement operator*(const AlgebraElement& x, const AlgebraElement& y) {
  require_same_shape(x, y, "multiply");
  std::vector<Matrix> b;
  b.reserve(x.blocks.size());
  for (std::size_t i = 0; i < x.blocks.size(); ++i)
    b.push_back(x.blocks[i] * y.blocks[i]);
  return {x.shape, std::move(b)};
}

AlgebraElement operator*(Complex c, const AlgebraElement& x) {
  std::vector<Matrix> b;
  b.reserve(x.blocks.size());
  for (const Matrix& m : x.blocks) b.push_back(c * m);
  return {x.shape, std::move(b)};
}

AlgebraElement operator*(double c, const AlgebraElement& x) {
  return Complex(c, 0.0) * x;
}

AlgebraElement multiply(const AlgebraElement& x, const AlgebraElement& y) {
  return x * y;
}

AlgebraElement adjoint(const AlgebraElement& x) {
  std::vector<Matrix> b;
  b.reserve(x.blocks.size());
  for (const Matrix& m : x.blocks) b.push_back(m.adjoint());
  return {x.shape, std::move(b)};
}

double norm(const AlgebraElement& x) {
  double n = 0.0;
  for (const Matrix& m : x.blocks)
    n = std::max(n, linalg::spectral_norm(m));
  return n;
}

double distance(const AlgebraElement& x, const AlgebraElement& y) {
  return norm(x - y);
}

double self_adjoint_defect(const AlgebraElement& x) {
  double d = 0.0;
  for (const Matrix& m : x.blocks)
    d = std::max(d, linalg::spectral_norm(Matrix(m - m.adjoint())));
  return d;
}

bool is_self_adjoint(const AlgebraElement& x, const ToleranceConfig& tol) {
  return self_adjoint_defect(x) <= tol.sa_tol * norm(x);
}

PositivityResult is_positive(const AlgebraElement& x,
                             const ToleranceConfig& tol) {
  PositivityResult res;
  const double scale = norm(x);
  res.sa_defect = self_adjoint_defect(x);

  if (res.sa_defect > tol.sa_tol * scale) {
    // Locate the block with the worst defect and the direction where the
    // skew part is largest; <v, xv> is non-real there.
    int worst = 0;
    double worst_defect = -1.0;
    for (std::size_t i = 0; i < x.blocks.size(); ++i) {
      const double d = linalg::spectral_norm(
          Matrix(x.blocks[i] - x.blocks[i].adjoint()));
      if (d > worst_defect) {
        worst_defect = d;
        worst = static_cast<int>(i);
      }
    }
    const Matrix skew_h =
        Matrix((x.blocks[worst] - x.blocks[worst].adjoint()) /
               Complex(0.0, 2.0));
    const linalg::HermitianEigen ev = linalg::hermitian_eigen(skew_h);
    const Eigen::Index top =
        std::abs(ev.values(0)) > std::abs(ev.values(ev.values.size() - 1))
            ? 0
            : ev.values.size() - 1;
    PositivityWitness w;
    w.kind = PositivityWitness::Kind::NotSelfAdjoint;
    w.block = worst;
    w.direction = ev.vectors.col(top);
    w.value = worst_defect;
    res.witness = std::move(w);
    res.positive = false;
    res.min_eigenvalue = std::numeric_limits<double>::quiet_NaN();
    return res;
  }

  double min_eig = std::numeric_limits<double>::infinity();
  int min_block = 0;
  Vector min_vec;
  for (std::size_t i = 0; i < x.blocks.size(); ++i) {
    const linalg::HermitianEigen ev = linalg::hermitian_eigen(x.blocks[i]);
    if (ev.values(0) < min_eig) {
      min_eig = ev.values(0);
      min_block = static_cast<int>(i);
      min_vec = ev.vectors.col(0);
    }
  }
  res.min_eigenvalue = min_eig;
  res.positive = min_eig >= -tol.psd_tol * scale;
  if (!res.positive) {
    PositivityWitness w;
    w.kind = PositivityWitness::Kind::NegativeDirection;
    w.block = min_block;
    w.direction = std::move(min_vec);
    w.value = min_eig;
    res.witness = std::move(w);
  }
  return res;
}

double Spectrum::min_value() const {
  return values.empty() ? std::numeric_limits<double>::quiet_NaN()
                        : values.front();
}

double Spectrum::max_value() const {
  return values.empty() ? std::numeric_limits<double>::quiet_NaN()
                        : values.back();
}

Spectrum spectrum(const AlgebraElement& x, const ToleranceConfig& tol) {
  require_self_adjoint(x, tol, "spectrum");
  Spectrum s;
  for (const Matrix& m : x.blocks) {
    const linalg::HermitianEigen ev = linalg::hermitian_eigen(m);
    for (Eigen::Index i = 0; i < ev.values.size(); ++i)
      s.values.push_back(ev.values(i));
  }
  std::sort(s.values.begin(), s.values.end());
  return s;
}

AlgebraElement functional_calculus(const std::function<double(double)>& f,
                                   const AlgebraElement& x,
                                   const ToleranceConfig& tol) {
  require_self_adjoint(x, tol, "functional_calculus");
  std::vector<Matrix> b;
  b.reserve(x.blocks.size());
  for (const Matrix& m : x.blocks) {
    const linalg::HermitianEigen ev = linalg::hermitian_eigen(m);
    Eigen::VectorXd mapped(ev.values.size());
    for (Eigen::Index i = 0; i < ev.values.size(); ++i)
      mapped(i) = f(ev.values(i));
    b.push_back(ev.vectors * mapped.asDiagonal() * ev.vectors.adjoint());
  }
  return {x.shape, std::move(b)};
}

State::State(AlgebraShape s, int block, Vector v)
    : shape(std::move(s)), block_index(block), unit_vector(std::move(v)) {
  if (block_index < 0 || block_index >= shape.block_count())
    throw ShapeError("State: block index out of range");
  if (unit_vector.size() != shape.block_dims[block_index])
    throw ShapeError("State: vector length does not match block");
  const double n = unit_vector.norm();
  if (std::abs(n - 1.0) > 1e-12) {
    if (n == 0.0) throw InvalidInputError("State: zero vector");
    unit_vector /= n;
  }
}

Complex State::evaluate(const AlgebraElement& x) const {
  if (!(x.shape == shape)) throw ShapeError("State: algebra shape mismatch");
  return (unit_vector.adjoint() * x.blocks[block_index] * unit_vector)(0, 0);
}

State norm_attaining_state(const AlgebraElement& x,
                           const ToleranceConfig& tol) {
  require_self_adjoint(x, tol, "norm_attaining_state");
  if (norm(x) == 0.0)
    throw InvalidInputError("norm_attaining_state: zero element");
  double best = -std::numeric_limits<double>::infinity();
  int best_block = 0;
  Vector best_vec;
  for (std::size_t i = 0; i < x.blocks.size(); ++i) {
    const linalg::HermitianEigen ev = linalg::hermitian_eigen(x.blocks[i]);
    const Eigen::Index last = ev.values.size() - 1;
    if (ev.values(last) > best) {
      best = ev.values(last);
      best_block = static_cast<int>(i);
      best_vec = ev.vectors.col(last);
    }
  }
  return State(x.shape, best_block, std::move(best_vec));
}

}  // namespace douglaskit
