#include "douglaskit/sampling.hpp"

namespace douglaskit {

Vector Sampler::vector(int n) {
  Vector v(n);
  for (int i = 0; i < n; ++i) v(i) = scalar();
  return v;
}

Vector Sampler::unit_vector(int n) {
  Vector v = vector(n);
  double s = v.norm();
  while (s < 1e-12) {  // essentially never; keeps the contract exact
    v = vector(n);
    s = v.norm();
  }
  return v / s;
}

Matrix Sampler::matrix(int rows, int cols) {
  Matrix m(rows, cols);
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < cols; ++j) m(i, j) = scalar();
  return m;
}

AlgebraElement Sampler::element(const AlgebraShape& s) {
  std::vector<Matrix> b;
  b.reserve(s.block_dims.size());
  for (int n : s.block_dims) b.push_back(matrix(n, n));
  return {s, std::move(b)};
}

AlgebraElement Sampler::self_adjoint(const AlgebraShape& s) {
  AlgebraElement x = element(s);
  return 0.5 * (x + adjoint(x));
}

AlgebraElement Sampler::positive(const AlgebraShape& s) {
  AlgebraElement w = element(s);
  return adjoint(w) * w;
}

ModuleElement Sampler::module_element(const ModuleShape& s) {
  std::vector<Matrix> b;
  b.reserve(s.row_dims.size());
  for (int i = 0; i < s.block_count(); ++i)
    b.push_back(matrix(s.row_dims[i], s.algebra.block_dims[i]));
  return {s, std::move(b)};
}

AdjointableOperator Sampler::op(const ModuleShape& dom,
                                const ModuleShape& codom) {
  std::vector<Matrix> m;
  m.reserve(dom.row_dims.size());
  for (std::size_t i = 0; i < dom.row_dims.size(); ++i)
    m.push_back(matrix(codom.row_dims[i], dom.row_dims[i]));
  return {dom, codom, std::move(m)};
}

}  // namespace douglaskit
