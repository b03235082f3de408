#pragma once

// Seeded instance generators shared by the unit tests and the acceptance
// suite. Construction keeps rank decisions far away from the cutoff: kept
// singular values live in [0.3, 2], dropped directions are planted at 1e-12,
// and escape components (for unsolvable instances) carry weight >= 0.5.

#include <algorithm>
#include <vector>

#include "douglaskit/douglaskit.hpp"

namespace gen {

using namespace douglaskit;

/// Orthonormal columns from the QR of a random matrix.
inline Matrix random_orthonormal(Sampler& s, int rows, int cols) {
  if (cols == 0) return Matrix(rows, 0);
  const Matrix g = s.matrix(rows, std::min(rows, cols));
  Eigen::HouseholderQR<Matrix> qr(g);
  Matrix q = qr.householderQ();
  return q.leftCols(cols);
}

/// q x p block with prescribed rank: kept sigmas in [0.3, 2]; when
/// plant_small, one extra direction at 1e-12 (cleanly below the cutoff).
inline Matrix controlled_block(Sampler& s, int q, int p, int rank,
                               bool plant_small) {
  rank = std::min({rank, q, p});
  Matrix m = Matrix::Zero(q, p);
  if (rank > 0 || plant_small) {
    const int extra = (plant_small && rank < std::min(q, p)) ? 1 : 0;
    const Matrix u = random_orthonormal(s, q, rank + extra);
    const Matrix v = random_orthonormal(s, p, rank + extra);
    Eigen::VectorXd sig(rank + extra);
    for (int i = 0; i < rank; ++i) sig(i) = s.uniform(0.3, 2.0);
    if (extra) sig(rank) = 1e-12;
    m = u * sig.asDiagonal() * v.adjoint();
  }
  return m;
}

struct ShapeTriple {
  ModuleShape e;  // domain of T
  ModuleShape h;  // domain of T'
  ModuleShape k;  // common codomain
};

/// Random shapes with 1..3 blocks and dimensions up to max_dim.
inline ShapeTriple random_shapes(Sampler& s, int max_dim = 4) {
  const int blocks = s.uniform_int(1, 3);
  std::vector<int> alg, pe, ph, pk;
  for (int i = 0; i < blocks; ++i) {
    alg.push_back(s.uniform_int(1, std::max(1, max_dim / 2)));
    pe.push_back(s.uniform_int(1, max_dim));
    ph.push_back(s.uniform_int(1, max_dim));
    pk.push_back(s.uniform_int(1, max_dim));
  }
  const AlgebraShape a(alg);
  return {ModuleShape(a, pe), ModuleShape(a, ph), ModuleShape(a, pk)};
}

struct OperatorPair {
  AdjointableOperator tp;  // T'
  AdjointableOperator t;   // T
};

/// T with controlled (possibly deficient) ranks, T' = T R: solvable by
/// construction, with a nontrivial kernel when force_kernel is set.
inline OperatorPair solvable_pair(Sampler& s, int max_dim = 4,
                                  bool force_kernel = false,
                                  bool plant_small = false) {
  const ShapeTriple shapes = random_shapes(s, max_dim);
  std::vector<Matrix> tmats;
  for (int i = 0; i < shapes.k.block_count(); ++i) {
    const int q = shapes.k.row_dims[i];
    const int p = shapes.e.row_dims[i];
    int rank = std::min(q, p) == 0 ? 0 : s.uniform_int(0, std::min(q, p));
    if (force_kernel && p > 0) rank = std::min(rank, p - 1);
    tmats.push_back(controlled_block(s, q, p, rank, plant_small));
  }
  OperatorPair pair;
  pair.t = AdjointableOperator(shapes.e, shapes.k, std::move(tmats));
  const AdjointableOperator r = s.op(shapes.h, shapes.e);
  pair.tp = compose(pair.t, r);
  return pair;
}

/// T rank-deficient in at least one block; T' = T R plus an escape component
/// of weight >= 0.5 sticking out of range(T).
inline OperatorPair unsolvable_pair(Sampler& s, int max_dim = 4) {
  for (;;) {
    const ShapeTriple shapes = random_shapes(s, max_dim);
    // find a block where the codomain strictly exceeds a plantable rank
    int target = -1;
    for (int i = 0; i < shapes.k.block_count(); ++i)
      if (shapes.k.row_dims[i] >= 1 && shapes.h.row_dims[i] >= 1) target = i;
    if (target < 0) continue;

    std::vector<Matrix> tmats;
    for (int i = 0; i < shapes.k.block_count(); ++i) {
      const int q = shapes.k.row_dims[i];
      const int p = shapes.e.row_dims[i];
      int rank = std::min(q, p) == 0 ? 0 : s.uniform_int(0, std::min(q, p));
      if (i == target) rank = std::min(rank, q - 1);  // leave escape room
      tmats.push_back(controlled_block(s, q, p, rank, false));
    }
    AdjointableOperator t(shapes.e, shapes.k, std::move(tmats));
    AdjointableOperator tp = compose(t, s.op(shapes.h, shapes.e));

    // escape direction orthogonal to range(T) in the target block
    const Matrix& tm = t.mats[target];
    Eigen::JacobiSVD<Matrix> svd(tm, Eigen::ComputeFullU);
    int rank = 0;
    const auto& sv = svd.singularValues();
    for (Eigen::Index j = 0; j < sv.size(); ++j)
      if (sv(j) > 1e-10 * (sv.size() ? sv(0) : 0.0)) ++rank;
    if (rank >= t.codomain.row_dims[target]) continue;
    const Vector w = svd.matrixU().col(rank);
    Vector g = s.vector(shapes.h.row_dims[target]);
    g *= s.uniform(0.5, 2.0) / g.norm();
    tp.mats[target] += w * g.adjoint();
    return {std::move(tp), std::move(t)};
  }
}

/// Positive pair with a^2 not below b^2 (top of sp(a^2-b^2) >= 0.01 after
/// the witness normalization).
inline std::pair<AlgebraElement, AlgebraElement> violating_square_pair(
    Sampler& s, const AlgebraShape& shape) {
  for (;;) {
    AlgebraElement a = s.positive(shape);
    AlgebraElement b = s.positive(shape);
    a = (1.0 / std::max(norm(a), 1e-6)) * a;
    b = (s.uniform(0.2, 1.0) / std::max(norm(b), 1e-6)) * b;
    const double scale = std::max({norm(a), norm(b), 1.0});
    const AlgebraElement an = (1.0 / scale) * a;
    const AlgebraElement bn = (1.0 / scale) * b;
    const Spectrum sp = spectrum(an * an - bn * bn);
    if (sp.max_value() >= 1e-2) return {std::move(a), std::move(b)};
  }
}

/// Positive pair with a^2 <= b^2 exactly: square roots of M and M + w*w.
inline std::pair<AlgebraElement, AlgebraElement> ordered_square_pair(
    Sampler& s, const AlgebraShape& shape) {
  const AlgebraElement m = s.positive(shape);
  AlgebraElement bump = s.positive(shape);
  bump = (s.uniform(0.2, 2.0) / std::max(norm(bump), 1e-6)) * bump;
  const auto root = [](double t) { return t > 0.0 ? std::sqrt(t) : 0.0; };
  return {functional_calculus(root, m),
          functional_calculus(root, m + bump)};
}

/// Square operator on a random module; kind cycles through positive,
/// indefinite self-adjoint, non-self-adjoint, and near-PSD inputs.
inline AdjointableOperator square_operator(Sampler& s, int kind,
                                           int max_dim = 4) {
  const int blocks = s.uniform_int(1, 2);
  std::vector<int> alg, rows;
  for (int i = 0; i < blocks; ++i) {
    alg.push_back(s.uniform_int(1, 2));
    rows.push_back(s.uniform_int(1, max_dim));
  }
  const ModuleShape shape(AlgebraShape(alg), rows);
  std::vector<Matrix> mats;
  for (int i = 0; i < blocks; ++i) {
    const int p = rows[i];
    const Matrix g = s.matrix(p, p);
    switch (kind % 4) {
      case 0:  // positive
        mats.push_back(g.adjoint() * g);
        break;
      case 1:  // self-adjoint, generically indefinite
        mats.push_back(0.5 * (g + g.adjoint()));
        break;
      case 2:  // not self-adjoint
        mats.push_back(g + Matrix::Identity(p, p));
        break;
      default: {  // positive with a tiny planted negative eigenvalue
        Matrix m = g.adjoint() * g;
        m -= 1e-13 * m.norm() * Matrix::Identity(p, p);
        mats.push_back(m);
        break;
      }
    }
  }
  return {shape, shape, std::move(mats)};
}

}  // namespace gen
