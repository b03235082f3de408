#pragma once

#include <cstdint>
#include <random>

#include "douglaskit/module.hpp"

namespace douglaskit {

/// Deterministic generator for random elements, operators and directions.
/// Entries are iid standard complex Gaussians unless stated otherwise.
class Sampler {
 public:
  explicit Sampler(std::uint64_t seed) : rng_(seed) {}

  double real() { return normal_(rng_); }
  double uniform(double lo, double hi) {
    return std::uniform_real_distribution<double>(lo, hi)(rng_);
  }
  int uniform_int(int lo, int hi) {
    return std::uniform_int_distribution<int>(lo, hi)(rng_);
  }
  Complex scalar() {
    return Complex(normal_(rng_), normal_(rng_)) / std::sqrt(2.0);
  }

  Vector vector(int n);
  Vector unit_vector(int n);
  Matrix matrix(int rows, int cols);

  AlgebraElement element(const AlgebraShape& s);
  AlgebraElement self_adjoint(const AlgebraShape& s);
  /// w* w for a random w: positive by construction.
  AlgebraElement positive(const AlgebraShape& s);

  ModuleElement module_element(const ModuleShape& s);
  AdjointableOperator op(const ModuleShape& dom, const ModuleShape& codom);

 private:
  std::mt19937_64 rng_;
  std::normal_distribution<double> normal_{0.0, 1.0};
};

}  // namespace douglaskit
