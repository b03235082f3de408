#pragma once

#include <cstdint>

namespace douglaskit {

/// One knob for every numerical decision the library makes. Threaded
/// explicitly through all operations so that reports are reproducible.
struct ToleranceConfig {
  /// Relative eigenvalue floor for positivity decisions: x is accepted as
  /// positive when every eigenvalue is >= -psd_tol * norm(x).
  double psd_tol = 1e-9;

  /// Relative self-adjointness tolerance: inputs with a larger defect are
  /// rejected instead of being silently symmetrized.
  double sa_tol = 1e-10;

  /// Relative singular-value cutoff for rank decisions (column spaces,
  /// kernels, pseudoinverses): sigma is kept when sigma > rank_rtol * sigma_max.
  double rank_rtol = 1e-10;

  /// Number of random samples used wherever an operation gathers sampled
  /// evidence (adjoint identities, norm-majorization ratios, ...).
  int sample_count = 100;

  /// Seed for all sampled evidence. Same config, same inputs, same outputs.
  std::uint64_t rng_seed = 0x5EED;
};

}  // namespace douglaskit
