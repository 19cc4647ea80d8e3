#pragma once

// Correlation sequences, spectral ergodic / weak-mixing classification with
// a brute-force Cesaro cross-check, and the transfer of both properties to
// the truncated reversible dilation.

#include <cstdint>
#include <vector>

#include "cstar/dilation.hpp"

namespace cstar {

/// c_k = phi(a Phi^k(b)) for 0 <= k <= n. Throws NotInvariant.
std::vector<cplx> correlation_sequence(const UcpMap& phi, const State& state, const Element& a, const Element& b,
                                       std::size_t n, double tol = 1e-9);

struct ErgodicReport {
  bool ergodic = false;
  bool weakly_mixing = false;
  Eigen::Index fixed_space_dim = 0;
  std::vector<cplx> peripheral_eigenvalues;
  /// Largest plain and absolute Cesaro averages of centered correlations.
  std::vector<double> cesaro_residuals;
  bool cesaro_ergodic = false;
  bool cesaro_weakly_mixing = false;
  /// Distance of the non-peripheral spectrum from the unit circle.
  double spectral_gap = 0.0;
  bool conclusive = false;
  Checks checks;
};

struct ClassifyOptions {
  double tol = 1e-9;
  double peripheral_band = 1e-8;
  std::size_t cesaro_n = 10000;
  double decay_threshold = 1e-2;
  double conclusive_gap = 0.05;
};

/// Throws NotInvariant.
ErgodicReport classify(const UcpMap& phi, const State& state, const ClassifyOptions& options = {});

struct TransferOptions {
  std::size_t samples = 4;
  std::uint64_t seed = 3;
  double tol = 1e-9;
};

struct TransferReport {
  double dilated_cesaro = 0.0;   // |Cesaro mean| of dilated centered correlations over the budget
  double original_cesaro = 0.0;  // same for the original system
  Checks checks;
};

/// Reduction identity, dilated-versus-original correlations and the
/// epsilon-approximation bound, all within the dilation budget.
TransferReport dilation_transfer_check(const DilationData& d, const TransferOptions& options = {});

}  // namespace cstar
