#pragma once

// Named dynamical systems and seeded random families used by the tests, the
// acceptance binary and the bundled CLI inputs.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "cstar/gns.hpp"

namespace cstar::instances {

struct System {
  std::string name;
  UcpMap phi;
  State state;
  std::optional<UcpMap> section;  // optional right inverse of phi
};

CMatrix pauli_x();
CMatrix pauli_y();
CMatrix pauli_z();
CMatrix hadamard();
/// Generic qubit unitary with irrational relative phases.
CMatrix generic_qubit_unitary();

UcpMap conjugation(const Algebra& algebra, const CMatrix& u);
/// a -> tr(a)/d 1 on M_d.
UcpMap depolarizing(Eigen::Index d);
/// a -> diagonal part of a on M_d.
UcpMap dephasing(Eigen::Index d);
UcpMap stochastic(const RMatrix& p);
RMatrix averaging_matrix(Eigen::Index n);
/// Cyclic shift (f)_i -> f_{i+1 mod n}.
RMatrix cycle_matrix(Eigen::Index n);
/// x (+) y -> x (+) x on M_2 (+) M_2.
UcpMap copy_endomorphism();

System qubit_automorphism();
System depolarizing_qubit();
System dephasing_qubit();
System averaging_c2();
System swap_c2();
System cycle_c3();
System copy_m2m2();
System identity_c2();

std::vector<System> bundled();

/// Random ucp map with `kraus` Kraus operators per block pair.
UcpMap random_ucp(const Algebra& algebra, std::size_t kraus, std::uint64_t seed);
/// Schur multiplier a -> C o a on M_d with C PSD and unit diagonal.
UcpMap random_schur_multiplier(Eigen::Index d, std::uint64_t seed);
/// Faithful state with a random diagonal density on M_d.
State random_diagonal_state(Eigen::Index d, std::uint64_t seed);

}  // namespace cstar::instances
