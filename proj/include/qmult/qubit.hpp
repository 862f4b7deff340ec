#pragma once

// Qubit maps in the diagonal (lambda, t) form and the Pauli transfer picture.

#include <array>
#include <cstdint>

#include "qmult/channel.hpp"

namespace qmult {

/// Phi(I + sum w_k sigma_k) = I + sum (lambda_k w_k + t_k) sigma_k.
struct QubitDiagonalParams {
  std::array<double, 3> lambda{};
  std::array<double, 3> t{};

  void validate() const;
};

/// Real 4x4 matrix a_jk = 1/2 Tr[sigma_j Phi(sigma_k)], sigma_0 = I.
struct PauliTransfer {
  Eigen::Matrix4d a = Eigen::Matrix4d::Identity();

  /// Column (a_10, a_20, a_30): image of the identity's Bloch part.
  [[nodiscard]] Eigen::Vector3d translation() const { return a.block<3, 1>(1, 0); }
  [[nodiscard]] Eigen::Matrix3d block() const { return a.block<3, 3>(1, 1); }
};

/// The four Pauli matrices, index 0 = identity.
const std::array<Matrix, 4>& pauli_matrices();

ChannelMap qubit_from_diagonal(const QubitDiagonalParams& params);

/// Exact comparisons: lambda1 >= |lambda2|, t1 >= 0 and t2 == 0.
bool qubit_is_ep_canonical(const QubitDiagonalParams& params);

/// Requires a Hermiticity-preserving 2 -> 2 map.
PauliTransfer pauli_transfer(const ChannelMap& k);
ChannelMap from_pauli_transfer(const PauliTransfer& pt);

/// Basis change on domain and range: translation -> O1 v, block -> O1 T O2,
/// implemented as diag(1, O1) a diag(1, O2).
PauliTransfer rotate_bases(const PauliTransfer& pt, const Eigen::Matrix3d& o1, const Eigen::Matrix3d& o2);

/// Size of the entries that must vanish for all Tr E_ij Phi(E_kl) to be real:
/// a_j2 and a_2k for j, k in {0, 1, 3}. Euclidean norm of those six numbers.
double reality_condition_residual(const PauliTransfer& pt);

struct RotationSearchResult {
  double min_residual = 0.0;
  Eigen::Matrix3d o1 = Eigen::Matrix3d::Identity();
  Eigen::Matrix3d o2 = Eigen::Matrix3d::Identity();
};

/// Samples rotation pairs and refines the best ones by local random search.
/// A result bounded away from zero is evidence, not a certificate, that no
/// basis change makes the map's entries real.
RotationSearchResult search_reality_rotations(const PauliTransfer& pt, int samples, std::uint64_t seed);

}  // namespace qmult
