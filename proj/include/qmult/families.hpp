#pragma once

// Named constructors for the channel families studied by qmult.

#include <cstdint>
#include <vector>

#include "qmult/channel.hpp"

namespace qmult {

ChannelMap identity_channel(int d);
ChannelMap zero_map(int n, int m);
/// Gamma_U(X) = U X U*.
ChannelMap unitary_conjugation(const Matrix& u);
/// X -> X^T on M_d. Positive, not 2-positive.
ChannelMap transpose_map(int d);

/// rho -> lam rho + (1 - lam) Tr(rho) I / d. CP exactly for
/// -1/(d^2 - 1) <= lam <= 1; no range check is made here.
ChannelMap depolarizing(int d, double lam);

/// rho -> lam rho + (1 - lam) Tr(rho) gamma for a density matrix gamma.
/// With `diagonalize_gamma` the map is written in the eigenbasis of gamma,
/// i.e. gamma is replaced by diag(eigenvalues).
ChannelMap generalized_depolarizing(double lam, const Matrix& gamma, bool diagonalize_gamma = false);

/// Kraus operators sqrt(p_k) P_k for permutation matrices P_k.
/// perms[k][i] is the image of basis index i under the k-th permutation.
ChannelMap random_unitary_permutation(const std::vector<double>& probs, const std::vector<std::vector<int>>& perms);

/// rho -> (Tr(rho) I - rho^T) / (d - 1).
ChannelMap werner_holevo(int d);

/// Ginibre Kraus operators; trace-preserving when requested, otherwise scaled
/// to be trace-nonincreasing with ||sum A_k* A_k||_inf = 1.
ChannelMap random_cp_channel(int n, int m, int kraus_count, std::uint64_t seed, bool trace_preserving = true);

/// Kraus operators with nonnegative entries, so the map is EP and CP. In the
/// trace-preserving case every column of the stacked Kraus matrix has support
/// disjoint from the others.
ChannelMap random_ep_cp_channel(int n, int m, int kraus_count, std::uint64_t seed, bool trace_preserving = true);

/// An EP map on M_d that is not CP: mu * transpose + (1 - mu) * EP-CP map,
/// with mu drawn from [0.6, 1]. Both predicates are checked before returning.
ChannelMap random_ep_not_cp_map(int d, std::uint64_t seed);

}  // namespace qmult
