#pragma once

// Superoperator norms by seeded multi-restart ascent, and the block-matrix
// inequalities behind the multiplicativity arguments.
//
// Both optimizers maximize a convex function over a convex body (the Schatten
// p unit ball, or the density matrices). Each step moves to the maximizer of
// the linearization at the current point, which by convexity never decreases
// the objective. The gap between the linearized optimum and the current
// value is a first-order stationarity measure and is what `converged`
// reports on. Every value is a certified lower bound: it is attained by the
// returned maximizer.

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "qmult/channel.hpp"

namespace qmult {

struct OptimizerConfig {
  int restarts = 32;
  int max_iters = 500;
  double step_tolerance = 1e-8;   // relative first-order gap
  double value_tolerance = 1e-9;  // relative re-evaluation agreement
  std::uint64_t seed = 0;

  void validate() const;
};

struct NormResult {
  double value = 0.0;
  Matrix maximizer;  // unit p-norm input, or a unit vector for nu
  int restarts_agreeing = 0;
  bool converged = false;
  bool exact = false;  // closed-form value (p = q = 2)
  int best_restart = -1;
  std::vector<std::string> warnings;
};

/// ||K(A)||_q / ||A||_p.
double p2q_objective(const ChannelMap& k, const Matrix& a, SchattenExponent p, SchattenExponent q);
/// ||K(psi psi*)||_t for a (not necessarily normalized) vector psi.
double nu_objective(const ChannelMap& k, const Vector& psi, SchattenExponent t);

/// Multi-restart estimate of sup ||K(A)||_q / ||A||_p. Extra starting points
/// in `seeds` are iterated alongside the random restarts.
NormResult p2q_norm_optimized(const ChannelMap& k, SchattenExponent p, SchattenExponent q,
                              const OptimizerConfig& cfg, std::span<const Matrix> seeds = {});

/// As above, except that p = q = 2 is answered exactly by the largest
/// singular value of the transfer matrix; the optimizer still runs and its
/// agreement count is reported.
NormResult p2q_norm(const ChannelMap& k, SchattenExponent p, SchattenExponent q, const OptimizerConfig& cfg,
                    std::span<const Matrix> seeds = {});

/// Maximal output t-norm over states. Optimizes over pure states, which is
/// enough because rho -> ||K(rho)||_t is convex. `seeds` are n x 1 vectors.
NormResult nu(const ChannelMap& k, SchattenExponent t, const OptimizerConfig& cfg,
              std::span<const Vector> seeds = {});

/// Sum_ij K(E_ij) (x) L(A_ij) for an (n_K n_L)-square A split into n_K x n_K
/// blocks of size n_L.
Matrix tensor_apply_by_blocks(const ChannelMap& k, const ChannelMap& l, const Matrix& a);

// --- block-matrix inequalities ----------------------------------------------

struct BlockNormMatrix {
  RealMatrix entries;  // entries(i, j) = ||A_ij||_p
};

BlockNormMatrix block_norm_matrix(const Matrix& a, int n, int m, SchattenExponent p);

struct InequalityCheck {
  double lhs = 0.0;
  double rhs = 0.0;
  bool holds = false;
};

/// sum_ij ||A_ij||_p^2 <= ||A||_p^2, valid for 1 <= p <= 2.
InequalityCheck bhatia_kittaneh_check(const Matrix& a, int n, int m, SchattenExponent p);

/// |Tr(B_1 ... B_n)| <= prod ||B_k||_n with n the number of factors.
InequalityCheck holder_trace_check(std::span<const Matrix> factors, double rel_slack = 1e-9);

struct ContractionDecomposition {
  Matrix r;
  double infnorm = 0.0;
  double reconstruction_error = 0.0;  // ||A_ii^{1/2} R A_jj^{1/2} - A_ij||_F
};

/// R_ij = A_ii^{-1/2} A_ij A_jj^{-1/2} with pseudo-inverse roots, for PSD A.
ContractionDecomposition contraction_decomposition(const Matrix& a, int n, int m, int i, int j);

}  // namespace qmult
