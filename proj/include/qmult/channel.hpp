#pragma once

// Linear maps M_n -> M_m stored as transfer matrices on column-stacked
// vectors: vec(K(A)) = transfer * vec(A).

#include <memory>
#include <mutex>
#include <optional>
#include <vector>

#include "qmult/linalg.hpp"

namespace qmult {

/// Nonempty list of equally shaped m x n Kraus operators.
class KrausSet {
 public:
  explicit KrausSet(std::vector<Matrix> operators);
  [[nodiscard]] const std::vector<Matrix>& operators() const { return ops_; }
  [[nodiscard]] Eigen::Index in_dim() const { return ops_.front().cols(); }
  [[nodiscard]] Eigen::Index out_dim() const { return ops_.front().rows(); }

 private:
  std::vector<Matrix> ops_;
};

class ChannelMap {
 public:
  /// Takes ownership of an m^2 x n^2 transfer matrix.
  ChannelMap(int in_dim, int out_dim, Matrix transfer);

  static ChannelMap from_choi(int in_dim, int out_dim, const Matrix& choi);
  static ChannelMap from_kraus(const KrausSet& kraus);

  [[nodiscard]] int in_dim() const { return n_; }
  [[nodiscard]] int out_dim() const { return m_; }
  [[nodiscard]] const Matrix& transfer() const { return transfer_; }

  /// mn x mn matrix whose (i, j) block of size m is K(E_ij). Computed once.
  [[nodiscard]] const Matrix& choi() const;

  /// Kraus operators from the Choi spectrum; only meaningful for CP maps.
  /// Eigenvalues below `cutoff` are dropped.
  [[nodiscard]] KrausSet kraus(double cutoff = 1e-12) const;

  [[nodiscard]] Matrix apply(const Matrix& a) const;

 private:
  struct Cache {
    std::once_flag once;
    Matrix choi;
  };

  int n_;
  int m_;
  Matrix transfer_;
  std::shared_ptr<Cache> cache_;
};

/// K (x) L acting on M_{n_K n_L} -> M_{m_K m_L}.
ChannelMap tensor(const ChannelMap& k, const ChannelMap& l);
/// Composition outer o inner.
ChannelMap compose(const ChannelMap& outer, const ChannelMap& inner);
/// Hilbert-Schmidt adjoint; its transfer matrix is the conjugate transpose.
ChannelMap adjoint_channel(const ChannelMap& k);
ChannelMap scaled(const ChannelMap& k, cplx factor);

// --- structural predicates ------------------------------------------------

struct CpReport {
  bool cp = false;
  bool hermiticity_preserving = false;
  double min_eigenvalue = 0.0;
  Vector witness;  // eigenvector of the Choi matrix for min_eigenvalue
};

/// CP iff the Choi matrix is PSD up to `tol`. A Choi matrix that is not
/// Hermitian is reported through `hermiticity_preserving = false`.
CpReport is_cp(const ChannelMap& k, double tol = 1e-9);

struct EpReport {
  bool ep = false;
  // Worst Choi entry: block (i, j), entry (k, l) inside the block.
  int i = 0, j = 0, k = 0, l = 0;
  cplx worst_entry{0.0, 0.0};
  double violation = 0.0;  // max(-Re, |Im|) over all entries
};

/// Entrywise positivity of the Choi matrix in the standard bases, or of
/// Gamma_V o K o Gamma_U when unitaries are supplied.
EpReport is_ep_in_basis(const ChannelMap& k, double tol = 1e-10,
                        const std::optional<Matrix>& input_unitary = std::nullopt,
                        const std::optional<Matrix>& output_unitary = std::nullopt);

bool is_trace_preserving(const ChannelMap& k, double tol = 1e-10);

struct TwoPositivityReport {
  bool not_falsified = true;
  double min_eigenvalue = 0.0;  // smallest output eigenvalue seen
  std::optional<Matrix> counterexample;
};

/// Samples random PSD inputs X on C^2 (x) C^n and checks (id_2 (x) K)(X) >= -tol.
/// `not_falsified = true` is evidence, not proof, of 2-positivity.
TwoPositivityReport two_positive_falsify(const ChannelMap& k, int samples = 1000, std::uint64_t seed = 0,
                                         double tol = 1e-9);

}  // namespace qmult
