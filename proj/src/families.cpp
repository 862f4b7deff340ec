#include "qmult/families.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

namespace qmult {

namespace {

void require_dim(int d, int min, const char* what) {
  if (d < min) throw InputError(std::string(what) + ": dimension must be >= " + std::to_string(min));
}

Eigen::Index sq(int d) { return static_cast<Eigen::Index>(d) * d; }

}  // namespace

ChannelMap identity_channel(int d) {
  require_dim(d, 1, "identity_channel");
  return {d, d, Matrix::Identity(sq(d), sq(d))};
}

ChannelMap zero_map(int n, int m) {
  require_dim(n, 1, "zero_map");
  require_dim(m, 1, "zero_map");
  return {n, m, Matrix::Zero(sq(m), sq(n))};
}

ChannelMap unitary_conjugation(const Matrix& u) {
  require_square(u, "unitary");
  require_finite(u, "unitary");
  const auto d = static_cast<int>(u.rows());
  if ((u.adjoint() * u - Matrix::Identity(d, d)).cwiseAbs().maxCoeff() > 1e-9) {
    throw InputError("unitary_conjugation: matrix is not unitary");
  }
  return {d, d, kron(u.conjugate(), u)};
}

ChannelMap transpose_map(int d) {
  require_dim(d, 1, "transpose_map");
  Matrix t = Matrix::Zero(sq(d), sq(d));
  for (int i = 0; i < d; ++i) {
    for (int j = 0; j < d; ++j) t(j + i * d, i + j * d) = 1.0;
  }
  return {d, d, std::move(t)};
}

ChannelMap depolarizing(int d, double lam) {
  require_dim(d, 2, "depolarizing");
  if (!std::isfinite(lam)) throw InputError("depolarizing: lambda must be finite");
  const Vector id = vec(Matrix::Identity(d, d));
  Matrix t = lam * Matrix::Identity(sq(d), sq(d));
  t += ((1.0 - lam) / d) * id * id.transpose();
  return {d, d, std::move(t)};
}

ChannelMap generalized_depolarizing(double lam, const Matrix& gamma, bool diagonalize_gamma) {
  require_square(gamma, "gamma");
  require_finite(gamma, "gamma");
  if (!std::isfinite(lam)) throw InputError("generalized_depolarizing: lambda must be finite");
  const auto d = static_cast<int>(gamma.rows());
  if (!is_hermitian(gamma, 1e-10)) throw InputError("gamma is not Hermitian");
  const Eigensystem es = hermitian_eigensystem(gamma);
  if (es.values(es.values.size() - 1) < -1e-10) throw InputError("gamma is not positive semidefinite");
  if (std::abs(gamma.trace() - 1.0) > 1e-10) throw InputError("gamma must have unit trace");

  const Matrix target = diagonalize_gamma ? Matrix(es.values.cast<cplx>().asDiagonal()) : gamma;
  const Vector id = vec(Matrix::Identity(d, d));
  Matrix t = lam * Matrix::Identity(sq(d), sq(d));
  t += (1.0 - lam) * vec(target) * id.transpose();
  return {d, d, std::move(t)};
}

ChannelMap random_unitary_permutation(const std::vector<double>& probs, const std::vector<std::vector<int>>& perms) {
  if (probs.empty() || probs.size() != perms.size()) {
    throw InputError("random_unitary_permutation: need one probability per permutation");
  }
  double total = 0.0;
  for (double p : probs) {
    if (!(p >= 0.0) || !std::isfinite(p)) throw InputError("probabilities must be nonnegative");
    total += p;
  }
  if (std::abs(total - 1.0) > 1e-10) throw InputError("probabilities must sum to 1");
  const auto d = static_cast<int>(perms.front().size());
  require_dim(d, 1, "random_unitary_permutation");
  std::vector<Matrix> ops;
  for (std::size_t k = 0; k < perms.size(); ++k) {
    const auto& perm = perms[k];
    if (static_cast<int>(perm.size()) != d) throw InputError("permutations must have equal size");
    std::vector<int> sorted = perm;
    std::sort(sorted.begin(), sorted.end());
    for (int i = 0; i < d; ++i) {
      if (sorted[i] != i) throw InputError("invalid permutation");
    }
    Matrix p = Matrix::Zero(d, d);
    for (int i = 0; i < d; ++i) p(perm[i], i) = std::sqrt(probs[k]);
    ops.push_back(std::move(p));
  }
  return ChannelMap::from_kraus(KrausSet(std::move(ops)));
}

ChannelMap werner_holevo(int d) {
  require_dim(d, 2, "werner_holevo");
  const Vector id = vec(Matrix::Identity(d, d));
  Matrix t = id * id.transpose() - transpose_map(d).transfer();
  t /= static_cast<double>(d - 1);
  return {d, d, std::move(t)};
}

ChannelMap random_cp_channel(int n, int m, int kraus_count, std::uint64_t seed, bool trace_preserving) {
  require_dim(n, 1, "random_cp_channel");
  require_dim(m, 1, "random_cp_channel");
  require_dim(kraus_count, 1, "random_cp_channel kraus_count");
  auto rng = make_rng(seed, 0xc0);
  std::vector<Matrix> ops;
  Matrix gram = Matrix::Zero(n, n);
  for (int k = 0; k < kraus_count; ++k) {
    ops.push_back(random_ginibre(m, n, rng));
    gram += ops.back().adjoint() * ops.back();
  }
  if (trace_preserving) {
    const Matrix root = psd_power(gram, -0.5, 1e-300);
    for (auto& a : ops) a = a * root;
  } else {
    const double scale = 1.0 / std::sqrt(singular_values(gram)(0));
    for (auto& a : ops) a *= scale;
  }
  return ChannelMap::from_kraus(KrausSet(std::move(ops)));
}

ChannelMap random_ep_cp_channel(int n, int m, int kraus_count, std::uint64_t seed, bool trace_preserving) {
  require_dim(n, 1, "random_ep_cp_channel");
  require_dim(m, 1, "random_ep_cp_channel");
  require_dim(kraus_count, 1, "random_ep_cp_channel kraus_count");
  auto rng = make_rng(seed, 0xe9);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const int stacked_rows = kraus_count * m;
  RealMatrix stacked = RealMatrix::Zero(stacked_rows, n);
  if (trace_preserving) {
    // Nonnegative columns with orthonormality force disjoint supports: each
    // stacked row is owned by one input column.
    if (stacked_rows < n) throw InputError("random_ep_cp_channel: trace preservation needs kraus_count * m >= n");
    std::vector<int> owner(stacked_rows);
    for (int r = 0; r < stacked_rows; ++r) owner[r] = static_cast<int>(rng() % static_cast<std::uint64_t>(n));
    // Every column owns at least one row.
    std::vector<int> rows(stacked_rows);
    std::iota(rows.begin(), rows.end(), 0);
    std::shuffle(rows.begin(), rows.end(), rng);
    for (int c = 0; c < n; ++c) owner[rows[c]] = c;
    for (int r = 0; r < stacked_rows; ++r) stacked(r, owner[r]) = 0.05 + unit(rng);
    for (int c = 0; c < n; ++c) stacked.col(c).normalize();
  } else {
    for (Eigen::Index k = 0; k < stacked.size(); ++k) stacked.data()[k] = unit(rng);
    const RealMatrix gram = stacked.transpose() * stacked;
    Eigen::SelfAdjointEigenSolver<RealMatrix> solver(gram, Eigen::EigenvaluesOnly);
    stacked /= std::sqrt(solver.eigenvalues().maxCoeff());
  }
  std::vector<Matrix> ops;
  for (int k = 0; k < kraus_count; ++k) ops.emplace_back(stacked.block(k * m, 0, m, n).cast<cplx>());
  return ChannelMap::from_kraus(KrausSet(std::move(ops)));
}

ChannelMap random_ep_not_cp_map(int d, std::uint64_t seed) {
  require_dim(d, 2, "random_ep_not_cp_map");
  auto rng = make_rng(seed, 0x7e);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  double mu = 0.6 + 0.4 * unit(rng);
  const ChannelMap base = random_ep_cp_channel(d, d, 2, rng(), true);
  const ChannelMap transpose = transpose_map(d);
  for (;;) {
    ChannelMap candidate(d, d, mu * transpose.transfer() + (1.0 - mu) * base.transfer());
    if (!is_cp(candidate).cp && is_ep_in_basis(candidate).ep) return candidate;
    // The transpose endpoint is EP and never CP, so this terminates.
    mu = 0.5 * (mu + 1.0);
    if (1.0 - mu < 1e-6) mu = 1.0;
  }
}

}  // namespace qmult
