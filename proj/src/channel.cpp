#include "qmult/channel.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace qmult {

KrausSet::KrausSet(std::vector<Matrix> operators) : ops_(std::move(operators)) {
  if (ops_.empty()) throw InputError("Kraus set must be nonempty");
  for (const auto& a : ops_) {
    require_finite(a, "Kraus operator");
    if (a.rows() != ops_.front().rows() || a.cols() != ops_.front().cols()) {
      throw InputError("Kraus operators must share one shape");
    }
  }
}

ChannelMap::ChannelMap(int in_dim, int out_dim, Matrix transfer)
    : n_(in_dim), m_(out_dim), transfer_(std::move(transfer)), cache_(std::make_shared<Cache>()) {
  if (n_ < 1 || m_ < 1) throw InputError("channel dimensions must be positive");
  const Eigen::Index rows = static_cast<Eigen::Index>(m_) * m_;
  const Eigen::Index cols = static_cast<Eigen::Index>(n_) * n_;
  if (transfer_.rows() != rows || transfer_.cols() != cols) {
    throw InputError("transfer matrix must be " + std::to_string(rows) + "x" + std::to_string(cols) + ", got " +
                     std::to_string(transfer_.rows()) + "x" + std::to_string(transfer_.cols()));
  }
  require_finite(transfer_, "transfer matrix");
}

// Choi[(i m + k), (j m + l)] = K(E_ij)[k, l] = transfer[k + l m, i + j n].
const Matrix& ChannelMap::choi() const {
  std::call_once(cache_->once, [this] {
    Matrix c(static_cast<Eigen::Index>(n_) * m_, static_cast<Eigen::Index>(n_) * m_);
    for (int i = 0; i < n_; ++i) {
      for (int j = 0; j < n_; ++j) {
        for (int k = 0; k < m_; ++k) {
          for (int l = 0; l < m_; ++l) c(i * m_ + k, j * m_ + l) = transfer_(k + l * m_, i + j * n_);
        }
      }
    }
    cache_->choi = std::move(c);
  });
  return cache_->choi;
}

ChannelMap ChannelMap::from_choi(int in_dim, int out_dim, const Matrix& choi) {
  const Eigen::Index dim = static_cast<Eigen::Index>(in_dim) * out_dim;
  if (in_dim < 1 || out_dim < 1 || choi.rows() != dim || choi.cols() != dim) {
    throw InputError("Choi matrix must be " + std::to_string(dim) + "x" + std::to_string(dim));
  }
  const int n = in_dim, m = out_dim;
  Matrix t(static_cast<Eigen::Index>(m) * m, static_cast<Eigen::Index>(n) * n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      for (int k = 0; k < m; ++k) {
        for (int l = 0; l < m; ++l) t(k + l * m, i + j * n) = choi(i * m + k, j * m + l);
      }
    }
  }
  return {n, m, std::move(t)};
}

// vec(A X A*) = (conj(A) (x) A) vec(X) for column stacking.
ChannelMap ChannelMap::from_kraus(const KrausSet& kraus) {
  const auto n = static_cast<int>(kraus.in_dim());
  const auto m = static_cast<int>(kraus.out_dim());
  Matrix t = Matrix::Zero(static_cast<Eigen::Index>(m) * m, static_cast<Eigen::Index>(n) * n);
  for (const auto& a : kraus.operators()) t += kron(a.conjugate(), a);
  return {n, m, std::move(t)};
}

KrausSet ChannelMap::kraus(double cutoff) const {
  const Eigensystem es = hermitian_eigensystem(choi());
  std::vector<Matrix> ops;
  for (Eigen::Index r = 0; r < es.values.size(); ++r) {
    if (es.values(r) <= cutoff) continue;
    // Eigenvector entry (i m + k) becomes A(k, i).
    const Vector v = std::sqrt(es.values(r)) * es.vectors.col(r);
    Matrix a(m_, n_);
    for (int i = 0; i < n_; ++i) {
      for (int k = 0; k < m_; ++k) a(k, i) = v(i * m_ + k);
    }
    ops.push_back(std::move(a));
  }
  if (ops.empty()) ops.push_back(Matrix::Zero(m_, n_));
  return KrausSet(std::move(ops));
}

Matrix ChannelMap::apply(const Matrix& a) const {
  if (a.rows() != n_ || a.cols() != n_) {
    throw InputError("apply: expected a " + std::to_string(n_) + "x" + std::to_string(n_) + " input, got " +
                     std::to_string(a.rows()) + "x" + std::to_string(a.cols()));
  }
  const Vector out = transfer_ * vec(a);
  return unvec(out, m_, m_);
}

ChannelMap tensor(const ChannelMap& k, const ChannelMap& l) {
  const int n1 = k.in_dim(), m1 = k.out_dim(), n2 = l.in_dim(), m2 = l.out_dim();
  constexpr long kMaxDim = 1 << 12;
  if (static_cast<long>(n1) * n2 > kMaxDim || static_cast<long>(m1) * m2 > kMaxDim) {
    throw InputError("tensor: dimension overflow");
  }
  const int n = n1 * n2, m = m1 * m2;
  Matrix t(static_cast<Eigen::Index>(m) * m, static_cast<Eigen::Index>(n) * n);
  const Matrix& tk = k.transfer();
  const Matrix& tl = l.transfer();
  // Output entry (k1 m2 + k2, l1 m2 + l2), input entry (i1 n2 + i2, j1 n2 + j2).
  for (int j1 = 0; j1 < n1; ++j1)
    for (int j2 = 0; j2 < n2; ++j2)
      for (int i1 = 0; i1 < n1; ++i1)
        for (int i2 = 0; i2 < n2; ++i2) {
          const Eigen::Index col = (i1 * n2 + i2) + static_cast<Eigen::Index>(j1 * n2 + j2) * n;
          const Eigen::Index ck = i1 + j1 * n1, cl = i2 + j2 * n2;
          for (int l1 = 0; l1 < m1; ++l1)
            for (int l2 = 0; l2 < m2; ++l2)
              for (int k1 = 0; k1 < m1; ++k1)
                for (int k2 = 0; k2 < m2; ++k2) {
                  const Eigen::Index row = (k1 * m2 + k2) + static_cast<Eigen::Index>(l1 * m2 + l2) * m;
                  t(row, col) = tk(k1 + l1 * m1, ck) * tl(k2 + l2 * m2, cl);
                }
        }
  return {n, m, std::move(t)};
}

ChannelMap compose(const ChannelMap& outer, const ChannelMap& inner) {
  if (outer.in_dim() != inner.out_dim()) throw InputError("compose: dimension mismatch");
  return {inner.in_dim(), outer.out_dim(), outer.transfer() * inner.transfer()};
}

ChannelMap adjoint_channel(const ChannelMap& k) { return {k.out_dim(), k.in_dim(), k.transfer().adjoint()}; }

ChannelMap scaled(const ChannelMap& k, cplx factor) { return {k.in_dim(), k.out_dim(), factor * k.transfer()}; }

CpReport is_cp(const ChannelMap& k, double tol) {
  const Matrix& c = k.choi();
  CpReport report;
  report.hermiticity_preserving = is_hermitian(c, hermitian_tolerance(c));
  if (!report.hermiticity_preserving) return report;
  const Eigensystem es = hermitian_eigensystem(c);
  const Eigen::Index last = es.values.size() - 1;
  report.min_eigenvalue = es.values(last);
  report.witness = es.vectors.col(last);
  report.cp = report.min_eigenvalue >= -tol;
  return report;
}

EpReport is_ep_in_basis(const ChannelMap& k, double tol, const std::optional<Matrix>& input_unitary,
                        const std::optional<Matrix>& output_unitary) {
  const ChannelMap* target = &k;
  std::optional<ChannelMap> rotated;
  if (input_unitary || output_unitary) {
    Matrix tu = Matrix::Identity(static_cast<Eigen::Index>(k.in_dim()) * k.in_dim(),
                                 static_cast<Eigen::Index>(k.in_dim()) * k.in_dim());
    Matrix tv = Matrix::Identity(static_cast<Eigen::Index>(k.out_dim()) * k.out_dim(),
                                 static_cast<Eigen::Index>(k.out_dim()) * k.out_dim());
    if (input_unitary) {
      const Matrix& u = *input_unitary;
      if (u.rows() != k.in_dim() || u.cols() != k.in_dim()) throw InputError("input unitary has wrong size");
      tu = kron(u.conjugate(), u);
    }
    if (output_unitary) {
      const Matrix& v = *output_unitary;
      if (v.rows() != k.out_dim() || v.cols() != k.out_dim()) throw InputError("output unitary has wrong size");
      tv = kron(v.conjugate(), v);
    }
    rotated.emplace(k.in_dim(), k.out_dim(), tv * k.transfer() * tu);
    target = &*rotated;
  }
  const Matrix& c = target->choi();
  const int m = target->out_dim();
  EpReport report;
  report.violation = -std::numeric_limits<double>::infinity();
  for (Eigen::Index r = 0; r < c.rows(); ++r) {
    for (Eigen::Index s = 0; s < c.cols(); ++s) {
      const double bad = std::max(-c(r, s).real(), std::abs(c(r, s).imag()));
      if (bad > report.violation) {
        report.violation = bad;
        report.worst_entry = c(r, s);
        report.i = static_cast<int>(r / m);
        report.k = static_cast<int>(r % m);
        report.j = static_cast<int>(s / m);
        report.l = static_cast<int>(s % m);
      }
    }
  }
  report.ep = report.violation <= tol;
  return report;
}

bool is_trace_preserving(const ChannelMap& k, double tol) {
  const int n = k.in_dim(), m = k.out_dim();
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      cplx tr = 0.0;
      for (int a = 0; a < m; ++a) tr += k.transfer()(a + a * m, i + j * n);
      const double expected = i == j ? 1.0 : 0.0;
      if (std::abs(tr - expected) > tol) return false;
    }
  }
  return true;
}

TwoPositivityReport two_positive_falsify(const ChannelMap& k, int samples, std::uint64_t seed, double tol) {
  if (samples < 1) throw InputError("two_positive_falsify: samples must be >= 1");
  const ChannelMap id2(2, 2, Matrix::Identity(4, 4));
  const ChannelMap extended = tensor(id2, k);
  const Eigen::Index d = 2 * static_cast<Eigen::Index>(k.in_dim());
  auto rng = make_rng(seed, 0x2b05);
  TwoPositivityReport report;
  report.min_eigenvalue = std::numeric_limits<double>::infinity();
  for (int s = 0; s < samples; ++s) {
    // Cycle through ranks so low-rank (typically entangled) inputs are common.
    const Eigen::Index rank = 1 + s % d;
    Matrix x = random_psd(d, rank, rng);
    x /= x.trace().real();
    const Matrix y = extended.apply(x);
    Eigen::SelfAdjointEigenSolver<Matrix> solver(0.5 * (y + y.adjoint()), Eigen::EigenvaluesOnly);
    const double lo = solver.eigenvalues()(0);
    if (lo < report.min_eigenvalue) report.min_eigenvalue = lo;
    if (lo < -tol) {
      report.not_falsified = false;
      report.counterexample = std::move(x);
      return report;
    }
  }
  return report;
}

}  // namespace qmult
