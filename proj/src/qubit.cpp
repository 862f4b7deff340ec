#include "qmult/qubit.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

namespace qmult {

void QubitDiagonalParams::validate() const {
  for (int k = 0; k < 3; ++k) {
    if (!std::isfinite(lambda[k]) || !std::isfinite(t[k])) {
      throw InputError("qubit diagonal parameters must be finite");
    }
  }
}

const std::array<Matrix, 4>& pauli_matrices() {
  static const std::array<Matrix, 4> paulis = [] {
    const cplx i(0.0, 1.0);
    std::array<Matrix, 4> s;
    for (auto& m : s) m = Matrix::Zero(2, 2);
    s[0] << 1.0, 0.0, 0.0, 1.0;
    s[1] << 0.0, 1.0, 1.0, 0.0;
    s[2] << 0.0, -i, i, 0.0;
    s[3] << 1.0, 0.0, 0.0, -1.0;
    return s;
  }();
  return paulis;
}

ChannelMap from_pauli_transfer(const PauliTransfer& pt) {
  // K(X) = sum_jk a_jk sigma_j (1/2) Tr[sigma_k X].
  const auto& s = pauli_matrices();
  Matrix t = Matrix::Zero(4, 4);
  for (int j = 0; j < 4; ++j) {
    for (int k = 0; k < 4; ++k) {
      if (pt.a(j, k) == 0.0) continue;
      t += (0.5 * pt.a(j, k)) * vec(s[j]) * vec(s[k]).adjoint();
    }
  }
  return {2, 2, std::move(t)};
}

ChannelMap qubit_from_diagonal(const QubitDiagonalParams& params) {
  params.validate();
  PauliTransfer pt;
  for (int k = 0; k < 3; ++k) {
    pt.a(k + 1, 0) = params.t[k];
    pt.a(k + 1, k + 1) = params.lambda[k];
  }
  return from_pauli_transfer(pt);
}

bool qubit_is_ep_canonical(const QubitDiagonalParams& params) {
  return params.lambda[0] >= std::abs(params.lambda[1]) && params.t[0] >= 0.0 && params.t[1] == 0.0;
}

PauliTransfer pauli_transfer(const ChannelMap& k) {
  if (k.in_dim() != 2 || k.out_dim() != 2) throw InputError("pauli_transfer: map must be 2 -> 2");
  const auto& s = pauli_matrices();
  PauliTransfer pt;
  for (int c = 0; c < 4; ++c) {
    const Matrix out = k.apply(s[c]);
    for (int r = 0; r < 4; ++r) {
      const cplx a = 0.5 * (s[r] * out).trace();
      if (std::abs(a.imag()) > 1e-9 * std::max(1.0, std::abs(a))) {
        throw InputError("pauli_transfer: map is not Hermiticity-preserving");
      }
      pt.a(r, c) = a.real();
    }
  }
  return pt;
}

namespace {

void require_orthogonal(const Eigen::Matrix3d& o, const char* what) {
  if (!o.allFinite() || (o.transpose() * o - Eigen::Matrix3d::Identity()).cwiseAbs().maxCoeff() > 1e-9) {
    throw InputError(std::string(what) + " is not orthogonal");
  }
}

Eigen::Matrix4d lift(const Eigen::Matrix3d& o) {
  Eigen::Matrix4d r = Eigen::Matrix4d::Identity();
  r.block<3, 3>(1, 1) = o;
  return r;
}

// Rotation by angle |w| about w (Rodrigues).
Eigen::Matrix3d small_rotation(const Eigen::Vector3d& w) {
  const double angle = w.norm();
  if (angle == 0.0) return Eigen::Matrix3d::Identity();
  return Eigen::AngleAxisd(angle, w / angle).toRotationMatrix();
}

}  // namespace

PauliTransfer rotate_bases(const PauliTransfer& pt, const Eigen::Matrix3d& o1, const Eigen::Matrix3d& o2) {
  require_orthogonal(o1, "O1");
  require_orthogonal(o2, "O2");
  PauliTransfer out;
  out.a = lift(o1) * pt.a * lift(o2);
  return out;
}

double reality_condition_residual(const PauliTransfer& pt) {
  double acc = 0.0;
  for (int j : {0, 1, 3}) {
    acc += pt.a(j, 2) * pt.a(j, 2);
    acc += pt.a(2, j) * pt.a(2, j);
  }
  return std::sqrt(acc);
}

RotationSearchResult search_reality_rotations(const PauliTransfer& pt, int samples, std::uint64_t seed) {
  if (samples < 1) throw InputError("search_reality_rotations: samples must be >= 1");
  auto rng = make_rng(seed, 0x50);
  std::normal_distribution<double> normal(0.0, 1.0);

  auto residual = [&](const Eigen::Matrix3d& o1, const Eigen::Matrix3d& o2) {
    PauliTransfer r;
    r.a = lift(o1) * pt.a * lift(o2);
    return reality_condition_residual(r);
  };

  RotationSearchResult best;
  best.min_residual = residual(best.o1, best.o2);
  constexpr int kRefined = 8;
  std::vector<RotationSearchResult> seeds;
  for (int s = 0; s < samples; ++s) {
    RotationSearchResult cand;
    cand.o1 = random_rotation(rng);
    cand.o2 = random_rotation(rng);
    cand.min_residual = residual(cand.o1, cand.o2);
    seeds.push_back(cand);
  }
  std::partial_sort(seeds.begin(), seeds.begin() + std::min<std::size_t>(kRefined, seeds.size()), seeds.end(),
                    [](const auto& x, const auto& y) { return x.min_residual < y.min_residual; });
  seeds.resize(std::min<std::size_t>(kRefined, seeds.size()));

  for (auto& cand : seeds) {
    double step = 0.3;
    int stalls = 0;
    while (step > 1e-7) {
      Eigen::Vector3d w1, w2;
      for (int k = 0; k < 3; ++k) {
        w1(k) = step * normal(rng);
        w2(k) = step * normal(rng);
      }
      const Eigen::Matrix3d o1 = small_rotation(w1) * cand.o1;
      const Eigen::Matrix3d o2 = cand.o2 * small_rotation(w2);
      const double r = residual(o1, o2);
      if (r < cand.min_residual) {
        cand = {r, o1, o2};
        stalls = 0;
      } else if (++stalls > 40) {
        step *= 0.5;
        stalls = 0;
      }
    }
    if (cand.min_residual < best.min_residual) best = cand;
  }
  return best;
}

}  // namespace qmult
