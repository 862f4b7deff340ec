#include <doctest.h>

#include <cmath>
#include <random>

#include "oracles.hpp"
#include "qmult/channel.hpp"
#include "qmult/families.hpp"
#include "qmult/qubit.hpp"
#include "qmult/verify.hpp"

using namespace qmult;

namespace {

QubitDiagonalParams random_params(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-0.5, 0.5);
  return {{u(rng), u(rng), u(rng)}, {u(rng), u(rng), u(rng)}};
}

}  // namespace

TEST_CASE("qubit Choi matrix matches the displayed form") {
  const QubitDiagonalParams ref{{0.6, 0.2, 0.4}, {0.1, 0.0, 0.2}};
  CHECK((qubit_from_diagonal(ref).choi() - oracle::displayed_qubit_choi(ref)).cwiseAbs().maxCoeff() <= 1e-12);
  auto rng = make_rng(21);
  for (int draw = 0; draw < 50; ++draw) {
    const QubitDiagonalParams p = random_params(rng);
    CHECK((qubit_from_diagonal(p).choi() - oracle::displayed_qubit_choi(p)).cwiseAbs().maxCoeff() <= 1e-12);
  }
}

TEST_CASE("qubit reference parameters") {
  CHECK((qubit_from_diagonal({{1, 1, 1}, {0, 0, 0}}).transfer() - identity_channel(2).transfer()).norm() < 1e-14);
  CHECK((qubit_from_diagonal({{0, 0, 0}, {0, 0, 0}}).transfer() - depolarizing(2, 0.0).transfer()).norm() < 1e-14);
  CHECK_FALSE(is_ep_in_basis(qubit_from_diagonal({{0.5, 0.3, 0.2}, {0.1, 0.1, 0.1}})).ep);
  CHECK(qubit_is_ep_canonical({{0.5, 0.3, 0.2}, {0.1, 0.0, 0.3}}));
  CHECK_FALSE(qubit_is_ep_canonical({{0.5, 0.3, 0.2}, {0.1, 0.1, 0.3}}));
  CHECK(qubit_is_ep_canonical({{0, 0, 0}, {0, 0, 0}}));
  CHECK_THROWS_AS(qubit_from_diagonal({{std::nan(""), 0, 0}, {0, 0, 0}}), InputError);
}

TEST_CASE("pauli transfer round trip") {
  auto rng = make_rng(22);
  for (int draw = 0; draw < 50; ++draw) {
    const QubitDiagonalParams p = random_params(rng);
    const PauliTransfer pt = pauli_transfer(qubit_from_diagonal(p));
    CHECK(std::abs(pt.a(0, 0) - 1.0) <= 1e-12);
    for (int j = 0; j < 3; ++j) {
      CHECK(std::abs(pt.a(0, j + 1)) <= 1e-12);
      CHECK(std::abs(pt.a(j + 1, 0) - p.t[j]) <= 1e-12);
      for (int k = 0; k < 3; ++k) CHECK(std::abs(pt.a(j + 1, k + 1) - (j == k ? p.lambda[j] : 0.0)) <= 1e-12);
    }
    CHECK((from_pauli_transfer(pt).transfer() - qubit_from_diagonal(p).transfer()).norm() < 1e-12);
  }
  CHECK_THROWS_AS(pauli_transfer(identity_channel(3)), InputError);
}

TEST_CASE("basis rotations") {
  const PauliTransfer pt = pauli_transfer(qubit_from_diagonal({{0.5, 0.3, 0.2}, {0.1, 0.1, 0.1}}));
  const PauliTransfer same = rotate_bases(pt, Eigen::Matrix3d::Identity(), Eigen::Matrix3d::Identity());
  CHECK((same.a - pt.a).norm() < 1e-15);
  CHECK_THROWS_AS(rotate_bases(pt, 2.0 * Eigen::Matrix3d::Identity(), Eigen::Matrix3d::Identity()), InputError);
  // Rotated maps stay physical: the image is again a valid channel.
  auto rng = make_rng(23);
  const Eigen::Matrix3d o1 = random_rotation(rng);
  const Eigen::Matrix3d o2 = random_rotation(rng);
  const ChannelMap rotated = from_pauli_transfer(rotate_bases(pt, o1, o2));
  CHECK(is_trace_preserving(rotated));
  CHECK(is_cp(rotated).cp == is_cp(qubit_from_diagonal({{0.5, 0.3, 0.2}, {0.1, 0.1, 0.1}})).cp);
}

TEST_CASE("reality condition") {
  // Canonical EP parameters already satisfy the condition.
  const PauliTransfer ep = pauli_transfer(qubit_from_diagonal({{0.5, 0.3, 0.2}, {0.1, 0.0, 0.3}}));
  CHECK(reality_condition_residual(ep) < 1e-15);
  // t2 != 0 breaks it, but a rotation about the third axis restores it.
  const PauliTransfer off = pauli_transfer(qubit_from_diagonal({{0.5, 0.5, 0.2}, {0.1, 0.1, 0.3}}));
  CHECK(reality_condition_residual(off) > 1e-3);
  const RotationSearchResult found = search_reality_rotations(off, 400, 1);
  CHECK(found.min_residual < 1e-6);
  // Distinct nonzero lambdas with every t_j nonzero leave no admissible rotation pair.
  const PauliTransfer none = pauli_transfer(qubit_from_diagonal({{0.5, 0.3, 0.2}, {0.1, 0.1, 0.1}}));
  CHECK(search_reality_rotations(none, 400, 1).min_residual > 1e-4);
}

TEST_CASE("ep hat probe") {
  const EpHatProbe neg = ep_hat_probe({{0.3, 0.5, 0.2}, {0.1, 0.0, 0.2}});
  CHECK(std::abs(neg.b(1, 2) - (0.09 - 0.25)) <= 1e-12);
  CHECK_FALSE(neg.ep_hat);
  const EpHatProbe pos = ep_hat_probe({{0.5, 0.3, 0.2}, {0.1, 0.0, 0.2}});
  CHECK(std::abs(pos.b(1, 2) - 0.16) <= 1e-12);
  const EpHatProbe id = ep_hat_probe({{1, 1, 1}, {0, 0, 0}});
  CHECK((id.unit_basis - Eigen::Matrix4d::Identity()).norm() < 1e-14);
  CHECK(id.ep_hat);
  CHECK_THROWS_AS(ep_hat_probe({{0.5, 0.3, 0.2}, {0.1, 0.1, 0.2}}), InputError);
}
