#include <doctest.h>

#include <cmath>

#include "qmult/channel.hpp"
#include "qmult/families.hpp"

using namespace qmult;

namespace {

Matrix diag2(double a, double b) {
  Matrix m = Matrix::Zero(2, 2);
  m(0, 0) = a;
  m(1, 1) = b;
  return m;
}

Matrix pure_state(const Vector& psi) { return psi * psi.adjoint(); }

Matrix random_density(Eigen::Index d, Eigen::Index rank, std::mt19937_64& rng) {
  const Matrix w = random_psd(d, rank, rng);
  return w / w.trace();
}

}  // namespace

TEST_CASE("apply on simple families") {
  auto rng = make_rng(1);
  const Matrix a = random_ginibre(3, 3, rng);
  CHECK((identity_channel(3).apply(a) - a).norm() < 1e-14);
  const Matrix rho = random_density(2, 2, rng);
  CHECK((depolarizing(2, 0.0).apply(rho) - 0.5 * Matrix::Identity(2, 2)).norm() < 1e-14);
  CHECK((depolarizing(2, 0.5).apply(matrix_unit(2, 2, 0, 0)) - diag2(0.75, 0.25)).norm() < 1e-14);
  CHECK_THROWS_AS((void)identity_channel(2).apply(Matrix::Zero(3, 3)), InputError);
}

TEST_CASE("constructor validation") {
  CHECK_THROWS_AS(ChannelMap(2, 2, Matrix::Zero(4, 3)), InputError);
  CHECK_THROWS_AS(ChannelMap(0, 2, Matrix::Zero(4, 0)), InputError);
  CHECK_THROWS_AS(KrausSet({}), InputError);
  CHECK_THROWS_AS(KrausSet({Matrix::Identity(2, 2), Matrix::Identity(3, 3)}), InputError);
}

TEST_CASE("choi matrices of reference maps") {
  const Matrix c = identity_channel(2).choi();
  Matrix expected = Matrix::Zero(4, 4);
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) expected += kron(matrix_unit(2, 2, i, j), matrix_unit(2, 2, i, j));
  CHECK((c - expected).norm() < 1e-14);
  CHECK(std::abs(c.trace() - cplx(2.0, 0.0)) < 1e-14);
  CHECK((depolarizing(2, 0.0).choi() - 0.5 * Matrix::Identity(4, 4)).norm() < 1e-14);
}

TEST_CASE("choi and kraus round trips") {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const ChannelMap k = random_cp_channel(2 + seed % 2, 2 + (seed / 2) % 2, 3, seed);
    CHECK((ChannelMap::from_choi(k.in_dim(), k.out_dim(), k.choi()).transfer() - k.transfer()).norm() < 1e-12);
    CHECK((ChannelMap::from_kraus(k.kraus()).transfer() - k.transfer()).norm() < 1e-10);
  }
}

TEST_CASE("choi entries match the apply formula") {
  const ChannelMap k = random_cp_channel(3, 2, 2, 99, false);
  const Matrix c = k.choi();
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) {
      const Matrix out = k.apply(matrix_unit(3, 3, i, j));
      for (int kk = 0; kk < 2; ++kk)
        for (int l = 0; l < 2; ++l) CHECK(std::abs(c(i * 2 + kk, j * 2 + l) - out(kk, l)) < 1e-12);
    }
  }
}

TEST_CASE("tensor products") {
  const ChannelMap id4 = tensor(identity_channel(2), identity_channel(2));
  CHECK((id4.transfer() - identity_channel(4).transfer()).norm() < 1e-14);

  const ChannelMap a = random_cp_channel(2, 3, 2, 1);
  const ChannelMap b = random_cp_channel(3, 2, 2, 2);
  const ChannelMap c = random_cp_channel(2, 2, 2, 3);
  CHECK((tensor(tensor(a, b), c).transfer() - tensor(a, tensor(b, c)).transfer()).norm() < 1e-12);
  CHECK(tensor(a, b).in_dim() == 6);
  CHECK(tensor(a, b).out_dim() == 6);

  // (K (x) L)(X (x) Y) = K(X) (x) L(Y)
  auto rng = make_rng(4);
  const Matrix x = random_ginibre(2, 2, rng);
  const Matrix y = random_ginibre(3, 3, rng);
  CHECK((tensor(a, b).apply(kron(x, y)) - kron(a.apply(x), b.apply(y))).norm() < 1e-12);

  const ChannelMap e1 = random_ep_cp_channel(2, 2, 2, 5);
  const ChannelMap e2 = random_ep_cp_channel(2, 3, 2, 6);
  CHECK(is_ep_in_basis(tensor(e1, e2)).ep);
}

TEST_CASE("complete positivity") {
  const CpReport boundary = is_cp(depolarizing(2, -1.0 / 3.0));
  CHECK(boundary.cp);
  CHECK(boundary.min_eigenvalue >= -1e-9);
  const CpReport outside = is_cp(depolarizing(2, -0.4));
  CHECK_FALSE(outside.cp);
  CHECK(outside.min_eigenvalue < 0.0);
  CHECK(is_cp(identity_channel(3)).cp);
  CHECK_FALSE(is_cp(transpose_map(2)).cp);
  Matrix skew = Matrix::Zero(4, 4);
  skew(1, 0) = 1.0;
  const CpReport hp = is_cp(ChannelMap(2, 2, skew));
  CHECK_FALSE(hp.hermiticity_preserving);
  CHECK_FALSE(hp.cp);
}

TEST_CASE("entrywise positivity") {
  CHECK(is_ep_in_basis(depolarizing(2, 0.5)).ep);
  CHECK(is_ep_in_basis(identity_channel(2)).ep);
  CHECK_FALSE(is_ep_in_basis(werner_holevo(3)).ep);
  const EpReport r = is_ep_in_basis(depolarizing(2, -0.2));
  CHECK_FALSE(r.ep);
  CHECK(r.violation == doctest::Approx(0.2).epsilon(1e-12));
  // A unitary pair can hide or reveal positivity.
  const ChannelMap id = identity_channel(2);
  Matrix h(2, 2);
  h << 1.0, 1.0, 1.0, -1.0;
  h /= std::sqrt(2.0);
  CHECK(is_ep_in_basis(id, 1e-10, h, h.adjoint()).ep);
  CHECK_FALSE(is_ep_in_basis(id, 1e-10, h, Matrix(Matrix::Identity(2, 2))).ep);
}

TEST_CASE("trace preservation") {
  for (double lam : {-1.0 / 3.0, 0.0, 0.5, 1.0}) CHECK(is_trace_preserving(depolarizing(2, lam)));
  CHECK(is_trace_preserving(depolarizing(3, 0.25)));
  CHECK_FALSE(is_trace_preserving(scaled(identity_channel(2), 2.0)));
  auto rng = make_rng(8);
  const Matrix gamma = random_density(3, 3, rng);
  CHECK(is_trace_preserving(generalized_depolarizing(0.3, gamma)));
  CHECK(is_cp(generalized_depolarizing(0.3, gamma)).cp);
  CHECK(is_ep_in_basis(generalized_depolarizing(0.3, gamma, true)).ep);
}

TEST_CASE("adjoint and composition") {
  auto rng = make_rng(9);
  const Matrix u = random_unitary(2, rng);
  const ChannelMap adj = adjoint_channel(unitary_conjugation(u));
  CHECK((adj.transfer() - unitary_conjugation(u.adjoint()).transfer()).norm() < 1e-12);
  // <B, K(A)> = <K*(B), A>
  const ChannelMap k = random_cp_channel(2, 3, 2, 10);
  const Matrix a = random_ginibre(2, 2, rng);
  const Matrix b = random_ginibre(3, 3, rng);
  const cplx lhs = (b.adjoint() * k.apply(a)).trace();
  const cplx rhs = (adjoint_channel(k).apply(b).adjoint() * a).trace();
  CHECK(std::abs(lhs - rhs) < 1e-12);
  const ChannelMap l = random_cp_channel(3, 2, 2, 11);
  CHECK((compose(l, k).apply(a) - l.apply(k.apply(a))).norm() < 1e-12);
}

TEST_CASE("two-positivity falsification") {
  CHECK(two_positive_falsify(random_cp_channel(2, 2, 2, 12), 1000, 3).not_falsified);
  CHECK(two_positive_falsify(zero_map(2, 2), 200, 3).not_falsified);
  const TwoPositivityReport t = two_positive_falsify(transpose_map(2), 1000, 3);
  CHECK_FALSE(t.not_falsified);
  CHECK(t.min_eigenvalue < 0.0);
  CHECK(t.counterexample.has_value());
}

TEST_CASE("depolarizing and generalized depolarizing") {
  CHECK((depolarizing(3, 1.0).transfer() - identity_channel(3).transfer()).norm() < 1e-14);
  auto rng = make_rng(14);
  const Matrix rho = random_density(3, 2, rng);
  CHECK((depolarizing(3, 0.0).apply(rho) - Matrix::Identity(3, 3) / 3.0).norm() < 1e-14);
  CHECK((generalized_depolarizing(0.4, Matrix::Identity(3, 3) / 3.0).transfer() - depolarizing(3, 0.4).transfer())
            .norm() < 1e-14);
  CHECK((generalized_depolarizing(1.0, rho).transfer() - identity_channel(3).transfer()).norm() < 1e-14);
  CHECK_THROWS_AS(depolarizing(1, 0.5), InputError);
  CHECK_THROWS_AS(generalized_depolarizing(0.5, Matrix::Identity(2, 2)), InputError);
}

TEST_CASE("kraus based families") {
  const KrausSet single({Matrix::Identity(2, 2)});
  CHECK((ChannelMap::from_kraus(single).transfer() - identity_channel(2).transfer()).norm() < 1e-14);
  const ChannelMap swap = random_unitary_permutation({0.5, 0.5}, {{0, 1}, {1, 0}});
  CHECK(is_cp(swap).cp);
  CHECK(is_ep_in_basis(swap).ep);
  CHECK(is_trace_preserving(swap));
  CHECK_THROWS_AS(random_unitary_permutation({0.5, 0.4}, {{0, 1}, {1, 0}}), InputError);
}

TEST_CASE("werner holevo map") {
  // d = 2 acts as w -> (-w1, w2, -w3), which is conjugation by i sigma_y.
  Matrix y(2, 2);
  y << 0.0, -1.0, 1.0, 0.0;
  CHECK((werner_holevo(2).transfer() - unitary_conjugation(y).transfer()).norm() < 1e-12);
  const ChannelMap w3 = werner_holevo(3);
  CHECK(is_cp(w3).cp);
  CHECK(is_trace_preserving(w3));
  auto rng = make_rng(15);
  for (int trial = 0; trial < 100; ++trial) {
    const Eigensystem es = hermitian_eigensystem(w3.apply(pure_state(random_unit_vector(3, rng))));
    CHECK(std::abs(es.values(0) - 0.5) < 1e-12);
    CHECK(std::abs(es.values(1) - 0.5) < 1e-12);
    CHECK(std::abs(es.values(2)) < 1e-12);
  }
}

TEST_CASE("random channel generators") {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const ChannelMap k = random_cp_channel(3, 2, 2, seed);
    CHECK(is_cp(k).cp);
    CHECK(is_trace_preserving(k));
    CHECK_FALSE(is_trace_preserving(random_cp_channel(3, 2, 2, seed, false)));
    const ChannelMap e = random_ep_cp_channel(2, 3, 2, seed);
    CHECK(is_cp(e).cp);
    CHECK(is_ep_in_basis(e, 1e-12).ep);
    CHECK(is_trace_preserving(e));
    const ChannelMap f = random_ep_cp_channel(3, 3, 2, seed, false);
    CHECK(is_ep_in_basis(f, 1e-12).ep);
    const ChannelMap g = random_ep_not_cp_map(2 + seed % 2, seed);
    CHECK(is_ep_in_basis(g).ep);
    CHECK_FALSE(is_cp(g).cp);
  }
  CHECK((random_cp_channel(2, 2, 3, 77).transfer() - random_cp_channel(2, 2, 3, 77).transfer()).norm() == 0.0);
  CHECK((random_ep_cp_channel(2, 2, 3, 77).transfer() - random_ep_cp_channel(2, 2, 3, 77).transfer()).norm() == 0.0);
  CHECK_THROWS_AS(random_ep_cp_channel(3, 1, 2, 0), InputError);
  CHECK_THROWS_AS(random_cp_channel(2, 2, 0, 0), InputError);
}
