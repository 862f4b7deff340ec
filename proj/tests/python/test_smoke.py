import math

import numpy as np
import pytest

import qmult


def test_depolarizing_nu_closed_form():
    k = qmult.depolarizing(2, 0.5)
    r = qmult.nu(k, 2.0, restarts=8)
    assert r["converged"]
    assert r["value"] == pytest.approx(math.sqrt(0.75**2 + 0.25**2), abs=1e-6)


def test_channel_views_and_apply():
    k = qmult.depolarizing(2, 0.5)
    assert k.in_dim == 2 and k.out_dim == 2
    out = k.apply(np.array([[1, 0], [0, 0]], dtype=complex))
    np.testing.assert_allclose(out, np.diag([0.75, 0.25]), atol=1e-14)
    back = qmult.ChannelMap.from_choi(2, 2, k.choi())
    np.testing.assert_allclose(back.transfer, k.transfer, atol=1e-12)
    kraus = k.kraus()
    np.testing.assert_allclose(qmult.ChannelMap.from_kraus(kraus).transfer, k.transfer, atol=1e-10)


def test_predicates():
    assert qmult.is_cp(qmult.depolarizing(2, -1.0 / 3.0))["cp"]
    assert not qmult.is_cp(qmult.depolarizing(2, -0.4))["cp"]
    assert qmult.is_ep_in_basis(qmult.depolarizing(2, 0.5))["ep"]
    assert not qmult.is_ep_in_basis(qmult.werner_holevo(3))["ep"]
    assert qmult.is_trace_preserving(qmult.random_cp_channel(2, 3, 2, seed=1))
    assert not qmult.two_positive_falsify(qmult.transpose_map(2), samples=500)


def test_exact_two_to_two():
    k = qmult.random_cp_channel(3, 2, 2, seed=5)
    r = qmult.p2q_norm(k, 2.0, 2.0, restarts=4)
    assert r["exact"]
    assert r["value"] == pytest.approx(np.linalg.svd(k.transfer, compute_uv=False)[0], rel=1e-12)


def test_qubit_structure():
    k = qmult.qubit_from_diagonal([0.6, 0.2, 0.4], [0.1, 0.0, 0.2])
    a = qmult.pauli_transfer(k)
    np.testing.assert_allclose(np.diag(a)[1:], [0.6, 0.2, 0.4], atol=1e-12)
    np.testing.assert_allclose(a[1:, 0], [0.1, 0.0, 0.2], atol=1e-12)
    probe = qmult.ep_hat_probe([0.3, 0.5, 0.2], [0.1, 0.0, 0.2])
    assert probe["b"][1, 2] == pytest.approx(0.09 - 0.25, abs=1e-12)
    assert not probe["ep_hat"]


def test_verification_entry_points():
    assert qmult.wh_violation(3, 5)["extra"]["violated"]
    assert not qmult.wh_violation(3, 2)["extra"]["violated"]
    dep = qmult.depolarizing(2, 0.5)
    rep = qmult.check_theorem2(dep, dep, 2, restarts=8)
    assert rep["status"] == "passed"
    lines = qmult.run_suite("thm2", 2, [2, 3], seed=3, restarts=4)
    assert lines == qmult.run_suite("thm2", 2, [2, 3], seed=3, restarts=4)
    assert len(lines.strip().splitlines()) == 2


def test_json_round_trip_and_errors():
    k = qmult.random_ep_cp_channel(2, 2, 2, seed=4)
    again = qmult.ChannelMap.from_json(k.to_json())
    np.testing.assert_array_equal(again.transfer, k.transfer)
    with pytest.raises(ValueError):
        qmult.depolarizing(1, 0.5)
    with pytest.raises(ValueError):
        qmult.nu(k, 0.5)
