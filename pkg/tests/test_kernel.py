import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from conftest import random_state, random_unitary
from qgr.kernel import (
    HADAMARD, IDENTITY, NAMED_OPS, SIGMA_X, SIGMA_Y, SIGMA_Z, apply_local, as_state,
    as_unitary, det_normalize, eig2, inner, su2_derivatives, su2_from_angles,
    tensor_apply,
)

angles = st.floats(-10, 10, allow_nan=False)


def kron_all(ops):
    out = np.ones((1, 1))
    for op in ops:
        out = np.kron(out, op)
    return out


def test_as_state_rejects_bad_input():
    with pytest.raises(ValueError):
        as_state([1, 1])
    with pytest.raises(ValueError):
        as_state([1, 0, 0])
    assert np.allclose(as_state([0, 1]), [0, 1])


def test_as_unitary_rejects_non_unitary():
    with pytest.raises(ValueError):
        as_unitary(np.array([[1, 1], [0, 1]]))
    with pytest.raises(ValueError):
        as_unitary(np.eye(3))


def test_named_ops_are_unitary():
    for name, op in NAMED_OPS.items():
        assert np.allclose(op.conj().T @ op, np.eye(2)), name


def test_tensor_apply_matches_kron(rng):
    for n in range(1, 6):
        psi = random_state(rng, n)
        ops = [random_unitary(rng) for _ in range(n)]
        assert np.allclose(tensor_apply(ops, psi), kron_all(ops) @ psi, atol=1e-12)


def test_apply_local_targets_msb_player():
    psi = np.zeros(4, dtype=complex)
    psi[0] = 1
    # player 0 is the most significant bit
    assert np.allclose(apply_local(SIGMA_X, psi, 0), [0, 0, 1, 0])
    assert np.allclose(apply_local(SIGMA_X, psi, 1), [0, 1, 0, 0])


def test_inner_is_conjugate_linear():
    a = np.array([1j, 0])
    b = np.array([1, 0])
    assert inner(a, b) == -1j


@given(angles, angles, angles)
@settings(max_examples=200, deadline=None)
def test_su2_from_angles_is_special_unitary(t, p, l):
    u = su2_from_angles(t, p, l)
    assert np.allclose(u.conj().T @ u, np.eye(2), atol=1e-12)
    assert abs(np.linalg.det(u) - 1) < 1e-12


def test_su2_special_values():
    assert np.allclose(su2_from_angles(0, 0, 0), IDENTITY)
    assert np.allclose(su2_from_angles(-np.pi, 0, 0), 1j * SIGMA_Y)


def test_su2_derivatives_match_finite_differences(rng):
    h = 1e-6
    for _ in range(50):
        x = rng.uniform(-np.pi, np.pi, 3)
        for i, d in enumerate(su2_derivatives(*x)):
            e = np.zeros(3)
            e[i] = h
            fd = (su2_from_angles(*(x + e)) - su2_from_angles(*(x - e))) / (2 * h)
            assert np.allclose(d, fd, atol=1e-8)


def test_eig2_reconstructs_random_unitaries(rng):
    for _ in range(1000):
        u = random_unitary(rng)
        (p1, p2), z = eig2(u)
        assert -np.pi < p2 <= p1 <= np.pi
        assert np.allclose(z @ z.conj().T, np.eye(2), atol=1e-10)
        assert np.allclose(z @ u @ z.conj().T, np.diag(np.exp(1j * np.array([p1, p2]))), atol=1e-9)


def test_eig2_degenerate_and_iz():
    phases, z = eig2(1j * IDENTITY)
    assert np.allclose(z, IDENTITY)
    assert np.allclose(phases, (np.pi / 2, np.pi / 2))
    phases, z = eig2(1j * SIGMA_Y)
    assert np.allclose(phases, (np.pi / 2, -np.pi / 2))
    assert np.allclose(z @ (1j * SIGMA_Y) @ z.conj().T, 1j * SIGMA_Z)


def test_eig2_phase_range_half_open():
    phases, _ = eig2(-IDENTITY)
    assert phases == (np.pi, np.pi)


def test_eig2_rejects_non_unitary():
    with pytest.raises(ValueError):
        eig2(2 * IDENTITY)


def test_det_normalize():
    v = det_normalize(HADAMARD)
    assert abs(np.linalg.det(v) - 1) < 1e-12
    assert abs(np.trace(v)) < 1e-12
