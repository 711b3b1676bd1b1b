"""Dense complex linear algebra for N-qubit state vectors and 2x2 operators.

States are 1-D complex arrays of length ``2**n``. Basis index ``k`` written
in binary has player 1 as the most significant bit; bit value 0 is the
player's first strategy (basis ``|0>``). Operators are ``(2, 2)`` complex
arrays.
"""
from __future__ import annotations

import numpy as np

UNITARY_TOL = 1e-12
NORM_TOL = 1e-12

IDENTITY = np.eye(2, dtype=complex)
SIGMA_X = np.array([[0, 1], [1, 0]], dtype=complex)
SIGMA_Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
SIGMA_Z = np.array([[1, 0], [0, -1]], dtype=complex)
HADAMARD = (SIGMA_X + SIGMA_Z) / np.sqrt(2)

NAMED_OPS = {
    "I": IDENTITY,
    "X": SIGMA_X,
    "Y": SIGMA_Y,
    "Z": SIGMA_Z,
    "iX": 1j * SIGMA_X,
    "iY": 1j * SIGMA_Y,
    "iZ": 1j * SIGMA_Z,
    "H": HADAMARD,
    "S": np.diag([1, 1j]).astype(complex),
}


def n_qubits(state: np.ndarray) -> int:
    dim = state.shape[0]
    n = dim.bit_length() - 1
    if dim < 2 or (1 << n) != dim:
        raise ValueError(f"state length {dim} is not a power of two >= 2")
    return n


def as_state(amps, tol: float = NORM_TOL) -> np.ndarray:
    """Validate and return amplitudes as a normalized complex state vector.

    Raises
    ------
    ValueError
        If the length is not ``2**n``, any amplitude is not finite, or the
        squared norm differs from 1 by more than `tol`.
    """
    psi = np.asarray(amps, dtype=complex).reshape(-1)
    n_qubits(psi)
    if not np.all(np.isfinite(psi)):
        raise ValueError("state contains non-finite amplitudes")
    norm2 = float(np.vdot(psi, psi).real)
    if abs(norm2 - 1.0) > tol:
        raise ValueError(f"state is not normalized (squared norm {norm2!r})")
    return psi


def unitarity_defect(u: np.ndarray) -> float:
    """Spectral norm of ``u^dag u - I``."""
    u = np.asarray(u, dtype=complex)
    return float(np.linalg.norm(u.conj().T @ u - np.eye(u.shape[0]), 2))


def as_unitary(u, tol: float = UNITARY_TOL) -> np.ndarray:
    """Validate and return a 2x2 unitary operator."""
    m = np.asarray(u, dtype=complex)
    if m.shape != (2, 2):
        raise ValueError(f"local operator must be 2x2, got shape {m.shape}")
    if not np.all(np.isfinite(m)):
        raise ValueError("operator contains non-finite entries")
    defect = unitarity_defect(m)
    if defect > tol:
        raise ValueError(f"operator is not unitary (||U^dag U - I|| = {defect:.3e})")
    return m


def apply_local(op: np.ndarray, state: np.ndarray, player: int) -> np.ndarray:
    """Apply a 2x2 operator to one player's qubit (0-based `player`)."""
    n = n_qubits(state)
    t = state.reshape((2,) * n)
    t = np.tensordot(op, t, axes=([1], [player]))
    return np.moveaxis(t, 0, player).reshape(-1)


def tensor_apply(ops, state: np.ndarray) -> np.ndarray:
    """Return ``(ops[0] (x) ops[1] (x) ... ) |state>``.

    The operators are not required to be unitary; callers that need norm
    preservation validate them first.
    """
    state = np.asarray(state, dtype=complex)
    n = n_qubits(state)
    if len(ops) != n:
        raise ValueError(f"expected {n} local operators, got {len(ops)}")
    out = state
    for k, op in enumerate(ops):
        op = np.asarray(op, dtype=complex)
        if op.shape != (2, 2):
            raise ValueError(f"operator {k} has shape {op.shape}, expected (2, 2)")
        out = apply_local(op, out, k)
    return out


def inner(a: np.ndarray, b: np.ndarray) -> complex:
    """``<a|b>``, conjugate-linear in the first argument."""
    a = np.asarray(a, dtype=complex)
    b = np.asarray(b, dtype=complex)
    if a.shape != b.shape:
        raise ValueError(f"dimension mismatch: {a.shape} vs {b.shape}")
    return complex(np.vdot(a, b))


def su2_from_angles(theta: float, phi: float, lam: float) -> np.ndarray:
    """SU(2) element from Euler-type angles (``Rz(phi) Ry(theta) Rz(lam)``).

    Every real triple is accepted; the map covers all of SU(2) for
    ``theta`` in ``[0, 2*pi)`` and ``phi, lam`` in ``[0, 2*pi)``.
    """
    c, s = np.cos(theta / 2), np.sin(theta / 2)
    return np.array([
        [np.exp(-0.5j * (phi + lam)) * c, -np.exp(-0.5j * (phi - lam)) * s],
        [np.exp(0.5j * (phi - lam)) * s, np.exp(0.5j * (phi + lam)) * c],
    ])


def su2_derivatives(theta: float, phi: float, lam: float) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Partial derivatives of :func:`su2_from_angles` w.r.t. each angle."""
    c, s = np.cos(theta / 2), np.sin(theta / 2)
    em, ed = np.exp(-0.5j * (phi + lam)), np.exp(-0.5j * (phi - lam))
    ep, eq = np.exp(0.5j * (phi + lam)), np.exp(0.5j * (phi - lam))
    d_theta = 0.5 * np.array([[-em * s, -ed * c], [eq * c, -ep * s]])
    d_phi = 0.5j * np.array([[-em * c, ed * s], [eq * s, ep * c]])
    d_lam = 0.5j * np.array([[-em * c, -ed * s], [-eq * s, ep * c]])
    return d_theta, d_phi, d_lam


def _wrap_phase(z: complex) -> float:
    ph = float(np.angle(z))
    # keep the range half-open at -pi
    if ph <= -np.pi + 1e-12:
        ph = np.pi
    return ph


def eig2(v, tol: float = 1e-10) -> tuple[tuple[float, float], np.ndarray]:
    """Eigenphases and a unitary diagonalizer of a 2x2 unitary.

    Returns
    -------
    phases : (float, float)
        Eigenphases in ``(-pi, pi]``, larger first.
    z : ndarray
        Unitary with ``z @ v @ z^dag == diag(exp(1j*phases))``. For a
        degenerate spectrum (``v`` proportional to the identity) ``z`` is the
        identity.

    Raises
    ------
    ValueError
        If `v` is not unitary within `tol`.
    """
    v = as_unitary(v, tol=tol)
    lam = np.linalg.eigvals(v)
    phases = sorted((_wrap_phase(x) for x in lam), reverse=True)
    l1, l2 = np.exp(1j * phases[0]), np.exp(1j * phases[1])
    if abs(l1 - l2) < 1e-9:
        return (phases[0], phases[1]), np.eye(2, dtype=complex)
    # columns of (v - l2) span the l1 eigenspace
    m = v - l2 * np.eye(2)
    col = m[:, 0] if np.linalg.norm(m[:, 0]) >= np.linalg.norm(m[:, 1]) else m[:, 1]
    e1 = col / np.linalg.norm(col)
    lead = e1[0] if abs(e1[0]) > 1e-12 else e1[1]
    e1 = e1 * (abs(lead) / lead)
    e2 = np.array([-np.conj(e1[1]), np.conj(e1[0])])
    lead2 = e2[0] if abs(e2[0]) > 1e-12 else e2[1]
    e2 = e2 * (abs(lead2) / lead2)
    z = np.vstack([e1.conj(), e2.conj()])
    return (phases[0], phases[1]), z


def det_normalize(u) -> np.ndarray:
    """Scale a 2x2 unitary by a root of its determinant so that det = 1."""
    u = np.asarray(u, dtype=complex)
    return u / np.sqrt(np.linalg.det(u))
