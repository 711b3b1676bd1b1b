"""The quantization protocol: output states for every joint pure strategy,
the referee's projective measurement, and quantum expected payoffs."""
from __future__ import annotations

import re
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from qgr.games import GameN, Partition, classical_mixed_payoff, outcome_probabilities, profile_bits
from qgr.kernel import NAMED_OPS, as_state, as_unitary, n_qubits, su2_from_angles, tensor_apply

ORTHO_TOL = 1e-8
RANK_TOL = 1e-10


class PreconditionError(ValueError):
    """An input violates a documented precondition (carries the evidence)."""

    def __init__(self, message, *, overlap=None, pair=None):
        super().__init__(message)
        self.overlap = overlap
        self.pair = pair


class IntegrityError(RuntimeError):
    """Probability mass left on the discard projector."""


def make_assignment(pairs) -> list[tuple[np.ndarray, np.ndarray]]:
    """Validate ``[(u1, u2), ...]``, one pair of strategy unitaries per player."""
    out = []
    for i, pair in enumerate(pairs):
        if len(pair) != 2:
            raise ValueError(f"player {i + 1}: need exactly two strategy operators")
        try:
            out.append((as_unitary(pair[0]), as_unitary(pair[1])))
        except ValueError as exc:
            raise ValueError(f"player {i + 1}: {exc}") from exc
    return out


def apply_on_qubit(op, rows, player: int, n: int) -> np.ndarray:
    """Apply a 2x2 operator to qubit `player` of every row of `rows`."""
    m = rows.shape[0]
    t = rows.reshape(m, 2 ** player, 2, 2 ** (n - player - 1))
    return np.einsum("ij,majb->maib", op, t).reshape(m, 2 ** n)


def branch_states(state, ops_per_player) -> np.ndarray:
    """Rows are ``(o_1^{l_1} (x) ... (x) o_N^{l_N}) |state>`` for every bit
    pattern, in outcome order. ``ops_per_player[i]`` is a pair of 2x2 arrays
    (entries may be ``None`` for a zero branch)."""
    psi = np.asarray(state, dtype=complex)
    n = n_qubits(psi)
    rows = psi.reshape(1, -1)
    for i, (a, b) in enumerate(ops_per_player):
        branches = [np.zeros_like(rows) if op is None else apply_on_qubit(op, rows, i, n)
                    for op in (a, b)]
        rows = np.stack(branches, axis=1).reshape(-1, 2 ** n)
    return rows


def output_states(state, assignment) -> np.ndarray:
    """All ``2**N`` output states ``x_k |Psi>``; row ``k-1`` is outcome ``k``."""
    psi = np.asarray(state, dtype=complex)
    n = n_qubits(psi)
    if len(assignment) != n:
        raise ValueError(f"expected {n} operator pairs, got {len(assignment)}")
    return branch_states(psi, make_assignment(assignment))


@dataclass(frozen=True)
class Measurement:
    """Projective measurement stored as orthonormal bases.

    ``bases[j]`` has orthonormal columns spanning projector ``j``;
    ``labels[j]`` is the tuple of outcome indices (a payoff class) that the
    projector reports, or ``None`` for the discard projector.
    """
    bases: tuple = field(repr=False)
    labels: tuple

    @property
    def dim(self) -> int:
        return self.bases[0].shape[0]

    @property
    def projectors(self) -> list[np.ndarray]:
        return [q @ q.conj().T for q in self.bases]

    def probabilities(self, phi) -> np.ndarray:
        phi = np.asarray(phi, dtype=complex)
        return np.array([float(np.sum(np.abs(q.conj().T @ phi) ** 2)) for q in self.bases])

    @property
    def complete(self) -> bool:
        return sum(q.shape[1] for q in self.bases) == self.dim


def _gram(outputs):
    outputs = np.asarray(outputs, dtype=complex)
    return outputs.conj() @ outputs.T


def _completed(bases, labels, dim):
    rank = sum(q.shape[1] for q in bases)
    if rank < dim:
        span = np.hstack(bases) if bases else np.zeros((dim, 0), dtype=complex)
        u, _, _ = np.linalg.svd(span, full_matrices=True)
        bases = list(bases) + [u[:, rank:]]
        labels = list(labels) + [None]
    return Measurement(tuple(bases), tuple(labels))


def build_measurement_scr(outputs, tol: float = ORTHO_TOL) -> Measurement:
    """Rank-1 projectors onto each output state (requires orthonormality)."""
    outputs = np.asarray(outputs, dtype=complex)
    g = _gram(outputs)
    dev = np.abs(g - np.eye(len(outputs)))
    a, b = np.unravel_index(np.argmax(dev), dev.shape)
    worst = float(dev[a, b])
    if worst > tol:
        pair = (int(min(a, b)) + 1, int(max(a, b)) + 1)
        raise PreconditionError(
            f"output states are not orthonormal: |<Phi_{pair[0]}|Phi_{pair[1]}>| "
            f"deviates by {worst:.3e}", overlap=worst, pair=pair)
    bases = [row.reshape(-1, 1) for row in outputs]
    return _completed(bases, [(k,) for k in range(1, len(outputs) + 1)], outputs.shape[1])


def build_measurement_wcr(outputs, partition: Partition, tol: float = ORTHO_TOL,
                          rank_tol: float = RANK_TOL) -> Measurement:
    """One subspace projector per partition set.

    Each set's states are orthonormalized via SVD, keeping singular values
    above `rank_tol`; linearly dependent states simply lower the rank.
    """
    outputs = np.asarray(outputs, dtype=complex)
    if partition.n_outcomes != len(outputs):
        raise ValueError("partition size does not match the number of outputs")
    g = np.abs(_gram(outputs))
    lab = partition.labels()
    cross = lab[:, None] != lab[None, :]
    masked = np.where(cross, g, 0.0)
    a, b = np.unravel_index(np.argmax(masked), masked.shape)
    if masked[a, b] > tol:
        pair = (int(min(a, b)) + 1, int(max(a, b)) + 1)
        raise PreconditionError(
            f"outputs {pair[0]} and {pair[1]} lie in different sets but overlap "
            f"by {masked[a, b]:.3e}", overlap=float(masked[a, b]), pair=pair)
    bases = []
    for s in partition.sets:
        block = outputs[np.asarray(s) - 1].T
        u, sv, _ = np.linalg.svd(block, full_matrices=False)
        bases.append(u[:, sv > rank_tol])
    return _completed(bases, list(partition.sets), outputs.shape[1])


def quantum_payoff(game: GameN, measurement: Measurement, state, ops,
                   leak_tol: float = 1e-8) -> np.ndarray:
    """Expected payoff vector ``f_i = sum_j a_j^i Tr[P_j x|Psi><Psi|x^dag]``."""
    for lab in measurement.labels:
        if lab is None:
            continue
        ref = game.vector(lab[0])
        if any(not np.array_equal(game.vector(k), ref) for k in lab[1:]):
            raise ValueError(f"measurement class {lab} mixes different payoff vectors")
    phi = tensor_apply(ops, np.asarray(state, dtype=complex))
    probs = measurement.probabilities(phi)
    total = 0.0
    f = np.zeros(game.n_players)
    for p, lab in zip(probs, measurement.labels):
        if lab is None:
            if p > leak_tol:
                raise IntegrityError(f"probability {p:.3e} on the discard projector")
            continue
        f += p * game.vector(lab[0])
        total += p
    if measurement.complete and abs(sum(probs) - 1.0) > leak_tol:
        raise IntegrityError(f"outcome probabilities sum to {sum(probs)!r}")
    return f


def mixed_profile_ops(assignment, thetas) -> list[np.ndarray]:
    """``w_k = u_k^1 cos(theta_k) + u_k^2 sin(theta_k)``; unitarity is not
    enforced here."""
    if len(thetas) != len(assignment):
        raise ValueError("need one angle per player")
    return [np.asarray(u1) * np.cos(t) + np.asarray(u2) * np.sin(t)
            for (u1, u2), t in zip(assignment, thetas)]


def pure_ops(assignment, k: int) -> list[np.ndarray]:
    """Operators played in outcome `k`."""
    bits = profile_bits(k, len(assignment))
    return [pair[b] for pair, b in zip(assignment, bits)]


def reproduce_mixed_check(state, assignment, game: GameN, thetas,
                          mode: str = "operators", tol: float = 1e-10) -> float:
    """Largest per-player gap between the quantum payoff for angle profile
    `thetas` and the classical mixed payoff with ``q_i = cos(theta_i)**2``.

    mode="operators" plays ``w_k`` directly; mode="mixing" randomizes over
    the pure operators with the same probabilities.
    """
    psi = as_state(state)
    outs = output_states(psi, assignment)
    try:
        meas = build_measurement_scr(outs, tol=tol)
    except PreconditionError as exc:
        raise PreconditionError(f"assignment fails the strong criterion: {exc}",
                                overlap=exc.overlap, pair=exc.pair) from exc
    q = np.cos(np.asarray(thetas, dtype=float)) ** 2
    classical = classical_mixed_payoff(game, q)
    if mode == "operators":
        quantum = quantum_payoff(game, meas, psi, mixed_profile_ops(assignment, thetas))
    elif mode == "mixing":
        dist = outcome_probabilities(q)
        quantum = np.zeros(game.n_players)
        for k, p in enumerate(dist, 1):
            if p > 0:
                quantum += p * quantum_payoff(game, meas, psi, pure_ops(assignment, k))
    else:
        raise ValueError(f"unknown mode {mode!r}")
    return float(np.max(np.abs(quantum - classical)))


_TOKEN = re.compile(r"su2:[^,;\s]+,[^,;\s]+,[^,;\s]+|mat:@[^,;\s]+|[A-Za-z]+")


def parse_op(token: str, base_dir=None) -> np.ndarray:
    """Named operator, ``su2:theta,phi,lam`` or ``mat:@file``.

    Relative ``mat:`` paths are resolved against `base_dir` when given.
    """
    token = token.strip()
    if token in NAMED_OPS:
        return NAMED_OPS[token].copy()
    if token.startswith("su2:"):
        vals = [float(x) for x in token[4:].split(",")]
        if len(vals) != 3:
            raise ValueError(f"su2 operator needs three angles: {token!r}")
        return su2_from_angles(*vals)
    if token.startswith("mat:@"):
        path = Path(token[5:])
        if base_dir is not None and not path.is_absolute():
            path = Path(base_dir) / path
        return read_matrix(path)
    raise ValueError(f"unknown operator {token!r}; named operators are {', '.join(NAMED_OPS)}")


def read_matrix(path) -> np.ndarray:
    """2x2 complex matrix from text: four ``re im`` pairs, row-major, one
    pair per line."""
    vals = []
    for line in Path(path).read_text().splitlines():
        line = line.split("#", 1)[0].strip()
        if line:
            re_, im = line.split()
            vals.append(complex(float(re_), float(im)))
    if len(vals) != 4:
        raise ValueError(f"{path}: expected 4 complex entries, got {len(vals)}")
    return np.array(vals).reshape(2, 2)


def parse_ops_spec(text: str, n: int) -> list[tuple[np.ndarray, np.ndarray]]:
    """``"u1,u2"`` for every player, or ``"u1,u2; u1,u2; ..."`` per player."""
    groups = [g for g in text.split(";") if g.strip()]
    pairs = []
    for g in groups:
        toks = _TOKEN.findall(g)
        if len(toks) != 2:
            raise ValueError(f"operator pair {g.strip()!r} must name exactly two operators")
        pairs.append((parse_op(toks[0]), parse_op(toks[1])))
    if len(pairs) == 1:
        pairs = pairs * n
    if len(pairs) != n:
        raise ValueError(f"got {len(pairs)} operator pairs for {n} players")
    return make_assignment(pairs)


def read_ops_file(path) -> list[tuple[np.ndarray, np.ndarray]]:
    """One line per player with two whitespace-separated operator specs."""
    path = Path(path)
    pairs = []
    for lineno, line in enumerate(path.read_text().splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        toks = line.split()
        if len(toks) != 2:
            raise ValueError(f"{path}:{lineno}: expected two operator specs")
        pairs.append((parse_op(toks[0], path.parent), parse_op(toks[1], path.parent)))
    return make_assignment(pairs)
