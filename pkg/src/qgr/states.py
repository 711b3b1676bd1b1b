"""Catalog of entangled resource states and the uniform-magnitude form check."""
from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations
from math import comb
from pathlib import Path

import numpy as np

from qgr.kernel import (
    IDENTITY, SIGMA_Y, SIGMA_Z, as_state, as_unitary, n_qubits, tensor_apply,
)

KINDS = ("ghz", "w", "dicke", "bell", "product", "custom")


@dataclass(frozen=True)
class StateSpec:
    """Description of a catalog state.

    `m` is the number of ones (excitations) for Dicke states; `amps` holds the
    amplitudes of a ``custom`` state.
    """
    kind: str
    n_players: int = 2
    m: int | None = None
    amps: tuple[complex, ...] | None = field(default=None, compare=False)

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"unknown state kind {self.kind!r}")
        if self.n_players < 1:
            raise ValueError("n_players must be positive")
        if self.kind == "dicke":
            if self.m is None or not 0 < self.m < self.n_players:
                raise ValueError(f"dicke state needs 0 < m < N, got m={self.m}, N={self.n_players}")
        if self.kind in ("ghz", "w") and self.n_players < 2:
            raise ValueError(f"{self.kind} state needs at least 2 players")
        if self.kind == "bell" and self.n_players != 2:
            raise ValueError("bell state is a 2-player state")
        if self.kind == "custom":
            if self.amps is None:
                raise ValueError("custom state needs amplitudes")
            if len(self.amps) != 2 ** self.n_players:
                raise ValueError("custom amplitude count does not match 2**n_players")

    @property
    def excitations(self) -> int | None:
        """Excitation count for Dicke-class states (W counts as m=1)."""
        if self.kind == "dicke":
            return self.m
        if self.kind == "w":
            return 1
        return None

    def label(self) -> str:
        if self.kind == "dicke":
            return f"dicke:{self.n_players}:{self.m}"
        if self.kind == "bell":
            return "bell"
        if self.kind == "custom":
            return f"custom:{self.n_players}"
        return f"{self.kind}:{self.n_players}"


def ghz(n: int) -> np.ndarray:
    psi = np.zeros(2 ** n, dtype=complex)
    psi[0] = 1
    psi[-1] = 1j
    return psi / np.sqrt(2)


def dicke(n: int, m: int) -> np.ndarray:
    """Equal superposition of the ``C(n, m)`` basis states with `m` ones."""
    psi = np.zeros(2 ** n, dtype=complex)
    for ones in combinations(range(n), m):
        psi[sum(1 << (n - 1 - p) for p in ones)] = 1
    return psi / np.sqrt(comb(n, m))


def make_state(spec: StateSpec) -> np.ndarray:
    n = spec.n_players
    if spec.kind == "ghz":
        return ghz(n)
    if spec.kind == "w":
        return dicke(n, 1)
    if spec.kind == "dicke":
        return dicke(n, spec.m)
    if spec.kind == "bell":
        return np.array([1, 0, 0, 1], dtype=complex) / np.sqrt(2)
    if spec.kind == "product":
        psi = np.zeros(2 ** n, dtype=complex)
        psi[0] = 1
        return psi
    return as_state(spec.amps)


def read_amplitudes(path) -> tuple[complex, ...]:
    """Read ``re im`` pairs, one per line (``#`` starts a comment)."""
    amps = []
    for lineno, line in enumerate(Path(path).read_text().splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        if len(parts) != 2:
            raise ValueError(f"{path}:{lineno}: expected 're im', got {line!r}")
        amps.append(complex(float(parts[0]), float(parts[1])))
    return tuple(amps)


def parse_state_spec(text: str) -> StateSpec:
    """Parse ``ghz:N``, ``w:N``, ``dicke:N:m``, ``bell``, ``product:N`` or
    ``custom:@file``."""
    parts = text.strip().split(":")
    kind = parts[0].lower()
    try:
        if kind == "bell" and len(parts) == 1:
            return StateSpec("bell", 2)
        if kind in ("ghz", "w", "product") and len(parts) == 2:
            return StateSpec(kind, int(parts[1]))
        if kind == "dicke" and len(parts) == 3:
            return StateSpec("dicke", int(parts[1]), int(parts[2]))
        if kind == "custom" and len(parts) == 2 and parts[1].startswith("@"):
            amps = read_amplitudes(parts[1][1:])
            n = n_qubits(np.asarray(amps))
            return StateSpec("custom", n, amps=amps)
    except (TypeError, ValueError) as exc:
        raise ValueError(f"bad state spec {text!r}: {exc}") from exc
    raise ValueError(f"bad state spec {text!r}")


@dataclass(frozen=True)
class CanonicalReport:
    uniform: bool
    max_dev: float
    transformed: np.ndarray = field(repr=False)
    tolerance: float = 1e-10


def verify_uniform_form(state, locals_, tol: float = 1e-10) -> CanonicalReport:
    """Apply local unitaries and check that every ``|c|^2`` equals ``2**-N``.

    Existence of suitable locals is not decided here; the candidate locals
    are an input.
    """
    psi = np.asarray(state, dtype=complex)
    n = n_qubits(psi)
    ops = [as_unitary(u) for u in locals_]
    out = tensor_apply(ops, psi)
    dev = float(np.max(np.abs(np.abs(out) ** 2 - 2.0 ** -n)))
    return CanonicalReport(uniform=dev <= tol, max_dev=dev, transformed=out, tolerance=tol)


def ghz_uniformizer_matrix() -> np.ndarray:
    """``(e^{i pi/4} I + e^{-i pi/4} Z + Y) / sqrt(2)`` exactly as written.

    This matrix is *not* unitary (``U^dag U`` has diagonal 3/2), so it is
    returned raw; wrapping it with :func:`qgr.kernel.as_unitary` raises.
    """
    return (np.exp(0.25j * np.pi) * IDENTITY + np.exp(-0.25j * np.pi) * SIGMA_Z + SIGMA_Y) / np.sqrt(2)


def ghz_phase_local() -> np.ndarray:
    """Diagonal part of :func:`ghz_uniformizer_matrix`, ``diag(1, i)``.

    Together with Hadamards on the other players it maps the GHZ state onto
    the uniform-magnitude form.
    """
    return (np.exp(0.25j * np.pi) * IDENTITY + np.exp(-0.25j * np.pi) * SIGMA_Z) / np.sqrt(2)
