"""Numerical feasibility oracle for the orthogonality constraints.

Output-state overlaps only depend on ``v_k = (u_k^1)^dag u_k^2``, so the
search runs over one SU(2) element per player (``3N`` angles) with the gauge
``u_k^1 = I``. Each restart is a Levenberg-Marquardt descent on the real and
imaginary parts of the required overlaps.
"""
from __future__ import annotations

import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import least_squares

from qgr.games import Partition, cross_pairs
from qgr.kernel import IDENTITY, n_qubits, su2_derivatives, su2_from_angles
from qgr.referee import apply_on_qubit, branch_states

WITNESS_THRESHOLD = 1e-9
INFEASIBLE_THRESHOLD = 1e-6
TIE_RTOL = 1e-10


@dataclass(frozen=True)
class ConstraintSet:
    """Unordered outcome pairs (1-based, ``a < b``) whose outputs must be
    orthogonal."""
    pairs: tuple
    n_players: int

    def __post_init__(self):
        clean = sorted({(min(a, b), max(a, b)) for a, b in self.pairs})
        if any(a == b for a, b in clean):
            raise ValueError("constraint pairs need distinct outcomes")
        top = 2 ** self.n_players
        if any(a < 1 or b > top for a, b in clean):
            raise ValueError("constraint pair out of range")
        object.__setattr__(self, "pairs", tuple(clean))

    def __len__(self):
        return len(self.pairs)

    def index_arrays(self):
        p = np.asarray(self.pairs, dtype=int).reshape(-1, 2) - 1
        return p[:, 0], p[:, 1]


def required_pairs(partition: Partition) -> ConstraintSet:
    """Every pair of outcomes in different sets (all pairs for singletons)."""
    return ConstraintSet(tuple(cross_pairs(partition)), partition.n_players)


def scr_constraints(n: int) -> ConstraintSet:
    return required_pairs(Partition.singletons(n))


def overlaps(state, vs, constraints: ConstraintSet) -> np.ndarray:
    """Complex overlaps ``<Phi_a|Phi_b>`` for the constrained pairs with
    strategy pairs ``(I, v_k)``."""
    if not len(constraints):
        return np.zeros(0, dtype=complex)
    phi = branch_states(state, [(IDENTITY, v) for v in vs])
    a, b = constraints.index_arrays()
    return (phi.conj() @ phi.T)[a, b]


def residual(state, vs, constraints: ConstraintSet) -> float:
    """Sum of squared magnitudes of the required overlaps."""
    return float(np.sum(np.abs(overlaps(state, vs, constraints)) ** 2))


@dataclass(frozen=True)
class SearchConfig:
    restarts: int = 100
    max_iters: int = 500
    threshold: float = WITNESS_THRESHOLD
    rng_seed: int = 0
    infeasible_threshold: float = INFEASIBLE_THRESHOLD
    workers: int | None = None


@dataclass(frozen=True)
class SearchResult:
    best_residual: float
    witness: tuple = field(repr=False)
    restarts_used: int
    converged: bool
    best_restart: int
    threshold: float
    infeasible_threshold: float

    @property
    def infeasible_evidence(self) -> bool:
        """No witness and best residual at or above the infeasibility bar."""
        return not self.converged and self.best_residual >= self.infeasible_threshold

    def summary(self) -> str:
        if self.converged:
            return (f"witness found (residual {self.best_residual:.3e}, "
                    f"restart {self.best_restart + 1} of {self.restarts_used})")
        return (f"no witness found (best residual {self.best_residual:.12g} "
                f"after {self.restarts_used} restarts)")

    def to_dict(self) -> dict:
        return {
            "best_residual": self.best_residual,
            "converged": self.converged,
            "restarts_used": self.restarts_used,
            "best_restart": self.best_restart,
            "witness": [[[[float(z.real), float(z.imag)] for z in row] for row in v]
                        for v in self.witness] if self.converged else None,
        }


def _angles_to_ops(x, n):
    return [su2_from_angles(*x[3 * k:3 * k + 3]) for k in range(n)]


class _Problem:
    def __init__(self, state, constraints):
        self.psi = np.asarray(state, dtype=complex)
        self.n = n_qubits(self.psi)
        self.a, self.b = constraints.index_arrays()
        outcomes = np.arange(2 ** self.n)
        self.bit_rows = [((outcomes >> (self.n - 1 - k)) & 1).astype(bool) for k in range(self.n)]
        self._cache = (None, None)

    def _phi(self, x):
        # least_squares evaluates fun and jac at the same point
        key = x.tobytes()
        if self._cache[0] != key:
            phi = branch_states(self.psi, [(IDENTITY, v) for v in _angles_to_ops(x, self.n)])
            self._cache = (key, phi)
        return self._cache[1]

    def fun(self, x):
        phi = self._phi(x)
        g = (phi.conj() @ phi.T)[self.a, self.b]
        return np.concatenate([g.real, g.imag])

    def jac(self, x):
        # dv = (dv v^dag) v, so each derivative acts on the existing rows
        n = self.n
        phi = self._phi(x)
        d = np.zeros((3 * n,) + phi.shape, dtype=complex)
        for k in range(n):
            angles = x[3 * k:3 * k + 3]
            vh = su2_from_angles(*angles).conj().T
            rows = self.bit_rows[k]
            sub = phi[rows]
            for j, dv in enumerate(su2_derivatives(*angles)):
                d[3 * k + j, rows] = apply_on_qubit(dv @ vh, sub, k, n)
        dg = d.conj() @ phi.T
        dg = (dg + dg.conj().transpose(0, 2, 1))[:, self.a, self.b]
        return np.concatenate([dg.real, dg.imag], axis=1).T


def _run_restart(args):
    state, constraints, seed_seq, max_iters = args
    prob = _Problem(state, constraints)
    rng = np.random.default_rng(seed_seq)
    x0 = rng.uniform(0.0, 2 * np.pi, size=3 * prob.n)
    m = 2 * len(constraints)
    method = "lm" if m >= x0.size else "trf"
    sol = least_squares(prob.fun, x0, jac=prob.jac, method=method,
                        max_nfev=max_iters, xtol=1e-15, ftol=1e-15, gtol=1e-15)
    vs = _angles_to_ops(sol.x, prob.n)
    return residual(state, vs, constraints), vs


def _default_workers() -> int:
    try:
        return max(1, int(os.environ.get("QGR_THREADS", "1")))
    except ValueError:
        return 1


def feasibility_search(state, constraints: ConstraintSet,
                       config: SearchConfig | None = None) -> SearchResult:
    """Multi-start local minimization of :func:`residual` over products of
    SU(2).

    Restarts run in index order (in batches when ``workers > 1``); the search
    stops at the first restart whose residual drops below the threshold.
    Results are identical for any worker count.
    """
    cfg = config or SearchConfig()
    psi = np.asarray(state, dtype=complex)
    n = n_qubits(psi)
    if constraints.n_players != n:
        raise ValueError("constraint set does not match the state size")
    if not len(constraints):
        witness = tuple(IDENTITY.copy() for _ in range(n))
        return SearchResult(0.0, witness, 0, True, 0, cfg.threshold, cfg.infeasible_threshold)

    seeds = np.random.SeedSequence(cfg.rng_seed).spawn(cfg.restarts)
    workers = cfg.workers or _default_workers()
    best_r, best_vs, best_i = np.inf, None, -1
    used = 0
    pool = ProcessPoolExecutor(max_workers=workers) if workers > 1 else None
    try:
        for start in range(0, cfg.restarts, workers):
            idx = range(start, min(start + workers, cfg.restarts))
            jobs = [(psi, constraints, seeds[i], cfg.max_iters) for i in idx]
            results = list(pool.map(_run_restart, jobs)) if pool else [_run_restart(j) for j in jobs]
            for i, (r, vs) in zip(idx, results):
                used = i + 1
                # ties up to rounding noise keep the earlier restart
                if best_vs is None or r < best_r * (1 - TIE_RTOL):
                    best_r, best_vs, best_i = r, vs, i
                if r < cfg.threshold:
                    break
            if best_r < cfg.threshold:
                break
    finally:
        if pool is not None:
            pool.shutdown()
    return SearchResult(best_r, tuple(best_vs), used, best_r < cfg.threshold, best_i,
                        cfg.threshold, cfg.infeasible_threshold)
