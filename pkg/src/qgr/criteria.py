"""Strong/weak reproducibility verdicts.

Numerical orthogonality checks over the output states, the per-player
operator structure analysis, the uniform-magnitude state structure check,
and a symbolic rule engine that certifies contradictions for Dicke-class
resource states.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations

import numpy as np

from qgr.games import Partition, cross_pairs, differing_players
from qgr.kernel import apply_local, det_normalize, eig2, n_qubits
from qgr.referee import PreconditionError, make_assignment, mixed_profile_ops, output_states
from qgr.states import StateSpec

ORTHO_TOL = 1e-10
CONTRADICTION = "Contradiction"
NO_RULE = "NoRuleFired"


@dataclass(frozen=True)
class CheckReport:
    """Outcome of an orthogonality-type check.

    `worst_pair` holds the offending outcome pair (1-based). For
    :func:`state_structure_check` it holds the player subset of the worst
    Z-string expectation instead.
    """
    criterion: str
    passed: bool
    max_violation: float
    worst_pair: tuple | None
    tolerance: float
    details: dict = field(default_factory=dict, repr=False, compare=False)

    def to_dict(self) -> dict:
        return {
            "criterion": self.criterion,
            "passed": self.passed,
            "max_violation": self.max_violation,
            "worst_pair": list(self.worst_pair) if self.worst_pair else None,
            "tolerance": self.tolerance,
        }


def _overlap_report(criterion, state, assignment, mask, tol):
    outs = output_states(state, assignment)
    g = np.abs(outs.conj() @ outs.T)
    g = np.where(mask, g, -1.0)
    if not mask.any():
        return CheckReport(criterion, True, 0.0, None, tol)
    a, b = np.unravel_index(np.argmax(g), g.shape)
    worst = float(g[a, b])
    return CheckReport(criterion, worst <= tol, worst, (int(a) + 1, int(b) + 1), tol)


def scr_check(state, assignment, tol: float = ORTHO_TOL) -> CheckReport:
    """All ``C(2**N, 2)`` output-state overlaps must vanish."""
    dim = len(state)
    mask = np.triu(np.ones((dim, dim), dtype=bool), k=1)
    return _overlap_report("scr", state, assignment, mask, tol)


def wcr_check(state, assignment, partition: Partition, tol: float = ORTHO_TOL) -> CheckReport:
    """Only overlaps between outputs in different partition sets must vanish."""
    if partition.n_outcomes != len(state):
        raise ValueError("partition does not cover the outcomes of this state")
    lab = partition.labels()
    mask = np.triu(lab[:, None] != lab[None, :], k=1)
    return _overlap_report("wcr", state, assignment, mask, tol)


@dataclass(frozen=True)
class PlayerStructure:
    v: np.ndarray = field(repr=False)
    eigenphases: tuple[float, float]
    traceless: bool
    iz_form: bool
    diagonalizer: np.ndarray = field(repr=False)
    marginal_balance: float


@dataclass(frozen=True)
class StructureReport:
    players: tuple

    @property
    def all_iz_form(self) -> bool:
        return all(p.iz_form for p in self.players)

    @property
    def diagonalizers(self) -> list[np.ndarray]:
        return [p.diagonalizer for p in self.players]


def operator_structure(state, assignment, tol: float = 1e-10) -> StructureReport:
    """Per-player analysis of ``v_k = (u_k^1)^dag u_k^2``.

    `v_k` is scaled to determinant 1 first (strategy operators may carry a
    global phase). `marginal_balance` is ``2 P(bit k = 0) - 1`` in the state
    with only player k's diagonalizer applied; it must vanish for a
    single-player-difference pair to be orthogonal.
    """
    psi = np.asarray(state, dtype=complex)
    n = n_qubits(psi)
    pairs = make_assignment(assignment)
    if len(pairs) != n:
        raise ValueError(f"expected {n} operator pairs, got {len(pairs)}")
    players = []
    for k, (u1, u2) in enumerate(pairs):
        v = det_normalize(u1.conj().T @ u2)
        phases, z = eig2(v)
        traceless = abs(np.trace(v)) <= tol
        iz = abs(phases[0] - np.pi / 2) <= tol and abs(phases[1] + np.pi / 2) <= tol
        rotated = apply_local(z, psi, k).reshape((2,) * n)
        p0 = float(np.sum(np.abs(np.take(rotated, 0, axis=k)) ** 2))
        players.append(PlayerStructure(v, phases, bool(traceless), bool(iz), z, 2 * p0 - 1))
    return StructureReport(tuple(players))


def z_string_expectations(state) -> np.ndarray:
    """``<sigma_z^{s_1} (x) ... (x) sigma_z^{s_N}>`` for every bit mask ``s``.

    Entry ``s`` (same bit convention as basis indices) is the expectation for
    the subset of players whose bits are set; entry 0 is the norm.
    """
    psi = np.asarray(state, dtype=complex)
    n = n_qubits(psi)
    t = (np.abs(psi) ** 2).reshape((2,) * n)
    wh = np.array([[1.0, 1.0], [1.0, -1.0]])
    for ax in range(n):
        t = np.moveaxis(np.tensordot(wh, t, axes=([1], [ax])), 0, ax)
    return t.reshape(-1)


def state_structure_check(state, assignment, tol: float = ORTHO_TOL) -> CheckReport:
    """Rotate each qubit by its diagonalizer and require every nonempty
    Z-string expectation to vanish (equivalently every ``|c'|^2 = 2**-N``).

    Raises
    ------
    PreconditionError
        If some player's ``v_k`` is not of the ``i sigma_z`` form.
    """
    psi = np.asarray(state, dtype=complex)
    n = n_qubits(psi)
    structure = operator_structure(psi, assignment)
    bad = [k + 1 for k, p in enumerate(structure.players) if not p.iz_form]
    if bad:
        raise PreconditionError(f"players {bad} do not have i*sigma_z eigenstructure")
    rotated = psi
    for k, z in enumerate(structure.diagonalizers):
        rotated = apply_local(z, rotated, k)
    ev = z_string_expectations(rotated)
    tail = np.abs(ev[1:])
    s = int(np.argmax(tail)) + 1
    worst = float(tail[s - 1])
    subset = tuple(i + 1 for i in range(n) if (s >> (n - 1 - i)) & 1)
    details = {
        "expectations": ev,
        "transformed": rotated,
        "max_magnitude_dev": float(np.max(np.abs(np.abs(rotated) ** 2 - 2.0 ** -n))),
    }
    return CheckReport("state_structure", worst <= tol, worst, subset, tol, details)


def wk_unitarity_check(assignment, thetas) -> float:
    """``max_k || w_k^dag w_k - I ||`` (spectral norm) for the mixed operators."""
    ws = mixed_profile_ops(make_assignment(assignment), thetas)
    return max(float(np.linalg.norm(w.conj().T @ w - np.eye(2), 2)) for w in ws)


# -- symbolic rule engine ----------------------------------------------------

@dataclass(frozen=True)
class Verdict:
    kind: str
    certificate: dict

    @property
    def contradiction(self) -> bool:
        return self.kind == CONTRADICTION

    @property
    def rules(self) -> list[str]:
        return [r["rule"] for r in self.certificate.get("rules", [])]

    def to_dict(self) -> dict:
        return {"kind": self.kind, "certificate": self.certificate}


# states that satisfy the strong criterion, hence can never contradict
_EXEMPT = {(2, 1), (4, 2)}


def _dicke_params(spec: StateSpec) -> tuple[int, int]:
    if spec.kind not in ("w", "dicke"):
        raise ValueError(f"symbolic rules cover Dicke-class states only, got {spec.kind!r}")
    return spec.n_players, spec.excitations


def _graph_triangles(nodes, edges):
    return [list(t) for t in combinations(sorted(nodes), 3)
            if all(tuple(sorted(e)) in edges for e in combinations(t, 2))]


def _shortest_odd_cycle(nodes, edges):
    adj = {v: set() for v in nodes}
    for a, b in edges:
        adj[a].add(b)
        adj[b].add(a)
    best = None
    for root in sorted(nodes):
        dist, parent = {root: 0}, {root: None}
        queue = [root]
        for u in queue:
            for w in sorted(adj[u]):
                if w not in dist:
                    dist[w] = dist[u] + 1
                    parent[w] = u
                    queue.append(w)
        for a, b in sorted(edges):
            if a in dist and b in dist and dist[a] == dist[b]:
                pa, pb = [a], [b]
                while parent[pa[-1]] is not None:
                    pa.append(parent[pa[-1]])
                while parent[pb[-1]] is not None:
                    pb.append(parent[pb[-1]])
                cycle = pa[::-1] + pb[:-1]
                if len(set(cycle)) == len(cycle) and (best is None or len(cycle) < len(best)):
                    best = cycle
    return best


def _pairings(quad):
    i, j, k, l = quad
    return [((i, j), (k, l)), ((i, k), (j, l)), ((i, l), (j, k))]


def symbolic_contradiction(spec: StateSpec, partition: Partition) -> Verdict:
    """Apply the contradiction rules for a Dicke-class state and a partition.

    Pipeline:

    1. A player is *forced* when some required-orthogonal pair differs only
       in that player's strategy (this fixes the form of ``v_k``).
    2. Two forced players are joined by an edge when some required pair
       differs exactly in their two strategies (a phase equation).
    3. Unbalanced states (``m != N/2``): the phase equations read
       ``phi_j - phi_k = pi/2 mod pi``; any odd cycle is inconsistent.
       Triangles are listed explicitly.
    4. Balanced states with ``N >= 6``: a required four-player-difference
       pair on forced players whose edges cover at least two of the three
       pairings of those players is inconsistent.
    5. Set-shape filters: an odd-size set in a partition with non-singleton
       sets, or a set made of exactly the two unanimous outcomes.

    Every rule that fires is recorded; ``|1,1>`` and ``|2,2>`` are exempt
    from the set-shape filters. `NoRuleFired` is not a feasibility proof.
    """
    n, m = _dicke_params(spec)
    if partition.n_players != n:
        raise ValueError("partition size does not match the state")
    balanced = 2 * m == n
    exempt = (n, m) in _EXEMPT

    by_diff: dict[tuple, tuple[int, int]] = {}
    for a, b in cross_pairs(partition):
        by_diff.setdefault(differing_players(a, b, n), (a, b))

    forced = {d[0]: by_diff[d] for d in by_diff if len(d) == 1}
    edges = {d: by_diff[d] for d in by_diff
             if len(d) == 2 and d[0] in forced and d[1] in forced}

    rules = []
    notes = []
    if not balanced:
        cycle = _shortest_odd_cycle(forced, set(edges))
        if cycle is not None:
            rules.append({
                "rule": "odd_cycle",
                "cycle": cycle,
                "triangles": _graph_triangles(forced, set(edges)),
            })
    elif n >= 6:
        hits = []
        for quad in combinations(sorted(forced), 4):
            if quad not in by_diff:
                continue
            covered = [[list(p) for p in pairing] for pairing in _pairings(quad)
                       if all(p in edges for p in pairing)]
            if len(covered) >= 2:
                hits.append({"quadruple": list(quad), "pair": list(by_diff[quad]),
                             "pairings": covered})
        if hits:
            rules.append({"rule": "four_player", **hits[0], "count": len(hits)})
        elif forced:
            notes.append("no required four-player-difference pair with two covered pairings")
    else:
        notes.append(f"balanced state with N={n} < 6: four-player rule does not apply")

    sizes = [len(s) for s in partition.sets]
    if not exempt:
        if max(sizes) > 1:
            odd = [list(s) for s in partition.sets if len(s) % 2 == 1]
            if odd:
                rules.append({"rule": "O5", "set": odd[0], "odd_sets": len(odd)})
        unanimous = (1, 2 ** n)
        if unanimous in partition.sets:
            rules.append({"rule": "O6", "set": list(unanimous)})
    else:
        notes.append("state satisfies the strong criterion; set-shape filters exempt")

    if len(forced) == 1:
        notes.append("operator form forced for a single player only")
    if not forced:
        notes.append("no required pair differs in a single player's strategy")

    certificate = {
        "state": spec.label(),
        "n_players": n,
        "excitations": m,
        "balanced": balanced,
        "forced": {str(k): list(v) for k, v in sorted(forced.items())},
        "edges": {f"{a}-{b}": list(v) for (a, b), v in sorted(edges.items())},
        "rules": rules,
        "notes": notes,
    }
    return Verdict(CONTRADICTION if rules else NO_RULE, certificate)


def replay_certificate(verdict: Verdict, partition: Partition) -> bool:
    """Re-derive every claim in a certificate from the partition alone."""
    cert = verdict.certificate
    n = cert["n_players"]
    lab = partition.labels()

    def required(pair, players):
        a, b = pair
        return lab[a - 1] != lab[b - 1] and differing_players(a, b, n) == tuple(players)

    forced = {int(k): v for k, v in cert["forced"].items()}
    if not all(required(v, (k,)) for k, v in forced.items()):
        return False
    edges = set()
    for key, pair in cert["edges"].items():
        a, b = (int(x) for x in key.split("-"))
        if a not in forced or b not in forced or not required(pair, (a, b)):
            return False
        edges.add((a, b))
    exempt = (n, cert["excitations"]) in _EXEMPT
    for rule in cert["rules"]:
        kind = rule["rule"]
        if kind == "odd_cycle":
            cyc = rule["cycle"]
            ring = list(zip(cyc, cyc[1:] + cyc[:1]))
            if len(cyc) % 2 == 0 or cert["balanced"]:
                return False
            if not all(tuple(sorted(e)) in edges for e in ring):
                return False
            for tri in rule["triangles"]:
                if not all(tuple(sorted(e)) in edges for e in combinations(tri, 2)):
                    return False
        elif kind == "four_player":
            quad = tuple(rule["quadruple"])
            if not cert["balanced"] or n < 6 or not required(rule["pair"], quad):
                return False
            if any(q not in forced for q in quad) or len(rule["pairings"]) < 2:
                return False
            for pairing in rule["pairings"]:
                if not all(tuple(p) in edges and set(p) <= set(quad) for p in pairing):
                    return False
        elif kind == "O5":
            s = tuple(rule["set"])
            if exempt or s not in partition.sets or len(s) % 2 == 0:
                return False
            if max(len(x) for x in partition.sets) == 1:
                return False
        elif kind == "O6":
            if exempt or tuple(rule["set"]) != (1, 2 ** n) or (1, 2 ** n) not in partition.sets:
                return False
        else:
            return False
    return (verdict.kind == CONTRADICTION) == bool(cert["rules"])
