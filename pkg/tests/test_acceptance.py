"""Acceptance suite: one test per criterion, each printing a PASS/FAIL line.

Run directly (``python tests/test_acceptance.py``) for the twelve summary
lines, or through pytest, where every criterion prints its line as it runs.
Criteria 1, 8 and 9 contain sub-claims that do not hold as stated; they are
checked as stated and fail.
"""
import subprocess
import sys

import numpy as np
import pytest
from scipy.stats import unitary_group

from qgr.criteria import (
    replay_certificate, scr_check, state_structure_check, symbolic_contradiction, wcr_check,
)
from qgr.games import Partition, catalog_game, classify_group, make_native, payoff_partition
from qgr.kernel import HADAMARD, IDENTITY
from qgr.presets import (
    bell_assignment, dicke22_scr_assignment, ghz_assignment, majority4_dicke22_assignment,
)
from qgr.referee import PreconditionError, reproduce_mixed_check
from qgr.search import SearchConfig, feasibility_search, required_pairs, residual, scr_constraints
from qgr.states import StateSpec, dicke, ghz, ghz_uniformizer_matrix, make_state, verify_uniform_form

BELL = make_state(StateSpec("bell", 2))
SEED = 7


def _odd_cycle(verdict):
    return next((r for r in verdict.certificate["rules"] if r["rule"] == "odd_cycle"), None)


def criterion_1():
    viol = {"bell": scr_check(BELL, bell_assignment()).max_violation}
    for n in range(2, 9):
        viol[f"ghz{n}"] = scr_check(ghz(n), ghz_assignment(n)).max_violation
    bad = [k for k, v in viol.items() if v > 1e-12]
    return not bad, f"max_violation > 1e-12 for {bad}" if bad else "all <= 1e-12"


def criterion_2():
    a = scr_check(dicke(2, 1), bell_assignment()).max_violation
    b = scr_check(dicke(4, 2), dicke22_scr_assignment()).max_violation
    return max(a, b) <= 1e-10, f"|1,1> {a:.2e}, |2,2> {b:.2e}"


def criterion_3():
    cfg = SearchConfig(restarts=100, rng_seed=SEED)
    notes, ok = [], True
    for n in range(3, 7):
        v = symbolic_contradiction(StateSpec("w", n), Partition.singletons(n))
        cyc = _odd_cycle(v)
        res = feasibility_search(dicke(n, 1), scr_constraints(n), cfg)
        good = v.contradiction and cyc is not None and res.best_residual >= 1e-6 and not res.converged
        ok &= good
        notes.append(f"W{n}: cycle {cyc['cycle'] if cyc else None}, best {res.best_residual:.4g}")
    return ok, "; ".join(notes)


def criterion_4():
    v = symbolic_contradiction(StateSpec("dicke", 6, 3), Partition.singletons(6))
    res = feasibility_search(dicke(6, 3), scr_constraints(6), SearchConfig(restarts=100, rng_seed=SEED))
    ok = v.contradiction and "four_player" in v.rules and not res.converged
    return ok, f"rules {v.rules}, best residual {res.best_residual:.4g}"


def criterion_5():
    part = payoff_partition(make_native("minority", 4))
    want = [[1, 4, 6, 7, 10, 11, 13, 16], [2, 15], [3, 14], [5, 12], [8, 9]]
    part_ok = sorted(part.as_lists()) == sorted(want)
    cyc = _odd_cycle(symbolic_contradiction(StateSpec("w", 4), part))
    tri_ok = cyc is not None and [2, 3, 4] in cyc["triangles"]
    res = feasibility_search(dicke(4, 2), required_pairs(part), SearchConfig(restarts=100, rng_seed=SEED))
    ok = part_ok and tri_ok and res.converged and res.best_residual < 1e-9
    return ok, f"partition {part_ok}, chi_234 {tri_ok}, |2,2> residual {res.best_residual:.2e}"


def criterion_6():
    p3 = payoff_partition(make_native("majority", 3))
    p3_ok = sorted(p3.as_lists()) == [[1, 2, 3, 5], [4, 6, 7, 8]]
    cyc = _odd_cycle(symbolic_contradiction(StateSpec("w", 3), p3))
    chi_ok = cyc is not None and [1, 2, 3] in cyc["triangles"]
    p4 = payoff_partition(make_native("majority", 4))
    p4_ok = sorted(p4.as_lists()) == sorted([[1, 2, 3, 5, 9], [8, 12, 14, 15, 16],
                                             [4, 6, 7, 10, 11, 13]])
    w = wcr_check(dicke(4, 2), majority4_dicke22_assignment(), p4).max_violation
    ok = p3_ok and chi_ok and p4_ok and w <= 1e-10
    return ok, f"N=3 {p3_ok}, chi_123 {chi_ok}, N=4 {p4_ok}, wcr {w:.2e}"


def criterion_7():
    notes, ok = [], True
    for n in range(3, 7):
        coord = payoff_partition(make_native("coordination", n))
        zs = payoff_partition(make_native("zerosum", n))
        mp = payoff_partition(make_native("mp_extension", n))
        zs_sizes = sorted(len(s) for s in zs.sets)
        shapes = (len(coord.sets) == 2 and (1, 2 ** n) in coord.sets
                  and len(zs.sets) == 2 ** n - 1 and zs_sizes.count(2) == 1
                  and (1, 2 ** n) in mp.sets and all(len(s) % 2 == 0 for s in mp.sets))
        fired = True
        for part in (coord, zs, mp):
            for m in range(1, n):
                rules = set(symbolic_contradiction(StateSpec("dicke", n, m), part).rules)
                hit = bool(rules & {"O5", "O6"})
                fired &= hit != ((n, m) == (4, 2))
        ok &= shapes and fired
        notes.append(f"N={n}: shapes {shapes}, rules {fired}")
    return ok, "; ".join(notes)


def criterion_8():
    rng = np.random.default_rng(SEED)
    out, ok = [], True
    cases = [("bell", BELL, bell_assignment(), catalog_game("pd", 2)),
             ("ghz3", ghz(3), ghz_assignment(3), catalog_game("pd", 3))]
    for name, psi, ops, game in cases:
        thetas = rng.uniform(0, np.pi / 2, size=(1000, len(ops)))
        try:
            gap = max(max(reproduce_mixed_check(psi, ops, game, th, "operators"),
                          reproduce_mixed_check(psi, ops, game, th, "mixing")) for th in thetas)
            ok &= gap <= 1e-10
            out.append(f"{name} gap {gap:.2e}")
        except PreconditionError:
            ok = False
            out.append(f"{name} refused (outputs not orthogonal)")
    return ok, "; ".join(out)


def criterion_9():
    notes, ok = [], True
    for n in range(1, 6):
        psi = np.zeros(2 ** n, dtype=complex)
        psi[0] = 1
        ok &= verify_uniform_form(psi, [HADAMARD] * n, tol=1e-12).uniform
    notes.append(f"product+H {ok}")
    try:
        rep = verify_uniform_form(ghz(4), [ghz_uniformizer_matrix()] + [HADAMARD] * 3, tol=1e-12)
        ok &= rep.uniform
        notes.append(f"GHZ_4 max dev {rep.max_dev:.2e}")
    except ValueError:
        ok = False
        notes.append("GHZ_4 local is not unitary")
    worst = 0.0
    for psi, ops in [(ghz(4), ghz_assignment(4)), (dicke(4, 2), dicke22_scr_assignment()),
                     (BELL, bell_assignment())]:
        rep = state_structure_check(psi, ops)
        worst = max(worst, rep.max_violation)
    ok &= worst <= 1e-10
    notes.append(f"structure expectations {worst:.2e}")
    return ok, "; ".join(notes)


CLASS_I = ("pd", "sd", "bp", "md", "dl", "rc")
CLASS_II = ("bos", "bb", "mp", "ag")


def criterion_10():
    bad = []
    for n in range(3, 9):
        for name in CLASS_I:
            if classify_group(catalog_game(name, n)) != "GroupI":
                bad.append((name, n))
        for name in CLASS_II:
            want = "GroupI" if (name == "bos" and n == 3) else "GroupII"
            if classify_group(catalog_game(name, n)) != want:
                bad.append((name, n))
        even = n % 2 == 0
        if classify_group(catalog_game("sh", n)) != ("GroupI" if even else "GroupII"):
            bad.append(("sh", n))
        for name in ("cg", "hd"):
            if classify_group(catalog_game(name, n)) != ("GroupII" if even else "GroupI"):
                bad.append((name, n))
    return not bad, f"mismatches {bad}" if bad else "N=3..8 as stated"


def _kron_residual(psi, vs, pairs):
    n = len(vs)
    outs = []
    for k in range(2 ** n):
        op = np.ones((1, 1))
        for i in range(n):
            op = np.kron(op, vs[i] if (k >> (n - 1 - i)) & 1 else IDENTITY)
        outs.append(op @ psi)
    outs = np.array(outs)
    gram = outs.conj() @ outs.T
    a, b = np.array(pairs).T - 1
    return float(np.sum(np.abs(gram[a, b]) ** 2))


def criterion_11():
    rng = np.random.default_rng(SEED)
    worst = 0.0
    for _ in range(500):
        n = int(rng.integers(2, 6))
        psi = rng.normal(size=2 ** n) + 1j * rng.normal(size=2 ** n)
        psi /= np.linalg.norm(psi)
        vs = [unitary_group.rvs(2, random_state=rng) for _ in range(n)]
        cons = scr_constraints(n)
        worst = max(worst, abs(residual(psi, vs, cons) - _kron_residual(psi, vs, cons.pairs)))
    conflicts, checked = [], 0
    cfg = SearchConfig(restarts=10, rng_seed=SEED)
    cases = []
    for n in (3, 4):
        parts = [Partition.singletons(n)] + [payoff_partition(make_native(k, n)) for k in
                                             ("minority", "majority", "coordination", "zerosum",
                                              "mp_extension")]
        cases += [(n, m, p) for p in parts for m in range(1, n)]
    cases += [(n, m, Partition.singletons(n)) for n in (5, 6) for m in range(1, n)]
    for n, m, part in cases:
        v = symbolic_contradiction(StateSpec("dicke", n, m), part)
        if not replay_certificate(v, part):
            conflicts.append(("replay", n, m))
        if v.contradiction:
            checked += 1
            if feasibility_search(dicke(n, m), required_pairs(part), cfg).converged:
                conflicts.append((n, m, len(part.sets)))
    ok = worst <= 1e-12 and not conflicts
    return ok, f"oracle gap {worst:.2e}; {checked} contradictions, conflicts {conflicts}"


def criterion_12():
    cmd = [sys.executable, "-m", "qgr.cli", "verify-paper", "--seed", "7", "--json"]
    a = subprocess.run(cmd, capture_output=True).stdout
    b = subprocess.run(cmd, capture_output=True).stdout
    return a == b and len(a) > 0, f"{len(a)} bytes, identical {a == b}"


CRITERIA = [criterion_1, criterion_2, criterion_3, criterion_4, criterion_5, criterion_6,
            criterion_7, criterion_8, criterion_9, criterion_10, criterion_11, criterion_12]


def _line(i, ok, detail):
    return f"ACCEPTANCE {i:2d} {'PASS' if ok else 'FAIL'}  {detail}"


@pytest.mark.parametrize("i", range(1, 13))
def test_acceptance(i, capsys):
    ok, detail = CRITERIA[i - 1]()
    with capsys.disabled():
        print("\n" + _line(i, ok, detail))
    assert ok, detail


if __name__ == "__main__":
    results = [c() for c in CRITERIA]
    for i, (ok, detail) in enumerate(results, 1):
        print(_line(i, ok, detail))
    sys.exit(0 if all(ok for ok, _ in results) else 1)
