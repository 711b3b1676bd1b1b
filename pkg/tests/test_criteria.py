import copy

import numpy as np
import pytest

from conftest import random_state, random_unitary
from qgr.criteria import (
    CONTRADICTION, NO_RULE, operator_structure, replay_certificate, scr_check,
    state_structure_check, symbolic_contradiction, wcr_check, wk_unitarity_check,
    z_string_expectations,
)
from qgr.games import Partition, make_native, payoff_partition
from qgr.kernel import HADAMARD, IDENTITY, NAMED_OPS, SIGMA_X, SIGMA_Z, tensor_apply
from qgr.presets import (
    bell_assignment, dicke22_scr_assignment, ghz_assignment, ghz_odd_rescue,
    majority4_dicke22_assignment,
)
from qgr.referee import PreconditionError
from qgr.search import SearchConfig, feasibility_search, required_pairs
from qgr.states import StateSpec, dicke, ghz

BELL = np.array([1, 0, 0, 1]) / np.sqrt(2)
S_GATE = NAMED_OPS["S"]


def test_scr_positive_cases():
    assert scr_check(BELL, bell_assignment()).passed
    assert scr_check(dicke(2, 1), bell_assignment()).passed
    assert scr_check(dicke(4, 2), dicke22_scr_assignment()).max_violation <= 1e-10
    for n in (2, 4, 6, 8):
        assert scr_check(ghz(n), ghz_assignment(n)).max_violation <= 1e-12


@pytest.mark.parametrize("n", [3, 5, 7])
def test_ghz_odd_with_iy_fails_but_rescue_passes(n):
    bad = scr_check(ghz(n), ghz_assignment(n))
    assert not bad.passed and bad.worst_pair == (1, 2 ** n)
    assert scr_check(ghz(n), ghz_odd_rescue(n)).max_violation <= 1e-12


def test_scr_negative_reports_violation():
    rep = scr_check(dicke(3, 1), ghz_assignment(3))
    assert not rep.passed and rep.max_violation == pytest.approx(2 / 3)


def test_wcr_singletons_equal_scr(rng):
    for n in (2, 3):
        psi = random_state(rng, n)
        ops = [(random_unitary(rng), random_unitary(rng)) for _ in range(n)]
        a = scr_check(psi, ops)
        b = wcr_check(psi, ops, Partition.singletons(n))
        assert a.passed == b.passed and a.max_violation == pytest.approx(b.max_violation)


def test_wcr_majority_paper_operators():
    rep = wcr_check(dicke(4, 2), majority4_dicke22_assignment(),
                    payoff_partition(make_native("majority", 4)))
    assert rep.passed and rep.max_violation <= 1e-10


def test_wcr_whole_partition_is_trivial():
    rep = wcr_check(dicke(3, 1), ghz_assignment(3), Partition.whole(3))
    assert rep.passed and rep.worst_pair is None


def test_wcr_size_mismatch():
    with pytest.raises(ValueError):
        wcr_check(BELL, bell_assignment(), Partition.singletons(3))


def test_operator_structure_forms():
    rep = operator_structure(ghz(4), ghz_assignment(4))
    assert rep.all_iz_form
    assert all(p.traceless for p in rep.players)
    rep = operator_structure(dicke(4, 2), dicke22_scr_assignment())
    assert rep.all_iz_form
    for p, z in zip(rep.players, rep.diagonalizers):
        assert np.allclose(z @ p.v @ z.conj().T, 1j * SIGMA_Z, atol=1e-10)


def test_operator_structure_hadamard_is_iz_after_det_normalization():
    rep = operator_structure(BELL, [(IDENTITY, HADAMARD), (IDENTITY, HADAMARD)])
    assert rep.all_iz_form


def test_operator_structure_phase_gate_is_not_iz():
    rep = operator_structure(BELL, [(IDENTITY, S_GATE), (IDENTITY, SIGMA_X)])
    assert not rep.players[0].iz_form and rep.players[1].iz_form


def test_marginal_balance_vanishes_for_scr():
    rep = operator_structure(dicke(4, 2), dicke22_scr_assignment())
    assert all(abs(p.marginal_balance) < 1e-10 for p in rep.players)


def test_z_string_expectations_brute_force(rng):
    for n in (1, 2, 3, 4):
        psi = random_state(rng, n)
        ev = z_string_expectations(psi)
        for s in range(2 ** n):
            ops = [SIGMA_Z if (s >> (n - 1 - i)) & 1 else IDENTITY for i in range(n)]
            brute = np.vdot(psi, tensor_apply(ops, psi)).real
            assert ev[s] == pytest.approx(brute, abs=1e-12)


@pytest.mark.parametrize("psi,ops", [
    (ghz(4), ghz_assignment(4)),
    (ghz(3), ghz_odd_rescue(3)),
    (dicke(4, 2), dicke22_scr_assignment()),
    (BELL, bell_assignment()),
])
def test_state_structure_passes_for_scr_setups(psi, ops):
    rep = state_structure_check(psi, ops)
    assert rep.passed
    n = len(ops)
    assert len(rep.details["expectations"]) == 2 ** n
    assert rep.details["max_magnitude_dev"] <= 1e-10


def test_state_structure_fails_for_w():
    rep = state_structure_check(dicke(3, 1), ghz_assignment(3))
    assert not rep.passed


def test_state_structure_precondition():
    with pytest.raises(PreconditionError):
        state_structure_check(BELL, [(IDENTITY, S_GATE), (IDENTITY, SIGMA_X)])


def test_wk_unitarity():
    th = [0.3, 1.1]
    # v = iY-type (anti-Hermitian) keeps w unitary; v = X does not
    assert wk_unitarity_check([(IDENTITY, 1j * NAMED_OPS["Y"])] * 2, th) < 1e-12
    assert wk_unitarity_check([(IDENTITY, SIGMA_X)] * 2, th) > 0.1


def test_w3_scr_contradiction_chi123():
    v = symbolic_contradiction(StateSpec("w", 3), Partition.singletons(3))
    assert v.kind == CONTRADICTION
    rule = v.certificate["rules"][0]
    assert rule["rule"] == "odd_cycle" and [1, 2, 3] in rule["triangles"]


@pytest.mark.parametrize("n", [3, 4, 5, 6])
def test_w_scr_contradiction(n):
    v = symbolic_contradiction(StateSpec("w", n), Partition.singletons(n))
    assert "odd_cycle" in v.rules
    assert replay_certificate(v, Partition.singletons(n))


def test_dicke63_four_player_rule():
    v = symbolic_contradiction(StateSpec("dicke", 6, 3), Partition.singletons(6))
    assert v.rules == ["four_player"]
    rule = v.certificate["rules"][0]
    assert len(rule["pairings"]) >= 2
    assert replay_certificate(v, Partition.singletons(6))


@pytest.mark.parametrize("n,m", [(2, 1), (4, 2)])
def test_scr_states_raise_nothing(n, m):
    v = symbolic_contradiction(StateSpec("dicke", n, m), Partition.singletons(n))
    assert v.kind == NO_RULE


def test_minority_rules():
    part = payoff_partition(make_native("minority", 4))
    v = symbolic_contradiction(StateSpec("w", 4), part)
    tri = v.certificate["rules"][0]["triangles"]
    assert [2, 3, 4] in tri
    assert symbolic_contradiction(StateSpec("dicke", 4, 2), part).kind == NO_RULE


def test_majority3_chi123():
    v = symbolic_contradiction(StateSpec("w", 3), payoff_partition(make_native("majority", 3)))
    assert [1, 2, 3] in v.certificate["rules"][0]["triangles"]


@pytest.mark.parametrize("n", [3, 4, 5, 6])
def test_coordination_o6(n):
    part = payoff_partition(make_native("coordination", n))
    assert "O6" in symbolic_contradiction(StateSpec("w", n), part).rules
    if n == 4:
        assert symbolic_contradiction(StateSpec("dicke", 4, 2), part).kind == NO_RULE


def test_o5_fires_on_odd_sets():
    part = payoff_partition(make_native("majority", 3))
    assert all(len(s) % 2 == 0 for s in part.sets)
    part = payoff_partition(make_native("majority", 4))
    v = symbolic_contradiction(StateSpec("w", 4), part)
    assert "O5" in v.rules


def test_rules_reject_other_states():
    with pytest.raises(ValueError):
        symbolic_contradiction(StateSpec("ghz", 3), Partition.singletons(3))
    with pytest.raises(ValueError):
        symbolic_contradiction(StateSpec("w", 3), Partition.singletons(4))


def test_replay_rejects_tampered_certificates():
    part = Partition.singletons(4)
    v = symbolic_contradiction(StateSpec("w", 4), part)
    assert replay_certificate(v, part)
    bad = copy.deepcopy(v)
    bad.certificate["rules"][0]["cycle"] = [1, 2, 3, 4]
    assert not replay_certificate(bad, part)
    bad = copy.deepcopy(v)
    bad.certificate["forced"]["1"] = [1, 16]
    assert not replay_certificate(bad, part)
    # with a single set nothing is required, so no witness pair survives
    assert not replay_certificate(v, Partition.whole(4))


def test_replay_all_shipped_games():
    for kind in ("minority", "majority", "coordination", "zerosum", "mp_extension"):
        for n in range(3, 7):
            part = payoff_partition(make_native(kind, n))
            for m in range(1, n):
                v = symbolic_contradiction(StateSpec("dicke", n, m), part)
                assert replay_certificate(v, part), (kind, n, m)


def test_symbolic_and_numeric_agree_on_small_cases():
    cfg = SearchConfig(restarts=10, rng_seed=3)
    for n in (3, 4):
        for kind in ("minority", "majority", "coordination"):
            part = payoff_partition(make_native(kind, n))
            for m in range(1, n):
                v = symbolic_contradiction(StateSpec("dicke", n, m), part)
                if v.contradiction:
                    res = feasibility_search(dicke(n, m), required_pairs(part), cfg)
                    assert not res.converged, (kind, n, m)
