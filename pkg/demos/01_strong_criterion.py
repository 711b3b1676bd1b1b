"""Which shared states let a referee recover every pure-strategy outcome?

The strong criterion asks for all 2^N output states to be mutually
orthogonal. We check a few catalog states with explicit operators, then let
the symbolic rules and the numerical search speak for the W state.
"""
import numpy as np

from qgr.criteria import scr_check, symbolic_contradiction
from qgr.games import Partition
from qgr.presets import bell_assignment, dicke22_scr_assignment, ghz_assignment, ghz_odd_rescue
from qgr.search import SearchConfig, feasibility_search, scr_constraints
from qgr.states import StateSpec, dicke, ghz, make_state

# Bell state, player 1 on {I, X}, player 2 on {I, iY}
bell = make_state(StateSpec("bell", 2))
print("Bell:", scr_check(bell, bell_assignment()).max_violation)

# GHZ_N with {I, iY} for everyone: fine for even N ...
for n in range(2, 7):
    rep = scr_check(ghz(n), ghz_assignment(n))
    print(f"GHZ_{n} {{I,iY}}: passed={rep.passed}  worst pair {rep.worst_pair}")

# ... but for odd N, (iY)^N maps the state onto i times itself, so outcomes 1
# and 2^N share an output. Moving player 1 to {I, X} fixes it.
for n in (3, 5):
    print(f"GHZ_{n} rescue:", scr_check(ghz(n), ghz_odd_rescue(n)).passed)

# |2,2> with its explicit operators
print("|2,2>:", scr_check(dicke(4, 2), dicke22_scr_assignment()).max_violation)

# W_3: no operators work. The rules find an odd cycle of phase equations,
# and a multi-start search cannot push the residual below 4/9.
v = symbolic_contradiction(StateSpec("w", 3), Partition.singletons(3))
print("W_3 rules:", v.kind, v.certificate["rules"][0]["cycle"])
res = feasibility_search(dicke(3, 1), scr_constraints(3), SearchConfig(restarts=20))
print("W_3 search:", res.summary())
print("4/9 =", 4 / 9, " best =", np.round(res.best_residual, 12))
