"""Playing w_k = u1 cos(t_k) + u2 sin(t_k) instead of a pure operator
reproduces the classical mixed payoff with q_k = cos(t_k)^2, provided the
strong criterion holds."""
import numpy as np

from qgr.games import catalog_game, classical_mixed_payoff
from qgr.presets import ghz_assignment, ghz_odd_rescue
from qgr.referee import PreconditionError, reproduce_mixed_check
from qgr.states import ghz

rng = np.random.default_rng(0)
game = catalog_game("pd", 4)
gaps = [reproduce_mixed_check(ghz(4), ghz_assignment(4), game, th)
        for th in rng.uniform(0, np.pi / 2, size=(200, 4))]
print("GHZ_4 worst gap over 200 profiles:", max(gaps))

th = np.array([np.pi / 4, 0, 0])
g3 = catalog_game("pd", 3)
print("classical at q=(1/2,1,1):", classical_mixed_payoff(g3, np.cos(th) ** 2))
print("gap with rescue operators:", reproduce_mixed_check(ghz(3), ghz_odd_rescue(3), g3, th))

try:
    reproduce_mixed_check(ghz(3), ghz_assignment(3), g3, th)
except PreconditionError as exc:
    print("GHZ_3 with iY everywhere is refused:", exc)
