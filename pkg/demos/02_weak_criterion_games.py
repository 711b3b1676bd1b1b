"""Games with repeated payoff vectors only need the referee to tell payoff
classes apart. Here: the 4-player minority game and the majority game."""
from qgr.criteria import symbolic_contradiction, wcr_check
from qgr.games import classify_group, make_native, payoff_partition
from qgr.presets import majority4_dicke22_assignment
from qgr.search import SearchConfig, feasibility_search, required_pairs
from qgr.states import StateSpec, dicke

minority = make_native("minority", 4)
part = payoff_partition(minority)
print(classify_group(minority), part.as_lists())

# W_4 fails through players 2, 3, 4; |2,2> survives
w4 = symbolic_contradiction(StateSpec("w", 4), part)
print("W_4 triangles:", w4.certificate["rules"][0]["triangles"])
print("|2,2>:", symbolic_contradiction(StateSpec("dicke", 4, 2), part).kind)

cons = required_pairs(part)
print(len(cons), "required pairs")
res = feasibility_search(dicke(4, 2), cons, SearchConfig(restarts=20))
print("|2,2> search:", res.summary())
res = feasibility_search(dicke(4, 1), cons, SearchConfig(restarts=20))
print("W_4 search:", res.summary())

# majority game: explicit operators for |2,2>
maj = payoff_partition(make_native("majority", 4))
print("majority sets:", maj.as_lists())
print("|2,2> wcr:", wcr_check(dicke(4, 2), majority4_dicke22_assignment(), maj).max_violation)

# set-shape filters: the unanimity doubleton of the coordination game
coord = payoff_partition(make_native("coordination", 5))
print("coordination W_5:", symbolic_contradiction(StateSpec("w", 5), coord).rules)
