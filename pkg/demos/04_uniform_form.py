"""A state that passes the strong criterion can be rotated locally so every
basis amplitude has magnitude 2^(-N/2)."""
import numpy as np

from qgr.criteria import state_structure_check
from qgr.kernel import HADAMARD, unitarity_defect
from qgr.presets import dicke22_scr_assignment
from qgr.states import dicke, ghz, ghz_phase_local, ghz_uniformizer_matrix, verify_uniform_form

prod = np.zeros(8, dtype=complex)
prod[0] = 1
print("product + H:", verify_uniform_form(prod, [HADAMARD] * 3).max_dev)
print("GHZ_4 + diag(1,i), H:", verify_uniform_form(ghz(4), [ghz_phase_local()] + [HADAMARD] * 3).max_dev)

# the printed GHZ local, taken literally, is not unitary
print("unitarity defect of the printed local:", unitarity_defect(ghz_uniformizer_matrix()))

# for |2,2> the diagonalizers of v_k do the job; all Z-string expectations vanish
rep = state_structure_check(dicke(4, 2), dicke22_scr_assignment())
print("|2,2> largest Z-string expectation:", rep.max_violation)
