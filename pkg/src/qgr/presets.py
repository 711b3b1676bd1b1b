"""Named operator assignments and shipped data files."""
from __future__ import annotations

from importlib import resources

import numpy as np

from qgr.kernel import IDENTITY, NAMED_OPS, SIGMA_X, SIGMA_Y, SIGMA_Z
from qgr.referee import make_assignment, read_ops_file

I_SIGMA_Y = 1j * SIGMA_Y


def data_path(name: str):
    """Path of a file shipped in ``qgr/data``."""
    return resources.files("qgr") / "data" / name


def bell_assignment():
    """Player 1 uses ``{I, X}``, player 2 ``{I, iY}``."""
    return make_assignment([(IDENTITY, SIGMA_X), (IDENTITY, I_SIGMA_Y)])


def ghz_assignment(n: int):
    """``{I, iY}`` for every player."""
    return make_assignment([(IDENTITY, I_SIGMA_Y)] * n)


def ghz_odd_rescue(n: int):
    """``{I, X}`` for player 1 and ``{I, iY}`` for the rest.

    For odd `n` the all-``iY`` assignment maps GHZ onto ``i`` times itself,
    so the first and last outputs coincide; swapping one player to ``X``
    breaks that degeneracy.
    """
    return make_assignment([(IDENTITY, SIGMA_X)] + [(IDENTITY, I_SIGMA_Y)] * (n - 1))


def dicke22_u2() -> np.ndarray:
    return 1j * (np.sqrt(2) * SIGMA_Z + SIGMA_X) / np.sqrt(3)


def majority4_u2() -> np.ndarray:
    return (np.sqrt(2) * SIGMA_Z + SIGMA_Y) / np.sqrt(3)


def dicke22_scr_assignment():
    """Strong-criterion operators for ``|2,2>``."""
    u = dicke22_u2()
    return make_assignment([(IDENTITY, u)] * 3 + [(IDENTITY, I_SIGMA_Y)])


def majority4_dicke22_assignment():
    """Weak-criterion operators for ``|2,2>`` in the 4-player majority game."""
    u = majority4_u2()
    return make_assignment([(IDENTITY, SIGMA_X)] + [(IDENTITY, u)] * 3)


def shipped_ops(name: str):
    """Load a shipped ``.ops`` file by name (``.ops`` suffix optional)."""
    if not name.endswith(".ops"):
        name += ".ops"
    with resources.as_file(data_path(name)) as p:
        if not p.exists():
            raise FileNotFoundError(name)
        return read_ops_file(p)


__all__ = ["NAMED_OPS", "bell_assignment", "ghz_assignment", "ghz_odd_rescue",
           "dicke22_scr_assignment", "majority4_dicke22_assignment", "shipped_ops", "data_path"]
