"""Classical game layer: payoff tables, N-player extensions, Group I/II
classification, payoff-equivalence partitions and classical payoffs.

Outcome indices are 1-based. Outcome ``k`` corresponds to the joint profile
whose binary expansion of ``k - 1`` has player 1 as the most significant
bit, bit 0 meaning the first strategy.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from importlib import resources
from pathlib import Path

import numpy as np

CATALOG_2X2 = ("PD", "SH", "CG", "DL", "BoS", "SD", "BP", "MD", "RC", "AG", "HD", "BB", "MP")
NATIVE_KINDS = ("minority", "majority", "coordination", "zerosum", "mp_extension")

GROUP_I = "GroupI"
GROUP_II = "GroupII"


def profile_bits(k: int, n: int) -> tuple[int, ...]:
    """Strategy bits (0 = first strategy) of 1-based outcome `k`."""
    return tuple(((k - 1) >> (n - 1 - i)) & 1 for i in range(n))


def outcome_index(bits) -> int:
    k = 0
    for b in bits:
        k = (k << 1) | int(b)
    return k + 1


@dataclass(frozen=True)
class Game2x2:
    """Two-player table; ``payoffs[(r, c)] = (row payoff, column payoff)``
    with strategies numbered 1 and 2."""
    name: str
    payoffs: dict

    def __post_init__(self):
        missing = {(1, 1), (1, 2), (2, 1), (2, 2)} - set(self.payoffs)
        if missing:
            raise ValueError(f"{self.name}: missing cells {sorted(missing)}")


@dataclass(frozen=True)
class GameN:
    """N-player two-strategy game; row ``k-1`` of `payoffs` is ``A_k``."""
    payoffs: np.ndarray = field(repr=False)
    name: str = "custom"

    def __post_init__(self):
        a = np.asarray(self.payoffs, dtype=float)
        if a.ndim != 2:
            raise ValueError("payoff table must be 2-D (outcomes x players)")
        n = a.shape[1]
        if a.shape[0] != 2 ** n:
            raise ValueError(f"expected {2 ** n} outcomes for {n} players, got {a.shape[0]}")
        if not np.all(np.isfinite(a)):
            raise ValueError("payoffs must be finite")
        a.setflags(write=False)
        object.__setattr__(self, "payoffs", a)

    @property
    def n_players(self) -> int:
        return self.payoffs.shape[1]

    def vector(self, k: int) -> np.ndarray:
        return self.payoffs[k - 1]


@dataclass(frozen=True)
class Partition:
    """Disjoint sets of 1-based outcome indices covering ``1..2**N``, ordered
    by smallest member."""
    sets: tuple

    def __post_init__(self):
        sets = tuple(tuple(sorted(int(x) for x in s)) for s in self.sets)
        if any(len(s) == 0 for s in sets):
            raise ValueError("partition sets must be nonempty")
        flat = sorted(x for s in sets for x in s)
        total = len(flat)
        if total == 0 or total & (total - 1) or flat != list(range(1, total + 1)):
            raise ValueError("partition must be disjoint and cover 1..2**N")
        object.__setattr__(self, "sets", tuple(sorted(sets, key=lambda s: s[0])))

    @property
    def n_outcomes(self) -> int:
        return sum(len(s) for s in self.sets)

    @property
    def n_players(self) -> int:
        return self.n_outcomes.bit_length() - 1

    def labels(self) -> np.ndarray:
        """Set index (0-based) for each outcome, as an array over ``k-1``."""
        lab = np.empty(self.n_outcomes, dtype=int)
        for j, s in enumerate(self.sets):
            lab[np.asarray(s) - 1] = j
        return lab

    @classmethod
    def singletons(cls, n: int) -> "Partition":
        return cls(tuple((k,) for k in range(1, 2 ** n + 1)))

    @classmethod
    def whole(cls, n: int) -> "Partition":
        return cls((tuple(range(1, 2 ** n + 1)),))

    def as_lists(self) -> list[list[int]]:
        return [list(s) for s in self.sets]


def cross_pairs(partition: Partition) -> list[tuple[int, int]]:
    """All outcome pairs ``(a, b)``, ``a < b``, lying in different sets."""
    lab = partition.labels()
    n = len(lab)
    return [(a + 1, b + 1) for a in range(n) for b in range(a + 1, n) if lab[a] != lab[b]]


def differing_players(a: int, b: int, n: int) -> tuple[int, ...]:
    """1-based players whose strategies differ between outcomes `a` and `b`."""
    x = (a - 1) ^ (b - 1)
    return tuple(i + 1 for i in range(n) if (x >> (n - 1 - i)) & 1)


def _load_catalog() -> dict:
    text = resources.files("qgr").joinpath("data/games2x2.json").read_text()
    return json.loads(text)


def catalog_2x2(name: str) -> Game2x2:
    """Default table of a catalog game (case-insensitive name)."""
    lookup = {k.lower(): k for k in CATALOG_2X2}
    key = lookup.get(name.lower())
    if key is None:
        raise ValueError(f"unknown 2x2 game {name!r}; choose from {', '.join(CATALOG_2X2)}")
    raw = _load_catalog()[key]
    cells = {(int(c[0]), int(c[1])): tuple(Fraction(x) for x in raw[c]) for c in ("11", "12", "21", "22")}
    return Game2x2(key, cells)


def _exact_game(rows, name) -> GameN:
    return GameN(np.array([[float(x) for x in r] for r in rows]), name=name)


def extend_2x2(base: Game2x2, n: int) -> GameN:
    """N-player extension by summing pairwise payoffs against every opponent.

    In each pair the lower-numbered player takes the row role, which only
    matters for asymmetric bases.
    """
    if n < 2:
        raise ValueError("extension needs n >= 2")
    rows = []
    for k in range(1, 2 ** n + 1):
        s = [b + 1 for b in profile_bits(k, n)]
        vec = []
        for i in range(n):
            tot = Fraction(0)
            for j in range(n):
                if j == i:
                    continue
                if i < j:
                    tot += Fraction(base.payoffs[(s[i], s[j])][0])
                else:
                    tot += Fraction(base.payoffs[(s[j], s[i])][1])
            vec.append(tot)
        rows.append(vec)
    return _exact_game(rows, f"{base.name}-ext{n}")


def make_native(kind: str, n: int, l0=1, l1=None, lam=1) -> GameN:
    """Originally multi-player games.

    minority
        Players on the strictly smaller side get 1, everyone else 0; ties and
        unanimity pay 0 to all.
    majority
        Everyone gets `l0` (`l1`) when the first (second) strategy has a
        strict majority, 0 on an even split. ``l1`` defaults to ``2 * l0``
        so the two majorities are distinguishable.
    coordination
        `l0` (`l1`) to all on unanimity in the first (second) strategy, else
        0. ``l1`` defaults to `l0`.
    zerosum
        With ``m`` players on the first strategy, each of them gets
        ``lam / m`` and the others get ``-lam / (n - m)``; 0 on unanimity.
    mp_extension
        Pairwise-summed extension of matching pennies.
    """
    if kind not in NATIVE_KINDS:
        raise ValueError(f"unknown native game {kind!r}; choose from {', '.join(NATIVE_KINDS)}")
    if n < 2:
        raise ValueError("native games need n >= 2")
    if kind == "mp_extension":
        g = extend_2x2(catalog_2x2("MP"), n)
        return GameN(g.payoffs, name=f"mp_extension{n}")
    l0 = Fraction(l0)
    if l1 is None:
        l1 = 2 * l0 if kind == "majority" else l0
    l1 = Fraction(l1)
    lam = Fraction(lam)
    if kind in ("majority", "coordination") and (l0 <= 0 or l1 <= 0):
        raise ValueError(f"{kind} game needs positive l0, l1")
    if kind == "zerosum" and lam <= 0:
        raise ValueError("zero-sum game needs positive lam")
    rows = []
    for k in range(1, 2 ** n + 1):
        bits = profile_bits(k, n)
        ones = sum(bits)
        zeros = n - ones
        if kind == "minority":
            if ones == zeros or ones == 0 or zeros == 0:
                rows.append([0] * n)
            else:
                small = 1 if ones < zeros else 0
                rows.append([1 if b == small else 0 for b in bits])
        elif kind == "majority":
            val = l0 if zeros > ones else (l1 if ones > zeros else 0)
            rows.append([val] * n)
        elif kind == "coordination":
            val = l0 if ones == 0 else (l1 if zeros == 0 else 0)
            rows.append([val] * n)
        else:
            if ones == 0 or zeros == 0:
                rows.append([0] * n)
            else:
                rows.append([lam / zeros if b == 0 else -lam / ones for b in bits])
    return _exact_game(rows, f"{kind}{n}")


def catalog_game(name: str, n: int, **params) -> GameN:
    """Catalog lookup: a 2x2 name (extended to `n` players) or a native kind."""
    key = name.lower()
    if key in NATIVE_KINDS:
        return make_native(key, n, **params)
    if key in ("mp-extension", "mpext"):
        return make_native("mp_extension", n)
    return extend_2x2(catalog_2x2(name), n)


def payoff_partition(game: GameN) -> Partition:
    """Group outcomes with identical payoff vectors (exact comparison)."""
    groups: dict[tuple, list[int]] = {}
    for k, row in enumerate(game.payoffs, 1):
        groups.setdefault(tuple(row.tolist()), []).append(k)
    return Partition(tuple(groups.values()))


def classify_group(game: GameN) -> str:
    part = payoff_partition(game)
    return GROUP_I if len(part.sets) == 2 ** game.n_players else GROUP_II


def classical_pure_payoff(game: GameN, profile) -> np.ndarray:
    """Payoff vector for a pure profile of strategies in ``{1, 2}``."""
    profile = list(profile)
    if len(profile) != game.n_players or any(s not in (1, 2) for s in profile):
        raise ValueError("profile must list one strategy in {1, 2} per player")
    return game.vector(outcome_index(s - 1 for s in profile)).copy()


def outcome_probabilities(probs) -> np.ndarray:
    """Product distribution over outcomes; ``probs[i]`` is player i's
    probability of the first strategy."""
    q = np.asarray(probs, dtype=float)
    if np.any(q < 0) or np.any(q > 1):
        raise ValueError("probabilities must lie in [0, 1]")
    dist = np.ones(1)
    for qi in q:
        dist = np.outer(dist, [qi, 1 - qi]).reshape(-1)
    return dist


def classical_mixed_payoff(game: GameN, probs) -> np.ndarray:
    """Expected payoff vector under independent mixed strategies."""
    if len(probs) != game.n_players:
        raise ValueError("need one probability per player")
    return outcome_probabilities(probs) @ game.payoffs


def game_from_dict(data: dict, name: str = "custom") -> GameN:
    """Build a game from ``{"players": N, "payoffs": {"<bits>": [...], ...}}``."""
    n = int(data["players"])
    table = data["payoffs"]
    if len(table) != 2 ** n:
        raise ValueError(f"expected {2 ** n} payoff entries, got {len(table)}")
    rows = [None] * 2 ** n
    for bits, vec in table.items():
        if len(bits) != n or set(bits) - {"0", "1"}:
            raise ValueError(f"bad outcome bitstring {bits!r}")
        if len(vec) != n:
            raise ValueError(f"payoff vector for {bits} must have {n} entries")
        rows[int(bits, 2)] = [float(x) for x in vec]
    return GameN(np.array(rows), name=data.get("name", name))


def game_to_dict(game: GameN) -> dict:
    n = game.n_players
    return {
        "name": game.name,
        "players": n,
        "payoffs": {format(k, f"0{n}b"): game.payoffs[k].tolist() for k in range(2 ** n)},
    }


def load_game(path) -> GameN:
    return game_from_dict(json.loads(Path(path).read_text()), name=Path(path).stem)
