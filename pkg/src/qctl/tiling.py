"""Tiling and alternating multi-tiling instances with brute-force solvers.

Grid convention: a tiling maps (i, j) to a tile; the horizontal relation
links (i, j) to (i+1, j), the vertical one links (i, j) to (i, j+1), and the
initial condition fixes tau(0, i) = c_i.  In the grid formulas the first
coordinate is the one written with the h bits.
"""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass, field
from typing import Optional

from .trees import CapExceeded, DEFAULT_TETRATION_CAP, tetration

DEFAULT_SEARCH_CAP = 10 ** 7


@dataclass(frozen=True)
class TilingInstance:
    tiles: tuple
    hori: frozenset
    verti: frozenset
    init: tuple

    def __post_init__(self):
        if not self.init:
            raise ValueError("the initial condition must be non-empty")
        _check_relations(self.tiles, self.hori, self.verti, self.init)

    @property
    def n(self):
        return len(self.init)


@dataclass(frozen=True)
class AMTPInstance:
    n: int
    tiles: tuple
    hori: frozenset
    verti: frozenset
    t0: tuple = ()
    acc: frozenset = frozenset()
    multi: frozenset = frozenset()

    def __post_init__(self):
        if self.n < 2 or self.n % 2:
            raise ValueError("AMTP instances need an even n >= 2")
        _check_relations(self.tiles, self.hori, self.verti, self.t0, self.acc, self.multi)


def _check_relations(tiles, *parts):
    known = set(tiles)
    if len(known) != len(tiles):
        raise ValueError("duplicate tile names")
    for part in parts:
        for item in part:
            pair = item if isinstance(item, tuple) else (item,)
            for t in pair:
                if t not in known:
                    raise ValueError(f"unknown tile {t!r}")


def tiling_instance(tiles, hori, verti, init) -> TilingInstance:
    return TilingInstance(tuple(tiles), frozenset(map(tuple, hori)), frozenset(map(tuple, verti)), tuple(init))


def amtp_instance(n, tiles, hori, verti, t0, acc, multi) -> AMTPInstance:
    return AMTPInstance(n, tuple(tiles), frozenset(map(tuple, hori)), frozenset(map(tuple, verti)),
                        tuple(sorted(set(t0), key=list(tiles).index)), frozenset(acc),
                        frozenset(map(tuple, multi)))


def load_instance(doc):
    """Read the JSON instance format; returns an AMTPInstance when 'n' is present without 'init'."""
    if isinstance(doc, str):
        doc = json.loads(doc)
    tiles = doc["tiles"]
    hori = doc.get("hori", [])
    verti = doc.get("verti", [])
    if "init" in doc and doc["init"]:
        return tiling_instance(tiles, hori, verti, doc["init"])
    if "n" not in doc:
        raise ValueError("instance needs 'init' (tiling) or 'n' (AMTP)")
    return amtp_instance(doc["n"], tiles, hori, verti, doc.get("t0", []), doc.get("acc", []),
                         doc.get("multi", []))


def side_length(inst: TilingInstance, k: int, cap: int = DEFAULT_TETRATION_CAP) -> int:
    return tetration(k, inst.n, cap)


def is_tiling(inst, tau: dict, side: int) -> bool:
    """(hori) and (verti) on a side x side grid."""
    for i in range(side):
        for j in range(side):
            t = tau[i, j]
            if i + 1 < side and (t, tau[i + 1, j]) not in inst.hori:
                return False
            if j + 1 < side and (t, tau[i, j + 1]) not in inst.verti:
                return False
    return True


def validate_tiling(inst: TilingInstance, k: int, tau, cap: int = DEFAULT_TETRATION_CAP) -> bool:
    """(init), (hori) and (verti) for a grid of side t(k, n)."""
    side = side_length(inst, k, cap)
    tau = as_grid(tau)
    if set(tau) != {(i, j) for i in range(side) for j in range(side)}:
        raise ValueError(f"tiling does not cover the {side}x{side} grid")
    if side < inst.n:
        return False  # the initial condition does not fit
    if any(tau[0, i] != inst.init[i] for i in range(inst.n)):
        return False
    return is_tiling(inst, tau, side)


def as_grid(tau) -> dict:
    if isinstance(tau, dict):
        return dict(tau)
    return {(i, j): tau[i][j] for i in range(len(tau)) for j in range(len(tau[i]))}


def _backtrack(inst, side, fixed: dict, extra=None):
    """First tiling of the side x side grid extending `fixed`, cells in (i, j) order."""
    cells = [(i, j) for i in range(side) for j in range(side)]
    tau: dict = {}

    def ok(i, j, t):
        if i > 0 and (tau[i - 1, j], t) not in inst.hori:
            return False
        if j > 0 and (tau[i, j - 1], t) not in inst.verti:
            return False
        return True

    def go(pos):
        if pos == len(cells):
            return extra is None or extra(tau)
        i, j = cells[pos]
        options = [fixed[i, j]] if (i, j) in fixed else inst.tiles
        for t in options:
            if ok(i, j, t):
                tau[i, j] = t
                if go(pos + 1):
                    return True
                del tau[i, j]
        return False

    return dict(tau) if go(0) else None


def solve_tiling(inst: TilingInstance, k: int, with_init: bool = True,
                 cap: int = DEFAULT_SEARCH_CAP, tetration_cap: int = DEFAULT_TETRATION_CAP) -> Optional[dict]:
    side = side_length(inst, k, tetration_cap)
    cost = len(inst.tiles) ** (side * side)
    if cost > cap and side * side > 64:
        raise CapExceeded(f"tiling search over a {side}x{side} grid exceeds the search cap; raise --search-cap")
    fixed = {}
    if with_init:
        if side < inst.n:
            return None
        fixed = {(0, i): inst.init[i] for i in range(inst.n)}
    return _backtrack(inst, side, fixed)


def all_tilings(inst, side: int):
    """Every map from the grid to tiles satisfying (hori) and (verti); brute force."""
    cells = [(i, j) for i in range(side) for j in range(side)]
    for combo in itertools.product(inst.tiles, repeat=len(cells)):
        tau = dict(zip(cells, combo))
        if is_tiling(inst, tau, side):
            yield tau


def _solution_exists(inst: AMTPInstance, words: list) -> bool:
    """Is there a multi-tiling with the given first rows meeting (m-tiling), (m-multi), (m-accept)?"""
    n = inst.n
    side = 2 ** n
    last = side - 1
    cells = [(i, j) for i in range(side) for j in range(side)]
    taus = [dict() for _ in range(n)]

    def fits(a, i, j, t):
        tau = taus[a]
        if i > 0 and (tau[i - 1, j], t) not in inst.hori:
            return False
        if j > 0 and (tau[i, j - 1], t) not in inst.verti:
            return False
        if a > 0 and (taus[a - 1][i, j], t) not in inst.multi:
            return False
        return True

    def accepted():
        return any(taus[n - 1][last, j] in inst.acc for j in range(side))

    def go(pos, a):
        if pos == len(cells):
            return accepted()
        i, j = cells[pos]
        options = [words[a][j]] if i == 0 else inst.tiles
        for t in options:
            if fits(a, i, j, t):
                taus[a][i, j] = t
                nxt = (pos, a + 1) if a + 1 < n else (pos + 1, 0)
                if go(*nxt):
                    return True
                del taus[a][i, j]
        return False

    return go(0, 0)


def solve_amtp(inst: AMTPInstance, cap: int = DEFAULT_SEARCH_CAP) -> bool:
    """Evaluate: for all w1, exists w2, ..., exists wn, a solution exists.

    Quantifiers range over T0^(2^n); an empty domain makes a universal
    level true and an existential level false.
    """
    side = 2 ** inst.n
    words_per_level = len(inst.t0) ** side
    if words_per_level ** inst.n > cap:
        raise CapExceeded(f"AMTP game has {words_per_level}^{inst.n} word choices; raise --search-cap")
    words = list(itertools.product(inst.t0, repeat=side))

    def level(a, chosen):
        if a == inst.n:
            return _solution_exists(inst, chosen)
        branch = (level(a + 1, chosen + [w]) for w in words)
        return all(branch) if a % 2 == 0 else any(branch)

    return level(0, [])


def checkerboard() -> TilingInstance:
    pairs = {("a", "b"), ("b", "a")}
    return tiling_instance(["a", "b"], pairs, pairs, ["a"])
