"""Formula generators: nominals, counting, grids, multi-tiling formulas,
numbers on typed trees, lsr-partitions and the Tiling_k reduction.

Every generator draws its bound names from a `Names` counter, so output is
deterministic for a given counter.  Passing the same counter to several
generators keeps their bound names apart.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from typing import Optional, Sequence

from .syntax import (AX, EX, TRUE, Exists, Forall, Formula, Iff, Implies, P, conj, disj,
                     ex_n, exists_many, forall_many)
from .tiling import AMTPInstance, TilingInstance
from .trees import DEFAULT_TETRATION_CAP, TreeModel, bit_prop, tetration, tree, val_prop

SUCC, GT, EQ = "succ", "gt", "eq"
RELATIONS = (SUCC, GT, EQ)
HORIZONTAL, VERTICAL = "horizontal", "vertical"


class Names:
    """Counter handing out fresh bound names such as q1, x2, w3."""

    def __init__(self, start: int = 0):
        self.counter = start

    def fresh(self, prefix: str) -> str:
        self.counter += 1
        return f"{prefix}{self.counter}"


def _names(names):
    return Names() if names is None else names


# nominal toolkit ----------------------------------------------------------

def at(path: Sequence[str], f: Formula) -> Formula:
    """@_{x1}...@_{xd} f, each step being EX(x_i & .); the empty path gives f."""
    for x in reversed(list(path)):
        f = EX(P(x) & f)
    return f


def at_depth(x: str, k: int, f: Formula) -> Formula:
    """@^k_x f = EX^k(x & f)."""
    return ex_n(k, P(x) & f)


def bind(x: str, k: int, names: Optional[Names] = None) -> Formula:
    """x holds at exactly one node at distance k."""
    if k < 1:
        raise ValueError("bind needs k >= 1")
    q = _names(names).fresh("q")
    split = ex_n(k, P(x) & P(q)) & ex_n(k, P(x) & ~P(q))
    return ex_n(k, P(x)) & ~Exists(q, split)


def distinct_bind(xs: Sequence[str], k: int, names: Optional[Names] = None) -> Formula:
    """Each x_i names one node at distance k and the named nodes are pairwise distinct."""
    xs = list(xs)
    if len(set(xs)) != len(xs):
        raise ValueError("distinct_bind needs distinct names")
    names = _names(names)
    parts = [bind(x, k, names) for x in xs]
    parts += [~at_depth(a, k, P(b)) for a, b in combinations(xs, 2)]
    return conj(parts)


def hat(xs: Sequence[str], ys: Sequence[str], names: Optional[Names] = None) -> Formula:
    """Both paths are chains of depth-1 nominals; true for the empty pair."""
    names = _names(names)
    parts = []
    for path in (xs, ys):
        for i, x in enumerate(path):
            parts.append(at(path[:i], bind(x, 1, names)))
    return conj(parts)


def uni(props, names: Optional[Names] = None) -> Formula:
    """No two distinct children agree on every proposition of props."""
    props = sorted(props)
    if not props:
        raise ValueError("uni needs a nonempty set")
    names = _names(names)
    x, y = names.fresh("x"), names.fresh("y")
    agree = conj(Iff(at([x], P(p)), at([y], P(p))) for p in props)
    return forall_many([x, y], Implies(distinct_bind([x, y], 1, names), ~agree))


# counting children --------------------------------------------------------

@dataclass(frozen=True)
class Exactly:
    count: int
    body: Formula = TRUE


@dataclass(frozen=True)
class AtMostPow2:
    n: int


def exactly(i: int, psi: Formula, names: Optional[Names] = None) -> Formula:
    """Exactly i children satisfy psi."""
    names = _names(names)
    if i < 0:
        raise ValueError("count must be natural")
    if i == 0:
        return AX(~psi)
    if i == 1:
        q = names.fresh("q")
        return EX(psi) & ~Exists(q, EX(psi & P(q)) & EX(psi & ~P(q)))
    qs = [names.fresh("q") for _ in range(i)]
    some = disj(P(q) for q in qs)
    body = some if psi == TRUE else Iff(some, psi)
    return exists_many(qs, distinct_bind(qs, 1, names) & AX(body))


def count_children(spec, names: Optional[Names] = None) -> Formula:
    names = _names(names)
    if isinstance(spec, Exactly):
        return exactly(spec.count, spec.body, names)
    if isinstance(spec, AtMostPow2):
        if spec.n < 1:
            raise ValueError("AtMostPow2 needs n >= 1")
        ps = [names.fresh("q") for _ in range(spec.n)]
        return exists_many(ps, uni(ps, names))
    raise TypeError(f"unknown counting spec {spec!r}")


# grids ---------------------------------------------------------------------

def h_prop(i: int) -> str:
    return f"h{i}"


def v_prop(i: int) -> str:
    return f"v{i}"


def grid(n: int, names: Optional[Names] = None) -> Formula:
    """The full binary tree of depth 2n whose leaves carry pairwise distinct (h, v) bit vectors."""
    if n < 1:
        raise ValueError("grid needs n >= 1")
    names = _names(names)
    depth = 2 * n
    shape = [_ax_n(i, exactly(2, TRUE, names)) for i in range(depth)]
    x, y = names.fresh("x"), names.fresh("y")
    differ = disj(~Iff(at_depth(x, depth, P(h_prop(j))), at_depth(y, depth, P(h_prop(j))))
                  | ~Iff(at_depth(x, depth, P(v_prop(j))), at_depth(y, depth, P(v_prop(j))))
                  for j in range(n))
    keys = forall_many([x, y], Implies(distinct_bind([x, y], depth, names), differ))
    return conj(shape) & keys


def _ax_n(k: int, f: Formula) -> Formula:
    for _ in range(k):
        f = AX(f)
    return f


def neighbor(x: str, y: str, n: int, axis: str = HORIZONTAL, depth: Optional[int] = None) -> Formula:
    """y is the right (horizontal) or upper (vertical) neighbour of x on the grid leaves."""
    if axis not in (HORIZONTAL, VERTICAL):
        raise ValueError(f"unknown axis {axis!r}")
    depth = 2 * n if depth is None else depth
    step, keep = (h_prop, v_prop) if axis == HORIZONTAL else (v_prop, h_prop)

    def ax(f):
        return at_depth(x, depth, f)

    def ay(f):
        return at_depth(y, depth, f)

    same = conj(Iff(ax(P(keep(a))), ay(P(keep(a)))) for a in range(n))
    cases = []
    for i in range(n):
        cases.append(conj([ax(~P(step(i))), ay(P(step(i)))]
                          + [ax(P(step(a))) & ay(~P(step(a))) for a in range(i)]
                          + [Iff(ax(P(step(a))), ay(P(step(a)))) for a in range(i + 1, n)]))
    return same & disj(cases)


def grid_tree(n: int, extra=None) -> tuple:
    """Full binary tree of depth 2n; leaf number L sits at position (L >> n, L mod 2^n).

    `extra(i, j)` may return more labels for the leaf at (i, j).  Returns the
    tree and a map from positions to leaf nodes.
    """
    side = 2 ** n
    positions: dict = {}
    leaves = []
    for i in range(side):
        for j in range(side):
            lab = {h_prop(b) for b in range(n) if i >> b & 1} | {v_prop(b) for b in range(n) if j >> b & 1}
            if extra is not None:
                lab |= set(extra(i, j))
            leaves.append(((i, j), sorted(lab)))

    def build(level, chunk):
        if level == 2 * n:
            return chunk[0][1]
        half = len(chunk) // 2
        return ([], [build(level + 1, chunk[:half]), build(level + 1, chunk[half:])])

    t = tree(build(0, leaves))
    for v in range(t.size):
        if not t.children[v]:
            i, j = _leaf_position(t, v, n)
            positions[i, j] = v
    return t, positions


def _leaf_position(t: TreeModel, v: int, n: int):
    lab = t.labels[v]
    i = sum(1 << b for b in range(n) if h_prop(b) in lab)
    j = sum(1 << b for b in range(n) if v_prop(b) in lab)
    return i, j


# multi-tiling formulas -----------------------------------------------------

def tile_prop(tile: str, j: Optional[int] = None) -> str:
    return f"t_{tile}" if j is None else f"t_{tile}_{j}"


def _one_tile(tiles, j):
    ps = [P(tile_prop(t, j)) for t in tiles]
    return disj(ps) & conj(~(a & b) for a, b in combinations(ps, 2))


def _every_leaf(depth, conclusion, names, premise_extra=None):
    x = names.fresh("x")
    premise = bind(x, depth, names)
    if premise_extra is not None:
        premise = premise & at_depth(x, depth, premise_extra)
    return Forall(x, Implies(premise, at_depth(x, depth, conclusion)))


def grid_tiling(n: int, tiles, hori, verti, j: Optional[int] = None, names: Optional[Names] = None) -> dict:
    """cov, hori and verti over the leaves of the depth-2n grid, with tile props t_<tile>_<j>."""
    names = _names(names)
    depth = 2 * n

    def related(axis, rel):
        x, y = names.fresh("x"), names.fresh("y")
        premise = conj([bind(x, depth, names), bind(y, depth, names), neighbor(x, y, n, axis, depth)])
        pairs = disj(at_depth(x, depth, P(tile_prop(a, j))) & at_depth(y, depth, P(tile_prop(b, j)))
                     for a, b in sorted(rel))
        return forall_many([x, y], Implies(premise, pairs))

    cov = _every_leaf(depth, _one_tile(tiles, j), names)
    h, v = related(HORIZONTAL, hori), related(VERTICAL, verti)
    return {"cov": cov, "hori": h, "verti": v, "tiling": conj([cov, h, v])}


def amtp_components(inst: AMTPInstance, j: int, names: Optional[Names] = None) -> dict:
    """cov, hori, verti, tiling, init, acc, multi for copy j, and coinci as a function of j'."""
    names = _names(names)
    n = inst.n
    depth = 2 * n
    row0 = conj(~P(h_prop(a)) for a in range(n))
    last = conj(P(h_prop(a)) for a in range(n))
    out = grid_tiling(n, inst.tiles, inst.hori, inst.verti, j, names)
    out["init"] = _every_leaf(depth, _one_tile(inst.t0, j), names, row0)
    x = names.fresh("x")
    out["acc"] = Exists(x, bind(x, depth, names)
                        & at_depth(x, depth, last & disj(P(tile_prop(t, j)) for t in sorted(inst.acc))))
    out["multi"] = _every_leaf(depth, disj(P(tile_prop(a, j)) & P(tile_prop(b, j + 1)) for a, b in sorted(inst.multi)),
                               names)

    def coinci(j2):
        return _every_leaf(depth, disj(P(tile_prop(t, j)) & P(tile_prop(t, j2)) for t in inst.t0), names, row0)

    out["coinci"] = coinci
    return out


def amtp_reduction(inst: AMTPInstance, names: Optional[Names] = None) -> Formula:
    """grid, then alternating quantification over the first-row tiles of copies 1..n,
    then an existential guess of copies n+1..2n satisfying the game conditions."""
    n = inst.n
    if n % 2:
        raise ValueError("AMTP reduction needs an even n")
    names = _names(names)
    comps = {j: amtp_components(inst, j, names) for j in range(1, 2 * n + 1)}
    inner = conj([conj(comps[j]["tiling"] & comps[j]["coinci"](j - n) for j in range(n + 1, 2 * n + 1)),
                  conj(comps[j]["multi"] for j in range(n + 1, 2 * n)),
                  comps[2 * n]["acc"]])
    guessed = [tile_prop(t, j) for j in range(n + 1, 2 * n + 1) for t in inst.tiles]
    body = Implies(conj(comps[j]["init"] for j in range(1, n + 1)), exists_many(guessed, inner))
    for j in range(n, 0, -1):
        level = [tile_prop(t, j) for t in inst.t0]
        body = (forall_many if j % 2 else exists_many)(level, body)
    return grid(n, names) & body


# numbers on typed trees ----------------------------------------------------

@dataclass(frozen=True)
class TypeFamily:
    type: Formula
    first: Formula
    last: Formula
    unique: Formula
    compl: Formula


def _bits(n):
    return [P(bit_prop(i)) for i in reversed(range(n))]


def type_family(k: int, n: int, names: Optional[Names] = None,
                cap: int = DEFAULT_TETRATION_CAP) -> TypeFamily:
    """type_k, first_k, last_k, unique_k, compl_k over the bits p_{n-1}..p_0."""
    tetration(k, n, cap)
    names = _names(names)
    fam = TypeFamily(TRUE, conj(~b for b in _bits(n)), conj(_bits(n)), TRUE, TRUE)
    for level in range(1, k + 1):
        x, y = names.fresh("x"), names.fresh("y")
        unique = forall_many([x, y], Implies(distinct_bind([x, y], 1, names),
                                             ~compare(level, 1, n, [x], [y], EQ, names)))
        x, y = names.fresh("x"), names.fresh("y")
        compl = Forall(x, Implies(bind(x, 1, names) & at([x], ~fam.last),
                                  Exists(y, bind(y, 1, names) & compare(level, 1, n, [x], [y], SUCC, names))))
        typ = conj([AX(fam.type), EX(fam.first), unique, compl])
        val = P(val_prop(level - 1))
        fam = TypeFamily(typ, AX(~val), AX(val), unique, compl)
    return fam


def compare(k: int, d: int, n: int, xs: Sequence[str], ys: Sequence[str], rel: str,
            names: Optional[Names] = None) -> Formula:
    """Compare the numbers of the type-(k-d) nodes reached by the nominal paths xs and ys."""
    xs, ys = list(xs), list(ys)
    if len(xs) != d or len(ys) != d:
        raise ValueError(f"paths must have length d={d}")
    if not 1 <= d <= k:
        raise ValueError("compare needs 1 <= d <= k")
    if rel not in RELATIONS:
        raise ValueError(f"unknown relation {rel!r}")
    names = _names(names)
    if rel == EQ:
        return ~compare(k, d, n, xs, ys, GT, names) & ~compare(k, d, n, ys, xs, GT, names)
    if k == d:
        return _compare_bits(n, xs, ys, rel)
    val = P(val_prop(k - d - 1))
    tag = names.fresh("")
    l, s, r = f"lft{tag}", f"sel{tag}", f"rgt{tag}"
    parts = [lsr(k, d, n, xs, l, s, r, names), lsr(k, d, n, ys, l, s, r, names),
             _left(k, d, n, xs, ys, l, val, names) & _left(k, d, n, ys, xs, l, val, names),
             at(xs, AX(Implies(P(s), ~val))) & at(ys, AX(Implies(P(s), val)))]
    if rel == SUCC:
        parts.append(at(xs, AX(Implies(P(r), val))) & at(ys, AX(Implies(P(r), ~val))))
        return exists_many([l, s, r], conj(parts))
    return exists_many([s, l, r], conj(parts))


def _compare_bits(n, xs, ys, rel):
    def ax(f):
        return at(xs, f)

    def ay(f):
        return at(ys, f)

    p = [P(bit_prop(i)) for i in range(n)]
    cases = []
    for i in range(n):
        higher = conj(Iff(ax(p[j]), ay(p[j])) for j in range(i + 1, n))
        if rel == SUCC:
            cases.append(conj([ax(~p[i] & conj(p[j] for j in range(i))),
                               ay(conj(~p[j] for j in range(i)) & p[i]),
                               higher]))
        else:
            cases.append(conj([ay(p[i]), ax(~p[i]), higher]))
    return disj(cases)


def _left(k, d, n, xs, ys, l, val, names):
    w, w2 = names.fresh("w"), names.fresh("w_")
    here = at(xs, bind(w, 1, names) & at([w], P(l)))
    there = at(ys, bind(w2, 1, names) & at([w2], P(l)))
    same = compare(k, d + 1, n, xs + [w], ys + [w2], EQ, names)
    return Forall(w, Implies(here, Exists(w2, conj([there, same, Iff(at(xs + [w], val), at(ys + [w2], val))]))))


def lsr(k: int, d: int, n: int, xs: Sequence[str] = (), l: str = "lft", s: str = "sel", r: str = "rgt",
        names: Optional[Names] = None) -> Formula:
    """Children of the node at xs split into l, s, r with exactly one s and r < s < l by number."""
    xs = list(xs)
    if not 0 <= d < k or len(xs) != d:
        raise ValueError("lsr needs 0 <= d < k and a path of length d")
    names = _names(names)
    L, S, R = P(l), P(s), P(r)
    part = conj([S | L | R, ~(S & L), ~(S & R), ~(L & R)])
    w, w2 = names.fresh("w"), names.fresh("w_")
    ordered = Implies(distinct_bind([w, w2], 1, names)
                      & ((at([w], S) & at([w2], R)) | (at([w], L) & at([w2], S))),
                      compare(k - d, 1, n, [w2], [w], GT, names))
    return conj([at(xs, AX(part)), at(xs, exactly(1, S, names)), at(xs, forall_many([w, w2], ordered))])


def number_is(n: int, value: int) -> Formula:
    """The bits p_{n-1}..p_0 encode value."""
    return conj(P(bit_prop(i)) if value >> i & 1 else ~P(bit_prop(i)) for i in reversed(range(n)))


def nb_eq_tower(k: int, n: int) -> Formula:
    """A type-k node has number t(k, n)."""
    if k < 1:
        raise ValueError("nb_eq_tower is defined for k >= 1")
    f = AX(Iff(P(val_prop(0)), number_is(n, n)))
    for level in range(2, k + 1):
        f = AX(Iff(P(val_prop(level - 1)), f))
    return f


# the Tiling_k reduction ---------------------------------------------------

def tiling_reduction(inst: TilingInstance, k: int, names: Optional[Names] = None,
                     cap: int = DEFAULT_TETRATION_CAP) -> Formula:
    """Satisfiable iff the instance tiles the t(k,n) x t(k,n) grid with its initial row."""
    if k < 1:
        raise ValueError("tiling_reduction needs k >= 1")
    names = _names(names)
    n = inst.n
    fam = type_family(k + 1, n, names, cap)
    first_k = type_family(k, n, names, cap).first
    l, s, r = "lft", "sel", "rgt"
    tiles = [P(tile_prop(t)) for t in inst.tiles]

    def pos(x):
        return bind(x, 1, names) & at([x], P(r))

    x, y = names.fresh("x"), names.fresh("y")
    cov = forall_many([x, y], Implies(conj([pos(x), at([x], bind(y, 1, names))]),
                                      at([x, y], disj(tiles) & conj(~(a & b) for a, b in combinations(tiles, 2)))))

    def matching(rel, horizontal):
        x, x2, y, y2 = names.fresh("x"), names.fresh("x_"), names.fresh("y"), names.fresh("y_")
        premise = [pos(x), pos(x2), at([x], bind(y, 1, names)), at([x2], bind(y2, 1, names))]
        if horizontal:
            premise += [compare(k + 1, 1, n, [x], [x2], SUCC, names),
                        compare(k + 1, 2, n, [x, y], [x2, y2], EQ, names)]
        else:
            premise += [compare(k + 1, 1, n, [x], [x2], EQ, names),
                        compare(k + 1, 2, n, [x, y], [x2, y2], SUCC, names)]
        pairs = disj(at([x, y], P(tile_prop(a))) & at([x2, y2], P(tile_prop(b))) for a, b in sorted(rel))
        return forall_many([x, x2, y, y2], Implies(conj(premise), pairs))

    x = names.fresh("x")
    rows = []
    for i, c in enumerate(inst.init):
        tag = names.fresh("")
        l2, s2, r2 = f"lft{tag}", f"sel{tag}", f"rgt{tag}"
        rows.append(exists_many([l2, s2, r2], conj([lsr(k, 0, n, [], l2, s2, r2, names),
                                                    exactly(i, P(r2), names),
                                                    EX(P(s2) & P(tile_prop(c)))])))
    init = Forall(x, Implies(bind(x, 1, names) & at([x], first_k), at([x], conj(rows))))
    body = conj([lsr(k + 1, 0, n, [], l, s, r, names), EX(P(s) & nb_eq_tower(k, n)),
                 cov, init, matching(inst.hori, True), matching(inst.verti, False)])
    return fam.type & exists_many([l, s, r], body)


# canonical witnesses ------------------------------------------------------

def type_spec(k: int, n: int, number: int = 0, extra=None, path=(), cap: int = DEFAULT_TETRATION_CAP):
    """Nested tree spec of a type-k node with the given number, children in number order.

    `extra(path)` may add labels; `path` lists the child numbers from the top.
    """
    if k == 0:
        lab = {bit_prop(i) for i in range(n) if number >> i & 1}
        kids = []
    else:
        size = tetration(k, n, cap)
        if number >= 2 ** size:
            raise ValueError(f"number {number} too large for type {k}")
        lab = set()
        kids = []
        for i in range(size):
            label, sub = type_spec(k - 1, n, i, extra, path + (i,), cap)
            if number >> i & 1:
                label = sorted(set(label) | {val_prop(k - 1)})
            kids.append((label, sub))
    if extra is not None:
        lab |= set(extra(path))
    return (sorted(lab), kids)


def type_tree(k: int, n: int, number: int = 0, extra=None, cap: int = DEFAULT_TETRATION_CAP) -> TreeModel:
    return tree(type_spec(k, n, number, extra, (), cap))


def tiling_witness(inst: TilingInstance, k: int, tau, cap: int = DEFAULT_TETRATION_CAP) -> TreeModel:
    """Type-(k+1) root whose child i has tile tau(i, j) on its child j; evaluate under SelfLoop."""
    side = tetration(k, inst.n, cap)
    tau = dict(tau) if isinstance(tau, dict) else {(i, j): tau[i][j] for i in range(side) for j in range(side)}

    def extra(path):
        if len(path) == 2 and path in tau:
            return {tile_prop(tau[path])}
        return set()

    return type_tree(k + 1, inst.n, 0, extra, cap)
