"""The verification suites: each one checks a formula family against an
independent semantic oracle over an exhaustive or seeded-random pool.

Every suite returns a SuiteResult.  Checks made while a suite runs are
recorded, and the backend-agreement suite replays them with the exhaustive
backend.
"""

from __future__ import annotations

import hashlib
import itertools
import random
import time
from dataclasses import dataclass, field
from typing import Callable, Optional

from . import constructions as C
from . import syntax as S
from . import tiling as TL
from .checker import EXHAUSTIVE, PRUNED, check, check_many, exists_closure, forall_closure, recording, to_pnf
from .sat import sat_ex_bounded, sat_finite_tree
from .syntax import AX, EX, FALSE, TRUE, And, Exists, Forall, Formula, Iff, Implies, Not, Or, P
from .translations import (decorate_finite, decorate_layers, ex_to_ef, ex_to_exef_finite, is_k_layered,
                           layer_prop, shape_formula)
from .trees import (SELF_LOOP, STRICT, Completed, TreeModel, apply_frontier, bit_prop, bounded_depth_shapes,
                    chain_pad, exact_depth_shapes, from_nested, labeled_trees, node_number, node_type, shape_tree,
                    shapes_by_size, tree)

DEFAULT_SEED = 2024
SAMPLE_COST = 10 ** 6


@dataclass
class SuiteResult:
    number: int
    name: str
    passed: int = 0
    total: int = 0
    seconds: float = 0.0
    limit: Optional[float] = None
    failures: list = field(default_factory=list)
    notes: list = field(default_factory=list)

    def expect(self, ok: bool, what) -> None:
        """Count one check; `what` describes it, and may be a callable that builds the description."""
        self.total += 1
        if ok:
            self.passed += 1
        elif len(self.failures) < 20:
            self.failures.append(what() if callable(what) else what)

    @property
    def ok(self) -> bool:
        in_time = self.limit is None or self.seconds <= self.limit
        return self.total > 0 and self.passed == self.total and in_time

    def line(self) -> str:
        limit = "" if self.limit is None else f" (limit {self.limit:.0f}s)"
        status = "PASS" if self.ok else "FAIL"
        return f"[{status}] {self.number}. {self.name}: {self.passed}/{self.total} in {self.seconds:.1f}s{limit}"


# random formulas -------------------------------------------------------------

def random_ex_formula(rng: random.Random, max_depth: int = 2, props=("a", "b"), max_quantifiers: int = 2,
                      size: int = 7) -> Formula:
    """A random EX-fragment formula with md <= max_depth and at most max_quantifiers quantifiers.

    Bound variables are named q1, q2, ... and are always used in their body.
    """
    budget = [max_quantifiers]
    counter = itertools.count(1)

    def atom(scope):
        names = list(props) + list(scope)
        r = rng.random()
        if r < 0.05:
            return TRUE
        if r < 0.1:
            return FALSE
        return P(rng.choice(names))

    def go(depth, size, scope):
        if size <= 1:
            return atom(scope)
        ops = ["not", "and", "or", "implies"]
        if depth > 0:
            ops += ["ex", "ax", "ex", "ax"]
        if budget[0] > 0:
            ops += ["exists", "forall"]
        op = rng.choice(ops)
        if op == "not":
            return Not(go(depth, size - 1, scope))
        if op in ("ex", "ax"):
            return (EX if op == "ex" else AX)(go(depth - 1, size - 1, scope))
        if op in ("exists", "forall"):
            budget[0] -= 1
            var = f"q{next(counter)}"
            body = go(depth, size - 1, scope + [var])
            if var not in S.free_props(body):
                body = And(P(var), body) if rng.random() < 0.5 else Or(P(var), body)
            return (Exists if op == "exists" else Forall)(var, body)
        left = rng.randint(1, size - 2) if size > 2 else 1
        a = go(depth, left, scope)
        b = go(depth, max(1, size - 1 - left), scope)
        return {"and": And, "or": Or, "implies": Implies}[op](a, b)

    return go(max_depth, size, [])


def formula_pool(seed: int, count: int, max_quantifiers: int = 2, max_depth: int = 2, props=("a", "b")) -> list:
    rng = random.Random(seed)
    return [random_ex_formula(rng, max_depth, props, max_quantifiers, rng.randint(3, 9)) for _ in range(count)]


def _holds(t, mode, f, v=None) -> bool:
    if isinstance(t, Completed):
        return check(t, mode, t.tree.root if v is None else v, f, PRUNED).verdict
    return check(t, mode, t.root if v is None else v, f, PRUNED).verdict


def _closure_sat(f, shapes, mode) -> bool:
    closed = exists_closure(f, S.free_props(f))
    return any(_holds(shape_tree(s), mode, closed) for s in shapes)


def _timed(number, name, limit, body: Callable[[SuiteResult], None]) -> SuiteResult:
    res = SuiteResult(number, name, limit=limit)
    start = time.perf_counter()
    body(res)
    res.seconds = time.perf_counter() - start
    return res


# 1. nominal toolkit --------------------------------------------------------

def _with(t: TreeModel, v: int, p: str) -> bool:
    return p in t.labels[v]


def _steps(c: Completed, v: int, k: int) -> list:
    """Nodes reachable from v in exactly k steps of the completed structure."""
    level = {v}
    for _ in range(k):
        level = {u for w in level for u in c.succ[w]}
    return sorted(level)


def suite_nominals(seed: int = DEFAULT_SEED) -> SuiteResult:
    # built from equal name counters so that the binds inside distinct_bind are
    # the same formulas as the standalone ones and get evaluated once
    distinct = {k: C.distinct_bind(["x", "y"], k, C.Names()) for k in (1, 2)}
    binds = {(p, k): C.bind(p, k, C.Names(i)) for i, p in enumerate("xy") for k in (1, 2)}
    chains = [C.at(["x", "y"], P("x")), C.at(["x", "y"], ~P("x"))]
    deep = [C.at_depth("x", 2, P("y")), C.at_depth("x", 2, ~P("y"))]
    plain = list(binds.values()) + list(distinct.values())

    def body(res):
        for t in labeled_trees(shapes_by_size(7, max_depth=2), ["x", "y"]):
            c = apply_frontier(t, SELF_LOOP)
            level = {k: _steps(c, t.root, k) for k in (1, 2)}
            marked = {(p, k): [v for v in level[k] if _with(t, v, p)] for p in "xy" for k in (1, 2)}
            want = [len(marked[key]) == 1 for key in binds]
            for k in distinct:
                mx, my = marked["x", k], marked["y", k]
                want.append(len(mx) == 1 and len(my) == 1 and mx != my)
            fs = list(plain)
            # at-chain x, y: assumes x names a successor and y names a successor of that one
            if len(marked["x", 1]) == 1:
                ys = [w for w in c.succ[marked["x", 1][0]] if _with(t, w, "y")]
                if len(ys) == 1:
                    fs += chains
                    want += [_with(t, ys[0], "x"), not _with(t, ys[0], "x")]
            if len(marked["x", 2]) == 1:
                fs += deep
                y_there = _with(t, marked["x", 2][0], "y")
                want += [y_there, not y_there]
            got = check_many(c, SELF_LOOP, t.root, fs)
            for f, g, w in zip(fs, got, want):
                res.expect(g == w, lambda: (S.render(f), t.canonical()))

    return _timed(1, "nominal toolkit", 30, body)


# 2. prenex normal form ----------------------------------------------------

def suite_pnf(seed: int = DEFAULT_SEED, count: int = 200) -> SuiteResult:
    def body(res):
        for f in formula_pool(seed, count):
            g = to_pnf(f)
            props = S.free_props(f)
            claim = forall_closure(Iff(f, g), props)
            same = all(_holds(shape_tree(s), SELF_LOOP, claim)
                       for s in exact_depth_shapes(2, S.modal_depth(f)))
            ok = S.is_prenex(g) and S.quantifier_count(g) <= S.length(f) and same
            res.expect(ok, S.render(f))

    return _timed(2, "prenex normal form", 60, body)


# 3. small models and the bounded decision procedure ------------------------

# formulas whose verdict depends on the branching bound
BRANCHING_SENSITIVE = ["EX a & EX ~a", "exists q1. (EX q1 & EX ~q1)", "AX (EX a & EX ~a)",
                       "forall q1. (EX q1 | EX ~q1) & EX (a & EX b & EX ~b)"]


def suite_small_model(seed: int = DEFAULT_SEED, count: int = 100) -> SuiteResult:
    """sat_ex_bounded searches trees whose branches all have length md(f); the
    oracle searches every tree of height <= md(f)+1, so for N = 1 it ranges over
    chains of every length while the procedure looks at a single chain."""
    def body(res):
        for f in formula_pool(seed + 1, count) + [S.parse(x) for x in BRANCHING_SENSITIVE]:
            for n in (1, 2):
                out = sat_ex_bounded(f, n)
                oracle = _closure_sat(f, bounded_depth_shapes(n, S.modal_depth(f) + 1), SELF_LOOP)
                witness_ok = (not out.is_sat) or _holds(out.witness, SELF_LOOP, f)
                res.expect(out.is_sat == oracle and witness_ok, (n, S.render(f)))

    return _timed(3, "small models and bounded satisfiability", 60, body)


# 4. counting: grids and types ---------------------------------------------------

def _grid_semantics(t: TreeModel) -> bool:
    root = t.root
    if len(t.children[root]) != 2 or any(len(t.children[c]) != 2 for c in t.children[root]):
        return False
    keys = [(C.h_prop(0) in t.labels[v], C.v_prop(0) in t.labels[v]) for v in t.nodes_at_depth(2)]
    return len(set(keys)) == 4


def type2_mutations() -> list:
    """Nested specs of n=1 trees close to the canonical type-2 tree, none of type 2."""
    base = C.type_spec(2, 1)

    def copy():
        return (list(base[0]), [(list(l), [(list(gl), list(gk)) for gl, gk in kids]) for l, kids in base[1]])

    def edit(fn):
        s = copy()
        fn(s)
        return s

    def flip(labels, p):
        labels.remove(p) if p in labels else labels.append(p)

    val, bit = "val1", "p0"
    return [
        ("drop a grandchild", edit(lambda s: s[1][0][1].pop())),
        ("extra grandchild", edit(lambda s: s[1][0][1].append(([bit], [])))),
        ("duplicate child", edit(lambda s: s[1].append(copy()[1][1]))),
        ("drop a child", edit(lambda s: s[1].pop())),
        ("grandchild bits collide", edit(lambda s: flip(s[1][2][1][0][0], bit))),
        ("two children share a number", edit(lambda s: flip(s[1][3][1][0][0], "val0"))),
        ("child numbers miss zero", edit(lambda s: s[1][0][1][1][0].append("val0"))),
        ("child replaced by a leaf", edit(lambda s: s[1].__setitem__(1, ([], [])))),
        ("grandchildren both bit 1", edit(lambda s: s[1][0][1][0][0].append(bit))),
        ("five children", edit(lambda s: s[1].append(([], [([], []), ([bit], [])])))),
        ("only two children", edit(lambda s: s[1].__delitem__(slice(2, 4)))),
        ("all children number 3", edit(lambda s: [l.append("val0") for _, kids in s[1] for l, _ in kids])),
    ]


def suite_counting(seed: int = DEFAULT_SEED) -> SuiteResult:
    def body(res):
        g = C.grid(1, C.Names())
        leaf_labels = lambda depth, lab: depth == 2 or not lab
        for t in labeled_trees(bounded_depth_shapes(3, 2), [C.h_prop(0), C.v_prop(0)], leaf_labels):
            res.expect(_holds(t, SELF_LOOP, g) == _grid_semantics(t), lambda: ("grid", t.canonical()))
        fam1 = C.type_family(1, 1, C.Names())
        for t in labeled_trees(bounded_depth_shapes(3, 2), ["p0"]):
            res.expect(_holds(t, SELF_LOOP, fam1.type) == node_type(t, t.root, 1, 1), lambda: ("type1", t.canonical()))
        for number in range(4):
            t = C.type_tree(1, 1, number)
            res.expect(_holds(t, SELF_LOOP, fam1.type), ("type1 canonical", number))
            res.expect(_holds(t, SELF_LOOP, fam1.first) == (number == 0), ("first1", number))
            res.expect(_holds(t, SELF_LOOP, fam1.last) == (number == 3), ("last1", number))
        fam2 = C.type_family(2, 1, C.Names())
        t = C.type_tree(2, 1)
        res.expect(_holds(t, SELF_LOOP, fam2.type), "type2 canonical")
        for name, spec in type2_mutations():
            m = tree(spec)
            res.expect(not node_type(m, m.root, 2, 1) and not _holds(m, SELF_LOOP, fam2.type), ("type2", name))

    return _timed(4, "grids and types", 60, body)


# 5. comparisons and lsr-partitions -----------------------------------------------

def _bits_labels(n, value):
    return [bit_prop(i) for i in range(n) if value >> i & 1]


def _expected(rel, a, b):
    return {C.SUCC: b == a + 1, C.GT: a < b, C.EQ: a == b}[rel]


def comparison_cases():
    """(k, d, n, xs, ys, tree, a, b): x/y paths lead to nodes with numbers a and b."""
    for n in (1, 2):
        for a in range(2 ** n):
            for b in range(2 ** n):
                kids = [(["x"] + _bits_labels(n, a), []), (["y"] + _bits_labels(n, b), [])]
                yield 1, 1, n, ["x"], ["y"], tree(([], kids)), a, b
                if a == b:
                    yield 1, 1, n, ["x"], ["y"], tree(([], [(["x", "y"] + _bits_labels(n, a), [])])), a, b
    for a in range(2):
        for b in range(2):
            deep = [(["x1"], [(["x2"] + _bits_labels(1, a), [])]), (["y1"], [(["y2"] + _bits_labels(1, b), [])])]
            yield 2, 2, 1, ["x1", "x2"], ["y1", "y2"], tree(([], deep)), a, b
    for a in range(4):
        for b in range(4):
            xa = C.type_spec(1, 1, a, lambda path: ["x"] if path == () else [])
            yb = C.type_spec(1, 1, b, lambda path: ["y"] if path == () else [])
            yield 2, 1, 1, ["x"], ["y"], tree(([], [xa, yb])), a, b
            if a == b:
                both = C.type_spec(1, 1, a, lambda path: ["x", "y"] if path == () else [])
                yield 2, 1, 1, ["x"], ["y"], tree(([], [both])), a, b


LSR = ("lft", "sel", "rgt")


def _lsr_semantics(t: TreeModel, v: int, level: int, n: int) -> bool:
    """Exactly one of lft/sel/rgt per child, exactly one sel, and rgt < sel < lft by number."""
    kids = t.children[v]
    marks = [[m for m in LSR if m in t.labels[c]] for c in kids]
    if any(len(m) != 1 for m in marks):
        return False
    if sum(m == ["sel"] for m in marks) != 1:
        return False
    num = {c: node_number(t, c, level, n) for c in kids}
    for c, mc in zip(kids, marks):
        for c2, mc2 in zip(kids, marks):
            if (mc, mc2) in ((["lft"], ["sel"]), (["sel"], ["rgt"])) and not num[c] > num[c2]:
                return False
    return True


def lsr_cases():
    """(k, d, xs, tree, node) for lsr at n = 1 on every labeling of the partitioned children by lft/sel/rgt."""
    marks = [list(s) for r in range(4) for s in itertools.combinations(LSR, r)]
    for number in range(4):
        for combo in itertools.product(marks, repeat=2):
            spec = C.type_spec(1, 1, number)
            spec = (spec[0], [(sorted(lab + list(m)), kids) for (lab, kids), m in zip(spec[1], combo)])
            yield 1, 0, [], tree(spec), 0
    base = C.type_spec(2, 1)
    for combo in itertools.product(marks, repeat=4):
        spec = (base[0], [(sorted(lab + list(m)), kids) for (lab, kids), m in zip(base[1], combo)])
        yield 2, 0, [], tree(spec), 0
    for i in range(4):
        for combo in itertools.product(marks, repeat=2):
            kids = []
            for j, (lab, sub) in enumerate(base[1]):
                if j == i:
                    lab = lab + ["x"]
                    sub = [(sorted(gl + list(m)), gk) for (gl, gk), m in zip(sub, combo)]
                kids.append((sorted(lab), sub))
            t = tree((base[0], kids))
            target = [c for c in t.children[t.root] if "x" in t.labels[c]][0]
            yield 2, 1, ["x"], t, target


def suite_comparison(seed: int = DEFAULT_SEED) -> SuiteResult:
    def body(res):
        for k, d, n, xs, ys, t, a, b in comparison_cases():
            c = apply_frontier(t, SELF_LOOP)
            for rel in C.RELATIONS:
                f = C.compare(k, d, n, xs, ys, rel, C.Names())
                res.expect(_holds(c, SELF_LOOP, f) == _expected(rel, a, b), (k, d, n, rel, a, b))
        for k, d, xs, t, v in lsr_cases():
            f = C.lsr(k, d, 1, xs, names=C.Names())
            res.expect(_holds(t, SELF_LOOP, f) == _lsr_semantics(t, v, k - d - 1, 1), lambda: ("lsr", k, d, t.canonical()))

    return _timed(5, "comparisons and lsr-partitions", 60, body)


# 6. tilings ------------------------------------------------------------------

def suite_tiling(seed: int = DEFAULT_SEED) -> SuiteResult:
    tiles = ["a", "b"]
    pairs = list(itertools.product(tiles, repeat=2))
    subsets = [frozenset(p for i, p in enumerate(pairs) if mask >> i & 1) for mask in range(16)]

    def body(res):
        grid_t, _ = C.grid_tree(1)
        c = apply_frontier(grid_t, SELF_LOOP)
        for hori in subsets:
            for verti in subsets:
                inst = TL.tiling_instance(tiles, hori, verti, ["a"])
                exists = next(TL.all_tilings(inst, 2), None) is not None
                comps = C.grid_tiling(1, tiles, hori, verti, 1, C.Names())
                claim = S.exists_many([C.tile_prop(t, 1) for t in tiles], comps["tiling"])
                res.expect(_holds(c, SELF_LOOP, claim) == exists, (sorted(hori), sorted(verti)))
        inst = TL.checkerboard()
        phi = C.tiling_reduction(inst, 1, C.Names())
        tau = TL.solve_tiling(inst, 1)
        res.expect(tau is not None and _holds(C.tiling_witness(inst, 1, tau), SELF_LOOP, phi), "checkerboard")

    return _timed(6, "tilings and the grid formulas", 300, body)


# 7. translations -------------------------------------------------------------

FINITE_BOUND = 6


def layered_trees(max_size: int = 9):
    """Every tree with at most max_size nodes where each node has exactly one
    of layer_m1, layer0, layer1 and every leaf has layer_m1."""
    ys = [layer_prop(i) for i in (-1, 0, 1)]

    def forms(shape):
        kids = [forms(k) for k in shape[1]]
        labels = [layer_prop(-1)] if not shape[1] else ys
        out = []
        groups: dict = {}
        for k, f in zip(shape[1], kids):
            groups.setdefault(k, [f, 0])[1] += 1
        choices = [list(itertools.combinations_with_replacement(f, cnt)) for f, cnt in groups.values()]
        for combo in itertools.product(*choices):
            sub = tuple(sorted(x for part in combo for x in part))
            for lab in labels:
                out.append(((lab,), sub))
        return out

    for s in shapes_by_size(max_size):
        for t in forms(s):
            yield from_nested(t)


def layer_mutations():
    """Trees breaking condition (a): a node with two layer labels or none."""
    yield tree((["layer1", "layer0"], [(["layer0"], [["layer_m1"]])]))
    yield tree((["layer1"], [([], [["layer_m1"]])]))
    yield tree((["layer1"], [(["layer0"], [["layer_m1", "layer0"]])]))
    yield tree((["layer1"], [(["layer0", "layer_m1"], [["layer_m1"]])]))


def suite_translations(seed: int = DEFAULT_SEED, count: int = 50) -> SuiteResult:
    def body(res):
        pool = formula_pool(seed + 2, count, max_quantifiers=1)
        for f in pool:
            k = S.modal_depth(f)
            g = ex_to_exef_finite(f)
            plain = sat_finite_tree(f, FINITE_BOUND, STRICT)
            moved = sat_finite_tree(g, FINITE_BOUND, STRICT)
            ok = plain.is_sat == moved.is_sat
            if plain.is_sat:
                ok = ok and _holds(decorate_finite(plain.witness, k), STRICT, g)
            res.expect(ok, ("finite", S.render(f)))
            out = sat_ex_bounded(f, 2)
            if out.is_sat:
                t = decorate_layers(out.witness, k)
                h = ex_to_ef(f)
                verdicts = [_holds(t, m, h) for m in (SELF_LOOP, chain_pad(1), chain_pad(2), chain_pad(3))]
                res.expect(all(verdicts) and is_k_layered(t, k).verdict, ("ef", S.render(f), verdicts))
        shape1 = shape_formula(1)
        for t in itertools.chain(layered_trees(9), layer_mutations()):
            res.expect(_holds(t, SELF_LOOP, shape1) == is_k_layered(t, 1).verdict, lambda: ("shape", t.canonical()))

    return _timed(7, "translations", 300, body)


# 8. backend agreement ------------------------------------------------------------

def exhaustive_cost(f: Formula, nodes: int) -> int:
    """Rough count of labelings the exhaustive backend visits: 2^nodes per nested quantifier."""
    if isinstance(f, (Exists, Forall)):
        return 2 ** nodes * max(1, exhaustive_cost(f.body, nodes))
    parts = [exhaustive_cost(g, nodes) for g in S.children(f)]
    if not parts:
        return 0
    total = sum(parts)
    if isinstance(f, S.UNARY_TEMPORAL) and total:
        total *= nodes  # an inner quantifier is re-evaluated at every node below
    return total


def _descend(st: Completed, mode, v: int, f: Formula, rng: random.Random):
    """A random subproblem of (v, f): pick an operand, a reachable explicit node, or a labeling."""
    t = st.tree
    if isinstance(f, (Exists, Forall)):
        nodes = [u for u in range(st.explicit) if rng.random() < 0.5]
        return apply_frontier(t.relabel(f.var, nodes), mode), v, f.body
    kids = S.children(f)
    if not kids:
        return None
    if isinstance(f, (S.EX, S.AX)):
        succ = [u for u in st.succ[v] if u < st.explicit]
        return (st, rng.choice(succ), f.arg) if succ else None
    if isinstance(f, S.UNARY_TEMPORAL):
        below = [v] + [u for u in t.descendants(v)]
        return st, rng.choice(below), f.arg
    return st, v, rng.choice(kids)


def suite_backends(log: list, seed: int = DEFAULT_SEED, samples: int = 200) -> SuiteResult:
    """Replay recorded pruned checks with the exhaustive backend; costly ones are sampled as random subproblems."""
    def body(res):
        rng = random.Random(seed)
        costly = []
        seen = set()
        for st, mode, v, f, backend, verdict in log:
            if backend != PRUNED:
                continue
            key = (id(st), v, f)
            if key in seen:
                continue
            seen.add(key)
            if exhaustive_cost(f, st.explicit) <= SAMPLE_COST:
                res.expect(check(st, mode, v, f, EXHAUSTIVE).verdict == verdict, S.render(f)[:200])
            else:
                costly.append((st, mode, v, f))
        picked = rng.sample(costly, min(samples, len(costly)))
        skipped = 0
        for st, mode, v, f in picked:
            while exhaustive_cost(f, st.explicit) > SAMPLE_COST:
                step = _descend(st, mode, v, f, rng)
                if step is None:
                    break
                st, v, f = step
            if exhaustive_cost(f, st.explicit) > SAMPLE_COST:
                skipped += 1
                continue
            same = check(st, mode, v, f, EXHAUSTIVE).verdict == check(st, mode, v, f, PRUNED).verdict
            res.expect(same, ("sampled", S.render(f)[:200]))
        res.notes.append(f"{len(costly)} costly checks, {len(picked)} sampled, {skipped} left undecomposed")

    return _timed(8, "backend agreement", None, body)


# 9. alternating multi-tiling ----------------------------------------------------

def amtp_cases():
    """Hand-analysed n = 2 instances with their expected answers."""
    one = dict(tiles=["a"], hori=[("a", "a")], verti=[("a", "a")], t0=["a"], acc=["a"], multi=[("a", "a")])
    two = ["a", "b"]
    total = list(itertools.product(two, repeat=2))
    swap = [("a", "b"), ("b", "a")]
    same = [("a", "a"), ("b", "b")]
    cases = [
        ("single tile, total relations", one, True),
        ("no accepting tile", dict(one, acc=[]), False),
        ("empty first-row alphabet", dict(one, t0=[]), True),
        ("no multi pairs", dict(one, multi=[]), False),
        ("no horizontal pairs", dict(one, hori=[]), False),
        ("no vertical pairs", dict(one, verti=[]), False),
        ("accept on a later row", dict(tiles=two, hori=total, verti=total, t0=["a"], acc=["b"], multi=total), True),
        ("columns frozen to a", dict(tiles=two, hori=[("a", "a"), ("b", "b")], verti=total, t0=["a"], acc=["b"],
                                     multi=total), False),
        ("rows alternate", dict(tiles=two, hori=swap, verti=total, t0=["a"], acc=["b"], multi=total), True),
        ("multi forbids equal first rows", dict(tiles=two, hori=swap, verti=total, t0=["a"], acc=["b"], multi=swap),
         False),
        # two first-row tiles: the quantified words range over 16 values each
        ("first rows must respect verti", dict(tiles=two, hori=total, verti=same, t0=two, acc=["a"], multi=total),
         False),
        ("complement copy ends on w1", dict(tiles=two, hori=swap, verti=total, t0=two, acc=["a"], multi=swap),
         False),
        ("complement copy, any accepting tile", dict(tiles=two, hori=swap, verti=total, t0=two, acc=two, multi=swap),
         True),
        ("constant columns, chosen w2", dict(tiles=two, hori=same, verti=total, t0=two, acc=["a"], multi=total),
         True),
    ]
    return [(name, TL.amtp_instance(2, **kw), want) for name, kw, want in cases]


# length and sha256 of the rendered reduction for the single-tile instance
AMTP_GOLDEN = (4899, "575b252ed505f07621da93548f309d5e686bf246a3220152636afdffd2f2cd34")


def suite_amtp(seed: int = DEFAULT_SEED) -> SuiteResult:
    def body(res):
        for name, inst, want in amtp_cases():
            res.expect(TL.solve_amtp(inst) == want, name)
        inst = amtp_cases()[0][1]
        phi = C.amtp_reduction(inst, C.Names())
        res.expect(S.render(phi) == S.render(C.amtp_reduction(inst, C.Names())), "deterministic")
        res.expect(isinstance(phi, And) and S.quantifier_count(phi) > 0, "shape")
        text = S.render(phi)
        res.expect(S.render(phi.right).startswith("forall t_a_1. exists t_a_2. ("), "alternating prefix")
        res.expect((len(text), hashlib.sha256(text.encode()).hexdigest()) == AMTP_GOLDEN, "golden text")
        grid_t, _ = C.grid_tree(2)
        res.expect(_holds(grid_t, SELF_LOOP, phi) and TL.solve_amtp(inst), "singleton end to end")

    return _timed(9, "alternating multi-tiling", None, body)


SUITES = {
    "nominals": suite_nominals,
    "pnf": suite_pnf,
    "small-model": suite_small_model,
    "counting": suite_counting,
    "comparison": suite_comparison,
    "tiling": suite_tiling,
    "translations": suite_translations,
    "backends": None,
    "amtp": suite_amtp,
}


def run_suites(names=None, seed: int = DEFAULT_SEED, report=None) -> list:
    """Run the named suites (all by default); backend agreement replays whatever ran before it."""
    names = list(SUITES) if names is None else list(names)
    unknown = [n for n in names if n not in SUITES]
    if unknown:
        raise ValueError(f"unknown suite(s) {unknown}; choose from {list(SUITES)}")
    # backend agreement replays the checks of suites 1-7, so it runs them too
    to_run = [n for n in SUITES if n in names or ("backends" in names and SUITES[n] and n != "amtp")]
    results = []
    with recording() as log:
        for name in to_run:
            if name == "backends":
                continue
            res = SUITES[name](seed)
            if name in names:
                results.append(res)
                if report:
                    report(res)
    if "backends" in names:
        res = suite_backends(log, seed)
        results.insert(min(7, len(results)), res)
        if report:
            report(res)
    return results
