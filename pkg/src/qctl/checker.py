"""Model checking QCTL on frontier-completed finite trees, and prenex normal form.

Formulas are compiled to a small instruction table (hash-consed, so shared
subterms are evaluated once per node and assignment).  Two quantifier
backends share the evaluator:

* exhaustive: a quantifier tries all 2^n labelings of its variable on the
  explicit nodes, exactly as the semantics reads;
* pruned: a quantifier assigns its variable lazily.  The body is evaluated
  in Kleene three-valued logic over a partial labeling; an undetermined
  result comes with some (variable, node) reads that were unknown (for a
  conjunction, those of its operand with the fewest), and the search branches
  on the first such read of its own variable.  Reads of enclosing variables
  are handed back so the enclosing search settles them first.

Memo keys only carry the assignment bits a subformula can see from its node
(its cone of nodes within modal depth), which keeps the tables small.
"""

from __future__ import annotations

import sys
from contextlib import contextmanager
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Optional

from . import syntax as S
from .syntax import Formula
from .trees import (
    SELF_LOOP, STRICT, Completed, FrontierMode, TreeModel, apply_frontier,
    exact_depth_shapes, enumerate_trees, from_nested, CapExceeded,
)

EXHAUSTIVE = "exhaustive"
PRUNED = "pruned"
BACKENDS = (EXHAUSTIVE, PRUNED)

sys.setrecursionlimit(max(sys.getrecursionlimit(), 20000))


class UnsupportedFormula(ValueError):
    """Formula outside what the requested operation handles."""


@dataclass
class CheckOutcome:
    verdict: bool
    # labeling of the outermost quantified variables: a witness when the
    # prefix is existential and true, a counterexample when it is universal
    # and false.  Maps variable name to the set of explicit nodes carrying it.
    witness: Optional[dict] = None
    prefix: tuple = ()

    def __bool__(self):
        return self.verdict


# compilation --------------------------------------------------------------

(OP_TRUE, OP_FALSE, OP_PROP, OP_NOT, OP_AND, OP_OR, OP_IFF, OP_EX, OP_AX, OP_EF, OP_AG,
 OP_EXEF, OP_AXAG, OP_EU, OP_AU, OP_EXISTS, OP_FORALL) = range(17)
UNBOUNDED = -1
OWN_PROBE = 3
MEMO_LIMIT = 3_000_000


@dataclass
class Program:
    op: list = field(default_factory=list)
    args: list = field(default_factory=list)  # tuple of child ids
    name: list = field(default_factory=list)  # prop or bound variable name
    keyvars: list = field(default_factory=list)  # free names that may be bound at run time
    horizon: list = field(default_factory=list)  # how many steps down the node may look; UNBOUNDED for EF-like
    quantified: list = field(default_factory=list)  # does the subformula contain a quantifier
    local: list = field(default_factory=list)  # quantifier free and reads only the current node: not memoized
    root: int = -1
    has_until: bool = False


def _flatten(f, cls):
    out, stack = [], [f]
    while stack:
        g = stack.pop()
        if isinstance(g, cls):
            stack.append(g.right)
            stack.append(g.left)
        else:
            out.append(g)
    return out


def _horizon(op, kids):
    if op in (OP_EF, OP_AG, OP_EXEF, OP_AXAG, OP_EU, OP_AU):
        return UNBOUNDED
    if UNBOUNDED in kids:
        return UNBOUNDED
    h = max(kids, default=0)
    return h + 1 if op in (OP_EX, OP_AX) else h


@lru_cache(maxsize=512)
def compile_formula(f: Formula) -> Program:
    prog, _ = compile_many((f,))
    return prog


@lru_cache(maxsize=64)
def compile_many(fs: tuple) -> tuple:
    """One instruction table for several formulas; returns it with their root ids."""
    prog = Program()
    intern: dict = {}
    by_obj: dict = {}
    free: list = []
    bound_names = {g.var for f in fs for g in S.subformulas(f) if isinstance(g, S.QUANTIFIERS)}

    def emit(op, args, name, fv):
        key = (op, args, name)
        fid = intern.get(key)
        if fid is None:
            fid = len(prog.op)
            intern[key] = fid
            prog.op.append(op)
            prog.args.append(args)
            prog.name.append(name)
            free.append(fv)
            prog.keyvars.append(tuple(sorted(fv & bound_names)))
            prog.horizon.append(_horizon(op, [prog.horizon[a] for a in args]))
            prog.quantified.append(op in (OP_EXISTS, OP_FORALL) or any(prog.quantified[a] for a in args))
            prog.local.append(prog.horizon[fid] == 0 and not prog.quantified[fid])
        return fid

    def comp(g):
        got = by_obj.get(id(g))
        if got is not None:
            return got[1]
        if isinstance(g, S.Top):
            fid = emit(OP_TRUE, (), None, frozenset())
        elif isinstance(g, S.Bottom):
            fid = emit(OP_FALSE, (), None, frozenset())
        elif isinstance(g, S.Prop):
            fid = emit(OP_PROP, (), g.name, frozenset([g.name]))
        elif isinstance(g, S.Not):
            c = comp(g.arg)
            fid = emit(OP_NOT, (c,), None, free[c])
        elif isinstance(g, (S.And, S.Or)):
            parts = []
            for h in _flatten(g, type(g)):
                c = comp(h)
                if c not in parts:
                    parts.append(c)
            fv = frozenset().union(*(free[c] for c in parts))
            fid = emit(OP_AND if isinstance(g, S.And) else OP_OR, tuple(parts), None, fv)
        elif isinstance(g, S.Implies):
            a = comp(S.Not(g.left))
            b = comp(g.right)
            fid = emit(OP_OR, (a, b), None, free[a] | free[b])
        elif isinstance(g, S.Iff):
            a, b = comp(g.left), comp(g.right)
            fid = emit(OP_IFF, (a, b), None, free[a] | free[b])
        elif isinstance(g, S.UNARY_TEMPORAL):
            c = comp(g.arg)
            if isinstance(g, S.AF):
                t = comp(S.TRUE)
                prog.has_until = True
                fid = emit(OP_AU, (t, c), None, free[c])
            elif isinstance(g, (S.EXEF, S.AXAG)):
                # EXEF g is evaluated as one step followed by EF g (dually for AXAG)
                inner = OP_EF if isinstance(g, S.EXEF) else OP_AG
                e = emit(inner, (c,), None, free[c])
                fid = emit(OP_EXEF if inner == OP_EF else OP_AXAG, (e,), None, free[c])
            else:
                op = {S.EX: OP_EX, S.AX: OP_AX, S.EF: OP_EF, S.AG: OP_AG}[type(g)]
                fid = emit(op, (c,), None, free[c])
        elif isinstance(g, S.UNTIL):
            a, b = comp(g.left), comp(g.right)
            prog.has_until = True
            fid = emit(OP_EU if isinstance(g, S.EU) else OP_AU, (a, b), None, free[a] | free[b])
        else:
            c = comp(g.body)
            fid = emit(OP_EXISTS if isinstance(g, S.Exists) else OP_FORALL, (c,), g.var,
                       free[c] - {g.var})
        by_obj[id(g)] = (g, fid)  # holding g keeps its id from being reused
        return fid

    roots = tuple(comp(f) for f in fs)
    prog.root = roots[0]
    return prog, roots


# evaluation ---------------------------------------------------------------

_EMPTY = frozenset()
_TRUE = (True, _EMPTY)
_FALSE = (False, _EMPTY)


class _Evaluator:
    def __init__(self, prog: Program, st: Completed, backend: str):
        self.prog = prog
        self.st = st
        self.backend = backend
        self.origin = st.origin
        self.succ = st.succ
        # successors other than the node itself, and self-loop flags
        self.kids = tuple(tuple(s for s in st.succ[u] if s != u) for u in range(st.size))
        self.loop = tuple(u in st.succ[u] for u in range(st.size))
        labels = st.tree.labels
        base: dict = {}
        for v in range(st.explicit):
            for p in labels[v]:
                base[p] = base.get(p, 0) | (1 << v)
        self.base = base
        self.full = (1 << st.explicit) - 1
        self.memo: dict = {}
        self.cones: dict = {}
        # hot-path copies of the program tables
        self.ops, self.names, self.local = prog.op, prog.name, prog.local
        self.keyvars, self.horizon = prog.keyvars, prog.horizon

    def cone(self, u, h):
        """Explicit nodes (as a bitmask) whose labels can matter within h steps of u."""
        table = self.cones.get(h)
        if table is None:
            table = self.cones[h] = [None] * self.st.size
        got = table[u]
        if got is None:
            got = 1 << self.origin[u]
            frontier, depth = [u], 0
            seen = {u}
            while frontier and depth != h:
                depth += 1
                nxt = []
                for w in frontier:
                    for c in self.succ[w]:
                        if c not in seen:
                            seen.add(c)
                            nxt.append(c)
                            got |= 1 << self.origin[c]
                frontier = nxt
            table[u] = got
        return got

    def ev(self, fid, u, env):
        op = self.ops[fid]
        if op == OP_PROP:
            name = self.names[fid]
            o = self.origin[u]
            a = env.get(name)
            if a is None:
                return _TRUE if (self.base.get(name, 0) >> o) & 1 else _FALSE
            if a[0] >> o & 1:
                return _TRUE
            if a[1] >> o & 1:
                return _FALSE
            return None, frozenset(((name, o),))
        if op == OP_TRUE:
            return _TRUE
        if op == OP_FALSE:
            return _FALSE
        if self.local[fid]:
            return self._compute(op, fid, u, env)
        kv = self.keyvars[fid]
        if kv:
            m = self.cone(u, self.horizon[fid])
            if len(kv) == 1:
                a = env.get(kv[0])
                key = (fid, u, None if a is None else (a[0] & m, a[1] & m))
            else:
                key = (fid, u, tuple([None if a is None else (a[0] & m, a[1] & m)
                                      for a in map(env.get, kv)]))
        else:
            key = (fid, u)
        memo = self.memo
        got = memo.get(key)
        if got is not None:
            return got
        res = self._compute(op, fid, u, env)
        if len(memo) > MEMO_LIMIT:
            memo.clear()
        memo[key] = res
        return res

    def _any(self, fid, nodes, env):
        reads = _EMPTY
        unknown = False
        ev = self.ev
        for c in nodes:
            v, r = ev(fid, c, env)
            if v is True:
                return _TRUE
            if v is None:
                unknown = True
                reads = reads | r
        return (None, reads) if unknown else _FALSE

    def _all(self, fid, nodes, env):
        reads = _EMPTY
        unknown = False
        ev = self.ev
        for c in nodes:
            v, r = ev(fid, c, env)
            if v is False:
                return _FALSE
            if v is None:
                unknown = True
                reads = reads | r
        return (None, reads) if unknown else _TRUE

    def _compute(self, op, fid, u, env):
        args = self.prog.args[fid]
        ev = self.ev
        if op == OP_NOT:
            v, r = ev(args[0], u, env)
            return (None if v is None else not v), r
        if op == OP_AND or op == OP_OR:
            stop = op == OP_OR
            reads = _EMPTY
            unknown = False
            ops, names = self.prog.op, self.prog.name
            for c in args:
                if ops[c] == OP_PROP:
                    # inlined proposition lookup, the most frequent operand
                    name = names[c]
                    a = env.get(name)
                    o = self.origin[u]
                    if a is None:
                        v, r = (self.base.get(name, 0) >> o) & 1 == 1, _EMPTY
                    elif a[0] >> o & 1:
                        v, r = True, _EMPTY
                    elif a[1] >> o & 1:
                        v, r = False, _EMPTY
                    else:
                        v, r = None, frozenset(((name, o),))
                else:
                    v, r = ev(c, u, env)
                if v is stop:
                    return stop, _EMPTY
                if v is None:
                    unknown = True
                    if not reads or len(r) < len(reads):
                        reads = r
            return (None, reads) if unknown else (not stop, _EMPTY)
        if op == OP_IFF:
            a, ra = ev(args[0], u, env)
            b, rb = ev(args[1], u, env)
            if a is None or b is None:
                return None, ra if a is None else rb
            return a == b, _EMPTY
        if op == OP_EX:
            return self._any(args[0], self.succ[u], env)
        if op == OP_AX:
            return self._all(args[0], self.succ[u], env)
        if op == OP_EF or op == OP_AG:
            here, r = ev(args[0], u, env)
            want = op == OP_EF
            if here is want:
                return want, _EMPTY
            v, r2 = (self._any if want else self._all)(fid, self.kids[u], env)
            if v is want:
                return want, _EMPTY
            if here is None or v is None:
                return None, r if here is None else r2
            return not want, _EMPTY
        if op == OP_EXEF:
            return self._any(args[0], self.succ[u], env)
        if op == OP_AXAG:
            return self._all(args[0], self.succ[u], env)
        if op == OP_EU:
            b, rb = ev(args[1], u, env)
            if b is True:
                return True, _EMPTY
            a, ra = ev(args[0], u, env)
            if a is False:
                return (False, _EMPTY) if b is False else (None, rb)
            rest, rr = self._any(fid, self.kids[u], env)
            # value = b or (a and rest)
            if a is True and rest is True:
                return True, _EMPTY
            if b is False and (a is False or rest is False):
                return False, _EMPTY
            return None, rb | ra | rr
        if op == OP_AU:
            b, rb = ev(args[1], u, env)
            if b is True:
                return True, _EMPTY
            if self.loop[u] or not self.succ[u]:
                # the looping path (or the maximal path ending here) never meets b
                return (False, _EMPTY) if b is False else (None, rb)
            a, ra = ev(args[0], u, env)
            if a is False:
                return (False, _EMPTY) if b is False else (None, rb)
            rest, rr = self._all(fid, self.kids[u], env)
            if a is True and rest is True:
                return True, _EMPTY
            if b is False and (a is False or rest is False):
                return False, _EMPTY
            return None, rb | ra | rr
        if op == OP_EXISTS or op == OP_FORALL:
            if self.backend == EXHAUSTIVE:
                return self._exhaustive(op, fid, u, env)
            return self._search(op == OP_EXISTS, fid, u, env, 0, 0)[:2]
        raise AssertionError(op)

    def _exhaustive(self, op, fid, u, env):
        var = self.prog.name[fid]
        body = self.prog.args[fid][0]
        want = op == OP_EXISTS
        full = self.full
        reads = _EMPTY
        unknown = False
        for mask in range(full + 1):
            env2 = dict(env)
            env2[var] = (mask, full ^ mask)
            v, r = self.ev(body, u, env2)
            if v is want:
                return want, _EMPTY
            if v is None:
                unknown = True
                reads = reads | r
        return (None, reads) if unknown else (not want, _EMPTY)

    def _search(self, is_exists, fid, u, env, t, f, spent=0):
        """Returns (value, outer reads, assignment reaching a decisive value)."""
        var = self.prog.name[fid]
        body = self.prog.args[fid][0]
        env2 = dict(env)
        env2[var] = (t, f)
        v, r = self.ev(body, u, env2)
        if v is not None:
            return v, _EMPTY, (t, f)
        own = [node for (nm, node) in r if nm == var]
        outer = frozenset(rd for rd in r if rd[0] != var)
        # while enclosing variables are undecided, a quantifier-free body gets a
        # short probe of its own assignments (enough to find local witnesses
        # such as a split of a nominal); anything else waits until the outer
        # search settles them
        if outer and (not own or spent >= OWN_PROBE or self.prog.quantified[body]):
            return None, outer, None
        x = 1 << min(own)
        want = is_exists
        v0, r0, a0 = self._search(is_exists, fid, u, env, t, f | x, spent + 1)
        if v0 is want:
            return want, _EMPTY, a0
        v1, r1, a1 = self._search(is_exists, fid, u, env, t | x, f, spent + 1)
        if v1 is want:
            return want, _EMPTY, a1
        if v0 is (not want) and v1 is (not want):
            return not want, _EMPTY, None
        return None, r0 | r1, None


def _nodes(mask):
    out, i = [], 0
    while mask:
        if mask & 1:
            out.append(i)
        mask >>= 1
        i += 1
    return frozenset(out)


def _check_mode(prog: Program, m: FrontierMode):
    if m.kind == "strict" and prog.has_until:
        raise UnsupportedFormula("until operators (E[..U..], A[..U..], AF) are not evaluated in strict mode")


_logs: list = []


@contextmanager
def recording():
    """Collect (structure, mode, node, formula, backend, verdict) for every check run inside the block."""
    log: list = []
    _logs.append(log)
    try:
        yield log
    finally:
        _logs.remove(log)


def check(t, m: FrontierMode, v: int, f: Formula, backend: str = PRUNED) -> CheckOutcome:
    """Does f hold at node v of t completed under frontier mode m?

    t may be a TreeModel or an already completed structure.
    """
    if backend not in BACKENDS:
        raise ValueError(f"unknown backend {backend!r}")
    st = t if isinstance(t, Completed) else apply_frontier(t, m)
    prog = compile_formula(f)
    _check_mode(prog, m)
    if not 0 <= v < st.explicit:
        raise ValueError(f"node {v} is not a node of the tree")
    ev = _Evaluator(prog, st, backend)
    val, _ = ev.ev(prog.root, v, {})
    assert val is not None
    for log in _logs:
        log.append((st, m, v, f, backend, val))
    return CheckOutcome(val, *_witness(ev, prog, v, val))


def check_many(t, m: FrontierMode, v: int, formulas, backend: str = PRUNED) -> list:
    """Verdicts of several formulas at v; shared subformulas are evaluated once."""
    if backend not in BACKENDS:
        raise ValueError(f"unknown backend {backend!r}")
    formulas = tuple(formulas)
    st = t if isinstance(t, Completed) else apply_frontier(t, m)
    prog, roots = compile_many(formulas)
    _check_mode(prog, m)
    if not 0 <= v < st.explicit:
        raise ValueError(f"node {v} is not a node of the tree")
    ev = _Evaluator(prog, st, backend)
    out = []
    for f, fid in zip(formulas, roots):
        val, _ = ev.ev(fid, v, {})
        assert val is not None
        for log in _logs:
            log.append((st, m, v, f, backend, val))
        out.append(val)
    return out


def _witness(ev: _Evaluator, prog: Program, u: int, val: bool):
    """Extract a labeling for the leading quantifier block that decides the verdict."""
    fid = prog.root
    env: dict = {}
    out: dict = {}
    prefix = []
    while prog.op[fid] in (OP_EXISTS, OP_FORALL):
        is_exists = prog.op[fid] == OP_EXISTS
        if is_exists != val:
            break  # a true universal or false existential has no single witness
        var = prog.name[fid]
        if var in out:
            break
        # rerun the search with a fresh pruned evaluator; it stops at a decisive assignment
        sub = _Evaluator(prog, ev.st, PRUNED)
        v, _, assign = sub._search(is_exists, fid, u, env, 0, 0)
        assert v is val and assign is not None
        t_mask = assign[0]  # unassigned nodes default to false
        out[var] = _nodes(t_mask)
        prefix.append(("exists" if is_exists else "forall", var))
        env = dict(env)
        env[var] = (t_mask, ev.full ^ t_mask)
        fid = prog.args[fid][0]
    if not out:
        return None, ()
    return out, tuple(prefix)


def strip_prefix(f: Formula, count: int) -> Formula:
    for _ in range(count):
        f = f.body
    return f


def verify_witness(t: TreeModel, m: FrontierMode, v: int, f: Formula, outcome: CheckOutcome) -> bool:
    """Re-check the body under the reported labeling with the exhaustive backend."""
    if not outcome.witness:
        return True
    for var, nodes in outcome.witness.items():
        t = t.relabel(var, nodes)
    body = strip_prefix(f, len(outcome.prefix))
    return check(t, m, v, body, EXHAUSTIVE).verdict == outcome.verdict


def holds(t, m, f, backend=PRUNED, v=None) -> bool:
    if v is None:
        v = t.tree.root if isinstance(t, Completed) else t.root
    return check(t, m, v, f, backend).verdict


# closure helpers ----------------------------------------------------------

def exists_closure(f: Formula, props) -> Formula:
    return S.exists_many(sorted(props), f)


def forall_closure(f: Formula, props) -> Formula:
    return S.forall_many(sorted(props), f)


def equivalent_on_small_trees(f: Formula, g: Formula, max_branching: int, depth: int, props=None,
                              method: str = "closure", backend: str = PRUNED,
                              cap: int = 2_000_000) -> bool:
    """Do f and g agree at the root of every tree with all branches of length depth?

    Trees have branching <= max_branching and labels over props, completed
    by self-loops.  The default method checks, on each unlabeled shape, the
    universal closure of f <-> g over props, which is the same statement
    as comparing f and g on every labeling; method="explicit" enumerates
    labeled trees instead.
    """
    if props is None:
        props = S.free_props(f) | S.free_props(g)
    props = sorted(props)
    if method == "explicit":
        for t in enumerate_trees(max_branching, depth, props, cap):
            if check(t, SELF_LOOP, t.root, f, backend).verdict != check(t, SELF_LOOP, t.root, g, backend).verdict:
                return False
        return True
    claim = forall_closure(S.Iff(f, g), props)
    for shape in exact_depth_shapes(max_branching, depth):
        t = from_nested(shape)
        if not check(t, SELF_LOOP, t.root, claim, backend).verdict:
            return False
    return True


# prenex normal form -------------------------------------------------------

class _Fresh:
    def __init__(self, avoid):
        self.avoid = set(avoid)
        self.counter = 0

    def __call__(self, base):
        while True:
            self.counter += 1
            name = f"{base}_{self.counter}"
            if name not in self.avoid:
                self.avoid.add(name)
                return name


def _rename_prefix(prefix, matrix, var, fresh):
    new = fresh(var)
    prefix = [(q, new if x == var else x) for q, x in prefix]
    return prefix, S.substitute_prop(matrix, var, new)


def _pnf(f, fresh):
    """Returns (prefix, matrix) with distinct prefix names; matrix is quantifier free."""
    if isinstance(f, (S.Top, S.Bottom, S.Prop)):
        return [], f
    if isinstance(f, S.Not):
        pre, m = _pnf(f.arg, fresh)
        flip = {"exists": "forall", "forall": "exists"}
        return [(flip[q], x) for q, x in pre], S.Not(m)
    if isinstance(f, S.EX):
        pre, m = _pnf(f.arg, fresh)
        return pre, S.EX(m)
    if isinstance(f, S.And):
        pa, ma = _pnf(f.left, fresh)
        pb, mb = _pnf(f.right, fresh)
        free_b = S.free_props(f.right)
        for q, x in list(pa):
            if x in free_b or any(x == y for _, y in pb):
                pa, ma = _rename_prefix(pa, ma, x, fresh)
        free_a = S.free_props(f.left)
        for q, y in list(pb):
            if y in free_a:
                pb, mb = _rename_prefix(pb, mb, y, fresh)
        return pa + pb, S.And(ma, mb)
    if isinstance(f, S.QUANTIFIERS):
        pre, m = _pnf(f.body, fresh)
        if any(x == f.var for _, x in pre):
            pre, m = _rename_prefix(pre, m, f.var, fresh)
        q = "exists" if isinstance(f, S.Exists) else "forall"
        return [(q, f.var)] + pre, m
    raise UnsupportedFormula(f"unexpected node {type(f).__name__} in prenex conversion")


def _ex_core(f):
    """Rewrite Booleans and AX so only Not/And/EX/quantifiers remain."""
    if isinstance(f, (S.Top, S.Bottom, S.Prop)):
        return f
    if isinstance(f, S.Not):
        return S.Not(_ex_core(f.arg))
    if isinstance(f, S.And):
        return S.And(_ex_core(f.left), _ex_core(f.right))
    if isinstance(f, S.Or):
        return S.Not(S.And(S.Not(_ex_core(f.left)), S.Not(_ex_core(f.right))))
    if isinstance(f, S.Implies):
        return S.Not(S.And(_ex_core(f.left), S.Not(_ex_core(f.right))))
    if isinstance(f, S.Iff):
        a, b = _ex_core(f.left), _ex_core(f.right)
        return S.And(S.Not(S.And(a, S.Not(b))), S.Not(S.And(b, S.Not(a))))
    if isinstance(f, S.EX):
        return S.EX(_ex_core(f.arg))
    if isinstance(f, S.AX):
        return S.Not(S.EX(S.Not(_ex_core(f.arg))))
    if isinstance(f, S.Exists):
        return S.Exists(f.var, _ex_core(f.body))
    if isinstance(f, S.Forall):
        return S.Forall(f.var, _ex_core(f.body))
    raise UnsupportedFormula(f"{type(f).__name__} is outside the EX fragment")


def to_pnf(f: Formula) -> Formula:
    """Equivalent prenex formula over trees, for the EX fragment.

    Quantifiers are pulled out with the tree-valid laws
    EX Qp g <-> Qp EX g, ~Qp g <-> Q'p ~g and (Qp g) & h <-> Qp (g & h)
    (p not free in h; otherwise p is renamed).  Iff is expanded into two
    implications, which duplicates quantifiers below it.
    """
    if not S.in_fragment(f, S.Fragment.EX_ONLY):
        raise UnsupportedFormula("prenex conversion is only available for the EX fragment")
    core = _ex_core(f)
    pre, m = _pnf(core, _Fresh(S.all_props(f)))
    out = m
    for q, x in reversed(pre):
        out = S.Exists(x, out) if q == "exists" else S.Forall(x, out)
    return out
