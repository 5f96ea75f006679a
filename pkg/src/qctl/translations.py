"""Translations between fragments, and the k-layered tree validator.

* ex_to_ef: EX formulas to EF formulas over layered trees;
* ex_to_exef_finite: EX formulas on finite trees to EXEF formulas on finite trees;
* embed_finite_in_infinite / embed_gt_in_infinite: relativise to a
  proposition `in` so finite (or arbitrary) trees live inside infinite ones;
* rewrite_modality: swap EX for EXEF or EF (and the duals).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations

from .syntax import (AF, AG, AX, AXAG, EF, EX, EXEF, TRUE, And, Bottom, Exists, Forall, Formula, Fragment, Iff,
                     Implies, Not, Or, P, Prop, Top, all_props, conj, disj, in_fragment, modal_depth)
from .trees import TreeModel

IN = "in"


def layer_prop(i: int) -> str:
    return "layer_m1" if i == -1 else f"layer{i}"


def _layers(lo, hi):
    return [P(layer_prop(i)) for i in range(lo, hi + 1)]


def _unique(props):
    return disj(props) & conj(~(a & b) for a, b in combinations(props, 2))


# k-layered trees ------------------------------------------------------------

def shape_formula(k: int) -> Formula:
    """Holds at the root exactly when the tree is k-layered."""
    if k < 0:
        raise ValueError("k must be natural")
    ys = _layers(-1, k)
    lay = {i: ys[i + 1] for i in range(-1, k + 1)}
    unicity = AG(_unique(ys))
    monotone = conj(AG(Implies(lay[i], AG(disj(ys[:i + 2])))) for i in range(-1, k + 1))
    progress = conj(AG(Implies(lay[i], EF(lay[i - 1]))) for i in range(0, k + 1))
    no_stutter = conj(AG(Implies(lay[i], ~Exists("p", P("p") & EF(lay[i] & ~P("p")))))
                      for i in range(0, k + 1))
    return conj([unicity, monotone, progress, no_stutter, lay[k]])


@dataclass(frozen=True)
class LayerCheckReport:
    verdict: bool
    condition: str = ""  # "a", "b", "c" or "d" for the first violated condition
    nodes: tuple = field(default=())

    def __bool__(self):
        return self.verdict


def is_k_layered(t: TreeModel, k: int) -> LayerCheckReport:
    """Check conditions (a) to (d) of k-layered trees, in that order, on the explicit tree."""
    names = {layer_prop(i): i for i in range(-1, k + 1)}
    layer = {}
    for v in range(t.size):
        mine = [names[p] for p in t.labels[v] if p in names]
        if len(mine) != 1:
            return LayerCheckReport(False, "a", (v,))
        layer[v] = mine[0]
    for v in range(t.size):
        j = layer[v]
        if j >= 0 and not any(layer[c] == j - 1 for c in t.children[v]):
            return LayerCheckReport(False, "b", (v,))
        for w in t.descendants(v):
            if w != v and layer[w] > j:
                return LayerCheckReport(False, "b", (v, w))
    for v in range(t.size):
        j = layer[v]
        if j >= 0:
            for w in t.descendants(v):
                if w != v and layer[w] == j:
                    return LayerCheckReport(False, "c", (v, w))
    if layer[t.root] != k:
        return LayerCheckReport(False, "d", (t.root,))
    return LayerCheckReport(True)


# EX -> EF -------------------------------------------------------------------

def _ex_only(f: Formula) -> Formula:
    """Rewrite AX as ~EX~ after checking that f belongs to the EX fragment."""
    if not in_fragment(f, Fragment.EX_ONLY):
        raise ValueError("translation needs a formula of the EX fragment")
    return _map(f, {AX: lambda g: Not(EX(Not(g))), EX: EX})


def _map(f: Formula, rules: dict) -> Formula:
    """Rebuild f bottom-up; rules maps a unary temporal class to a builder of the image."""
    if isinstance(f, (Top, Bottom, Prop)):
        return f
    if isinstance(f, Not):
        return Not(_map(f.arg, rules))
    if isinstance(f, (And, Or, Implies, Iff)):
        return type(f)(_map(f.left, rules), _map(f.right, rules))
    if isinstance(f, (Exists, Forall)):
        return type(f)(f.var, _map(f.body, rules))
    rule = rules.get(type(f))
    if rule is None or not hasattr(f, "arg"):
        raise ValueError(f"operator {type(f).__name__} is outside the translation's domain")
    return rule(_map(f.arg, rules))


def _check_fresh(f: Formula, reserved) -> None:
    clash = all_props(f) & set(reserved)
    if clash:
        raise ValueError(f"formula already uses reserved names {sorted(clash)}")


def _layered(f: Formula, i: int, step) -> Formula:
    """trans(i, f): each EX becomes step(layer_{i-1} & trans(i-1, .))."""
    if isinstance(f, (Top, Bottom, Prop)):
        return f
    if isinstance(f, Not):
        return Not(_layered(f.arg, i, step))
    if isinstance(f, (And, Or, Implies, Iff)):
        return type(f)(_layered(f.left, i, step), _layered(f.right, i, step))
    if isinstance(f, (Exists, Forall)):
        return type(f)(f.var, _layered(f.body, i, step))
    if isinstance(f, EX):
        return step(P(layer_prop(i - 1)) & _layered(f.arg, i - 1, step))
    raise ValueError(f"unexpected operator {type(f).__name__}")


def ex_to_ef(f: Formula) -> Formula:
    """trans(k, f) & shape(k) with k = md(f)."""
    k = modal_depth(f)
    _check_fresh(f, [layer_prop(i) for i in range(-1, k + 1)])
    body = _layered(_ex_only(f), k, EF)
    assert layer_prop(-1) not in all_props(body)
    return body & shape_formula(k)


def decorate_layers(t: TreeModel, k: int) -> TreeModel:
    """Layer a tree for the EF translation: depth j gets layer_{max(-1, k-j)}.

    Each leaf above depth k+1 is first extended by a chain of copies down to
    depth k+1, which unrolls its self-loop; the new last nodes carry layer_{-1}.
    """
    children = [list(c) for c in t.children]
    labels = [set(l) for l in t.labels]
    depth = {t.root: 0}
    order = [t.root]
    for v in order:
        for c in t.children[v]:
            depth[c] = depth[v] + 1
            order.append(c)
    for v in list(order):
        if not t.children[v]:
            u = v
            while depth[u] < k + 1:
                w = len(children)
                children.append([])
                labels.append(set(t.labels[v]))
                children[u].append(w)
                depth[w] = depth[u] + 1
                u = w
    ys = {layer_prop(i) for i in range(-1, k + 1)}
    out = [(lab - ys) | {layer_prop(max(-1, k - depth[v]))} for v, lab in enumerate(labels)]
    return TreeModel(tuple(tuple(c) for c in children), tuple(frozenset(l) for l in out), t.root)


# EX -> EXEF on finite trees -----------------------------------------------

def shape_finite(k: int, weak_progress: bool = False) -> Formula:
    """Layer discipline on finite trees over layer_0..layer_k.

    weak_progress adds the clauses asking every layer_i node (and the root)
    to have a layer_{i-1} descendant; they are off by default because they
    reject models with leaves above layer 0 (EX AX false has such models only).
    """
    if k < 0:
        raise ValueError("k must be natural")
    ys = _layers(0, k)
    lay = dict(enumerate(ys))
    unicity = (lay[k] & conj(~lay[i] for i in range(k))) & AXAG(_unique(ys))
    monotone = AXAG(disj(ys[:k])) & conj(AXAG(Implies(lay[i], AXAG(disj(ys[:i])))) for i in range(k))
    parts = [unicity, monotone]
    if weak_progress:
        parts.append(EXEF(P(layer_prop(k - 1)))
                     & conj(AXAG(Implies(lay[i], EXEF(lay[i - 1]))) for i in range(1, k)))
    parts.append(AXAG(Implies(lay[0], ~EXEF(TRUE))))
    return conj(parts)


def ex_to_exef_finite(f: Formula, weak_progress: bool = False) -> Formula:
    """trans(k, f) with EX -> EXEF(layer_{i-1} & .), plus the finite layer discipline."""
    k = modal_depth(f)
    _check_fresh(f, [layer_prop(i) for i in range(-1, k + 1)])
    return _layered(_ex_only(f), k, EXEF) & shape_finite(k, weak_progress)


def decorate_finite(t: TreeModel, k: int) -> TreeModel:
    """Cut a finite tree below depth k and give depth j the label layer_{k-j}."""
    keep = {t.root: 0}
    order = [t.root]
    for v in order:
        if keep[v] < k:
            for c in t.children[v]:
                keep[c] = keep[v] + 1
                order.append(c)
    index = {v: i for i, v in enumerate(order)}
    ys = {layer_prop(i) for i in range(-1, k + 1)}
    children = tuple(tuple(index[c] for c in t.children[v] if c in index) for v in order)
    labels = tuple(frozenset((t.labels[v] - ys) | {layer_prop(k - keep[v])}) for v in order)
    return TreeModel(children, labels, 0)


# embeddings into infinite trees ---------------------------------------------

def phi_fin() -> Formula:
    """`in` holds at the root, fails somewhere on every branch, and stays false once false."""
    i = P(IN)
    return i & AF(~i) & AG(Implies(~i, AG(~i)))


def phi_fin_gt() -> Formula:
    i = P(IN)
    return i & AXAG(Implies(~i, AXAG(~i)))


def embed_finite_in_infinite(f: Formula) -> Formula:
    """trans(f) & phi_fin with trans(EX g) = EX(in & trans(g))."""
    _check_fresh(f, [IN])
    g = _ex_only(f)
    return _map(g, {EX: lambda h: EX(P(IN) & h)}) & phi_fin()


def embed_gt_in_infinite(f: Formula) -> Formula:
    """trans(f) & phi'_fin with trans(EXEF g) = EXEF(in & trans(g))."""
    _check_fresh(f, [IN])
    if not in_fragment(f, Fragment.EXEF_ONLY):
        raise ValueError("embedding needs a formula of the EXEF fragment")
    g = _map(f, {AXAG: lambda h: Not(EXEF(Not(h))), EXEF: EXEF})
    return _map(g, {EXEF: lambda h: EXEF(P(IN) & h)}) & phi_fin_gt()


def totalize(f: Formula) -> Formula:
    """f & every node, the root included, has a child."""
    return f & EXEF(TRUE) & AXAG(EXEF(TRUE))


# modality rewriting -----------------------------------------------------------

_MAPS = {
    "ex-exef": {EX: EXEF, AX: AXAG},
    "ex-ef": {EX: EF, AX: AG},
}


def rewrite_modality(f: Formula, mapping: str = "ex-exef", inverse: bool = False) -> Formula:
    """Replace EX/AX by EXEF/AXAG (or EF/AG) node by node; inverse undoes it."""
    if mapping not in _MAPS:
        raise ValueError(f"unknown modality map {mapping!r}; choose from {sorted(_MAPS)}")
    table = _MAPS[mapping]
    if inverse:
        table = {v: k for k, v in table.items()}
    return _map(f, {src: (lambda dst: lambda h: dst(h))(dst) for src, dst in table.items()})
