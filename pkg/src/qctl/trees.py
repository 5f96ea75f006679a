"""Finite tree models, Kripke structures, frontier completion and enumeration."""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass
from math import comb
from typing import Iterable, Iterator, Sequence

DEFAULT_TETRATION_CAP = 2 ** 16
DEFAULT_ENUM_CAP = 2_000_000


class CapExceeded(ValueError):
    """A request would exceed a configured size limit."""


@dataclass(frozen=True)
class TreeModel:
    """A finite rooted tree; nodes are 0..size-1 and 0 is not necessarily the root."""

    children: tuple  # tuple of tuples of node indices
    labels: tuple  # tuple of frozensets of proposition names
    root: int = 0

    def __post_init__(self):
        n = len(self.children)
        if len(self.labels) != n:
            raise ValueError("children and labels disagree on node count")
        if not 0 <= self.root < n:
            raise ValueError("root out of range")
        parent = [None] * n
        for u, kids in enumerate(self.children):
            for c in kids:
                if not 0 <= c < n:
                    raise ValueError(f"child {c} of node {u} out of range")
                if c == self.root or parent[c] is not None:
                    raise ValueError(f"node {c} has more than one parent or is the root")
                parent[c] = u
        seen = {self.root}
        stack = [self.root]
        while stack:
            for c in self.children[stack.pop()]:
                if c not in seen:
                    seen.add(c)
                    stack.append(c)
        if len(seen) != n:
            raise ValueError("tree has nodes unreachable from the root")
        object.__setattr__(self, "_parent", tuple(parent))

    @property
    def size(self) -> int:
        return len(self.children)

    def parent(self, v: int):
        return self._parent[v]

    def depth(self, v: int) -> int:
        d = 0
        while v != self.root:
            v = self._parent[v]
            d += 1
        return d

    def height(self) -> int:
        """Length of the longest branch from the root."""
        def h(v):
            return 1 + max(map(h, self.children[v])) if self.children[v] else 0
        return h(self.root)

    def leaves(self) -> list:
        return [v for v in range(self.size) if not self.children[v]]

    def nodes_at_depth(self, d: int) -> list:
        level = [self.root]
        for _ in range(d):
            level = [c for v in level for c in self.children[v]]
        return level

    def descendants(self, v: int) -> list:
        """Strict descendants of v."""
        out, stack = [], list(self.children[v])
        while stack:
            u = stack.pop()
            out.append(u)
            stack.extend(self.children[u])
        return out

    def with_labels(self, labels: Sequence) -> "TreeModel":
        return TreeModel(self.children, tuple(frozenset(l) for l in labels), self.root)

    def relabel(self, prop: str, nodes: Iterable[int]) -> "TreeModel":
        """Copy in which exactly `nodes` carry `prop`."""
        marked = set(nodes)
        labels = [(l | {prop}) if v in marked else (l - {prop}) for v, l in enumerate(self.labels)]
        return TreeModel(self.children, tuple(labels), self.root)

    def canonical(self):
        """Order-insensitive serialization of the labeled tree."""
        def ser(v):
            return (tuple(sorted(self.labels[v])), tuple(sorted(ser(c) for c in self.children[v])))
        return ser(self.root)


def tree(spec) -> TreeModel:
    """Build a tree from a nested spec: (labels, [child specs]) or just labels for a leaf.

    Labels may be given as a string of space separated names.  Nodes are
    numbered in preorder, root 0.
    """
    children: list = []
    labels: list = []

    def add(s):
        if isinstance(s, tuple) and len(s) == 2 and isinstance(s[1], list):
            lab, kids = s
        else:
            lab, kids = s, []
        if isinstance(lab, str):
            lab = lab.split()
        v = len(children)
        children.append([])
        labels.append(frozenset(lab))
        for k in kids:
            children[v].append(add(k))
        return v

    add(spec)
    return TreeModel(tuple(tuple(c) for c in children), tuple(labels), 0)


def from_nested(t) -> TreeModel:
    """Build a tree from the canonical nested form (labels, (subtrees...))."""
    return tree(_nested_to_spec(t))


def _nested_to_spec(t):
    lab, kids = t
    return (list(lab), [_nested_to_spec(k) for k in kids])


# JSON ---------------------------------------------------------------------

def tree_from_json(doc) -> TreeModel:
    """Parse the tree file format; node ids are renumbered in preorder from the root."""
    if isinstance(doc, str):
        doc = json.loads(doc)
    try:
        root = doc["root"]
        nodes = doc["nodes"]
    except (KeyError, TypeError):
        raise ValueError("tree document needs 'root' and 'nodes'")
    by_id = {}
    for nd in nodes:
        nid = nd["id"]
        if not isinstance(nid, int) or nid < 0:
            raise ValueError(f"bad node id {nid!r}")
        if nid in by_id:
            raise ValueError(f"duplicate node id {nid}")
        by_id[nid] = nd
    if root not in by_id:
        raise ValueError("root id not among nodes")
    index = {}
    order = []
    stack = [root]
    while stack:
        u = stack.pop()
        if u in index:
            raise ValueError(f"node {u} reached twice (cycle or shared child)")
        index[u] = len(order)
        order.append(u)
        for c in reversed(by_id[u].get("children", [])):
            if c not in by_id:
                raise ValueError(f"unknown child id {c}")
            stack.append(c)
    if len(order) != len(by_id):
        orphans = sorted(set(by_id) - set(index))
        raise ValueError(f"orphan nodes: {orphans}")
    children = tuple(tuple(index[c] for c in by_id[u].get("children", [])) for u in order)
    labels = tuple(frozenset(by_id[u].get("labels", [])) for u in order)
    return TreeModel(children, labels, 0)


def tree_to_json(t: TreeModel) -> dict:
    return {
        "root": t.root,
        "nodes": [
            {"id": v, "labels": sorted(t.labels[v]), "children": list(t.children[v])}
            for v in range(t.size)
        ],
    }


# Kripke structures --------------------------------------------------------

@dataclass(frozen=True)
class KripkeStructure:
    transitions: tuple  # world -> tuple of successor worlds
    labels: tuple  # world -> frozenset

    @property
    def size(self):
        return len(self.transitions)

    def is_total(self) -> bool:
        return all(len(s) > 0 for s in self.transitions)


def unfold(k: KripkeStructure, w: int, depth: int) -> TreeModel:
    """Computation tree of k from w, truncated to paths of length <= depth."""
    if not 0 <= w < k.size:
        raise ValueError("world out of range")
    children: list = [[]]
    labels = [k.labels[w]]
    frontier = [(0, w)]
    for _ in range(depth):
        nxt = []
        for node, world in frontier:
            for succ in k.transitions[world]:
                c = len(children)
                children.append([])
                labels.append(k.labels[succ])
                children[node].append(c)
                nxt.append((c, succ))
        frontier = nxt
    return TreeModel(tuple(tuple(c) for c in children), tuple(labels), 0)


# frontier completion ------------------------------------------------------

@dataclass(frozen=True)
class FrontierMode:
    kind: str  # "strict", "selfloop" or "chainpad"
    pad: int = 0

    def __str__(self):
        return f"chainpad({self.pad})" if self.kind == "chainpad" else self.kind


STRICT = FrontierMode("strict")
SELF_LOOP = FrontierMode("selfloop")


def chain_pad(d: int) -> FrontierMode:
    if d < 1:
        raise ValueError("chain padding needs d >= 1")
    return FrontierMode("chainpad", d)


def parse_mode(text: str) -> FrontierMode:
    t = text.strip().lower()
    if t == "strict":
        return STRICT
    if t in ("selfloop", "self-loop", "loop"):
        return SELF_LOOP
    if t.startswith("chainpad"):
        digits = t[len("chainpad"):].strip("():= ")
        return chain_pad(int(digits))
    raise ValueError(f"unknown frontier mode {text!r}")


@dataclass(frozen=True)
class Completed:
    """A tree plus frontier edges: the structure the checker evaluates.

    Nodes 0..explicit-1 are the tree's nodes; pad nodes follow.  `origin`
    maps every node to the explicit node whose labels it carries.
    """

    succ: tuple
    origin: tuple
    explicit: int
    tree: TreeModel

    @property
    def size(self):
        return len(self.succ)


def apply_frontier(t: TreeModel, m: FrontierMode) -> Completed:
    succ = [list(c) for c in t.children]
    origin = list(range(t.size))
    if m.kind != "strict":
        for leaf in t.leaves():
            prev = leaf
            for _ in range(m.pad):
                pad = len(succ)
                succ.append([])
                origin.append(leaf)
                succ[prev].append(pad)
                prev = pad
            succ[prev].append(prev)
    return Completed(tuple(tuple(s) for s in succ), tuple(origin), t.size, t)


def completed_as_tree(c: Completed) -> TreeModel:
    """Explicit tree containing pad copies (self-loops dropped)."""
    children = tuple(tuple(s for s in c.succ[u] if s != u) for u in range(c.size))
    labels = tuple(c.tree.labels[c.origin[u]] for u in range(c.size))
    return TreeModel(children, labels, c.tree.root)


# variants -----------------------------------------------------------------

def variants(t: TreeModel, p: str) -> Iterator[TreeModel]:
    """All 2^size relabelings of p, node-index bitmask ascending."""
    for mask in range(2 ** t.size):
        yield t.relabel(p, [v for v in range(t.size) if mask >> v & 1])


# tetration and node numbers -----------------------------------------------

def tetration(k: int, n: int, cap: int = DEFAULT_TETRATION_CAP) -> int:
    """t(0,n) = n, t(k+1,n) = 2^t(k,n); refuses values above cap."""
    if k < 0 or n < 0:
        raise ValueError("tetration needs natural arguments")
    v = n
    for _ in range(k):
        if v >= cap.bit_length():
            raise CapExceeded(f"t({k},{n}) exceeds the tetration cap {cap}; raise --tetration-cap")
        v = 2 ** v
    if v > cap:
        raise CapExceeded(f"t({k},{n}) exceeds the tetration cap {cap}; raise --tetration-cap")
    return v


def bit_prop(i: int) -> str:
    return f"p{i}"


def val_prop(i: int) -> str:
    return f"val{i}"


def node_type(t: TreeModel, v: int, k: int, n: int, cap: int = DEFAULT_TETRATION_CAP) -> bool:
    if k == 0:
        return True
    size = tetration(k, n, cap)
    kids = t.children[v]
    if len(kids) != size:
        return False
    if not all(node_type(t, c, k - 1, n, cap) for c in kids):
        return False
    return sorted(_number(t, c, k - 1, n) for c in kids) == list(range(size))


def _number(t: TreeModel, v: int, k: int, n: int) -> int:
    if k == 0:
        return sum(1 << i for i in range(n) if bit_prop(i) in t.labels[v])
    return sum(1 << _number(t, c, k - 1, n) for c in t.children[v] if val_prop(k - 1) in t.labels[c])


def node_number(t: TreeModel, v: int, k: int, n: int, cap: int = DEFAULT_TETRATION_CAP) -> int:
    """Number of a type-k node: p-bits for k = 0, val_{k-1} across the children otherwise."""
    if not node_type(t, v, k, n, cap):
        raise ValueError(f"node {v} is not of type {k} (n={n})")
    return _number(t, v, k, n)


# enumeration --------------------------------------------------------------

def label_sets(props: Iterable[str]) -> list:
    """All subsets of props as sorted tuples, in a fixed order (by size, then lexicographic)."""
    ps = sorted(set(props))
    out = []
    for r in range(len(ps) + 1):
        out.extend(itertools.combinations(ps, r))
    return out


def _multisets(items: list, max_count: int, min_count: int = 0):
    for r in range(min_count, max_count + 1):
        yield from itertools.combinations_with_replacement(items, r)


def _count_multisets(m: int, max_count: int, min_count: int = 0) -> int:
    return sum(comb(m + r - 1, r) for r in range(min_count, max_count + 1))


def _exact_depth_layers(max_branching: int, depth: int, props) -> list:
    """Canonical nested trees whose branches all have length exactly depth."""
    labs = label_sets(props)
    layer = [(lab, ()) for lab in labs]
    for _ in range(depth):
        kid_sets = list(_multisets(layer, max_branching, 1))
        layer = [(lab, kids) for kids in kid_sets for lab in labs]
    return layer


def count_exact_depth(max_branching: int, depth: int, n_labels: int) -> int:
    c = n_labels
    for _ in range(depth):
        c = n_labels * _count_multisets(c, max_branching, 1)
    return c


def enumerate_trees(max_branching: int, exact_depth: int, props: Iterable[str] = (),
                    cap: int = DEFAULT_ENUM_CAP) -> Iterator[TreeModel]:
    """Every labeled tree with all branches of length exact_depth, up to sibling order."""
    props = sorted(set(props))
    est = count_exact_depth(max_branching, exact_depth, 2 ** len(props))
    if est > cap:
        raise CapExceeded(f"enumeration would produce {est} trees (cap {cap}); raise --enum-cap")
    for t in _exact_depth_layers(max_branching, exact_depth, props):
        yield from_nested(t)


def _node_count(t) -> int:
    return 1 + sum(_node_count(k) for k in t[1])


def shapes_by_size(max_size: int, max_branching=None, max_depth=None) -> list:
    """Unlabeled canonical trees with at most max_size nodes, sorted by node count.

    Each shape is a nested tuple ((), (children...)) with children sorted.
    """
    # by_size[d][s] = canonical shapes of depth <= d with s nodes
    limit_depth = max_depth if max_depth is not None else max_size - 1
    memo: dict = {}

    def forests(size, depth, max_items, lo):
        """Sorted tuples of shapes (non-decreasing from index lo) totalling size nodes."""
        key = (size, depth, max_items, lo)
        if key in memo:
            return memo[key]
        out = []
        if size == 0:
            out = [()]
        elif max_items != 0 and depth >= 0:
            pool = all_shapes(depth)
            for i in range(lo, len(pool)):
                s = pool[i]
                ns = _node_count(s)
                if ns > size:
                    continue
                for rest in forests(size - ns, depth, None if max_items is None else max_items - 1, i):
                    out.append((s,) + rest)
        memo[key] = out
        return out

    shape_memo: dict = {}

    def all_shapes(depth):
        if depth in shape_memo:
            return shape_memo[depth]
        res = []
        for size in range(1, max_size + 1):
            res.extend(shapes(size, depth))
        shape_memo[depth] = res
        return res

    def shapes(size, depth):
        if depth < 0:
            return []
        if size == 1:
            return [((), ())]
        if depth == 0:
            return []
        return [((), kids) for kids in forests(size - 1, depth - 1, max_branching, 0)]

    out = []
    for size in range(1, max_size + 1):
        out.extend(shapes(size, limit_depth))
    return out


def exact_depth_shapes(max_branching: int, depth: int) -> list:
    """Unlabeled canonical trees with all branches of length depth, by node count."""
    layer = [((), ())]
    for _ in range(depth):
        layer = [((), kids) for kids in _multisets(layer, max_branching, 1)]
    return sorted(layer, key=_node_count)


def bounded_depth_shapes(max_branching: int, max_depth: int) -> list:
    """Unlabeled canonical trees of height <= max_depth and branching <= max_branching."""
    layer = [((), ())]
    for _ in range(max_depth):
        layer = [((), kids) for kids in _multisets(layer, max_branching, 0)]
    return sorted(layer, key=_node_count)


def labeled_trees(shapes_list: Iterable, props: Iterable[str], label_filter=None) -> Iterator[TreeModel]:
    """All labelings of the given shapes over subsets of props, canonical up to sibling order."""
    labs = label_sets(props)

    def lab_forms(shape, depth):
        kids_forms = [lab_forms(k, depth + 1) for k in shape[1]]
        out = []
        # group identical child shapes so that sibling permutations are not repeated
        groups: dict = {}
        for k, forms in zip(shape[1], kids_forms):
            groups.setdefault(k, (forms, 0))
            groups[k] = (forms, groups[k][1] + 1)
        group_choices = [list(itertools.combinations_with_replacement(forms, cnt)) for forms, cnt in groups.values()]
        allowed = labs if label_filter is None else [l for l in labs if label_filter(depth, l)]
        for combo in itertools.product(*group_choices):
            kids = tuple(sorted(x for part in combo for x in part))
            for lab in allowed:
                out.append((lab, kids))
        return out

    for s in shapes_list:
        for t in lab_forms(s, 0):
            yield from_nested(t)


def shape_tree(shape) -> TreeModel:
    return from_nested(shape)
