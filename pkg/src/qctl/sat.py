"""Satisfiability: a complete decision for the EX fragment on N-bounded trees,
and a bounded search over small finite trees for everything else.

Both procedures check the existential closure of f over its free
propositions on unlabeled shapes.  That is the same question as asking
whether some labeling of the shape satisfies f, and the checker's witness
gives the labeling.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

from .checker import PRUNED, check, exists_closure
from .syntax import Formula, Fragment, desugar, fragment_of, free_props, modal_depth
from .trees import (DEFAULT_ENUM_CAP, SELF_LOOP, CapExceeded, FrontierMode, TreeModel, count_exact_depth,
                    exact_depth_shapes, shape_tree, shapes_by_size)

SAT, UNSAT, UNSAT_WITHIN_BOUND = "sat", "unsat", "unsat_within_bound"


@dataclass(frozen=True)
class SatOutcome:
    status: str
    witness: Optional[TreeModel] = None
    bound: Optional[str] = None  # what was searched, for unsat_within_bound

    @property
    def is_sat(self) -> bool:
        return self.status == SAT


def _first_witness(f: Formula, shapes, mode: FrontierMode, backend: str):
    props = sorted(free_props(f))
    closed = exists_closure(f, props)
    for shape in shapes:
        t = shape_tree(shape)
        out = check(t, mode, t.root, closed, backend)
        if out.verdict:
            labels = [set() for _ in range(t.size)]
            for p, nodes in (out.witness or {}).items():
                for v in nodes:
                    labels[v].add(p)
            return t.with_labels(labels)
    return None


def sat_ex_bounded(f: Formula, n: int, cap: int = DEFAULT_ENUM_CAP, backend: str = PRUNED) -> SatOutcome:
    """Decide satisfiability of an EX-fragment formula on trees of branching <= n.

    A satisfiable formula has a model whose branches all have length exactly
    md(f) and whose branching is at most n, completed by self-loops; this
    searches those trees in order of node count.
    """
    if n < 1:
        raise ValueError("branching bound must be >= 1")
    if fragment_of(desugar(f)) != Fragment.EX_ONLY:
        raise ValueError("sat_ex_bounded needs a formula of the EX fragment")
    depth = modal_depth(f)
    count = count_exact_depth(n, depth, 1)
    if count > cap:
        raise CapExceeded(f"{count} tree shapes to search (cap {cap}); raise --enum-cap")
    witness = _first_witness(f, exact_depth_shapes(n, depth), SELF_LOOP, backend)
    if witness is None:
        return SatOutcome(UNSAT)
    return SatOutcome(SAT, witness)


def sat_finite_tree(f: Formula, max_size: int, mode: FrontierMode, cap: int = DEFAULT_ENUM_CAP,
                    backend: str = PRUNED) -> SatOutcome:
    """Search every tree with at most max_size nodes; never answers a definite unsat."""
    if max_size < 1:
        raise ValueError("max_size must be >= 1")
    shapes = shapes_by_size(max_size)
    if len(shapes) > cap:
        raise CapExceeded(f"{len(shapes)} tree shapes to search (cap {cap}); raise --enum-cap")
    witness = _first_witness(f, shapes, mode, backend)
    if witness is None:
        return SatOutcome(UNSAT_WITHIN_BOUND, bound=f"all trees with at most {max_size} nodes ({mode})")
    return SatOutcome(SAT, witness)
