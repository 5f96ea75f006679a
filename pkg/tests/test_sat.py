import pytest
from hypothesis import given, settings

import oracle
from qctl.sat import SAT, UNSAT, UNSAT_WITHIN_BOUND, sat_ex_bounded, sat_finite_tree
from qctl.syntax import parse
from qctl.trees import SELF_LOOP, STRICT, CapExceeded, bounded_depth_shapes, labeled_trees, shape_tree
from strategies import ex_formulas


def test_sat_ex_examples():
    f = parse("EX p & EX ~p")
    assert sat_ex_bounded(f, 1).status == UNSAT
    out = sat_ex_bounded(f, 2)
    assert out.status == SAT
    t = out.witness
    assert sorted(sorted(t.labels[c]) for c in t.children[t.root]) == [[], ["p"]]
    assert sat_ex_bounded(parse("false"), 3).status == UNSAT


def test_sat_ex_rejects_other_fragments():
    with pytest.raises(ValueError):
        sat_ex_bounded(parse("EF p"), 2)


def test_sat_finite_examples():
    f = parse("EX true")
    assert sat_finite_tree(f, 1, STRICT).status == UNSAT_WITHIN_BOUND
    out = sat_finite_tree(f, 2, STRICT)
    assert out.status == SAT and out.witness.size == 2
    assert sat_finite_tree(parse("AXAG false & EXEF true"), 5, STRICT).status == UNSAT_WITHIN_BOUND


def test_caps_name_the_flag():
    with pytest.raises(CapExceeded, match="--enum-cap"):
        sat_ex_bounded(parse("EX EX EX p"), 3, cap=10)
    with pytest.raises(CapExceeded, match="--enum-cap"):
        sat_finite_tree(parse("p"), 8, STRICT, cap=10)


def _brute_force_sat(f, n, depth):
    """Any labeling of any tree of height <= depth and branching <= n, by the reference evaluator."""
    from qctl.syntax import free_props
    props = sorted(free_props(f))
    return any(oracle.holds(t, f, "selfloop") for t in labeled_trees(bounded_depth_shapes(n, depth), props))


@given(ex_formulas(max_depth=1, max_quantifiers=1, props=("a",)))
@settings(max_examples=25, deadline=None)
def test_sat_ex_matches_brute_force(f):
    from qctl.syntax import modal_depth
    for n in (1, 2):
        out = sat_ex_bounded(f, n)
        assert out.is_sat == _brute_force_sat(f, n, modal_depth(f) + 1)
        if out.is_sat:
            assert oracle.holds(out.witness, f, "selfloop")


@given(ex_formulas())
@settings(max_examples=40, deadline=None)
def test_sat_monotone_in_branching(f):
    if sat_ex_bounded(f, 1).is_sat:
        assert sat_ex_bounded(f, 2).is_sat


def test_finite_witness_is_a_model():
    f = parse("EXEF (p & AXAG false) & AXAG (p -> EXEF true) | EX EX q")
    out = sat_finite_tree(f, 4, STRICT)
    assert out.is_sat and oracle.holds(out.witness, f)


def test_first_witness_is_deterministic():
    f = parse("exists q. EX q & EX ~q & EX a")
    a, b = sat_ex_bounded(f, 3), sat_ex_bounded(f, 3)
    assert a.witness == b.witness
