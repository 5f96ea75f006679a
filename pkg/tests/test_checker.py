import pytest
from hypothesis import assume, given, settings, strategies as st

import oracle
from qctl.checker import (EXHAUSTIVE, PRUNED, UnsupportedFormula, check, equivalent_on_small_trees, holds,
                          to_pnf, verify_witness)
from qctl.syntax import AF, AU, EU, Exists, Forall, Not, is_prenex, modal_depth, operators, parse, render
from qctl.trees import SELF_LOOP, STRICT, chain_pad, enumerate_trees, tree
from strategies import ex_formulas, formulas, small_trees

MODES = [("strict", 0, STRICT), ("selfloop", 0, SELF_LOOP), ("chainpad", 2, chain_pad(2))]


def test_check_examples():
    assert check(tree(["p"]), STRICT, 0, parse("p")).verdict
    assert not check(tree(["p"]), STRICT, 0, parse("exists q. q & ~p")).verdict
    bind1 = parse("EX x & ~(exists q. (EX (x & q) & EX (x & ~q)))")
    assert check(tree(([], [["x"], []])), STRICT, 0, bind1).verdict


@pytest.mark.parametrize("backend", [PRUNED, EXHAUSTIVE])
def test_check_examples_match_oracle(backend):
    cases = [(tree(["p"]), "p"), (tree(["p"]), "exists q. q & ~p"),
             (tree(([], [["x"], []])), "EX x & ~(exists q. (EX (x & q) & EX (x & ~q)))"),
             (tree(([], [["x"], ["x"]])), "EX x & ~(exists q. (EX (x & q) & EX (x & ~q)))")]
    for t, text in cases:
        f = parse(text)
        assert check(t, STRICT, 0, f, backend).verdict == oracle.holds(t, f)


@given(small_trees(max_nodes=5), formulas(max_leaves=6), st.sampled_from(MODES), st.sampled_from([PRUNED, EXHAUSTIVE]))
@settings(max_examples=300, deadline=None)
def test_backends_match_oracle(t, f, mode, backend):
    kind, pad, m = mode
    if kind == "strict":
        assume(not operators(f) & {AF, EU, AU})
    v = t.size - 1
    assert check(t, m, v, f, backend).verdict == oracle.holds(t, f, kind, pad, v)


def test_strict_rejects_until():
    for text in ["AF p", "E[ p U q ]", "A[ p U q ]"]:
        with pytest.raises(UnsupportedFormula):
            check(tree(["p"]), STRICT, 0, parse(text))


@given(small_trees(max_nodes=5), formulas(max_leaves=6))
@settings(max_examples=150, deadline=None)
def test_quantifier_duality(t, f):
    a = holds(t, SELF_LOOP, Not(Exists("p", Not(f))))
    assert a == holds(t, SELF_LOOP, Forall("p", f))


@given(small_trees(max_nodes=6), formulas(max_leaves=6), st.randoms(use_true_random=False))
@settings(max_examples=100, deadline=None)
def test_sibling_permutation_invariance(t, f, rnd):
    from qctl.trees import TreeModel
    shuffled = TreeModel(tuple(tuple(rnd.sample(c, len(c))) for c in t.children), t.labels, t.root)
    assert holds(t, SELF_LOOP, f) == holds(shuffled, SELF_LOOP, f)


_EXACT = {}


def _exact_trees(d):
    if d not in _EXACT:
        _EXACT[d] = list(enumerate_trees(2, d, ["a", "b"]))
    return _EXACT[d]


@given(ex_formulas(), st.integers(0, 2 ** 16))
@settings(max_examples=80, deadline=None)
def test_frontier_invariance_for_ex_formulas(f, seed):
    trees = _exact_trees(modal_depth(f))
    t = trees[seed % len(trees)]
    verdicts = {holds(t, m, f) for m in (STRICT, SELF_LOOP, chain_pad(1), chain_pad(2), chain_pad(3))}
    assert len(verdicts) == 1


@given(small_trees(max_nodes=5), formulas(max_leaves=6))
@settings(max_examples=100, deadline=None)
def test_witness_verifies(t, f):
    out = check(t, SELF_LOOP, t.root, f)
    assert verify_witness(t, SELF_LOOP, t.root, f, out)


def test_witness_for_existential_prefix():
    t = tree(([], [["a"], []]))
    out = check(t, STRICT, 0, parse("exists q. EX (q & a) & ~EX (q & ~a)"))
    assert out.verdict and out.witness["q"] == {1}


def test_to_pnf_examples():
    assert render(to_pnf(parse("EX exists p. p"))) == "exists p. EX p"
    assert render(to_pnf(parse("~forall p. EX p"))) == "exists p. ~EX p"
    assert render(to_pnf(parse("exists p. EX p"))) == "exists p. EX p"


def test_to_pnf_rejects_ef():
    with pytest.raises(UnsupportedFormula):
        to_pnf(parse("EF exists p. p"))


@given(ex_formulas())
@settings(max_examples=60, deadline=None)
def test_to_pnf_sound(f):
    from qctl.syntax import free_props, length
    g = to_pnf(f)
    assert is_prenex(g)
    assert equivalent_on_small_trees(f, g, 2, modal_depth(f), sorted(free_props(f)))


def test_equivalent_on_small_trees_examples():
    assert equivalent_on_small_trees(parse("EF p"), parse("p | EXEF p"), 2, 2, ["p"])
    assert equivalent_on_small_trees(parse("EX p"), parse("EX p"), 2, 1, ["p"])
    assert not equivalent_on_small_trees(parse("EX p"), parse("AX p"), 2, 1, ["p"])


def test_bound_variable_shadowing():
    t = tree(([], [["a"]]))
    # the inner q is the innermost binding; the outer one is unused inside
    assert holds(t, STRICT, parse("forall q. exists q. EX (q <-> a)"))
    assert not holds(t, STRICT, parse("exists q. forall q. EX (q <-> a)"))
