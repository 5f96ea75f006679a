import pytest
from hypothesis import given, settings

from qctl import translations as TR
from qctl.checker import holds
from qctl.sat import SAT, UNSAT_WITHIN_BOUND, sat_ex_bounded, sat_finite_tree
from qctl.syntax import AXAG, EXEF, Fragment, P, free_props, in_fragment, modal_depth, parse, render
from qctl.trees import SELF_LOOP, STRICT, chain_pad, tree
from strategies import ex_formulas, formulas


def test_shape_formula_examples():
    s0 = TR.shape_formula(0)
    assert free_props(s0) == {"layer_m1", "layer0"}
    assert render(s0).endswith("& layer0")
    nostutter = "AG (layer1 -> ~(exists p. (p & EF (layer1 & ~p))))"
    assert nostutter in render(TR.shape_formula(1))


def test_is_k_layered_examples():
    chain = tree((["layer1"], [(["layer0"], [["layer_m1"]])]))
    assert TR.is_k_layered(chain, 1)
    # a layer0 root needs a layer_m1 child before anything else is looked at
    report = TR.is_k_layered(tree((["layer0"], [(["layer0"], [["layer_m1"]])])), 1)
    assert not report and report.condition == "b"
    stutter = (["layer1"], [(["layer0"], [["layer_m1"]]), (["layer1"], [(["layer0"], [["layer_m1"]])])])
    report = TR.is_k_layered(tree(stutter), 1)
    assert not report and report.condition == "c"
    report = TR.is_k_layered(tree((["layer0"], [["layer_m1"]])), 1)
    assert not report and report.condition == "d"
    report = TR.is_k_layered(tree((["layer1"], [(["layer0", "layer1"], [["layer_m1"]])])), 1)
    assert not report and report.condition == "a"


def test_shape_formula_agrees_with_validator_on_examples():
    trees = [tree((["layer1"], [(["layer0"], [["layer_m1"]])])),
             tree((["layer1"], [(["layer0"], [["layer_m1"]]), ["layer_m1"]])),
             tree((["layer1"], [(["layer1"], [(["layer0"], [["layer_m1"]])])])),
             tree((["layer1"], [(["layer0"], [(["layer0"], [["layer_m1"]])])])),
             tree((["layer1"], [["layer_m1"]]))]
    for t in trees:
        assert holds(t, SELF_LOOP, TR.shape_formula(1)) == bool(TR.is_k_layered(t, 1))


def test_ex_to_ef_examples():
    assert render(TR.ex_to_ef(parse("EX p"))) == render(parse("EF (layer0 & p)") & TR.shape_formula(1))
    assert TR.ex_to_ef(parse("p")) == parse("p") & TR.shape_formula(0)
    got = TR.ex_to_ef(parse("exists q. EX q"))
    assert render(got) == render(parse("exists q. EF (layer0 & q)") & TR.shape_formula(1))


def test_translations_reject_reserved_names():
    with pytest.raises(ValueError):
        TR.ex_to_ef(parse("EX layer0"))
    with pytest.raises(ValueError):
        TR.embed_finite_in_infinite(parse("in"))


def test_translations_reject_other_fragments():
    with pytest.raises(ValueError):
        TR.ex_to_ef(parse("EF p"))
    with pytest.raises(ValueError):
        TR.embed_gt_in_infinite(parse("EX p"))


@given(ex_formulas())
@settings(max_examples=30, deadline=None)
def test_decorated_witness_satisfies_ef_translation(f):
    out = sat_ex_bounded(f, 2)
    if out.status != SAT:
        return
    k = modal_depth(f)
    dec = TR.decorate_layers(out.witness, k)
    g = TR.ex_to_ef(f)
    verdicts = {holds(dec, m, g) for m in (SELF_LOOP, chain_pad(1), chain_pad(2), chain_pad(3))}
    assert verdicts == {True}
    assert TR.is_k_layered(dec, k)


def test_ex_to_exef_finite_examples():
    got = TR.ex_to_exef_finite(parse("EX p"))
    assert render(got) == render(parse("EXEF (layer0 & p)") & TR.shape_finite(1))
    assert "AXAG (layer0 -> ~EXEF true)" in render(TR.shape_finite(2))
    assert TR.ex_to_exef_finite(parse("p & ~q")) == parse("p & ~q") & TR.shape_finite(0)


def test_weak_progress_rejects_leaf_only_models():
    # EX AX false needs a child without children, which sits above layer 0
    f = parse("EX AX false")
    assert sat_finite_tree(f, 4, STRICT).status == SAT
    assert sat_finite_tree(TR.ex_to_exef_finite(f), 4, STRICT).status == SAT
    strong = TR.ex_to_exef_finite(f, weak_progress=True)
    assert sat_finite_tree(strong, 4, STRICT).status == UNSAT_WITHIN_BOUND


@given(ex_formulas(max_depth=2, max_quantifiers=1))
@settings(max_examples=25, deadline=None)
def test_finite_translation_preserves_satisfiability(f):
    a = sat_finite_tree(f, 5, STRICT)
    b = sat_finite_tree(TR.ex_to_exef_finite(f), 5, STRICT)
    assert a.is_sat == b.is_sat
    if a.is_sat:
        dec = TR.decorate_finite(a.witness, modal_depth(f))
        assert holds(dec, STRICT, TR.ex_to_exef_finite(f))


def test_embedding_examples():
    got = TR.embed_finite_in_infinite(parse("EX p"))
    assert render(got) == render(parse("EX (in & p)") & TR.phi_fin())
    assert TR.embed_finite_in_infinite(parse("p")) == parse("p") & TR.phi_fin()
    assert render(TR.phi_fin()) == "in & AF ~in & AG (~in -> AG ~in)"
    got = TR.embed_gt_in_infinite(parse("EXEF p"))
    assert render(got) == render(parse("EXEF (in & p)") & TR.phi_fin_gt())
    assert render(TR.phi_fin_gt()) == "in & AXAG (~in -> AXAG ~in)"
    assert render(TR.totalize(parse("p"))) == "p & EXEF true & AXAG EXEF true"


def test_finite_embedding_on_a_padded_tree():
    # a finite model of EX p, embedded under an infinite tail of ~in nodes
    t = tree((["in"], [(["in", "p"], [[]])]))
    assert holds(t, SELF_LOOP, TR.embed_finite_in_infinite(parse("EX p")))
    assert not holds(t, SELF_LOOP, TR.embed_finite_in_infinite(parse("AX p & EX ~p")))


def test_rewrite_modality_examples():
    assert TR.rewrite_modality(parse("EX p")) == EXEF(P("p"))
    assert TR.rewrite_modality(parse("AX p")) == AXAG(P("p"))
    assert render(TR.rewrite_modality(parse("EX AX p"), "ex-ef")) == "EF AG p"
    with pytest.raises(ValueError):
        TR.rewrite_modality(parse("EX p"), "ex-af")


@given(ex_formulas(max_depth=3))
@settings(max_examples=100)
def test_rewrite_modality_round_trip(f):
    for mapping, frag in (("ex-exef", Fragment.EXEF_ONLY), ("ex-ef", Fragment.EF_ONLY)):
        g = TR.rewrite_modality(f, mapping)
        assert in_fragment(g, frag)
        assert TR.rewrite_modality(g, mapping, inverse=True) == f
