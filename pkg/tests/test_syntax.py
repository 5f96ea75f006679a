import pytest
from hypothesis import given, settings

from qctl.syntax import (AU, AX, AXAG, EF, EU, EX, EXEF, TRUE, And, Exists, Forall, Fragment, Not, P, ParseError,
                         desugar, fragment_of, free_props, is_prenex, subformulas, length, modal_depth, parse, render)
from strategies import formulas


def test_parse_examples():
    assert parse("EX p") == EX(P("p"))
    assert parse("exists p. EX (x & p)") == Exists("p", EX(And(P("x"), P("p"))))
    assert parse("E[ p U q ]") == EU(P("p"), P("q"))


def test_render_examples():
    assert render(EX(P("p"))) == "EX p"
    assert render(Exists("p", And(P("p"), Not(P("p"))))) == "exists p. (p & ~p)"
    assert render(EU(TRUE, P("q"))) == "E[ true U q ]"


def test_precedence_and_associativity():
    assert parse("a | b & c") == parse("a | (b & c)")
    assert parse("a -> b -> c") == parse("(a -> b) -> c")
    assert parse("a <-> b -> c") == parse("a <-> (b -> c)")
    assert parse("a & b & c") == And(And(P("a"), P("b")), P("c"))


def test_modal_depth_examples():
    assert modal_depth(parse("p")) == 0
    assert modal_depth(parse("EX EX p")) == 2
    assert modal_depth(parse("exists p. E[p U EX q]")) == 2
    assert modal_depth(parse("EXEF p")) == 2
    assert modal_depth(parse("AXAG EX p")) == 3


def test_length_examples():
    assert length(parse("p")) == 1
    assert length(parse("~(p & q)")) == 4
    assert length(parse("EX p")) == 2


def test_fragment_examples():
    assert fragment_of(parse("EX p & AX q")) == Fragment.EX_ONLY
    assert fragment_of(parse("EF p")) == Fragment.EF_ONLY
    assert fragment_of(parse("EX p & EF q")) == Fragment.FULL
    assert fragment_of(parse("EXEF p & AXAG q")) == Fragment.EXEF_ONLY


def test_desugar_examples():
    assert desugar(EF(P("p"))) == EU(TRUE, P("p"))
    assert desugar(AX(P("p"))) == Not(EX(Not(P("p"))))
    assert desugar(P("p")) == P("p")


def test_free_props_respects_binding():
    # a quantifier's scope runs as far right as possible
    assert free_props(parse("exists p. (p & q) | p")) == {"q"}
    assert free_props(parse("(exists p. (p & q)) | p")) == {"p", "q"}
    assert free_props(parse("forall q. q")) == frozenset()


def test_prenex():
    assert is_prenex(parse("exists p. forall q. EX (p & q)"))
    assert not is_prenex(parse("EX exists p. p"))


@pytest.mark.parametrize("text", ["EX", "p &", "exists . p", "(p", "E[ p U ]", "p q", "A[p U q"])
def test_parse_errors(text):
    with pytest.raises(ParseError):
        parse(text)


@given(formulas())
@settings(max_examples=300)
def test_round_trip(f):
    assert parse(render(f)) == f


@given(formulas())
@settings(max_examples=200)
def test_modal_depth_bounded_by_length(f):
    # EXEF and AXAG are one node each but count 2 towards the depth
    doubled = sum(isinstance(g, (EXEF, AXAG)) for g in subformulas(f))
    assert modal_depth(f) <= length(f) + doubled
    if not doubled:
        assert modal_depth(f) <= length(f)


@given(formulas())
@settings(max_examples=200)
def test_desugar_uses_core_only(f):
    from qctl.syntax import AF, AG, AXAG as _AXAG, EXEF as _EXEF, Forall as _Forall, Iff, Implies, Or, operators
    extra = operators(desugar(f)) & {AX, EF, AG, AF, _EXEF, _AXAG, _Forall, Or, Implies, Iff}
    assert not extra


def test_exef_is_a_node():
    f = parse("EXEF p")
    assert isinstance(f, EXEF) and render(f) == "EXEF p"
    assert isinstance(parse("AXAG p"), AXAG)
    assert isinstance(parse("A[ p U q ]"), AU)
    assert isinstance(parse("forall p. p"), Forall)
