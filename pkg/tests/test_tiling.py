import itertools
import json

import pytest
from hypothesis import given, settings, strategies as st

from qctl import tiling as TL
from qctl.trees import CapExceeded

PAIRS = list(itertools.product("ab", repeat=2))
CHECKER = [["a", "b"], ["b", "a"]]


def test_validate_examples():
    inst = TL.checkerboard()
    assert TL.validate_tiling(inst, 1, CHECKER)
    assert not TL.validate_tiling(inst, 1, [["b", "a"], ["a", "b"]])
    const = TL.tiling_instance(["a"], [], [("a", "a")], ["a"])
    assert not TL.validate_tiling(const, 1, [["a", "a"], ["a", "a"]])


def test_validate_size_mismatch():
    with pytest.raises(ValueError):
        TL.validate_tiling(TL.checkerboard(), 1, [["a"]])


def test_solve_examples():
    inst = TL.checkerboard()
    tau = TL.solve_tiling(inst, 1)
    assert tau is not None and TL.validate_tiling(inst, 1, tau)
    no_h = TL.tiling_instance(["a", "b"], [], PAIRS, ["a"])
    assert TL.solve_tiling(no_h, 1) is None
    single = TL.tiling_instance(["a"], [("a", "a")], [("a", "a")], ["a"])
    assert set(TL.solve_tiling(single, 2).values()) == {"a"}


@given(st.frozensets(st.sampled_from(PAIRS)), st.frozensets(st.sampled_from(PAIRS)), st.sampled_from("ab"))
@settings(max_examples=120)
def test_solver_agrees_with_enumeration(hori, verti, first):
    inst = TL.tiling_instance(["a", "b"], hori, verti, [first])
    tau = TL.solve_tiling(inst, 1)
    if tau is not None:
        assert TL.validate_tiling(inst, 1, tau)
    exists = any(t[0, 0] == first for t in TL.all_tilings(inst, 2))
    assert (tau is not None) == exists


def test_init_fixes_row_zero():
    inst = TL.tiling_instance(["a", "b"], PAIRS, PAIRS, ["b", "a"])
    tau = TL.solve_tiling(inst, 1)
    assert tau[0, 0] == "b" and tau[0, 1] == "a"


def test_search_cap():
    inst = TL.checkerboard()
    with pytest.raises(CapExceeded, match="--search-cap"):
        TL.solve_tiling(inst, 3)


def _amtp(**kw):
    base = dict(n=2, tiles=["a"], hori=[("a", "a")], verti=[("a", "a")], t0=["a"], acc=["a"], multi=[("a", "a")])
    base.update(kw)
    return TL.amtp_instance(**base)


def test_amtp_examples():
    assert not TL.solve_amtp(_amtp(acc=[]))
    assert TL.solve_amtp(_amtp())


def test_amtp_empty_first_row_alphabet():
    # the leading universal level ranges over no words
    assert TL.solve_amtp(_amtp(t0=[]))


def test_amtp_validation():
    with pytest.raises(ValueError):
        _amtp(n=3)
    with pytest.raises(ValueError):
        _amtp(acc=["z"])


def test_amtp_cap():
    two = dict(tiles=["a", "b"], hori=PAIRS, verti=PAIRS, t0=["a", "b"], acc=["a"], multi=PAIRS)
    with pytest.raises(CapExceeded, match="--search-cap"):
        TL.solve_amtp(_amtp(**two), cap=100)


def test_load_instance():
    tiling = TL.load_instance(json.dumps({"tiles": ["a", "b"], "hori": [["a", "b"]], "verti": [], "init": ["a"]}))
    assert isinstance(tiling, TL.TilingInstance) and tiling.hori == {("a", "b")}
    amtp = TL.load_instance({"tiles": ["a"], "n": 2, "t0": ["a"], "acc": ["a"], "multi": [["a", "a"]]})
    assert isinstance(amtp, TL.AMTPInstance)
    with pytest.raises(ValueError):
        TL.load_instance({"tiles": ["a"]})
    with pytest.raises(ValueError):
        TL.load_instance({"tiles": ["a"], "hori": [["a", "b"]], "init": ["a"]})
