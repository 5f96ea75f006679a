"""Quantified CTL on trees: syntax, model checking, satisfiability, and the hardness constructions."""

from .checker import EXHAUSTIVE, PRUNED, check, holds, to_pnf
from .sat import sat_ex_bounded, sat_finite_tree
from .syntax import Formula, modal_depth, parse, render
from .trees import SELF_LOOP, STRICT, TreeModel, chain_pad, tree, tree_from_json

__all__ = ["EXHAUSTIVE", "PRUNED", "check", "holds", "to_pnf", "sat_ex_bounded", "sat_finite_tree", "Formula",
           "modal_depth", "parse", "render", "SELF_LOOP", "STRICT", "TreeModel", "chain_pad", "tree",
           "tree_from_json"]
