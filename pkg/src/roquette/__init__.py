"""Decomposition of finite p-groups (p odd) into edges of cyclic groups in the
Roquette category, with an exact class-function layer for cross-checking."""

from .constructions import build, group_from_spec, parse_spec, render
from .decomposition import Decomposition, LSequence, decompose, l_sequence, render_gap, render_json
from .groups import GroupTable, Permutation, Subgroup, close_generators

__all__ = [
    "Decomposition",
    "GroupTable",
    "LSequence",
    "Permutation",
    "Subgroup",
    "build",
    "close_generators",
    "decompose",
    "group_from_spec",
    "l_sequence",
    "parse_spec",
    "render",
    "render_gap",
    "render_json",
]
