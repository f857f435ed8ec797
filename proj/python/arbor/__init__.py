"""Finite-level computation with binary tree automorphism groups."""

from ._arbor import (
    GroupCase,
    GroupTable,
    Portrait,
    are_conjugate,
    arith,
    classify,
    enumerate,
    evaluate,
    find_conjugator,
    group,
    normalizer_order,
    power_conjugator,
    sign_image_is_full,
    verify,
)

__all__ = [
    "GroupCase",
    "GroupTable",
    "Portrait",
    "are_conjugate",
    "arith",
    "classify",
    "enumerate",
    "evaluate",
    "find_conjugator",
    "group",
    "normalizer_order",
    "power_conjugator",
    "sign_image_is_full",
    "verify",
]
