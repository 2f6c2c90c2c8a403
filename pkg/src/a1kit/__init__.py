"""Graded modules over A(1), the fundamental complex, and KO tables for BV_r."""

from .a1mod import A1Module, margolis, split_free, stable_equal, suspend, syzygy, tensor
from .classifying import build_P, build_P0, build_Pn, build_R, bv_cohomology
from .steenrod import build_a1, build_a1_mod_a0, build_joker
from .toda import build_complex, homology

__version__ = "0.1.0"

__all__ = [
    "A1Module",
    "build_P",
    "build_P0",
    "build_Pn",
    "build_R",
    "build_a1",
    "build_a1_mod_a0",
    "build_complex",
    "build_joker",
    "bv_cohomology",
    "homology",
    "margolis",
    "split_free",
    "stable_equal",
    "suspend",
    "syzygy",
    "tensor",
]
