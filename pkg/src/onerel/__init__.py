"""Automaticity of one-relator semigroups with short relators.

Decides the automaticity class (prefix-automatic / automatic / biautomatic /
not automatic) of one-relator semigroups with relator length <= 3, builds the
explicit witness structures (normal-form acceptor + multiplier automata over
the padded pair alphabet), and verifies every construction against an
independent rewriting oracle at bounded depth.
"""

from .words import Alphabet, deglex_compare, prefix_t, suffix_t, occ, con, reverse
from .fsa import Fsa, Gsm, EPS, gsm_image

__all__ = [
    "Alphabet",
    "deglex_compare",
    "prefix_t",
    "suffix_t",
    "occ",
    "con",
    "reverse",
    "Fsa",
    "Gsm",
    "EPS",
    "gsm_image",
]
