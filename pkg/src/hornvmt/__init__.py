"""Translate linear constrained Horn clauses into VMT transition systems."""

from .horn import HornClause, HornSystem, load_system
from .oracle import Domain, check_equivalence, derive, reach
from .translate import TransitionSystem, simplify_inline, translate_system
from .vmt import emit_bmc, emit_vmt

__version__ = "0.1.0"

__all__ = [
    "Domain",
    "HornClause",
    "HornSystem",
    "TransitionSystem",
    "check_equivalence",
    "derive",
    "emit_bmc",
    "emit_vmt",
    "load_system",
    "reach",
    "simplify_inline",
    "translate_system",
]
