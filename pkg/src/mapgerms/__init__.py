"""Exact jet-level invariants of map-germs over Q and F_p."""

from .errors import ContextMismatch, DSLError, Refusal
from .field import FieldSpec
from .jets import (INFINITE, GermMap, Jet, JetRing, UnfoldingMap, jet_mul,
                   jet_partial, jet_substitute, ord_)

__all__ = ["FieldSpec", "JetRing", "Jet", "GermMap", "UnfoldingMap", "INFINITE",
           "jet_mul", "jet_partial", "jet_substitute", "ord_", "Refusal",
           "ContextMismatch", "DSLError"]
