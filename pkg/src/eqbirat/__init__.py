"""Equivariant birational invariants of ``Z/p``-actions from fixed-locus data."""

from .atoms import AtomRecord, catalog_low_dim, feasibility, obstruction_report
from .blowup import BlowupCenter, admissible_centers, blowup, fuzz_sequence
from .invariants import (
    combined_invariant,
    fine_invariant,
    hodge_coeff_obstruction,
    invariant_I,
    invariant_J,
    invariant_K,
)
from .laurent import LaurentPoly
from .locus import Configuration, build_example, validate
from .symbols import DualGroup, beta, build_presentation

__all__ = [
    "AtomRecord",
    "BlowupCenter",
    "Configuration",
    "DualGroup",
    "LaurentPoly",
    "admissible_centers",
    "beta",
    "blowup",
    "build_example",
    "build_presentation",
    "catalog_low_dim",
    "combined_invariant",
    "feasibility",
    "fine_invariant",
    "fuzz_sequence",
    "hodge_coeff_obstruction",
    "invariant_I",
    "invariant_J",
    "invariant_K",
    "obstruction_report",
    "validate",
]
