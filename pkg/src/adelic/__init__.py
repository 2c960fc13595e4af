"""Exact harmonic analysis on adeles of curves over finite fields, with surface-level checks."""

from .adeles import AdeleError, AdeleWindow, InstabilityError, make_window, restricted_complex_cohomology
from .algebra import CycloValue, Field, FieldError, field_of_order, make_field
from .curve import Divisor, ZetaSeries, l_dim, parse_divisor, zeta_from_counts
from .harmonic import FnTable, HarmonicError, fourier, rr_via_parseval
from .hecke import HeckeError, functional_equation, hecke_zeta
from .lattice import LatticeTerm, QuadrantSet, enumerate_free_lattice
from .series import ParseError, Place, RationalFunction
from .surface import SurfaceError, parse_form, residue_relation_curve, residue_relation_point

__all__ = [
    "AdeleError",
    "AdeleWindow",
    "CycloValue",
    "Divisor",
    "Field",
    "FieldError",
    "FnTable",
    "HarmonicError",
    "HeckeError",
    "InstabilityError",
    "LatticeTerm",
    "ParseError",
    "Place",
    "QuadrantSet",
    "RationalFunction",
    "SurfaceError",
    "ZetaSeries",
    "enumerate_free_lattice",
    "field_of_order",
    "fourier",
    "functional_equation",
    "hecke_zeta",
    "l_dim",
    "make_field",
    "make_window",
    "parse_divisor",
    "parse_form",
    "residue_relation_curve",
    "residue_relation_point",
    "restricted_complex_cohomology",
    "rr_via_parseval",
    "zeta_from_counts",
]
