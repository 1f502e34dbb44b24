"""Steiner-Soddy Poncelet porism: inversive construction, invariants and loci."""

from .centers import Triangle, kimberling
from .chain import PorismConfig, Regime, SteinerChain, chain_at, classify_regime
from .checks import DEFAULT_SUITE, VerificationReport, verify_all
from .estimators import ConicFitter, LocusClassifier, PorismSweepTransformer
from .geom import Circle, Conic, ConicKind, Line, Point, Polygon, conic_from_points
from .invariants import half_tangent_report, half_tangents
from .loci import LocusKind, LocusResult, classify_locus, locus, sweep_center
from .porism import BranchState, branch_state, polygon_at
from .tolerances import DEFAULT, PROFILES, Tolerances

__all__ = [
    "BranchState", "Circle", "Conic", "ConicFitter", "ConicKind", "DEFAULT", "DEFAULT_SUITE", "Line",
    "LocusClassifier", "LocusKind", "LocusResult", "PROFILES", "Point", "Polygon", "PorismConfig",
    "PorismSweepTransformer", "Regime", "SteinerChain", "Tolerances", "Triangle", "VerificationReport",
    "branch_state", "chain_at", "classify_locus", "classify_regime", "conic_from_points",
    "half_tangent_report", "half_tangents", "kimberling", "locus", "polygon_at", "sweep_center",
    "verify_all",
]
