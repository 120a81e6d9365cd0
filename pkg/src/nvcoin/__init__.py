"""Exact Nielsen, Reidemeister and Lefschetz coincidence invariants for n-valued maps of flat manifolds."""

from .errors import MismatchDetected, NonIntegralResult, NvCoinError
from .groups import FlatGroup, GroupElement, SingleMorphism
from .invariants import compute_invariants, lefschetz, nielsen, reidemeister, root_invariants
from .linalg import Lattice
from .morphism import NvMorphism, SemidirectElement, sigma_analysis
from .oracle import AffineMap, AffineNValuedMap, enumerate_coincidences, oracle_report

__all__ = [
    "AffineMap", "AffineNValuedMap", "FlatGroup", "GroupElement", "Lattice", "MismatchDetected",
    "NonIntegralResult", "NvCoinError", "NvMorphism", "SemidirectElement", "SingleMorphism",
    "compute_invariants", "enumerate_coincidences", "lefschetz", "nielsen", "oracle_report",
    "reidemeister", "root_invariants", "sigma_analysis",
]
