"""Truncated variational solver for ground states of the reduced equation."""
from .model import GalerkinModel, build_galerkin, evaluate_energy, hessian_vector
from .nehari import SolutionReport, cone_maximum, nehari_minimax
from .radial import RadialProfile, radial_solution
from .scan import ScanPoint, ScanResult, symmetry_break_scan

__all__ = [
    "GalerkinModel", "RadialProfile", "ScanPoint", "ScanResult", "SolutionReport",
    "build_galerkin", "cone_maximum", "evaluate_energy", "hessian_vector",
    "nehari_minimax", "radial_solution", "symmetry_break_scan",
]
