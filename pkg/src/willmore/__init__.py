"""Exact construction and verification of Willmore surfaces from rational data.

The package builds superconformal minimal surfaces in R^n out of rational
holomorphic data, verifies conformal-geometric identities exactly over
Q(i)[sqrt(d)], computes pedal/adjoint transforms, analyses ends, and solves
Gram-matrix realization problems for prescribed isotropy constraints.
"""

from .adjoint import (
    AdjointError, AdjointSurface, adjoint, pedal, recover_g, verify_contact,
)
from .algebra import Poly, Rat, ResidueObstruction, rational_integral
from .ends import EndProfile, EndsError, analyze_end, check_closed_willmore
from .field import CoeffField, Element, FieldError, parse_element
from .gram import (
    Ansatz, GramError, Inconsistent, assemble_surface, build_system,
    numerator_ansatz, pole_ansatz, realize, realize_exact, solve_system,
)
from .moebius import (
    MoebiusData, frame_at, is_willmore, s_willmore_certificate,
    willmore_energy, willmore_residual,
)
from .specfile import SpecError, bundled_path, load_json
from .surface import MinimalSurface, NonConformal, SurfaceError

__all__ = [
    "AdjointError", "AdjointSurface", "Ansatz", "CoeffField", "Element",
    "EndProfile", "EndsError", "FieldError", "GramError", "Inconsistent",
    "MinimalSurface", "MoebiusData", "NonConformal", "Poly", "Rat",
    "ResidueObstruction", "SpecError", "SurfaceError", "adjoint",
    "analyze_end", "assemble_surface", "build_system", "bundled_path",
    "check_closed_willmore", "frame_at", "is_willmore", "load_json",
    "numerator_ansatz", "parse_element", "pedal", "pole_ansatz",
    "rational_integral", "realize", "realize_exact", "recover_g",
    "s_willmore_certificate", "solve_system", "verify_contact",
    "willmore_energy", "willmore_residual",
]

__version__ = "0.1.0"
