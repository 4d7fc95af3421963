"""Exact harmonic-form spaces on invariant almost-Hermitian models.

Computes Bott-Chern, Aeppli, Dolbeault, del- and Hodge-harmonic (p,q)-form
spaces on the Kodaira-Thurston family, a hyperelliptic solvmanifold, and the
flat 4-torus by exact Gaussian-rational linear algebra over Fourier-character
sectors; verifies ellipticity of the associated Laplacians through exact
principal symbols.
"""

from ._kernel import BACKEND as KERNEL_BACKEND
from .algebra import BasisIndex, Form, Scalar, TrigPoly, form_from_text, form_to_text
from .calculus import (
    adjoint,
    apply_d,
    component,
    ellipticity_check,
    gauduchon_defect,
    laplacian,
    lck_check,
    principal_symbol,
    star,
)
from .model import Model, builtin, conformal_scale, load_model, model_to_document
from .solver import (
    SolveReport,
    as_membership,
    assemble,
    b_minus,
    bc_cap_as,
    circle_count,
    compare,
    deck_project,
    lefschetz11,
    mode_classes,
    nullspace,
    solve_harmonic,
)

__version__ = "0.1.0"

__all__ = [
    "KERNEL_BACKEND", "__version__",
    "Scalar", "TrigPoly", "BasisIndex", "Form", "form_to_text", "form_from_text",
    "Model", "builtin", "load_model", "model_to_document", "conformal_scale",
    "apply_d", "component", "star", "adjoint", "laplacian", "principal_symbol",
    "ellipticity_check", "gauduchon_defect", "lck_check",
    "mode_classes", "assemble", "nullspace", "deck_project", "solve_harmonic",
    "b_minus", "compare", "lefschetz11", "circle_count", "as_membership",
    "bc_cap_as", "SolveReport",
]
