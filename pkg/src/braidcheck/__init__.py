"""Verification lab for lattice exchange algebras of braided quantum groups.

Builds the classical r-matrix data and quantum R-matrices of four integrable
lattice models, and machine-checks the full catalogue of algebraic identities
they are supposed to satisfy (Yang-Baxter equations, factorization and
unitarity relations, commuting transfer matrices) at randomly sampled
parameter points.
"""

from .models import MODEL_IDS, build_model
from .classical import build_classical
from .quantum import ParamPoint, build_quantum
from .verifier import CheckId, run_check

__all__ = [
    "MODEL_IDS",
    "build_model",
    "build_classical",
    "ParamPoint",
    "build_quantum",
]

__version__ = "0.1.0"
