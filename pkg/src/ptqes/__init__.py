"""PT-symmetric quasi-exactly solvable potentials.

Submodules
----------
algebra     shifted-coordinate polynomials and rational expressions
potentials  quartic / sextic families and their shifted reductions
qes         sl(2) blocks and their algebraic spectra
susy        superpotentials, partner potentials and intertwiners
eigen       dense non-Hermitian eigenvalue engine
shoot       complex shooting and finite-difference spectra
cli         command-line front end
"""
from . import algebra, eigen, potentials, qes, shoot, susy
from .algebra import RationalExpression, ShiftedPolynomial
from .errors import PTQESError
from .potentials import PotentialSpec

__version__ = "0.1.0"

__all__ = [
    "algebra",
    "eigen",
    "potentials",
    "qes",
    "shoot",
    "susy",
    "RationalExpression",
    "ShiftedPolynomial",
    "PotentialSpec",
    "PTQESError",
]
