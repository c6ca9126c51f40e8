"""assocvar: finitely presented associative algebras made executable.

Exact free-algebra arithmetic, degree-truncated completion and normal
forms, k-point varieties with their Zariski opens, local function rings
at matrix modules, phase spaces carrying the universal derivation, the
two-sided tensor metric with pointwise Gram matrices, and numeric
geodesics on the real points of affine charts.
"""

__version__ = "0.1.0"

from .algebra import FpAlgebra, AlgebraHom  # noqa: F401
from .freealg import NcPoly, Presentation, parse_presentation  # noqa: F401
