"""Exact finite-field computations in semi-derived Hall algebras of quivers with loops."""

__version__ = "0.1.0"

from .scalars import LaurentPoly, QuadExt, RationalFunction  # noqa: E402
from .quiver import BorcherdsCartan, Quiver, cartan_from_quiver, parse_quiver  # noqa: E402
from .reps import Budget, IsoClass, RepCategory, Representation  # noqa: E402
from .complexes import ComplexCategory, Z2Complex, stalk  # noqa: E402
from .sdh import SDHContext, SDHElement, mode_select  # noqa: E402

__all__ = [
    "LaurentPoly", "QuadExt", "RationalFunction",
    "BorcherdsCartan", "Quiver", "cartan_from_quiver", "parse_quiver",
    "Budget", "IsoClass", "RepCategory", "Representation",
    "ComplexCategory", "Z2Complex", "stalk",
    "SDHContext", "SDHElement", "mode_select",
]
