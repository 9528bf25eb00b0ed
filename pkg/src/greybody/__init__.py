"""Rigorous lower bounds on greybody factors of non-rotating black holes."""

__version__ = "0.1.0"

from .bounds import (  # noqa: E402
    BoundReport,
    bound_dilatonic2p1_closed,
    bound_dilatonic3p1_closed,
    bound_quadrature,
    bound_rn_closed,
    bound_schwarzschild,
    bound_tangherlini_closed,
    closed_form_bound,
)
from .comparators import asymptotic_rn, exact_dilatonic2p1, wkb_rn  # noqa: E402
from .geometry import (  # noqa: E402
    Dilatonic2p1Geometry,
    Dilatonic3p1Geometry,
    Mode,
    RNGeometry,
    TangherliniGeometry,
)
from .oracle import transmission_numeric  # noqa: E402

__all__ = [
    "BoundReport",
    "Dilatonic2p1Geometry",
    "Dilatonic3p1Geometry",
    "Mode",
    "RNGeometry",
    "TangherliniGeometry",
    "asymptotic_rn",
    "bound_dilatonic2p1_closed",
    "bound_dilatonic3p1_closed",
    "bound_quadrature",
    "bound_rn_closed",
    "bound_schwarzschild",
    "bound_tangherlini_closed",
    "closed_form_bound",
    "exact_dilatonic2p1",
    "transmission_numeric",
    "wkb_rn",
]
