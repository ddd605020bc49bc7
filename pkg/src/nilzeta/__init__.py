"""Exact computation of local ideal zeta functions of class-2 Lie rings."""

from .ratfun import GeoRatFun, geo_equal, check_functional_equation, series_in_T
from .liering import Presentation, block_odd, block_even, direct_sum, from_R, oracle_count
from .building import building_series, assemble_zeta
from .cones import closed_form, assemble_A, thm11_A

__all__ = [
    "GeoRatFun", "geo_equal", "check_functional_equation", "series_in_T",
    "Presentation", "block_odd", "block_even", "direct_sum", "from_R", "oracle_count",
    "building_series", "assemble_zeta", "closed_form", "assemble_A", "thm11_A",
]
