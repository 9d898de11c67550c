"""Analytic-function DSL, contours and the holomorphic functional calculus."""

from .calculus import calc_contour, calc_normal, calc_triangular, contour_for, quadrature
from .contour import Circle, Contour, auto_contour
from .expr import BranchCut, HoloFunction, parse, pretty

__all__ = [
    "BranchCut",
    "Circle",
    "Contour",
    "HoloFunction",
    "auto_contour",
    "calc_contour",
    "calc_normal",
    "calc_triangular",
    "contour_for",
    "parse",
    "pretty",
    "quadrature",
]
