"""Stein-operator polynomials of the normal product law and second-chaos diagnostics."""

from __future__ import annotations

from .chaos import (
    SpectralElement,
    cumulants,
    expect_poly,
    f8_element,
    mixture_element,
    mixture_q_poly,
    moments,
    normal_product,
    p6_diagnostic,
    stein_coefficients,
)
from .exact import DiffOp, Poly, PowerSeries, QuadRational
from .family import generate_family, make_stein_op_d2, stein_family, stein_poly

__all__ = [
    "DiffOp",
    "Poly",
    "PowerSeries",
    "QuadRational",
    "SpectralElement",
    "cumulants",
    "expect_poly",
    "f8_element",
    "generate_family",
    "make_stein_op_d2",
    "mixture_element",
    "mixture_q_poly",
    "moments",
    "normal_product",
    "p6_diagnostic",
    "stein_coefficients",
    "stein_family",
    "stein_poly",
]
