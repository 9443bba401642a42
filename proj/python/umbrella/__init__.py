"""Singular points of generalized distance-squared mappings of the plane.

Mapping specs are dicts with keys ``p`` (centres), ``form`` and either ``A``
(coefficient rows) or, for the ellipse/circle form, ``a`` and ``b``.
"""

from ._core import (
    UmbrellaError,
    analyze,
    classify,
    degeneracy,
    evaluate,
    experiment,
    figure,
    jacobian,
    oracle,
)

__all__ = [
    "UmbrellaError",
    "analyze",
    "classify",
    "degeneracy",
    "evaluate",
    "experiment",
    "figure",
    "jacobian",
    "oracle",
]
