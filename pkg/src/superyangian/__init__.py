"""Exact symbolic computations in the super Yangian Y(gl_{M|N}) and its
twisted super Yangian: normal forms, central series, quantum Berezinians
and quasi-determinant maps, all checked on truncated series windows."""

__version__ = "0.1.0"

from .series import SeriesMatrix, TruncSeries
from .tensor import SuperContext, SuperTensor
from .twisted import TwistedModel
from .yangian import Yangian

__all__ = ["SeriesMatrix", "SuperContext", "SuperTensor", "TruncSeries", "TwistedModel", "Yangian", "__version__"]
