"""Confluent second-order SUSY partner potentials from the differential Wronskian formula."""
from ._backend import BACKEND

__version__ = "0.1.0"
__all__ = ["BACKEND", "__version__"]
