"""Finite simplicial filters and lifting-property reformulations of model-theoretic dividing lines."""

__version__ = "0.1.0"
