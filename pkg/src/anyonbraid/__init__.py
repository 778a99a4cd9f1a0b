"""Exact simulation of anyon braiding in the planar code model."""

__version__ = "0.1.0"
