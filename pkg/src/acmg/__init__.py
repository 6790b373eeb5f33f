"""Intrinsic torsion, class decomposition and harmonicity of almost contact metric structures on Lie groups."""

__version__ = "0.1.0"
