"""Log-Brunn-Minkowski toolkit: convex bodies, their combinations, and numerical checks."""
__version__ = "0.1.0"
