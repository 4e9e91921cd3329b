"""Billiards inside convex cones in R^n."""
__version__ = "0.1.0"
