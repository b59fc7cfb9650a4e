"""Exact rational toolkit for suns, strict suns and l1-convexity in l-infinity."""
from .numerics import Norm, Point
from .set_model import AxisBox, Polytope, SampleSpec, Segment, SetModel, SinglePoint

__all__ = ["Norm", "Point", "AxisBox", "Polytope", "SampleSpec", "Segment", "SetModel", "SinglePoint"]
