"""Polytope representations, polarity and standard bodies."""
from logbm.geom_core.body import (
    Body,
    Subspace,
    body_from_json,
    box,
    cross_polytope,
    cube,
    dilate_body,
    in_out_radius,
    linear_image,
    make_hpoly,
    make_vpoly,
    polar_dual,
    project,
    regular_polygon,
    schwartz_profile,
    section,
    to_hrep,
    to_vrep,
)
from logbm.geom_core.functional import EuclideanBall, GaugeBody, Segment


def support(body, direction):
    return body.support(direction)


def gauge(body, point):
    return body.gauge(point)


__all__ = [
    "Body", "Subspace", "EuclideanBall", "GaugeBody", "Segment",
    "body_from_json", "box", "cross_polytope", "cube", "dilate_body", "gauge",
    "in_out_radius", "linear_image", "make_hpoly", "make_vpoly", "polar_dual",
    "project", "regular_polygon", "schwartz_profile", "section", "support",
    "to_hrep", "to_vrep",
]
