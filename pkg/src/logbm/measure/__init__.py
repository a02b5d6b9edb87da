"""Volumes, measures, quermassintegrals and moment functionals."""
from logbm.measure.density import DensitySpec, density_norm_constant, measure_of
from logbm.measure.mc import Estimate, mc_mean
from logbm.measure.moments import (
    MomentSummary,
    isotropic_constant,
    isotropic_map,
    moments,
    sigma2,
)
from logbm.measure.quadrature import (
    SphereQuadrature,
    arc_quadrature,
    ball_volume,
    polar_integral,
    sphere_area,
    volume_sphere,
)
from logbm.measure.quermass import SteinerFit, quermass, steiner_fit
from logbm.measure.volume import cone_volume, volume, volume_mc

__all__ = [
    "DensitySpec", "Estimate", "MomentSummary", "SphereQuadrature", "SteinerFit",
    "arc_quadrature", "ball_volume", "cone_volume", "density_norm_constant",
    "isotropic_constant", "isotropic_map", "mc_mean", "measure_of", "moments",
    "polar_integral", "quermass", "sigma2", "sphere_area", "steiner_fit",
    "volume", "volume_mc", "volume_sphere",
]
