"""Numerical spherical analysis on small Gelfand pairs.

Pairs: ``flat_r1`` (R, {0}), ``e2`` (SO(2) x| R^2, SO(2)), ``u1_c``
(U(1) x| C, U(1)) as a strong pair, and ``heis1`` (U(1) x| H_1, U(1)).
"""
from .errors import *  # noqa: F401,F403
from .pairs import GroupPoint, PairDescriptor, SpectrumPoint, apply_generator, eigenvalue_map, get_pair, group_convolve, spectrum_grid, spherical
from .sampling import Axis, GridFunction, SampledFunction, sample
from .specfun import QuadratureRule, bessel_j, gauss_legendre, integrate, laguerre
from .transform import SpectrumFunction, inverse_transform, spherical_transform

__version__ = "0.1.0"
