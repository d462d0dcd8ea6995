"""Special functions and integral transforms for the smoothed counting problem."""

from .gamma import digamma, gamma, log_gamma, rgamma
from .hypergeom import hyp2f1, hyp_large_arg, hyp_series, pfq
from .quadrature import integrate_interval
from .testfunctions import (
    F1,
    F3,
    F4,
    BoxFunction,
    SmoothingParams,
    SpectralParam,
    TestFunction,
    ZeroFunction,
    f4_target,
    recovered_f4_expression,
)
from .transforms import (
    C_const,
    G_J,
    G_K,
    Js,
    Ks,
    Ks_Rr,
    d0_transform,
    d1_transform,
    expansion_coeffs,
    g_inverse,
    g_of,
    g_transform,
    gamma_J,
    gamma_K,
    sieve_coeffs,
)

__all__ = [name for name in dir() if not name.startswith("_")]
