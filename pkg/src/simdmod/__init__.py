"""Modular integer arithmetic with scalar and lane-parallel kernels, truncated
Fourier transforms and the polynomial and big-integer products built on them."""

__version__ = "0.1.0"
