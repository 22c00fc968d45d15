"""Riemann zeta zeros, mesoscopic linear statistics of their ordinates, and
zero-density experiments, with a CUE random-matrix comparison bench.

Submodules
----------
specialfn  Riemann-Siegel theta/Z, archimedean density, von Mangoldt, psi
zeros      zero tables: computation, Turing certification, ingestion, cache
testfn     test functions, bump kernels, band-limited smoothing, envelopes
stats      linear statistics, CLT harness, predicted moments
density    off-axis counts, windowed L^k moments, synthetic ensembles
explicit   two-sided explicit-formula evaluation
rmt        Haar-unitary sampling and eigenphase statistics
cli        config-driven experiment runner (`mesozeta` entry point)
"""

from . import cli, density, explicit, rmt, specialfn, stats, testfn, zeros

__all__ = ["specialfn", "zeros", "testfn", "stats", "density", "explicit", "rmt", "cli"]
__version__ = "0.1.0"
