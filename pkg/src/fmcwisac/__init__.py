"""Deterministic simulator of a chirp-based joint radar/communications link.

Modules
-------
params        system geometry and derived scalars
constellation modulation alphabets, bit mapping, AWGN BER
txchain       pulse shaping, chirp generation, modulation
channel       reflection model and additive noise
rx            dechirp, alignment, compensation, periodogram, metrics
stats         magnitude-distribution diagnostics
experiments   seeded CSV-producing experiment runners
cli           command-line entry point
"""

from .params import DEFAULT_CONFIG, SystemConfig, SystemParams, derive_params, load_config

__all__ = ["DEFAULT_CONFIG", "SystemConfig", "SystemParams", "derive_params", "load_config"]

__version__ = "0.1.0"
