"""Reflection channel and additive noise.

Each target contributes an attenuated, integer-sample circularly delayed
copy of the transmit signal, a Doppler oscillation, and the constant
round-trip phase offset ``exp(-2j*pi*(f_c*tau - alpha*tau**2/2))`` that the
dechirped beat tone picks up. Delays are kept on the sample grid; the
circular shift is exact under the cyclic payload layout.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .params import SystemParams
from .txchain import ComplexSignal

__all__ = ["Target", "TargetSet", "apply_channel", "add_awgn"]


@dataclass(frozen=True)
class Target:
    """One reflection: complex amplitude, delay in samples, Doppler [Hz]."""

    a: complex
    d: int
    f_D: float = 0.0


@dataclass(frozen=True)
class TargetSet:
    targets: tuple = field(default_factory=tuple)

    @property
    def L(self) -> int:
        return len(self.targets)


def apply_channel(s_mod: ComplexSignal, ts: TargetSet, params: SystemParams) -> ComplexSignal:
    """Superpose all target echoes of ``s_mod`` (noiseless).

    ``r[n] = sum_l a_l * s_mod[(n - d_l) mod N] * exp(2j*pi*f_D_l*n*T_s)
    * exp(-2j*pi*phi_l)`` with ``phi_l = f_c*tau_l - alpha*tau_l**2/2``.
    """
    n_samp = len(s_mod.samples)
    out = np.zeros(n_samp, dtype=complex)
    n = np.arange(n_samp)
    for tgt in ts.targets:
        if not isinstance(tgt.d, (int, np.integer)):
            raise ValueError(f"target delay must be an integer sample count, got {tgt.d!r}")
        if not 0 <= tgt.d < n_samp:
            raise ValueError(f"target delay {tgt.d} outside [0, {n_samp})")
        tau = tgt.d * params.T_s
        phi = params.f_c * tau - 0.5 * params.alpha * tau * tau
        term = tgt.a * np.exp(-2j * np.pi * phi) * np.roll(s_mod.samples, tgt.d)
        if tgt.f_D != 0.0:
            term = term * np.exp(2j * np.pi * tgt.f_D * params.T_s * n)
        out += term
    return ComplexSignal(samples=out, f_s=s_mod.f_s)


def add_awgn(sig: ComplexSignal, snr_db: float, seed: int) -> ComplexSignal:
    """Add circularly symmetric complex Gaussian noise.

    The noise variance is ``10**(-snr_db/10)`` per complex sample, i.e. the
    SNR is referenced to unit signal power. ``snr_db = inf`` returns the
    signal unchanged.
    """
    if math.isinf(snr_db) and snr_db > 0:
        return sig
    sigma2 = 10.0 ** (-snr_db / 10.0)
    rng = np.random.default_rng(seed)
    n_samp = len(sig.samples)
    noise = np.sqrt(sigma2 / 2.0) * (
        rng.standard_normal(n_samp) + 1j * rng.standard_normal(n_samp)
    )
    return ComplexSignal(samples=sig.samples + noise, f_s=sig.f_s)
