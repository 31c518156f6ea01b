"""System geometry: chirp/sampling configuration and every derived scalar.

All downstream processing is parameterized by a single immutable
:class:`SystemParams` value derived from a :class:`SystemConfig`. The key
derived quantity is the normalized chirp slope ``alpha_norm = alpha / f_s**2``,
which fully determines the discrete-time chirp phase and the alignment
filter. Everything is complex baseband; the carrier ``f_c`` only enters the
per-reflection phase offset applied by the channel.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, fields

__all__ = ["SystemConfig", "SystemParams", "derive_params", "load_config", "DEFAULT_CONFIG"]


@dataclass(frozen=True)
class SystemConfig:
    """User-facing system geometry.

    Parameters
    ----------
    f_c : float
        Carrier frequency [Hz].
    B_ch : float
        Chirp sweep bandwidth [Hz].
    f_s : float
        Complex baseband sampling rate [Hz].
    N : int
        Samples per chirp; must be a power of two.
    R : float
        Symbol rate [Baud]; ``f_s / R`` must be a positive integer.
    rrc_beta : float
        Root-raised-cosine roll-off, in [0, 1].
    rrc_span : int
        Pulse-shaping filter half-length in symbols.
    """

    f_c: float
    B_ch: float
    f_s: float
    N: int
    R: float
    rrc_beta: float
    rrc_span: int


@dataclass(frozen=True)
class SystemParams:
    """A :class:`SystemConfig` plus all derived scalars.

    Derived fields: sample period ``T_s``, chirp duration ``T_ch = N * T_s``,
    chirp slope ``alpha = B_ch / T_ch`` [Hz/s], normalized slope
    ``alpha_norm = alpha / f_s**2``, samples per symbol ``sps``, symbols per
    chirp ``M = N / sps`` and periodogram bin width ``f_s / N``.
    """

    f_c: float
    B_ch: float
    f_s: float
    N: int
    R: float
    rrc_beta: float
    rrc_span: int
    T_s: float
    T_ch: float
    alpha: float
    alpha_norm: float
    sps: int
    M: int
    bin_width: float


def _is_power_of_two(n: int) -> bool:
    return n > 0 and (n & (n - 1)) == 0


def _exact_ratio(num: float, den: float) -> int | None:
    """Return num/den as an int if it is one (to 1e-9 relative), else None."""
    if den <= 0:
        return None
    ratio = num / den
    nearest = round(ratio)
    if nearest >= 1 and abs(ratio - nearest) <= 1e-9 * max(ratio, 1.0):
        return int(nearest)
    return None


def derive_params(cfg: SystemConfig) -> SystemParams:
    """Validate a config and populate every derived scalar.

    Raises
    ------
    ValueError
        If ``N`` is not a power of two, ``f_s/R`` or ``N/sps`` is not a
        positive integer, or ``rrc_beta`` lies outside [0, 1].
    """
    if not isinstance(cfg.N, int) or not _is_power_of_two(cfg.N):
        raise ValueError(f"N must be a power of two, got N={cfg.N!r}")
    if not 0.0 <= cfg.rrc_beta <= 1.0:
        raise ValueError(f"rrc_beta must lie in [0, 1], got rrc_beta={cfg.rrc_beta!r}")
    if cfg.f_s <= 0 or cfg.B_ch <= 0 or cfg.R <= 0:
        raise ValueError("f_s, B_ch and R must be positive")
    sps = _exact_ratio(cfg.f_s, cfg.R)
    if sps is None:
        raise ValueError(f"f_s/R must be a positive integer, got f_s={cfg.f_s!r}, R={cfg.R!r}")
    m, rem = divmod(cfg.N, sps)
    if rem != 0 or m < 1:
        raise ValueError(f"N/sps must be a positive integer, got N={cfg.N}, sps={sps}")

    t_s = 1.0 / cfg.f_s
    t_ch = cfg.N * t_s
    alpha = cfg.B_ch / t_ch
    alpha_norm = alpha / cfg.f_s**2
    # second computation path, kept as a consistency guard
    alpha_norm_alt = (cfg.B_ch / cfg.f_s) / cfg.N
    if abs(alpha_norm - alpha_norm_alt) > 1e-12 * alpha_norm:
        raise ValueError("inconsistent alpha_norm derivation (numerical pathology in config)")

    return SystemParams(
        f_c=cfg.f_c,
        B_ch=cfg.B_ch,
        f_s=cfg.f_s,
        N=cfg.N,
        R=cfg.R,
        rrc_beta=cfg.rrc_beta,
        rrc_span=cfg.rrc_span,
        T_s=t_s,
        T_ch=t_ch,
        alpha=alpha,
        alpha_norm=alpha_norm,
        sps=sps,
        M=m,
        bin_width=cfg.f_s / cfg.N,
    )


_CONFIG_KEYS = tuple(f.name for f in fields(SystemConfig))


def load_config(path: str) -> SystemConfig:
    """Read a SystemConfig from a JSON file whose keys match the field names."""
    with open(path, "r", encoding="utf-8") as fh:
        data = json.load(fh)
    if not isinstance(data, dict):
        raise ValueError(f"config file {path} must contain a JSON object")
    for key in data:
        if key not in _CONFIG_KEYS:
            raise ValueError(f"unknown config key {key!r} in {path}")
    for key in _CONFIG_KEYS:
        if key not in data:
            raise ValueError(f"missing config key {key!r} in {path}")
    data["N"] = int(data["N"])
    data["rrc_span"] = int(data["rrc_span"])
    return SystemConfig(**data)


# W-band automotive-style defaults: 77 GHz carrier, 2 GHz sweep, 200 MHz
# sampling, 1024-sample chirps, 50 MBd payload.
DEFAULT_CONFIG = SystemConfig(
    f_c=77e9, B_ch=2e9, f_s=200e6, N=1024, R=50e6, rrc_beta=0.3, rrc_span=8
)
