"""Config-driven, seeded experiment runners.

Every runner writes CSV files with a fixed column schema and a provenance
header line ``# seed=<n> config_hash=<hex>``. Results are bit-reproducible:
all randomness flows through a fixed 64-bit seed-mixing function of
(master seed, experiment id, grid-point index, trial index), so that grid
points and trials can be evaluated in any order without changing the output.
"""

from __future__ import annotations

import hashlib
import json
import os
from dataclasses import asdict, dataclass, field, replace

import numpy as np

from .channel import Target, TargetSet, add_awgn, apply_channel
from .constellation import Constellation, build_constellation, simulate_awgn_ber
from .params import DEFAULT_CONFIG, SystemConfig, SystemParams, derive_params
from .rx import (
    MetricsReport,
    alignment_filter,
    apply_alignment,
    compensate,
    dechirp,
    disperse_reference,
    measure_isnr,
    periodogram,
)
from .stats import kl_divergence_vs_cn, magnitude_histogram, rayleigh_fit
from .txchain import ComplexSignal, gen_chirp, modulate, rrc_taps, shape_symbols

__all__ = [
    "ExperimentConfig",
    "ConfigError",
    "EXPERIMENT_IDS",
    "derive_seed",
    "load_experiment_config",
    "run_experiment",
    "run_ber",
    "run_spectrum",
    "run_dispersion",
    "run_kl_sweep",
    "run_isnr_surface",
    "ChirpRunner",
]


class ConfigError(ValueError):
    """Invalid experiment configuration; message names the offending key."""


EXPERIMENT_IDS = {"ber": 1, "spectrum": 2, "dispersion": 3, "kl_sweep": 4, "isnr_surface": 5}

_MASK64 = (1 << 64) - 1


def _splitmix64(z: int) -> int:
    """One splitmix64 finalizer round (fixed, documented mixing constants)."""
    z = (z + 0x9E3779B97F4A7C15) & _MASK64
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK64
    return (z ^ (z >> 31)) & _MASK64


def derive_seed(master: int, experiment: str, grid_index: int, trial_index: int) -> int:
    """Derive a 64-bit stream seed for one (grid point, trial) pair.

    Distinct (grid_index, trial_index) pairs yield distinct seeds with
    overwhelming probability; the derivation never changes so results are
    reproducible across runs and parallel schedules.
    """
    h = _splitmix64(master & _MASK64)
    h = _splitmix64(h ^ EXPERIMENT_IDS[experiment])
    h = _splitmix64(h ^ (grid_index & _MASK64))
    h = _splitmix64(h ^ (trial_index & _MASK64))
    return h


# ---------------------------------------------------------------------------
# configuration

_DEFAULT_SYSTEMS: dict[str, SystemConfig] = {
    "ber": DEFAULT_CONFIG,
    # full-band payload (sps=1) and unit B/f_s so the 256-sample echo sits
    # unaliased at f/f_s = -0.25
    "spectrum": SystemConfig(
        f_c=77e9, B_ch=200e6, f_s=200e6, N=1024, R=200e6, rrc_beta=0.3, rrc_span=8
    ),
    # shallow slope (alpha_norm = 1/2048), strongly dispersive regime
    "dispersion": SystemConfig(
        f_c=77e9, B_ch=100e6, f_s=200e6, N=1024, R=50e6, rrc_beta=0.3, rrc_span=8
    ),
    "kl_sweep": DEFAULT_CONFIG,
    "isnr_surface": DEFAULT_CONFIG,
}

_DEFAULT_GRIDS: dict[str, dict] = {
    "ber": {
        "ebn0_db": [float(v) for v in range(-10, 21)],
        "min_bits": 100_000,
        "min_errors": 100,
        "max_bits": 2_000_000,
    },
    "spectrum": {"delay": 256, "snr_db": 30.0, "order": 16},
    "dispersion": {"hist_order": 16},
    "kl_sweep": {
        "alpha_norm": [1 / 2048, 1 / 1024, 1 / 512, 1 / 256, 1 / 128, 1 / 64, 1 / 32]
    },
    "isnr_surface": {
        "snr_db": [-20.0, -15.0, -10.0, -5.0, 0.0, 5.0, 10.0, 15.0, 20.0],
        "orders": [4, 16, 64, 256],
        "delay": 25,
    },
}

_DEFAULT_TRIALS = {"ber": 1, "spectrum": 1, "dispersion": 98, "kl_sweep": 64, "isnr_surface": 200}

# column name -> (constellation order, samples per symbol); the 16-sps pair
# carries the 12.5 MBd curves at f_s = 200 MHz
_KL_COLUMNS = (
    ("qpsk4", 4, 4),
    ("qam4", 16, 4),
    ("qpsk8", 4, 8),
    ("qam8", 16, 8),
    ("qpsk32", 4, 16),
    ("qam32", 16, 16),
)


@dataclass(frozen=True)
class ExperimentConfig:
    """One experiment run: system geometry, parameter grids, trials, seed."""

    experiment: str
    system: SystemConfig
    grids: dict = field(default_factory=dict)
    trials: int = 1
    seed: int = 0
    out_path: str = "."


def _system_from_dict(data: dict, base: SystemConfig, source: str) -> SystemConfig:
    known = SystemConfig.__dataclass_fields__
    for key in data:
        if key not in known:
            raise ConfigError(f"unknown system key {key!r} in {source}")
    merged = asdict(base)
    merged.update(data)
    merged["N"] = int(merged["N"])
    merged["rrc_span"] = int(merged["rrc_span"])
    return SystemConfig(**merged)


def load_experiment_config(
    path: str | None = None,
    experiment: str | None = None,
    seed: int | None = None,
    trials: int | None = None,
    out_path: str | None = None,
) -> ExperimentConfig:
    """Build an ExperimentConfig from a JSON file plus overrides.

    Precedence: explicit arguments > file values > per-experiment defaults.
    """
    data: dict = {}
    source = path or "<defaults>"
    if path is not None:
        with open(path, "r", encoding="utf-8") as fh:
            data = json.load(fh)
        if not isinstance(data, dict):
            raise ConfigError(f"config file {path} must contain a JSON object")
    for key in data:
        if key not in ("experiment", "system", "grids", "trials", "seed", "out_path"):
            raise ConfigError(f"unknown config key {key!r} in {source}")
    name = experiment or data.get("experiment")
    if name is None:
        raise ConfigError(f"missing config key 'experiment' in {source}")
    if name not in EXPERIMENT_IDS:
        raise ConfigError(f"unknown experiment {name!r} (key 'experiment' in {source})")
    if "experiment" in data and experiment is not None and data["experiment"] != experiment:
        raise ConfigError(
            f"config key 'experiment' ({data['experiment']!r}) does not match "
            f"the requested experiment {experiment!r}"
        )
    system = _DEFAULT_SYSTEMS[name]
    if "system" in data:
        if not isinstance(data["system"], dict):
            raise ConfigError(f"config key 'system' in {source} must be an object")
        system = _system_from_dict(data["system"], system, source)
    grids = dict(_DEFAULT_GRIDS[name])
    if "grids" in data:
        if not isinstance(data["grids"], dict):
            raise ConfigError(f"config key 'grids' in {source} must be an object")
        for key, value in data["grids"].items():
            if key not in grids:
                raise ConfigError(f"unknown grids key {key!r} in {source}")
            grids[key] = value
    n_trials = trials if trials is not None else int(data.get("trials", _DEFAULT_TRIALS[name]))
    if n_trials < 1:
        raise ConfigError(f"config key 'trials' must be >= 1, got {n_trials}")
    master = seed if seed is not None else int(data.get("seed", 0))
    out = out_path if out_path is not None else data.get("out_path", ".")
    return ExperimentConfig(
        experiment=name, system=system, grids=grids, trials=n_trials, seed=master, out_path=out
    )


def _config_hash(cfg: ExperimentConfig) -> str:
    canonical = json.dumps(
        {
            "experiment": cfg.experiment,
            "system": asdict(cfg.system),
            "grids": cfg.grids,
            "trials": cfg.trials,
            "seed": cfg.seed,
        },
        sort_keys=True,
        separators=(",", ":"),
    )
    return hashlib.sha256(canonical.encode()).hexdigest()[:16]


def _fmt(value) -> str:
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    return format(float(value), ".12g")


def _write_csv(path: str, columns, rows, cfg: ExperimentConfig) -> str:
    os.makedirs(os.path.dirname(path) or ".", exist_ok=True)
    lines = [f"# seed={cfg.seed} config_hash={_config_hash(cfg)}"]
    lines.append(",".join(columns))
    for row in rows:
        lines.append(",".join(_fmt(v) for v in row))
    try:
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write("\n".join(lines) + "\n")
    except OSError as exc:
        raise RuntimeError(f"cannot write CSV {path}: {exc}") from exc
    return path


# ---------------------------------------------------------------------------
# single-chirp plumbing shared by runners, acceptance checks and the CLI demo


class ChirpRunner:
    """Precomputed chirp, pulse shape and alignment filter for one geometry."""

    def __init__(self, params: SystemParams):
        self.params = params
        self.pulse = rrc_taps(params.rrc_beta, params.sps, params.rrc_span)
        self.chirp = gen_chirp(params)
        self.filt = alignment_filter(params)

    def payload(self, const: Constellation, seed: int) -> ComplexSignal:
        """Shape one chirp of uniformly random symbols."""
        rng = np.random.default_rng(seed)
        symbols = const.points[rng.integers(0, const.order, self.params.M)]
        return shape_symbols(symbols, self.pulse, self.params)

    def run(
        self,
        const: Constellation | None,
        targets: TargetSet,
        snr_db: float,
        payload_seed: int,
        noise_seed: int,
        clamp_eps: float = 0.0,
    ) -> MetricsReport:
        """One seeded chirp through the full transmit/channel/receive chain.

        ``const=None`` runs the unmodulated radar baseline (payload of ones),
        which passes through the same alignment/compensation path with an
        identity reference.
        """
        params = self.params
        if const is None:
            x = ComplexSignal(samples=np.ones(params.N, dtype=complex), f_s=params.f_s)
        else:
            x = self.payload(const, payload_seed)
        s_mod = modulate(x, self.chirp)
        r = apply_channel(s_mod, targets, params)
        r = add_awgn(r, snr_db, noise_seed)
        r_if = dechirp(r, self.chirp)
        r_al = apply_alignment(r_if, self.filt)
        x_tilde = disperse_reference(x, self.filt)
        r_comp = compensate(r_al, x_tilde, clamp_eps=clamp_eps)
        return measure_isnr(periodogram(r_comp), params.alpha_norm)


# ---------------------------------------------------------------------------
# runners


def run_ber(cfg: ExperimentConfig) -> list[str]:
    """AWGN bit-error-rate curves for 16-PSK and 16-QAM -> ``ber.csv``."""
    grids = cfg.grids
    ebn0 = np.asarray(grids["ebn0_db"], dtype=float)
    kwargs = dict(
        min_bits=int(grids["min_bits"]),
        min_errors=int(grids["min_errors"]),
        max_bits=int(grids["max_bits"]),
    )
    psk = simulate_awgn_ber(
        build_constellation("psk", 16), ebn0, seed=derive_seed(cfg.seed, "ber", 0, 0), **kwargs
    )
    qam = simulate_awgn_ber(
        build_constellation("qam", 16), ebn0, seed=derive_seed(cfg.seed, "ber", 1, 0), **kwargs
    )
    rows = list(zip(ebn0, psk.ber, qam.ber))
    path = os.path.join(cfg.out_path, "ber.csv")
    return [_write_csv(path, ("snr", "16psk", "16qam"), rows, cfg)]


def _db_normalized(bins: np.ndarray) -> np.ndarray:
    peak = float(np.max(bins))
    return 10.0 * np.log10(np.maximum(bins, peak * 1e-30) / peak)


def run_spectrum(cfg: ExperimentConfig) -> list[str]:
    """Single-shot periodograms of the radar, payload-spread and compensated
    chains for one target -> ``spectrum.csv`` (``freq,X,Xmod,X_rvpc``)."""
    params = derive_params(cfg.system)
    runner = ChirpRunner(params)
    grids = cfg.grids
    targets = TargetSet((Target(a=1.0 + 0.0j, d=int(grids["delay"])),))
    snr_db = float(grids["snr_db"])
    const = build_constellation("qam", int(grids["order"]))
    payload_seed = derive_seed(cfg.seed, "spectrum", 0, 0)
    noise_seed = derive_seed(cfg.seed, "spectrum", 0, 1)

    def received(x: ComplexSignal) -> ComplexSignal:
        r = apply_channel(modulate(x, runner.chirp), targets, params)
        return dechirp(add_awgn(r, snr_db, noise_seed), runner.chirp)

    ones = ComplexSignal(samples=np.ones(params.N, dtype=complex), f_s=params.f_s)
    per_radar = periodogram(received(ones))
    x = runner.payload(const, payload_seed)
    r_if = received(x)
    per_isac = periodogram(r_if)
    x_tilde = disperse_reference(x, runner.filt)
    r_comp = compensate(apply_alignment(r_if, runner.filt), x_tilde)
    per_rvpc = periodogram(r_comp)

    freq = (np.arange(params.N) - params.N // 2) / params.N
    rows = list(
        zip(
            freq,
            np.fft.fftshift(_db_normalized(per_radar.bins)),
            np.fft.fftshift(_db_normalized(per_isac.bins)),
            np.fft.fftshift(_db_normalized(per_rvpc.bins)),
        )
    )
    path = os.path.join(cfg.out_path, "spectrum.csv")
    return [_write_csv(path, ("freq", "X", "Xmod", "X_rvpc"), rows, cfg)]


def run_dispersion(cfg: ExperimentConfig) -> list[str]:
    """Payload magnitude before/after dispersion plus the magnitude histogram.

    Writes one ``t,stream,rvpc`` trace per payload (QPSK and 16-QAM) and a
    pooled ``abs,counts,rayleigh`` histogram of the dispersed magnitudes.
    """
    params = derive_params(cfg.system)
    runner = ChirpRunner(params)
    paths = []
    for gi, (tag, order) in enumerate((("qpsk", 4), ("qam16", 16))):
        const = build_constellation("qam", order)
        x = runner.payload(const, derive_seed(cfg.seed, "dispersion", gi, 0))
        x_tilde = disperse_reference(x, runner.filt)
        rows = list(zip(range(params.N), np.abs(x.samples), np.abs(x_tilde.samples)))
        path = os.path.join(cfg.out_path, f"dispersion_time_{tag}.csv")
        paths.append(_write_csv(path, ("t", "stream", "rvpc"), rows, cfg))

    hist_const = build_constellation("qam", int(cfg.grids["hist_order"]))
    pooled = []
    for t in range(cfg.trials):
        x = runner.payload(hist_const, derive_seed(cfg.seed, "dispersion", 2, t))
        pooled.append(np.abs(disperse_reference(x, runner.filt).samples))
    mags = np.concatenate(pooled)
    hist = magnitude_histogram(mags, B=100, r_max=4.0)
    centers = 0.5 * (hist.edges[:-1] + hist.edges[1:])
    width = hist.edges[1] - hist.edges[0]
    density = hist.counts / (hist.total * width)
    scale = rayleigh_fit(mags)
    pdf = (centers / scale**2) * np.exp(-(centers**2) / (2 * scale**2))
    rows = list(zip(centers, density, pdf))
    path = os.path.join(cfg.out_path, "dispersion_hist.csv")
    paths.append(_write_csv(path, ("abs", "counts", "rayleigh"), rows, cfg))
    return paths


def run_kl_sweep(cfg: ExperimentConfig) -> list[str]:
    """Magnitude-law divergence from the complex-normal limit over a slope
    grid, for two alphabets and three symbol rates -> ``kl_sweep.csv``."""
    system = cfg.system
    slopes = [float(v) for v in cfg.grids["alpha_norm"]]
    pulses = {sps: rrc_taps(system.rrc_beta, sps, system.rrc_span) for _, _, sps in _KL_COLUMNS}
    consts = {order: build_constellation("qam", order) for _, order, _ in _KL_COLUMNS}
    rows = []
    for gi, a_norm in enumerate(slopes):
        row = [a_norm]
        for ci, (_, order, sps) in enumerate(_KL_COLUMNS):
            sys_point = replace(system, B_ch=a_norm * system.N * system.f_s, R=system.f_s / sps)
            params = derive_params(sys_point)
            filt = alignment_filter(params)
            const = consts[order]
            pooled = []
            for t in range(cfg.trials):
                seed = derive_seed(cfg.seed, "kl_sweep", gi * len(_KL_COLUMNS) + ci, t)
                rng = np.random.default_rng(seed)
                symbols = const.points[rng.integers(0, const.order, params.M)]
                x = shape_symbols(symbols, pulses[sps], params)
                pooled.append(np.abs(disperse_reference(x, filt).samples))
            row.append(kl_divergence_vs_cn(np.concatenate(pooled)).d_kl)
        rows.append(row)
    columns = ("slope",) + tuple(name for name, _, _ in _KL_COLUMNS)
    path = os.path.join(cfg.out_path, "kl_sweep.csv")
    return [_write_csv(path, columns, rows, cfg)]


def run_isnr_surface(cfg: ExperimentConfig) -> list[str]:
    """Post-processing SNR surface over (constellation order, input SNR) for
    the compensated chain and the unmodulated radar baseline on paired noise
    -> ``isnr_surface.csv`` (``snr,M_Sym,ISNR,ISNR_unmod``)."""
    params = derive_params(cfg.system)
    runner = ChirpRunner(params)
    grids = cfg.grids
    orders = [int(v) for v in grids["orders"]]
    snrs = [float(v) for v in grids["snr_db"]]
    targets = TargetSet((Target(a=1.0 + 0.0j, d=int(grids["delay"])),))
    rows = []
    for oi, order in enumerate(orders):
        const = build_constellation("qam", order)
        for si, snr_db in enumerate(snrs):
            cell = oi * len(snrs) + si
            isnr = np.empty(cfg.trials)
            isnr_unmod = np.empty(cfg.trials)
            for t in range(cfg.trials):
                payload_seed = derive_seed(cfg.seed, "isnr_surface", cell, 2 * t)
                noise_seed = derive_seed(cfg.seed, "isnr_surface", cell, 2 * t + 1)
                isnr[t] = runner.run(const, targets, snr_db, payload_seed, noise_seed).isnr_db
                isnr_unmod[t] = runner.run(None, targets, snr_db, 0, noise_seed).isnr_db
            # dB-domain averaging: the compensated noise is heavy-tailed, so
            # linear-power means are unstable across trials
            rows.append((snr_db, order, float(np.mean(isnr)), float(np.mean(isnr_unmod))))
    path = os.path.join(cfg.out_path, "isnr_surface.csv")
    return [_write_csv(path, ("snr", "M_Sym", "ISNR", "ISNR_unmod"), rows, cfg)]


_RUNNERS = {
    "ber": run_ber,
    "spectrum": run_spectrum,
    "dispersion": run_dispersion,
    "kl_sweep": run_kl_sweep,
    "isnr_surface": run_isnr_surface,
}


def run_experiment(cfg: ExperimentConfig) -> list[str]:
    """Dispatch to the configured runner; returns the written CSV paths."""
    return _RUNNERS[cfg.experiment](cfg)
