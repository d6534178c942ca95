"""Monte Carlo engine, estimators, experiment sweeps, and CSV emission.

Trials are processed in fixed-size blocks keyed by a counter-based RNG, so a
run is reproducible bit-for-bit for a given seed and independent of how many
workers execute the blocks.  Sweeps over the legitimate receiver's average
SNR reuse one set of channel-gain draws per configuration (the gains do not
depend on that axis); sweeps over surface size draw fresh gains per point.

Closed-form columns (distribution fits and both bounds) are always derived
from the frozen first-M_ON configuration of the row's geometry, which is the
regime the moment matching describes.  Monte Carlo columns follow whatever
policy the row ran; with the adaptive policy the analytic columns are
reference curves, not bounds on the simulated metrics.
"""

from __future__ import annotations

import json
import math
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass
from typing import Callable, Iterable, Sequence

import numpy as np

from . import __version__
from .channel import (TRIALS_PER_BLOCK, ChannelStream, LinkBudget,
                      correlated_images_batch)
from .control import conventional_ris_config, fixed_statistical_config
from .errors import ConfigError, DomainError, FrisecError
from .secrecy import (ExpFit, GammaFit, SecrecyTarget, asc_upper_bound,
                      exp_cdf, fit_bob_gamma, fit_eve_exponential, gamma_cdf,
                      sop_lower_bound)
from .surface import (CorrelationMatrix, SelectionSet, SurfaceGeometry,
                      build_correlation, reduce_correlation)

SPEED_OF_LIGHT = 299792458.0
_Z95 = 1.959963984540054

#: fixed stream-id registry so every statistical computation is addressable.
STREAM_FRIS_SNR = 0
STREAM_CONV_SNR = 1
STREAM_VALIDATE_BASE = 10      # + index of the m_on entry
STREAM_SIZE_BASE = 100         # + 2*point (FRIS), + 2*point + 1 (conventional)
STREAM_BOUNDS = 3

POLICIES = ("greedy", "fixed-uniform", "fixed-random", "conventional")


def db_to_linear(db: float) -> float:
    return 10.0 ** (db / 10.0)


def dbm_to_watts(dbm: float) -> float:
    return 10.0 ** ((dbm - 30.0) / 10.0)


# ---------------------------------------------------------------------------
# Configuration
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ExperimentConfig:
    """Fully resolved experiment parameters (linear units derived on access)."""

    m_x: int = 20
    m_z: int = 20
    aperture_x: float = 3.0          # wavelengths
    aperture_z: float = 3.0          # wavelengths
    carrier_hz: float = 2.4e9
    conventional_m: int = 100
    ref_gain: float = 1.0
    pl_exponent: float = 2.5
    dist_feed_m: float = 20.0
    dist_bob_m: float = 30.0
    dist_eve_m: float = 30.0
    tx_power_dbm: float = 30.0
    noise_bob_dbm: float = -90.0
    noise_eve_dbm: float = -80.0
    target_rate_bits: float = 1.0
    policy: str = "greedy"
    m_on: int = 100
    trials: int = 100_000
    seed: int = 1
    workers: int = 1
    snr_sweep_db: tuple = tuple(float(v) for v in range(60, 125, 5))
    size_sweep: tuple = (100, 144, 196, 256, 324, 400)
    out_path: str | None = None

    def __post_init__(self):
        if self.trials < 1:
            raise ConfigError("trials must be >= 1")
        if not 0 <= self.seed < 2 ** 64:
            raise ConfigError("seed must be a 64-bit unsigned value")
        if self.workers < 1:
            raise ConfigError("workers must be >= 1")
        if self.policy not in POLICIES:
            raise ConfigError(f"unknown policy {self.policy!r}; choose from {POLICIES}")
        for name in ("snr_sweep_db", "size_sweep"):
            grid = tuple(getattr(self, name))
            object.__setattr__(self, name, grid)
            if len(grid) == 0:
                raise ConfigError(f"{name} must be nonempty")
            if any(b <= a for a, b in zip(grid, grid[1:])):
                raise ConfigError(f"{name} must be strictly increasing")
        if not 1 <= self.m_on <= self.m_x * self.m_z:
            raise ConfigError("m_on must lie in [1, m_x * m_z]")

    @property
    def wavelength(self) -> float:
        return SPEED_OF_LIGHT / self.carrier_hz

    def fris_geometry(self) -> SurfaceGeometry:
        return SurfaceGeometry(m_x=self.m_x, m_z=self.m_z, width_x=self.aperture_x,
                               width_z=self.aperture_z, wavelength=self.wavelength)

    def budget(self) -> LinkBudget:
        return LinkBudget(
            ref_gain=self.ref_gain, pl_exponent=self.pl_exponent,
            dist_feed_m=self.dist_feed_m, dist_bob_m=self.dist_bob_m,
            dist_eve_m=self.dist_eve_m, tx_power_w=dbm_to_watts(self.tx_power_dbm),
            noise_bob_w=dbm_to_watts(self.noise_bob_dbm),
            noise_eve_w=dbm_to_watts(self.noise_eve_dbm),
        )

    def target(self) -> SecrecyTarget:
        return SecrecyTarget(self.target_rate_bits)


_CONFIG_FIELDS = None


def config_from_mapping(mapping: dict) -> ExperimentConfig:
    """Build a config from a flat key-value mapping (e.g. a parsed JSON file)."""
    global _CONFIG_FIELDS
    if _CONFIG_FIELDS is None:
        _CONFIG_FIELDS = {f.name for f in ExperimentConfig.__dataclass_fields__.values()}
    unknown = set(mapping) - _CONFIG_FIELDS
    if unknown:
        raise ConfigError(f"unknown configuration keys: {sorted(unknown)}")
    coerced = {}
    for key, value in mapping.items():
        if key in ("snr_sweep_db", "size_sweep"):
            if not isinstance(value, (list, tuple)):
                raise ConfigError(f"{key} must be a list")
            coerced[key] = tuple(value)
        else:
            coerced[key] = value
    try:
        return ExperimentConfig(**coerced)
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"invalid configuration: {exc}") from exc


# ---------------------------------------------------------------------------
# Estimates
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class MetricEstimate:
    """Point estimate with standard error and a 95% confidence interval."""

    point: float
    std_error: float
    ci_low: float
    ci_high: float
    n_trials: int

    @staticmethod
    def for_proportion(successes: int, n: int) -> "MetricEstimate":
        """Wilson 95% interval; robust for zero-count cells."""
        if n < 1:
            raise DomainError("need at least one trial")
        p = successes / n
        z2 = _Z95 * _Z95
        denom = 1.0 + z2 / n
        center = (p + z2 / (2.0 * n)) / denom
        half = _Z95 * math.sqrt(p * (1.0 - p) / n + z2 / (4.0 * n * n)) / denom
        se = math.sqrt(p * (1.0 - p) / n)
        # rounding must never push the interval off the point estimate
        return MetricEstimate(point=p, std_error=se,
                              ci_low=min(p, max(0.0, center - half)),
                              ci_high=max(p, min(1.0, center + half)), n_trials=n)

    @staticmethod
    def for_mean(samples: np.ndarray) -> "MetricEstimate":
        samples = np.asarray(samples, dtype=float)
        n = samples.size
        if n < 2:
            raise DomainError("need at least two samples for a mean estimate")
        mean = float(samples.mean())
        se = float(samples.std(ddof=1) / math.sqrt(n))
        return MetricEstimate(point=mean, std_error=se, ci_low=mean - _Z95 * se,
                              ci_high=mean + _Z95 * se, n_trials=n)


# ---------------------------------------------------------------------------
# Gain simulation engine
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class GainSamples:
    """Equivalent channel power gains for both receivers, one entry per trial."""

    g_bob: np.ndarray
    g_eve: np.ndarray

    def __len__(self) -> int:
        return self.g_bob.size


def _adaptive_block(images: np.ndarray, m_on: int) -> tuple[np.ndarray, np.ndarray]:
    # Per-trial strongest-subset selection, co-phased toward the legitimate
    # receiver; the eavesdropper sees the same selection and phases.
    v, u_bob, u_eve = images[:, 0], images[:, 1], images[:, 2]
    casc = np.conj(u_bob) * v
    mags = np.abs(casc)
    m = mags.shape[1]
    if m_on < m:
        sel = np.sort(np.argpartition(-mags, m_on - 1, axis=1)[:, :m_on], axis=1)
        mags = np.take_along_axis(mags, sel, axis=1)
        casc = np.take_along_axis(casc, sel, axis=1)
        v = np.take_along_axis(v, sel, axis=1)
        u_eve = np.take_along_axis(u_eve, sel, axis=1)
    h_bob = mags.sum(axis=1)
    align = np.divide(np.conj(casc), mags, out=np.ones_like(casc), where=mags > 0)
    h_eve = (np.conj(u_eve) * v * align).sum(axis=1)
    return h_bob * h_bob, np.abs(h_eve) ** 2


def _fixed_block(images: np.ndarray, phase_factors: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    v, u_bob, u_eve = images[:, 0], images[:, 1], images[:, 2]
    h_bob = (np.conj(u_bob) * phase_factors * v).sum(axis=1)
    h_eve = (np.conj(u_eve) * phase_factors * v).sum(axis=1)
    return np.abs(h_bob) ** 2, np.abs(h_eve) ** 2


def simulate_gains(corr: CorrelationMatrix, policy: str, m_on: int, trials: int,
                   stream: ChannelStream, workers: int = 1,
                   fixed_config=None) -> GainSamples:
    """Simulate per-trial power gains under the given policy.

    Results are a pure function of (corr, policy, m_on, trials, stream) and in
    particular do not depend on `workers`.
    """
    m = corr.n_elements
    if policy in ("greedy", "conventional"):
        rows = corr.sqrt
        active = m if policy == "conventional" else m_on
        if not 1 <= active <= m:
            raise DomainError(f"m_on must be in [1, {m}]")

        def kernel(images):
            return _adaptive_block(images, active)

    elif policy in ("fixed-uniform", "fixed-random"):
        if fixed_config is None:
            mode = "uniform-phase" if policy == "fixed-uniform" else "random-phase"
            rng = np.random.Generator(np.random.Philox(key=np.array(
                [stream.seed, 0xF1CED], dtype=np.uint64)))
            fixed_config = fixed_statistical_config(m, m_on, mode=mode, rng=rng)
        idx = fixed_config.selection.as_array()
        rows = corr.sqrt[idx, :]
        phase_factors = np.exp(1j * np.asarray(fixed_config.phases))[None, :]

        def kernel(images):
            return _fixed_block(images, phase_factors)

    else:
        raise DomainError(f"unknown policy {policy!r}")

    n_blocks = -(-trials // TRIALS_PER_BLOCK)

    def work(block: int):
        draws = stream.draw_block(m, block)
        images = correlated_images_batch(draws, rows)
        return kernel(images)

    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            parts = list(pool.map(work, range(n_blocks)))
    else:
        parts = [work(b) for b in range(n_blocks)]
    g_bob = np.concatenate([p[0] for p in parts])[:trials]
    g_eve = np.concatenate([p[1] for p in parts])[:trials]
    return GainSamples(g_bob=g_bob, g_eve=g_eve)


@dataclass(frozen=True)
class TrialRecords:
    """Per-trial gains, SNRs, and secrecy capacity for one budget."""

    g_bob: np.ndarray
    g_eve: np.ndarray
    snr_bob: np.ndarray
    snr_eve: np.ndarray
    capacity: np.ndarray


def records_for_budget(gains: GainSamples, budget: LinkBudget) -> TrialRecords:
    snr_b = budget.snr_scale("bob") * gains.g_bob
    snr_e = budget.snr_scale("eve") * gains.g_eve
    capacity = np.maximum(0.0, (np.log1p(snr_b) - np.log1p(snr_e)) / math.log(2.0))
    return TrialRecords(g_bob=gains.g_bob, g_eve=gains.g_eve,
                        snr_bob=snr_b, snr_eve=snr_e, capacity=capacity)


def run_trials(config: ExperimentConfig) -> TrialRecords:
    """Simulate the configured scenario at its base budget."""
    if config.policy == "conventional":
        geometry, _ = conventional_ris_config(config.conventional_m, config.wavelength)
        corr = build_correlation(geometry)
        m_on = config.conventional_m
    else:
        corr = build_correlation(config.fris_geometry())
        m_on = config.m_on
    stream = ChannelStream(seed=config.seed, stream=STREAM_FRIS_SNR)
    gains = simulate_gains(corr, config.policy, m_on, config.trials, stream,
                           workers=config.workers)
    return records_for_budget(gains, config.budget())


def estimate_sop(records: TrialRecords, target: SecrecyTarget) -> MetricEstimate:
    """Fraction of trials whose secrecy capacity is at or below the target."""
    outages = int(np.count_nonzero(records.capacity <= target.rate_bits))
    return MetricEstimate.for_proportion(outages, records.capacity.size)


def estimate_asc(records: TrialRecords) -> MetricEstimate:
    """Sample-mean secrecy capacity with a normal-approximation interval."""
    return MetricEstimate.for_mean(records.capacity)


def ks_statistic(samples: np.ndarray, cdf: Callable[[float], float]) -> float:
    """Sup-norm distance between the empirical CDF and an analytic CDF."""
    samples = np.sort(np.asarray(samples, dtype=float))
    n = samples.size
    if n < 100:
        raise DomainError("KS diagnostic needs at least 100 samples")
    theo = np.array([cdf(s) for s in samples])
    upper = np.max(np.arange(1, n + 1) / n - theo)
    lower = np.max(theo - np.arange(0, n) / n)
    return float(max(upper, lower))


# ---------------------------------------------------------------------------
# Sweeps
# ---------------------------------------------------------------------------

SWEEP_COLUMNS = (
    "sweep_var", "sweep_value", "asc_mc", "asc_se", "asc_ci_low", "asc_ci_high",
    "asc_bound", "asc_bound_negative", "sop_mc", "sop_se", "sop_ci_low",
    "sop_ci_high", "sop_bound", "gamma_shape", "gamma_scale", "exp_rate",
    "ks_bob", "ks_eve", "policy", "m_total", "m_on", "trials", "seed", "status",
)


def reference_fits(corr: CorrelationMatrix, m_on: int) -> tuple[GammaFit, ExpFit]:
    """Fits from the frozen first-m_on selection of this surface."""
    sel = SelectionSet(tuple(range(m_on)))
    reduced = reduce_correlation(corr, sel)
    return fit_bob_gamma(reduced), fit_eve_exponential(reduced)


def _nan_row(sweep_var, value, config, m_total, m_on, status) -> dict:
    row = {name: float("nan") for name in SWEEP_COLUMNS}
    row.update(sweep_var=sweep_var, sweep_value=value, policy=config.policy,
               m_total=m_total, m_on=m_on, trials=config.trials,
               seed=config.seed, status=status)
    return row


def _metric_row(sweep_var, value, config, budget, gains, fits, ks_pair,
                m_total, m_on, policy) -> dict:
    fit_b, fit_e = fits
    records = records_for_budget(gains, budget)
    asc = estimate_asc(records)
    sop = estimate_sop(records, config.target())
    asc_bound = asc_upper_bound(fit_b, fit_e, budget)
    sop_bound = sop_lower_bound(fit_b, fit_e, budget, config.target())
    return {
        "sweep_var": sweep_var, "sweep_value": value,
        "asc_mc": asc.point, "asc_se": asc.std_error,
        "asc_ci_low": asc.ci_low, "asc_ci_high": asc.ci_high,
        "asc_bound": asc_bound, "asc_bound_negative": int(asc_bound < 0.0),
        "sop_mc": sop.point, "sop_se": sop.std_error,
        "sop_ci_low": sop.ci_low, "sop_ci_high": sop.ci_high,
        "sop_bound": sop_bound,
        "gamma_shape": fit_b.shape, "gamma_scale": fit_b.scale,
        "exp_rate": fit_e.rate, "ks_bob": ks_pair[0], "ks_eve": ks_pair[1],
        "policy": policy, "m_total": m_total, "m_on": m_on,
        "trials": config.trials, "seed": config.seed, "status": "ok",
    }


def _gain_ks(gains: GainSamples, fit_b: GammaFit, fit_e: ExpFit) -> tuple[float, float]:
    ks_b = ks_statistic(gains.g_bob, lambda g: gamma_cdf(g, fit_b))
    ks_e = ks_statistic(gains.g_eve, lambda g: exp_cdf(g, fit_e))
    return ks_b, ks_e


def sweep_snr(config: ExperimentConfig, include_conventional: bool = True) -> list[dict]:
    """Metrics versus the legitimate receiver's average SNR (dB grid).

    One row per grid point for the configured policy, plus baseline rows for
    the conventional surface when requested.  The eavesdropper's budget stays
    at its configured value throughout the sweep.
    """
    rows = []
    base_budget = config.budget()
    corr = build_correlation(config.fris_geometry())
    fits = reference_fits(corr, config.m_on)
    gains = simulate_gains(corr, config.policy, config.m_on, config.trials,
                           ChannelStream(config.seed, STREAM_FRIS_SNR),
                           workers=config.workers)
    ks_pair = _gain_ks(gains, *fits)

    conv = None
    if include_conventional:
        conv_geometry, _ = conventional_ris_config(config.conventional_m, config.wavelength)
        conv_corr = build_correlation(conv_geometry)
        conv_fits = (fit_bob_gamma(conv_corr.matrix), fit_eve_exponential(conv_corr.matrix))
        conv_gains = simulate_gains(conv_corr, "conventional", config.conventional_m,
                                    config.trials,
                                    ChannelStream(config.seed, STREAM_CONV_SNR),
                                    workers=config.workers)
        conv_ks = _gain_ks(conv_gains, *conv_fits)
        conv = (conv_corr, conv_fits, conv_gains, conv_ks)

    for snr_db in config.snr_sweep_db:
        budget = base_budget.with_avg_snr_bob(db_to_linear(snr_db))
        try:
            rows.append(_metric_row("avg_snr_bob_db", snr_db, config, budget, gains,
                                    fits, ks_pair, corr.n_elements, config.m_on,
                                    config.policy))
        except FrisecError as exc:
            rows.append(_nan_row("avg_snr_bob_db", snr_db, config, corr.n_elements,
                                 config.m_on, f"error: {exc}"))
        if conv is not None:
            conv_corr, conv_fits, conv_gains, conv_ks = conv
            try:
                rows.append(_metric_row("avg_snr_bob_db", snr_db, config, budget,
                                        conv_gains, conv_fits, conv_ks,
                                        conv_corr.n_elements, conv_corr.n_elements,
                                        "conventional"))
            except FrisecError as exc:
                rows.append(_nan_row("avg_snr_bob_db", snr_db, config,
                                     conv_corr.n_elements, conv_corr.n_elements,
                                     f"error: {exc}"))
    return rows


def sweep_size(config: ExperimentConfig) -> list[dict]:
    """Metrics versus total element count at fixed active count.

    Every size keeps the configured aperture, so a larger count packs the
    same area more densely.  The conventional baseline has the same number
    of active elements and is re-simulated with a fresh stream per point;
    it has no dependence on the sweep value, so its rows should be flat up
    to Monte Carlo noise.
    """
    rows = []
    budget = config.budget()
    for point, m_total in enumerate(config.size_sweep):
        side = math.isqrt(int(m_total))
        if side * side != m_total:
            rows.append(_nan_row("m_total", m_total, config, m_total, config.m_on,
                                 "error: size grid values must be perfect squares"))
            continue
        geometry = SurfaceGeometry(m_x=side, m_z=side, width_x=config.aperture_x,
                                   width_z=config.aperture_z,
                                   wavelength=config.wavelength)
        try:
            corr = build_correlation(geometry)
            fits = reference_fits(corr, config.m_on)
            gains = simulate_gains(corr, "greedy", config.m_on, config.trials,
                                   ChannelStream(config.seed, STREAM_SIZE_BASE + 2 * point),
                                   workers=config.workers)
            ks_pair = _gain_ks(gains, *fits)
            rows.append(_metric_row("m_total", m_total, config, budget, gains, fits,
                                    ks_pair, m_total, config.m_on, "greedy"))
        except FrisecError as exc:
            rows.append(_nan_row("m_total", m_total, config, m_total, config.m_on,
                                 f"error: {exc}"))
        try:
            conv_geom, _ = conventional_ris_config(config.m_on, config.wavelength)
            conv_corr = build_correlation(conv_geom)
            conv_fits = (fit_bob_gamma(conv_corr.matrix),
                         fit_eve_exponential(conv_corr.matrix))
            conv_gains = simulate_gains(conv_corr, "conventional", config.m_on,
                                        config.trials,
                                        ChannelStream(config.seed,
                                                      STREAM_SIZE_BASE + 2 * point + 1),
                                        workers=config.workers)
            conv_ks = _gain_ks(conv_gains, *conv_fits)
            rows.append(_metric_row("m_total", m_total, config, budget, conv_gains,
                                    conv_fits, conv_ks, config.m_on, config.m_on,
                                    "conventional"))
        except FrisecError as exc:
            rows.append(_nan_row("m_total", m_total, config, config.m_on, config.m_on,
                                 f"error: {exc}"))
    return rows


VALIDATE_FIT_COLUMNS = (
    "m_on", "trials", "mean_g_bob", "expected_mean", "rel_err_bob", "mean_g_eve",
    "rel_err_eve", "ks_bob", "ks_eve", "gamma_shape", "gamma_scale", "exp_rate",
    "seed", "status",
)


def validate_fits(config: ExperimentConfig, m_on_list: Sequence[int] | None = None) -> list[dict]:
    """Frozen-configuration check of the fitted gain laws.

    Simulates the fixed first-m_on, zero-phase configuration and compares the
    empirical gain means against the trace formulas; KS distances against the
    fitted laws are reported as advisory diagnostics (the fits match the
    means by construction, not the whole shape).
    """
    if m_on_list is None:
        m_on_list = (config.m_on,)
    corr = build_correlation(config.fris_geometry())
    rows = []
    for index, m_on in enumerate(m_on_list):
        try:
            fit_b, fit_e = reference_fits(corr, m_on)
            gains = simulate_gains(corr, "fixed-uniform", m_on, config.trials,
                                   ChannelStream(config.seed, STREAM_VALIDATE_BASE + index),
                                   workers=config.workers)
            mean_b = float(gains.g_bob.mean())
            mean_e = float(gains.g_eve.mean())
            expected = fit_b.mean  # equals the eavesdropper mean 1/rate as well
            ks_b, ks_e = _gain_ks(gains, fit_b, fit_e)
            rows.append({
                "m_on": m_on, "trials": config.trials, "mean_g_bob": mean_b,
                "expected_mean": expected,
                "rel_err_bob": abs(mean_b - expected) / expected,
                "mean_g_eve": mean_e,
                "rel_err_eve": abs(mean_e - fit_e.mean) / fit_e.mean,
                "ks_bob": ks_b, "ks_eve": ks_e, "gamma_shape": fit_b.shape,
                "gamma_scale": fit_b.scale, "exp_rate": fit_e.rate,
                "seed": config.seed, "status": "ok",
            })
        except FrisecError as exc:
            rows.append({name: float("nan") for name in VALIDATE_FIT_COLUMNS}
                        | {"m_on": m_on, "seed": config.seed, "status": f"error: {exc}"})
    return rows


VALIDATE_BOUND_COLUMNS = (
    "avg_snr_bob_db", "sop_mc", "sop_se", "sop_bound", "sop_bound_ok",
    "asc_mc", "asc_se", "asc_bound", "asc_bound_negative", "asc_bound_ok",
    "policy", "m_total", "m_on", "trials", "seed", "status",
)


def validate_bounds(config: ExperimentConfig) -> list[dict]:
    """Outage lower bound and capacity bound versus frozen-config Monte Carlo.

    Runs the fixed-uniform regime (the one the fits describe).  For each grid
    point the outage criterion is MC >= bound - 2 SE; the capacity comparison
    records whether the closed form stayed above the simulated mean, which it
    need not in general (its second term is not a true bound), so violations
    are flagged rather than fatal.
    """
    corr = build_correlation(config.fris_geometry())
    fit_b, fit_e = reference_fits(corr, config.m_on)
    gains = simulate_gains(corr, "fixed-uniform", config.m_on, config.trials,
                           ChannelStream(config.seed, STREAM_BOUNDS),
                           workers=config.workers)
    base_budget = config.budget()
    rows = []
    for snr_db in config.snr_sweep_db:
        budget = base_budget.with_avg_snr_bob(db_to_linear(snr_db))
        records = records_for_budget(gains, budget)
        sop = estimate_sop(records, config.target())
        asc = estimate_asc(records)
        bound = sop_lower_bound(fit_b, fit_e, budget, config.target())
        asc_ub = asc_upper_bound(fit_b, fit_e, budget)
        rows.append({
            "avg_snr_bob_db": snr_db,
            "sop_mc": sop.point, "sop_se": sop.std_error, "sop_bound": bound,
            "sop_bound_ok": int(sop.point >= bound - 2.0 * sop.std_error),
            "asc_mc": asc.point, "asc_se": asc.std_error, "asc_bound": asc_ub,
            "asc_bound_negative": int(asc_ub < 0.0),
            "asc_bound_ok": int(asc_ub >= asc.point),
            "policy": "fixed-uniform", "m_total": corr.n_elements,
            "m_on": config.m_on, "trials": config.trials, "seed": config.seed,
            "status": "ok",
        })
    return rows


# ---------------------------------------------------------------------------
# CSV and manifest output
# ---------------------------------------------------------------------------

def _format_cell(value) -> str:
    if isinstance(value, bool):
        return "1" if value else "0"
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if isinstance(value, (float, np.floating)):
        return format(float(value), ".17e")
    return str(value)


def rows_to_csv(rows: Iterable[dict], columns: Sequence[str]) -> str:
    lines = [",".join(columns)]
    for row in rows:
        lines.append(",".join(_format_cell(row.get(col, float("nan"))) for col in columns))
    return "\n".join(lines) + "\n"


def write_results(path: str, rows: list[dict], columns: Sequence[str],
                  config: ExperimentConfig, extra_manifest: dict | None = None) -> None:
    """Write the CSV (timestamp-free, byte-reproducible) plus a run manifest."""
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(rows_to_csv(rows, columns))
    manifest = {
        "config": asdict(config),
        "version": __version__,
        "numpy_version": np.__version__,
        "written_unix_time": time.time(),
        "rows": len(rows),
        "notes": {
            "element_distance": "both grid coordinate differences enter squared "
                                "(true planar Euclidean separation)",
            "stream_registry": {
                "fris_snr": STREAM_FRIS_SNR, "conventional_snr": STREAM_CONV_SNR,
                "bounds": STREAM_BOUNDS, "validate_base": STREAM_VALIDATE_BASE,
                "size_base": STREAM_SIZE_BASE,
            },
        },
    }
    if extra_manifest:
        manifest["notes"].update(extra_manifest)
    with open(path + ".manifest.json", "w", encoding="utf-8") as fh:
        json.dump(manifest, fh, indent=2, sort_keys=True)
        fh.write("\n")


def dump_correlation_csv(config: ExperimentConfig, path: str) -> dict:
    """Write the surface correlation matrix row-major at full precision."""
    corr = build_correlation(config.fris_geometry())
    with open(path, "w", encoding="utf-8") as fh:
        for row in corr.matrix:
            fh.write(",".join(format(v, ".17e") for v in row))
            fh.write("\n")
    diag = {"eigen_floor": corr.eigen_floor, "clamped_mass": corr.clamped_mass,
            "n_elements": corr.n_elements}
    with open(path + ".manifest.json", "w", encoding="utf-8") as fh:
        json.dump({"config": asdict(config), "version": __version__,
                   "written_unix_time": time.time(), "diagnostics": diag},
                  fh, indent=2, sort_keys=True)
        fh.write("\n")
    return diag
