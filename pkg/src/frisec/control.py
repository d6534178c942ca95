"""Surface configuration policies: which elements are ON and with what phases.

Two regimes are first-class.  Adaptive policies re-select per channel
realization using the legitimate receiver's CSI only; fixed policies freeze
one configuration for a whole statistical run, which is the setting the
moment-matched distribution fits describe.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from itertools import combinations

import numpy as np

from .channel import ChannelRealization
from .errors import ConfigError, DomainError
from .surface import SelectionSet, SurfaceGeometry

_TWO_PI = 2.0 * math.pi


@dataclass(frozen=True)
class FrisConfiguration:
    """An ordered active-element set with per-element phases in [0, 2 pi)."""

    selection: SelectionSet
    phases: tuple
    mode: str  # "adaptive" | "fixed-uniform" | "fixed-random" | "conventional"

    def __post_init__(self):
        phases = tuple(float(p) for p in self.phases)
        object.__setattr__(self, "phases", phases)
        if len(phases) != len(self.selection):
            raise DomainError("need exactly one phase per selected element")
        if not all(math.isfinite(p) for p in phases):
            raise DomainError("phases must be finite")


def _cophase_terms(realization: ChannelRealization) -> np.ndarray:
    # Per-element cascaded coefficients toward the legitimate receiver.
    return np.conj(realization.u_bob) * realization.v_feed


def select_greedy_cophase(realization: ChannelRealization, m_on: int) -> FrisConfiguration:
    """Activate the strongest elements and align their phases for Bob.

    The co-phased objective sum |u_bob[m]| |v[m]| is separable over elements,
    so picking the largest per-element product magnitudes is exactly optimal
    among all subsets of the same size (select_exhaustive confirms this on
    small instances).  Ties break toward smaller indices.
    """
    m = realization.u_bob.shape[0]
    if not 1 <= m_on <= m:
        raise DomainError(f"m_on must be in [1, {m}], got {m_on}")
    terms = _cophase_terms(realization)
    mags = np.abs(terms)
    order = np.argsort(-mags, kind="stable")[:m_on]
    idx = np.sort(order)
    phases = (-np.angle(terms[idx])) % _TWO_PI
    return FrisConfiguration(selection=SelectionSet(tuple(idx)), phases=tuple(phases),
                             mode="adaptive")


def select_exhaustive(realization: ChannelRealization, m_on: int) -> FrisConfiguration:
    """Brute-force subset search oracle for the selection policy.

    Enumerates every size-m_on subset, co-phases each, and keeps the one with
    the largest aligned channel magnitude; ties resolve to the
    lexicographically smallest index set.  Refuses more than 1e6 subsets.
    """
    m = realization.u_bob.shape[0]
    if not 1 <= m_on <= m:
        raise DomainError(f"m_on must be in [1, {m}], got {m_on}")
    if math.comb(m, m_on) > 1_000_000:
        raise DomainError(f"C({m}, {m_on}) exceeds the enumeration budget")
    mags = np.abs(_cophase_terms(realization))
    best = None
    best_val = -1.0
    for subset in combinations(range(m), m_on):
        val = float(mags[list(subset)].sum())
        if val > best_val + 1e-15 * max(1.0, abs(best_val)):
            best, best_val = subset, val
    terms = _cophase_terms(realization)
    idx = np.asarray(best, dtype=np.intp)
    phases = (-np.angle(terms[idx])) % _TWO_PI
    return FrisConfiguration(selection=SelectionSet(best), phases=tuple(phases),
                             mode="adaptive")


def conventional_ris_config(m_conv: int, wavelength: float) -> tuple[SurfaceGeometry, FrisConfiguration]:
    """Square half-wavelength-spaced baseline surface with every element ON.

    Phases returned here are placeholders (zeros); the baseline is co-phased
    toward the legitimate receiver per realization by the simulation loop.
    """
    side = math.isqrt(int(m_conv))
    if side * side != m_conv:
        raise ConfigError(f"conventional element count must be a perfect square, got {m_conv}")
    geometry = SurfaceGeometry(m_x=side, m_z=side, width_x=side / 2.0, width_z=side / 2.0,
                               wavelength=wavelength)
    config = FrisConfiguration(
        selection=SelectionSet(tuple(range(m_conv))),
        phases=tuple(0.0 for _ in range(m_conv)),
        mode="conventional",
    )
    return geometry, config


def fixed_statistical_config(m: int, m_on: int, mode: str = "uniform-phase",
                             rng: np.random.Generator | None = None) -> FrisConfiguration:
    """Configuration frozen across a whole statistical-validation run.

    uniform-phase: first m_on elements, all phases zero (the regime in which
    the trace identities behind the distribution fits hold exactly).
    random-phase: uniformly random subset with i.i.d. uniform phases.
    """
    if not 1 <= m_on <= m:
        raise DomainError(f"m_on must be in [1, {m}], got {m_on}")
    if mode == "uniform-phase":
        indices = tuple(range(m_on))
        phases = tuple(0.0 for _ in range(m_on))
        return FrisConfiguration(SelectionSet(indices), phases, mode="fixed-uniform")
    if mode == "random-phase":
        if rng is None:
            raise DomainError("random-phase mode needs an rng")
        indices = tuple(sorted(rng.choice(m, size=m_on, replace=False).tolist()))
        phases = tuple(rng.uniform(0.0, _TWO_PI, size=m_on).tolist())
        return FrisConfiguration(SelectionSet(indices), phases, mode="fixed-random")
    raise DomainError(f"unknown fixed configuration mode {mode!r}")
