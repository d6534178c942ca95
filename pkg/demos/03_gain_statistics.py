"""Moment-matched gain laws versus frozen-configuration Monte Carlo.

With a frozen element selection and equal phases, the mean equivalent power
gain of both receivers equals the squared Frobenius norm of the reduced
correlation matrix; the Gamma/exponential fits are built from that and the
fourth trace power.  This script checks the means and shows where the fitted
shapes do and do not match the simulated laws.
"""

import numpy as np

from frisec import (ChannelStream, ExpFit, GammaFit, exp_cdf, gamma_cdf)
from frisec.harness import (ExperimentConfig, ks_statistic, reference_fits,
                            simulate_gains)
from frisec.surface import build_correlation

TRIALS = 30_000

cfg = ExperimentConfig(m_x=10, m_z=10, m_on=100, trials=TRIALS, seed=42)
corr = build_correlation(cfg.fris_geometry())

print(f"{'on':>4} {'mean gain (MC)':>15} {'trace formula':>14} {'shape':>7} "
      f"{'KS bob':>7} {'KS eve':>7}")
for i, m_on in enumerate((10, 50, 100)):
    fit_b, fit_e = reference_fits(corr, m_on)
    gains = simulate_gains(corr, "fixed-uniform", m_on, TRIALS,
                           ChannelStream(cfg.seed, 10 + i))
    ks_b = ks_statistic(gains.g_bob, lambda g: gamma_cdf(g, fit_b))
    ks_e = ks_statistic(gains.g_eve, lambda g: exp_cdf(g, fit_e))
    print(f"{m_on:>4} {gains.g_bob.mean():>15.2f} {fit_b.mean:>14.2f} "
          f"{fit_b.shape:>7.3f} {ks_b:>7.3f} {ks_e:>7.3f}")

print("""
Reading the table: the Monte Carlo means land on the trace formulas (the fits
are exact in the first moment for both receivers).  The eavesdropper's
exponential fit also matches in shape (small KS).  The legitimate receiver's
frozen-configuration gain is a product of two fading factors, so its true law
is overdispersed relative to a Gamma with the fitted shape; the large KS
values quantify that, and they are reported as a diagnostic rather than an
error.  Under the adaptive selection policy the gain statistics move far above
these fits (see demo 05).""")

# the fits are ordinary shape/scale objects and can be evaluated anywhere
fit = GammaFit(shape=2.0, scale=3.0)
print(f"example fitted CDF value: {gamma_cdf(6.0, fit):.6f}")
print(f"example exponential CDF:  {exp_cdf(2.0, ExpFit(rate=0.5)):.6f}")
