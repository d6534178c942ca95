"""Secrecy metrics: Monte Carlo versus the closed forms.

Sweeps the legitimate receiver's average SNR with the frozen configuration
the fits describe, and compares the Monte Carlo secrecy outage probability
and average secrecy capacity to the closed-form outage lower bound and the
Jensen-style capacity expression.  The outage bound holds at every point;
the capacity expression is an approximation whose violations are flagged.
"""

import numpy as np

from frisec.harness import ExperimentConfig, validate_bounds
from frisec.secrecy import sop_lower_oracle
from frisec.harness import reference_fits, db_to_linear
from frisec.surface import build_correlation

cfg = ExperimentConfig(trials=30_000, seed=42, m_on=100,
                       snr_sweep_db=tuple(float(v) for v in range(60, 125, 10)))
rows = validate_bounds(cfg)

print(f"{'SNR dB':>7} {'SOP (MC)':>10} {'SOP bound':>11} {'ok':>3} "
      f"{'ASC (MC)':>9} {'ASC closed':>11} {'ok':>3}")
for r in rows:
    print(f"{r['avg_snr_bob_db']:>7.0f} {r['sop_mc']:>10.5f} {r['sop_bound']:>11.4e} "
          f"{'y' if r['sop_bound_ok'] else 'N':>3} {r['asc_mc']:>9.4f} "
          f"{r['asc_bound']:>11.4f} {'y' if r['asc_bound_ok'] else 'N':>3}")

print("""
The outage closed form is a genuine lower bound in this regime: the Monte
Carlo estimate sits above it at every SNR.  The capacity closed form applies
mean-SNR averaging to both links, which reverses the bounding direction on
the eavesdropper term and drops the positive-part clamp, so the simulated
average secrecy capacity can exceed it (and does here); negative values at
low SNR are reported unclamped.  Violations are flagged per row, never
silently dropped.""")

# the closed form also agrees with direct quadrature of its defining integral
corr = build_correlation(cfg.fris_geometry())
fit_b, fit_e = reference_fits(corr, cfg.m_on)
budget = cfg.budget().with_avg_snr_bob(db_to_linear(100.0))
oracle = sop_lower_oracle(fit_b, fit_e, budget, cfg.target())
closed = [r["sop_bound"] for r in rows if r["avg_snr_bob_db"] == 100.0][0]
print(f"closed form at 100 dB: {closed:.10e}; defining integral: {oracle:.10e}")
