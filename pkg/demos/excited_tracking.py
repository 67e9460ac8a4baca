"""Following the excited state (6, 0) as the coupling is switched on.

At alpha = 0 the level E = 7 is degenerate inside its parity block; the
tracker splits it with the coupling and then follows the state by overlap.
"""
from eur.sweep import SweepConfig, alpha_range, run_sweep

cfg = SweepConfig(alpha_range(0.0, 0.3, 0.02), state="tracked", tracked_n=6, n_max=40)
for r in run_sweep(cfg):
    print(f"alpha={r.alpha:4.2f}  E={r.E0:.6f}  S_q={r.S_q:.5f}  S_p={r.S_p:.5f}  sum={r.S_sum:.5f}  "
          f"overlap={r.overlap:.6f}")
