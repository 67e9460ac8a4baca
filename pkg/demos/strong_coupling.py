"""Strong coupling: logarithmic scaling of the entropies for alpha = 30 .. 90.

The basis frequency is raised to alpha**(1/3) so that 60 quanta suffice.
The adiabatic state's momentum density needs a numerical Fourier transform.
"""
from eur.entropy import position_entropy_large_alpha_quadrature
from eur.sweep import SweepConfig, compare_methods, fit, run_sweep

cfg = SweepConfig.from_range(30, 90, 10, methods=("numeric", "analytic-large"), n_max=60, adapt_basis=True)
records = run_sweep(cfg)
num = [r for r in records if r.method == "numeric"]

print(" alpha   E0        S_q      S_p      sum")
for r in num:
    print(f"{r.alpha:5.0f}  {r.E0:.6f}  {r.S_q:.5f}  {r.S_p:.5f}  {r.S_sum:.5f}")
for field in ("S_q", "S_p", "S_sum"):
    print(f"{field:5s} vs ln(alpha): {fit(num, field, 'linear_logalpha').describe()}")

cmp = compare_methods(records, "numeric", "analytic-large")
for row in cmp.rows:
    print(f"alpha={row.alpha:4.0f}  numeric - adiabatic: dS_q={row.d_S_q:+.4f}  dS_p={row.d_S_p:+.4f}")

# the full adiabatic position entropy (fast-mode log average kept exactly) sits
# between the numeric values and the simplified closed form
for a in (30, 60, 90):
    print(f"alpha={a}: adiabatic S_q with the full log average = {position_entropy_large_alpha_quadrature(a):.5f}")
