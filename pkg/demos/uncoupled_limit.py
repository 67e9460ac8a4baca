"""Uncoupled oscillator: the ground state is a product Gaussian and its
entropic sum sits exactly on the 2(1 + ln pi) bound, whatever k1 and k2 are."""
from eur import BasisSpec, HamiltonianParams, check_eur, entropies_from_coefficients, ground_state

for k1, k2 in [(1.0, 1.0), (0.5, 2.0), (2.5, 0.8)]:
    p = HamiltonianParams(k1, k2, 0.0)
    g = ground_state(p, BasisSpec.for_params(p, 20))
    r = entropies_from_coefficients(g)
    chk = check_eur(r)
    # squeezing one space widens the other by exactly the same log factor
    print(f"k1={k1:<4} k2={k2:<4} E0={g.energy:.6f}  S_q={r.S_q:.6f}  S_p={r.S_p:.6f}  "
          f"sum={r.sum:.8f}  saturated={chk.saturated}")
