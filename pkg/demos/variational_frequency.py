"""The Gaussian trial frequency b of the strong-coupling adiabatic state.

b solves b^4 - 2 b^2 - 2 alpha b / pi + 1 = 0 and approaches (2 alpha / pi)^(1/3).
E_v(b) is the energy of the trial state in the adiabatic x-Hamiltonian. It is
not an upper bound on the exact ground energy, since the adiabatic Hamiltonian
itself lies below the full one.
"""
from eur import BasisSpec, HamiltonianParams, ground_state, solve_variational_b

print(" alpha   b_quartic  b_asym   rel.diff  E_v       E0(numeric)")
for a in (0.0, 1.0, 10.0, 30.0, 60.0, 90.0, 300.0):
    p = HamiltonianParams(1, 1, a)
    sol = solve_variational_b(p)
    e0 = ground_state(p, BasisSpec.for_params(p, 60, adapt=True)).energy
    rel = abs(sol.b - sol.b_asymptotic) / sol.b
    print(f"{a:6.1f}  {sol.b:.6f}   {sol.b_asymptotic:.5f}  {rel:7.4f}  {sol.energy:.6f}  {e0:.6f}")
