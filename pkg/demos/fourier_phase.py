"""Momentum densities without a Fourier transform.

Each oscillator eigenfunction of frequency s and n quanta transforms into i^n
times the eigenfunction of frequency 1/s. Momentum amplitudes therefore follow
from the expansion coefficients directly. Here that shortcut is checked
against a brute-force 2D quadrature transform of the sampled position amplitude.
"""
from eur import BasisSpec, HamiltonianParams, ground_state
from eur.entropy import entropy_from_coefficients, momentum_entropy_direct_ft

for a in (0.0, 0.1, 1.0, 5.0):
    g = ground_state(HamiltonianParams(1, 1, a), BasisSpec(30))
    s1 = entropy_from_coefficients(g, "momentum")
    s2 = momentum_entropy_direct_ft(g)
    print(f"alpha={a:4.1f}  phase identity {s1:.10f}   direct transform {s2:.10f}   diff {abs(s1 - s2):.1e}")
