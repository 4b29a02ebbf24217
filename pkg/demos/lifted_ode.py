"""Solve a small damped, forced ODE through the lifted Hamiltonian and compare with expm."""

import numpy as np
import scipy.linalg as sla

from schrmaxwell.pipeline import schrodingerized_solve
from schrmaxwell.schrodingerize import LinearSystem, make_pgrid

a = np.array([[-0.5, 1.0], [-1.0, -0.2]], dtype=complex)
b = np.array([1.0, 0.0], dtype=complex)
u0 = np.array([0.0, 1.0], dtype=complex)

big = np.zeros((3, 3), complex)
big[:2, :2], big[:2, 2] = a, b
for t in (0.5, 1.0, 2.0):
    ref = (sla.expm(big * t) @ np.r_[u0, 1])[:2]
    for n in (64, 256):
        res = schrodingerized_solve(LinearSystem(a, b, u0), t, make_pgrid(n))
        err = np.linalg.norm(res.u - ref) / np.linalg.norm(ref)
        print(f"T={t:<4} N={n:<4} p*={res.p_star:.3f}  rel err {err:.2e}")
