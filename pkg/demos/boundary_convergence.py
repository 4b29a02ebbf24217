"""Upwind vs Yee refinement study on the walled 1-D problems (several minutes)."""

from schrmaxwell.runner import preset
from schrmaxwell.runner.sweep import convergence

for name in ("pec-1d", "impedance-1d"):
    for scheme in ("upwind_char", "yee_1d"):
        res = convergence(preset(name, scheme=scheme), [64, 128, 256], [128, 256, 512])
        errs = "  ".join(f"{r['err_eb']:.3e}" for r in res["levels"])
        print(f"{name:<13} {scheme:<12} {errs}   order {res['order']:.2f}")
