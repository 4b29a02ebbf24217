"""Plane wave through a dielectric interface; fitted amplitudes against the Fresnel formulas.

Takes about a minute on one core.
"""

from schrmaxwell.runner import execute, preset

for eps2, mu2 in ((2.0, 2.0), (3.0, 1.0)):
    res = execute(preset("interface-1d", interface={"eps2": eps2, "mu2": mu2}))
    f = res.extras["fresnel"]
    print(f"eps2={eps2} mu2={mu2}: reflected {complex(*f['reflected']):.4f} "
          f"(expected {f['reflection_expected']:.4f}), transmitted {complex(*f['transmitted']):.4f} "
          f"(expected {f['transmission_expected']:.4f}), {res.elapsed:.0f} s")
