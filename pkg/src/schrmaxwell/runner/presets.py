"""Shipped scenario configurations."""

import copy

from .config import from_dict

_PRESETS = {
    "periodic-2d-tm": {
        "name": "periodic-2d-tm",
        "scheme": "schr1_spectral",
        "exact": "tm_2d",
        "t_final": 1.0,
        "grid": {"dim": 2, "m": 32, "lengths": [2.0, 2.0]},
        "pgrid": {"n": 128, "left": -10.0, "right": 10.0},
        "boundary": {"left": "periodic", "right": "periodic"},
        "recovery": {"mode": "pointwise"},
        "evolution": {"method": "exact_expm"},
    },
    "periodic-2d-tm-yee": {
        "name": "periodic-2d-tm-yee",
        "scheme": "schr2_yee",
        "exact": "tm_2d",
        "t_final": 1.0,
        "grid": {"dim": 2, "m": 32, "lengths": [2.0, 2.0]},
        "pgrid": {"n": 128, "left": -10.0, "right": 10.0},
        "boundary": {"left": "periodic", "right": "periodic"},
        "recovery": {"mode": "pointwise"},
        "evolution": {"method": "exact_expm"},
    },
    "pec-1d": {
        "name": "pec-1d",
        "scheme": "upwind_char",
        "exact": "pec_1d",
        "t_final": 1.0,
        "grid": {"dim": 1, "m": 64, "lengths": [15.0], "origin": [0.0]},
        "pgrid": {"n": 128, "left": -10.0, "right": 10.0},
        "boundary": {"left": "perfect_conductor", "right": "perfect_conductor"},
        "recovery": {"mode": "pointwise"},
        "evolution": {"method": "backward_euler", "dt": 0.01},
    },
    "impedance-1d": {
        "name": "impedance-1d",
        "scheme": "upwind_char",
        "exact": "impedance_1d",
        "t_final": 1.0,
        "grid": {"dim": 1, "m": 64, "lengths": [15.0], "origin": [0.0]},
        "pgrid": {"n": 128, "left": -10.0, "right": 10.0},
        "boundary": {"left": "impedance", "right": "impedance"},
        "recovery": {"mode": "pointwise"},
        "evolution": {"method": "backward_euler", "dt": 0.01},
    },
    "interface-1d": {
        "name": "interface-1d",
        "scheme": "interface_1d",
        "exact": "fresnel",
        "t_final": 3.0,
        "grid": {"dim": 1, "m": 128, "lengths": [19.0], "origin": [-9.0]},
        "pgrid": {"n": 128, "left": -10.0, "right": 10.0},
        "boundary": {"left": "inflow_exact", "right": "inflow_exact"},
        "interface": {"position": 0.0, "eps1": 1.0, "mu1": 1.0, "eps2": 2.0, "mu2": 2.0,
                      "omega": 0.5, "fit_distance": 2.0},
        "recovery": {"mode": "pointwise"},
        "evolution": {"method": "backward_euler", "dt": 0.01},
    },
    "gaussian-pulse-inhomogeneous": {
        "name": "gaussian-pulse-inhomogeneous",
        "scheme": "spectral_inhomogeneous",
        "exact": "gaussian_pulse",
        "t_final": 10.0,
        "grid": {"dim": 1, "m": 128, "lengths": [32.0], "origin": [0.0]},
        "pgrid": {"n": 128, "left": -10.0, "right": 10.0},
        "boundary": {"left": "periodic", "right": "periodic"},
        "medium": {"profile": "tanh", "eps": 1.0, "mu": 1.0, "eps2": 3.0, "center": 12.0,
                   "beta": 2.0, "mirror_fraction": 0.9},
        "recovery": {"mode": "pointwise"},
        "evolution": {"method": "exact_expm"},
    },
}


def names():
    return sorted(_PRESETS)


def preset_dict(name):
    try:
        return copy.deepcopy(_PRESETS[name])
    except KeyError:
        raise KeyError(f"unknown preset {name!r}; available: {', '.join(names())}") from None


def preset(name, **overrides):
    """Parsed config for ``name``; ``overrides`` replace top-level keys or merge tables."""
    raw = preset_dict(name)
    for key, val in overrides.items():
        if isinstance(val, dict) and isinstance(raw.get(key), dict):
            raw[key].update(val)
        else:
            raw[key] = val
    return from_dict(raw)
