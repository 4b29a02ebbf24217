"""Run scenarios end to end and write their artifacts."""

import csv
import io
import json
import math
import os
import tempfile
import time
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .. import diagnostics as dg
from ..evolution import EvolutionPlan
from ..pipeline import schrodingerized_solve
from ..schrodingerize import RecoverySpec, make_pgrid
from .config import ScenarioConfig
from .scenarios import build_scenario

_REFERENCE_ROW = {"schr1_spectral": "schr1", "schr2_yee": "schr2"}


@dataclass
class RunResult:
    config: ScenarioConfig
    report: dg.DiagnosticsReport
    extras: dict
    numeric: object  # FieldState at t_final
    exact: object
    elapsed: float

    def diagnostics_dict(self):
        out = {"name": self.config.name, "scheme": self.config.scheme}
        out.update(self.report.to_dict())
        out.update(self.extras)
        row = _REFERENCE_ROW.get(self.config.scheme)
        if row is not None and self.config.exact == "tm_2d":
            out["published_reference"] = dg.PUBLISHED_REFERENCE[row]
        return _jsonable(out)


def _jsonable(obj):
    if isinstance(obj, dict):
        return {k: _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, (np.floating, np.integer)):
        return obj.item()
    if isinstance(obj, float) and not math.isfinite(obj):
        return None
    return obj


def execute(cfg):
    """Run one scenario in memory."""
    start = time.perf_counter()
    sc = build_scenario(cfg)
    p = cfg.pgrid
    pgrid = make_pgrid(p.n, p.left, p.right)
    plan = EvolutionPlan(cfg.evolution.method, cfg.t_final, cfg.evolution.dt)
    res = schrodingerized_solve(sc.system, cfg.t_final, pgrid,
                                RecoverySpec(cfg.recovery.mode, cfg.recovery.p_star), plan,
                                auto_extend=p.auto_extend)
    numeric = sc.fields(res.u)
    initial = sc.fields(sc.system.u0)
    exact = sc.exact(cfg.t_final) if sc.exact is not None else None
    e0, e1 = dg.discrete_energy(initial), dg.discrete_energy(numeric)
    extras = dict(sc.extras(res.u, cfg.t_final))
    dims = cfg.grid.dim
    complexity = dg.estimate_for(res.lifted, cfg.t_final, dim=dims, cells=cfg.grid.m ** dims)
    report = dg.DiagnosticsReport(
        energy_initial=e0,
        energy_final=e1,
        energy_drift=abs(e1 - e0),
        div_b_drift=extras.pop("div_b_drift", None),
        gauss_f4=extras.pop("gauss_f4", None),
        gauss_f8=extras.pop("gauss_f8", None),
        err_eb=dg.err_eb(numeric, exact) if exact is not None else None,
        complexity=complexity,
    )
    extras["solver"] = {"method": res.method, "p_star": res.p_star, "p_points": res.pgrid.n,
                        "p_domain": [res.pgrid.left, res.pgrid.right],
                        "growth_range": list(res.growth)}
    return RunResult(cfg, report, extras, numeric, exact, time.perf_counter() - start)


def field_rows(state, t):
    """Rows ``(t, x[, y[, z]], component, re, im)`` of a field state."""
    comps = state.components
    for k, name in enumerate(comps):
        vals = state.component(name)
        pts = state.points[k] if state.points is not None else None
        for i, v in enumerate(vals):
            coords = [] if pts is None else list(np.atleast_1d(pts[i]))
            yield [t, *coords, name, v.real, v.imag]


def _fmt(x):
    if isinstance(x, str):
        return x
    return format(float(x), ".17g")


def fields_csv(state, t):
    dim = state.grid.dim
    header = ["t", "x", "y", "z"][: dim + 1] + ["component", "re", "im"]
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    for row in field_rows(state, t):
        writer.writerow([_fmt(x) for x in row])
    return buf.getvalue()


def atomic_write(path, text):
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=f".{path.name}.")
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def write_artifacts(result, outdir):
    """Write ``fields.csv``, ``diagnostics.json`` and ``manifest.json`` under ``outdir``."""
    outdir = Path(outdir)
    cfg = result.config
    written = []
    if "fields" in cfg.outputs:
        atomic_write(outdir / "fields.csv", fields_csv(result.numeric, cfg.t_final))
        written.append("fields.csv")
    if "diagnostics" in cfg.outputs:
        text = json.dumps(result.diagnostics_dict(), indent=2, sort_keys=True) + "\n"
        atomic_write(outdir / "diagnostics.json", text)
        written.append("diagnostics.json")
    if "manifest" in cfg.outputs:
        from .. import __version__
        manifest = {"config": cfg.to_dict(), "package_version": __version__, "files": written}
        atomic_write(outdir / "manifest.json", json.dumps(manifest, indent=2, sort_keys=True) + "\n")
        written.append("manifest.json")
    return written


def run(cfg, outdir=None):
    """Execute ``cfg`` and, when ``outdir`` is given, write its artifacts."""
    result = execute(cfg)
    if outdir is not None:
        write_artifacts(result, outdir)
    return result
