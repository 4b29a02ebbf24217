"""Command-line entry point: ``schrmaxwell run|compare|convergence|presets``."""

import argparse
import json
import sys

import numpy as np

from ..linalg import NotHermitianError
from . import presets
from .config import ConfigError, dumps_toml, load_config
from .run import atomic_write, run
from .sweep import (convergence, convergence_violations, format_comparison, periodic_comparison,
                    violations)

EXIT_OK, EXIT_CONFIG, EXIT_NUMERIC, EXIT_CHECK = 0, 2, 3, 4
_NUMERIC_ERRORS = (NotHermitianError, np.linalg.LinAlgError, FloatingPointError, ArithmeticError)


def _int_list(text):
    try:
        return [int(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}") from None


def _parser():
    p = argparse.ArgumentParser(prog="schrmaxwell",
                                description="Schrodingerised Maxwell solvers and experiment runner.")
    sub = p.add_subparsers(dest="command", required=True)

    r = sub.add_parser("run", help="run one scenario config (TOML or JSON)")
    r.add_argument("config")
    r.add_argument("--out", default=None, help="output directory (default: ./<name>)")
    r.add_argument("--check", action="store_true", help="exit 4 when acceptance thresholds fail")

    t = sub.add_parser("compare", help="spectral vs Yee comparison on the periodic 2-D test")
    t.add_argument("--t-final", type=float, default=1.0)
    t.add_argument("--m", type=int, default=None)
    t.add_argument("--n", type=int, default=None)
    t.add_argument("--json", default=None, help="also write the table as JSON here")
    t.add_argument("--check", action="store_true")

    c = sub.add_parser("convergence", help="grid-refinement sweep with observed orders")
    src = c.add_mutually_exclusive_group(required=True)
    src.add_argument("--preset")
    src.add_argument("--config")
    c.add_argument("--scheme", default=None, help="override the scheme of the config")
    c.add_argument("--levels", type=_int_list, default=[64, 128, 256])
    c.add_argument("--p-levels", type=_int_list, default=None,
                   help="p-grid sizes, one per level (default: keep the config's)")
    c.add_argument("--jobs", type=int, default=1)
    c.add_argument("--json", default=None)
    c.add_argument("--check", action="store_true")

    ps = sub.add_parser("presets", help="list or show shipped configs")
    psub = ps.add_subparsers(dest="action", required=True)
    psub.add_parser("list")
    show = psub.add_parser("show")
    show.add_argument("name")
    return p


def _cmd_run(args):
    cfg = load_config(args.config)
    out = args.out if args.out is not None else cfg.name
    result = run(cfg, out)
    print(json.dumps(result.diagnostics_dict(), indent=2, sort_keys=True))
    if args.check:
        bad = violations(result)
        for b in bad:
            print(f"check failed: {b}", file=sys.stderr)
        if bad:
            return EXIT_CHECK
    return EXIT_OK


def _cmd_compare(args):
    tab = periodic_comparison(args.t_final, args.m, args.n)
    print(format_comparison(tab))
    if args.json:
        atomic_write(args.json, json.dumps(tab, indent=2, sort_keys=True) + "\n")
    if args.check and tab["violations"]:
        for b in tab["violations"]:
            print(f"check failed: {b}", file=sys.stderr)
        return EXIT_CHECK
    return EXIT_OK


def _cmd_convergence(args):
    if args.preset:
        try:
            raw = presets.preset_dict(args.preset)
        except KeyError as exc:
            raise ConfigError([str(exc.args[0])]) from None
        if args.scheme:
            raw["scheme"] = args.scheme
        from .config import from_dict
        cfg = from_dict(raw)
    else:
        cfg = load_config(args.config)
        if args.scheme:
            from .config import from_dict
            cfg = from_dict({**cfg.to_dict(), "scheme": args.scheme})
    if len(args.levels) < 3:
        raise ConfigError(["convergence needs at least 3 levels"])
    if args.p_levels is not None and len(args.p_levels) != len(args.levels):
        raise ConfigError(["--p-levels must have one entry per level"])
    res = convergence(cfg, args.levels, args.p_levels, jobs=max(1, args.jobs))
    comps = list(res["levels"][0]["components"])
    print(f"{'M':>6}{'N':>6}{'err_eb':>12}" + "".join(f"{c:>12}" for c in comps))
    for row in res["levels"]:
        print(f"{row['m']:>6}{row['n']:>6}{row['err_eb']:>12.4e}"
              + "".join(f"{row['components'][c]:>12.4e}" for c in comps))
    orders = res["component_orders"]
    print(f"{'order':>12}{res['order']:>12.3f}" + "".join(
        f"{orders[c]:>12.3f}" if c in orders else f"{'-':>12}" for c in comps))
    if args.json:
        atomic_write(args.json, json.dumps(res, indent=2, sort_keys=True) + "\n")
    if args.check:
        bad = convergence_violations(res)
        for b in bad:
            print(f"check failed: {b}", file=sys.stderr)
        if bad:
            return EXIT_CHECK
    return EXIT_OK


def _cmd_presets(args):
    if args.action == "list":
        for name in presets.names():
            print(name)
        return EXIT_OK
    try:
        cfg = presets.preset(args.name)
    except KeyError as exc:
        raise ConfigError([str(exc.args[0])]) from None
    sys.stdout.write(dumps_toml(cfg))
    return EXIT_OK


_COMMANDS = {"run": _cmd_run, "compare": _cmd_compare, "convergence": _cmd_convergence,
             "presets": _cmd_presets}


def main(argv=None):
    parser = _parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_CONFIG if exc.code else EXIT_OK
    try:
        return _COMMANDS[args.command](args)
    except ConfigError as exc:
        for problem in exc.problems:
            print(f"config error: {problem}", file=sys.stderr)
        return EXIT_CONFIG
    except FileNotFoundError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except _NUMERIC_ERRORS as exc:
        print(f"numerical failure: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_NUMERIC


if __name__ == "__main__":
    sys.exit(main())
