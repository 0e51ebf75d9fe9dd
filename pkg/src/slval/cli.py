"""Command line front end.

    slval measure  --input P.json
    slval project  --input P.json [--zeta Z.json | --p P [--mode M]] --grid lo:hi:count
    slval fit      --spec ORACLE.json [--grid lo:hi:count]
    slval certify  --spec ORACLE.json --valuation VSPEC.json
    slval suite    [--spec ORACLE.json]
    slval plotdata --kind {continuity,simplex_law,minkowski}

Exit codes: 0 success, 2 input error, 3 certification or property failure.
"""

import argparse
import csv
import io
import json
import sys
from dataclasses import dataclass, fields
from fractions import Fraction
from math import factorial

import numpy as np

from slval import classifier, harness
from slval.measures import cone_volume_measure, restrict_nonzero, surface_area_measure
from slval.polytope import Polytope
from slval.simplices import standard_simplex
from slval.valuations import (P_FULL, ValuationSpec, family, lp_projection,
                              projection_function, zeta_valuation)
from slval.zeta import ZetaSpec

EXIT_OK, EXIT_INPUT, EXIT_FAIL = 0, 2, 3
COMMANDS = ("measure", "project", "fit", "certify", "suite", "plotdata")


class InputError(Exception):
    pass


@dataclass
class RunConfig:
    command: str
    input: str = None
    zeta: str = None
    spec: str = None
    valuation: str = None
    grid: str = "-10:10:201"
    direction: str = None
    p: float = None
    mode: str = "all"
    kind: str = "continuity"
    n: int = 3
    seed: int = 0
    tol: float = None
    trials: int = 200
    corpus_size: int = 100
    x_samples: int = 20
    out: str = None
    format: str = "json"

    @classmethod
    def from_args(cls, ns):
        values = {f.name: getattr(ns, f.name) for f in fields(cls) if hasattr(ns, f.name)}
        if getattr(ns, "config", None):
            extra = _read_json(ns.config)
            allowed = {f.name for f in fields(cls)} - {"command"}
            unknown = set(extra) - allowed
            if unknown:
                raise InputError("unknown config keys: %s" % sorted(unknown))
            for k, v in extra.items():
                if values.get(k) is None or values.get(k) == _DEFAULTS.get(k):
                    values[k] = v
        for k, v in _DEFAULTS.items():
            if values.get(k) is None:
                values[k] = v
        return cls(**values)


_DEFAULTS = {f.name: f.default for f in fields(RunConfig) if f.name != "command"}


def _read_json(path):
    try:
        with open(path) as fh:
            return json.load(fh, parse_float=Fraction)
    except FileNotFoundError:
        raise InputError("no such file: %s" % path)
    except json.JSONDecodeError as exc:
        raise InputError("%s is not valid JSON: %s" % (path, exc))


def _floats(obj):
    """Replace Fractions (from exact JSON parsing) by floats, recursively."""
    if isinstance(obj, Fraction):
        return float(obj)
    if isinstance(obj, dict):
        return {k: _floats(v) for k, v in obj.items()}
    if isinstance(obj, list):
        return [_floats(v) for v in obj]
    return obj


def parse_grid(text):
    try:
        lo, hi, count = text.split(":")
        lo, hi, count = float(lo), float(hi), int(count)
    except ValueError:
        raise InputError("grid must look like lo:hi:count, got %r" % text)
    if count < 1 or (count > 1 and not hi > lo):
        raise InputError("grid needs count >= 1 and hi > lo")
    return np.linspace(lo, hi, count)


def _load_polytope(path):
    if not path:
        raise InputError("--input is required")
    try:
        return Polytope.from_json(_read_json(path))
    except (ValueError, KeyError, TypeError) as exc:
        raise InputError("bad polytope file %s: %s" % (path, exc))


def _load_zeta(path):
    try:
        return ZetaSpec.from_json(_floats(_read_json(path)))
    except (ValueError, KeyError, TypeError) as exc:
        raise InputError("bad zeta file %s: %s" % (path, exc))


def _load_oracle(path):
    if not path:
        raise InputError("--spec (oracle composition) is required")
    try:
        return classifier.oracle_from_json(_floats(_read_json(path)))
    except (ValueError, KeyError, TypeError) as exc:
        raise InputError("bad oracle file %s: %s" % (path, exc))


def _dump_json(obj):
    return json.dumps(obj, sort_keys=True, indent=2) + "\n"


def _dump_csv(header, rows):
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for r in rows:
        w.writerow([repr(float(v)) if isinstance(v, (float, np.floating)) else v for v in r])
    return buf.getvalue()


# --------------------------------------------------------------------------
# commands

def cmd_measure(cfg):
    P = _load_polytope(cfg.input)
    S = surface_area_measure(P)
    V = cone_volume_measure(P)
    out = {"n": P.n, "dim": P.dim, "volume": P.volume,
           "surface_area": S.to_json(), "cone_volume": V.to_json(),
           "cone_volume_restricted": restrict_nonzero(V, P).to_json(),
           "cone_volume_total": V.total_mass}
    if cfg.format == "csv":
        rows = [[m.kind] + list(a.u) + [a.w] for m in (S, V) for a in m.atoms]
        header = ["kind"] + ["u%d" % (i + 1) for i in range(P.n)] + ["w"]
        return _dump_csv(header, rows), EXIT_OK
    return _dump_json(out), EXIT_OK


def cmd_project(cfg):
    P = _load_polytope(cfg.input)
    ts = parse_grid(cfg.grid)
    if cfg.direction:
        try:
            d = np.array([float(c) for c in cfg.direction.split(",")])
        except ValueError:
            raise InputError("direction must be comma separated numbers")
        if d.shape != (P.n,):
            raise InputError("direction must have %d coordinates" % P.n)
    else:
        d = np.eye(P.n)[-1]
    X = np.outer(ts, d)
    cols = {}
    if cfg.zeta:
        cols["zeta"] = zeta_valuation(P, _load_zeta(cfg.zeta), X)
    elif cfg.p is not None:
        modes = ("sym", "plus", "minus") if cfg.mode == "all" else (cfg.mode,)
        try:
            for m in modes:
                cols[m] = lp_projection(P, cfg.p, X, m)
        except ValueError as exc:
            raise InputError(str(exc))
    else:
        cols["projection"] = projection_function(P, X)
    header = ["t"] + ["x%d" % (i + 1) for i in range(P.n)] + list(cols)
    rows = [[t] + list(x) + [cols[c][i] for c in cols] for i, (t, x) in enumerate(zip(ts, X))]
    if cfg.format == "csv":
        return _dump_csv(header, rows), EXIT_OK
    return _dump_json({"columns": header, "rows": [[float(v) for v in r] for r in rows]}), EXIT_OK


def cmd_fit(cfg):
    Z = _load_oracle(cfg.spec)
    grid = parse_grid(cfg.grid)
    try:
        rep = classifier.fit_and_certify(
            Z, cfg.n, grid, seed=cfg.seed, corpus_seed=cfg.seed + 12345,
            corpus_size=cfg.corpus_size, x_samples=cfg.x_samples,
            tol=cfg.tol or classifier.CERTIFY_TOL)
    except classifier.NotClassifiable as exc:
        out = {"certified": False, "non_classifiable": exc.diagnostic,
               "defects": dict(sorted(exc.defects.items()))}
        return _dump_json(out), EXIT_FAIL
    return _dump_json(rep.to_json()), EXIT_OK if rep.certified else EXIT_FAIL


def cmd_certify(cfg):
    Z = _load_oracle(cfg.spec)
    if not cfg.valuation:
        raise InputError("--valuation (representation spec) is required")
    try:
        spec = ValuationSpec.from_json(_floats(_read_json(cfg.valuation)))
    except (ValueError, KeyError, TypeError) as exc:
        raise InputError("bad valuation spec: %s" % exc)
    rep = classifier.certify(Z, spec, cfg.n, cfg.seed + 12345, cfg.corpus_size,
                             cfg.x_samples, cfg.tol or classifier.CERTIFY_TOL)
    return _dump_json(rep.to_json()), EXIT_OK if rep.certified else EXIT_FAIL


def _builtin_families():
    z = ZetaSpec.poly(1.0, -2.0, 0.5, 0.3)
    return [
        ("zeta", P_FULL, family("zeta", zeta=z)),
        ("zeta_hull", P_FULL, family("zeta_hull", zeta=ZetaSpec.power_minus(0.5))),
        ("projection", P_FULL, family("projection")),
        ("hull_projection", P_FULL, family("hull_projection")),
        ("euler", P_FULL, family("euler")),
        ("signed_relint", P_FULL, family("signed_relint")),
        ("origin_indicator", P_FULL, family("origin_indicator")),
    ]


def cmd_suite(cfg):
    if cfg.spec:
        Z = _load_oracle(cfg.spec)
        targets = [("oracle", Z.domain, Z)]
    else:
        targets = _builtin_families()
    reports = []
    for name, scope, Z in targets:
        for r in (harness.check_valuation(Z, cfg.seed, cfg.trials, cfg.n, scope,
                                          name="valuation:" + name),
                  harness.check_contravariance(Z, cfg.seed, max(1, cfg.trials // 2), cfg.n,
                                               scope, name="contravariance:" + name)):
            reports.append(r.to_json())
    reports.append(harness.check_simplex_dissections(cfg.seed, cfg.n).to_json())
    reports.append(harness.check_minkowski_inequality(cfg.seed, 100, (1, 2, 3), cfg.n).to_json())
    ok = all(r["passed"] for r in reports)
    return _dump_json({"seed": cfg.seed, "passed": ok, "reports": reports}), \
        EXIT_OK if ok else EXIT_FAIL


def cmd_plotdata(cfg):
    n = cfg.n
    if cfg.kind == "continuity":
        z = _load_zeta(cfg.zeta) if cfg.zeta else ZetaSpec.abs_power(0.5)
        rep = harness.check_continuity_witness(z, n)
        d = rep.details
        header = ["t", "value_plus", "value_minus", "defect_plus", "defect_minus"]
        rows = [[float(t)] + d["values"][i] + d["defects"][i] for i, t in enumerate(d["t"])]
    elif cfg.kind == "simplex_law":
        z = _load_zeta(cfg.zeta) if cfg.zeta else ZetaSpec.power_plus(0.5)
        ts = parse_grid(cfg.grid)
        X = np.outer(ts, np.eye(n)[-1])
        vals = zeta_valuation(standard_simplex(n, n), z, X)
        header = ["t", "n_factorial_times_Z", "zeta"]
        rows = [[t, factorial(n) * v, float(z(t))] for t, v in zip(ts, vals)]
    elif cfg.kind == "minkowski":
        rep = harness.check_minkowski_inequality(cfg.seed, min(cfg.trials, 100), (1, 2, 3), n)
        header = ["statistic", "value"]
        rows = [[k, float(rep.details[k])] for k in ("min_slack", "max_slack",
                                                    "max_equality_defect")]
    else:
        raise InputError("unknown plotdata kind %r" % cfg.kind)
    if cfg.format == "csv":
        return _dump_csv(header, rows), EXIT_OK
    return _dump_json({"columns": header, "rows": rows}), EXIT_OK


HANDLERS = {"measure": cmd_measure, "project": cmd_project, "fit": cmd_fit,
            "certify": cmd_certify, "suite": cmd_suite, "plotdata": cmd_plotdata}


def build_parser():
    parser = argparse.ArgumentParser(
        prog="slval", description=__doc__.strip().splitlines()[0],
        formatter_class=argparse.ArgumentDefaultsHelpFormatter)
    sub = parser.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        p = sub.add_parser(name, formatter_class=argparse.ArgumentDefaultsHelpFormatter)
        p.add_argument("--config", help="JSON file with option values (unknown keys rejected)")
        p.add_argument("--input", help="polytope JSON file")
        p.add_argument("--zeta", help="ZetaSpec JSON file")
        p.add_argument("--spec", help="oracle composition JSON file")
        p.add_argument("--valuation", help="ValuationSpec JSON file (certify)")
        p.add_argument("--grid", default=_DEFAULTS["grid"], help="t grid lo:hi:count")
        p.add_argument("--direction", help="x = t * direction (default e_n)")
        p.add_argument("--p", type=float, help="exponent of the L_p projection function")
        p.add_argument("--mode", default="all", choices=("sym", "plus", "minus", "all"))
        p.add_argument("--kind", default="continuity",
                       choices=("continuity", "simplex_law", "minkowski"))
        p.add_argument("--n", type=int, default=3, help="ambient dimension")
        p.add_argument("--seed", type=int, default=0)
        p.add_argument("--tol", type=float, help="certification tolerance")
        p.add_argument("--trials", type=int, default=200)
        p.add_argument("--corpus-size", dest="corpus_size", type=int, default=100)
        p.add_argument("--x-samples", dest="x_samples", type=int, default=20)
        p.add_argument("--out", help="output file (default stdout)")
        p.add_argument("--format", default="json", choices=("json", "csv"))
    return parser


def _join_values(argv):
    # "--grid -2:2:5" would otherwise be read as an unknown option
    out, it = [], iter(argv)
    for tok in it:
        if tok in ("--grid", "--direction"):
            out.append(tok + "=" + next(it, ""))
        else:
            out.append(tok)
    return out


def main(argv=None):
    parser = build_parser()
    argv = sys.argv[1:] if argv is None else list(argv)
    try:
        ns = parser.parse_args(_join_values(argv))
    except SystemExit as exc:
        return EXIT_INPUT if exc.code else EXIT_OK
    try:
        cfg = RunConfig.from_args(ns)
        text, code = HANDLERS[cfg.command](cfg)
    except InputError as exc:
        print("error: %s" % exc, file=sys.stderr)
        return EXIT_INPUT
    if cfg.out:
        with open(cfg.out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return code


if __name__ == "__main__":
    sys.exit(main())
