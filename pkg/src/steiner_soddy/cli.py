"""Command-line front end: ``porism sweep | verify | locus | render``.

Exit codes: 0 success, 1 a verification claim failed, 2 bad input
(invalid or incomplete config, malformed suite, unknown center or claim).
"""

import argparse
import csv
import json
import sys
from contextlib import contextmanager
from dataclasses import fields

from . import checks
from .centers import SUPPORTED, UnsupportedCenter
from .chain import InvalidConfig, PorismConfig, chain_at
from .geom import GeometryError
from .invariants import half_tangents
from .loci import CENTROID_IDS, TooFewPoints, classify_locus, sweep_center
from .svg import render_svg
from .tolerances import Tolerances, active_profile


class UsageError(Exception):
    """Bad user input; reported on stderr with exit code 2."""


CONFIG_KEYS = ("n", "r", "x0", "lambda")


def _num(x):
    """Shortest round-trip decimal; ``nan`` for missing values."""
    return repr(float(x))


def load_config(args):
    """Config from ``--config`` (JSON) overlaid with the explicit flags."""
    data = {}
    if args.config:
        try:
            with open(args.config) as fh:
                data = json.load(fh)
        except (OSError, json.JSONDecodeError) as exc:
            raise UsageError(f"cannot read config {args.config}: {exc}") from exc
        if not isinstance(data, dict):
            raise UsageError("config file must hold a JSON object")
        unknown = set(data) - set(CONFIG_KEYS) - {"tolerances"}
        if unknown:
            raise UsageError(f"unknown config keys: {', '.join(sorted(unknown))}")
    for key, attr in (("n", "n"), ("r", "r"), ("x0", "x0"), ("lambda", "lam")):
        value = getattr(args, attr)
        if value is not None:
            data[key] = value
    data.setdefault("r", 1.0)
    missing = [k for k in CONFIG_KEYS if k not in data]
    if missing:
        raise UsageError(f"missing config value(s): {', '.join(missing)}")
    try:
        cfg = PorismConfig(data["n"], float(data["r"]), float(data["x0"]), float(data["lambda"]))
    except (InvalidConfig, TypeError, ValueError) as exc:
        raise UsageError(f"invalid config: {exc}") from exc
    return cfg, load_tolerances(data.get("tolerances"))


def load_tolerances(overrides=None) -> Tolerances:
    try:
        base = active_profile()
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    if not overrides:
        return base
    if not isinstance(overrides, dict):
        raise UsageError("tolerances must be a JSON object")
    known = {f.name for f in fields(Tolerances)}
    bad = set(overrides) - known
    if bad:
        raise UsageError(f"unknown tolerance keys: {', '.join(sorted(bad))}")
    for k, v in overrides.items():
        if not isinstance(v, (int, float)) or not v > 0:
            raise UsageError(f"tolerance {k} must be a positive number")
    return base.with_overrides(**{k: float(v) for k, v in overrides.items()})


def _parse_center(text):
    if text in CENTROID_IDS:
        return text
    try:
        k = int(text)
    except ValueError:
        raise UsageError(f"unsupported center {text!r}") from None
    if k not in SUPPORTED:
        raise UsageError(f"unsupported center X({k}); choose from {', '.join(map(str, SUPPORTED))} "
                         f"or {', '.join(CENTROID_IDS)}")
    return k


@contextmanager
def _open_out(path):
    """Text stream for ``path``; stdout for ``None`` or ``-`` (left open)."""
    if path in (None, "-"):
        yield sys.stdout
        return
    with open(path, "w", newline="") as fh:
        yield fh


# -- sweep ------------------------------------------------------------------------

def sweep_rows(cfg: PorismConfig, samples: int):
    """Header and rows of the per-phase sweep table."""
    n = cfg.n
    header = ["t"]
    header += [f"{a}{i}" for i in range(n) for a in ("x", "y")]
    header += [f"p{a}{i}" for i in range(n) for a in ("x", "y")]
    header += ["Ix", "Iy", "r", "tau"] + [f"S{k}" for k in range(2, n)]
    rows = []
    for t in cfg.phases(samples, 1e-3):
        try:
            ch = chain_at(cfg, t)
            h = half_tangents(cfg, t, ch)
        except GeometryError:
            rows.append([_num(t)] + ["nan"] * (len(header) - 1))
            continue
        row = [_num(t)]
        row += [_num(c) for p in ch.centers for c in p]
        row += [_num(c) for p in ch.contacts for c in p]
        row += [_num(ch.caustic.center.x), _num(ch.caustic.center.y), _num(ch.caustic.radius)]
        row += [_num(float(sum(h ** k))) for k in range(1, n)]
        rows.append(row)
    return header, rows


def cmd_sweep(args):
    cfg, _ = load_config(args)
    header, rows = sweep_rows(cfg, args.samples)
    with _open_out(args.out) as out:
        w = csv.writer(out, lineterminator="\r\n")
        w.writerow(header)
        w.writerows(rows)
    return 0


# -- verify -----------------------------------------------------------------------

def cmd_verify(args):
    tol = load_tolerances()
    if args.suite in (None, "default"):
        suite = checks.DEFAULT_SUITE
    else:
        try:
            suite = checks.load_suite(args.suite)
        except (OSError, json.JSONDecodeError, ValueError, InvalidConfig) as exc:
            raise UsageError(f"bad suite {args.suite}: {exc}") from exc
    only = None
    if args.only:
        only = [c for item in args.only for c in item.split(",") if c]
    try:
        report = checks.verify_all(suite, args.samples, only=only, tol=tol)
    except KeyError as exc:
        raise UsageError(exc.args[0]) from exc
    # keep stdout clean when it carries the JSON
    (sys.stderr if args.json == "-" else sys.stdout).write(report.to_table())
    if args.json:
        with _open_out(args.json) as fh:
            fh.write(report.to_json(details=args.details))
    return 1 if report.failed else 0


# -- locus ------------------------------------------------------------------------

def cmd_locus(args):
    cfg, tol = load_config(args)
    center = _parse_center(args.center)
    try:
        sw = sweep_center(cfg, center, args.samples)
    except (ValueError, TooFewPoints) as exc:
        raise UsageError(str(exc)) from exc
    with _open_out(args.out) as out:
        if args.classify:
            try:
                res = classify_locus(sw.valid, tol, gaps=sw.gaps).as_dict()
            except TooFewPoints as exc:
                res = {"kind": "Other", "error": str(exc)}
            res["center"] = center
            out.write("# " + json.dumps(res, sort_keys=True, default=float) + "\r\n")
        w = csv.writer(out, lineterminator="\r\n")
        w.writerow(["t", "x", "y"])
        for t, p in zip(sw.phases, sw.points):
            w.writerow([_num(t)] + (["nan", "nan"] if p is None else [_num(p.x), _num(p.y)]))
    if args.svg:
        with open(args.svg, "w") as fh:
            fh.write(render_svg(cfg, list(sw.points)))
    return 0


def cmd_render(args):
    cfg, _ = load_config(args)
    pts = None
    if args.center is not None:
        try:
            pts = list(sweep_center(cfg, _parse_center(args.center), args.samples).points)
        except (ValueError, TooFewPoints) as exc:
            raise UsageError(str(exc)) from exc
    with _open_out(args.out) as fh:
        fh.write(render_svg(cfg, pts, t=args.t))
    return 0


# -- parser -----------------------------------------------------------------------

def _config_flags(p):
    p.add_argument("--config", help="JSON file with keys n, r, x0, lambda and optional tolerances")
    p.add_argument("--n", type=int, help="number of chain circles")
    p.add_argument("--r", type=float, help="pre-image radius R (default 1)")
    p.add_argument("--x0", type=float, help="inversion center abscissa")
    p.add_argument("--lambda", dest="lam", type=float, help="inversion radius")


def build_parser():
    parser = argparse.ArgumentParser(prog="porism", description="Steiner-Soddy porism toolkit")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("sweep", help="per-phase table of polygons, caustic and invariants")
    _config_flags(p)
    p.add_argument("--samples", type=int, default=360)
    p.add_argument("--out", help="CSV path (default stdout)")
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("verify", help="run the claim registry")
    p.add_argument("--suite", default="default", help="'default' or a JSON suite file")
    p.add_argument("--only", action="append", help="claim ids, comma separated; repeatable")
    p.add_argument("--samples", type=int, default=180)
    p.add_argument("--json", help="write the JSON report here")
    p.add_argument("--details", action="store_true", help="include a detail field in the JSON")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("locus", help="sweep a triangle center or centroid")
    _config_flags(p)
    p.add_argument("--center", required=True, help="Kimberling index or C0/C1/C2")
    p.add_argument("--samples", type=int, default=360)
    p.add_argument("--classify", action="store_true", help="prepend the classification as a JSON comment")
    p.add_argument("--out", help="CSV path (default stdout)")
    p.add_argument("--svg", help="also write an SVG figure")
    p.set_defaults(func=cmd_locus)

    p = sub.add_parser("render", help="SVG figure of the configuration")
    _config_flags(p)
    p.add_argument("--center", help="also draw this locus")
    p.add_argument("--samples", type=int, default=360)
    p.add_argument("--t", type=float, default=0.0, help="phase of the drawn chain")
    p.add_argument("--out", help="SVG path (default stdout)")
    p.set_defaults(func=cmd_render)
    return parser


def main(argv=None):
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        if getattr(args, "samples", 16) < 16:
            raise UsageError("--samples must be at least 16")
        return args.func(args)
    except (UsageError, UnsupportedCenter) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
