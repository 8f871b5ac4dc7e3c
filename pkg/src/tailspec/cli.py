"""Command-line interface: ``tailspec gen | analyze | density | jost``.

Exit codes: 0 success, 2 input error, 3 oracle failure.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

import numpy as np

from .analysis import analyze, encode
from .graph import (
    GRAPH_KINDS,
    GraphError,
    TailAttachment,
    attach_tails,
    default_attachment,
    dump_graph_spec,
    gen,
    load_graph_spec,
)
from .rational import parse_rational
from .reduce import OracleOnly, reduce_tailed
from .spectra import spectral_measure

EXIT_OK = 0
EXIT_INPUT = 2
EXIT_ORACLE = 3

_GEN_PARAMS = {
    "path": ("m",),
    "cycle": ("m",),
    "star": ("n",),
    "weighted_star": ("weights",),
    "multiple_star": ("n", "p"),
    "complete_bipartite": ("p", "q"),
    "wheel": ("n",),
    "sword": (),
    "umbrella": (),
    "propeller": ("n",),
}


class InputError(Exception):
    pass


def _write(path, text, force=False):
    if path is None or path == "-":
        sys.stdout.write(text)
        return
    p = Path(path)
    if p.exists() and not force:
        raise InputError(f"{p} exists; pass --force to overwrite")
    p.write_text(text)


def _read_spec(path):
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc.strerror}") from exc
    return load_graph_spec(text)


def cmd_gen(args):
    names = _GEN_PARAMS[args.kind]
    params = {}
    for name in names:
        val = getattr(args, name)
        if val is None:
            raise InputError(f"{args.kind} needs --{name}" if len(name) > 1 else f"{args.kind} needs -{name}")
        if name == "weights":
            val = [parse_rational(w) for w in val.split(",")]
        params[name] = val
    G = gen(args.kind, **params)
    vertex = args.vertex if args.vertex is not None else default_attachment(G)
    T = attach_tails(G, [TailAttachment(vertex, rays=args.rays, bridge=parse_rational(args.bridge))])
    _write(args.output, dump_graph_spec(T), args.force)
    return EXIT_OK


def cmd_analyze(args):
    T = _read_spec(args.spec)
    mode = "exact" if args.exact else "float" if args.float else "auto"
    report = analyze(T, mode=mode, measure=args.measure, oracle_n=args.oracle, tol=args.tol)
    _write(args.output, report.dumps(), force=True)
    orc = report.data.get("oracle")
    if orc is not None and orc.get("verdict") == "fail":
        return EXIT_ORACLE
    return EXIT_OK


def density_grid(k):
    """``k`` equispaced interior points of (-2, 2); includes 0 for even ``k``."""
    return -2.0 + 4.0 * (np.arange(k) + 1) / (k + 2)


def cmd_density(args):
    if args.samples < 8:
        raise InputError("need at least 8 samples")
    T = _read_spec(args.spec)
    cf, _ = reduce_tailed(T)
    m = spectral_measure(cf.jacobi)
    xs = density_grid(args.samples)
    ws = m.density(xs)
    lines = ["x,w"] + [f"{x:.17g},{w:.17g}" for x, w in zip(xs, ws)]
    _write(args.output, "\n".join(lines) + "\n", force=True)
    side = {
        "schema": 1,
        "point_masses": [{"x": x, "mass": w} for x, w in m.masses],
        "continuous_mass": m.continuous_mass(),
        "total_mass": m.total_mass(),
    }
    if args.output not in (None, "-"):
        out = Path(args.output)
        Path(out.with_suffix("").as_posix() + ".masses.json").write_text(json.dumps(side, indent=2) + "\n")
    return EXIT_OK


def cmd_jost(args):
    T = _read_spec(args.spec)
    report = analyze(T, mode="auto")
    if report["route"] != "canonical":
        raise InputError(f"no single Jost polynomial for route {report['route']}")
    _write(args.output, json.dumps(encode(report["jost"]), indent=2) + "\n", force=True)
    return EXIT_OK


def build_parser():
    parser = argparse.ArgumentParser(prog="tailspec", description="Spectra of finite graphs with infinite tails.")
    sub = parser.add_subparsers(dest="command", required=True)

    g = sub.add_parser("gen", help="write a graph spec for a named family with one tail")
    g.add_argument("kind", choices=GRAPH_KINDS)
    g.add_argument("-n", type=int)
    g.add_argument("-m", type=int)
    g.add_argument("-p", type=int)
    g.add_argument("-q", type=int)
    g.add_argument("--weights", help="comma-separated edge weights for weighted_star")
    g.add_argument("--vertex", type=int, help="attachment vertex (default: last)")
    g.add_argument("--rays", type=int, default=1)
    g.add_argument("--bridge", default="1")
    g.add_argument("-o", "--output")
    g.add_argument("--force", action="store_true", help="overwrite an existing file")
    g.set_defaults(func=cmd_gen)

    a = sub.add_parser("analyze", help="canonical form, discrete spectrum and optional checks")
    a.add_argument("spec")
    grp = a.add_mutually_exclusive_group()
    grp.add_argument("--exact", action="store_true")
    grp.add_argument("--float", action="store_true")
    a.add_argument("--measure", action="store_true")
    a.add_argument("--oracle", type=int, metavar="N")
    a.add_argument("--tol", type=float, default=1e-8)
    a.add_argument("-o", "--output")
    a.set_defaults(func=cmd_analyze)

    d = sub.add_parser("density", help="sample the absolutely continuous density to CSV")
    d.add_argument("spec")
    d.add_argument("--samples", type=int, default=512)
    d.add_argument("-o", "--output")
    d.set_defaults(func=cmd_density)

    j = sub.add_parser("jost", help="Jost polynomial coefficients and roots")
    j.add_argument("spec")
    j.add_argument("-o", "--output")
    j.set_defaults(func=cmd_jost)
    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (InputError, GraphError, OracleOnly, ValueError, TypeError) as exc:
        print(f"tailspec: error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
