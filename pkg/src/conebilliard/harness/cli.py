"""``conebilliard`` command line."""
from __future__ import annotations

import argparse
import ast
import logging
import math
import operator
import os
import sys

import numpy as np

from ..config import REFLECTION_CAP, SAMPLE_RADIUS
from ..dynamics import run_trajectory
from ..errors import (BilliardError, ConfigError, MaxReflectionsExceeded, ShapeError, TangentLine,
                      VertexHit)
from ..geometry.lines import OrientedLine, line_from_point_direction
from ..geometry.phase import phase_of
from ..geometry.shapes import builtin_shapes, load_shape
from ..integrals import TransportField, integral_vector
from . import io
from .angle import run_angle_oracle
from .checks import SUITES, run_suite
from .sampling import SampleStats, sample_phase_space

log = logging.getLogger("conebilliard")
CONE_HELP = "shape JSON file, or a built-in name: circular, ellipse, fourier3, ellipsoid4"

EXIT_OK = 0
EXIT_FAILED = 1
EXIT_INPUT = 2
EXIT_CAP = 3
EXIT_TANGENT = 4

_OPS = {ast.Add: operator.add, ast.Sub: operator.sub, ast.Mult: operator.mul,
        ast.Div: operator.truediv, ast.Pow: operator.pow, ast.USub: operator.neg,
        ast.UAdd: operator.pos}


def parse_number(text):
    """A float, or an arithmetic expression in ``pi`` such as ``pi/3``."""
    def ev(node):
        if isinstance(node, ast.Constant) and isinstance(node.value, (int, float)):
            return float(node.value)
        if isinstance(node, ast.Name) and node.id == "pi":
            return math.pi
        if isinstance(node, ast.BinOp) and type(node.op) in _OPS:
            return _OPS[type(node.op)](ev(node.left), ev(node.right))
        if isinstance(node, ast.UnaryOp) and type(node.op) in _OPS:
            return _OPS[type(node.op)](ev(node.operand))
        raise ConfigError(f"cannot parse number {text!r}")

    try:
        return ev(ast.parse(text.strip(), mode="eval").body)
    except (SyntaxError, ZeroDivisionError) as exc:
        raise ConfigError(f"cannot parse number {text!r}") from exc


def parse_vector(text):
    text = text.strip().strip("[]()")
    return np.array([parse_number(t) for t in text.split(",") if t.strip()], dtype=float)


def parse_line(text, dim=None):
    """``"v=a,b,c;Q=d,e,f"`` (foot point) or ``"v=...;P=..."`` (any point)."""
    parts = {}
    for chunk in text.split(";"):
        if not chunk.strip():
            continue
        key, sep, val = chunk.partition("=")
        if not sep:
            raise ConfigError(f"malformed line component {chunk!r}")
        parts[key.strip()] = parse_vector(val)
    if "v" not in parts or ("Q" in parts) == ("P" in parts):
        raise ConfigError("line needs v and exactly one of Q or P")
    v = parts["v"]
    other = parts.get("Q", parts.get("P"))
    if dim is not None and (len(v) != dim or len(other) != dim):
        raise ConfigError(f"line must have {dim} coordinates")
    try:
        if "P" in parts:
            if abs(float(np.linalg.norm(v)) - 1.0) > 1e-9:
                raise ValueError("direction is not a unit vector")
            return line_from_point_direction(other, v)
        return OrientedLine(v, other)
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc


def _random_start(shape, seed, radius):
    rng = np.random.default_rng(seed)
    found = sample_phase_space(shape, 1, rng, radius)
    if not found:
        raise ConfigError("no phase-space line found for this seed")
    return found[0][0]


def cmd_simulate(args):
    shape = open_cone(args.cone)
    if args.line:
        start = parse_line(args.line, shape.dim)
    else:
        start = _random_start(shape, args.seed, args.radius)
    try:
        traj = run_trajectory(shape, start, args.cap)
    except MaxReflectionsExceeded as exc:
        if exc.trajectory is not None and args.out:
            io.write_jsonl(args.out, [io.step_record(s) for s in exc.trajectory.steps])
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CAP
    except (TangentLine, VertexHit) as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_TANGENT
    records = io.trajectory_records(traj)
    if args.out:
        io.write_jsonl(args.out, records)
    else:
        for rec in records:
            print(io.dumps(rec))
    log.info("m = %d", traj.m)
    return EXIT_OK


def _sample_rows(shape, lines, sweep, field, cap):
    rows = []
    for traj_id, (line, cls) in enumerate(lines):
        targets = [(line, cls.tag.value)]
        if sweep:
            traj = run_trajectory(shape, line, cap)
            targets += [(l, phase_of(shape, l)[0].tag.value) for l in traj.lines[1:]]
        for l, tag in targets:
            rows.append(io.integral_row(traj_id, tag, l, integral_vector(shape, l, field, cap)))
    return rows


def open_cone(name):
    """Load a shape from a JSON path, falling back to the built-in names."""
    if not os.path.exists(name):
        shapes = builtin_shapes()
        if name in shapes:
            return shapes[name]
    return load_shape(name)


def _chunk_rows(payload):
    path, lines, sweep, cap = payload
    shape = open_cone(path)
    return _sample_rows(shape, lines, sweep, TransportField(shape), cap)


def cmd_sample(args):
    shape = open_cone(args.cone)
    if args.n < 0 or args.radius < 0:
        raise ConfigError("sample count and radius must be non-negative")
    rng = np.random.default_rng(args.seed)
    stats = SampleStats()
    lines = sample_phase_space(shape, args.n, rng, args.radius, stats=stats)
    if args.workers > 1 and len(lines) > 1:
        from concurrent.futures import ProcessPoolExecutor

        size = math.ceil(len(lines) / args.workers)
        chunks = [lines[i:i + size] for i in range(0, len(lines), size)]
        with ProcessPoolExecutor(args.workers) as pool:
            parts = list(pool.map(_chunk_rows, [(args.cone, c, args.sweep, args.cap)
                                                for c in chunks]))
        # trajectory ids restart in every chunk; renumber in index order
        rows, offset = [], 0
        for chunk, part in zip(chunks, parts):
            for row in part:
                rows.append([str(int(row[0]) + offset)] + row[1:])
            offset += len(chunk)
    else:
        rows = _sample_rows(shape, lines, args.sweep, TransportField(shape), args.cap)
    io.write_csv(args.out, io.integral_header(shape.dim), rows)
    meta = {"drawn": stats.drawn, "accepted": stats.accepted,
            "acceptance_rate": stats.acceptance_rate, "seed": args.seed, "radius": args.radius}
    with open(args.out + ".meta.json", "w", encoding="utf-8") as fh:
        fh.write(io.dumps(meta) + "\n")
    print(f"accepted {stats.accepted}/{stats.drawn} (rate {stats.acceptance_rate:.4f})",
          file=sys.stderr)
    return EXIT_OK


def cmd_verify(args):
    shape = open_cone(args.cone)
    results = run_suite(shape, args.suite, args.n, args.seed)
    for r in results:
        print(r.line())
    failed = [r for r in results if not r.passed]
    print(f"{len(results) - len(failed)}/{len(results)} checks passed")
    return EXIT_FAILED if failed else EXIT_OK


def _fmt(x):
    return "None" if x is None else f"{x:.17g}"


def cmd_classify(args):
    shape = open_cone(args.cone)
    line = parse_line(args.line, shape.dim)
    cls, rec = phase_of(shape, line)
    print(f"class: {cls}")
    if rec is not None:
        print(f"interval: ({_fmt(rec.t_a)}, {_fmt(rec.t_b)})")
        for hit in rec.hits:
            kind = "entering" if hit.incidence > 0 else "exiting"
            print(f"hit {kind}: t={_fmt(hit.t)} point={[float(x) for x in hit.point]} "
                  f"normal={[float(x) for x in hit.normal]} incidence={_fmt(hit.incidence)}")
    return EXIT_OK


def cmd_angle_oracle(args):
    theta = parse_number(args.theta)
    if not 0.0 < theta < math.pi:
        raise ConfigError("theta must lie in (0, pi)")
    report = run_angle_oracle(theta, args.n, args.seed)
    print(report.summary())
    return EXIT_OK if report.passed else EXIT_FAILED


def build_parser():
    parser = argparse.ArgumentParser(prog="conebilliard",
                                     description="Billiards inside convex cones.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("simulate", help="run one trajectory and write JSONL")
    p.add_argument("--cone", required=True, help=CONE_HELP)
    p.add_argument("--line", help='start line, "v=...;Q=..." or "v=...;P=..."')
    p.add_argument("--seed", type=int, default=0, help="seed for a random start")
    p.add_argument("--radius", type=float, default=SAMPLE_RADIUS)
    p.add_argument("--cap", type=int, default=REFLECTION_CAP)
    p.add_argument("--out")
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("sample", help="tabulate integrals of random lines as CSV")
    p.add_argument("--cone", required=True, help=CONE_HELP)
    p.add_argument("--n", type=int, default=1000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--radius", type=float, default=SAMPLE_RADIUS)
    p.add_argument("--cap", type=int, default=REFLECTION_CAP)
    p.add_argument("--sweep", action="store_true", help="one row per line of each trajectory")
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_sample)

    p = sub.add_parser("verify", help="run the verification suites")
    p.add_argument("--cone", required=True, help=CONE_HELP)
    p.add_argument("--suite", choices=("all",) + SUITES, default="all")
    p.add_argument("--n", type=int, default=500)
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("classify", help="classify an oriented line")
    p.add_argument("--cone", required=True, help=CONE_HELP)
    p.add_argument("--line", required=True)
    p.set_defaults(func=cmd_classify)

    p = sub.add_parser("angle-oracle", help="reflection counts in a planar angle")
    p.add_argument("--theta", required=True, help="radians; expressions like pi/3 allowed")
    p.add_argument("--n", type=int, default=1000)
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_angle_oracle)
    return parser


def _configure_logging():
    level = os.environ.get("BILLIARD_LOG", "WARNING").upper()
    logging.basicConfig(level=getattr(logging, level, logging.WARNING),
                        format="%(levelname)s %(name)s: %(message)s", stream=sys.stderr)


def main(argv=None):
    _configure_logging()
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (ConfigError, ShapeError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except BilliardError as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_FAILED


if __name__ == "__main__":
    sys.exit(main())
