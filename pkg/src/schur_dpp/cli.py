"""Command-line batch runner: ``schur-dpp {kernel, rho, verify, cauchy}``.

Settings resolve as flags > ``--config`` JSON file > defaults. Reports are
JSON (canonical, ``"schema": 1``) or a flat ``key,value`` CSV projection.
Exit status: 0 success, 1 a check exceeded its tolerance or a numeric
error occurred, 2 usage error.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import re
import sys

from .errors import SchurDPPError
from .kernels import (
    KernelRequest,
    det_correlation_measure_result,
    det_correlation_process_result,
)
from .measures import (
    ProcessSpec,
    measure_tail_bound,
    rho_measure_bruteforce,
    rho_process_bruteforce,
)
from .suites import SUITES
from .symmetric import verify_cauchy_truncation

SCHEMA_VERSION = 1
COMMANDS = ("kernel", "rho", "verify", "cauchy")

DEFAULTS = {
    "kernel": {"mode": "measure", "levels": 1, "x": [], "y": [], "t": [], "points": [],
               "nodes": 256, "radii": None},
    "rho": {"mode": "measure", "levels": 1, "x": [], "y": [], "t": [], "points": [],
            "nodes": 256, "radii": None, "n": 60, "tol": 1e-6},
    "verify": {"suite": "all"},
    "cauchy": {"x": [], "y": [], "n": 60},
}
COMMON = {"format": "json", "out": None}


class UsageError(Exception):
    pass


def _floats(text: str) -> list[float]:
    text = text.strip()
    if not text:
        return []
    try:
        return [float(v) for v in text.split(",")]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}")


def _ints(text: str) -> list[int]:
    text = text.strip()
    if not text:
        return []
    try:
        return [int(v) for v in text.split(",")]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}")


def _point(text: str) -> list[int]:
    vals = _ints(text)
    if len(vals) != 2:
        raise argparse.ArgumentTypeError(f"a point is LEVEL,POSITION, got {text!r}")
    return vals


def _radii(text: str) -> list[float]:
    vals = _floats(text)
    if len(vals) != 2:
        raise argparse.ArgumentTypeError(f"radii are R1,R2, got {text!r}")
    return vals


def build_parser() -> argparse.ArgumentParser:
    S = argparse.SUPPRESS
    common = argparse.ArgumentParser(add_help=False, argument_default=S)
    common.add_argument("--config", help="JSON file with settings (flags override it)")
    common.add_argument("--format", choices=("json", "csv"))
    common.add_argument("--out", help="write the report here instead of stdout")

    spec_args = argparse.ArgumentParser(add_help=False, argument_default=S)
    mode = spec_args.add_mutually_exclusive_group()
    mode.add_argument("--measure", dest="mode", action="store_const", const="measure")
    mode.add_argument("--process", dest="mode", action="store_const", const="process")
    spec_args.add_argument("--levels", type=int, help="number of process levels m")
    spec_args.add_argument("--x", type=_floats, action="append",
                           help="X values; repeat once per level for a process")
    spec_args.add_argument("--y", type=_floats, action="append",
                           help="Y values; repeat once per level for a process")
    spec_args.add_argument("--t", type=_ints, help="measure points, comma-separated")
    spec_args.add_argument("--point", dest="points", type=_point, action="append",
                           help="process point LEVEL,POSITION (repeatable)")
    spec_args.add_argument("--nodes", type=int, help="quadrature nodes per circle")
    spec_args.add_argument("--radii", type=_radii, help="explicit R1,R2")

    parser = argparse.ArgumentParser(prog="schur-dpp", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command")
    sub.add_parser("kernel", parents=[common, spec_args], argument_default=S,
                   help="kernel matrix entries and determinant")
    rho = sub.add_parser("rho", parents=[common, spec_args], argument_default=S,
                         help="brute-force correlation versus the kernel determinant")
    rho.add_argument("--n", type=int, help="truncation size N for enumeration")
    rho.add_argument("--tol", type=float, help="allowed |bruteforce - det|")
    ver = sub.add_parser("verify", parents=[common], argument_default=S, help="run a check suite")
    ver.add_argument("--suite", choices=sorted(SUITES) + ["all"])
    cau = sub.add_parser("cauchy", parents=[common], argument_default=S,
                         help="truncated Cauchy identity with its tail bound")
    cau.add_argument("--x", type=_floats)
    cau.add_argument("--y", type=_floats)
    cau.add_argument("--n", type=int)
    return parser


_NEG_VALUE = re.compile(r"^-\d")


def normalize_argv(argv: list[str]) -> list[str]:
    """Glue option values that start with '-<digit>' (e.g. ``--t -1,0``) to their flag."""
    out = []
    i = 0
    while i < len(argv):
        tok = argv[i]
        if (tok.startswith("--") and "=" not in tok and i + 1 < len(argv)
                and _NEG_VALUE.match(argv[i + 1])):
            out.append(f"{tok}={argv[i + 1]}")
            i += 2
            continue
        out.append(tok)
        i += 1
    return out


def _flatten_levels(value, key):
    # flags give a list of lists; config files may give one flat list
    if value and not isinstance(value[0], list):
        return [list(value)]
    return [list(v) for v in value]


def resolve_config(args: argparse.Namespace) -> dict:
    flags = {k: v for k, v in vars(args).items() if k not in ("command", "config")}
    file_cfg = {}
    if getattr(args, "config", None):
        try:
            with open(args.config) as fh:
                file_cfg = json.load(fh)
        except (OSError, json.JSONDecodeError) as exc:
            raise UsageError(f"--config: cannot read {args.config}: {exc}")
        if not isinstance(file_cfg, dict):
            raise UsageError("--config: top level must be an object")
    command = args.command or file_cfg.get("command")
    if command not in COMMANDS:
        raise UsageError(f"a command is required: one of {', '.join(COMMANDS)}")
    allowed = set(DEFAULTS[command]) | set(COMMON) | {"command"}
    unknown = sorted(set(file_cfg) - allowed)
    if unknown:
        raise UsageError(f"--config: unknown field(s) for {command}: {', '.join(unknown)}")
    cfg = dict(COMMON)
    cfg.update(DEFAULTS[command])
    cfg.update({k: v for k, v in file_cfg.items() if k != "command"})
    cfg.update(flags)
    cfg["command"] = command
    if cfg["format"] not in ("json", "csv"):
        raise UsageError(f"format must be json or csv, got {cfg['format']!r}")
    return cfg


def _spec_from(cfg) -> tuple:
    """``(X, Y)`` for the measure or a :class:`ProcessSpec`."""
    xs = _flatten_levels(cfg["x"], "x")
    ys = _flatten_levels(cfg["y"], "y")
    if cfg["mode"] == "measure":
        if len(xs) > 1 or len(ys) > 1:
            raise UsageError("--x/--y: give one list each for a measure")
        return (xs[0] if xs else []), (ys[0] if ys else [])
    m = int(cfg["levels"])
    if m < 1:
        raise UsageError(f"--levels must be >= 1, got {m}")

    def per_level(vals, name):
        if len(vals) <= 1:
            return [vals[0] if vals else []] * m
        if len(vals) != m:
            raise UsageError(f"--{name}: give one list or exactly {m} lists")
        return vals

    return ProcessSpec(per_level(xs, "x"), per_level(ys, "y"))


def _request(cfg, points) -> KernelRequest:
    nodes = int(cfg["nodes"])
    if nodes < 8 or nodes & (nodes - 1):
        raise UsageError(f"--nodes must be a power of two >= 8, got {nodes}")
    radii = tuple(cfg["radii"]) if cfg.get("radii") else None
    return KernelRequest(points=points, radii=radii, nodes=nodes)


def _points(cfg):
    if cfg["mode"] == "measure":
        if cfg["points"]:
            raise UsageError("--point is for --process; use --t for a measure")
        return [int(t) for t in cfg["t"]]
    if cfg["t"]:
        raise UsageError("--t is for --measure; use --point for a process")
    pts = [tuple(int(v) for v in p) for p in cfg["points"]]
    for lv, _ in pts:
        if not 1 <= lv <= int(cfg["levels"]):
            raise UsageError(f"--point level {lv} outside 1..{cfg['levels']}")
    return pts


def run_kernel(cfg) -> tuple[dict, bool]:
    spec = _spec_from(cfg)
    T = _points(cfg)
    req = _request(cfg, T)
    if cfg["mode"] == "measure":
        res = det_correlation_measure_result(T, *spec, req)
    else:
        res = det_correlation_process_result(T, spec, req)
    return res.to_json_dict(), True


def run_rho(cfg) -> tuple[dict, bool]:
    spec = _spec_from(cfg)
    T = _points(cfg)
    req = _request(cfg, T)
    N = int(cfg["n"])
    if cfg["mode"] == "measure":
        bf = rho_measure_bruteforce(T, *spec, N)
        det = det_correlation_measure_result(T, *spec, req)
    else:
        bf = rho_process_bruteforce(T, spec, N)
        det = det_correlation_process_result(T, spec, req)
    diff = abs(det.det - bf.value)
    tol = float(cfg["tol"])
    ok = diff <= tol
    return {
        "T": det.to_json_dict()["T"],
        "bruteforce": bf.value,
        "bruteforce_tail_bound": bf.tail_bound,
        "det": det.det,
        "abs_diff": diff,
        "tol": tol,
        "ok": ok,
        "kernel": det.to_json_dict(),
    }, ok


def run_verify(cfg) -> tuple[dict, bool]:
    names = sorted(SUITES) if cfg["suite"] == "all" else [cfg["suite"]]
    if any(n not in SUITES for n in names):
        raise UsageError(f"unknown suite {cfg['suite']!r}")
    suites = {}
    all_ok = True
    for name in names:
        checks = SUITES[name]()
        ok = all(c.ok for c in checks)
        all_ok &= ok
        suites[name] = {
            "ok": ok,
            "count": len(checks),
            "failures": sum(not c.ok for c in checks),
            "max_diff": max((c.diff for c in checks), default=0.0),
            "checks": [c.to_json_dict() for c in checks],
        }
    return {"suites": suites, "ok": all_ok}, all_ok


def run_cauchy(cfg) -> tuple[dict, bool]:
    X, Y, N = list(cfg["x"]), list(cfg["y"]), int(cfg["n"])
    partial, F = verify_cauchy_truncation(X, Y, N)
    residual = abs(1 - float(partial) / float(F))
    tail = measure_tail_bound(X, Y, N)
    ok = residual <= tail + 1e-12
    return {"partial_sum": float(partial), "F": float(F), "relative_residual": residual,
            "tail_bound": tail, "ok": ok}, ok


RUNNERS = {"kernel": run_kernel, "rho": run_rho, "verify": run_verify, "cauchy": run_cauchy}


def _flat_rows(prefix, value, rows):
    if isinstance(value, dict):
        for k in sorted(value):
            _flat_rows(f"{prefix}.{k}" if prefix else str(k), value[k], rows)
    elif isinstance(value, list):
        for i, v in enumerate(value):
            _flat_rows(f"{prefix}.{i}", v, rows)
    else:
        rows.append((prefix, value))


def render(report: dict, fmt: str) -> str:
    if fmt == "json":
        return json.dumps(report, indent=2, sort_keys=True) + "\n"
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["key", "value"])
    rows = []
    _flat_rows("", report, rows)
    writer.writerows(rows)
    return buf.getvalue()


def _public_config(cfg) -> dict:
    return {k: v for k, v in sorted(cfg.items()) if k not in ("out", "format")}


def main(argv: list[str] | None = None) -> int:
    argv = normalize_argv(list(sys.argv[1:] if argv is None else argv))
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        cfg = resolve_config(args)
    except UsageError as exc:
        print(f"schur-dpp: error: {exc}", file=sys.stderr)
        return 2
    report = {"schema": SCHEMA_VERSION, "command": cfg["command"], "config": _public_config(cfg)}
    try:
        result, ok = RUNNERS[cfg["command"]](cfg)
        report["result"] = result
    except UsageError as exc:
        print(f"schur-dpp: error: {exc}", file=sys.stderr)
        return 2
    except SchurDPPError as exc:
        report["error"] = {"type": type(exc).__name__, "message": str(exc)}
        ok = False
    report["ok"] = ok
    text = render(report, cfg["format"])
    if cfg["out"]:
        with open(cfg["out"], "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return 0 if ok else 1


if __name__ == "__main__":
    sys.exit(main())
