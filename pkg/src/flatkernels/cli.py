"""Command-line interface: eval | table | converge | verify | order | probe.

Outputs are byte-deterministic for a fixed config and seed: JSON is emitted
with sorted keys and round-trip float repr, CSV with '%.17g' formatting, and
reports carry the library version plus a config echo but no timestamps.
Worker threads (--threads) only fan out independent evaluations and collect
them in input order, so the thread count never changes the bytes.

Exit codes: 0 success, 1 verification failure, 2 configuration error.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
import warnings
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path

import numpy as np

from . import __version__, kernels_periodic, kernels_pin, quadrature, suites
from .errors import ConfigError, RegimeError, SingularPoint
from .kernels_euclid import cauchy_g_batch
from .kernels_periodic import KernelEval
from .lattice import ManifoldSpec

KERNEL_NAMES = (
    "cyl-cauchy",
    "cyl-cauchy-reg",
    "cyl-green",
    "cyl-green-reg",
    "torus-cauchy",
    "proj-cauchy",
    "proj-green",
    "realproj-cauchy",
    "moebius-green",
    "klein-green",
)

_VECTOR_KERNELS = {"cyl-cauchy", "cyl-cauchy-reg", "torus-cauchy", "proj-cauchy", "realproj-cauchy"}


def _fmt(x: float) -> str:
    return "%.17g" % float(x)


def _load_config(path: str) -> dict:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            return json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc


def _config_point(cfg: dict, key: str, n: int) -> np.ndarray:
    try:
        p = np.asarray(cfg[key], dtype=float)
    except (KeyError, TypeError, ValueError) as exc:
        raise ConfigError(f"config needs numeric point {key!r}: {exc}") from exc
    if p.shape != (n,):
        raise ConfigError(f"point {key!r} must have dimension {n}")
    return p


def _form(cfg: dict) -> str:
    form = cfg.get("form", "orbit").replace("-", "_")
    if form not in ("orbit", "paper_literal"):
        raise ConfigError(f"unknown form {cfg.get('form')!r}")
    return form


def make_evaluator(cfg: dict):
    """Build (evaluate(x) -> KernelEval, manifold, metadata) from a config."""
    name = cfg.get("kernel")
    if name not in KERNEL_NAMES:
        raise ConfigError(f"unknown kernel {name!r}; choose from {', '.join(KERNEL_NAMES)}")
    if "manifold" not in cfg:
        raise ConfigError("config needs a 'manifold' object")
    M = ManifoldSpec.from_dict(cfg["manifold"])
    R = int(cfg.get("R", 20))
    if R < 0:
        raise ConfigError("truncation radius R must be >= 0")
    form = _form(cfg)
    y = _config_point(cfg, "y", M.n)
    L, char = M.lattice, M.bundle

    def need_lattice():
        if L is None:
            raise ConfigError(f"kernel {name} needs a lattice in the manifold spec")

    if name == "cyl-cauchy":
        need_lattice()
        return (lambda x: kernels_periodic.cyl_cauchy(L, char, x, y, R)), M, R, form
    if name == "cyl-cauchy-reg":
        need_lattice()
        return (lambda x: kernels_periodic.cyl_cauchy_reg(L, char, x, y, R)), M, R, form
    if name == "cyl-green":
        need_lattice()
        return (lambda x: kernels_periodic.cyl_green(L, char, x, y, R)), M, R, form
    if name == "cyl-green-reg":
        need_lattice()
        return (lambda x: kernels_periodic.cyl_green_reg(L, char, x, y, R)), M, R, form
    if name == "torus-cauchy":
        need_lattice()
        a = _config_point(cfg, "a", M.n)
        b = _config_point(cfg, "b", M.n)
        tform = cfg.get("form", "coupled_subtracted").replace("-", "_")
        if tform == "orbit":
            tform = "coupled_subtracted"
        return (
            lambda x: kernels_periodic.torus_cauchy_two_point(L, char, a, b, x, R, form=tform)
        ), M, R, tform
    if name == "proj-cauchy":
        return (lambda x: kernels_pin.proj_cauchy(M, x, y, R, form=form)), M, R, form
    if name == "proj-green":
        return (lambda x: kernels_pin.proj_green(M, x, y, R, form=form)), M, R, form
    if name == "realproj-cauchy":
        if M.kind != "RealProjective":
            raise ConfigError("realproj-cauchy needs a RealProjective manifold spec")

        def ev(x):
            mv = kernels_pin.realproj_cauchy(M.p, x, y, form=form, negate_fiber=M.bundle.negate_fiber)
            return KernelEval(mv, 0, 0.0)

        return ev, M, 0, form
    if name == "moebius-green":
        return (
            lambda x: kernels_pin.moebius_green(
                M, x, y, R, form=form, allow_noncharacter=bool(cfg.get("allow_noncharacter", False))
            )
        ), M, R, form
    if name == "klein-green":
        return (lambda x: kernels_pin.klein_green(M, x, y, R, form=form)), M, R, form
    raise ConfigError(f"unhandled kernel {name!r}")  # pragma: no cover


def _value_columns(name: str, ev: KernelEval) -> list[float]:
    if name in _VECTOR_KERNELS:
        return [float(v) for v in ev.vector]
    return [float(ev.scalar)]


def _emit(text: str, out_path: str | None):
    if out_path:
        Path(out_path).parent.mkdir(parents=True, exist_ok=True)
        with open(out_path, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _json_report(payload: dict) -> str:
    return json.dumps(payload, sort_keys=True, indent=2) + "\n"


# -- subcommands ------------------------------------------------------------------

def cmd_eval(args) -> int:
    cfg = _load_config(args.config)
    _apply_overrides(cfg, args)
    evaluate, M, R, form = make_evaluator(cfg)
    x = _config_point(cfg, "x", M.n)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        ev = evaluate(x)
    payload = {
        "version": __version__,
        "config": cfg,
        "kernel": cfg["kernel"],
        "form": form,
        "R": R,
        "value": ev.to_dict(),
        "components": _value_columns(cfg["kernel"], ev),
    }
    _emit(_json_report(payload), args.out)
    return 0


def _segment_points(cfg: dict, n: int) -> list[np.ndarray]:
    if "points" in cfg:
        pts = [np.asarray(p, dtype=float) for p in cfg["points"]]
        for p in pts:
            if p.shape != (n,):
                raise ConfigError("every table point must match the manifold dimension")
        return pts
    if "segment" in cfg:
        seg = cfg["segment"]
        try:
            start = np.asarray(seg["start"], dtype=float)
            end = np.asarray(seg["end"], dtype=float)
            count = int(seg["count"])
        except (KeyError, TypeError, ValueError) as exc:
            raise ConfigError(f"segment needs start/end/count: {exc}") from exc
        if count < 2 or start.shape != (n,) or end.shape != (n,):
            raise ConfigError("segment start/end must match dimension and count >= 2")
        ts = np.linspace(0.0, 1.0, count)
        return [start + t * (end - start) for t in ts]
    if "samples" in cfg:
        box = cfg["samples"]
        try:
            count = int(box["count"])
            low = np.asarray(box.get("low", np.zeros(n)), dtype=float)
            high = np.asarray(box.get("high", np.ones(n)), dtype=float)
        except (KeyError, TypeError, ValueError) as exc:
            raise ConfigError(f"samples needs count (and optional low/high): {exc}") from exc
        if count < 1 or low.shape != (n,) or high.shape != (n,):
            raise ConfigError("samples low/high must match the manifold dimension")
        rng = np.random.default_rng(int(cfg.get("seed", 0)))
        return list(rng.uniform(low, high, size=(count, n)))
    raise ConfigError("table needs 'points', 'segment', or 'samples' in the config")


def _pool_map(fn, items, threads: int):
    if threads <= 1:
        return [fn(it) for it in items]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(fn, items))


def cmd_table(args) -> int:
    cfg = _load_config(args.config)
    _apply_overrides(cfg, args)
    evaluate, M, R, form = make_evaluator(cfg)
    pts = _segment_points(cfg, M.n)

    def row(idx_pt):
        idx, pt = idx_pt
        with warnings.catch_warnings():
            warnings.simplefilter("ignore")
            ev = evaluate(pt)
        return idx, pt, ev

    rows = _pool_map(row, list(enumerate(pts)), args.threads)
    ncomp = len(_value_columns(cfg["kernel"], rows[0][2]))
    header = (
        ["index"]
        + [f"x{j + 1}" for j in range(M.n)]
        + [f"value{j + 1}" for j in range(ncomp)]
        + ["tail_bound"]
    )
    lines = [",".join(header)]
    for idx, pt, ev in rows:
        cells = [str(idx)] + [_fmt(v) for v in pt]
        cells += [_fmt(v) for v in _value_columns(cfg["kernel"], ev)]
        cells.append(_fmt(ev.tail_bound))
        lines.append(",".join(cells))
    _emit("\n".join(lines) + "\n", args.out)
    return 0


def cmd_converge(args) -> int:
    cfg = _load_config(args.config)
    _apply_overrides(cfg, args)
    if args.R_list:
        R_list = [int(r) for r in args.R_list.split(",")]
    else:
        R_list = [int(r) for r in cfg.get("R_list", [10, 20, 40])]
    if not R_list or any(r < 0 for r in R_list):
        raise ConfigError("R_list must hold nonnegative radii")
    base_cfg = dict(cfg)

    def at_radius(R):
        c = dict(base_cfg)
        c["R"] = R
        evaluate, M, _, _ = make_evaluator(c)
        with warnings.catch_warnings():
            warnings.simplefilter("ignore")
            return evaluate(_config_point(c, "x", M.n))

    evals = _pool_map(at_radius, R_list, args.threads)
    comps = [_value_columns(cfg["kernel"], ev) for ev in evals]
    diffs: list[float | None] = [None]
    for prev, cur in zip(comps, comps[1:]):
        diffs.append(float(np.linalg.norm(np.asarray(cur) - np.asarray(prev))))
    real_diffs = [d for d in diffs if d is not None]
    non_cauchy = any(b > a for a, b in zip(real_diffs, real_diffs[1:]))
    status = "non-cauchy" if non_cauchy else "ok"
    header = ["R"] + [f"value{j + 1}" for j in range(len(comps[0]))] + [
        "tail_bound",
        "successive_diff",
        "status",
    ]
    lines = [",".join(header)]
    for R, ev, comp, d in zip(R_list, evals, comps, diffs):
        cells = [str(R)] + [_fmt(v) for v in comp] + [_fmt(ev.tail_bound)]
        cells.append("" if d is None else _fmt(d))
        cells.append(status)
        lines.append(",".join(cells))
    _emit("\n".join(lines) + "\n", args.out)
    return 0


def cmd_verify(args) -> int:
    name = args.suite
    if name != "all" and name not in suites.SUITES:
        raise ConfigError(f"unknown suite {name!r}; choose from all, {', '.join(suites.SUITES)}")
    report = suites.run_suite(name, seed=args.seed)
    payload = {"version": __version__, "seed": args.seed, "report": report}
    _emit(_json_report(payload), args.out)
    return 0 if report["passed"] else 1


_ORDER_MAPS = ("winding1", "winding2", "nozero")


def _order_map(name: str, c: np.ndarray):
    if name == "winding1":
        return lambda x: x - c
    if name == "winding2":

        def squaring(x):
            u, v = x - c
            return np.array([u * u - v * v, 2.0 * u * v])

        return squaring
    if name == "nozero":
        return lambda x: x - c + np.array([5.0, 0.0])
    raise ConfigError(f"unknown map {name!r}; choose from {', '.join(_ORDER_MAPS)}")


def cmd_order(args) -> int:
    cfg = _load_config(args.config)
    c = np.asarray(cfg.get("center", [0.0, 0.0]), dtype=float)
    if c.shape != (2,):
        raise ConfigError("order command is shipped for planar maps (center of length 2)")
    delta = float(cfg.get("delta", 0.5))
    grid = int(cfg.get("grid", 256))
    gmap = _order_map(cfg.get("map", "winding1"), c)
    kernel0 = lambda X, yy: cauchy_g_batch(X, yy)
    order = quadrature.order_of_zero(gmap, c, delta, kernel0, (grid,))
    theta = 2.0 * math.pi * (np.arange(2 * grid) + 0.5) / (2 * grid)
    circle = c[None, :] + delta * np.stack([np.cos(theta), np.sin(theta)], axis=1)
    oracle = quadrature.polygon_winding(np.array([gmap(p) for p in circle]))
    payload = {
        "version": __version__,
        "config": cfg,
        "order": order,
        "diagnostics": {
            "delta": delta,
            "grid": grid,
            "polygon_winding_oracle": int(oracle),
            "delta_halved_order": quadrature.order_of_zero(gmap, c, delta / 2.0, kernel0, (grid,)),
        },
    }
    _emit(_json_report(payload), args.out)
    return 0


def cmd_probe(args) -> int:
    reports = suites.probe_reports()
    outdir = Path(args.out or "probe_reports")
    outdir.mkdir(parents=True, exist_ok=True)
    index = {"version": __version__, "reports": sorted(reports)}
    for name, rep in reports.items():
        with open(outdir / f"{name}.json", "w", encoding="utf-8") as fh:
            fh.write(_json_report({"version": __version__, "probe": name, "report": rep}))
    with open(outdir / "probes_index.json", "w", encoding="utf-8") as fh:
        fh.write(_json_report(index))
    sys.stdout.write(f"wrote {len(reports)} probe reports to {outdir}\n")
    return 0


def _apply_overrides(cfg: dict, args) -> None:
    if getattr(args, "R", None) is not None:
        cfg["R"] = args.R
    if getattr(args, "form", None) is not None:
        cfg["form"] = args.form


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="flatkernels",
        description="Kernels on flat quotient manifolds: evaluation, convergence studies, verification",
    )
    ap.add_argument("--version", action="version", version=f"flatkernels {__version__}")
    sub = ap.add_subparsers(dest="command", required=True)

    def common(p, needs_config=True):
        if needs_config:
            p.add_argument("--config", required=True, help="JSON run configuration")
        p.add_argument("--out", default=None, help="output path (default: stdout)")
        p.add_argument("--R", type=int, default=None, help="override truncation radius")
        p.add_argument("--form", choices=["orbit", "paper-literal"], default=None)
        p.add_argument("--threads", type=int, default=1, help="worker threads (output-identical)")

    p_eval = sub.add_parser("eval", help="single kernel evaluation to JSON")
    common(p_eval)
    p_table = sub.add_parser("table", help="tabulate a kernel along points, CSV")
    common(p_table)
    p_conv = sub.add_parser("converge", help="truncation-radius convergence study, CSV")
    common(p_conv)
    p_conv.add_argument("--R-list", dest="R_list", default=None, help="comma-separated radii")
    p_ver = sub.add_parser("verify", help="run a named verification suite")
    p_ver.add_argument("--suite", required=True)
    p_ver.add_argument("--seed", type=int, default=0)
    p_ver.add_argument("--out", default=None)
    p_ord = sub.add_parser("order", help="order of an isolated zero of a shipped map")
    p_ord.add_argument("--config", required=True)
    p_ord.add_argument("--out", default=None)
    p_probe = sub.add_parser("probe", help="write report-only discrepancy probes")
    p_probe.add_argument("--out", default=None, help="output directory")
    return ap


_COMMANDS = {
    "eval": cmd_eval,
    "table": cmd_table,
    "converge": cmd_converge,
    "verify": cmd_verify,
    "order": cmd_order,
    "probe": cmd_probe,
}


def main(argv=None) -> int:
    ap = build_parser()
    args = ap.parse_args(argv)
    try:
        return _COMMANDS[args.command](args)
    except ConfigError as exc:
        sys.stderr.write(f"config error: {exc}\n")
        return 2
    except (RegimeError, SingularPoint) as exc:
        sys.stderr.write(f"config error: {exc}\n")
        return 2


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
