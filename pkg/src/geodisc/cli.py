"""Command-line entry point: experiment orchestration and CSV/JSON emission.

Subcommands: stolarsky, scaling, design-audit, sampler-check, kernel-eval,
sample.  Every emitted row carries (value, error_budget, method); output is
deterministic byte-for-byte for a fixed configuration and seed set.  Cells
of a sweep are independent and run on a thread pool capped by the
GEODISC_THREADS environment variable.

Exit codes: 0 all checks passed, 1 at least one hard assertion failed,
2 configuration error.
"""

import argparse
import hashlib
import json
import math
import os
import sys
from concurrent.futures import ThreadPoolExecutor

import numpy as np

from . import __version__, designs, discrepancy, kernels, spaces
from .jacobi import WeightFunction
from .spaces import Family, ball_volume, catalog, make_space, parse_space


def _fmt(x) -> str:
    if isinstance(x, float):
        return format(x, ".12g")
    return str(x)


def parse_weight(text: str) -> WeightFunction:
    text = text.strip()
    if text == "sin":
        return WeightFunction.sin()
    if text == "const":
        return WeightFunction.const()
    if text.startswith("indicator:"):
        return WeightFunction.indicator(float(text.split(":", 1)[1]))
    if text.startswith("file:"):
        knots, values = np.loadtxt(text.split(":", 1)[1], delimiter=",", unpack=True)
        return WeightFunction.tabulated(knots, values)
    raise ValueError(f"cannot parse weight {text!r}")


def load_config(path: str) -> dict[str, str]:
    """Flat key=value file; '[section]' lines prefix keys with 'section.'."""
    out: dict[str, str] = {}
    section = ""
    with open(path) as fh:
        for lineno, raw in enumerate(fh, 1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if line.startswith("[") and line.endswith("]"):
                section = line[1:-1].strip() + "."
                continue
            if "=" not in line:
                raise ValueError(f"{path}:{lineno}: expected key=value, got {raw!r}")
            key, val = line.split("=", 1)
            out[section + key.strip()] = val.strip()
    return out


def _config_hash(args: argparse.Namespace) -> str:
    # output destinations do not change the experiment identity
    skip = {"func", "out", "json", "config"}
    bag = {k: v for k, v in sorted(vars(args).items()) if k not in skip}
    canon = ";".join(f"{k}={v}" for k, v in bag.items())
    return hashlib.sha256(canon.encode()).hexdigest()[:12]


def emit(args, header: list[str], rows: list[tuple], extra_meta: dict | None = None) -> None:
    rows = sorted(rows, key=lambda row: tuple(map(str, row)))
    meta = {"tool": f"geodisc {__version__}", "command": args.command,
            "config_hash": _config_hash(args)}
    meta.update(extra_meta or {})
    lines = [f"# {k}={v}" for k, v in meta.items()]
    lines.append(",".join(header))
    lines += [",".join(_fmt(v) for v in row) for row in rows]
    text = "\n".join(lines) + "\n"
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    if getattr(args, "json", None):
        payload = {"metadata": meta, "header": header,
                   "rows": [[_fmt(v) for v in row] for row in rows]}
        with open(args.json, "w") as fh:
            json.dump(payload, fh, indent=1, sort_keys=True)
            fh.write("\n")


def _thread_map(fn, cells):
    cap = os.environ.get("GEODISC_THREADS", "")
    workers = max(1, int(cap)) if cap else min(8, os.cpu_count() or 1, max(len(cells), 1))
    if workers == 1 or len(cells) <= 1:
        return [fn(c) for c in cells]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, cells))


def _spaces_from(args) -> list:
    if args.space:
        return [parse_space(s) for s in args.space]
    return catalog()


# ---------------------------------------------------------------------------
# Subcommands
# ---------------------------------------------------------------------------

def cmd_stolarsky(args) -> int:
    weight_descr = "sin"  # identity is specific to the sin weight
    spaces_ = _spaces_from(args)

    def cell(task):
        space, seed = task
        rng = np.random.default_rng((args.seed, seed))
        pset = spaces.sample_points(space, args.n, rng)
        chk = discrepancy.stolarsky_residual(pset, tol=args.trunc_tol)
        return (space.label(), args.n, seed, chk.residual, chk.budget,
                "series", "pass" if chk.passed else "FAIL")

    cells = [(sp, s) for sp in spaces_ for s in range(args.seeds)]
    rows = _thread_map(cell, cells)
    emit(args, ["space", "n", "seed", "residual", "error_budget", "method", "status"],
         rows, {"weight": weight_descr})
    return 0 if all(r[-1] == "pass" for r in rows) else 1


def cmd_scaling(args) -> int:
    space = parse_space(args.space[0]) if args.space else make_space(Family.SPHERE, 2)
    grid = [int(v) for v in args.n_grid.split(",")]
    if sorted(grid) != grid or len(set(grid)) != len(grid):
        raise ValueError("N grid must be strictly increasing")
    weight = parse_weight(args.weight)
    if weight.kind != "sin":
        raise ValueError("scaling sweep supports the sin weight (identity route)")

    def cell(task):
        n, seed = task
        if args.generator == "random":
            rng = np.random.default_rng((args.seed, seed))
            pset = spaces.sample_points(space, n, rng)
        elif args.generator == "spiral":
            pset = designs.builtin_configuration(space, "spiral", count=n)
        elif args.generator == "geodesic_orbit":
            pset = designs.builtin_configuration(space, "geodesic_orbit", k=n)
        else:
            raise ValueError(f"unknown generator {args.generator!r}")
        rep = discrepancy.quadratic_discrepancy_identity(pset)
        return (space.label(), n, seed, rep.value, rep.tail_bound, rep.method)

    seeds = range(args.seeds) if args.generator == "random" else [0]
    cells = [(n, s) for n in grid for s in seeds]
    rows = _thread_map(cell, cells)

    means = {n: float(np.mean([r[3] for r in rows if r[1] == n])) for n in grid}
    logs = np.log(np.asarray(grid, dtype=float))
    vals = np.asarray([max(means[n], 1e-300) for n in grid])
    slope, intercept = np.polyfit(logs, np.log(vals), 1)
    resid = float(np.abs(np.log(vals) - (slope * logs + intercept)).max())
    ok = True
    if args.slope_range:
        lo, hi = (float(v) for v in args.slope_range.split(","))
        ok = lo <= slope <= hi
    rows.append((space.label(), 0, -1, float(slope), resid, "loglog_fit"))
    emit(args, ["space", "n", "seed", "value", "error_budget", "method"], rows,
         {"generator": args.generator, "slope": _fmt(float(slope)),
          "slope_ok": str(ok).lower()})
    return 0 if ok else 1


def cmd_design_audit(args) -> int:
    space = parse_space(args.space[0]) if args.space else make_space(Family.SPHERE, 2)
    rows = []
    ok = True
    for name in args.set:
        pset = designs.parse_configuration(space, name)
        aud = designs.audit(pset, max_t=args.t_max, tol=args.design_tol)
        rows.append((space.label(), name, len(pset), aud.t_verified,
                     aud.delta, aud.nu_at_scale, float(aud.phi_over_n2[1:].max()),
                     "zonal_sums"))
        if args.expect_t is not None and aud.t_verified != args.expect_t:
            ok = False
    emit(args, ["space", "set", "n", "t_verified", "separation", "covering_count",
                "max_phi_over_n2", "method"], rows)
    return 0 if ok else 1


def cmd_sampler_check(args) -> int:
    spaces_ = _spaces_from(args)

    def cell(space):
        rng = np.random.default_rng((args.seed, space.d, space.d0))
        pset = spaces.sample_points(space, args.mc_samples, rng)
        y0 = spaces.sample_points(space, 1, rng)
        cos_t = spaces.cos_geodesic_to(pset, y0.coords)[:, 0]
        ks = spaces.ks_distance_statistic(space, np.arccos(np.clip(cos_t, -1, 1)))
        status = "pass" if ks < args.ks_threshold else "FAIL"
        return (space.label(), args.mc_samples, ks, args.ks_threshold,
                "ks_empirical_cdf", status)

    rows = _thread_map(cell, spaces_)
    emit(args, ["space", "samples", "ks_distance", "error_budget", "method", "status"],
         rows)
    return 0 if all(r[-1] == "pass" for r in rows) else 1


def cmd_kernel_eval(args) -> int:
    spaces_ = _spaces_from(args)
    grid = args.grid

    def cell(space):
        rs = np.linspace(0.3, math.pi - 0.3, grid)
        ts = np.linspace(0.0, math.pi, grid)
        worst = 0.0
        budget = 0.0
        for r in rs:
            exp = kernels.radial_expansion(space, float(r), args.trunc_tol)
            plus, minus = kernels.series_pair(exp, ts)
            v = float(ball_volume(space, float(r)))
            worst = max(worst, float(np.abs(plus + minus - v * (1 - v)).max()))
            budget = max(budget, 2.0 * exp.tail)
        ok1 = worst <= budget
        # chordal identity: gamma * theta^Delta(sin) against sin(t/2)
        gamma = kernels.stolarsky_constant(space)
        exp_eta = kernels.weight_expansion(space, WeightFunction.sin(), args.eta_tol)
        _, minus = kernels.series_pair(exp_eta, ts)
        resid = float(np.abs(np.sin(0.5 * ts) - gamma * minus).max())
        eta_budget = gamma * exp_eta.tail
        ok2 = resid <= eta_budget
        return [(space.label(), "invariance_max_residual", worst, budget,
                 "series", "pass" if ok1 else "FAIL"),
                (space.label(), "chordal_identity_residual", resid, eta_budget,
                 "series", "pass" if ok2 else "FAIL")]

    rows = [row for group in _thread_map(cell, spaces_) for row in group]
    emit(args, ["space", "check", "value", "error_budget", "method", "status"], rows)
    return 0 if all(r[-1] == "pass" for r in rows) else 1


def cmd_sample(args) -> int:
    space = parse_space(args.space[0]) if args.space else make_space(Family.SPHERE, 2)
    rng = np.random.default_rng(args.seed)
    pset = spaces.sample_points(space, args.count, rng)
    if not args.out:
        raise ValueError("sample requires --out")
    spaces.save_point_set(pset, args.out)
    return 0


# ---------------------------------------------------------------------------
# Argument wiring
# ---------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    top = argparse.ArgumentParser(prog="geodisc", description=__doc__)
    sub = top.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--config", help="key=value config file; flags override")
        p.add_argument("--space", action="append",
                       help="space label (S2, RP3, CP2, HP2, OP2); repeatable")
        p.add_argument("--out", help="CSV output path (default stdout)")
        p.add_argument("--json", help="optional JSON mirror path")
        p.add_argument("--seed", type=int, default=0)
        p.add_argument("--trunc-tol", type=float, default=1e-4,
                       help="per-N^2 series tail target")
        p.add_argument("--mc-samples", type=int, default=10_000)

    p = sub.add_parser("stolarsky", help="invariance residual sweep")
    common(p)
    p.add_argument("--n", type=int, default=100)
    p.add_argument("--seeds", type=int, default=5)
    p.set_defaults(func=cmd_stolarsky)

    p = sub.add_parser("scaling", help="log-log scaling of the quadratic discrepancy")
    common(p)
    p.add_argument("--generator", default="spiral",
                   choices=["random", "spiral", "geodesic_orbit"])
    p.add_argument("--n-grid", default="100,200,400,800,1600,3200,6400")
    p.add_argument("--weight", default="sin")
    p.add_argument("--seeds", type=int, default=3)
    p.add_argument("--slope-range", help="lo,hi hard assertion on the fitted slope")
    p.set_defaults(func=cmd_scaling)

    p = sub.add_parser("design-audit", help="verify named configurations")
    common(p)
    p.add_argument("--set", action="append", required=True,
                   help="configuration name (e.g. icosahedron, spiral:200)")
    p.add_argument("--t-max", type=int, default=8)
    p.add_argument("--design-tol", type=float, default=designs.DESIGN_TOL_EXACT)
    p.add_argument("--expect-t", type=int, default=None,
                   help="hard assertion on the verified strength")
    p.set_defaults(func=cmd_design_audit)

    p = sub.add_parser("sampler-check", help="KS test of samplers against v_r")
    common(p)
    p.add_argument("--ks-threshold", type=float, default=0.02)
    p.set_defaults(func=cmd_sampler_check)

    p = sub.add_parser("kernel-eval", help="kernel identity tables")
    common(p)
    p.add_argument("--grid", type=int, default=11)
    p.add_argument("--eta-tol", type=float, default=1e-4)
    p.set_defaults(func=cmd_kernel_eval)

    p = sub.add_parser("sample", help="emit a uniform point set as CSV")
    common(p)
    p.add_argument("--count", type=int, default=100)
    p.set_defaults(func=cmd_sample)
    return top


def _inject_config(argv: list[str]) -> list[str]:
    """Expand --config into flags placed before the user's own, so explicit
    command-line values take precedence.  Repeatable options (space, set)
    take whitespace-separated lists in the file."""
    cfg_path = None
    for i, tok in enumerate(argv):
        if tok == "--config" and i + 1 < len(argv):
            cfg_path = argv[i + 1]
        elif tok.startswith("--config="):
            cfg_path = tok.split("=", 1)[1]
    if cfg_path is None:
        return argv
    command = next((t for t in argv if not t.startswith("-")), None)
    if command is None:
        return argv
    inject: list[str] = []
    for key, raw in load_config(cfg_path).items():
        name = key[len(command) + 1:] if key.startswith(command + ".") else key
        if "." in name:
            continue  # section for another command
        flag = "--" + name
        if any(t == flag or t.startswith(flag + "=") for t in argv):
            continue  # explicit flag wins
        values = raw.split() if name in ("space", "set") else [raw]
        for v in values:
            inject += [f"{flag}={v}"]
    idx = argv.index(command) + 1
    return argv[:idx] + inject + argv[idx:]


def main(argv=None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    try:
        argv = _inject_config(argv)
        args = parser.parse_args(argv)
    except SystemExit as exc:  # argparse reports its own diagnostics
        return int(exc.code or 0)
    except (OSError, ValueError) as exc:
        print(f"geodisc: config error: {exc}", file=sys.stderr)
        return 2
    try:
        return args.func(args)
    except (ValueError, OSError) as exc:
        print(f"geodisc: error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
