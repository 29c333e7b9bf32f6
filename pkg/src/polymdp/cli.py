"""Command-line driver: solve domains, query values, export diagrams and grids.

Three subcommands:

* ``solve`` runs value iteration and writes a per-iteration statistics CSV
  (``iter,nodes,leaves,decisions,time_ms``), optionally exporting each value
  function as DOT and case text and rendering a growth figure;
* ``eval`` prints the exact value and greedy action at one state;
* ``grid`` samples the value function over a two-variable grid into a CSV
  suitable for surface plotting, optionally rendering a heatmap alongside.

All file outputs are written atomically (temp file, then rename), and
identical inputs produce byte-identical CSVs apart from the time column.
"""
from __future__ import annotations

import argparse
import csv
import io
import os
import sys
import tempfile
from fractions import Fraction
from pathlib import Path

from .domlang import DomainValidationError, ParseError, builtin_domain_path, parse_domain_file
from .model import DCMDP
from .sdp import SolveResult, solve

STATS_HEADER = "iter,nodes,leaves,decisions,time_ms"


def main(argv: list[str] | None = None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        return args.handler(args)
    except (ParseError, DomainValidationError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="polymdp",
        description="Exact symbolic value iteration for mixed-state MDPs.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p: argparse.ArgumentParser) -> None:
        p.add_argument("--domain", required=True,
                       help="domain file path or bundled domain name")
        p.add_argument("--iterations", type=int, default=None,
                       help="number of backups (default: the domain's horizon)")
        p.add_argument("--prune", action="store_true",
                       help="prune infeasible linear paths after each backup")
        p.add_argument("--discount", default=None,
                       help="override the domain's discount factor")
        p.add_argument("--clear-cache", action="store_true",
                       help="drop the operation cache between iterations")

    p_solve = sub.add_parser("solve", help="run value iteration, write statistics")
    common(p_solve)
    p_solve.add_argument("--stats", default=None,
                         help="statistics CSV path (default: stdout)")
    p_solve.add_argument("--dot", default=None, metavar="DIR",
                         help="write v<h>.dot for every computed horizon")
    p_solve.add_argument("--case", default=None, metavar="DIR",
                         help="write v<h>.case for every computed horizon")
    p_solve.add_argument("--plot", default=None, metavar="FILE",
                         help="render node growth and iteration time to an image")
    p_solve.set_defaults(handler=_cmd_solve)

    p_eval = sub.add_parser("eval", help="value and greedy action at one state")
    common(p_eval)
    p_eval.add_argument("--state", required=True,
                        help="comma-separated assignment, e.g. k=0,x1=30,x2=40")
    p_eval.add_argument("--horizon", type=int, required=True,
                        help="stage-to-go horizon to query")
    p_eval.set_defaults(handler=_cmd_eval)

    p_grid = sub.add_parser("grid", help="sample the value function on a 2D grid")
    common(p_grid)
    p_grid.add_argument("--vars", required=True,
                        help="two continuous grid axes, e.g. x1,x2")
    p_grid.add_argument("--fix", default="",
                        help="fixed values for the other variables, e.g. k=0,h1=false")
    p_grid.add_argument("--res", type=int, default=50,
                        help="grid resolution per axis (default 50)")
    p_grid.add_argument("--out", default=None, help="grid CSV path (default: stdout)")
    p_grid.add_argument("--horizon", type=int, default=None,
                        help="value function to sample (default: last computed)")
    p_grid.add_argument("--plot", default=None, metavar="FILE",
                        help="render the sampled surface as a heatmap image")
    p_grid.set_defaults(handler=_cmd_grid)
    return parser


# -- shared helpers -----------------------------------------------------------


def _load_model(args) -> DCMDP:
    path = Path(args.domain)
    if not path.exists():
        bundled = builtin_domain_path(args.domain)
        if bundled.exists():
            path = bundled
        else:
            raise ValueError(f"domain file not found: {args.domain}")
    m = parse_domain_file(path)
    if args.discount is not None:
        discount = Fraction(args.discount)
        if not (0 <= discount <= 1):
            raise ValueError(f"discount {discount} outside [0, 1]")
        m = DCMDP(m.store, m.name, m.bvars, m.cvars, m.actions, discount, m.horizon)
    return m


def _run_solve(args, horizon: int | None = None) -> tuple[DCMDP, SolveResult]:
    m = _load_model(args)
    iterations = args.iterations if args.iterations is not None else horizon
    if iterations is None:
        iterations = m.horizon
    if iterations is None:
        raise ValueError("the domain declares no horizon; pass --iterations")
    if iterations < 0:
        raise ValueError("--iterations must be non-negative")
    if horizon is not None and iterations < horizon:
        raise ValueError(f"--iterations {iterations} is below the requested"
                         f" horizon {horizon}")
    result = solve(m, iterations, use_prune=args.prune,
                   clear_cache_each_iteration=args.clear_cache)
    return m, result


def _write_atomic(path: str | Path, text: str) -> None:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=f".{path.name}.")
    try:
        with os.fdopen(fd, "w", encoding="utf-8") as handle:
            handle.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _parse_assignment(text: str, m: DCMDP) -> dict:
    state: dict = {}
    if not text.strip():
        return state
    for item in text.split(","):
        if "=" not in item:
            raise ValueError(f"bad assignment {item!r} (expected name=value)")
        name, _, raw = item.partition("=")
        name, raw = name.strip(), raw.strip()
        if not m.store.has_var(name):
            raise ValueError(f"unknown variable {name!r}")
        info = m.store.var_info(name)
        if info.kind == "bool":
            lowered = raw.lower()
            if lowered in ("true", "1"):
                state[name] = True
            elif lowered in ("false", "0"):
                state[name] = False
            else:
                raise ValueError(f"bad boolean value {raw!r} for {name}")
        else:
            state[name] = Fraction(raw)
    return state


def _fmt(value) -> str:
    return f"{float(value):.12g}"


# -- solve ----------------------------------------------------------------------


def _cmd_solve(args) -> int:
    m, result = _run_solve(args)
    rows = result.stats if len(result.stats) == 1 else result.stats[1:]
    out = io.StringIO()
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(STATS_HEADER.split(","))
    for s in rows:
        writer.writerow([s.iteration, s.nodes, s.leaves, s.decisions, f"{s.time_ms:.3f}"])
    if args.stats:
        _write_atomic(args.stats, out.getvalue())
    else:
        sys.stdout.write(out.getvalue())
    if result.converged:
        print(f"converged at iteration {result.converged_at}"
              " (value function reached a fixpoint)", file=sys.stderr)
    store = m.store
    if args.dot:
        for h, ref in enumerate(result.values):
            _write_atomic(Path(args.dot) / f"v{h}.dot", store.export_dot(ref))
    if args.case:
        for h, ref in enumerate(result.values):
            _write_atomic(Path(args.case) / f"v{h}.case", store.to_case(ref) + "\n")
    if args.plot:
        _plot_growth(result, args.plot)
    return 0


def _plot_growth(result: SolveResult, path: str) -> None:
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    stats = result.stats
    iterations = [s.iteration for s in stats]
    fig, (ax_nodes, ax_time) = plt.subplots(1, 2, figsize=(9, 3.5))
    ax_nodes.plot(iterations, [s.nodes for s in stats], marker="o")
    ax_nodes.set_xlabel("iteration")
    ax_nodes.set_ylabel("value function nodes")
    ax_time.plot(iterations, [s.time_ms for s in stats], marker="o", color="tab:red")
    ax_time.set_xlabel("iteration")
    ax_time.set_ylabel("time per iteration [ms]")
    fig.tight_layout()
    Path(path).parent.mkdir(parents=True, exist_ok=True)
    fig.savefig(path, dpi=150)
    plt.close(fig)


# -- eval ------------------------------------------------------------------------


def _cmd_eval(args) -> int:
    if args.horizon < 0:
        raise ValueError("--horizon must be non-negative")
    m, result = _run_solve(args, horizon=args.horizon)
    state = _parse_assignment(args.state, m)
    missing = [s for s in m.state_symbols() if s not in state]
    if missing:
        raise ValueError(f"state is missing variables: {', '.join(missing)}")
    value = result.value_at(args.horizon, state)
    print(f"value = {value} ({_fmt(value)})")
    if args.horizon >= 1:
        print(f"action = {result.policy_at(args.horizon, state)}")
    return 0


# -- grid ------------------------------------------------------------------------


def _cmd_grid(args) -> int:
    if args.res < 2:
        raise ValueError("--res must be at least 2")
    axes = [v.strip() for v in args.vars.split(",") if v.strip()]
    if len(axes) != 2 or axes[0] == axes[1]:
        raise ValueError("--vars needs exactly two distinct continuous variables")
    m, result = _run_solve(args, horizon=args.horizon)
    horizon = args.horizon if args.horizon is not None else result.horizon_reached
    store = m.store
    for ax in axes:
        if not store.has_var(ax) or store.var_info(ax).kind != "cont":
            raise ValueError(f"grid axis {ax!r} is not a declared continuous variable")
    fixed = _parse_assignment(args.fix, m)
    clash = [ax for ax in axes if ax in fixed]
    if clash:
        raise ValueError(f"grid axes cannot also be fixed: {', '.join(clash)}")
    unfixed = [s for s in m.state_symbols() if s not in fixed and s not in axes]
    if unfixed:
        raise ValueError(f"fix the remaining variables with --fix: {', '.join(unfixed)}")

    points = {ax: _axis_points(store, ax, args.res) for ax in axes}
    diagram = result.value_diagram(horizon)
    store.freeze()  # sampling is read-only and could fan out across workers
    out = io.StringIO()
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow([axes[0], axes[1], "value"])
    values: list[list[float]] = []
    for v1 in points[axes[0]]:
        row: list[float] = []
        for v2 in points[axes[1]]:
            state = dict(fixed)
            state[axes[0]] = v1
            state[axes[1]] = v2
            value = store.evaluate(diagram, state)
            writer.writerow([_fmt(v1), _fmt(v2), _fmt(value)])
            row.append(float(value))
        values.append(row)
    if args.out:
        _write_atomic(args.out, out.getvalue())
    else:
        sys.stdout.write(out.getvalue())
    if args.plot:
        _plot_grid(axes, points, values, horizon, args.plot)
    return 0


def _axis_points(store, sym: str, res: int) -> list[Fraction]:
    lo, hi = store.var_info(sym).lower, store.var_info(sym).upper
    step = Fraction(hi - lo, res - 1)
    return [lo + step * i for i in range(res)]


def _plot_grid(axes, points, values, horizon: int, path: str) -> None:
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    xs = [float(v) for v in points[axes[0]]]
    ys = [float(v) for v in points[axes[1]]]
    fig, ax = plt.subplots(figsize=(5.5, 4.5))
    mesh = ax.pcolormesh(ys, xs, values, shading="nearest", cmap="viridis")
    ax.set_xlabel(axes[1])
    ax.set_ylabel(axes[0])
    ax.set_title(f"value function, {horizon} stages to go")
    fig.colorbar(mesh, ax=ax, label="value")
    fig.tight_layout()
    Path(path).parent.mkdir(parents=True, exist_ok=True)
    fig.savefig(path, dpi=150)
    plt.close(fig)


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
