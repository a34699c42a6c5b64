"""Command-line front end: check, solve, and sweep.

Exit codes are a stable scripting contract: 0 when every requested
certificate was produced, 2 when a condition gate failed (refusal), 3 when a
solver stage errored; invalid usage or configuration exits 1.  Diagnostics go
to stderr, reports to --out or stdout.
"""

from __future__ import annotations

import argparse
import sys
import time
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path

from .conditions import (
    check_envelope_smallness,
    check_growth_envelope,
    sphere_energy_lower_bound,
)
from .config import ProblemConfig
from .errors import ConditionRefusalError, ConfigError, PKLaplaceError
from .reports import (
    check_payload,
    dumps,
    refusal_payload,
    solution_csv,
    solve_payload,
    sweep_csv,
)
from .solvers import solve_two

_AXIS_FIELDS = {"T": "T", "m": "m", "scale": "scale", "p": "p"}


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="pklaplace",
        description=(
            "Find and certify two positive solutions of discrete "
            "variable-exponent Dirichlet problems."
        ),
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--config", required=True, help="problem configuration (JSON)")
        p.add_argument("--out", help="output path (default: stdout)")
        p.add_argument("--seed", type=int, help="override the config seed")
        p.add_argument("--tol-grad", type=float, dest="grad_tol")
        p.add_argument("--tol-residual", type=float, dest="residual_tol")
        p.add_argument("--tol-quadrature", type=float, dest="quad_tol")
        p.add_argument("--tol-positivity", type=float, dest="positivity_margin")

    p_check = sub.add_parser("check", help="evaluate the condition gates only")
    common(p_check)

    p_solve = sub.add_parser("solve", help="run the full two-solution pipeline")
    common(p_solve)
    p_solve.add_argument(
        "--solutions-csv",
        metavar="PREFIX",
        help="also write PREFIX_minimizer.csv and PREFIX_mountain_pass.csv",
    )

    p_sweep = sub.add_parser("sweep", help="solve over one or two parameter axes")
    common(p_sweep)
    p_sweep.add_argument(
        "--axis", required=True, metavar="NAME=SPEC",
        help="first axis, e.g. scale=0.1:1.0:0.1 or T=4,8,12 (names: T, m, scale, p)",
    )
    p_sweep.add_argument("--axis2", metavar="NAME=SPEC", help="optional second axis")
    p_sweep.add_argument("--jobs", type=int, default=1, help="parallel sweep workers")
    return parser


def _apply_overrides(cfg: ProblemConfig, args) -> ProblemConfig:
    fields = {}
    if args.seed is not None:
        fields["seed"] = args.seed
    tol = dict(cfg.tolerances)
    for key in ("grad_tol", "residual_tol", "quad_tol", "positivity_margin"):
        val = getattr(args, key, None)
        if val is not None:
            tol[key] = val
    fields["tolerances"] = tol
    return cfg.with_overrides(**fields)


def _emit(text: str, out):
    if out is None:
        sys.stdout.write(text)
    else:
        Path(out).write_text(text)


def _conditions(problem):
    env = problem.nonlinearity.envelope
    c1 = check_growth_envelope(problem) if env is not None else None
    c2 = check_envelope_smallness(problem.T, problem.exponents, env)
    level = sphere_energy_lower_bound(problem)
    return c1, c2, level


def _cmd_check(args) -> int:
    cfg = _apply_overrides(ProblemConfig.load(args.config), args)
    problem = cfg.build()
    c1, c2, level = _conditions(problem)
    _emit(dumps(check_payload(cfg.echo(), c1, c2, level)), args.out)
    ok = (c1 is None or c1.holds) and c2.holds
    return 0 if ok else 2


def _cmd_solve(args) -> int:
    cfg = _apply_overrides(ProblemConfig.load(args.config), args)
    problem = cfg.build()
    c1, c2, level = _conditions(problem)
    if not c2.holds:
        _emit(dumps(refusal_payload(cfg.echo(), c2)), args.out)
        print("refused: smallness condition C2 fails", file=sys.stderr)
        return 2
    started = time.perf_counter()
    try:
        result = solve_two(problem, seed=cfg.seed)
    except ConditionRefusalError as exc:
        _emit(dumps(refusal_payload(cfg.echo(), exc.report)), args.out)
        print(f"refused: {exc}", file=sys.stderr)
        return 2
    except PKLaplaceError as exc:
        print(f"solver error: {exc}", file=sys.stderr)
        return 3
    elapsed = time.perf_counter() - started
    _emit(dumps(solve_payload(cfg.echo(), c1, c2, level, result)), args.out)
    if args.solutions_csv:
        prefix = args.solutions_csv
        Path(f"{prefix}_minimizer.csv").write_text(
            solution_csv(result.minimizer_certificate.solution)
        )
        Path(f"{prefix}_mountain_pass.csv").write_text(
            solution_csv(result.mountain_pass_certificate.solution)
        )
    print(f"solved in {elapsed:.2f}s (wall clock; not part of the report)", file=sys.stderr)
    return 0


def _parse_axis(spec: str):
    try:
        name, values = spec.split("=", 1)
    except ValueError:
        raise ConfigError(f"axis {spec!r}: expected NAME=SPEC") from None
    if name not in _AXIS_FIELDS:
        raise ConfigError(f"axis {name!r}: expected one of {sorted(_AXIS_FIELDS)}")
    if ":" in values:
        parts = values.split(":")
        if len(parts) != 3:
            raise ConfigError(f"axis {spec!r}: range form is start:stop:step")
        start, stop, step = (float(x) for x in parts)
        if step <= 0:
            raise ConfigError(f"axis {spec!r}: step must be positive")
        vals = []
        v = start
        while v <= stop + 1e-9 * max(1.0, abs(stop)):
            vals.append(v)
            v += step
    else:
        vals = [float(x) for x in values.split(",") if x.strip()]
    if not vals:
        raise ConfigError(f"axis {spec!r}: no values")
    if name == "T":
        vals = [int(round(v)) for v in vals]
    return name, vals


def _sweep_cell(task):
    """Run one sweep cell; returns (i, j, row_tuple, payload). Top level for pickling."""
    i, j, cfg, axis1, v1, axis2, v2 = task
    overrides = {_AXIS_FIELDS[axis1]: v1}
    if axis2 is not None:
        overrides[_AXIS_FIELDS[axis2]] = v2
    try:
        cell_cfg = cfg.with_overrides(**overrides)
        problem = cell_cfg.build()
        c1, c2, level = _conditions(problem)
    except (ConfigError, PKLaplaceError) as exc:
        payload = {"kind": "error", "stage": "configure", "message": str(exc)}
        return i, j, (v1, v2, float("nan"), float("nan"), False, 0, None, None), payload
    if not c2.holds:
        return (
            i, j,
            (v1, v2, c2.lhs, c2.rhs, False, 0, None, None),
            refusal_payload(cell_cfg.echo(), c2),
        )
    try:
        result = solve_two(problem, seed=cell_cfg.seed)
    except PKLaplaceError as exc:
        payload = {"kind": "error", "stage": "solve", "message": str(exc)}
        return i, j, (v1, v2, c2.lhs, c2.rhs, True, 0, None, None), payload
    n_cert = int(result.minimizer_certificate.certified) + int(
        result.mountain_pass_certificate.certified
    )
    row = (
        v1, v2, c2.lhs, c2.rhs, True, n_cert,
        result.minimizer_certificate.energy,
        result.mountain_pass_certificate.energy,
    )
    return i, j, row, solve_payload(cell_cfg.echo(), c1, c2, level, result)


def _cmd_sweep(args) -> int:
    cfg = _apply_overrides(ProblemConfig.load(args.config), args)
    if args.out is None:
        raise ConfigError("sweep requires --out OUTPUT_DIRECTORY")
    out_dir = Path(args.out)
    out_dir.mkdir(parents=True, exist_ok=True)
    axis1, vals1 = _parse_axis(args.axis)
    axis2, vals2 = (None, [None])
    if args.axis2 is not None:
        axis2, vals2 = _parse_axis(args.axis2)
        if axis2 == axis1:
            raise ConfigError("the two sweep axes must differ")

    tasks = [
        (i, j, cfg, axis1, v1, axis2, v2)
        for i, v1 in enumerate(vals1)
        for j, v2 in enumerate(vals2)
    ]
    if args.jobs > 1:
        with ProcessPoolExecutor(max_workers=args.jobs) as pool:
            results = list(pool.map(_sweep_cell, tasks))
    else:
        results = [_sweep_cell(t) for t in tasks]
    results.sort(key=lambda r: (r[0], r[1]))

    rows = []
    statuses = []
    for i, j, row, payload in results:
        rows.append(row)
        statuses.append(payload.get("kind"))
        name = f"cell_{i:03d}_{j:03d}.json"
        (out_dir / name).write_text(dumps(payload))
    (out_dir / "sweep.csv").write_text(sweep_csv(rows))
    print(
        f"sweep: {len(results)} cells -> {out_dir}/sweep.csv", file=sys.stderr
    )
    if any(s == "error" for s in statuses):
        return 3
    if any(s == "refusal" for s in statuses):
        return 2
    if all(r[5] == 2 for r in rows):
        return 0
    return 3


def main(argv=None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        if args.command == "check":
            return _cmd_check(args)
        if args.command == "solve":
            return _cmd_solve(args)
        return _cmd_sweep(args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 1
    except PKLaplaceError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    raise SystemExit(main())
