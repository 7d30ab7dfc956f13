"""Command-line front end.

    twoterm solve        --config run.ini [--format json|csv] [--out PATH]
    twoterm wavefunction --config run.ini [--n N --angular L]
    twoterm verify       [--config run.ini]
    twoterm sweep        --config run.ini

Exit codes: 0 ok, 1 configuration error, 2 solver diagnostic,
3 verification failure.

CSV columns, in order:

    solve         n, ell_or_kappa, component, E, residual, A1, A2, A3sq, D, status
    sweep         <param>, then the solve columns
    wavefunction  r, z, u            (kg)
                  r, z, f, g         (dirac)

Floats are written with 17 significant digits; missing values are empty in
CSV and null in JSON. Wavefunction CSV starts with one ``#`` line carrying
N, A1, D and E.
"""

from __future__ import annotations

import argparse
import io
import json
import math
import sys
from typing import Dict, List, Optional, Sequence

from .config import DEFAULT_CONFIG, ConfigError, RunConfig, load_config, parse_config, with_overrides
from .core import PoleError
from .spectrum import InvalidCoefficients, MultipleRoots, NoBoundState, SolverConfig, solve_level
from .wavefunction import NotNormalizable, dirac_pair, evaluate_on_grid, kg_wavefunction

EXIT_OK, EXIT_CONFIG, EXIT_SOLVER, EXIT_VERIFY = 0, 1, 2, 3

SOLVE_COLUMNS = ("n", "ell_or_kappa", "component", "E", "residual", "A1", "A2", "A3sq", "D", "status")


class SolverDiagnostic(RuntimeError):
    pass


def _num(x) -> Optional[float]:
    return float(x) if x is not None and math.isfinite(x) else None


def solve_record(cfg: RunConfig, n: int, angular: int, overrides=None) -> Dict:
    spec = cfg.spec(overrides)
    qn = cfg.quantum(n, angular)
    row = dict.fromkeys(SOLVE_COLUMNS)
    row.update(n=n, ell_or_kappa=angular, component="" if cfg.equation == "kg" else cfg.component)
    try:
        lvl = solve_level(spec, cfg.units, qn, cfg.solver)
    except NoBoundState:
        row["status"] = "no_bound_state"
        return row
    except MultipleRoots:
        row["status"] = "multiple_roots"
        return row
    except (InvalidCoefficients, PoleError, ArithmeticError):
        row["status"] = "error"
        return row
    c = lvl.coeffs
    row.update(
        E=_num(lvl.E), residual=_num(lvl.residual), A1=_num(c.A1), A2=_num(c.A2), A3sq=_num(c.A3sq), D=_num(c.D),
        status="ok",
    )
    return row


def _fmt(v) -> str:
    if v is None:
        return ""
    if isinstance(v, float):
        return f"{v:.17g}"
    return str(v)


def to_csv(columns: Sequence[str], rows: List[Dict], comment: Optional[str] = None) -> str:
    buf = io.StringIO()
    if comment:
        buf.write(f"# {comment}\n")
    buf.write(",".join(columns) + "\n")
    for row in rows:
        buf.write(",".join(_fmt(row[c]) for c in columns) + "\n")
    return buf.getvalue()


def to_json(payload) -> str:
    return json.dumps(payload, indent=2, allow_nan=False) + "\n"


def _emit(text: str, path: str):
    if path in ("", "-"):
        sys.stdout.write(text)
    else:
        with open(path, "w", newline="") as fh:
            fh.write(text)


def _render(cfg: RunConfig, columns, rows, header: Optional[Dict] = None) -> str:
    if cfg.output_format == "csv":
        comment = ", ".join(f"{k}={_fmt(v)}" for k, v in header.items()) if header else None
        return to_csv(columns, rows, comment)
    payload = {}
    if header:
        payload["header"] = header
    payload["columns"] = list(columns)
    payload["records"] = [{c: row[c] for c in columns} for row in rows]
    return to_json(payload)


def _status_exit(rows) -> int:
    return EXIT_SOLVER if any(r["status"] not in ("ok", "no_bound_state") for r in rows) else EXIT_OK


def cmd_solve(cfg: RunConfig) -> int:
    rows = [solve_record(cfg, n, a) for n, a in cfg.pairs()]
    _emit(_render(cfg, SOLVE_COLUMNS, rows), cfg.output_path)
    return _status_exit(rows)


def cmd_sweep(cfg: RunConfig) -> int:
    if not cfg.sweep_param:
        raise ConfigError("sweep needs a [sweep] section with param and values")
    cols = (cfg.sweep_param,) + SOLVE_COLUMNS
    rows = []
    for value in cfg.sweep_values:
        try:
            cfg.spec({cfg.sweep_param: value})
        except ValueError as exc:
            raise ConfigError(f"[sweep] values: {cfg.sweep_param} = {value}: {exc}") from exc
        for n, a in cfg.pairs():
            row = solve_record(cfg, n, a, {cfg.sweep_param: value})
            row[cfg.sweep_param] = float(value)
            rows.append(row)
    _emit(_render(cfg, cols, rows), cfg.output_path)
    return _status_exit(rows)


def cmd_wavefunction(cfg: RunConfig, n: Optional[int] = None, angular: Optional[int] = None) -> int:
    n = n if n is not None else (cfg.wavefunction.n if cfg.wavefunction.n is not None else cfg.n_values[0])
    if angular is None:
        angular = cfg.wavefunction.angular if cfg.wavefunction.angular is not None else cfg.angular_values[0]
    if cfg.equation == "dirac" and cfg.component != "upper":
        raise ConfigError("wavefunction output for Dirac is built from the upper component; set component = upper")
    spec = cfg.spec()
    try:
        qn = cfg.quantum(n, angular)
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc
    try:
        lvl = solve_level(spec, cfg.units, qn, cfg.solver)
    except (NoBoundState, MultipleRoots) as exc:
        raise SolverDiagnostic(str(exc)) from exc
    r = cfg.wavefunction.radii()
    try:
        if cfg.equation == "kg":
            u = kg_wavefunction(spec, cfg.units, lvl)
            z = u.z_of_r(r)
            cols, data, N = ("r", "z", "u"), [r, z, evaluate_on_grid(u, r)], u.norm
        else:
            f, g = dirac_pair(spec, cfg.units, lvl)
            z = f.z_of_r(r)
            cols, data, N = ("r", "z", "f", "g"), [r, z, evaluate_on_grid(f, r), evaluate_on_grid(g, r)], f.norm
    except (PoleError, NotNormalizable, FloatingPointError) as exc:
        raise SolverDiagnostic(str(exc)) from exc
    rows = [dict(zip(cols, map(float, vals))) for vals in zip(*data)]
    header = {
        "n": n,
        "ell_or_kappa": angular,
        "N": float(N),
        "A1": float(lvl.coeffs.A1),
        "D": float(lvl.coeffs.D),
        "E": float(lvl.E),
    }
    _emit(_render(cfg, cols, rows, header), cfg.output_path)
    return EXIT_OK


def cmd_verify(cfg: RunConfig, inject_fault: bool = False, only: Optional[List[str]] = None) -> int:
    from .acceptance import run_all

    solver = SolverConfig(cfg.solver.grid, cfg.solver.tol, cfg.solver.margin, -1 if inject_fault else 1)
    results = run_all(solver, only=only)
    lines = [r.line() for r in results]
    failed = [r.key for r in results if not r.passed]
    lines.append(f"{len(results) - len(failed)}/{len(results)} criteria passed")
    if failed:
        lines.append("failed: " + ", ".join(failed))
    report = "\n".join(lines) + "\n"
    sys.stdout.write(report)
    if cfg.output_path not in ("", "-"):
        payload = {
            "criteria": [
                {"key": r.key, "passed": r.passed, "measured": _num(r.measured), "tolerance": r.tolerance, "detail": r.detail}
                for r in results
            ]
        }
        _emit(to_json(payload), cfg.output_path)
    return EXIT_VERIFY if failed else EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="INI run configuration")
    common.add_argument("--format", choices=("json", "csv"), help="output format (overrides [output] format)")
    common.add_argument("--out", help="output path, '-' for stdout (overrides [output] path)")
    common.add_argument("--equation", choices=("kg", "dirac"), help="overrides [quantum] equation")
    common.add_argument("--tol", type=float, help="root tolerance relative to mc^2 (overrides [solver] tol)")

    p = argparse.ArgumentParser(prog="twoterm", description="Bound states of the two-term exponential potential.")
    sub = p.add_subparsers(dest="command", required=True)
    sub.add_parser("solve", parents=[common], help="energies for every (n, angular) pair")
    w = sub.add_parser("wavefunction", parents=[common], help="tabulate one radial wavefunction")
    w.add_argument("--n", type=int)
    w.add_argument("--angular", type=int, help="ell for kg, kappa for dirac")
    v = sub.add_parser("verify", parents=[common], help="run the acceptance criteria")
    v.add_argument("--only", action="append", help="run only the named criterion (repeatable)")
    v.add_argument("--inject-fault", action="store_true", help=argparse.SUPPRESS)
    sub.add_parser("sweep", parents=[common], help="solve over the [sweep] parameter values")
    return p


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        cfg = load_config(args.config) if args.config else parse_config(DEFAULT_CONFIG)
        cfg = with_overrides(cfg, equation=args.equation, tol=args.tol, fmt=args.format, out=args.out)
        if args.command == "solve":
            return cmd_solve(cfg)
        if args.command == "sweep":
            return cmd_sweep(cfg)
        if args.command == "wavefunction":
            return cmd_wavefunction(cfg, args.n, args.angular)
        return cmd_verify(cfg, inject_fault=args.inject_fault, only=args.only)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except SolverDiagnostic as exc:
        print(f"solver: {exc}", file=sys.stderr)
        return EXIT_SOLVER


if __name__ == "__main__":
    sys.exit(main())
