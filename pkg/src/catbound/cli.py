"""catbound command line: verify | sweep | optimize | construct.

Exit codes: 0 success, 1 failed check, 2 usage or I/O error, 3 optimizer
found no feasible restart.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from datetime import datetime, timezone

import numpy as np

from . import __version__
from . import catmodel as cm
from .checks import default_suite, state_file_checks
from .linalg import basis, random_orthonormal_pair
from .optimizer import OptimizerConfig, optimize, sweep_A
from .quantum import (
    bloch,
    density_to_json,
    ket_to_json,
    p_alive,
    p_dead,
    partial_trace_env,
)

EXIT_OK, EXIT_CHECK, EXIT_USAGE, EXIT_NOCONV = 0, 1, 2, 3


class UsageError(Exception):
    pass


def fmt_real(x: float) -> str:
    return format(float(x), ".17g")


def dumps(obj, indent: int = 2, _level: int = 0) -> str:
    """JSON with every float written at 17 significant digits."""
    pad = " " * (indent * (_level + 1))
    end = " " * (indent * _level)
    if isinstance(obj, (bool, np.bool_)) or obj is None:
        return json.dumps(None if obj is None else bool(obj))
    if isinstance(obj, (float, np.floating)):
        if not np.isfinite(obj):
            raise ValueError("non-finite float cannot be serialized")
        return fmt_real(obj)
    if isinstance(obj, (int, np.integer, str)):
        return json.dumps(obj if isinstance(obj, str) else int(obj))
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        items = (f"{pad}{json.dumps(str(k))}: {dumps(v, indent, _level + 1)}" for k, v in obj.items())
        return "{\n" + ",\n".join(items) + "\n" + end + "}"
    if isinstance(obj, (list, tuple)):
        if not obj:
            return "[]"
        if all(isinstance(v, (int, float, np.number)) and not isinstance(v, bool) for v in obj):
            return "[" + ", ".join(dumps(v) for v in obj) + "]"
        items = (pad + dumps(v, indent, _level + 1) for v in obj)
        return "[\n" + ",\n".join(items) + "\n" + end + "]"
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def manifest(subcommand: str, params: dict, seed: int | None) -> dict:
    return {
        "subcommand": subcommand,
        "parameters": params,
        "tool_version": __version__,
        "timestamp": datetime.now(timezone.utc).isoformat(timespec="seconds"),
        "master_seed": seed,
    }


def write_output(text: str, out: str) -> None:
    if out == "-":
        sys.stdout.write(text)
        return
    try:
        with open(out, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    except OSError as exc:
        raise UsageError(f"cannot write {out}: {exc}") from exc


def cmd_verify(args) -> int:
    if args.dim < 2:
        raise UsageError("--dim must be >= 2")
    checks = default_suite(args.dim, args.seed)
    if args.state_file is not None:
        try:
            with open(args.state_file, encoding="utf-8") as fh:
                obj = json.load(fh)
            checks += state_file_checks(obj)
        except (OSError, ValueError) as exc:
            raise UsageError(f"bad state file {args.state_file}: {exc}") from exc
    ok = all(c.passed for c in checks if c.gating)
    params = {"dim": args.dim, "state_file": args.state_file}
    report = {
        "manifest": manifest("verify", params, args.seed),
        "all_passed": ok,
        "checks": [c.to_dict() for c in checks],
    }
    write_output(dumps(report) + "\n", args.out)
    return EXIT_OK if ok else EXIT_CHECK


def cmd_sweep(args) -> int:
    if args.steps < 2:
        raise UsageError("--steps must be >= 2")
    rows = sweep_A(args.steps)
    columns = ["a", "lambda", "lambda_sq", "residual_eq7"]
    if args.format == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(columns)
        for row in rows:
            w.writerow([fmt_real(v) for v in row])
        text = buf.getvalue()
    else:
        params = {"steps": args.steps, "format": args.format}
        text = dumps(
            {
                "manifest": manifest("sweep", params, None),
                "columns": columns,
                "rows": [list(r) for r in rows],
            }
        ) + "\n"
    write_output(text, args.out)
    return EXIT_OK


def cmd_optimize(args) -> int:
    try:
        cfg = OptimizerConfig(
            env_dim=args.dim,
            restarts=args.restarts,
            master_seed=args.seed,
            tol_constraint=args.tol_constraint,
            penalty_rounds=args.penalty_rounds,
            max_iters_per_round=args.max_iters,
        )
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    res = optimize(cfg)
    chi1, chi2 = res.params
    payload = {
        "manifest": manifest("optimize", cfg.__dict__.copy(), args.seed),
        "best_objective": res.best_objective,
        "best_p_alive": res.best_p_alive,
        "params": {
            "chi1": ket_to_json(chi1),
            "chi2": ket_to_json(chi2),
            "raw": [float(v) for v in res.raw_params],
        },
        "report": res.report.to_dict(),
        "restart_index": res.restart_index,
        "iterations_total": res.iterations_total,
        "converged": res.converged,
    }
    write_output(dumps(payload) + "\n", args.out)
    return EXIT_OK if res.converged else EXIT_NOCONV


def construct_bundle(dim: int, use_basis: bool, seed: int) -> dict:
    if dim < 2:
        raise UsageError("--dim must be >= 2")
    if use_basis:
        psi1, psi2 = basis(dim, 0), basis(dim, 1)
    else:
        psi1, psi2 = random_orthonormal_pair(dim, np.random.default_rng(seed))
    kets = dict(zip(("chi", "chi1", "chi2"), cm.construct_optimal(dim, psi1, psi2)))
    rhos = {n: partial_trace_env(k) for n, k in kets.items()}
    report = cm.check_constraints(kets["chi1"], kets["chi2"])
    return {
        "env_dim": dim,
        "psi_source": "basis" if use_basis else "seed",
        "kets": {n: ket_to_json(k) for n, k in kets.items()},
        "reduced_density": {n: density_to_json(r) for n, r in rhos.items()},
        "bloch": {n: list(bloch(r).as_array()) for n, r in rhos.items()},
        "p_alive": {n: p_alive(r) for n, r in rhos.items()},
        "p_dead": {n: p_dead(r) for n, r in rhos.items()},
        "report": report.to_dict(),
    }


def cmd_construct(args) -> int:
    bundle = construct_bundle(args.dim, args.basis, args.seed)
    params = {"dim": args.dim, "basis": args.basis}
    payload = {"manifest": manifest("construct", params, None if args.basis else args.seed)}
    payload.update(bundle)
    write_output(dumps(payload) + "\n", args.out)
    return EXIT_OK


def _seed(text: str) -> int:
    v = int(text)
    if not 0 <= v < 2**64:
        raise argparse.ArgumentTypeError("seed must be a 64-bit unsigned integer")
    return v


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="catbound", description=__doc__.splitlines()[0])
    p.add_argument("--version", action="version", version=__version__)
    sub = p.add_subparsers(dest="command", required=True)

    v = sub.add_parser("verify", help="run the verification suite")
    v.add_argument("--dim", type=int, default=2)
    v.add_argument("--seed", type=_seed, default=0)
    v.add_argument("--state-file", default=None, help="ket or construct bundle to check")
    v.add_argument("--out", default="-")
    v.set_defaults(func=cmd_verify)

    s = sub.add_parser("sweep", help="tabulate lambda over the overlap range [-2, 2]")
    s.add_argument("--steps", type=int, default=101)
    s.add_argument("--format", choices=("csv", "json"), default="csv")
    s.add_argument("--out", default="-")
    s.set_defaults(func=cmd_sweep)

    o = sub.add_parser("optimize", help="numerically maximize the alive probability")
    o.add_argument("--dim", type=int, default=2)
    o.add_argument("--restarts", type=int, default=32)
    o.add_argument("--seed", type=_seed, default=0)
    o.add_argument("--tol-constraint", type=float, default=1e-8)
    o.add_argument("--penalty-rounds", type=int, default=5)
    o.add_argument("--max-iters", type=int, default=2000)
    o.add_argument("--out", default="-")
    o.set_defaults(func=cmd_optimize)

    c = sub.add_parser("construct", help="emit the optimal triple")
    c.add_argument("--dim", type=int, default=2)
    g = c.add_mutually_exclusive_group()
    g.add_argument("--basis", action="store_true", help="use the first two basis vectors")
    g.add_argument("--seed", type=_seed, default=0, help="seed for a random orthonormal pair")
    c.add_argument("--out", default="-")
    c.set_defaults(func=cmd_construct)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"catbound {args.command}: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
