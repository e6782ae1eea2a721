"""Command-line front end: scans, boundary curves, and witness verification.

All data files are deterministic: fixed 12-significant-digit float formatting,
comma-separated with LF line endings, rows in gamma-major grid order, and no
timestamps (run metadata goes to a ``<out>.meta.json`` sidecar). The gamma axis
is parameterized by e^{-gamma} in (0, 1] throughout, matching the region
diagrams.

Exit codes: 0 success, 1 usage error, 2 verification failure, 3 solver
undecided.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from . import __version__
from .antideg import eta_d, theta, theta_boundary
from .capacity import classify_point, coherent_info_two_level, max_coherent_info_p, ppt_min_eigenvalue
from .channels import ChannelParams
from .extendibility import Status, lambda_d_detail
from .witnesses import RegionError, build_two_extension, verify_antidegrading

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_VERIFICATION = 2
EXIT_UNDECIDED = 3


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # argparse defaults to exit code 2
        raise UsageError(message)


def fmt(x: float | None) -> str:
    if x is None:
        return ""
    return f"{x:.12g}"


@dataclass
class ScanConfig:
    """Grid and tolerance settings shared by the scan/curve commands."""

    lambda_min: float = 0.01
    lambda_max: float = 0.99
    lambda_steps: int = 60
    eg_min: float = 0.05
    eg_max: float = 0.95
    eg_steps: int = 60
    d: int = 30
    d_list: tuple[int, ...] | None = None
    tol_psd: float = 1e-9
    eps_feas: float = 1e-7
    bisection_tol: float = 1e-3
    eta_bisection_tol: float = 1e-4
    max_iter: int = 50000
    workers: int = 1
    out: str = "out.csv"

    def __post_init__(self):
        if self.lambda_steps < 2 or self.eg_steps < 2:
            raise UsageError("grid steps must be >= 2")
        if not (0.0 <= self.lambda_min <= self.lambda_max <= 1.0):
            raise UsageError("lambda range must satisfy 0 <= min <= max <= 1")
        if not (0.0 < self.eg_min <= self.eg_max <= 1.0):
            raise UsageError("e^-gamma range must lie in (0, 1]")
        if min(self.tol_psd, self.eps_feas, self.bisection_tol) <= 0:
            raise UsageError("tolerances must be > 0")

    def lambda_grid(self) -> np.ndarray:
        return np.linspace(self.lambda_min, self.lambda_max, self.lambda_steps)

    def eg_grid(self) -> np.ndarray:
        return np.linspace(self.eg_min, self.eg_max, self.eg_steps)


_CONFIG_FLOAT_KEYS = {
    "lambda_min", "lambda_max", "eg_min", "eg_max",
    "tol_psd", "eps_feas", "bisection_tol", "eta_bisection_tol",
}
_CONFIG_INT_KEYS = {"lambda_steps", "eg_steps", "d", "max_iter", "workers"}


def load_config_file(path: str) -> dict:
    """Flat key-value config: one `key = value` per line, '#' comments."""
    values: dict = {}
    with open(path, "r", encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, 1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise UsageError(f"{path}:{lineno}: expected 'key = value'")
            key, _, value = line.partition("=")
            key = key.strip().replace("-", "_")
            value = value.strip()
            if key in _CONFIG_FLOAT_KEYS:
                values[key] = float(value)
            elif key in _CONFIG_INT_KEYS:
                values[key] = int(value)
            elif key == "d_list":
                values[key] = tuple(int(v) for v in value.split(","))
            elif key == "out":
                values[key] = value
            else:
                raise UsageError(f"{path}:{lineno}: unknown config key '{key}'")
    return values


def build_scan_config(args: argparse.Namespace) -> ScanConfig:
    """Apply precedence: command-line flags > config file > defaults."""
    values: dict = {}
    if getattr(args, "config", None):
        values.update(load_config_file(args.config))
    for key in (
        "lambda_min", "lambda_max", "lambda_steps", "eg_min", "eg_max",
        "eg_steps", "d", "bisection_tol", "eta_bisection_tol", "eps_feas",
        "max_iter", "workers", "out",
    ):
        flag = getattr(args, key, None)
        if flag is not None:
            values[key] = flag
    if getattr(args, "d_values", None):
        values["d_list"] = tuple(int(v) for v in args.d_values.split(","))
    env_workers = os.environ.get("LDA_WORKERS")
    if env_workers:
        values["workers"] = int(env_workers)
    return ScanConfig(**values)


def write_csv(path: str, header: list[str], rows: list[list[str]], meta: dict) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(",".join(header) + "\n")
        for row in rows:
            fh.write(",".join(row) + "\n")
    sidecar = {
        "generator": f"lossdeph {__version__}",
        "written_at": time.strftime("%Y-%m-%dT%H:%M:%SZ", time.gmtime()),
        **meta,
    }
    with open(path + ".meta.json", "w", encoding="utf-8") as fh:
        json.dump(sidecar, fh, indent=2, sort_keys=True)
        fh.write("\n")


def _scan_point(task: tuple[float, float, int]) -> list[str]:
    eg, lam, d = task
    gamma = -math.log(eg)
    verdict = classify_point(lam, gamma, d=d)
    ppt = ppt_min_eigenvalue(lam, gamma, 0.5)
    from .antideg import simple_condition  # local import keeps workers cheap

    return [
        fmt(eg),
        fmt(lam),
        verdict.thm1.verdict.value,
        "true" if simple_condition(lam, gamma) else "false",
        verdict.qubit.verdict.value,
        fmt(verdict.a_min_eig),
        fmt(verdict.ic_star),
        fmt(verdict.p_star),
        fmt(ppt),
        verdict.label,
    ]


def _map_tasks(fn, tasks, workers: int):
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            return list(pool.map(fn, tasks, chunksize=8))
    return [fn(t) for t in tasks]


def cmd_scan_region(args) -> int:
    config = build_scan_config(args)
    tasks = [
        (float(eg), float(lam), config.d)
        for eg in config.eg_grid()
        for lam in config.lambda_grid()
    ]
    rows = _map_tasks(_scan_point, tasks, config.workers)
    header = [
        "e_minus_gamma", "lambda", "thm1_verdict", "simple_cond", "qubit_verdict",
        "A_d_min_eig", "Ic_star", "p_star", "ppt_min_eig", "composite_label",
    ]
    write_csv(config.out, header, rows, {"command": "scan-region", "config": vars(config) | {"d_list": list(config.d_list or ())}})
    return EXIT_OK


def _eta_point(task: tuple[float, int, float]) -> list[str]:
    eg, d, tol = task
    gamma = -math.log(eg)
    return [
        fmt(eg),
        str(d),
        fmt(eta_d(gamma, d, tol)),
        fmt(theta_boundary(gamma)),
        fmt(1.0 / (1.0 + eg)),
    ]


def cmd_eta_curve(args) -> int:
    config = build_scan_config(args)
    d_list = config.d_list or (5, 10, 20, 30)
    tasks = [
        (float(eg), int(d), config.eta_bisection_tol)
        for eg in config.eg_grid()
        for d in d_list
    ]
    rows = _map_tasks(_eta_point, tasks, config.workers)
    header = ["e_minus_gamma", "d", "eta_d", "theta_boundary", "conjecture"]
    write_csv(config.out, header, rows, {"command": "eta-curve", "config": vars(config) | {"d_list": list(d_list)}})
    return EXIT_OK


def _lambda_point(task: tuple[float, int, float, float, int]) -> tuple[list[str], bool]:
    eg, d, tol, eps_feas, max_iter = task
    gamma = -math.log(eg)
    point = lambda_d_detail(gamma, d, tol=tol, eps_feas=eps_feas, max_iter=max_iter)
    undecided = point.status is Status.UNDECIDED
    row = [
        fmt(eg),
        str(d),
        fmt(point.value),
        "undecided" if undecided else "ok",
        fmt(point.residual if math.isfinite(point.residual) else None),
    ]
    return row, undecided


def cmd_lambda_curve(args) -> int:
    config = build_scan_config(args)
    d_list = config.d_list or (2, 3)
    tasks = [
        (float(eg), int(d), config.bisection_tol, config.eps_feas, config.max_iter)
        for eg in config.eg_grid()
        for d in d_list
    ]
    results = _map_tasks(_lambda_point, tasks, config.workers)
    rows = [row for row, _ in results]
    any_undecided = any(flag for _, flag in results)
    header = ["e_minus_gamma", "d", "lambda_d", "status", "residual"]
    write_csv(config.out, header, rows, {"command": "lambda-curve", "config": vars(config) | {"d_list": list(d_list)}})
    return EXIT_UNDECIDED if any_undecided else EXIT_OK


def cmd_verify(args) -> int:
    params = ChannelParams(args.lam, args.gamma, max(args.cutoff, 2))
    report: dict = {
        "lambda": args.lam,
        "gamma": args.gamma,
        "antideg_map_deviation": None,
        "extension_pt_deviation_B1": None,
        "extension_pt_deviation_B2": None,
        "extension_min_eig": None,
        "region": None,
    }
    try:
        deviation = verify_antidegrading(params, args.cutoff)
    except RegionError:
        report["region"] = "none"
        report["reason"] = "outside proven anti-degradable region"
        print(json.dumps(report, indent=2))
        return EXIT_VERIFICATION
    report["antideg_map_deviation"] = deviation
    ok = deviation <= 1e-6
    if params.lam <= 0.5:
        report["region"] = "i"
    else:
        report["region"] = "ii"
        ext = build_two_extension(
            ChannelParams(params.lam, params.gamma, args.ext_cutoff), args.r
        )
        report["extension_pt_deviation_B1"] = ext.pt_deviation_b1
        report["extension_pt_deviation_B2"] = ext.pt_deviation_b2
        report["extension_min_eig"] = ext.psd_margin()
        ok = ok and max(ext.pt_deviation_b1, ext.pt_deviation_b2) <= 1e-6
    print(json.dumps(report, indent=2))
    return EXIT_OK if ok else EXIT_VERIFICATION


def cmd_coherent_info(args) -> int:
    if args.p is not None:
        print(fmt(coherent_info_two_level(args.lam, args.gamma, args.p)))
    else:
        p_star, ic_star = max_coherent_info_p(args.lam, args.gamma)
        print(f"{fmt(p_star)} {fmt(ic_star)}")
    return EXIT_OK


def cmd_ppt(args) -> int:
    print(fmt(ppt_min_eigenvalue(args.lam, args.gamma, args.ns)))
    return EXIT_OK


def cmd_theta(args) -> int:
    print(fmt(theta(args.x, args.y)))
    return EXIT_OK


def _add_grid_flags(p: _Parser) -> None:
    p.add_argument("--config", help="flat key-value config file")
    p.add_argument("--out", help="output CSV path")
    p.add_argument("--lambda-min", dest="lambda_min", type=float)
    p.add_argument("--lambda-max", dest="lambda_max", type=float)
    p.add_argument("--lambda-steps", dest="lambda_steps", type=int)
    p.add_argument("--eg-min", dest="eg_min", type=float)
    p.add_argument("--eg-max", dest="eg_max", type=float)
    p.add_argument("--eg-steps", dest="eg_steps", type=int)
    p.add_argument("--d", dest="d", type=int)
    p.add_argument("--d-values", dest="d_values", help="comma-separated d list")
    p.add_argument("--bisection-tol", dest="bisection_tol", type=float)
    p.add_argument("--eta-bisection-tol", dest="eta_bisection_tol", type=float)
    p.add_argument("--eps-feas", dest="eps_feas", type=float)
    p.add_argument("--max-iter", dest="max_iter", type=int)
    p.add_argument("--workers", dest="workers", type=int)


def build_parser() -> _Parser:
    parser = _Parser(prog="lossdeph", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("scan-region", help="classify a (lambda, e^-gamma) grid to CSV")
    _add_grid_flags(p)
    p.set_defaults(func=cmd_scan_region)

    p = sub.add_parser("eta-curve", help="A-matrix PSD boundary curves eta_d to CSV")
    _add_grid_flags(p)
    p.set_defaults(func=cmd_eta_curve)

    p = sub.add_parser("lambda-curve", help="qudit anti-degradability boundaries lambda_d to CSV")
    _add_grid_flags(p)
    p.set_defaults(func=cmd_lambda_curve)

    p = sub.add_parser("verify", help="verify the explicit anti-degrading map / extension")
    p.add_argument("--lam", type=float, required=True)
    p.add_argument("--gamma", type=float, required=True)
    p.add_argument("--cutoff", type=int, default=8)
    p.add_argument("--ext-cutoff", dest="ext_cutoff", type=int, default=12)
    p.add_argument("--r", type=float, default=0.5)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("coherent-info", help="two-level coherent information")
    p.add_argument("--lam", type=float, required=True)
    p.add_argument("--gamma", type=float, required=True)
    p.add_argument("--p", type=float, default=None, help="input weight; omit to maximize")
    p.set_defaults(func=cmd_coherent_info)

    p = sub.add_parser("ppt", help="partial-transpose minimum eigenvalue")
    p.add_argument("--lam", type=float, required=True)
    p.add_argument("--gamma", type=float, required=True)
    p.add_argument("--ns", type=float, default=0.5)
    p.set_defaults(func=cmd_ppt)

    p = sub.add_parser("theta", help="evaluate the theta series")
    p.add_argument("--x", type=float, required=True)
    p.add_argument("--y", type=float, required=True)
    p.set_defaults(func=cmd_theta)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        return args.func(args)
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except RuntimeError as exc:
        print(f"solver undecided: {exc}", file=sys.stderr)
        return EXIT_UNDECIDED


if __name__ == "__main__":
    sys.exit(main())
