import argparse
import math
import os
import random
import sys
from dataclasses import dataclass
from typing import Callable, Dict, List, Optional

import numpy as np
from rich.console import Console
from rich.table import Table

sys.path.append(os.path.dirname(__file__))

from conf import (
    DEFAULT_JOBS,
    DEFAULT_OUTPUT_FORMAT,
    DEFAULT_PRECISION_BITS,
    DEFAULT_TOL,
    EXPORT_KINDS,
    EXPORT_RESULT_PATH,
    GAMMA_CHECK_SAMPLES,
    ORACLE_POINTS,
    ORACLE_SLACK,
    RESULT_BASE_PATH,
    SIMPLICITY_FACTOR,
    VERIFY_CHECKS,
    VERIFY_LAMBDAS,
    VERIFY_RESULT_PATH,
    WINDING_TOL,
)
from critzeros import (
    bracket_sign,
    e2_line_zero,
    expected_g_signs,
    interior_arc_count,
    line_endpoint_zero,
    locate_arc_zeros,
    locate_line_zeros,
    sign_machinery,
)
from numkernel import DomainError, EiscritError, EvalBudget, eval_hk, eval_hk_lattice
from phimap import (
    SAMPLE_CASES,
    UnimodularMatrix,
    band_signs,
    expected_band_sign,
    expected_limit_signs,
    expected_w_endpoint,
    parse_lambda,
    pole_limit_signs,
    pole_table,
    sample_matrix,
    solve_phi_eq,
    total_line_count,
    trace_locus,
    trajectory,
    v_table,
    w_table,
    zeros_in_gamma_D,
)
from utils import run_in_parallel, set_level, write_csv, write_json
from winding import (
    compute_A,
    compute_B,
    contour_count_I,
    expected_A,
    expected_B,
    expected_I,
    gk_curve,
)

REPORT_HEADER = ["check", "k", "expected", "observed", "status"]
PASS, FAIL = "PASS", "FAIL"


@dataclass(frozen=True)
class RunConfig:
    k_values: List[int]
    precision_bits: int
    tol: float
    output_format: str
    output_path: str
    jobs: int
    quiet: bool = False

    @property
    def budget(self) -> EvalBudget:
        return EvalBudget.for_signs(self.precision_bits)


def parse_k_range(text: str) -> List[int]:
    """'12' or '4..60' (both ends even, at least 4)."""
    try:
        lo, _, hi = text.partition("..")
        lo, hi = int(lo), int(hi or lo)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected an even k or a range a..b, got {text!r}")
    if lo % 2 or hi % 2 or lo < 4 or hi < lo:
        raise argparse.ArgumentTypeError(f"k bounds must be even, >= 4 and increasing: {text!r}")
    return list(range(lo, hi + 1, 2))


def parse_checks(text: str) -> List[str]:
    checks = [name.strip() for name in text.split(",") if name.strip()]
    unknown = [name for name in checks if name not in VERIFY_CHECKS]
    if unknown or not checks:
        raise argparse.ArgumentTypeError(f"unknown checks {unknown}; choose from {VERIFY_CHECKS}")
    return checks


def parse_lambda_arg(text: str):
    try:
        return parse_lambda(text)
    except DomainError as error:
        raise argparse.ArgumentTypeError(str(error))


def parse_gamma_arg(text: str) -> UnimodularMatrix:
    try:
        return UnimodularMatrix.from_text(text)
    except DomainError as error:
        raise argparse.ArgumentTypeError(str(error))


def parse_args(argv: Optional[List[str]] = None):
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--k", type=parse_k_range, default=parse_k_range("12"))
    common.add_argument("--tol", type=float, default=DEFAULT_TOL)
    common.add_argument("--precision-bits", type=int, default=DEFAULT_PRECISION_BITS)
    common.add_argument("--format", choices=["json", "csv"], default=DEFAULT_OUTPUT_FORMAT)
    common.add_argument("--out", type=str, default=None)
    common.add_argument("--jobs", type=int, default=DEFAULT_JOBS)
    common.add_argument("--quiet", action="store_true")

    parser = argparse.ArgumentParser(
        description="Certified numerics for the critical points of Eisenstein series"
    )
    commands = parser.add_subparsers(dest="command", required=True)
    verify = commands.add_parser("verify", parents=[common])
    verify.add_argument("--checks", type=parse_checks, default=list(VERIFY_CHECKS))
    export = commands.add_parser("export", parents=[common])
    export.add_argument("kind", choices=list(EXPORT_KINDS))
    solve = commands.add_parser("phi-solve", parents=[common])
    solve.add_argument("--lambda", dest="lam", type=parse_lambda_arg, required=True)
    count = commands.add_parser("gamma-count", parents=[common])
    count.add_argument("--gamma", type=parse_gamma_arg, required=True)

    args = parser.parse_args(argv)
    if args.jobs < 1:
        parser.error("--jobs must be at least 1")
    return args


def _config(opts: argparse.Namespace, default_path: str) -> RunConfig:
    return RunConfig(
        k_values=opts.k,
        precision_bits=opts.precision_bits,
        tol=opts.tol,
        output_format=opts.format,
        output_path=opts.out or default_path,
        jobs=opts.jobs,
        quiet=opts.quiet,
    )


def _write(rows: List[Dict], header: List[str], path: str, output_format: str):
    os.makedirs(os.path.dirname(path) or ".", exist_ok=True)
    if output_format == "csv":
        write_csv(([row[name] for name in header] for row in rows), header, path)
    else:
        write_json(rows, path)


def _close(expected: float, observed: float) -> bool:
    return math.isclose(expected, observed, rel_tol=0, abs_tol=WINDING_TOL)


# each check returns (expected, observed, passed)
def check_line_zero_count(k: int, config: RunConfig):
    observed = len(locate_line_zeros(k, config.budget))
    return (k - 4) // 6, observed, observed == (k - 4) // 6


def check_line_endpoint(k: int, config: RunConfig):
    observed = line_endpoint_zero(k, config.budget) is not None
    return k % 6 == 2, observed, observed == (k % 6 == 2)


def check_bracket_signs(k: int, config: RunConfig):
    ms = range(1, (k + 1) // 6 + 1)
    observed = [bracket_sign(k, m, budget=config.budget).sign for m in ms]
    expected = [(-1) ** m for m in ms]
    return expected, observed, observed == expected


def check_arc_zero_count(k: int, config: RunConfig):
    records = locate_arc_zeros(k, config.budget)
    observed = sum(record.kind == "arc" for record in records)
    return interior_arc_count(k), observed, observed == interior_arc_count(k)


def check_arc_g_signs(k: int, config: RunConfig):
    observed = [record.g_sign for record in locate_arc_zeros(k, config.budget)]
    return expected_g_signs(k), observed, observed == expected_g_signs(k)


def check_winding_A(k: int, config: RunConfig):
    observed = compute_A(k, config.tol, config.budget)
    return expected_A(k), observed, _close(expected_A(k), observed)


def check_winding_B(k: int, config: RunConfig):
    observed = compute_B(k, config.tol, config.budget)
    return expected_B(k), observed, _close(expected_B(k), observed)


def check_winding_consistency(k: int, config: RunConfig):
    """A = B - (k + 2) pi / 6."""
    a = compute_A(k, config.tol, config.budget)
    b = compute_B(k, config.tol, config.budget)
    observed = a - b
    expected = -(k + 2) * math.pi / 6
    return expected, observed, _close(expected, observed)


def check_contour_count_I(k: int, config: RunConfig):
    observed = contour_count_I(k, budget=config.budget)
    return expected_I(k), observed, _close(expected_I(k), observed)


def check_pole_interleaving(k: int, config: RunConfig):
    table = pole_table(k, config.tol, config.budget)
    return (k - 4) // 6, table.n, table.n == (k - 4) // 6


def check_w_endpoints(k: int, config: RunConfig):
    observed = float(w_table(k, config.budget).values[-1])
    return expected_w_endpoint(k), observed, _close(expected_w_endpoint(k), observed)


def check_phi_counts(k: int, config: RunConfig):
    table = pole_table(k, config.tol, config.budget)
    curves = trace_locus(k, config.budget, table)
    lambdas = [parse_lambda(text) for text in VERIFY_LAMBDAS]
    expected = [(k + 2) // 6 if abs(lam) >= 1 else 0 for lam in lambdas]
    observed = [
        len(solve_phi_eq(k, lam, config.budget, curves=curves, table=table, tol=config.tol))
        for lam in lambdas
    ]
    return expected, observed, observed == expected


def check_total_line_count(k: int, config: RunConfig):
    observed = total_line_count(k, config.budget)
    expected = 1 + 2 * ((k - 2) // 6)
    return expected, observed, observed == expected


def check_bracket_signs_lattice(k: int, config: RunConfig):
    ms = range(1, (k + 1) // 6 + 1)
    observed = [bracket_sign(k, m, route="lattice", budget=config.budget).sign for m in ms]
    expected = [(-1) ** m for m in ms]
    return expected, observed, observed == expected


def check_sign_machinery(k: int, config: RunConfig):
    reports = [sign_machinery(k, m, config.budget) for m in range(1, (k + 1) // 6 + 1)]
    failed = [f"m={r.m} {name}" for r in reports for name, ok in r.checks.items() if not ok]
    return [], failed, not failed


def check_band_signs(k: int, config: RunConfig):
    table = pole_table(k, config.tol, config.budget)
    observed = band_signs(k, table, config.budget)
    expected = [{expected_band_sign(k, m)} for m in range(1, table.n + 2)]
    return [sorted(s) for s in expected], [sorted(s) for s in observed], observed == expected


def check_pole_limit_signs(k: int, config: RunConfig):
    table = pole_table(k, config.tol, config.budget)
    observed = pole_limit_signs(k, table, config.budget)
    expected = [expected_limit_signs(k, m) for m in range(1, table.n + 1)]
    return expected, observed, observed == expected


def check_w_monotone(k: int, config: RunConfig):
    steps = np.diff(w_table(k, config.budget).values)
    observed = int(np.sum(steps <= 0))
    return 0, observed, observed == 0


def check_gamma_transport(k: int, config: RunConfig):
    """A few sampled translates per case: (k + 2) // 6 zeros unless |d| < |c|."""
    rng = random.Random(k)
    table = pole_table(k, config.tol, config.budget)
    curves = trace_locus(k, config.budget, table)
    expected, observed = [], []
    for case in SAMPLE_CASES:
        for _ in range(GAMMA_CHECK_SAMPLES):
            gamma = sample_matrix(case, rng)
            zeros = zeros_in_gamma_D(k, gamma, config.budget, curves=curves, table=table)
            expected.append(0 if case == "d<c" else (k + 2) // 6)
            observed.append(len(zeros))
    return expected, observed, observed == expected


def check_hk_oracle(k: int, config: RunConfig):
    """q-series against lattice sum for h_k at fixed points of D."""
    worst = 0.0
    for z in ORACLE_POINTS:
        series = eval_hk(k, z, config.budget)
        lattice = eval_hk_lattice(k, z, config.budget)
        gap = abs(series.value - lattice.value)
        allowed = series.tail_bound + lattice.tail_bound + ORACLE_SLACK * max(1, abs(series.value))
        worst = max(worst, float(gap / allowed))
    return "<= 1", worst, worst <= 1


def check_simplicity_margins(k: int, config: RunConfig):
    records = locate_line_zeros(k, config.budget, include_endpoint=True)
    weak = [
        float(record.location.im)
        for record in records
        if not record.simplicity_margin > SIMPLICITY_FACTOR * record.residual
    ]
    return [], weak, not weak


def check_e2_line_zero(k: int, config: RunConfig):
    """Weight independent: the simple zero of E_2 on the imaginary axis."""
    record = e2_line_zero(budget=config.budget)
    passed = record.residual <= config.tol and record.simplicity_margin > 0
    return f"<= {config.tol}", record.residual, passed


CHECKS: Dict[str, Callable] = {
    "line_zero_count": check_line_zero_count,
    "line_endpoint": check_line_endpoint,
    "bracket_signs": check_bracket_signs,
    "arc_zero_count": check_arc_zero_count,
    "arc_g_signs": check_arc_g_signs,
    "winding_A": check_winding_A,
    "winding_B": check_winding_B,
    "winding_consistency": check_winding_consistency,
    "contour_count_I": check_contour_count_I,
    "pole_interleaving": check_pole_interleaving,
    "w_endpoints": check_w_endpoints,
    "phi_counts": check_phi_counts,
    "total_line_count": check_total_line_count,
    "bracket_signs_lattice": check_bracket_signs_lattice,
    "sign_machinery": check_sign_machinery,
    "band_signs": check_band_signs,
    "pole_limit_signs": check_pole_limit_signs,
    "w_monotone": check_w_monotone,
    "gamma_transport": check_gamma_transport,
    "hk_oracle": check_hk_oracle,
    "simplicity_margins": check_simplicity_margins,
    "e2_line_zero": check_e2_line_zero,
}


def _plain(value):
    """Keep JSON-friendly values, render anything else as text."""
    if value is None or isinstance(value, (bool, int, float, str)):
        return value
    if isinstance(value, (list, tuple)):
        return [_plain(v) for v in value]
    return str(value)


def run_check(name: str, k: int, config: RunConfig) -> Dict:
    try:
        expected, observed, passed = CHECKS[name](k, config)
    except EiscritError as error:
        expected = _plain(getattr(error, "expected", None))
        observed = f"{type(error).__name__}: {error}"
        passed = False
    return {
        "check": name,
        "k": k,
        "expected": expected,
        "observed": observed,
        "status": PASS if passed else FAIL,
    }


def cmd_verify(config: RunConfig, checks: List[str]) -> int:
    def verify_one(k: int) -> List[Dict]:
        return [run_check(name, k, config) for name in checks]

    per_k = run_in_parallel(
        verify_one, config.k_values, config.jobs, desc="verify", verbose=not config.quiet
    )
    rows = sorted((row for rows in per_k for row in rows), key=lambda r: (r["k"], r["check"]))
    for row in rows:
        print(
            f"k={row['k']} {row['check']}: expected {row['expected']} "
            f"observed {row['observed']} [{row['status']}]"
        )
    path = os.path.join(config.output_path, f"report.{config.output_format}")
    _write(rows, REPORT_HEADER, path, config.output_format)

    failures = [row for row in rows if row["status"] == FAIL]
    if failures:
        table = Table(title=f"{len(failures)} failed checks")
        for name in REPORT_HEADER:
            table.add_column(name)
        for row in failures:
            table.add_row(*(str(row[name]) for name in REPORT_HEADER))
        Console(stderr=True).print(table)
    print(f"{len(rows) - len(failures)}/{len(rows)} checks passed, report in {path}")
    return 1 if failures else 0


def _split_bracket(row: Dict) -> Dict:
    row = dict(row)
    lo, hi = row.pop("bracket")
    row["bracket_lo"], row["bracket_hi"] = lo, hi
    return row


LINE_ZERO_HEADER = ["k", "kind", "re", "im", "residual", "margin", "bracket_lo", "bracket_hi"]
ARC_ZERO_HEADER = [
    "k",
    "kind",
    "index",
    "theta",
    "residual",
    "g_sign",
    "order",
    "bracket_lo",
    "bracket_hi",
]
TRACE_HEADER = ["parameter", "re", "im", "unwrapped_arg"]
TRAJECTORY_HEADER = ["segment", "parameter", "z_re", "z_im", "phi_re", "phi_im"]
LOCUS_HEADER = ["re", "im", "phi"]


def _export_locus(k: int, config: RunConfig) -> List[str]:
    paths = []
    for curve in trace_locus(k, config.budget, jobs=config.jobs):
        for suffix, image in (("", curve), ("_mirror", curve.mirrored())):
            path = os.path.join(
                config.output_path,
                f"{EXPORT_KINDS['locus']}_k{k}_gamma{curve.index}{suffix}.{config.output_format}",
            )
            if config.output_format == "csv":
                rows = [
                    {"re": float(p.re), "im": float(p.im), "phi": float(value)}
                    for p, value in zip(image.polyline, image.phi_values)
                ]
                _write(rows, LOCUS_HEADER, path, "csv")
            else:
                _write(image.to_json(), LOCUS_HEADER, path, "json")
            paths.append(path)
    return paths


def export_rows(kind: str, k: int, config: RunConfig):
    """(rows, header) of one exported table."""
    budget = config.budget
    if kind == "line-zeros":
        records = locate_line_zeros(k, budget, include_endpoint=True)
        return [_split_bracket(record.to_row()) for record in records], LINE_ZERO_HEADER
    if kind == "arc-zeros":
        records = locate_arc_zeros(k, budget)
        return [_split_bracket(record.to_row()) for record in records], ARC_ZERO_HEADER
    if kind == "gk-curve":
        return gk_curve(k, budget).to_rows(), TRACE_HEADER
    if kind == "trajectory":
        return trajectory(k, budget=budget), TRAJECTORY_HEADER
    if kind == "vk":
        return v_table(k, budget=budget), ["t", "v"]
    if kind == "wk":
        return w_table(k, budget).to_rows(), ["theta", "w"]
    raise DomainError(f"unknown export kind {kind!r}")


def cmd_export(kind: str, config: RunConfig) -> int:
    def export_one(k: int) -> List[str]:
        if kind == "locus":
            return _export_locus(k, config)
        rows, header = export_rows(kind, k, config)
        name = f"{EXPORT_KINDS[kind]}_k{k}.{config.output_format}"
        path = os.path.join(config.output_path, name)
        _write(rows, header, path, config.output_format)
        return [path]

    try:
        written = run_in_parallel(
            export_one, config.k_values, config.jobs, desc=kind, verbose=not config.quiet
        )
    except EiscritError as error:
        print(f"export {kind} failed: {type(error).__name__}: {error}", file=sys.stderr)
        return 1
    for paths in written:
        for path in paths:
            print(f"wrote {path}")
    return 0


def cmd_phi_solve(lam, config: RunConfig) -> int:
    rows = []
    try:
        for k in config.k_values:
            solutions = solve_phi_eq(k, lam, config.budget, tol=config.tol)
            print(f"k={k}: {len(solutions)} solutions of phi_k = {lam} in D")
            rows += [{"k": k, "re": float(p.re), "im": float(p.im)} for p in solutions]
    except EiscritError as error:
        print(f"phi-solve failed: {type(error).__name__}: {error}", file=sys.stderr)
        return 1
    path = os.path.join(config.output_path, f"phi_solve.{config.output_format}")
    _write(rows, ["k", "re", "im"], path, config.output_format)
    return 0


def cmd_gamma_count(gamma: UnimodularMatrix, config: RunConfig) -> int:
    rows = []
    try:
        for k in config.k_values:
            zeros = zeros_in_gamma_D(k, gamma, config.budget, tol=config.tol)
            print(f"k={k}: {len(zeros)} zeros of E_k' in {gamma} D")
            rows += [{"k": k, **zero.to_row()} for zero in zeros]
    except EiscritError as error:
        print(f"gamma-count failed: {type(error).__name__}: {error}", file=sys.stderr)
        return 1
    path = os.path.join(config.output_path, f"gamma_count.{config.output_format}")
    header = ["k", "tau_re", "tau_im", "re", "im", "residual", "derivative"]
    _write(rows, header, path, config.output_format)
    return 0


def main(opts: argparse.Namespace) -> int:
    if opts.quiet:
        set_level("ERROR")
    if opts.command == "verify":
        return cmd_verify(_config(opts, VERIFY_RESULT_PATH), opts.checks)
    if opts.command == "export":
        return cmd_export(opts.kind, _config(opts, EXPORT_RESULT_PATH))
    if opts.command == "phi-solve":
        return cmd_phi_solve(opts.lam, _config(opts, RESULT_BASE_PATH))
    return cmd_gamma_count(opts.gamma, _config(opts, RESULT_BASE_PATH))


if __name__ == "__main__":
    options = parse_args()
    sys.exit(main(options))
