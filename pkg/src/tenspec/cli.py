"""``tenspec`` command line.

Exit codes: 0 success, 1 computational failure (no convergence, budget
exceeded, failed hypothesis or failed demo check), 2 usage error
(bad arguments, unreadable or malformed input file).
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
from concurrent.futures import Executor, ProcessPoolExecutor
from contextlib import contextmanager
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable

import numpy as np

from .bounds import StabilityError, build_extremal, stability_extract, upper_bound
from .eigen import SolverOptions, spectral_radius
from .fixtures import COUNTEREXAMPLE_SLICES, counterexample_pair
from .graph import block_decompose
from .search import BudgetExceeded, SearchReport, canonicalize, check_structure, default_n_range, search
from .tensor import ZeroOneTensor, all_ones, coo
from .tnsio import TnsFormatError, dumps, read_tns, write_tns

__all__ = ["RunConfig", "UsageError", "cmd_demo", "cmd_dispatch", "fmt_real", "main", "to_json"]

COMMANDS = ("rho", "bound", "search", "canon", "decompose", "stability", "extremal", "check-structure", "demo")
FORMATS = ("human", "json", "csv")
SEARCH_MODES = ("fstar", "fstar-strict", "downset", "exhaustive")


class UsageError(ValueError):
    pass


class ComputationError(RuntimeError):
    pass


@dataclass(frozen=True)
class RunConfig:
    command: str
    input: Path | None = None
    output: Path | None = None
    tolerance: float = 1e-10
    max_iterations: int = 1_000_000
    shift: float = 1.0
    jobs: int = 1
    fmt: str = "human"
    params: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.command not in COMMANDS:
            raise UsageError(f"unknown subcommand {self.command!r}")
        if not self.tolerance > 0:
            raise UsageError("--tol must be positive")
        if self.jobs < 1:
            raise UsageError("--jobs must be >= 1")
        if self.max_iterations < 1:
            raise UsageError("--max-iter must be >= 1")
        if self.shift < 0:
            raise UsageError("--shift must be nonnegative")
        if self.fmt not in FORMATS:
            raise UsageError(f"unknown format {self.fmt!r}")

    @property
    def solver(self) -> SolverOptions:
        return SolverOptions(self.tolerance, self.max_iterations, self.shift)


@dataclass
class Outcome:
    payload: dict
    human: str
    rows: list[dict]
    code: int = 0


# ---------------------------------------------------------------- formatting


def fmt_real(v: float) -> str:
    """12 significant digits, with ``.0`` kept on integral values."""
    s = f"{v:.12g}"
    if s.lstrip("-").isdigit():
        s += ".0"
    return s


def _jsonable(obj):
    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        # full precision as a string, so re-serialising is byte-identical
        return repr(float(obj))
    return obj


def to_json(payload: dict) -> str:
    return json.dumps(_jsonable(payload), indent=2, sort_keys=True) + "\n"


def _to_csv(rows: list[dict]) -> str:
    if not rows:
        return ""
    buf = io.StringIO()
    writer = csv.DictWriter(buf, fieldnames=list(rows[0]), lineterminator="\n")
    writer.writeheader()
    for row in rows:
        writer.writerow({k: fmt_real(v) if isinstance(v, float) else v for k, v in row.items()})
    return buf.getvalue()


def _ones_text(T: ZeroOneTensor) -> str:
    return " ".join("(" + ",".join(map(str, t)) + ")" for t in T.ones)


# ---------------------------------------------------------------- helpers


def _load(cfg: RunConfig):
    if cfg.input is None:
        raise UsageError(f"{cfg.command} needs an input .tns file")
    try:
        return read_tns(cfg.input)
    except OSError as exc:
        raise UsageError(f"cannot read {cfg.input}: {exc.strerror or exc}") from None
    except TnsFormatError as exc:
        raise UsageError(f"malformed .tns file {cfg.input}: {exc}") from None


def _load01(cfg: RunConfig) -> ZeroOneTensor:
    A = _load(cfg)
    if not isinstance(A, ZeroOneTensor):
        raise UsageError(f"{cfg.command} needs a sparse01 tensor")
    return A


def _param(cfg: RunConfig, name: str):
    value = cfg.params.get(name)
    if value is None:
        raise UsageError(f"{cfg.command} needs --{name.replace('_', '-')}")
    return value


@contextmanager
def _pool(jobs: int):
    """The only place worker processes are created."""
    if jobs <= 1:
        yield None
        return
    with ProcessPoolExecutor(max_workers=jobs) as pool:
        yield pool


# ---------------------------------------------------------------- commands


def cmd_rho(cfg: RunConfig, executor: Executor | None) -> Outcome:
    A = _load(cfg)
    res = spectral_radius(A, cfg.solver)
    payload = res.as_dict()
    human = "\n".join(
        [
            fmt_real(res.lam),
            f"residual {res.residual:.3e}, iterations {res.iterations}, converged {res.converged}",
            f"weakly irreducible {res.weakly_irreducible}, blocks {res.n_blocks}",
            "x = " + " ".join(f"{v:.12g}" for v in res.x),
        ]
    )
    row = {k: v for k, v in payload.items() if k != "x"}
    row["x"] = " ".join(repr(float(v)) for v in res.x)
    return Outcome(payload, human, [row], 0 if res.converged else 1)


def cmd_bound(cfg: RunConfig, executor: Executor | None) -> Outcome:
    e, r = _param(cfg, "e"), _param(cfg, "r")
    if e < 0 or r < 2:
        raise UsageError("need --e >= 0 and --r >= 2")
    ub = upper_bound(e, r)
    payload = {"e": e, "r": r, "upper_bound": ub}
    return Outcome(payload, fmt_real(ub), [payload])


def _search_range(cfg: RunConfig, r: int, e: int):
    lo, hi = cfg.params.get("n_min"), cfg.params.get("n_max")
    if lo is None and hi is None:
        return None
    default = default_n_range(e, r)
    lo = default.start if lo is None else lo
    hi = default.stop - 1 if hi is None else hi
    if lo < 1 or hi < lo:
        raise UsageError(f"bad dimension range {lo}..{hi}")
    return range(lo, hi + 1)


def _search_human(rep: SearchReport) -> str:
    lines = [
        fmt_real(rep.best_lambda),
        f"g_{rep.r}({rep.e}) over dimensions {', '.join(map(str, rep.n_range))} "
        f"({rep.mode} mode, {rep.candidates} candidates)",
        f"upper bound e^((r-1)/r) = {fmt_real(rep.theoretical_upper)}",
        f"structure: {rep.structure_match.value}",
    ]
    for i, T in enumerate(rep.maximizers, 1):
        lines.append(f"maximizer {i}: dim {T.dim}, ones {_ones_text(T)}")
    lines += [f"warning: {w}" for w in rep.warnings]
    return "\n".join(lines)


def cmd_search(cfg: RunConfig, executor: Executor | None) -> Outcome:
    r, e = _param(cfg, "r"), _param(cfg, "e")
    mode = cfg.params.get("mode") or "downset"
    n_range = _search_range(cfg, r, e)
    kw = {"opts": cfg.solver, "executor": executor}
    if mode == "exhaustive" and n_range is None:
        # every non-isolated vertex appears in some one
        n_range = range(r * e, r * e + 1)
    try:
        rep = search(r, e, mode, n_range, **kw)
    except BudgetExceeded as exc:
        raise ComputationError(str(exc)) from None
    rows = [
        {
            "r": rep.r,
            "e": rep.e,
            "mode": rep.mode,
            "best_lambda": rep.best_lambda,
            "theoretical_upper": rep.theoretical_upper,
            "structure_match": rep.structure_match.value,
            "candidates": rep.candidates,
            "maximizers": len(rep.maximizers),
        }
    ]
    return Outcome(rep.to_dict(), _search_human(rep), rows)


def cmd_canon(cfg: RunConfig, executor: Executor | None) -> Outcome:
    C = canonicalize(_load01(cfg)).tensor
    payload = {"order": C.order, "dim": C.dim, "ones": [list(t) for t in C.ones]}
    rows = [{f"i{j + 1}": v for j, v in enumerate(t)} for t in C.ones]
    return Outcome(payload, dumps(C).rstrip("\n"), rows)


def cmd_decompose(cfg: RunConfig, executor: Executor | None) -> Outcome:
    A = _load(cfg)
    dec = block_decompose(A)
    blocks = []
    for verts, blk in zip(dec.blocks, dec.diagonal):
        blocks.append(
            {
                "vertices": list(verts),
                "ones": int(coo(blk)[0].shape[0]),
                "rho": spectral_radius(blk, cfg.solver).lam,
            }
        )
    payload = {"permutation": list(dec.perm), "blocks": blocks}
    human = to_json(payload).rstrip("\n")
    rows = [
        {"block": s, "vertices": " ".join(map(str, b["vertices"])), "ones": b["ones"], "rho": b["rho"]}
        for s, b in enumerate(blocks, 1)
    ]
    return Outcome(payload, human, rows)


def cmd_stability(cfg: RunConfig, executor: Executor | None) -> Outcome:
    A = _load01(cfg)
    k, l = _param(cfg, "k"), _param(cfg, "l")
    try:
        rep = stability_extract(A, k, l, cfg.solver)
    except StabilityError as exc:
        raise ComputationError(str(exc)) from None
    payload = rep.as_dict()
    human = "\n".join(
        [
            f"|L| = {rep.large_dim}, zeros inside N = {rep.zeros_inside}, ones outside M = {rep.ones_outside}",
            f"L = {{{', '.join(map(str, rep.large_set))}}}",
            f"rho = {fmt_real(rep.rho)} (required {fmt_real(rep.required_rho)}), threshold c1/k = {rep.threshold:.6g}",
            f"diagonal one at the largest Perron component: {rep.diagonal_at_max}",
        ]
    )
    row = {k_: v for k_, v in payload.items() if k_ not in ("large_set", "xr_sorted")}
    row["large_set"] = " ".join(map(str, rep.large_set))
    return Outcome(payload, human, [row])


def cmd_extremal(cfg: RunConfig, executor: Executor | None) -> Outcome:
    r, k, l = _param(cfg, "r"), _param(cfg, "k"), _param(cfg, "l")
    spec = build_extremal(r, k, l)
    T = spec.tensor
    payload = {"r": r, "k": k, "l": l, "dim": T.dim, "non_unique": spec.non_unique, "ones": [list(t) for t in T.ones]}
    if cfg.output is not None:
        write_tns(T, cfg.output)
        human = f"wrote {cfg.output} ({T.nnz} ones, dimension {T.dim})"
    else:
        human = dumps(T).rstrip("\n")
    if spec.non_unique:
        human += "\nnote: one maximiser of a non-unique family"
    rows = [{"r": r, "k": k, "l": l, "dim": T.dim, "ones": T.nnz, "non_unique": spec.non_unique}]
    return Outcome(payload, human, rows)


def cmd_check_structure(cfg: RunConfig, executor: Executor | None) -> Outcome:
    A = _load01(cfg)
    k, l = _param(cfg, "k"), _param(cfg, "l")
    verdict = check_structure(A, A.order, k, l)
    payload = {"k": k, "l": l, "verdict": verdict.value}
    return Outcome(payload, verdict.value, [payload])


# ---------------------------------------------------------------- demo


@dataclass(frozen=True)
class Check:
    name: str
    expected: float
    measured: float
    tolerance: float
    relation: str = "=="

    @property
    def ok(self) -> bool:
        if self.relation == "<=":
            return self.measured <= self.expected + self.tolerance
        if self.relation == "<":
            return self.measured < self.expected - self.tolerance
        return abs(self.measured - self.expected) <= self.tolerance


def cmd_demo(cfg: RunConfig, executor: Executor | None, slices=COUNTEREXAMPLE_SLICES) -> Outcome:
    """Reproduce the reference numbers; ``slices`` lets tests corrupt the fixture."""
    opts = cfg.solver
    tight = max(1e-9, 10 * cfg.tolerance)
    checks: list[Check] = []
    for r in (3, 4):
        for k in (2, 3):
            lam = spectral_radius(all_ones(k, r), opts).lam
            checks.append(Check(f"rho(J_{k}^{r}) = {k}^{r - 1}", float(k ** (r - 1)), lam, tight))
    A, M = counterexample_pair(slices)
    checks.append(Check("rho(A) = 7", 7.0, spectral_radius(A, opts).lam, tight))
    checks.append(Check("rho(M) = 6.91618", 6.91618, spectral_radius(M, opts).lam, max(1e-5, tight)))
    table = []
    for e in range(1, 11):
        rep = search(3, e, "downset", opts=opts, executor=executor)
        ub = upper_bound(e, 3)
        table.append({"e": e, "upper_bound": ub, "g3": rep.best_lambda, "gap": ub - rep.best_lambda})
        if e in (8, 9):
            checks.append(Check(f"g_3({e}) = 4", 4.0, rep.best_lambda, tight))
        cube = round(e ** (1 / 3)) ** 3 == e
        checks.append(Check(f"g_3({e}) {'=' if cube else '<'} e^(2/3)", ub, rep.best_lambda, tight, "==" if cube else "<"))
    failed = [c for c in checks if not c.ok]
    lines = []
    for c in checks:
        status = "PASS" if c.ok else "FAIL"
        lines.append(f"{status}  {c.name}: measured {fmt_real(c.measured)}, reference {fmt_real(c.expected)}")
    lines.append("")
    lines.append(f"{'e':>3}  {'e^(2/3)':>14}  {'g_3(e)':>14}  {'gap':>10}")
    for row in table:
        lines.append(f"{row['e']:>3}  {fmt_real(row['upper_bound']):>14}  {fmt_real(row['g3']):>14}  {row['gap']:>10.3e}")
    lines.append("")
    if failed:
        lines.append(f"{len(failed)} of {len(checks)} checks failed:")
        for c in failed:
            lines.append(f"  {c.name}: measured {c.measured!r} differs from {c.expected!r} by {c.measured - c.expected:+.3e}")
    else:
        lines.append(f"all {len(checks)} checks passed")
    payload = {
        "checks": [
            {"name": c.name, "expected": c.expected, "measured": c.measured, "tolerance": c.tolerance, "ok": c.ok}
            for c in checks
        ],
        "bound_table": table,
        "passed": not failed,
    }
    rows = [{"check": c.name, "expected": c.expected, "measured": c.measured, "ok": c.ok} for c in checks]
    return Outcome(payload, "\n".join(lines), rows, 1 if failed else 0)


HANDLERS: dict[str, Callable[[RunConfig, Executor | None], Outcome]] = {
    "rho": cmd_rho,
    "bound": cmd_bound,
    "search": cmd_search,
    "canon": cmd_canon,
    "decompose": cmd_decompose,
    "stability": cmd_stability,
    "extremal": cmd_extremal,
    "check-structure": cmd_check_structure,
    "demo": cmd_demo,
}


# ---------------------------------------------------------------- dispatch


def _write(text: str, dest: str | None) -> None:
    if dest in (None, "-"):
        sys.stdout.write(text)
    else:
        Path(dest).write_text(text, encoding="utf-8", newline="\n")


def cmd_dispatch(cfg: RunConfig, json_dest: str | None = None) -> int:
    """Run one subcommand and write its report; returns the exit code."""
    try:
        with _pool(cfg.jobs) as executor:
            out = HANDLERS[cfg.command](cfg, executor)
    except UsageError as exc:
        print(f"tenspec {cfg.command}: {exc}", file=sys.stderr)
        return 2
    except (ComputationError, ArithmeticError) as exc:
        print(f"tenspec {cfg.command}: {exc}", file=sys.stderr)
        return 1
    except ValueError as exc:
        # parameter checks inside the library
        print(f"tenspec {cfg.command}: {exc}", file=sys.stderr)
        return 2
    if cfg.fmt == "json" or json_dest is not None:
        _write(to_json(out.payload), json_dest)
        if json_dest not in (None, "-") and cfg.fmt == "human":
            _write(out.human + "\n", None)
    elif cfg.fmt == "csv":
        _write(_to_csv(out.rows), None)
    else:
        _write(out.human + "\n", None)
    return out.code


def _env_jobs() -> int:
    raw = os.environ.get("TENSPEC_JOBS", "1")
    try:
        return int(raw)
    except ValueError:
        return 1


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--tol", type=float, default=1e-10, help="enclosure width for the power iteration")
    common.add_argument("--max-iter", type=int, default=1_000_000)
    common.add_argument("--shift", type=float, default=1.0)
    common.add_argument("--jobs", type=int, default=None, help="worker processes (default $TENSPEC_JOBS or 1)")
    common.add_argument("--format", choices=FORMATS, default="human")
    common.add_argument(
        "--json", nargs="?", const="-", default=None, metavar="PATH",
        help="write the JSON report to PATH (stdout when PATH is omitted)",
    )
    common.add_argument("-o", "--output", type=Path, default=None)

    parser = argparse.ArgumentParser(prog="tenspec", description="Spectral radii of nonnegative tensors.")
    sub = parser.add_subparsers(dest="command", required=True, metavar="command")

    p = sub.add_parser("rho", parents=[common], help="spectral radius and Perron vector")
    p.add_argument("file", type=Path)
    p = sub.add_parser("bound", parents=[common], help="upper bound e^((r-1)/r)")
    p.add_argument("--e", type=int, required=True)
    p.add_argument("--r", type=int, required=True)
    p = sub.add_parser("search", parents=[common], help="maximum spectral radius with e ones")
    p.add_argument("--r", type=int, required=True)
    p.add_argument("--e", type=int, required=True)
    p.add_argument("--mode", choices=SEARCH_MODES, default="downset")
    p.add_argument("--n-min", type=int, default=None)
    p.add_argument("--n-max", type=int, default=None)
    p = sub.add_parser("canon", parents=[common], help="canonical form of a {0,1}-tensor")
    p.add_argument("file", type=Path)
    p = sub.add_parser("decompose", parents=[common], help="lower-triangular block form")
    p.add_argument("file", type=Path)
    p = sub.add_parser("stability", parents=[common], help="locate the near-all-ones sub-tensor")
    p.add_argument("file", type=Path)
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--l", type=int, required=True)
    p = sub.add_parser("extremal", parents=[common], help="build the extremal tensor")
    p.add_argument("--r", type=int, required=True)
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--l", type=int, required=True)
    p = sub.add_parser("check-structure", parents=[common], help="compare with the extremal tensor")
    p.add_argument("file", type=Path)
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--l", type=int, required=True)
    sub.add_parser("demo", parents=[common], help="reproduce the reference numbers")
    return parser


_PARAM_KEYS = ("e", "r", "k", "l", "mode", "n_min", "n_max")


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        ns = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        cfg = RunConfig(
            command=ns.command,
            input=getattr(ns, "file", None),
            output=ns.output,
            tolerance=ns.tol,
            max_iterations=ns.max_iter,
            shift=ns.shift,
            jobs=ns.jobs if ns.jobs is not None else _env_jobs(),
            fmt=ns.format,
            params={k: getattr(ns, k) for k in _PARAM_KEYS if hasattr(ns, k)},
        )
    except UsageError as exc:
        print(f"tenspec: {exc}", file=sys.stderr)
        return 2
    return cmd_dispatch(cfg, ns.json)


if __name__ == "__main__":
    sys.exit(main())
