"""Command-line front end: ``opbound {powers,sector,check,sweep,fuzz}``.

Exit codes: 0 when every row passes, 2 on any violated inequality, 1 on
usage or I/O errors. Diagnostics go to standard error.
"""

from __future__ import annotations

import argparse
import csv
import io as _io
import json
import math
import os
import sys
import warnings
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from datetime import datetime, timezone

import numpy as np

from . import generators
from .errors import OpboundError
from .interpolation import StripInstance, block_embed, verify_bounded_similarity, verify_sandwich
from .io import format_matrix_market, load_matrix, save_matrix
from .linalg import as_square, is_hermitian
from .polar import heinz_domination_check
from .report import InequalityReport
from .schatten import exponent
from .sectorial import SectorialityAdvisory, bip_fit, mcintosh_check, principal_power, sectoriality_angle, spectral_angle
from .spectral import imaginary_power_bound_check, power_selfadjoint

COLUMNS = ("theorem_id", "seed", "dim", "re_z", "im_z", "p", "k", "lhs", "rhs", "constant", "slack", "pass")
CORRUPT_ENV = "OPBOUND_CORRUPT_VERIFIER"
JOBS_ENV = "OPBOUND_JOBS"

# theorem id -> (number of T matrices, whether S is needed, forced case)
THEOREMS = {
    "imaginary-power": (1, False, None),
    "bounded-similarity": (1, True, None),
    "sandwich": (1, True, None),
    "heinz": (1, True, None),
    "strip": (2, True, None),
    "strip-sectorial": (2, True, None),
    "block-embedding": (2, True, None),
    "mcintosh": (1, False, None),
}

# numeric labels accepted for --theorem
ALIASES = {
    "2.23": ("imaginary-power", None),
    "2.24": ("imaginary-power", None),
    "2.25": ("bounded-similarity", None),
    "2.31": ("sandwich", None),
    "1.2": ("sandwich", None),
    "2.48": ("heinz", None),
    "2.44": ("strip", "both-indefinite"),
    "2.45": ("strip", "both-indefinite"),
    "2.56": ("strip", None),
    "2.57": ("strip", None),
    "3.14": ("strip", "both-indefinite"),
    "3.14a": ("strip", "both-indefinite"),
    "3.26": ("strip", None),
    "3.27": ("strip", None),
    "2.62": ("block-embedding", None),
    "4.24": ("strip-sectorial", None),
    "4.25": ("strip-sectorial", None),
    "4.32": ("strip-sectorial", None),
    "4.33": ("strip-sectorial", None),
    "4.45": ("strip-sectorial", None),
    "4.46": ("strip-sectorial", None),
    "4.6a": ("mcintosh", None),
}


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def resolve_theorem(label: str):
    if label in THEOREMS:
        return label, None
    if label in ALIASES:
        return ALIASES[label]
    raise UsageError(f"unknown theorem {label!r}")


def parse_complex(text: str) -> complex:
    try:
        return complex(text.strip().replace(" ", "").replace("i", "j"))
    except ValueError:
        raise UsageError(f"not a complex number: {text!r}") from None


def parse_range(text: str) -> np.ndarray:
    parts = text.split(":")
    if len(parts) != 3:
        raise UsageError(f"range must be start:stop:count, got {text!r}")
    try:
        a, b, n = float(parts[0]), float(parts[1]), int(parts[2])
    except ValueError:
        raise UsageError(f"bad range {text!r}") from None
    if n < 1:
        raise UsageError("grid counts must be >= 1")
    return np.linspace(a, b, n)


def parse_p_list(text: str) -> list[float]:
    try:
        return [exponent(tok) for tok in text.split(",")]
    except OpboundError as exc:
        raise UsageError(str(exc)) from None


def fmt(v) -> str:
    if v is None:
        return ""
    return f"{float(v):.16e}"


@dataclass
class JobConfig:
    command: str
    theorem: str = "strip"
    case: str | None = None
    gen: list = field(default_factory=list)
    inputs: list = field(default_factory=list)
    seeds: list = field(default_factory=lambda: [0])
    zs: list = field(default_factory=lambda: [0.5 + 0j])
    ps: list = field(default_factory=lambda: [math.inf])
    k: float | None = None
    tol: float | None = None
    corrupt: bool = False


def _instance(cfg: JobConfig, seed: int):
    """``(S, T1, T2)`` for one seed; ``S`` may be None when the theorem needs no ``S``."""
    n_t, needs_s, _ = THEOREMS[cfg.theorem]
    rng = np.random.default_rng(seed)
    S = None
    if cfg.inputs:
        mats = [load_matrix(p) for p in cfg.inputs]
        if needs_s and len(mats) == n_t + 1:
            S, Ts = mats[0], mats[1:]
        else:
            Ts = mats
        if not 1 <= len(Ts) <= n_t:
            raise UsageError(f"--in expects up to {n_t} T matrices (optionally preceded by S)")
    else:
        if not 1 <= len(cfg.gen) <= n_t:
            raise UsageError(f"--gen expects 1 to {n_t} class:dim items for {cfg.theorem}")
        Ts = [generators.generate(c, d, rng) for c, d in cfg.gen]
    T1 = Ts[0]
    T2 = Ts[1] if len(Ts) > 1 else Ts[0]
    if needs_s and S is None:
        S = generators.ginibre(T2.shape[0], rng, T1.shape[0])
    return S, T1, T2


def _dim_label(T1, T2) -> str:
    n1, n2 = T1.shape[0], T2.shape[0]
    return str(n1) if n1 == n2 else f"{n1}x{n2}"


def _reports(cfg: JobConfig, seed: int):
    S, T1, T2 = _instance(cfg, seed)
    return _dim_label(T1, T2), _evaluate(cfg, S, T1, T2)


def _evaluate(cfg: JobConfig, S, T1, T2) -> list[InequalityReport]:
    th = cfg.theorem
    kw = {} if cfg.tol is None else {"rel_tol": cfg.tol}
    if th == "imaginary-power":
        ys = sorted({z.imag for z in cfg.zs})
        return [imaginary_power_bound_check(T1, y, **kw) for y in ys]
    if th == "bounded-similarity":
        return [verify_bounded_similarity(S, T1, **kw)]
    if th == "sandwich":
        return [verify_sandwich(S, T1, p, **kw) for p in cfg.ps]
    if th == "heinz":
        alphas = sorted({min(max(z.real, 0.0), 1.0) for z in cfg.zs})
        return [heinz_domination_check(S, T1, a, **kw) for a in alphas]
    if th == "mcintosh":
        return [mcintosh_check(T1)]
    if th == "block-embedding":
        bS, bT = block_embed(S, T1, T2)
        inst = StripInstance(bS, bT, bT, case="both-indefinite" if cfg.case is None else cfg.case, rel_tol=cfg.tol)
        reps = inst.evaluate(cfg.zs, cfg.ps, cfg.k)
        return [InequalityReport(**{**r.__dict__, "theorem_id": "block-embedding"}) for r in reps]
    mode = "sectorial" if th == "strip-sectorial" else "selfadjoint"
    inst = StripInstance(S, T1, T2, mode=mode, case=cfg.case, rel_tol=cfg.tol)
    return inst.evaluate(cfg.zs, cfg.ps, cfg.k)


def run_item(cfg: JobConfig, seed: int) -> list[dict]:
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", SectorialityAdvisory)
        dim, reps = _reports(cfg, seed)
    rows = []
    for r in reps:
        rhs = r.rhs
        if cfg.corrupt:
            # test hook: a verifier that under-reports its bound
            rhs = rhs * 1e-3
            r = InequalityReport(**{**r.__dict__, "rhs": rhs})
        z = complex(r.z) if r.z is not None else complex(math.nan)
        rows.append(
            {
                "theorem_id": r.theorem_id,
                "seed": str(seed),
                "dim": dim,
                "re_z": fmt(z.real),
                "im_z": fmt(z.imag),
                "p": fmt(r.p if r.p is not None else math.inf),
                "k": fmt(r.k_used),
                "lhs": fmt(r.lhs),
                "rhs": fmt(r.rhs),
                "constant": fmt(r.constant_factor),
                "slack": fmt(r.slack),
                "pass": "true" if r.ok else "false",
            }
        )
    return rows


def _run_one(args):
    cfg, seed = args
    return run_item(cfg, seed)


def run_rows(cfg: JobConfig, jobs: int = 1) -> list[dict]:
    items = [(cfg, s) for s in cfg.seeds]
    if jobs > 1 and len(items) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            chunks = list(pool.map(_run_one, items))
    else:
        chunks = [_run_one(it) for it in items]
    return [row for chunk in chunks for row in chunk]


def render(rows: list[dict], out_format: str, timestamp: bool) -> str:
    stamp = datetime.now(timezone.utc).isoformat(timespec="seconds") if timestamp else None
    if out_format == "json":
        obj = {"columns": list(COLUMNS), "rows": rows}
        if stamp:
            obj = {"generated": stamp, **obj}
        return json.dumps(obj, indent=1) + "\n"
    buf = _io.StringIO()
    if stamp:
        buf.write(f"# generated {stamp}\n")
    w = csv.DictWriter(buf, fieldnames=COLUMNS, lineterminator="\n")
    w.writeheader()
    w.writerows(rows)
    return buf.getvalue()


def _write(text: str, out: str | None) -> None:
    if out:
        with open(out, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="opbound", description="Matrix powers and randomized checks of operator bounds.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def common(p):
        p.add_argument("--gen", help="generator spec class:dim[,class:dim]")
        p.add_argument("--in", dest="inputs", help="comma-separated matrix files (Matrix Market or JSON)")
        p.add_argument("--seed", type=int, default=0)
        p.add_argument("--out", help="output file (default: stdout)")

    def checks(p, grid: bool):
        p.add_argument("--theorem", required=True)
        if grid:
            p.add_argument("--re", default="0:1:5")
            p.add_argument("--im", default="-2:2:5")
        else:
            p.add_argument("--z", default="0.5", help="comma-separated strip points")
        p.add_argument("--p", default="inf", help="comma-separated Schatten exponents")
        p.add_argument("--k", type=float)
        p.add_argument("--tol", type=float)
        p.add_argument("--format", choices=("csv", "json"), default="csv")
        p.add_argument("--no-timestamp", action="store_true")
        p.add_argument("--jobs", type=int, default=1)

    p = sub.add_parser("powers", help="write T**z")
    common(p)
    p.add_argument("--z", required=True)
    p = sub.add_parser("sector", help="sector angle and imaginary-power constants")
    common(p)
    p = sub.add_parser("check", help="one instance, listed strip points")
    common(p)
    checks(p, grid=False)
    p = sub.add_parser("sweep", help="one instance over a strip grid")
    common(p)
    checks(p, grid=True)
    p = sub.add_parser("fuzz", help="many seeded instances over a strip grid")
    common(p)
    checks(p, grid=True)
    p.add_argument("--count", type=int, default=100)
    return parser


def _single_matrix(args) -> np.ndarray:
    if args.inputs:
        return as_square(load_matrix(args.inputs.split(",")[0]), name="T")
    if args.gen:
        (cls, d), *_ = generators.parse_gen_spec(args.gen)
        return generators.generate(cls, d, np.random.default_rng(args.seed))
    raise UsageError("need --in or --gen")


def _cmd_powers(args) -> int:
    T = _single_matrix(args)
    z = parse_complex(args.z)
    P = power_selfadjoint(T, z) if is_hermitian(T) else principal_power(T, z)
    if args.out:
        save_matrix(P, args.out)
    else:
        sys.stdout.write(format_matrix_market(P))
    return 0


def _cmd_sector(args) -> int:
    T = _single_matrix(args)
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always", SectorialityAdvisory)
        omega = sectoriality_angle(T)
    bip = bip_fit(T)
    summary = {
        "dim": T.shape[0],
        "spectral_angle": spectral_angle(np.linalg.eigvals(T)),
        "omega": omega,
        "omega_exact": not caught,
        "N": bip.N,
        "theta": bip.theta,
    }
    _write(json.dumps(summary, indent=1) + "\n", args.out)
    return 0


def _config(args) -> JobConfig:
    theorem, case = resolve_theorem(args.theorem)
    if args.tol is not None and not args.tol > 0:
        raise UsageError("--tol must be positive")
    if args.k is not None and not args.k > 0:
        raise UsageError("--k must be positive")
    try:
        gen = generators.parse_gen_spec(args.gen) if args.gen else []
    except OpboundError as exc:
        raise UsageError(str(exc)) from None
    inputs = args.inputs.split(",") if args.inputs else []
    if not gen and not inputs:
        raise UsageError("need --gen or --in")
    if args.command == "check":
        zs = [parse_complex(t) for t in args.z.split(",")]
    else:
        zs = [complex(x, y) for x in parse_range(args.re) for y in parse_range(args.im)]
    seeds = [args.seed]
    if args.command == "fuzz":
        if args.count < 1:
            raise UsageError("--count must be >= 1")
        seeds = [args.seed + i for i in range(args.count)]
    return JobConfig(
        command=args.command,
        theorem=theorem,
        case=case,
        gen=gen,
        inputs=inputs,
        seeds=seeds,
        zs=zs,
        ps=parse_p_list(args.p),
        k=args.k,
        tol=args.tol,
        corrupt=bool(os.environ.get(CORRUPT_ENV)),
    )


def _jobs(args) -> int:
    env = os.environ.get(JOBS_ENV)
    if env:
        try:
            return max(1, int(env))
        except ValueError:
            raise UsageError(f"{JOBS_ENV} must be an integer") from None
    return max(1, args.jobs)


def run_job(args) -> int:
    if args.command == "powers":
        return _cmd_powers(args)
    if args.command == "sector":
        return _cmd_sector(args)
    cfg = _config(args)
    rows = run_rows(cfg, _jobs(args))
    _write(render(rows, args.format, not args.no_timestamp), args.out)
    failed = sum(r["pass"] != "true" for r in rows)
    if failed:
        print(f"{failed} of {len(rows)} rows violate the bound", file=sys.stderr)
        return 2
    return 0


_VALUE_FLAGS = ("--re", "--im", "--z", "--k", "--tol")


def _join_negative_values(argv: list[str]) -> list[str]:
    """Turn ``--im -2:2:9`` into ``--im=-2:2:9`` so argparse does not read it as a flag."""
    out, i = [], 0
    while i < len(argv):
        a = argv[i]
        if a in _VALUE_FLAGS and i + 1 < len(argv) and argv[i + 1].startswith("-"):
            out.append(f"{a}={argv[i + 1]}")
            i += 2
        else:
            out.append(a)
            i += 1
    return out


def main(argv=None) -> int:
    parser = build_parser()
    argv = sys.argv[1:] if argv is None else list(argv)
    try:
        args = parser.parse_args(_join_negative_values(argv))
        return run_job(args)
    except UsageError as exc:
        parser.print_usage(sys.stderr)
        print(f"opbound: error: {exc}", file=sys.stderr)
        return 1
    except (OpboundError, OSError, np.linalg.LinAlgError) as exc:
        print(f"opbound: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
