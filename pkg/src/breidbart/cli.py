"""Command-line entry point: every computation as a CSV or JSON table."""
from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from dataclasses import dataclass

import numpy as np

from . import bell, cases, eavesdrop, mub
from .exceptions import DomainError

COMMANDS = ("bases", "bell", "lhv", "curve", "noise", "efficiency", "info", "simulate", "case3")
EXIT_OK, EXIT_USAGE, EXIT_DOMAIN, EXIT_INTERNAL = 0, 2, 3, 4


@dataclass(frozen=True)
class RunConfig:
    command: str
    dims: tuple[int, ...] = tuple(range(2, 13))
    trials: int = 100_000
    seed: int = 0
    points: int = 21
    format: str = "csv"
    out: str | None = None

    def __post_init__(self):
        if self.command not in COMMANDS:
            raise DomainError(f"unknown command {self.command!r}")
        if self.format not in ("csv", "json"):
            raise DomainError(f"unknown format {self.format!r}")
        if not self.dims or min(self.dims) < 2:
            raise DomainError("dimensions must be >= 2")
        if self.trials < 1:
            raise DomainError("trials must be >= 1")


def parse_dims(text: str) -> tuple[int, ...]:
    """``"5"`` or inclusive ``"a..b"``."""
    try:
        if ".." in text:
            lo, hi = (int(t) for t in text.split("..", 1))
        else:
            lo = hi = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad dimension range {text!r}; use N or a..b") from None
    if lo > hi:
        raise argparse.ArgumentTypeError(f"empty range {text!r}")
    return tuple(range(lo, hi + 1))


def _num(x: float) -> float:
    # round to the serialized precision so CSV and JSON round-trip exactly
    return float(f"{float(x):.12g}")


def _clean(row: dict) -> dict:
    return {k: (_num(v) if isinstance(v, (float, np.floating)) else v) for k, v in row.items()}


def _rows_bases(cfg):
    for N in cfg.dims:
        fam = mub.intermediate_family(N)
        yield {
            "dim": N,
            "unbiasedness_residual": mub.unbiasedness_residual(N),
            "success_prob": fam.success_prob,
            "error_prob_per_state": fam.error_prob_per_state,
            "povm_residual": mub.povm_residual(N),
            "decomposition_residual": max(eavesdrop.crossing_decomposition_residual(n, N) for n in range(N)),
        }


def _rows_bell(cfg):
    for N in cfg.dims:
        functional, config = bell.standard_functional(N)
        rho = bell.pure(bell.max_entangled(N))
        yield {
            "dim": N,
            "quantum_value": bell.bell_value(rho, functional, config),
            "lhv_max": bell.lhv_max(functional),
        }


def _rows_lhv(cfg):
    for N in cfg.dims:
        functional, _ = bell.standard_functional(N)
        yield {"dim": N, "method": "fast", "lhv_max": bell.lhv_max(functional), "strategies": N * N}
        if N <= 3:
            yield {
                "dim": N,
                "method": "enumerate",
                "lhv_max": bell.lhv_max(functional, "enumerate"),
                "strategies": bell.n_strategies(N),
            }


def _rows_curve(cfg):
    for N in cfg.dims:
        yield {"dim": N, "d_crossing": eavesdrop.crossing_fidelity(N)[1], "d_critical": bell.critical_disturbance(N)}


def _rows_noise(cfg):
    for N in cfg.dims:
        yield {"dim": N, "lambda_mix": bell.lambda_mix(N), "lambda_sep": bell.lambda_sep(N)}


def _rows_efficiency(cfg):
    for N in cfg.dims:
        yield {"dim": N, "eta_threshold": bell.detector_threshold(N)}


def _rows_info(cfg):
    for N in cfg.dims:
        for r in eavesdrop.information_curves(N, cfg.points):
            yield {"dim": N, "point": "curve", **r}
        F, D = eavesdrop.crossing_fidelity(N)
        info = eavesdrop.intercept_resend_info(N)
        yield {
            "dim": N,
            "point": "crossing",
            "disturbance_bob": D,
            "fidelity_bob": F,
            "fidelity_eve": F,
            "info_bob": info,
            "info_eve": info,
        }


def _rows_simulate(cfg):
    for N in cfg.dims:
        stats = eavesdrop.simulate_intercept_resend(N, cfg.trials, cfg.seed)
        row = stats.as_dict()
        row["expected_success"] = mub.success_probability(N)
        row["expected_info"] = eavesdrop.intercept_resend_info(N)
        yield row


def _rows_case3(cfg):
    for report in (cases.real_basis_case3(), cases.basis_variant_case3()):
        report.verify()
        yield from report.rows()


_ROWS = {name: globals()[f"_rows_{name}"] for name in COMMANDS}


def build_rows(cfg: RunConfig) -> list[dict]:
    return [_clean(r) for r in _ROWS[cfg.command](cfg)]


def serialize(rows: list[dict], fmt: str) -> str:
    if fmt == "json":
        return json.dumps(rows, indent=1) + "\n"
    buf = io.StringIO()
    if rows:
        w = csv.DictWriter(buf, fieldnames=list(rows[0]), lineterminator="\n")
        w.writeheader()
        for r in rows:
            w.writerow({k: (f"{v:.12g}" if isinstance(v, float) else v) for k, v in r.items()})
    return buf.getvalue()


def parse_csv(text: str) -> list[dict]:
    """Inverse of the CSV serializer (ints and floats restored)."""

    def conv(s: str):
        for t in (int, float):
            try:
                return t(s)
            except ValueError:
                pass
        return s

    return [{k: conv(v) for k, v in r.items()} for r in csv.DictReader(io.StringIO(text))]


def run(cfg: RunConfig) -> tuple[int, str]:
    """Execute one command; returns (exit status, serialized table)."""
    return EXIT_OK, serialize(build_rows(cfg), cfg.format)


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.exit(EXIT_USAGE, f"E_USAGE: {message}\n")


def make_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="breidbart", description="Intermediate states, eavesdropping and Bell tables.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)
    helps = {
        "bases": "basis/intermediate-state checks per dimension",
        "bell": "quantum value and local bound",
        "lhv": "local bound by fast path and full enumeration",
        "curve": "crossing vs critical disturbance",
        "noise": "white and separable noise thresholds",
        "efficiency": "detector efficiency threshold",
        "info": "information curves and crossing point",
        "simulate": "Monte Carlo intercept/resend",
        "case3": "qutrit real-basis and basis-measurement variants",
    }
    for name in COMMANDS:
        s = sub.add_parser(name, help=helps[name])
        g = s.add_mutually_exclusive_group()
        g.add_argument("--dim", type=parse_dims, dest="dims")
        g.add_argument("--dims", type=parse_dims, dest="dims")
        if name == "simulate":
            s.add_argument("--trials", type=int, default=100_000)
            s.add_argument("--seed", type=int, default=0)
        if name == "info":
            s.add_argument("--points", type=int, default=21)
        s.add_argument("--format", choices=("csv", "json"), default="csv")
        s.add_argument("--out", default=None)
    return p


_DEFAULT_DIMS = {"simulate": (2,), "info": (2,), "case3": (3,), "curve": tuple(range(2, 26))}


def main(argv=None) -> int:
    args = make_parser().parse_args(argv)
    dims = args.dims or _DEFAULT_DIMS.get(args.command, tuple(range(2, 13)))
    try:
        cfg = RunConfig(
            command=args.command,
            dims=dims,
            trials=getattr(args, "trials", 100_000),
            seed=getattr(args, "seed", 0),
            points=getattr(args, "points", 21),
            format=args.format,
            out=args.out,
        )
        status, text = run(cfg)
    except DomainError as exc:
        print(f"E_DOMAIN: {exc}", file=sys.stderr)
        return EXIT_DOMAIN
    except AssertionError as exc:
        print(f"E_INTERNAL: {exc}", file=sys.stderr)
        return EXIT_INTERNAL
    if cfg.out:
        with open(cfg.out, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return status


if __name__ == "__main__":
    sys.exit(main())
