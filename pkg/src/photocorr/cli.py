"""Command-line front end: single evaluations, sweeps, figure data, cross-checks.

Subcommands: visibility, g2, schwarz, bell, sweep, fig2, fig3, verify.
Output is CSV (default) or JSON via ``--format``; ``--out`` writes to a file
instead of stdout. Exit codes: 0 ok, 1 verification mismatch, 2 usage or
domain error, 3 I/O error. Every error is a single stderr line starting with
``error:``.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
from dataclasses import dataclass
from typing import Any, Sequence

import numpy as np

from . import __version__
from .bell import bell_threshold, chsh, chsh_max, normalized_g2
from .correlations import Pairing, PairConfig, g2, make_pair, source_b_kind, visibility, visibility_at_net
from .fock_oracle import DEFAULT_TAIL_TOL, TruncationError, g2_numeric, moment_numeric
from .nonclassicality import (
    UndefinedRatioError,
    cs_determinant,
    cs_violation_threshold,
    schwarz_ratio,
    variance_corr,
    witness,
    witness_at_visibility,
)
from .sources import DomainError, moment, nbar_from_net

EXIT_OK, EXIT_MISMATCH, EXIT_USAGE, EXIT_IO = 0, 1, 2, 3

FIG2_PAIRINGS = (Pairing.T, Pairing.PT, Pairing.C, Pairing.PC)
FIG3_PAIRINGS = (Pairing.T, Pairing.PT, Pairing.C, Pairing.PC, Pairing.CLASS)
VERIFY_NBARS = (0.0, 0.22, 0.29, 0.5, 1.0, 2.0)
VERIFY_POINTS = 16
QUANTITIES = ("g2", "visibility", "schwarz", "chsh", "determinant")


class CliError(Exception):
    def __init__(self, message: str, code: int = EXIT_USAGE):
        super().__init__(message)
        self.code = code


# ---------------------------------------------------------------------------
# serialization
# ---------------------------------------------------------------------------


def _csv_cell(value: Any) -> str:
    if isinstance(value, bool):
        return "true" if value else "false"
    if value is None:
        return ""
    if isinstance(value, (float, np.floating)):
        if math.isinf(value):
            return "inf" if value > 0 else "-inf"
        if math.isnan(value):
            return "nan"
        return f"{float(value):.12g}"
    if isinstance(value, Pairing):
        return value.value
    return str(value)


def _json_value(value: Any) -> Any:
    if isinstance(value, bool) or value is None:
        return value
    if isinstance(value, (float, np.floating)):
        if not math.isfinite(value):
            return None
        return float(f"{float(value):.12g}")
    if isinstance(value, (int, np.integer)):
        return int(value)
    if isinstance(value, Pairing):
        return value.value
    if isinstance(value, (list, tuple)):
        return [_json_value(v) for v in value]
    return str(value)


def render_csv(rows: Sequence[dict]) -> str:
    buf = io.StringIO()
    if not rows:
        return ""
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(list(rows[0].keys()))
    for row in rows:
        writer.writerow([_csv_cell(v) for v in row.values()])
    return buf.getvalue()


def render_json(rows: Sequence[dict], command: str, parameters: dict) -> str:
    doc = {
        "meta": {
            "command": command,
            "parameters": {k: _json_value(v) for k, v in parameters.items()},
            "version": __version__,
        },
        "rows": [{k: _json_value(v) for k, v in row.items()} for row in rows],
    }
    return json.dumps(doc, indent=2) + "\n"


def emit(rows: Sequence[dict], args: argparse.Namespace) -> None:
    params = {k: v for k, v in vars(args).items() if k not in ("func", "format", "out", "command")}
    if args.format == "json":
        text = render_json(rows, args.command, params)
    else:
        text = render_csv(rows)
    if args.out:
        try:
            with open(args.out, "w", encoding="utf-8", newline="\n") as fh:
                fh.write(text)
        except OSError as exc:
            raise CliError(f"cannot write {args.out}: {exc.strerror or exc}", EXIT_IO) from exc
    else:
        sys.stdout.write(text)


# ---------------------------------------------------------------------------
# argument helpers
# ---------------------------------------------------------------------------


def pair_from_args(args: argparse.Namespace) -> PairConfig:
    pairing = Pairing(args.pair)
    if pairing is Pairing.CLASS:
        if args.net is not None:
            nb = args.net
        elif args.nbar_b is not None:
            nb = args.nbar_b
        elif args.nbar is not None:
            nb = args.nbar
        else:
            raise CliError("Class needs --nbar, --net or --nbar-b")
        na = args.nbar_a if args.nbar_a is not None else nb
        return make_pair(pairing, nb, nbar_a=na)
    if args.nbar_a is not None or args.nbar_b is not None:
        raise CliError("--nbar-a/--nbar-b only apply to --pair Class")
    if pairing is Pairing.QQ:
        return make_pair(pairing)
    if args.net is not None:
        return make_pair(pairing, nbar_from_net(source_b_kind(pairing), args.net))
    if args.nbar is None:
        raise CliError(f"--pair {pairing.value} needs --nbar or --net")
    return make_pair(pairing, args.nbar)


def _pair_columns(pair: PairConfig) -> dict:
    cols = {"pairing": pair.pairing, "nbar": pair.nbar, "net": pair.net}
    if pair.pairing is Pairing.CLASS:
        cols["nbar_a"] = pair.source_a.nbar
    return cols


def _phase_grid(start: float, stop: float, count: int, endpoint: bool = True) -> list[float]:
    return [float(x) for x in np.linspace(start, stop, count, endpoint=endpoint)]


# ---------------------------------------------------------------------------
# subcommands
# ---------------------------------------------------------------------------


def cmd_visibility(args: argparse.Namespace) -> int:
    pair = pair_from_args(args)
    emit([{**_pair_columns(pair), "visibility": visibility(pair)}], args)
    return EXIT_OK


def cmd_g2(args: argparse.Namespace) -> int:
    pair = pair_from_args(args)
    dphis = args.dphi if args.dphi else _phase_grid(0.0, 2.0 * math.pi, args.count, endpoint=False)
    rows = []
    for d in dphis:
        rows.append(
            {
                "delta_phi": d,
                "g2": g2(pair, 0.0, d),
                "variance_corr": variance_corr(pair, 0.0, d),
                "normalized_g2": normalized_g2(pair, 0.0, d),
                "determinant": cs_determinant(pair, 0.0, d),
            }
        )
    emit(rows, args)
    return EXIT_OK


def _witness_row(pair: PairConfig) -> dict:
    rep = witness(pair)
    return {
        **_pair_columns(pair),
        "visibility": visibility(pair),
        "s_max": rep.s_max,
        "s_max_infinite": rep.s_max_infinite,
        "delta_phi_star": rep.delta_phi_star,
        "determinant_min": rep.determinant_min,
        "diagonal_value": rep.diagonal_value,
        "violated": rep.violated,
        "status": rep.status,
    }


def cmd_schwarz(args: argparse.Namespace) -> int:
    pair = pair_from_args(args)
    row = _witness_row(pair)
    if args.dphi is not None:
        try:
            ratio = schwarz_ratio(pair, 0.0, args.dphi)
        except UndefinedRatioError as exc:
            raise CliError(str(exc)) from exc
        row["delta_phi"] = args.dphi
        row["ratio"] = ratio
        row["ratio_infinite"] = math.isinf(ratio)
    row["threshold"] = cs_violation_threshold(pair.pairing).describe()
    emit([row], args)
    return EXIT_OK


def _bell_threshold_text(pairing: Pairing) -> tuple[float | None, str]:
    if pairing is Pairing.CLASS:
        return None, "never violated (V <= 0.5)"
    if pairing is Pairing.QQ:
        return None, "always violated (V = 1)"
    th = bell_threshold(pairing)
    return th.net, f"violated for net < {th.net:.12g} (nbar < {th.nbar:.12g})"


def cmd_bell(args: argparse.Namespace) -> int:
    pair = pair_from_args(args)
    if args.angles:
        rep = chsh(pair, *args.angles, band=args.band)
    else:
        rep = chsh_max(pair, band=args.band)
    net_th, text = _bell_threshold_text(pair.pairing)
    row = {
        **_pair_columns(pair),
        "visibility": rep.visibility,
        "phi1": rep.angles[0],
        "phi1p": rep.angles[1],
        "phi2": rep.angles[2],
        "phi2p": rep.angles[3],
        "chsh_value": rep.chsh_value,
        "violated": rep.violated,
        "status": rep.status,
        "threshold_net": net_th,
        "threshold": text,
    }
    emit([row], args)
    return EXIT_OK


def fig2_rows(count: int = 181, net_min: float = 1.0, net_max: float = 10.0) -> list[dict]:
    """Visibility versus net photon number for every pairing."""
    rows = []
    for net in _phase_grid(net_min, net_max, count):
        row: dict = {"net": net}
        for p in FIG2_PAIRINGS:
            row[f"V_{p.value}"] = visibility_at_net(p, net)
        row["V_QM"] = 1.0
        row["V_Class"] = 0.5
        row["Bell"] = 1.0 / math.sqrt(2.0)
        rows.append(row)
    return rows


def fig3_rows(count: int = 50) -> list[dict]:
    """Maximal Schwarz ratio versus visibility, with divergence and threshold points added."""
    specials = {
        Pairing.T: [0.5, 1.0 / math.sqrt(2.0)],
        Pairing.PT: [0.375],
        Pairing.C: [0.8],
        Pairing.PC: [],
        Pairing.CLASS: [],
    }
    rows = []
    for p in FIG3_PAIRINGS:
        v_max = 0.5 if p is Pairing.CLASS else 1.0
        grid = sorted(set(_phase_grid(v_max / count, v_max, count)) | set(specials[p]))
        for v in grid:
            rep = witness_at_visibility(p, v)
            net = rep.nbar if p is Pairing.CLASS else make_pair(p, rep.nbar).net
            rows.append(
                {
                    "pairing": p,
                    "visibility": v,
                    "nbar": rep.nbar,
                    "net": net,
                    "s_max": rep.s_max,
                    "s_max_infinite": rep.s_max_infinite,
                    "delta_phi_star": rep.delta_phi_star,
                    "violated": rep.violated,
                }
            )
    return rows


def cmd_fig2(args: argparse.Namespace) -> int:
    emit(fig2_rows(args.count, args.net_min, args.net_max), args)
    return EXIT_OK


def cmd_fig3(args: argparse.Namespace) -> int:
    emit(fig3_rows(args.count), args)
    return EXIT_OK


@dataclass
class SweepSpec:
    pairing: Pairing
    parameter: str
    start: float
    stop: float
    count: int
    quantities: tuple[str, ...]
    output_format: str = "csv"
    output_path: str | None = None

    def __post_init__(self):
        self.pairing = Pairing(self.pairing)
        if self.parameter not in ("nbar", "net", "delta_phi"):
            raise DomainError(f"unknown sweep parameter {self.parameter!r}")
        if self.count < 2:
            raise DomainError(f"count must be >= 2, got {self.count}")
        if not self.start < self.stop:
            raise DomainError(f"start must be < stop, got {self.start} >= {self.stop}")
        bad = [q for q in self.quantities if q not in QUANTITIES]
        if bad:
            raise DomainError(f"unknown quantities {bad}")
        if self.pairing is Pairing.QQ and self.parameter in ("nbar", "net"):
            raise DomainError("QQ has no source-B intensity to sweep")


def run_sweep(
    sweep: SweepSpec, fixed_pair: PairConfig | None = None, dphi: float = 0.0, nbar_a: float | None = None
) -> list[dict]:
    """Evaluate ``sweep.quantities`` along the sweep.

    A ``delta_phi`` sweep runs at ``fixed_pair``; ``nbar``/``net`` sweeps use
    the phase difference ``dphi`` (and ``nbar_a`` for Class).
    """
    rows = []
    for x in _phase_grid(sweep.start, sweep.stop, sweep.count):
        if sweep.parameter == "delta_phi":
            pair, d = fixed_pair, x
        else:
            nbar = nbar_from_net(source_b_kind(sweep.pairing), x) if sweep.parameter == "net" else x
            pair, d = make_pair(sweep.pairing, nbar, nbar_a=nbar_a), dphi
        row: dict = {sweep.parameter: x}
        row.update((k, v) for k, v in _pair_columns(pair).items() if k != sweep.parameter)
        for q in sweep.quantities:
            if q == "g2":
                row["g2"] = g2(pair, 0.0, d)
            elif q == "visibility":
                row["visibility"] = visibility(pair)
            elif q == "determinant":
                row["determinant"] = cs_determinant(pair, 0.0, d)
            elif q == "schwarz":
                rep = witness(pair)
                row["s_max"] = rep.s_max
                row["s_max_infinite"] = rep.s_max_infinite
                row["cs_violated"] = rep.violated
            elif q == "chsh":
                try:
                    rep = chsh_max(pair)
                except DomainError:
                    # G2 vanishes identically, e.g. T or C with source B dark
                    row["chsh_max"], row["chsh_violated"] = None, None
                else:
                    row["chsh_max"] = rep.chsh_value
                    row["chsh_violated"] = rep.violated
        rows.append(row)
    return rows


def cmd_sweep(args: argparse.Namespace) -> int:
    sweep = SweepSpec(
        Pairing(args.pair),
        args.param,
        args.start,
        args.stop,
        args.count,
        tuple(args.quantity or ("g2",)),
        args.format,
        args.out,
    )
    fixed = pair_from_args(args) if sweep.parameter == "delta_phi" else None
    emit(run_sweep(sweep, fixed, args.dphi, args.nbar_a), args)
    return EXIT_OK


def verify_rows(
    pairings: Sequence[Pairing],
    nbars: Sequence[float],
    tol: float,
    tail_tol: float,
    truncation: int | None = None,
) -> tuple[list[dict], list[str]]:
    """Compare closed forms with the Fock engine; returns per-pairing rows and offenders."""
    rows, offenders = [], []
    dphis = _phase_grid(0.0, 2.0 * math.pi, VERIFY_POINTS, endpoint=False)
    for p in pairings:
        worst_g2 = worst_m = 0.0
        for nb in nbars if p is not Pairing.QQ else (0.0,):
            pair = make_pair(p, nb)
            for k in (1, 2):
                src = pair.source_b
                exact = moment(src, k)
                num = moment_numeric(src, k, truncation, tail_tol)
                dev = abs(num - exact) / max(1.0, abs(exact))
                worst_m = max(worst_m, dev)
                if dev > tol:
                    offenders.append(f"moment k={k} {p.value} nbar={nb:g} dev={dev:.3e}")
            for d in dphis:
                exact = g2(pair, 0.0, d)
                num = g2_numeric(pair, 0.0, d, truncation, tail_tol)
                dev = abs(num - exact) / max(1.0, abs(exact))
                worst_g2 = max(worst_g2, dev)
                if dev > tol:
                    offenders.append(f"g2 {p.value} nbar={nb:g} dphi={d:.6g} dev={dev:.3e}")
        rows.append(
            {
                "pairing": p,
                "max_dev_g2": worst_g2,
                "max_dev_moment": worst_m,
                "ok": max(worst_g2, worst_m) <= tol,
            }
        )
    return rows, offenders


def cmd_verify(args: argparse.Namespace) -> int:
    pairings = [Pairing(args.pair)] if args.pair else list(Pairing)
    if args.net is not None and args.pair:
        nbars = [nbar_from_net(source_b_kind(args.pair), args.net)]
    elif args.nbar is not None:
        nbars = [args.nbar]
    else:
        nbars = list(VERIFY_NBARS)
    try:
        rows, offenders = verify_rows(pairings, nbars, args.tol, args.tail_tol, args.truncation)
    except TruncationError as exc:
        print(f"error: truncation: {exc}", file=sys.stderr)
        return EXIT_MISMATCH
    emit(rows, args)
    if offenders:
        print(f"error: {len(offenders)} mismatches above tol={args.tol:g}: " + "; ".join(offenders[:20]), file=sys.stderr)
        return EXIT_MISMATCH
    return EXIT_OK


# ---------------------------------------------------------------------------
# parser
# ---------------------------------------------------------------------------


class _Parser(argparse.ArgumentParser):
    def error(self, message: str):  # noqa: D401
        self.exit(EXIT_USAGE, f"error: {message}\n")


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("csv", "json"), default="csv")
    common.add_argument("--out", metavar="PATH", help="write output to PATH instead of stdout")
    common.add_argument("--tol", type=float, default=1e-9, help="verification tolerance (relative)")
    common.add_argument("--tail-tol", type=float, default=DEFAULT_TAIL_TOL, help="Fock truncation tail tolerance")

    source = argparse.ArgumentParser(add_help=False)
    source.add_argument("--pair", choices=[p.value for p in Pairing], required=True)
    amount = source.add_mutually_exclusive_group()
    amount.add_argument("--nbar", type=float, help="mean photon number of source B's coherent/thermal part")
    amount.add_argument("--net", type=float, help="net photon number of source B")
    source.add_argument("--nbar-a", type=float, help="Class only: mean photon number of beam A")
    source.add_argument("--nbar-b", type=float, help="Class only: mean photon number of beam B")

    parser = _Parser(prog="photocorr", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("visibility", parents=[common, source], help="fringe visibility")
    p.set_defaults(func=cmd_visibility)

    p = sub.add_parser("g2", parents=[common, source], help="G2 and derived correlations versus phase")
    p.add_argument("--dphi", type=float, nargs="+", help="phase differences (default: 16-point grid)")
    p.add_argument("--count", type=int, default=16)
    p.set_defaults(func=cmd_g2)

    p = sub.add_parser("schwarz", parents=[common, source], help="Cauchy-Schwarz witness")
    p.add_argument("--dphi", type=float, help="also report the ratio at this phase difference")
    p.set_defaults(func=cmd_schwarz)

    p = sub.add_parser("bell", parents=[common, source], help="CHSH value and Bell threshold")
    p.add_argument("--angles", type=float, nargs=4, metavar=("PHI1", "PHI1P", "PHI2", "PHI2P"))
    p.add_argument("--band", type=float, default=1e-4, help="half-width of the 'boundary' band around 2")
    p.set_defaults(func=cmd_bell)

    p = sub.add_parser("sweep", parents=[common, source], help="parameter sweep")
    p.add_argument("--param", choices=("nbar", "net", "delta_phi"), required=True)
    p.add_argument("--start", type=float, required=True)
    p.add_argument("--stop", type=float, required=True)
    p.add_argument("--count", type=int, default=21)
    p.add_argument("--quantity", action="append", choices=QUANTITIES)
    p.add_argument("--dphi", type=float, default=0.0, help="phase difference for nbar/net sweeps")
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("fig2", parents=[common], help="visibility versus net photon number")
    p.add_argument("--count", type=int, default=181)
    p.add_argument("--net-min", type=float, default=1.0)
    p.add_argument("--net-max", type=float, default=10.0)
    p.set_defaults(func=cmd_fig2)

    p = sub.add_parser("fig3", parents=[common], help="maximal Schwarz ratio versus visibility")
    p.add_argument("--count", type=int, default=50)
    p.set_defaults(func=cmd_fig3)

    p = sub.add_parser("verify", parents=[common], help="closed forms against the Fock engine")
    p.add_argument("--pair", choices=[p.value for p in Pairing])
    amount = p.add_mutually_exclusive_group()
    amount.add_argument("--nbar", type=float)
    amount.add_argument("--net", type=float)
    p.add_argument("--truncation", type=int, help="force this Fock cutoff instead of choosing one")
    p.set_defaults(func=cmd_verify)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except CliError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.code
    except (DomainError, UndefinedRatioError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
