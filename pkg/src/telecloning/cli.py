"""Command-line front end.

Subcommands::

    telecloning tables --which {I,II,III}
    telecloning fig --id {2,3,4a,4b,5} --grid N --out PATH
    telecloning man --receivers M --f-min X [--eta-p E] [--eta-c E]
    telecloning simulate --config PATH [--verify]

Exit codes: 0 success, 1 verification failure, 2 usage or domain error.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
from dataclasses import dataclass
from typing import Sequence

import jsonschema

from telecloning import analysis
from telecloning.constants import VERIFY_TOL, VERIFY_TOL_ENV
from telecloning.errors import DomainError, TeleclonError
from telecloning.measurement import AcceptanceMask
from telecloning.protocol import RoundSchedule, run_schedule
from telecloning.states import DisentangleParams

EXIT_OK, EXIT_VERIFY, EXIT_USAGE = 0, 1, 2

SCENARIO_SCHEMA = {
    "$schema": "https://json-schema.org/draft/2020-12/schema",
    "title": "telecloning scenario",
    "type": "object",
    "additionalProperties": False,
    "required": ["receivers", "rounds"],
    "properties": {
        "receivers": {"type": "integer", "minimum": 1, "maximum": 4},
        "eta": {
            "type": "object",
            "additionalProperties": False,
            "properties": {
                "P": {"type": "number", "minimum": 0, "maximum": 1},
                "A": {"type": "number", "minimum": 0, "maximum": 1},
                "C": {"type": "array", "items": {"type": "number", "minimum": 0, "maximum": 1}},
            },
        },
        "rounds": {
            "type": "array",
            "minItems": 1,
            "items": {
                "type": "object",
                "additionalProperties": False,
                "required": ["accept"],
                "properties": {
                    "lambda": {"type": "number"},
                    "accept": {"type": "array", "items": {"type": "boolean"}},
                },
            },
        },
        "f_min": {"type": "number"},
    },
}

# reference table values: (lo, hi, MAN) rows
REFERENCE_TABLES = {
    "I": [(0.6667, 0.6754, 3), (0.6755, 0.7222, 2), (0.7223, 0.8333, 1)],
    "II": [(1.0, 0.7327, 3), (0.7326, 0.3675, 2), (0.3674, 0.1349, 1)],
    "III": [(1.0, 0.7290, 3), (0.7289, 0.3115, 2), (0.3114, 0.0101, 1)],
}
TABLE_FAMILY = {"I": "f_l", "II": "eta_P", "III": "eta_C"}


class UsageError(TeleclonError):
    pass


@dataclass
class OutputTable:
    headers: list[str]
    rows: list[tuple]
    comment: str = ""

    def __post_init__(self):
        for row in self.rows:
            if len(row) != len(self.headers):
                raise ValueError("ragged output table")

    def to_csv(self, with_comment: bool = True) -> str:
        buf = io.StringIO()
        if with_comment and self.comment:
            buf.write(f"# {self.comment}\n")
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(self.headers)
        for row in self.rows:
            w.writerow([fmt(v) for v in row])
        return buf.getvalue()


def fmt(v) -> str:
    if isinstance(v, bool) or isinstance(v, int) or isinstance(v, str):
        return str(v)
    return f"{float(v):.15g}"


def cmd_tables(which: str) -> OutputTable:
    if which not in REFERENCE_TABLES:
        raise UsageError(f"unknown table {which!r}; expected I, II or III")
    family = TABLE_FAMILY[which]
    fn, start, stop = analysis.family_function(family)
    steps = analysis.step_points(fn, start, stop)
    edges = [2.0 / 3.0 if family == "f_l" else start] + [x for _, _, x in steps]
    levels = [fn(start)] + [after for _, after, _ in steps]
    rows = []
    for k, (lo_p, hi_p, man_p) in enumerate(REFERENCE_TABLES[which]):
        lo = edges[k]
        hi = edges[k + 1] if k + 1 < len(edges) else stop
        rows.append((lo, hi, levels[k], lo_p, hi_p, man_p, abs(lo - lo_p), abs(hi - hi_p)))
    headers = ["lo", "hi", "MAN", "ref_lo", "ref_hi", "ref_MAN", "abs_diff_lo", "abs_diff_hi"]
    return OutputTable(headers, rows, f"tables --which {which} family={family}")


def cmd_fig(fig_id: str, grid: int, out_path: str | None) -> OutputTable:
    headers, rows = analysis.figure_data(fig_id, grid)
    table = OutputTable(headers, rows, f"fig --id {fig_id} --grid {grid}")
    if out_path:
        with open(out_path, "w", newline="") as fh:
            fh.write(table.to_csv(with_comment=False))
    return table


def cmd_man(receivers: int, f_min: float, eta_p: float | None, eta_c: float | None) -> OutputTable:
    etas = None
    if eta_p is not None or eta_c is not None:
        ep = 1.0 if eta_p is None else eta_p
        ec = 1.0 if eta_c is None else eta_c
        etas = DisentangleParams(ep, 1.0, (ec,) * receivers)
    res = analysis.man(analysis.ScenarioConfig(receivers, etas, f_min))
    rows = [(i, lam) for i, lam in enumerate(res.lambda_schedule, start=1)]
    if res.first_invalid_lambda is not None:
        rows.append((len(rows) + 1, res.first_invalid_lambda))
    head = f"man --receivers {receivers} --f-min {fmt(f_min)}"
    if eta_p is not None:
        head += f" --eta-p {fmt(eta_p)}"
    if eta_c is not None:
        head += f" --eta-c {fmt(eta_c)}"
    return OutputTable(["round", "min_lambda"], rows, f"{head} MAN={res.man}")


def load_scenario(path: str) -> dict:
    try:
        with open(path) as fh:
            data = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise UsageError(f"cannot read scenario {path!r}: {exc}") from None
    try:
        jsonschema.validate(data, SCENARIO_SCHEMA)
    except jsonschema.ValidationError as exc:
        where = "/" + "/".join(str(p) for p in exc.absolute_path)
        raise UsageError(f"scenario field {where}: {exc.message}") from None
    return data


def scenario_inputs(data: dict) -> tuple[int, DisentangleParams, RoundSchedule]:
    M = data["receivers"]
    eta = data.get("eta", {})
    etas = DisentangleParams(eta.get("P", 1.0), eta.get("A", 1.0), eta.get("C", [1.0] * M))
    if etas.M != M:
        raise UsageError(f"scenario field /eta/C: expected {M} entries, got {etas.M}")
    f_min = data.get("f_min")
    if f_min is not None and f_min <= 0.5:
        raise DomainError(f"f_min must exceed 1/2, got {f_min!r}")
    pref = analysis.ScenarioConfig(M, etas).prefactor()
    rounds, remaining = [], M
    for n, rnd in enumerate(data["rounds"], start=1):
        if len(rnd["accept"]) != remaining:
            raise UsageError(
                f"scenario field /rounds/{n - 1}/accept: expected {remaining} entries"
            )
        if "lambda" in rnd:
            lam = rnd["lambda"]
        elif f_min is not None:
            lam = analysis.min_lambda(f_min, pref)
        else:
            raise UsageError(f"scenario field /rounds/{n - 1}: lambda required without f_min")
        if not 0.0 < lam <= 1.0 + analysis.LAMBDA_SLACK:
            raise DomainError(f"round {n}: lambda = {lam:.10g} is outside (0, 1]")
        lam = min(lam, 1.0)
        pref *= analysis.p_kernel(lam)
        remaining -= sum(rnd["accept"])
        rounds.append((lam, AcceptanceMask(rnd["accept"])))
    return M, etas, RoundSchedule(rounds)


def verify_tolerance() -> float:
    raw = os.environ.get(VERIFY_TOL_ENV)
    if raw is None:
        return VERIFY_TOL
    try:
        return float(raw)
    except ValueError:
        raise UsageError(f"{VERIFY_TOL_ENV}={raw!r} is not a number") from None


def cmd_simulate(path: str) -> OutputTable:
    M, etas, schedule = scenario_inputs(load_scenario(path))
    reports = run_schedule(M, etas, schedule)
    lams = [lam for lam, _ in schedule]
    rows = [(r.round, r.receiver, lams[r.round - 1], r.f_sim, r.f_closed, r.abs_diff) for r in reports]
    headers = ["round", "receiver", "lambda", "f_sim", "f_closed", "abs_diff"]
    return OutputTable(headers, rows, f"simulate --config {os.path.basename(path)}")


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="telecloning", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    t = sub.add_parser("tables", help="reproduce the MAN boundary tables")
    t.add_argument("--which", required=True, choices=sorted(REFERENCE_TABLES))

    f = sub.add_parser("fig", help="write figure data as CSV")
    f.add_argument("--id", dest="fig_id", required=True, choices=analysis.FIGURES)
    f.add_argument("--grid", type=int, required=True)
    f.add_argument("--out", help="CSV path (stdout when omitted)")

    m = sub.add_parser("man", help="maximal attempting number for one scenario")
    m.add_argument("--receivers", type=int, required=True)
    m.add_argument("--f-min", type=float, required=True)
    m.add_argument("--eta-p", type=float)
    m.add_argument("--eta-c", type=float)

    s = sub.add_parser("simulate", help="run a JSON scenario through the simulator")
    s.add_argument("--config", required=True)
    s.add_argument("--verify", action="store_true", help=f"exit 1 if |f_sim - f_closed| exceeds ${VERIFY_TOL_ENV}")
    return p


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    out = sys.stdout
    try:
        if args.command == "tables":
            out.write(cmd_tables(args.which).to_csv())
        elif args.command == "fig":
            table = cmd_fig(args.fig_id, args.grid, args.out)
            if not args.out:
                out.write(table.to_csv(with_comment=False))
        elif args.command == "man":
            out.write(cmd_man(args.receivers, args.f_min, args.eta_p, args.eta_c).to_csv())
        else:
            tol = verify_tolerance()
            table = cmd_simulate(args.config)
            out.write(table.to_csv())
            if args.verify:
                worst = max(row[-1] for row in table.rows)
                if worst > tol:
                    print(f"verification failed: max |f_sim - f_closed| = {worst:.3e} > {tol:.1e}", file=sys.stderr)
                    return EXIT_VERIFY
    except (TeleclonError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
