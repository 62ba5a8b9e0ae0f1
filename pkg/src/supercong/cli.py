"""Command-line interface.

Exit codes: 0 verified, 1 a proven congruence failed, 2 usage error,
3 I/O or internal arithmetic error.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import logging
import os
import sys
from dataclasses import dataclass, field
from pathlib import Path

from .exactnum import (
    DomainError,
    PadicContext,
    format_rational,
    odd_primes,
    parse_rational,
    residue_int,
)
from .identities import IdentityId, SampleConfig, run_identity_suite
from .pgamma import TABLE_LIMIT, GammaTable, gamma_p
from .verifier import (
    LEMMA_TAGS,
    PROVEN_TAGS,
    STATEMENTS,
    CaseReport,
    Verdict,
    enumerate_cases,
    run_cases,
)

log = logging.getLogger("supercong")

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_IO = 0, 1, 2, 3
REPORT_FIELDS = ("statement", "p", "r", "target", "valuation", "at_least", "verdict", "elapsed_ms")
SUITE_FIELDS = ("identity", "passed", "failed", "skipped_poles")


class UsageError(Exception):
    pass


@dataclass
class CliConfig:
    subcommand: str
    statements: list[str] = field(default_factory=list)
    p_min: int = 3
    p_max: int = 31
    r_min: int = -9
    r_max: int = 1
    probe: bool = False
    samples: int = 50
    seed: int = 42
    identities: list[str] = field(default_factory=list)
    p: int | None = None
    x: object = None
    precision: int = 1
    output: str | None = None
    format: str = "json"
    jobs: int = 1
    cache_dir: str = "cache"
    timings: bool = False


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="supercong", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="subcommand", required=True, parser_class=_Parser)

    def common(p: argparse.ArgumentParser):
        p.add_argument("--output", "-o", help="report path (default: stdout)")
        p.add_argument("--format", choices=("json", "csv"), default="json")
        p.add_argument("--jobs", "-j", type=int, default=os.cpu_count() or 1)
        p.add_argument("--cache-dir", default=None)

    def ranges(p: argparse.ArgumentParser):
        p.add_argument("--p-min", type=int, default=3)
        p.add_argument("--p-max", type=int, default=31)
        p.add_argument("--r-min", type=int, default=-9)
        p.add_argument("--r-max", type=int, default=1)
        p.add_argument("--probe", action="store_true",
                       help="report the exact valuation of LHS - RHS")
        p.add_argument("--timings", action="store_true",
                       help="record elapsed_ms (makes reports non-reproducible)")

    v = sub.add_parser("verify", help="verify congruence statements")
    v.add_argument("--statement", "-s", action="append", default=[],
                   help=f"statement tag, repeatable ({', '.join(STATEMENTS)})")
    ranges(v)
    common(v)

    lm = sub.add_parser("lemmas", help="verify the auxiliary lemma congruences")
    lm.add_argument("--statement", "-s", action="append", default=[])
    ranges(lm)
    common(lm)

    idt = sub.add_parser("identities", help="run hypergeometric identity suites")
    idt.add_argument("--identity", action="append", default=[],
                     help=f"identity tag, repeatable ({', '.join(i.value for i in IdentityId)})")
    idt.add_argument("--samples", type=int, default=50)
    idt.add_argument("--seed", type=int, default=42)
    idt.add_argument("--r-min", type=int, default=-9)
    common(idt)

    g = sub.add_parser("gamma", help="evaluate Gamma_p(x) mod p^n")
    g.add_argument("--p", type=int, required=True)
    g.add_argument("--x", required=True)
    g.add_argument("--precision", "-n", type=int, default=1)
    g.add_argument("--cache-dir", default=None)
    return parser


def parse_args(argv) -> CliConfig:
    ns = _build_parser().parse_args(argv)
    cfg = CliConfig(subcommand=ns.subcommand)
    for name in ("output", "format", "jobs", "p_min", "p_max", "r_min", "r_max", "probe",
                 "samples", "seed", "p", "precision", "timings"):
        if hasattr(ns, name):
            setattr(cfg, name, getattr(ns, name))
    cache = getattr(ns, "cache_dir", None) or os.environ.get("PCL_CACHE_DIR") or "cache"
    cfg.cache_dir = cache
    if cfg.jobs < 1:
        raise UsageError("--jobs must be >= 1")

    if cfg.subcommand in ("verify", "lemmas"):
        tags = [t for s in ns.statement for t in s.split(",") if t]
        for t in tags:
            if t not in STATEMENTS:
                raise UsageError(f"--statement: unknown tag {t!r}")
        if cfg.subcommand == "lemmas":
            bad = [t for t in tags if t not in LEMMA_TAGS]
            if bad:
                raise UsageError(f"--statement: {', '.join(bad)} is not a lemma")
            tags = tags or list(LEMMA_TAGS)
        cfg.statements = tags or list(PROVEN_TAGS)
        if cfg.p_max < 3:
            raise UsageError(f"--p-max: no odd prime <= {cfg.p_max}")
        if cfg.p_max < cfg.p_min:
            raise UsageError("--p-max must be >= --p-min")
        if not odd_primes(cfg.p_min, cfg.p_max):
            raise UsageError(f"--p-min/--p-max: no odd prime in [{cfg.p_min}, {cfg.p_max}]")
        if cfg.r_max > 1:
            raise UsageError("--r-max must be <= 1")
        if cfg.r_min > cfg.r_max:
            raise UsageError("--r-min must be <= --r-max")
    elif cfg.subcommand == "identities":
        try:
            cfg.identities = [IdentityId(t).value for s in ns.identity for t in s.split(",") if t]
        except ValueError as exc:
            raise UsageError(f"--identity: {exc}") from None
        cfg.identities = cfg.identities or [i.value for i in IdentityId]
        if cfg.samples < 1:
            raise UsageError("--samples must be >= 1")
    elif cfg.subcommand == "gamma":
        try:
            cfg.x = parse_rational(ns.x)
        except ValueError:
            raise UsageError(f"--x: unparsable rational {ns.x!r}") from None
        try:
            PadicContext(cfg.p, cfg.precision)
        except ValueError as exc:
            raise UsageError(f"--p/--precision: {exc}") from None
    return cfg


# -- reports ------------------------------------------------------------------------


def _sort_key(row: dict):
    return (row["statement"], row["p"], row["r"])


def render_report(rows: list[dict], fmt: str) -> str:
    """Serialise rows in a byte-stable way (fixed key order, trailing newline)."""
    if fmt == "json":
        if not rows:
            return "[]\n"
        return json.dumps(rows, indent=2, ensure_ascii=False) + "\n"
    buf = io.StringIO()
    fields = list(rows[0]) if rows else list(REPORT_FIELDS)
    writer = csv.DictWriter(buf, fieldnames=fields, lineterminator="\n")
    writer.writeheader()
    for row in rows:
        writer.writerow({k: json.dumps(v) if isinstance(v, (list, dict)) else v
                         for k, v in row.items()})
    return buf.getvalue()


def case_rows(cases: list[CaseReport], timings: bool = False) -> list[dict]:
    rows = []
    for c in cases:
        d = c.to_dict(timings)
        rows.append({k: d[k] for k in REPORT_FIELDS})
    return sorted(rows, key=_sort_key)


def emit_report(cases, fmt: str, path: str | None, timings: bool = False) -> None:
    """Write case reports to ``path`` (stdout when ``None``); raises OSError."""
    rows = case_rows(cases, timings) if cases and isinstance(cases[0], CaseReport) else list(cases)
    _write(render_report(rows, fmt), path)


def _write(text: str, path: str | None) -> None:
    if path is None or path == "-":
        sys.stdout.write(text)
        sys.stdout.flush()
        return
    Path(path).write_text(text, encoding="utf-8", newline="")


def exit_code_for(rows: list[dict]) -> int:
    """0 unless some proven statement reports FAILS."""
    for row in rows:
        st = STATEMENTS.get(row["statement"])
        if st is not None and st.proven and row["verdict"] == Verdict.FAILS.value:
            return EXIT_FAIL
    return EXIT_OK


# -- commands -----------------------------------------------------------------------


def cmd_verify(cfg: CliConfig) -> int:
    work = []
    for tag in cfg.statements:
        for p, r in enumerate_cases(tag, cfg.p_max, cfg.r_min, p_min=cfg.p_min, r_max=cfg.r_max):
            work.append((tag, p, r))
    try:
        cases = run_cases(work, probe=cfg.probe, jobs=cfg.jobs)
    except ArithmeticError as exc:
        log.error("arithmetic error: %s", exc)
        return EXIT_IO
    rows = case_rows(cases, cfg.timings)
    for row in rows:
        if row["verdict"] == "FAILS":
            st = STATEMENTS[row["statement"]]
            level = logging.ERROR if st.proven else logging.INFO
            log.log(level, "%s fails at p=%d r=%d (valuation %s < %d)",
                    row["statement"], row["p"], row["r"], row["valuation"], row["target"])
    try:
        _write(render_report(rows, cfg.format), cfg.output)
    except OSError as exc:
        log.error("cannot write report: %s", exc)
        return EXIT_IO
    return exit_code_for(rows)


def cmd_identities(cfg: CliConfig) -> int:
    rows = []
    for tag in cfg.identities:
        sc = SampleConfig(seed=cfg.seed, samples=cfg.samples, r_min=cfg.r_min)
        rep = run_identity_suite(tag, sc)
        rows.append({k: rep.to_dict()[k] for k in SUITE_FIELDS})
    try:
        _write(render_report(rows, cfg.format), cfg.output)
    except OSError as exc:
        log.error("cannot write report: %s", exc)
        return EXIT_IO
    return EXIT_FAIL if any(r["failed"] for r in rows) else EXIT_OK


def cmd_gamma(cfg: CliConfig) -> int:
    ctx = PadicContext(cfg.p, cfg.precision)
    try:
        if ctx.modulus <= TABLE_LIMIT:
            m = residue_int(cfg.x, ctx.modulus, ctx.p)
            value = GammaTable(ctx, cfg.cache_dir)[m]
        else:
            value = gamma_p(cfg.x, ctx).value
    except DomainError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    print(f"Gamma_{ctx.p}({format_rational(cfg.x)}) mod {ctx.p}^{ctx.n} = {value}")
    return EXIT_OK


COMMANDS = {
    "verify": cmd_verify,
    "lemmas": cmd_verify,
    "identities": cmd_identities,
    "gamma": cmd_gamma,
}


def main(argv=None) -> int:
    logging.basicConfig(level=logging.WARNING, format="%(levelname)s: %(message)s")
    try:
        cfg = parse_args(sys.argv[1:] if argv is None else argv)
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    try:
        return COMMANDS[cfg.subcommand](cfg)
    except Exception as exc:  # noqa: BLE001
        log.exception("internal error: %s", exc)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
