"""Command line entry point: ``verify``, ``compute`` and ``list-suites``.

Exit codes: 0 all checks passed, 1 some check failed, 2 usage or
configuration error.
"""

from __future__ import annotations

import argparse
import json
import multiprocessing as mp
import sys
import time
from fractions import Fraction
from typing import Any, Sequence

from . import __version__
from .series import EXACT, TruncSeries
from .suites import SUITES, TWISTED_SUITES, CheckRecord, RunConfig, run_thunk, suite_thunks, tag
from .yangian import Yangian, check_bounds, series_counit

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2
TARGETS = ("berezinian", "berezinian-tw-fusion", "berezinian-tw-explicit", "z", "z-tw", "minor")


class UsageError(Exception):
    pass


class Parser(argparse.ArgumentParser):
    """argparse exits with status 2 on bad usage already; keep messages on stderr."""

    def error(self, message: str) -> None:  # pragma: no cover - argparse plumbing
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def add_shape_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("-M", type=int, default=1, help="even dimension")
    p.add_argument("-N", type=int, default=2, help="odd dimension")
    p.add_argument("-D", type=int, default=3, help="truncation order in u^-1")
    p.add_argument("--mode", choices=("strict", "extended"), default="strict")
    p.add_argument("--output", choices=("text", "json"), default="text")


def build_parser() -> argparse.ArgumentParser:
    parser = Parser(prog="superyangian", description="Exact checks for super Yangians and their twisted versions.")
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True, parser_class=Parser)

    v = sub.add_parser("verify", help="run verification suites")
    add_shape_flags(v)
    v.add_argument("--suite", action="append", default=None,
                   help="suite name (repeatable or comma separated); default: all applicable")
    v.add_argument("--seed", type=int, default=0)
    v.add_argument("--budget-seconds", type=float, default=None, help="wall-clock budget per suite")
    v.add_argument("--workers", type=int, default=1)
    v.add_argument("--timings", action="store_true", help="record runtimes (reports stop being byte-stable)")

    c = sub.add_parser("compute", help="print a series to order D")
    c.add_argument("target", choices=TARGETS)
    add_shape_flags(c)
    c.add_argument("--counit", action="store_true", help="apply the counit to every coefficient")
    c.add_argument("--p", type=int, default=None, help="even size of a quantum minor")
    c.add_argument("--q", type=int, default=None, help="odd size of a quantum minor")
    c.add_argument("--rows", default=None, help="comma separated row indices of a minor")
    c.add_argument("--cols", default=None, help="comma separated column indices of a minor")

    sub.add_parser("list-suites", help="list suite names")
    return parser


# verify ----------------------------------------------------------------------

def selected_suites(raw: list[str] | None, N: int) -> list[str]:
    if not raw:
        return [s for s in SUITES if N % 2 == 0 or s not in TWISTED_SUITES]
    out: list[str] = []
    for item in raw:
        out += [s.strip() for s in item.split(",") if s.strip()]
    return list(dict.fromkeys(out))


def _suite_worker(name: str, cfg: RunConfig, queue: Any) -> None:
    for i, thunk in enumerate(suite_thunks(name, cfg)):
        queue.put((name, i, [r.to_json() for r in tag(run_thunk(thunk), name)]))
    queue.put((name, None, None))


def _skipped(name: str, done: int, total: int, budget: float | None) -> CheckRecord:
    return CheckRecord(f"{name}.remaining", "", {"suite": name, "checks_not_run": total - done}, "", "skipped",
                       note=f"skipped (budget {budget}s)")


def run_suites(cfg: RunConfig, budget: float | None = None, workers: int = 1) -> list[CheckRecord]:
    """Run every selected suite; each suite gets its own wall-clock budget."""
    if budget is None and workers <= 1:
        out: list[CheckRecord] = []
        for name in cfg.suites:
            for thunk in suite_thunks(name, cfg):
                out += tag(run_thunk(thunk), name)
        return out

    ctx = mp.get_context("fork")
    queue = ctx.Queue()
    pending = list(cfg.suites)
    running: dict[str, tuple[Any, float, int]] = {}
    counts = {name: len(suite_thunks(name, cfg)) for name in cfg.suites}
    done = {name: 0 for name in cfg.suites}
    records: list[CheckRecord] = []

    while pending or running:
        while pending and len(running) < max(workers, 1):
            name = pending.pop(0)
            proc = ctx.Process(target=_suite_worker, args=(name, cfg, queue), daemon=True)
            proc.start()
            running[name] = (proc, time.monotonic(), counts[name])
        try:
            name, idx, recs = queue.get(timeout=0.2)
        except Exception:
            name = None
        if name is not None and name in running:
            if idx is None:
                running.pop(name)[0].join()
            else:
                records += [CheckRecord(**r) for r in recs]
                done[name] += 1
        now = time.monotonic()
        for n, (proc, start, total) in list(running.items()):
            if budget is not None and now - start > budget:
                proc.terminate()
                proc.join()
                running.pop(n)
                records.append(_skipped(n, done[n], total, budget))
            elif not proc.is_alive() and queue.empty():
                proc.join()
                running.pop(n)
                if done[n] < total:
                    records.append(CheckRecord(f"{n}.error", "", {"suite": n}, "", "fail",
                                               {"key": "worker", "lhs": f"exit code {proc.exitcode}", "rhs": "0"}))
    return records


def canonical(records: Sequence[CheckRecord]) -> list[CheckRecord]:
    return sorted(records, key=lambda r: (r.params.get("suite", ""), r.name,
                                          json.dumps(r.params, sort_keys=True, default=str)))


def build_report(cfg: RunConfig, records: Sequence[CheckRecord], total_ms: int | None, budget: float | None,
                 workers: int) -> dict[str, Any]:
    checks = []
    for r in canonical(records):
        checks.append({"name": r.name, "anchor": r.anchor, "params": r.params, "window": r.window,
                       "status": r.status, "first_mismatch": r.first_mismatch, "runtime": r.runtime_ms,
                       "note": r.note})
    config = {"M": cfg.M, "N": cfg.N, "D": cfg.D, "mode": cfg.mode, "suites": list(cfg.suites), "seed": cfg.seed,
              "budget_seconds": budget, "workers": workers}
    return {"tool_version": __version__, "config": config, "checks": checks, "total_runtime_ms": total_ms}


def render_text(report: dict[str, Any]) -> str:
    lines = []
    cfg = report["config"]
    lines.append(f"superyangian {report['tool_version']}  M={cfg['M']} N={cfg['N']} D={cfg['D']} "
                 f"mode={cfg['mode']} seed={cfg['seed']}")
    for c in report["checks"]:
        params = ", ".join(f"{k}={v}" for k, v in c["params"].items() if k != "suite")
        line = f"{c['status'].upper():8} {c['name']}  [{params}]  window: {c['window']}"
        if c["runtime"] is not None:
            line += f"  ({c['runtime']} ms)"
        lines.append(line)
        if c["anchor"]:
            lines.append(f"         {c['anchor']}")
        if c["first_mismatch"]:
            m = c["first_mismatch"]
            lines.append(f"         first mismatch at {m['key']}: {m['lhs']}  vs  {m['rhs']}")
        if c["note"]:
            lines.append(f"         note: {c['note']}")
    counts = {s: sum(1 for c in report["checks"] if c["status"] == s) for s in ("pass", "fail", "skipped")}
    tail = f"{counts['pass']} passed, {counts['fail']} failed, {counts['skipped']} skipped"
    if report["total_runtime_ms"] is not None:
        tail += f" in {report['total_runtime_ms']} ms"
    lines.append(tail)
    return "\n".join(lines)


def cmd_verify(args: argparse.Namespace) -> int:
    cfg = RunConfig(args.M, args.N, args.D, args.mode, selected_suites(args.suite, args.N), args.output, args.seed)
    try:
        cfg.validate()
        if args.workers < 1:
            raise ValueError("--workers must be positive")
        if args.budget_seconds is not None and args.budget_seconds <= 0:
            raise ValueError("--budget-seconds must be positive")
    except ValueError as exc:
        print(f"configuration error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    start = time.perf_counter()
    records = run_suites(cfg, args.budget_seconds, args.workers)
    total = int((time.perf_counter() - start) * 1000)
    if not args.timings:
        for r in records:
            r.runtime_ms = None
    report = build_report(cfg, records, total if args.timings else None, args.budget_seconds, args.workers)
    if cfg.output == "json":
        print(json.dumps(report, indent=2, sort_keys=True))
    else:
        print(render_text(report))
    return EXIT_OK if all(c["status"] == "pass" for c in report["checks"]) else EXIT_FAIL


# compute --------------------------------------------------------------------------

def parse_indices(raw: str | None, what: str) -> tuple[int, ...]:
    if not raw:
        raise UsageError(f"minor needs --{what}")
    try:
        return tuple(int(x) for x in raw.split(","))
    except ValueError as exc:
        raise UsageError(f"bad --{what} list {raw!r}") from exc


def compute_series(args: argparse.Namespace) -> TruncSeries:
    from .twisted import TwistedModel

    t = args.target
    if t in ("berezinian", "z"):
        Y = Yangian(args.M, args.N, args.D)
        return Y.berezinian_fusion() if t == "berezinian" else Y.z
    if args.N % 2:
        raise UsageError(f"target {t} needs even N")
    tm = TwistedModel(args.M, args.N, args.D, args.mode)
    if t == "berezinian-tw-fusion":
        return tm.berezinian_tw_fusion()
    if t == "berezinian-tw-explicit":
        return tm.berezinian_tw_explicit()
    if t == "z-tw":
        return tm.z_tw
    p = args.M if args.p is None else args.p
    q = args.N if args.q is None else args.q
    rows, cols = parse_indices(args.rows, "rows"), parse_indices(args.cols, "cols")
    try:
        return tm.quantum_minor(p, q, rows, cols)
    except (ValueError, IndexError) as exc:
        raise UsageError(f"invalid minor key: {exc}") from exc


def series_lines(s: TruncSeries) -> list[str]:
    """One line per coefficient, sorted by power; words already in PBW order."""
    if not s.coeffs:
        return ["0"]
    out = []
    for k in sorted(s.coeffs):
        v = s.coeffs[k]
        body = v.render() if hasattr(v, "render") else str(Fraction(v))
        out.append(body if k == 0 else f"u^-{k}: {body}")
    return out


def cmd_compute(args: argparse.Namespace) -> int:
    try:
        check_bounds(args.M, args.N, args.D)
        s = compute_series(args)
    except (UsageError, ValueError) as exc:
        print(f"configuration error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    if args.counit:
        s = series_counit(s)
    prec = s.prec if s.prec < EXACT else args.D
    if args.output == "json":
        coeffs = {str(k): line.split(": ", 1)[-1] for k, line in zip(sorted(s.coeffs), series_lines(s))}
        print(json.dumps({"tool_version": __version__, "target": args.target,
                          "config": {"M": args.M, "N": args.N, "D": args.D, "mode": args.mode},
                          "window": f"u^0..u^-{prec}", "coefficients": coeffs}, indent=2, sort_keys=True))
    else:
        print("\n".join(series_lines(s)))
    return EXIT_OK


def cmd_list() -> int:
    for name, (desc, _) in SUITES.items():
        twisted = "  (needs even N)" if name in TWISTED_SUITES else ""
        print(f"{name:20} {desc}{twisted}")
    return EXIT_OK


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    if args.command == "verify":
        return cmd_verify(args)
    if args.command == "compute":
        return cmd_compute(args)
    return cmd_list()


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
