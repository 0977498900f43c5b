# src/main.py
from __future__ import annotations

import argparse
import logging
import sys
from dataclasses import replace
from pathlib import Path

from colorama import Fore, Style, init as colorama_init

from src.analysis.relations import render_tables, verify_all
from src.analysis.report import EXIT_MISMATCH, EXIT_SPEC_ERROR, analyze, emit_dot, render_text
from src.analysis.spec import parse_spec
from src.analysis.sweep import SWEEP_KINDS, run_sweep, write_csv
from src.analysis.worked_examples import EXAMPLES, render_examples, run_examples
from src.combinatorics.dot_export import write_dot
from src.config.settings import KNOWN_BACKENDS, load_settings
from src.errors import LieCtrlError

log = logging.getLogger(__name__)

TASKS = ("analyze", "sweep", "verify-relations", "examples")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="python -m src.main",
        description="Controllability of bilinear systems on matrix Lie groups.",
    )
    parser.add_argument("--task", choices=TASKS, default="analyze")

    parser.add_argument("--spec", help="JSON system spec (analyze)")
    parser.add_argument("--backends", help="Comma separated subset of larc,cycle,graph")
    parser.add_argument("--dot", help="Directory for DOT files of the analyzed graph")
    parser.add_argument("--json", help="Path for the JSON report")
    parser.add_argument("--trace-closure", action="store_true", help="Record triangular-closure steps in the report")
    parser.add_argument("--max-witnesses", type=int, help="Cap on listed cycle witnesses")
    parser.add_argument("--allow-large", action="store_true", help="Lift the n caps on analyze and sweep")

    parser.add_argument("--sweep-kind", choices=SWEEP_KINDS, default="standard")
    parser.add_argument("--sweep-n", type=int, help="n for standard sweeps, N for formation sweeps")
    parser.add_argument("--workers", type=int, help="Worker processes for sweeps (overrides config and LIECTRL_THREADS)")
    parser.add_argument("--csv-dir", help="Directory for sweep CSVs (default from config)")

    parser.add_argument("--example", action="append", choices=sorted(EXAMPLES), help="Run only this example (repeatable)")
    parser.add_argument("--config", help="Parameters YAML (default config/analysis_params.yaml)")
    parser.add_argument("--log-level", default="INFO", choices=["DEBUG", "INFO", "WARNING", "ERROR"])
    return parser


def _parse_backends(parser: argparse.ArgumentParser, text: str | None) -> tuple[str, ...] | None:
    if not text:
        return None
    backends = tuple(dict.fromkeys(b.strip() for b in text.split(",") if b.strip()))
    unknown = [b for b in backends if b not in KNOWN_BACKENDS]
    if unknown or not backends:
        parser.error(f"--backends takes a comma separated subset of {','.join(KNOWN_BACKENDS)}, got {text!r}")
    return backends


def _error(message: str) -> int:
    print(f"{Fore.RED}error: {message}{Style.RESET_ALL}", file=sys.stderr)
    return EXIT_SPEC_ERROR


def run_analyze(args, parser, settings) -> int:
    if not args.spec:
        parser.error("--spec is required for analyze")
    backends = _parse_backends(parser, args.backends)

    spec_path = Path(args.spec)
    try:
        text = spec_path.read_text(encoding="utf-8")
    except (OSError, UnicodeDecodeError) as e:
        return _error(f"cannot read {spec_path}: {e}")

    try:
        spec = parse_spec(text, max_n_graph=settings.max_n_graph, allow_large=args.allow_large)
        options = spec.options
        if args.max_witnesses is not None:
            options = replace(options, max_witnesses=args.max_witnesses)
        if args.trace_closure:
            options = replace(options, trace_closure=True)
        spec = replace(spec, options=options)
        report = analyze(spec, settings, backends)
    except LieCtrlError as e:
        return _error(f"{spec_path}: {e}")

    print(render_text(report))

    if args.json:
        out = Path(args.json)
        out.parent.mkdir(parents=True, exist_ok=True)
        out.write_text(report.to_json(), encoding="utf-8")
        log.info("event=REPORT_WRITTEN | path=%s", out)

    if args.dot:
        for filename, dot_text in emit_dot(report, spec).items():
            write_dot(Path(args.dot) / filename, dot_text)

    return report.exit_code


def run_sweep_task(args, parser, settings) -> int:
    if args.sweep_kind in ("standard", "formation") and args.sweep_n is None:
        parser.error(f"--sweep-n is required for {args.sweep_kind} sweeps")
    try:
        result = run_sweep(
            args.sweep_kind,
            args.sweep_n,
            workers=settings.workers,
            chunk_size=settings.chunk_size,
            max_n=settings.max_n_sweep,
            max_formation=settings.max_formation_sweep,
            allow_large=args.allow_large,
        )
    except (LieCtrlError, ValueError) as e:
        return _error(str(e))

    summary = result.summary()
    print(f"\n=== {result.kind} sweep, n={result.n} ===")
    print(f"subsets={summary['subsets']} controllable={summary['controllable']} "
          f"min_controllable_size={summary['min_controllable_size']} elapsed={summary['elapsed_s']}s")
    print(result.counts_by_size().to_string(index=False))

    mismatches = result.mismatches
    if mismatches:
        print(f"{Fore.RED}MISMATCH in {len(mismatches)} subsets{Style.RESET_ALL}")
        for row in mismatches[:20]:
            print(f"  {{{row.labels}}} rank={row.rank} verdicts={row.verdicts} orbit_dim={row.orbit_dim}")
    else:
        print(f"{Fore.GREEN}all backends agree{Style.RESET_ALL}")

    out_dir = Path(args.csv_dir) if args.csv_dir else settings.sweeps_dir
    write_csv(result, out_dir)
    return EXIT_MISMATCH if mismatches else 0


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)

    logging.basicConfig(
        level=getattr(logging, args.log_level),
        format="%(asctime)s %(levelname)s %(name)s: %(message)s",
    )
    colorama_init(autoreset=True)

    try:
        settings = load_settings(args.config)
    except ValueError as e:
        return _error(str(e))
    settings = settings.with_overrides(workers=args.workers)

    try:
        if args.task == "analyze":
            return run_analyze(args, parser, settings)

        elif args.task == "sweep":
            return run_sweep_task(args, parser, settings)

        elif args.task == "verify-relations":
            tables = verify_all()
            print(render_tables(tables))
            return 0 if all(t.ok for t in tables) else EXIT_MISMATCH

        elif args.task == "examples":
            checks = run_examples(args.example)
            print(render_examples(checks))
            return 0 if all(c.ok for c in checks) else EXIT_MISMATCH

    except Exception:
        log.exception("event=TASK_FAILED | task=%s", args.task)
        raise
    return 0


if __name__ == "__main__":
    sys.exit(main())
