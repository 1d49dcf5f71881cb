"""Operational shell: configuration, line-format handling, streaming runs,
evaluation reports and the scaling benchmark.

Subcommands:
  parse   stream raw lines into structured-log and template-catalog CSVs
  eval    parse and score against a labeled ground-truth CSV
  bench   time the parser at several input sizes and emit a scaling table

Exit codes: 0 success, 1 usage/configuration error, 2 IO error.
"""

import argparse
import csv
import json
import random
import sys
import time
from dataclasses import dataclass, field
from pathlib import Path

import yaml

from . import synth
from .dag import ParseDag
from .evaluation import f_measure, load_ground_truth, pair_counts
from .preprocess import (
    ConfigError,
    DEFAULT_SPECIAL_CHARS,
    PreprocessRule,
    apply_preprocess,
    tokenize,
)

STRUCTURED_CSV = "structured.csv"
CATALOG_CSV = "templates.csv"
STATS_FILE = "stats.json"
REPORT_CSV = "report.csv"
BENCH_CSV = "bench.csv"


@dataclass
class LineFormat:
    """Ordered header field names; the last one is the free-text content and
    consumes the remainder of the line."""

    field_names: list[str]

    def __post_init__(self):
        if not self.field_names:
            raise ConfigError("line_format must name at least the content field")


def extract_content(fmt: LineFormat, raw_line: str) -> tuple[dict, str]:
    """Bind the leading whitespace-delimited fields to the header names and
    return the rest of the line (internal spacing preserved) as content.

    Raises ValueError when the line has fewer fields than the format needs.
    """
    n_header = len(fmt.field_names) - 1
    if n_header == 0:
        return {}, raw_line
    parts = raw_line.split(None, n_header)
    if len(parts) < n_header + 1:
        raise ValueError(f"line has fewer than {n_header + 1} fields")
    header = dict(zip(fmt.field_names[:-1], parts[:n_header]))
    return header, parts[n_header]


@dataclass
class RunConfig:
    preprocess_rules: list[PreprocessRule] = field(default_factory=list)
    special_chars: frozenset = DEFAULT_SPECIAL_CHARS
    merge_enabled: bool = False
    merge_threshold: float | None = None
    line_format: LineFormat = field(default_factory=lambda: LineFormat(["Content"]))
    cache_enabled: bool = True

    def __post_init__(self):
        if self.merge_enabled:
            if self.merge_threshold is None:
                raise ConfigError("merge_threshold is required when merge_enabled is true")
            if not 0.0 < self.merge_threshold <= 1.0:
                raise ConfigError("merge_threshold must be in (0, 1]")


def load_config(path) -> RunConfig:
    """Read a YAML configuration file into a RunConfig."""
    with open(path, encoding="utf-8") as fh:
        raw = yaml.safe_load(fh) or {}
    if not isinstance(raw, dict):
        raise ConfigError(f"{path}: top level must be a mapping")
    known = {
        "preprocess_rules",
        "special_chars",
        "merge_enabled",
        "merge_threshold",
        "line_format",
    }
    unknown = set(raw) - known
    if unknown:
        raise ConfigError(f"{path}: unknown keys {sorted(unknown)}")
    rules = []
    for entry in raw.get("preprocess_rules") or []:
        if not isinstance(entry, dict) or "pattern" not in entry or "replacement" not in entry:
            raise ConfigError(f"{path}: each preprocess rule needs pattern and replacement")
        rules.append(PreprocessRule(entry["pattern"], entry["replacement"]))
    special = raw.get("special_chars")
    fmt = raw.get("line_format") or ["Content"]
    return RunConfig(
        preprocess_rules=rules,
        special_chars=frozenset(special) if special is not None else DEFAULT_SPECIAL_CHARS,
        merge_enabled=bool(raw.get("merge_enabled", False)),
        merge_threshold=raw.get("merge_threshold"),
        line_format=LineFormat(list(fmt)),
    )


@dataclass
class RunStats:
    lines_parsed: int = 0
    malformed_skipped: int = 0
    templates_final: int = 0
    wall_time: float = 0.0
    cache_hits: int = 0


def run_stream(config: RunConfig, lines, out_dir, dag: ParseDag | None = None) -> tuple[RunStats, ParseDag]:
    """Drive the parser over an iterable of raw lines.

    Structured records are appended to the CSV as they are produced; the
    template catalog and stats are written at end of stream. Memory stays
    bounded by the graph size, not the input size.
    """
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    if dag is None:
        dag = ParseDag(
            merge_enabled=config.merge_enabled,
            merge_threshold=config.merge_threshold,
            special_chars=config.special_chars,
            cache_enabled=config.cache_enabled,
        )
    stats = RunStats()
    start = time.perf_counter()
    cache_hits_before = dag.cache_hits
    rules = config.preprocess_rules
    fmt = config.line_format
    with open(out_dir / STRUCTURED_CSV, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(["LineId", "OutputId", "EventTemplate"])
        line_id = 0
        for raw in lines:
            raw = raw.rstrip("\n")
            if not raw:
                continue
            try:
                _, content = extract_content(fmt, raw)
            except ValueError:
                stats.malformed_skipped += 1
                continue
            line_id += 1
            if rules:
                content = apply_preprocess(rules, content)
            record = dag.parse_line(line_id, tokenize(content))
            writer.writerow([record.line_id, record.output_id, record.template_text])
    stats.lines_parsed = line_id
    stats.cache_hits = dag.cache_hits - cache_hits_before
    snapshot = dag.snapshot_groups()
    stats.templates_final = len(snapshot)
    with open(out_dir / CATALOG_CSV, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(["OutputId", "EventTemplate", "Occurrences"])
        for output_id, template_text, members in snapshot:
            writer.writerow([output_id, template_text, len(members)])
    stats.wall_time = time.perf_counter() - start
    (out_dir / STATS_FILE).write_text(
        json.dumps(
            {
                "lines_parsed": stats.lines_parsed,
                "malformed_skipped": stats.malformed_skipped,
                "templates_final": stats.templates_final,
                "wall_time": stats.wall_time,
                "cache_hits": stats.cache_hits,
            },
            indent=2,
        )
        + "\n",
        encoding="utf-8",
    )
    return stats, dag


def predicted_partition(dag: ParseDag) -> dict:
    """line ID -> output-node ID, the parser's final (post-merge) answer."""
    partition = {}
    for output_id, _, members in dag.snapshot_groups():
        for line_id in members:
            partition[line_id] = output_id
    return partition


def run_eval(config: RunConfig, lines, out_dir, truth_path, dataset: str = "dataset"):
    """Parse the stream, score it against ground truth, write the report row."""
    stats, dag = run_stream(config, lines, out_dir)
    truth = load_ground_truth(truth_path)
    predicted = predicted_partition(dag)
    counts = pair_counts(predicted, truth)
    precision, recall, f = f_measure(counts)
    out_dir = Path(out_dir)
    with open(out_dir / REPORT_CSV, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(["dataset", "precision", "recall", "f_measure", "n_lines", "n_templates"])
        writer.writerow(
            [dataset, f"{precision:.6f}", f"{recall:.6f}", f"{f:.6f}", stats.lines_parsed, stats.templates_final]
        )
    print(
        f"{dataset}: precision={precision:.4f} recall={recall:.4f} f={f:.4f} "
        f"({stats.lines_parsed} lines, {stats.templates_final} templates)"
    )
    return precision, recall, f, stats


def run_bench(
    config: RunConfig,
    sizes: list[int],
    out_dir,
    pool_lines: list[str] | None = None,
    seed: int = 0,
    n_templates: int = 40,
) -> list[tuple[int, float]]:
    """Time full streaming runs at each size, sampling lines with replacement
    from the given pool (or a synthetic template pool), and write the table."""
    rng = random.Random(seed)
    if pool_lines is None:
        templates = synth.make_templates(rng, n_templates)
        pool_lines, _ = synth.make_stream(rng, templates, 10_000)
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    rows = []
    for size in sizes:
        sample = rng.choices(pool_lines, k=size)
        stats, _ = run_stream(config, sample, out_dir / f"bench_{size}")
        rows.append((size, stats.wall_time))
    with open(out_dir / BENCH_CSV, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(["size", "seconds", "lines_per_sec"])
        for size, seconds in rows:
            rate = size / seconds if seconds > 0 else float("inf")
            writer.writerow([size, f"{seconds:.6f}", f"{rate:.1f}"])
    for size, seconds in rows:
        print(f"{size:>10} lines  {seconds:8.3f} s  {size / seconds if seconds else 0:10.0f} lines/s")
    return rows


def _open_input(path: str):
    if path == "-":
        return sys.stdin
    return open(path, encoding="utf-8", errors="replace")


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="logsieve", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--config", help="YAML configuration file")
        p.add_argument("--input", default="-", help="input log file, or - for stdin")
        p.add_argument("--output-dir", default="logsieve-out", help="directory for output CSVs")
        p.add_argument("--no-cache", action="store_true", help="disable the length-node cache")

    p_parse = sub.add_parser("parse", help="parse a stream into structured CSVs")
    common(p_parse)
    p_parse.add_argument("--save-state", help="write parser state JSON here at end of stream")
    p_parse.add_argument("--load-state", help="resume from a previously saved state JSON")

    p_eval = sub.add_parser("eval", help="parse and score against ground truth")
    common(p_eval)
    p_eval.add_argument("--truth", required=True, help="ground-truth CSV (line_id,event_label)")
    p_eval.add_argument("--dataset", default="dataset", help="dataset name for the report row")

    p_bench = sub.add_parser("bench", help="scaling benchmark")
    common(p_bench)
    p_bench.add_argument(
        "--sizes", required=True, help="comma-separated line counts, e.g. 10000,20000,40000"
    )
    p_bench.add_argument("--seed", type=int, default=0)
    p_bench.add_argument(
        "--templates", type=int, default=40, help="synthetic pool size when no --input is given"
    )
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        config = load_config(args.config) if args.config else RunConfig()
        config.cache_enabled = not args.no_cache
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2

    try:
        if args.command == "parse":
            dag = None
            if args.load_state:
                dag = ParseDag.from_json(
                    Path(args.load_state).read_text(encoding="utf-8"),
                    cache_enabled=config.cache_enabled,
                )
            with _open_input(args.input) as fh:
                stats, dag = run_stream(config, fh, args.output_dir, dag=dag)
            if args.save_state:
                Path(args.save_state).write_text(dag.to_json(), encoding="utf-8")
            print(
                f"parsed {stats.lines_parsed} lines into {stats.templates_final} templates "
                f"in {stats.wall_time:.3f}s ({stats.cache_hits} cache hits, "
                f"{stats.malformed_skipped} malformed skipped)"
            )
        elif args.command == "eval":
            with _open_input(args.input) as fh:
                run_eval(config, fh, args.output_dir, args.truth, dataset=args.dataset)
        elif args.command == "bench":
            try:
                sizes = [int(s) for s in args.sizes.split(",") if s]
            except ValueError:
                print(f"error: bad --sizes value {args.sizes!r}", file=sys.stderr)
                return 1
            pool = None
            if args.input != "-":
                with _open_input(args.input) as fh:
                    pool = [line.rstrip("\n") for line in fh if line.strip()]
            run_bench(config, sizes, args.output_dir, pool_lines=pool, seed=args.seed,
                      n_templates=args.templates)
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    return 0


if __name__ == "__main__":
    sys.exit(main())
