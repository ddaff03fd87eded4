"""Command line entry points over the engine.

Contract: machine-readable output (JSON unless stated) on stdout, diagnostics
on stderr. Exit 0 on success, 1 on domain errors, 2 on usage errors (argparse
handles the latter). Flags fall back to MOWA_* environment variables where a
variable of the same name exists.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path

from .appspec.validate import validate_spec
from .appspec.xmlio import (
    DanglingReference,
    InvalidSpec,
    SchemaViolation,
    XmlSyntax,
    parse_spec,
)
from .evaluation import (
    AllTies,
    DomainError,
    GradeReport,
    Rubric,
    RubricMismatch,
    TooFew,
    cohort_stats,
    display_round,
    display_str,
    format_table,
    grade,
    sign_test,
)
from .extractor import ExtractCache, ExtractorError, extract
from .htmldom import XPathSyntax, serialize_html
from .sensors import Nav, TraceSyntax, UnknownSensor, UnsortedTrace, parse_trace, step
from .weaver import BrokenCorpus, PageCorpus, handle_context, handle_nav, new_session, run_trace


class CliError(Exception):
    """Domain failure: message goes to stderr, exit code is 1."""


def _env_default(name: str) -> str | None:
    return os.environ.get(f"MOWA_{name.upper()}")


def _load_spec(path: str):
    try:
        return parse_spec(Path(path).read_bytes())
    except FileNotFoundError:
        raise CliError(f"no such file: {path}") from None
    except XmlSyntax as exc:
        raise CliError(f"spec.syntax: {exc}") from None
    except SchemaViolation as exc:
        raise CliError(f"spec.schema: {exc}") from None
    except DanglingReference as exc:
        raise CliError(f"spec.dangling-ref: {exc}") from None


def _open_corpus(path: str | None) -> PageCorpus:
    if not path:
        raise CliError("a --corpus directory is required")
    try:
        return PageCorpus(path)
    except BrokenCorpus as exc:
        raise CliError(str(exc)) from None


def _report_json(report) -> dict:
    return {
        "ok": report.ok,
        "issues": [
            {"severity": i.severity, "path": i.path, "key": i.key, "message": i.message}
            for i in report.issues
        ],
    }


# ---------------------------------------------------------------------------
# subcommands
# ---------------------------------------------------------------------------

def cmd_validate(args: argparse.Namespace) -> int:
    spec = _load_spec(args.spec)
    known = None
    if args.corpus:
        known = _open_corpus(args.corpus).urls()
    report = validate_spec(spec, known_urls=known)
    print(json.dumps(_report_json(report), indent=2))
    for issue in report.issues:
        print(f"{issue.severity}: {issue.key}: {issue.message}", file=sys.stderr)
    return 0 if report.ok else 1


def _parse_reading(text: str):
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise CliError(f"bad reading JSON: {exc.msg}") from None
    if not isinstance(obj, dict):
        raise CliError("reading must be a JSON object")
    try:
        return parse_trace(json.dumps({"t": 0, **obj}))[0]
    except (TraceSyntax, TypeError) as exc:
        raise CliError(f"bad reading: {exc}") from None


def cmd_weave(args: argparse.Namespace) -> int:
    spec = _load_spec(args.spec)
    corpus = _open_corpus(args.corpus)
    cache = ExtractCache.from_corpus(args.corpus)
    try:
        session = new_session(spec, corpus, cache)
    except InvalidSpec as exc:
        raise CliError(str(exc)) from None
    handle_nav(session, args.page_url)
    if args.context:
        event = _parse_reading(args.context)
        if isinstance(event.payload, Nav):
            handle_nav(session, event.payload.url)
        else:
            try:
                session.sensor_state, change = step(session.sensor_state, spec, event)
            except UnknownSensor as exc:
                raise CliError(str(exc)) from None
            if change is not None:
                handle_context(session, change)
    if session.current_doc is None:
        raise CliError(f"nav.miss: {args.page_url} is not in the corpus")
    sys.stdout.buffer.write(serialize_html(session.current_doc))
    for entry in session.log.entries:
        if entry["type"] == "warning":
            print(f"warning: {entry['key']}: {entry['detail']}", file=sys.stderr)
    return 0


def cmd_simulate(args: argparse.Namespace) -> int:
    spec = _load_spec(args.spec)
    corpus = _open_corpus(args.corpus)
    cache = ExtractCache.from_corpus(args.corpus)
    try:
        events = parse_trace(Path(args.trace).read_bytes())
    except FileNotFoundError:
        raise CliError(f"no such file: {args.trace}") from None
    except (TraceSyntax, UnsortedTrace) as exc:
        raise CliError(str(exc)) from None
    try:
        result = run_trace(spec, corpus, events, cache=cache)
    except (InvalidSpec, UnknownSensor) as exc:
        raise CliError(str(exc)) from None
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    files = []
    for _, name, body in result.snapshots:
        (out / name).write_bytes(body)
        files.append(name)
    (out / "log.jsonl").write_bytes(result.log.to_jsonl())
    print(
        json.dumps(
            {
                "snapshots": files,
                "log": "log.jsonl",
                "tour_mode": result.session.tour.mode,
            },
            indent=2,
        )
    )
    return 0


def cmd_extract(args: argparse.Namespace) -> int:
    cache_dir = args.cache or _env_default("corpus")
    if not cache_dir:
        raise CliError("a --cache directory is required")
    if (Path(cache_dir) / "manifest.json").exists():
        cache = ExtractCache.from_corpus(cache_dir)
    else:
        cache = ExtractCache(cache_dir)
    try:
        value = extract(args.url, args.xpath, args.mode, cache)
    except XPathSyntax as exc:
        raise CliError(f"xpath: {exc}") from None
    except ValueError as exc:
        raise CliError(str(exc)) from None
    except ExtractorError as exc:
        raise CliError(str(exc)) from None
    print(json.dumps({"url": args.url, "xpath": args.xpath, "mode": args.mode, "value": value}))
    return 0


def _load_rubric(path: str) -> Rubric:
    base = Path(path).parent
    try:
        obj = json.loads(Path(path).read_text(encoding="utf-8"))
    except FileNotFoundError:
        raise CliError(f"no such file: {path}") from None
    except json.JSONDecodeError as exc:
        raise CliError(f"bad rubric JSON: {exc.msg}") from None
    try:
        reference = _load_spec(str(base / obj["reference"]))
        expected_poi_count = int(obj["expected_poi_count"])
        expected_link_count = int(obj["expected_link_count"])
    except KeyError as exc:
        raise CliError(f"rubric is missing field {exc}") from None
    cache = None
    if obj.get("corpus"):
        cache = ExtractCache.from_corpus(base / obj["corpus"])
    return Rubric(
        reference=reference,
        expected_poi_count=expected_poi_count,
        expected_link_count=expected_link_count,
        required_props=tuple(obj.get("required_props", ("poi-desc", "poi-pic"))),
        tolerance=float(obj.get("tolerance", 0.05)),
        cache=cache,
    )


def cmd_grade(args: argparse.Namespace) -> int:
    candidate = _load_spec(args.candidate)
    rubric = _load_rubric(args.rubric)
    try:
        report = grade(candidate, rubric)
    except (RubricMismatch, DomainError) as exc:
        raise CliError(str(exc)) from None
    if args.table:
        print(format_table([(Path(args.candidate).stem, report)]))
    else:
        print(json.dumps(report.to_dict(), indent=2))
    return 0


def cmd_stats(args: argparse.Namespace) -> int:
    reports_dir = Path(args.reports)
    if not reports_dir.is_dir():
        raise CliError(f"no such directory: {args.reports}")
    labeled: list[tuple[str, GradeReport]] = []
    for path in sorted(reports_dir.glob("*.json")):
        obj = json.loads(path.read_text(encoding="utf-8"))
        try:
            report = GradeReport.from_cells(obj["a"], obj["b"], obj["c"], obj["d"], obj["e"])
        except (KeyError, TypeError) as exc:
            raise CliError(f"{path.name}: not a grade report ({exc})") from None
        except DomainError as exc:
            raise CliError(f"{path.name}: {exc}") from None
        labeled.append((path.stem, report))
    # published summaries are computed over the SR column as printed
    printed_sr = [display_round(report.sr) for _, report in labeled]
    try:
        stats = cohort_stats(printed_sr)
    except TooFew as exc:
        raise CliError(str(exc)) from None
    result: dict = {
        "n": stats.n,
        "mean": display_str(stats.mean),
        "sample_std": display_str(stats.sample_std, 4),
        "raw": {"mean": stats.mean, "sample_std": stats.sample_std},
    }
    if args.sign_median is not None:
        try:
            test = sign_test(printed_sr, args.sign_median)
        except AllTies as exc:
            raise CliError(str(exc)) from None
        result["sign_test"] = {
            "median": test.hypothesized_median,
            "below": test.n_below,
            "equal": test.n_equal,
            "above": test.n_above,
            "p_value": display_str(test.p_value, 4),
            "p_value_raw": test.p_value,
            "alpha": test.alpha,
            "reject": test.reject,
        }
    if args.table:
        print(format_table(labeled))
        print()
        print(f"n = {stats.n}")
        print(f"mean SR = {display_str(stats.mean)}")
        print(f"sample std = {display_str(stats.sample_std, 4)}")
        if args.sign_median is not None:
            test = result["sign_test"]
            verdict = "reject" if test["reject"] else "retain"
            print(
                f"sign test vs {test['median']}: below={test['below']} "
                f"equal={test['equal']} above={test['above']} "
                f"p={test['p_value']} -> {verdict} at alpha={test['alpha']}"
            )
    else:
        print(json.dumps(result, indent=2))
    return 0


def cmd_serve(args: argparse.Namespace) -> int:
    import uvicorn

    from .service import ServiceConfig, create_app

    config = ServiceConfig.from_env(
        addr=args.addr, store_dir=args.store, corpus_dir=args.corpus, locale=args.locale
    )
    host, port = config.host_port()
    uvicorn.run(create_app(config), host=host, port=port, log_level="info")
    return 0


# ---------------------------------------------------------------------------
# parser
# ---------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="mowa", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("validate", help="validate an application spec")
    p.add_argument("spec")
    p.add_argument("--corpus", default=_env_default("corpus"), help="corpus for URL warnings")
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser("weave", help="augment one page for one context reading")
    p.add_argument("--spec", required=True)
    p.add_argument("--page-url", required=True)
    p.add_argument("--context", help="reading as JSON, e.g. '{\"kind\":\"qr\",\"payload\":\"..\"}'")
    p.add_argument("--corpus", default=_env_default("corpus"))
    p.set_defaults(func=cmd_weave)

    p = sub.add_parser("simulate", help="replay a sensor trace, writing snapshots")
    p.add_argument("--spec", required=True)
    p.add_argument("--trace", required=True)
    p.add_argument("--corpus", default=_env_default("corpus"))
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("extract", help="extract content from a cached page")
    p.add_argument("--url", required=True)
    p.add_argument("--xpath", required=True)
    p.add_argument("--mode", default="text", help="text or attribute:<name>")
    p.add_argument("--cache", default=_env_default("corpus"))
    p.set_defaults(func=cmd_extract)

    p = sub.add_parser("grade", help="grade a candidate spec against a rubric")
    p.add_argument("--candidate", required=True)
    p.add_argument("--rubric", required=True, help="rubric JSON file")
    p.add_argument("--table", action="store_true", help="human-readable table instead of JSON")
    p.set_defaults(func=cmd_grade)

    p = sub.add_parser("stats", help="cohort statistics over grade reports")
    p.add_argument("--reports", required=True, help="directory of grade report JSON files")
    p.add_argument("--sign-median", type=float, default=None)
    p.add_argument("--table", action="store_true")
    p.set_defaults(func=cmd_stats)

    p = sub.add_parser("serve", help="run the platform HTTP service")
    p.add_argument("--addr", default=None, help="host:port (default MOWA_ADDR or 127.0.0.1:8640)")
    p.add_argument("--store", default=None, help="store directory (default MOWA_STORE)")
    p.add_argument("--corpus", default=None, help="corpus directory (default MOWA_CORPUS)")
    p.add_argument("--locale", default=None, help="message locale (default MOWA_LOCALE or en)")
    p.set_defaults(func=cmd_serve)

    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except CliError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
