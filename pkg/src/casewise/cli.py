"""Batch driver: every engine operation without the service or the UI.

Subcommands mirror the library operations 1:1 and print the library-level
serialized documents unchanged, so piping between commands and diffing
against service responses both work. Data documents go to stdout,
diagnostics to stderr. Exit codes: 0 success, 1 validation/data error,
2 usage error.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from . import documents
from .charts import build_chart_set, measure_preview, render_charts
from .errors import EngineError, ValidationError
from .evaluation import cross_validate
from .ingestion import load_csv, starter_model, suggest_measure, summarize
from .model import AttributeKind, global_similarity, validate_model
from .retrieval import explain, retrieve


def main(argv: list[str] | None = None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        return args.handler(args)
    except ValidationError as exc:
        print(f"error: {exc}", file=sys.stderr)
        for violation in exc.violations:
            print(f"  [{violation.rule}] {violation.message}", file=sys.stderr)
        return 1
    except EngineError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="casewise",
        description="Explainable case-based-reasoning retrieval engine",
    )
    commands = parser.add_subparsers(dest="command", required=True)

    p = commands.add_parser("ingest", help="load a CSV file into a case base document")
    p.add_argument("csv", help="comma-delimited file with a header row")
    p.add_argument("--solution", required=True, help="name of the solution column")
    p.add_argument(
        "--zero-missing",
        default="",
        help="comma-separated columns where 0 means missing",
    )
    p.add_argument(
        "--hint",
        action="append",
        default=[],
        metavar="COLUMN=KIND",
        help="override kind inference (numeric or symbolic); repeatable",
    )
    p.add_argument("--name", default=None, help="case base name (default: file stem)")
    p.add_argument("--out", default=None, help="write the case base document here instead of stdout")
    p.add_argument("--model-out", default=None, help="also write a starter model document")
    p.set_defaults(handler=_cmd_ingest)

    p = commands.add_parser("summarize", help="distribution summary of one attribute")
    p.add_argument("--casebase", required=True)
    p.add_argument("--attribute", required=True)
    p.add_argument("--bins", type=int, default=20)
    p.add_argument("--group-by-solution", action="store_true")
    p.set_defaults(handler=_cmd_summarize)

    p = commands.add_parser("suggest", help="data-driven starter measure for an attribute")
    p.add_argument("--casebase", required=True)
    p.add_argument("--attribute", required=True)
    p.set_defaults(handler=_cmd_suggest)

    p = commands.add_parser("retrieve", help="rank the case base against a query")
    p.add_argument("--model", required=True)
    p.add_argument("--casebase", required=True)
    p.add_argument("--query", required=True, help="query document file")
    p.add_argument("--k", type=int, default=5)
    p.add_argument(
        "--explain",
        action="store_true",
        help="include the per-attribute decomposition for each entry",
    )
    p.set_defaults(handler=_cmd_retrieve)

    p = commands.add_parser("explain", help="decompose the score of one query/case pair")
    p.add_argument("--model", required=True)
    p.add_argument("--casebase", required=True)
    p.add_argument("--query", required=True)
    p.add_argument("--case-id", required=True)
    p.set_defaults(handler=_cmd_explain)

    p = commands.add_parser("evaluate", help="cross-validate retrieval as a classifier")
    p.add_argument("--model", required=True)
    p.add_argument("--casebase", required=True)
    p.add_argument("--k", type=int, default=5)
    p.add_argument("--folds", type=int, default=10)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument(
        "--table",
        action="store_true",
        help="also print a human-readable accuracy table to stderr",
    )
    p.set_defaults(handler=_cmd_evaluate)

    p = commands.add_parser("chart", help="render retrieval decompositions or histograms")
    p.add_argument(
        "--result",
        default=None,
        help="retrieval result document (default: read from stdin)",
    )
    p.add_argument("--summary", default=None, help="distribution summary document")
    p.add_argument("--top", type=int, default=3)
    p.add_argument("--format", choices=("text", "svg"), default="text")
    p.add_argument("--out", default=None)
    p.set_defaults(handler=_cmd_chart)

    p = commands.add_parser("preview", help="sample a numeric measure as a curve document")
    p.add_argument("--model", required=True)
    p.add_argument("--attribute", required=True)
    p.add_argument("--samples", type=int, default=50)
    p.set_defaults(handler=_cmd_preview)

    p = commands.add_parser("validate", help="list every broken model invariant")
    p.add_argument("--model", required=True)
    p.set_defaults(handler=_cmd_validate)

    p = commands.add_parser("serve", help="run the HTTP service on a project directory")
    p.add_argument("--project", required=True)
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--port", type=int, default=8411)
    p.add_argument("--ui", default=None, help="also serve this static directory under /ui")
    p.set_defaults(handler=_cmd_serve)

    return parser


def _emit(text: str, out: str | None = None) -> None:
    if out:
        Path(out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)


def _load_model(path: str):
    return documents.model_from_doc(documents.loads(Path(path).read_text("utf-8")))


def _load_casebase(path: str):
    return documents.casebase_from_doc(documents.loads(Path(path).read_text("utf-8")))


def _load_query(path: str):
    return documents.query_from_doc(documents.loads(Path(path).read_text("utf-8")))


def _cmd_ingest(args) -> int:
    hints = {}
    for hint in args.hint:
        column, _, kind = hint.partition("=")
        try:
            hints[column] = AttributeKind(kind)
        except ValueError:
            raise ValidationError(f"hint {hint!r} must be COLUMN=numeric or COLUMN=symbolic")
    columns = [c for c in args.zero_missing.split(",") if c]
    name = args.name or Path(args.csv).stem
    _schema, base = load_csv(
        args.csv, solution=args.solution, zero_missing=columns, schema_hints=hints, name=name
    )
    _emit(documents.dumps(documents.casebase_to_doc(base)), args.out)
    problems = sum(1 for d in base.schema if d.role.value == "problem")
    solutions = len(base.schema) - problems
    print(
        f"ingested {len(base)} cases ({problems} problem, {solutions} solution attributes)",
        file=sys.stderr,
    )
    if args.model_out:
        model = starter_model(base)
        Path(args.model_out).write_text(
            documents.dumps(documents.model_to_doc(model)), encoding="utf-8"
        )
        print(f"starter model written to {args.model_out}", file=sys.stderr)
    return 0


def _cmd_summarize(args) -> int:
    base = _load_casebase(args.casebase)
    summary = summarize(base, args.attribute, bins=args.bins, group_by_solution=args.group_by_solution)
    _emit(documents.dumps(documents.summary_to_doc(summary)))
    return 0


def _cmd_suggest(args) -> int:
    base = _load_casebase(args.casebase)
    summary = summarize(base, args.attribute, bins=1)
    measure = suggest_measure(summary)
    _emit(documents.dumps({"kind": "measure", **documents.measure_to_doc(measure)}))
    return 0


def _cmd_retrieve(args) -> int:
    model = _load_model(args.model)
    base = _load_casebase(args.casebase)
    query = _load_query(args.query)
    result = retrieve(model, base, query, args.k)
    _emit(documents.dumps(documents.result_to_doc(result, include_explanations=args.explain)))
    return 0


def _cmd_explain(args) -> int:
    model = _load_model(args.model)
    base = _load_casebase(args.casebase)
    query = _load_query(args.query)
    case = base.case(args.case_id)
    explanation = explain(model, query, case)
    score = global_similarity(model, query, case)
    doc = {
        "kind": "explanation",
        "model_version": model.version,
        "case_id": case.id,
        "score": round(score, 6),
        **documents.explanation_to_doc(explanation),
    }
    _emit(documents.dumps(doc))
    return 0


def _cmd_evaluate(args) -> int:
    model = _load_model(args.model)
    base = _load_casebase(args.casebase)
    report = cross_validate(model, base, k=args.k, folds=args.folds, seed=args.seed)
    _emit(documents.dumps(documents.report_to_doc(report)))
    if args.table:
        _print_report_table(report)
    return 0


def _print_report_table(report) -> None:
    # human rendering goes to stderr; stdout stays the canonical document
    print("fold  size  correct  accuracy", file=sys.stderr)
    for fold in report.fold_results:
        print(
            f"{fold.index:4d}  {fold.test_size:4d}  {fold.correct:7d}  {fold.accuracy:8.4f}",
            file=sys.stderr,
        )
    print(
        f"mean accuracy {report.mean_accuracy:.4f}  stddev {report.stddev_accuracy:.4f}  "
        f"(k={report.k}, folds={report.folds}, seed={report.seed}, "
        f"model v{report.model_version})",
        file=sys.stderr,
    )
    print("label  tp    fp    fn    tn", file=sys.stderr)
    for label, c in report.confusion.items():
        print(
            f"{label:>5}  {c.true_positive:4d}  {c.false_positive:4d}  "
            f"{c.false_negative:4d}  {c.true_negative:4d}",
            file=sys.stderr,
        )


def _cmd_chart(args) -> int:
    if args.summary and args.result:
        raise ValidationError("pass either --result or --summary, not both")
    if args.summary:
        summary = documents.summary_from_doc(
            documents.loads(Path(args.summary).read_text("utf-8"))
        )
        _emit(render_charts(summary, args.format), args.out)
        return 0
    text = Path(args.result).read_text("utf-8") if args.result else sys.stdin.read()
    result = documents.result_from_doc(documents.loads(text))
    chart_set = build_chart_set(result, args.top)
    _emit(render_charts(chart_set, args.format), args.out)
    return 0


def _cmd_preview(args) -> int:
    model = _load_model(args.model)
    descriptor = model.descriptor(args.attribute)
    measure = model.measure_for(args.attribute)
    points = measure_preview(measure, descriptor, args.samples)
    reference = (descriptor.minimum + descriptor.maximum) / 2.0
    _emit(documents.dumps(documents.preview_to_doc(args.attribute, reference, points)))
    return 0


def _cmd_validate(args) -> int:
    model = _load_model(args.model)
    violations = validate_model(model)
    _emit(documents.dumps(documents.violations_to_doc(violations)))
    return 0 if not violations else 1


def _cmd_serve(args) -> int:
    from .service import serve

    serve(args.project, host=args.host, port=args.port, ui_dir=args.ui)
    return 0


if __name__ == "__main__":
    sys.exit(main())
