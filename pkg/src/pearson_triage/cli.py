"""``pearson-triage`` command line.

Exit codes: 0 success, 1 usage error, 2 data/validation error, 3 I/O error.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path

from . import charts, registry, reports
from .cluster import build_clusters, classify, pooled_sample
from .coupling import (
    Thresholds,
    cbo,
    cbo_histogram,
    prefix_coupling,
    profile_groups,
    single_symptom_coupling,
)
from .model import (
    CSV_COLUMNS,
    N_SYMPTOMS,
    DatasetError,
    PatientRecord,
    SymptomProfile,
    encode_profile,
    parse_rows,
)
from .pearson import Moments, PearsonError, central_moments, fit_type1, normalization, select_type, shape_stats

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_DATA = 2
EXIT_IO = 3


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _registry_path(args) -> Path:
    path = args.registry or os.environ.get(registry.ENV_VAR)
    if not path:
        raise UsageError(f"no registry given (use --registry or set {registry.ENV_VAR})")
    return Path(path)


def _load_nonempty(args):
    ds = registry.load(_registry_path(args))
    if len(ds) == 0:
        raise DatasetError("registry is empty")
    return ds


def _thresholds(args) -> Thresholds:
    values = {}
    if getattr(args, "config", None):
        with open(args.config, encoding="utf-8") as fh:
            cfg = json.load(fh)
        values.update({k: cfg[k] for k in ("normal_max", "cardiac_min") if k in cfg})
    if args.normal_max is not None:
        values["normal_max"] = args.normal_max
    if args.cardiac_min is not None:
        values["cardiac_min"] = args.cardiac_min
    try:
        return Thresholds(**values)
    except (TypeError, ValueError) as exc:
        raise UsageError(f"malformed thresholds: {exc}") from None


def _emit(text: str, output: str | None) -> None:
    if output:
        Path(output).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)


def cmd_ingest(args) -> int:
    text = Path(args.input).read_text(encoding="utf-8")
    n = registry.ingest(text, _registry_path(args), boolean=args.boolean)
    print(n)
    return EXIT_OK


def cmd_report(args) -> int:
    ds = _load_nonempty(args)
    th = _thresholds(args)
    fmt = args.format
    if fmt == "svg" and args.kind not in ("single", "cbo-histogram"):
        raise UsageError("svg output is only available for kinds single and cbo-histogram")
    if args.kind == "single":
        rows = single_symptom_coupling(ds)
        out = charts.symptom_counts_chart(rows) if fmt == "svg" else reports.render_single(rows, fmt)
    elif args.kind == "prefix":
        try:
            groups = prefix_coupling(ds, args.k)
        except ValueError as exc:
            raise UsageError(str(exc)) from None
        out = reports.render_prefix(groups, args.k, fmt)
    elif args.kind == "profile-groups":
        out = reports.render_profile_groups(profile_groups(ds), fmt)
    elif args.kind == "cbo":
        out = reports.render_cbo(cbo(ds), th, fmt)
    elif args.kind == "cbo-histogram":
        table = cbo(ds)
        out = charts.cbo_histogram_chart(table) if fmt == "svg" else reports.render_cbo_histogram(cbo_histogram(table), fmt)
    else:
        out = reports.render_clusters(build_clusters(ds, th), fmt)
    _emit(out, args.output)
    return EXIT_OK


def _int_list(text: str) -> list[int]:
    try:
        return [int(v) for v in text.replace(" ", "").split(",") if v != ""]
    except ValueError:
        raise DatasetError(f"expected comma-separated integers, got {text!r}") from None


def _new_record(args) -> PatientRecord:
    if args.row:
        header = ",".join(CSV_COLUMNS)
        (record,) = parse_rows(f"{header}\n{args.row}\n", boolean=args.boolean)
        return record
    if args.present is not None:
        return PatientRecord(args.id, encode_profile(SymptomProfile.from_indices(_int_list(args.present))))
    codes = _int_list(args.codes)
    if len(codes) != N_SYMPTOMS:
        raise DatasetError(f"expected {N_SYMPTOMS} codes, got {len(codes)}")
    if args.boolean:
        if any(c not in (0, 1) for c in codes):
            raise DatasetError("boolean mode expects 0/1 codes")
        codes = [j if c else 0 for j, c in enumerate(codes, start=1)]
    return PatientRecord(args.id, tuple(codes))


def cmd_classify(args) -> int:
    if args.format == "svg":
        raise UsageError("svg output is not available for classify")
    record = _new_record(args)
    ds = _load_nonempty(args)
    clusters = build_clusters(ds, _thresholds(args))
    result = classify(record, clusters, ds)
    _emit(reports.render_classification(result, args.format), args.output)
    return EXIT_OK


def _diagnose(label: str, moments: Moments | None, status_if_empty: str) -> dict:
    if moments is None:
        return reports.diagnostics_payload(label, None, None, None, None, status_if_empty, None)
    stats = family = model = norm = None
    try:
        stats = shape_stats(moments)
        family = select_type(stats)
        model = fit_type1(moments)
        norm = normalization(model)
        status = "Fitted"
    except PearsonError as exc:
        status = f"Degenerate: {exc.reason}"
    return reports.diagnostics_payload(label, moments, stats, family, model, status, norm)


def cmd_fit(args) -> int:
    if args.format == "svg":
        raise UsageError("svg output is not available for fit")
    if args.moments:
        values = [float(v) for v in args.moments.split(",")]
        if len(values) != 4:
            raise UsageError("--moments takes mu1,mu2,mu3,mu4")
        payload = _diagnose("moments " + args.moments, Moments(*values, n=0), "")
        _emit(reports.render_diagnostics(payload, args.format), args.output)
        return EXIT_OK

    ds = _load_nonempty(args)
    clusters = build_clusters(ds, _thresholds(args))
    if args.cluster is not None:
        chosen = [c for c in clusters if c.cluster_id == args.cluster]
        what = f"cluster {args.cluster}"
    else:
        chosen = [c for c in clusters if args.patient in c.member_ids]
        what = f"patient {args.patient}"
    if not chosen:
        raise DatasetError(f"unknown {what}")
    c = chosen[0]
    sample = pooled_sample(c.member_ids, ds)
    label = f"cluster {c.cluster_id} ({', '.join(c.member_ids)})"
    moments = central_moments(sample) if sample else None
    payload = _diagnose(label, moments, "Degenerate: empty sample")
    if not c.fit_status.fitted:
        # cluster-level screening (e.g. too few distinct codes) takes precedence
        payload["status"] = str(c.fit_status)
        payload["model"] = None
        payload["normalization"] = None
    _emit(reports.render_diagnostics(payload, args.format), args.output)
    return EXIT_OK


def cmd_chart(args) -> int:
    ds = _load_nonempty(args)
    if args.which == "symptom-counts":
        svg = charts.symptom_counts_chart(single_symptom_coupling(ds))
    else:
        svg = charts.cbo_histogram_chart(cbo(ds))
    Path(args.output).write_text(svg, encoding="utf-8")
    return EXIT_OK


def _add_thresholds(p):
    p.add_argument("--normal-max", type=int, default=None, help="highest CBO counted as Normal (default 0)")
    p.add_argument("--cardiac-min", type=int, default=None, help="lowest CBO counted as Cardiac (default 3)")
    p.add_argument("--config", help="JSON file with normal_max / cardiac_min; flags take precedence")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(
        prog="pearson-triage",
        description="Symptom coupling reports and Pearson Type I triage of cardiac patients.",
    )
    parser.add_argument("--registry", help=f"registry CSV (default: ${registry.ENV_VAR})")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("ingest", help="validate a CSV file and append it to the registry")
    p.add_argument("input")
    p.add_argument("--boolean", action="store_true", help="cells are 0/1 flags rather than column codes")
    p.set_defaults(func=cmd_ingest)

    p = sub.add_parser("report", help="coupling, CBO and cluster reports")
    p.add_argument("--kind", required=True, choices=reports.KINDS)
    p.add_argument("--k", type=int, default=4, help="prefix width for --kind prefix (default 4)")
    p.add_argument("--format", choices=("text", "json", "csv", "svg"), default="text")
    p.add_argument("-o", "--output")
    _add_thresholds(p)
    p.set_defaults(func=cmd_report)

    p = sub.add_parser("classify", help="place a new patient in a cluster")
    src = p.add_mutually_exclusive_group(required=True)
    src.add_argument("--codes", help="11 comma-separated codes")
    src.add_argument("--present", help="comma-separated 1-based indices of present symptoms")
    src.add_argument("--row", help="a full CSV data row: id,code1,...,code11")
    p.add_argument("--id", default="NEW")
    p.add_argument("--boolean", action="store_true")
    p.add_argument("--format", choices=("text", "json", "csv", "svg"), default="text")
    p.add_argument("-o", "--output")
    _add_thresholds(p)
    p.set_defaults(func=cmd_classify)

    p = sub.add_parser("fit", help="Pearson diagnostics for one cluster")
    sel = p.add_mutually_exclusive_group(required=True)
    sel.add_argument("--cluster", type=int)
    sel.add_argument("--patient", help="select the cluster containing this patient")
    sel.add_argument("--moments", help="fit directly from mu1,mu2,mu3,mu4")
    p.add_argument("--format", choices=("text", "json", "csv", "svg"), default="text")
    p.add_argument("-o", "--output")
    _add_thresholds(p)
    p.set_defaults(func=cmd_fit)

    p = sub.add_parser("chart", help="write an SVG bar chart")
    p.add_argument("which", choices=("symptom-counts", "cbo-histogram"))
    p.add_argument("-o", "--output", required=True)
    p.set_defaults(func=cmd_chart)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (DatasetError, PearsonError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DATA
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
