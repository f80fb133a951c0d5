"""Text, JSON and CSV renderings of the coupling, CBO, cluster and fit reports.

Text layouts follow the column headings of the published coupling tables so
the output can be diffed by eye.  Every renderer is deterministic.
"""

from __future__ import annotations

import csv
import io
import json
from typing import Iterable, Sequence

from .cluster import ClassificationResult, ClusterModel
from .coupling import (
    Category,
    CboTable,
    CouplingGroup,
    SymptomCoupling,
    Thresholds,
    categorize,
)
from .model import SYMPTOM_NAMES
from .pearson import FamilyType, Moments, PearsonType1Model, ShapeStats

KINDS = ("single", "prefix", "profile-groups", "cbo", "cbo-histogram", "clusters")


def text_table(headers: Sequence[str], rows: Iterable[Sequence[object]]) -> str:
    rows = [[str(c) for c in row] for row in rows]
    widths = [len(h) for h in headers]
    for row in rows:
        widths = [max(w, len(c)) for w, c in zip(widths, row)]
    lines = []
    for row in [list(headers), *rows]:
        cells = [c.ljust(w) for c, w in zip(row, widths)]
        lines.append("  ".join(cells).rstrip())
    return "\n".join(lines) + "\n"


def csv_table(headers: Sequence[str], rows: Iterable[Sequence[object]]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(headers)
    writer.writerows(rows)
    return buf.getvalue()


def to_json(payload) -> str:
    return json.dumps(payload, indent=2) + "\n"


def _ids(ids: Sequence[str], sep: str = ",") -> str:
    return sep.join(ids)


# -- single symptom coupling ------------------------------------------------

def single_payload(rows: Sequence[SymptomCoupling]) -> list[dict]:
    return [
        {
            "symptom_index": s.symptom_index,
            "symptom": SYMPTOM_NAMES[s.symptom_index - 1],
            "count": s.count,
            "patient_ids": list(s.patient_ids),
        }
        for s in rows
    ]


def render_single(rows: Sequence[SymptomCoupling], fmt: str) -> str:
    if fmt == "json":
        return to_json(single_payload(rows))
    if fmt == "csv":
        return csv_table(
            ["symptom_index", "symptom", "count", "patient_ids"],
            [
                [s.symptom_index, SYMPTOM_NAMES[s.symptom_index - 1], s.count, _ids(s.patient_ids, ";")]
                for s in rows
            ],
        )
    body = text_table(
        ["Sl. No.", "Symptom", "Count", "Patient IDs"],
        [[f"{n}.", s.symptom_index, s.count, _ids(s.patient_ids)] for n, s in enumerate(rows, 1)],
    )
    return "Single symptom coupling\n" + body


# -- prefix / profile groups ------------------------------------------------

def groups_payload(groups: Sequence[CouplingGroup]) -> list[dict]:
    return [
        {
            "key": list(g.key),
            "count": g.size,
            "member_ids": list(g.member_ids),
            "reported": g.reported,
        }
        for g in groups
    ]


def _groups_csv(groups: Sequence[CouplingGroup]) -> str:
    return csv_table(
        ["count", "member_ids", "key"],
        [[g.size, _ids(g.member_ids, ";"), " ".join(map(str, g.key))] for g in groups],
    )


def render_prefix(groups: Sequence[CouplingGroup], k: int, fmt: str) -> str:
    if fmt == "json":
        return to_json(groups_payload(groups))
    if fmt == "csv":
        return _groups_csv(groups)
    body = text_table(
        ["Sl. No.", "Count", "Patient IDs"],
        [[f"{n}.", g.size, _ids(g.member_ids)] for n, g in enumerate(groups, 1)],
    )
    return f"First {k} symptoms coupling\n" + body


def render_profile_groups(groups: Sequence[CouplingGroup], fmt: str) -> str:
    if fmt == "json":
        return to_json(groups_payload(groups))
    if fmt == "csv":
        return _groups_csv(groups)
    coupled = [g for g in groups if g.reported]
    single = [g.member_ids[0] for g in groups if not g.reported]
    body = text_table(
        ["Sl. No.", "Count", "Patient IDs"],
        [[f"{n}.", g.size, _ids(g.member_ids)] for n, g in enumerate(coupled, 1)],
    )
    out = "Total symptom coupling\n" + body
    if single:
        out += "Uncoupled: " + _ids(single) + "\n"
    return out


# -- CBO --------------------------------------------------------------------

def cbo_payload(table: CboTable, thresholds: Thresholds) -> list[dict]:
    return [
        {
            "id": e.id,
            "associated_ids": list(e.associated_ids),
            "cbo": e.cbo,
            "category": categorize(e.cbo, thresholds).value,
        }
        for e in table.entries
    ]


def render_cbo(table: CboTable, thresholds: Thresholds, fmt: str) -> str:
    if fmt == "json":
        return to_json(cbo_payload(table, thresholds))
    if fmt == "csv":
        return csv_table(
            ["id", "associated_ids", "cbo", "category"],
            [
                [e.id, _ids(e.associated_ids, ";"), e.cbo, categorize(e.cbo, thresholds).value]
                for e in table.entries
            ],
        )
    coupled = [e for e in table.entries if e.cbo]
    alone = [e.id for e in table.entries if not e.cbo]
    rows = [[e.id, _ids(e.associated_ids), e.cbo] for e in coupled]
    if alone:
        rows.append([_ids(alone), "NONE", 0])
    return "Coupling count of each patient\n" + text_table(
        ["Patient ID", "Associated with", "Coupling Count"], rows
    )


def render_cbo_histogram(hist: Sequence[tuple[int, int]], fmt: str) -> str:
    if fmt == "json":
        return to_json([{"cbo": v, "patients": n} for v, n in hist])
    if fmt == "csv":
        return csv_table(["cbo", "patients"], hist)
    return "Application of CBO metric\n" + text_table(
        ["No. of Patients", "CBO Metric Value"], [[n, v] for v, n in hist]
    )


# -- clusters ---------------------------------------------------------------

def clusters_payload(clusters: Sequence[ClusterModel]) -> list[dict]:
    out = []
    for c in clusters:
        out.append(
            {
                "cluster_id": c.cluster_id,
                "member_ids": list(c.member_ids),
                "profile": list(c.profile),
                "cbo": c.cbo,
                "category": c.category.value,
                "fit_status": "Fitted" if c.fit_status.fitted else "Degenerate",
                "reason": c.fit_status.reason or None,
                "model": c.model.to_dict() if c.model else None,
            }
        )
    return out


def render_clusters(clusters: Sequence[ClusterModel], fmt: str) -> str:
    if fmt == "json":
        return to_json(clusters_payload(clusters))
    rows = [
        [c.cluster_id, _ids(c.member_ids, ";" if fmt == "csv" else ","), c.cbo, c.category.value, str(c.fit_status)]
        for c in clusters
    ]
    if fmt == "csv":
        return csv_table(["cluster_id", "member_ids", "cbo", "category", "fit_status"], rows)
    counts = {cat: 0 for cat in Category}
    for c in clusters:
        counts[c.category] += len(c.member_ids)
    summary = "  ".join(f"{cat.value}: {n}" for cat, n in counts.items())
    return (
        "Profile clusters\n"
        + text_table(["Cluster", "Members", "CBO", "Category", "Fit"], rows)
        + "Patients per category  "
        + summary
        + "\n"
    )


# -- classification ---------------------------------------------------------

def render_classification(result: ClassificationResult, fmt: str) -> str:
    if fmt == "json":
        return to_json(result.to_dict())
    if fmt == "csv":
        return csv_table(
            ["patient_id", "path", "cluster_id", "category", "matched_patient_ids"],
            [[
                result.patient_id,
                result.path.value,
                result.cluster_id,
                result.category.value,
                _ids(result.matched_patient_ids, ";"),
            ]],
        )
    lines = [
        f"CATEGORY: {result.category.value.upper()}",
        f"Patient: {result.patient_id}",
        f"Path: {result.path.value}",
        f"Cluster: {result.cluster_id} ({', '.join(result.matched_patient_ids)})",
        f"Recommendation: {result.recommendation}",
    ]
    if result.log_likelihoods is not None:
        lines.append("Log-likelihoods:")
        lines.extend(f"  cluster {cid}: {ll:.6f}" for cid, ll in result.log_likelihoods)
    return "\n".join(lines) + "\n"


# -- Pearson diagnostics ----------------------------------------------------

def diagnostics_payload(
    label: str,
    moments: Moments | None,
    stats: ShapeStats | None,
    family: FamilyType | None,
    model: PearsonType1Model | None,
    status: str,
    norm: float | None,
) -> dict:
    return {
        "label": label,
        "moments": None
        if moments is None
        else {"n": moments.n, "mu1": moments.mu1, "mu2": moments.mu2, "mu3": moments.mu3, "mu4": moments.mu4},
        "skewness": None if stats is None else stats.skewness,
        "kurtosis": None if stats is None else stats.kurtosis,
        "kappa": None if stats is None else stats.kappa,
        "family": None if family is None else family.value,
        "status": status,
        "model": None if model is None else model.to_dict(),
        "normalization": norm,
    }


def _g(x: float) -> str:
    return format(x + 0.0, ".12g")


def render_diagnostics(payload: dict, fmt: str) -> str:
    if fmt == "json":
        return to_json(payload)
    rows: list[tuple[str, str]] = []
    m = payload["moments"]
    if m is not None:
        rows += [("n", str(m["n"]))] + [(k, _g(m[k])) for k in ("mu1", "mu2", "mu3", "mu4")]
    for key in ("skewness", "kurtosis", "kappa"):
        if payload[key] is not None:
            rows.append((key, _g(payload[key])))
    if payload["family"] is not None:
        rows.append(("family", payload["family"]))
    rows.append(("status", payload["status"]))
    model = payload["model"]
    if model is not None:
        rows += [(k, _g(model[k])) for k in ("m0", "c1", "c2", "g1", "g2", "h")]
        rows.append(("A0", _g(model["a0_norm"])))
        rows.append(("support", f"({_g(model['m0'] - model['c1'])}, {_g(model['m0'] + model['c2'])})"))
    if payload["normalization"] is not None:
        rows.append(("normalization", _g(payload["normalization"])))
    if fmt == "csv":
        return csv_table(["field", "value"], rows)
    return f"Pearson diagnostics: {payload['label']}\n" + text_table(["Field", "Value"], rows)

