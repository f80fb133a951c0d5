"""Profile clusters with per-cluster Type I fits, and new-patient classification.

A new patient is placed by, in order of preference:

1. an exact profile match with an existing cluster,
2. the maximum log-likelihood over clusters with a fitted density,
3. the nearest existing patient by symptom dissimilarity.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Optional, Sequence

from .coupling import DEFAULT_THRESHOLDS, Category, Thresholds, categorize, profile_groups
from .model import Dataset, DatasetError, PatientRecord, dissimilarity
from .pearson import (
    LOG_FLOOR,
    PearsonError,
    PearsonType1Model,
    central_moments,
    fit_type1,
    log_pdf,
)

MIN_DISTINCT_VALUES = 4


class Path(enum.Enum):
    EXACT_MATCH = "ExactMatch"
    MAX_LIKELIHOOD = "MaxLikelihood"
    NEAREST_NEIGHBOR = "NearestNeighbor"


@dataclass(frozen=True)
class FitStatus:
    fitted: bool
    reason: str = ""

    def __str__(self) -> str:
        return "Fitted" if self.fitted else f"Degenerate: {self.reason}"


FITTED = FitStatus(True)


@dataclass(frozen=True)
class ClusterModel:
    cluster_id: int
    member_ids: tuple[str, ...]
    profile: tuple[int, ...]
    category: Category
    model: Optional[PearsonType1Model]
    fit_status: FitStatus

    @property
    def cbo(self) -> int:
        return len(self.member_ids) - 1


@dataclass(frozen=True)
class ClassificationResult:
    patient_id: str
    path: Path
    cluster_id: int
    category: Category
    matched_patient_ids: tuple[str, ...]
    recommendation: str
    log_likelihoods: Optional[tuple[tuple[int, float], ...]] = None

    def to_dict(self) -> dict:
        d = {
            "patient_id": self.patient_id,
            "path": self.path.value,
            "cluster_id": self.cluster_id,
            "category": self.category.value,
            "matched_patient_ids": list(self.matched_patient_ids),
            "recommendation": self.recommendation,
        }
        if self.log_likelihoods is not None:
            d["log_likelihoods"] = [
                {"cluster_id": cid, "log_likelihood": ll} for cid, ll in self.log_likelihoods
            ]
        return d


def pooled_sample(member_ids: Sequence[str], ds: Dataset) -> list[int]:
    return [c for pid in member_ids for c in ds.get(pid).nonzero_codes]


def fit_cluster_model(
    member_ids: Sequence[str], ds: Dataset
) -> tuple[Optional[PearsonType1Model], FitStatus]:
    """Fit a Type I density to the pooled nonzero symptom codes of a cluster.

    Failure is reported through the returned status, never raised.
    """
    sample = pooled_sample(member_ids, ds)
    if not sample:
        return None, FitStatus(False, "empty sample")
    if len(set(sample)) == 1:
        return None, FitStatus(False, "zero variance")
    if len(set(sample)) < MIN_DISTINCT_VALUES:
        return None, FitStatus(False, "too few distinct values")
    try:
        model = fit_type1(central_moments(sample))
    except PearsonError as exc:
        return None, FitStatus(False, exc.reason)
    return model, FITTED


def build_clusters(ds: Dataset, thresholds: Thresholds = DEFAULT_THRESHOLDS) -> list[ClusterModel]:
    """One cluster per profile group, numbered from 1 by first member's position."""
    if len(ds) == 0:
        raise DatasetError("dataset is empty")
    groups = sorted(profile_groups(ds), key=lambda g: ds.position(g.member_ids[0]))
    clusters = []
    for cid, g in enumerate(groups, start=1):
        model, status = fit_cluster_model(g.member_ids, ds)
        clusters.append(
            ClusterModel(
                cluster_id=cid,
                member_ids=g.member_ids,
                profile=g.key,
                category=categorize(g.size - 1, thresholds),
                model=model,
                fit_status=status,
            )
        )
    return clusters


def likelihood(model: PearsonType1Model, record: PatientRecord, floor: float = LOG_FLOOR) -> float:
    """Sum of log densities over the record's nonzero codes (0 for no symptoms)."""
    return sum(log_pdf(model, float(c), floor) for c in record.nonzero_codes)


def select_max_likelihood(scores: Sequence[tuple[int, float]]) -> int:
    """Cluster id with the highest log-likelihood; ties go to the lowest id."""
    best_id, _ = max(scores, key=lambda s: (s[1], -s[0]))
    return best_id


def _recommendation(cluster: ClusterModel, matched: Sequence[str]) -> str:
    return (
        f"Reuse the treatment record of prior patient(s) {', '.join(matched)} "
        f"(cluster {cluster.cluster_id}, {cluster.category.value})."
    )


def _result(record, path, cluster, log_likelihoods=None) -> ClassificationResult:
    return ClassificationResult(
        patient_id=record.id,
        path=path,
        cluster_id=cluster.cluster_id,
        category=cluster.category,
        matched_patient_ids=cluster.member_ids,
        recommendation=_recommendation(cluster, cluster.member_ids),
        log_likelihoods=log_likelihoods,
    )


def classify(
    record: PatientRecord, clusters: Sequence[ClusterModel], ds: Dataset
) -> ClassificationResult:
    if not clusters:
        raise ValueError("no clusters to classify against")

    for c in clusters:
        if c.profile == record.codes:
            return _result(record, Path.EXACT_MATCH, c)

    fitted = [c for c in clusters if c.model is not None]
    if fitted and record.nonzero_codes:
        scores = tuple((c.cluster_id, likelihood(c.model, record)) for c in fitted)
        best_id = select_max_likelihood(scores)
        best = next(c for c in clusters if c.cluster_id == best_id)
        return _result(record, Path.MAX_LIKELIHOOD, best, scores)

    by_member = {pid: c for c in clusters for pid in c.member_ids}
    candidates = [r for r in ds if r.id in by_member]
    if not candidates:
        raise ValueError("clusters reference no patients of the dataset")
    nearest = min(candidates, key=lambda r: (dissimilarity(record, r), ds.position(r.id)))
    return _result(record, Path.NEAREST_NEIGHBOR, by_member[nearest.id])
