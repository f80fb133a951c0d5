"""Symptom coupling statistics, the CBO reuse metric and risk categories.

Two patients are *coupled* when their full symptom profiles are identical.
Under that reading a patient's CBO value is the number of other patients
sharing its profile.
"""

from __future__ import annotations

import enum
import functools
from collections import Counter
from dataclasses import dataclass

from .model import N_SYMPTOMS, Dataset, DatasetError


@functools.total_ordering
class Category(enum.Enum):
    NORMAL = "Normal"
    PRO_CARDIAC = "ProCardiac"
    CARDIAC = "Cardiac"

    @property
    def rank(self) -> int:
        return _CATEGORY_RANK[self]

    def __lt__(self, other):
        if not isinstance(other, Category):
            return NotImplemented
        return self.rank < other.rank


_CATEGORY_RANK = {Category.NORMAL: 0, Category.PRO_CARDIAC: 1, Category.CARDIAC: 2}


@dataclass(frozen=True)
class Thresholds:
    """CBO cut points: ``<= normal_max`` is Normal, ``>= cardiac_min`` is Cardiac."""

    normal_max: int = 0
    cardiac_min: int = 3

    def __post_init__(self):
        if not isinstance(self.normal_max, int) or not isinstance(self.cardiac_min, int):
            raise ValueError("thresholds must be integers")
        if self.normal_max < 0:
            raise ValueError(f"normal_max must be >= 0, got {self.normal_max}")
        if not self.normal_max < self.cardiac_min:
            raise ValueError(
                f"normal_max ({self.normal_max}) must be below cardiac_min ({self.cardiac_min})"
            )


DEFAULT_THRESHOLDS = Thresholds()


@dataclass(frozen=True)
class SymptomCoupling:
    symptom_index: int
    count: int
    patient_ids: tuple[str, ...]


@dataclass(frozen=True)
class CouplingGroup:
    key: tuple[int, ...]
    member_ids: tuple[str, ...]

    @property
    def size(self) -> int:
        return len(self.member_ids)

    @property
    def reported(self) -> bool:
        """Only groups of two or more coupled patients appear in reports."""
        return self.size >= 2


@dataclass(frozen=True)
class CboEntry:
    id: str
    associated_ids: tuple[str, ...]

    @property
    def cbo(self) -> int:
        return len(self.associated_ids)


@dataclass(frozen=True)
class CboTable:
    entries: tuple[CboEntry, ...]

    def __getitem__(self, patient_id: str) -> CboEntry:
        for e in self.entries:
            if e.id == patient_id:
                return e
        raise KeyError(patient_id)

    def values(self) -> dict[str, int]:
        return {e.id: e.cbo for e in self.entries}


def _require_nonempty(ds: Dataset) -> None:
    if len(ds) == 0:
        raise DatasetError("dataset is empty")


def single_symptom_coupling(ds: Dataset) -> list[SymptomCoupling]:
    """Patients exhibiting each symptom, ascending by count then symptom index.

    Symptoms nobody exhibits are omitted.
    """
    _require_nonempty(ds)
    out = []
    for j in range(1, N_SYMPTOMS + 1):
        ids = tuple(r.id for r in ds if r.codes[j - 1])
        if ids:
            out.append(SymptomCoupling(j, len(ids), ids))
    out.sort(key=lambda s: (s.count, s.symptom_index))
    return out


def _partition(ds: Dataset, width: int) -> list[CouplingGroup]:
    buckets: dict[tuple[int, ...], list[str]] = {}
    for r in ds:
        buckets.setdefault(r.codes[:width], []).append(r.id)
    groups = [CouplingGroup(k, tuple(v)) for k, v in buckets.items()]
    # members are already in dataset order, so the first one is the smallest
    groups.sort(key=lambda g: (g.size, ds.position(g.member_ids[0])))
    return groups


def prefix_coupling(ds: Dataset, k: int) -> list[CouplingGroup]:
    """Partition patients by equality of their first ``k`` code slots."""
    if not isinstance(k, int) or not 1 <= k <= N_SYMPTOMS:
        raise ValueError(f"k must be in 1..{N_SYMPTOMS}, got {k!r}")
    return _partition(ds, k)


def profile_groups(ds: Dataset) -> list[CouplingGroup]:
    """Partition patients by identical full symptom profile (singletons kept)."""
    _require_nonempty(ds)
    return _partition(ds, N_SYMPTOMS)


def cbo(ds: Dataset) -> CboTable:
    _require_nonempty(ds)
    group_of = {}
    for g in profile_groups(ds):
        for pid in g.member_ids:
            group_of[pid] = g
    entries = tuple(
        CboEntry(r.id, tuple(m for m in group_of[r.id].member_ids if m != r.id)) for r in ds
    )
    return CboTable(entries)


def cbo_histogram(table: CboTable) -> list[tuple[int, int]]:
    """``(cbo_value, patient_count)`` pairs, highest CBO first."""
    counts = Counter(e.cbo for e in table.entries)
    return sorted(counts.items(), key=lambda kv: -kv[0])


def categorize(cbo_value: int, thresholds: Thresholds = DEFAULT_THRESHOLDS) -> Category:
    if cbo_value < 0:
        raise ValueError(f"cbo value must be non-negative, got {cbo_value}")
    if cbo_value <= thresholds.normal_max:
        return Category.NORMAL
    if cbo_value >= thresholds.cardiac_min:
        return Category.CARDIAC
    return Category.PRO_CARDIAC


def category_counts(table: CboTable, thresholds: Thresholds = DEFAULT_THRESHOLDS) -> dict[Category, int]:
    counts = {c: 0 for c in Category}
    for e in table.entries:
        counts[categorize(e.cbo, thresholds)] += 1
    return counts
