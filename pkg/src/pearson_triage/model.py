"""Patient records, CSV ingestion and the symptom dissimilarity matrix."""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass, field
from importlib import resources
from typing import Iterable, Sequence

import numpy as np

N_SYMPTOMS = 11

SYMPTOM_NAMES: tuple[str, ...] = (
    "BP",
    "HB",
    "PR",
    "ECG",
    "LeftShoulderPain",
    "Sweating",
    "Vomiting",
    "OverWeight",
    "ChestPain",
    "Breathlessness",
    "Obesity",
)

CSV_COLUMNS: tuple[str, ...] = (
    "id",
    "bp",
    "hb",
    "pr",
    "ecg",
    "left_shoulder",
    "sweating",
    "vomiting",
    "overweight",
    "chest_pain",
    "breathlessness",
    "obesity",
)


class DatasetError(ValueError):
    """Raised when a dataset or record fails validation.

    ``row`` is the 1-based line number in the source document when known.
    """

    def __init__(self, message: str, row: int | None = None):
        self.row = row
        if row is not None:
            message = f"row {row}: {message}"
        super().__init__(message)


@dataclass(frozen=True)
class PatientRecord:
    id: str
    codes: tuple[int, ...]

    def __post_init__(self):
        codes = tuple(int(c) for c in self.codes)
        object.__setattr__(self, "codes", codes)
        if not self.id:
            raise DatasetError("empty patient id")
        if len(codes) != N_SYMPTOMS:
            raise DatasetError(
                f"patient {self.id}: expected {N_SYMPTOMS} codes, got {len(codes)}"
            )
        for j, c in enumerate(codes, start=1):
            if c not in (0, j):
                raise DatasetError(
                    f"patient {self.id}: code {c} at position {j} must be 0 or {j}"
                )

    @property
    def present(self) -> frozenset[int]:
        """1-based indices of the symptoms this patient exhibits."""
        return frozenset(j for j, c in enumerate(self.codes, start=1) if c)

    @property
    def nonzero_codes(self) -> list[int]:
        return [c for c in self.codes if c]


@dataclass(frozen=True)
class SymptomProfile:
    present: tuple[bool, ...]

    def __post_init__(self):
        present = tuple(bool(p) for p in self.present)
        object.__setattr__(self, "present", present)
        if len(present) != N_SYMPTOMS:
            raise DatasetError(f"profile must have {N_SYMPTOMS} slots, got {len(present)}")

    @classmethod
    def from_indices(cls, indices: Iterable[int]) -> "SymptomProfile":
        idx = set(indices)
        bad = [j for j in idx if not 1 <= j <= N_SYMPTOMS]
        if bad:
            raise DatasetError(f"symptom index out of range: {sorted(bad)}")
        return cls(tuple(j in idx for j in range(1, N_SYMPTOMS + 1)))


@dataclass(frozen=True)
class Dataset:
    records: tuple[PatientRecord, ...] = ()
    symptom_names: tuple[str, ...] = SYMPTOM_NAMES
    _index: dict = field(default=None, init=False, repr=False, compare=False)

    def __post_init__(self):
        records = tuple(self.records)
        object.__setattr__(self, "records", records)
        index = {}
        for pos, r in enumerate(records):
            if r.id in index:
                raise DatasetError(f"duplicate id {r.id}")
            index[r.id] = pos
        object.__setattr__(self, "_index", index)

    def __len__(self) -> int:
        return len(self.records)

    def __iter__(self):
        return iter(self.records)

    @property
    def ids(self) -> list[str]:
        return [r.id for r in self.records]

    def position(self, patient_id: str) -> int:
        return self._index[patient_id]

    def get(self, patient_id: str) -> PatientRecord:
        try:
            return self.records[self._index[patient_id]]
        except KeyError:
            raise KeyError(f"unknown patient id {patient_id!r}") from None


def presence_vector(record: PatientRecord) -> SymptomProfile:
    return SymptomProfile(tuple(c != 0 for c in record.codes))


def encode_profile(profile: SymptomProfile) -> tuple[int, ...]:
    """Map present slot ``j`` to code ``j`` and absent slots to 0."""
    return tuple(j if p else 0 for j, p in enumerate(profile.present, start=1))


def record_from_profile(patient_id: str, profile: SymptomProfile) -> PatientRecord:
    return PatientRecord(patient_id, encode_profile(profile))


def _validate_header(header: Sequence[str]) -> None:
    got = [h.strip().lower() for h in header]
    if got != list(CSV_COLUMNS):
        raise DatasetError(
            "header must be " + ",".join(CSV_COLUMNS) + "; got " + ",".join(header),
            row=1,
        )


def parse_rows(text: str, boolean: bool = False) -> list[PatientRecord]:
    """Parse CSV text into records without the cross-row uniqueness check."""
    reader = csv.reader(io.StringIO(text))
    rows = [(n, row) for n, row in enumerate(reader, start=1) if row]
    if not rows:
        raise DatasetError("missing header row", row=1)
    _validate_header(rows[0][1])

    records = []
    for lineno, row in rows[1:]:
        if len(row) != N_SYMPTOMS + 1:
            raise DatasetError(
                f"expected {N_SYMPTOMS + 1} fields, got {len(row)}", row=lineno
            )
        pid = row[0].strip()
        codes = []
        for j, cell in enumerate(row[1:], start=1):
            try:
                value = int(cell.strip())
            except ValueError:
                raise DatasetError(f"non-integer cell {cell!r} in column {j}", row=lineno) from None
            if boolean:
                if value not in (0, 1):
                    raise DatasetError(
                        f"boolean mode expects 0/1, got {value} in column {j}", row=lineno
                    )
                value = j if value else 0
            codes.append(value)
        try:
            records.append(PatientRecord(pid, tuple(codes)))
        except DatasetError as exc:
            raise DatasetError(str(exc), row=lineno) from None
    return records


def parse_dataset(text: str, boolean: bool = False) -> Dataset:
    """Parse a CSV document into a validated :class:`Dataset`.

    In strict mode (the default) each cell must hold 0 or its column index.
    With ``boolean=True`` cells hold 0/1 and are re-encoded to the
    column-index convention.
    """
    records = parse_rows(text, boolean=boolean)
    seen: dict[str, int] = {}
    for pos, r in enumerate(records):
        if r.id in seen:
            raise DatasetError(f"duplicate id {r.id}", row=pos + 2)
        seen[r.id] = pos
    return Dataset(tuple(records))


def format_row(record: PatientRecord) -> str:
    return ",".join([record.id, *(str(c) for c in record.codes)])


def to_csv(dataset: Dataset) -> str:
    lines = [",".join(CSV_COLUMNS)]
    lines.extend(format_row(r) for r in dataset.records)
    return "\n".join(lines) + "\n"


def fixture_text() -> str:
    """The 20-patient symptom table shipped as ``pearson_triage/data/patients.csv``."""
    return resources.files("pearson_triage").joinpath("data/patients.csv").read_text("utf-8")


def load_fixture() -> Dataset:
    return parse_dataset(fixture_text())


def dissimilarity(a: PatientRecord, b: PatientRecord) -> int:
    """Hamming distance between the presence vectors of two records."""
    return sum((x != 0) != (y != 0) for x, y in zip(a.codes, b.codes))


def dissimilarity_matrix(dataset: Dataset) -> np.ndarray:
    if len(dataset) == 0:
        raise DatasetError("dissimilarity matrix of an empty dataset")
    presence = np.array([[c != 0 for c in r.codes] for r in dataset.records], dtype=bool)
    return (presence[:, None, :] != presence[None, :, :]).sum(axis=2).astype(np.int64)
