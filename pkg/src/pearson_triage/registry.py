"""On-disk patient registry: a CSV file in the canonical symptom format."""

from __future__ import annotations

import os
import tempfile
from pathlib import Path

from .model import CSV_COLUMNS, Dataset, DatasetError, format_row, parse_dataset, parse_rows

ENV_VAR = "PEARSON_TRIAGE_REGISTRY"


def load(path: str | os.PathLike) -> Dataset:
    """Read a registry; a missing file is an empty registry."""
    p = Path(path)
    if not p.exists():
        return Dataset(())
    return parse_dataset(p.read_text(encoding="utf-8"))


def _atomic_write(path: Path, data: bytes) -> None:
    fd, tmp = tempfile.mkstemp(prefix=f".{path.name}.", dir=path.parent or ".")
    try:
        with os.fdopen(fd, "wb") as fh:
            fh.write(data)
            fh.flush()
            os.fsync(fh.fileno())
        os.replace(tmp, path)
    except BaseException:
        try:
            os.unlink(tmp)
        except FileNotFoundError:
            pass
        raise


def ingest(text: str, path: str | os.PathLike, boolean: bool = False) -> int:
    """Validate ``text`` and append its rows to the registry at ``path``.

    Either every row is appended or none is.  Existing bytes are kept as is.

    Returns:
        Number of rows appended.
    """
    p = Path(path)
    new = parse_rows(text, boolean=boolean)
    existing = p.read_bytes() if p.exists() else b""
    current = parse_dataset(existing.decode("utf-8")) if existing else Dataset(())
    taken = set(current.ids)
    for r in new:
        if r.id in taken:
            raise DatasetError(f"duplicate id {r.id}")
        taken.add(r.id)

    if not existing:
        existing = (",".join(CSV_COLUMNS) + "\n").encode("utf-8")
    elif not existing.endswith(b"\n"):
        existing += b"\n"
    payload = "".join(format_row(r) + "\n" for r in new).encode("utf-8")
    _atomic_write(p, existing + payload)
    return len(new)
