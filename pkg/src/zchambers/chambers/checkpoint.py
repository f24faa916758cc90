"""Versioned checkpoints for long enumerations.

A checkpoint is canonical JSON: the matrix digest, the histogram gathered so
far and the list of work items still to do.  Each work item is a frontier
``(subset, next_k, floor)``: resume as if ``subset`` had just been visited,
try ``next_k`` next, and never backtrack below ``floor`` elements.  All
indices are 1-based.
"""

from __future__ import annotations

import hashlib
import json
import os
from dataclasses import dataclass, field
from pathlib import Path

from ..errors import CheckpointError
from ..exact_linalg import SymmetricIntMatrix

FORMAT = "zchambers-checkpoint"
VERSION = 1


@dataclass(frozen=True)
class WorkItem:
    subset: tuple[int, ...]
    next_k: int
    floor: int

    def to_dict(self) -> dict:
        return {"subset": list(self.subset), "next": self.next_k, "floor": self.floor}

    @classmethod
    def from_dict(cls, d: dict) -> "WorkItem":
        item = cls(tuple(int(x) for x in d["subset"]), int(d["next"]), int(d["floor"]))
        if item.floor > len(item.subset) or list(item.subset) != sorted(set(item.subset)):
            raise CheckpointError(f"malformed work item {d!r}")
        return item


@dataclass
class Checkpoint:
    matrix_sha256: str
    n: int
    histogram: dict[int, int]
    pending: list[WorkItem]
    method: str = "incremental"
    elapsed: float = 0.0
    name: str = ""
    lineage: list[str] = field(default_factory=list)

    def to_dict(self) -> dict:
        return {
            "format": FORMAT,
            "version": VERSION,
            "matrix_sha256": self.matrix_sha256,
            "n": self.n,
            "name": self.name,
            "method": self.method,
            "elapsed_seconds": round(self.elapsed, 6),
            "histogram": {str(k): str(v) for k, v in sorted(self.histogram.items()) if v},
            "pending": [w.to_dict() for w in self.pending],
            "lineage": list(self.lineage),
        }

    def dumps(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True, indent=1) + "\n"

    @property
    def checkpoint_id(self) -> str:
        return hashlib.sha256(self.dumps().encode()).hexdigest()[:16]

    @classmethod
    def loads(cls, text: str) -> "Checkpoint":
        try:
            data = json.loads(text)
        except json.JSONDecodeError as exc:
            raise CheckpointError(f"checkpoint is not valid JSON: {exc}") from None
        if not isinstance(data, dict) or data.get("format") != FORMAT:
            raise CheckpointError("not a zchambers checkpoint")
        if data.get("version") != VERSION:
            raise CheckpointError(
                f"checkpoint version {data.get('version')!r} is not supported (need {VERSION})"
            )
        try:
            return cls(
                matrix_sha256=str(data["matrix_sha256"]),
                n=int(data["n"]),
                histogram={int(k): int(v) for k, v in data["histogram"].items()},
                pending=[WorkItem.from_dict(w) for w in data["pending"]],
                method=str(data.get("method", "incremental")),
                elapsed=float(data.get("elapsed_seconds", 0.0)),
                name=str(data.get("name", "")),
                lineage=[str(x) for x in data.get("lineage", [])],
            )
        except (KeyError, TypeError, ValueError) as exc:
            raise CheckpointError(f"corrupt checkpoint: {exc!r}") from None

    def save(self, path: str | os.PathLike) -> None:
        path = Path(path)
        tmp = path.with_name(path.name + ".tmp")
        tmp.write_text(self.dumps(), encoding="utf-8")
        os.replace(tmp, path)

    @classmethod
    def load(cls, path: str | os.PathLike) -> "Checkpoint":
        try:
            text = Path(path).read_text(encoding="utf-8")
        except OSError as exc:
            raise CheckpointError(f"cannot read checkpoint {path}: {exc}") from None
        return cls.loads(text)

    def verify_matrix(self, A: SymmetricIntMatrix) -> None:
        if A.n != self.n or A.digest() != self.matrix_sha256:
            raise CheckpointError(
                "checkpoint was written for a different matrix "
                f"(sha256 {self.matrix_sha256[:12]}..., got {A.digest()[:12]}...)"
            )
