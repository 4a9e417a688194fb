"""Verdicts of identity checks with pinpointed defects."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any

from ..exactlin import GradedMap


@dataclass
class Failure:
    arity: int
    objects: tuple
    defect: GradedMap | None = None
    detail: str = ""

    def to_dict(self) -> dict:
        out: dict[str, Any] = {
            "arity": self.arity,
            "objects": [str(o) for o in self.objects],
        }
        if self.detail:
            out["detail"] = self.detail
        if self.defect is not None:
            out["defect"] = defect_blocks(self.defect)
        return out


@dataclass
class Report:
    """Outcome of verifying one identity family through a truncation."""

    identity: str
    truncation: int
    checked: int = 0
    failures: list[Failure] = field(default_factory=list)
    notes: list[str] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return not self.failures

    @property
    def verdict(self) -> str:
        return "pass" if self.passed else "fail"

    def fail(self, arity: int, objects, defect: GradedMap | None = None, detail: str = "") -> None:
        self.failures.append(Failure(arity, tuple(objects), defect, detail))

    def merge(self, other: "Report") -> "Report":
        self.checked += other.checked
        self.failures.extend(other.failures)
        self.notes.extend(other.notes)
        return self

    @property
    def first_failure(self) -> Failure | None:
        return self.failures[0] if self.failures else None

    @property
    def failing_arities(self) -> list[int]:
        return sorted({f.arity for f in self.failures})

    def summary(self) -> str:
        head = f"{self.identity} through arity {self.truncation}: {self.verdict}"
        if self.passed:
            return f"{head} ({self.checked} blocks)"
        f = self.failures[0]
        where = ",".join(str(o) for o in f.objects)
        extra = f"; {f.detail}" if f.detail else ""
        return (
            f"{head} ({len(self.failures)} of {self.checked} blocks nonzero; "
            f"first at arity {f.arity}, objects ({where}){extra})"
        )

    def to_dict(self) -> dict:
        return {
            "identity": self.identity,
            "truncation": self.truncation,
            "verdict": self.verdict,
            "checked": self.checked,
            "failures": [f.to_dict() for f in self.failures],
            **({"notes": list(self.notes)} if self.notes else {}),
        }

    def __bool__(self) -> bool:
        return self.passed


def defect_blocks(m: GradedMap) -> list[dict]:
    fmt = m.field.format
    return [
        {"source_degree": d, "matrix": [[fmt(c) for c in row] for row in mat]}
        for d, mat in sorted(m.blocks.items())
    ]
