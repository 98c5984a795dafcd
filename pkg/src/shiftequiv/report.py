from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any

from .linalg import Matrix


@dataclass(frozen=True)
class Check:
    """One named relation with its outcome; ``residual`` is ``lhs - rhs`` on failure."""

    name: str
    ok: bool
    residual: Matrix | None = None
    detail: str = ""

    def to_dict(self) -> dict[str, Any]:
        d: dict[str, Any] = {"name": self.name, "ok": self.ok}
        if self.residual is not None:
            d["residual"] = _jsonable(self.residual)
        if self.detail:
            d["detail"] = self.detail
        return d


@dataclass(frozen=True)
class Report:
    """Outcome of a verification: a sequence of checks, true iff all pass."""

    checks: tuple = field(default_factory=tuple)

    @property
    def ok(self) -> bool:
        return all(c.ok for c in self.checks)

    def __bool__(self) -> bool:
        return self.ok

    @property
    def failures(self) -> list:
        return [c for c in self.checks if not c.ok]

    def first_failure(self) -> Check | None:
        return next((c for c in self.checks if not c.ok), None)

    def __getitem__(self, name: str) -> Check:
        for c in self.checks:
            if c.name == name:
                return c
        raise KeyError(name)

    def __add__(self, other: Report) -> Report:
        return Report(self.checks + other.checks)

    def __str__(self) -> str:
        lines = []
        for c in self.checks:
            line = f"{'ok  ' if c.ok else 'FAIL'} {c.name}"
            if c.detail:
                line += f" ({c.detail})"
            if c.residual is not None:
                line += f" residual {_jsonable(c.residual)}"
            lines.append(line)
        return "\n".join(lines)

    def to_dict(self) -> dict[str, Any]:
        return {"ok": self.ok, "checks": [c.to_dict() for c in self.checks]}


def relation(name: str, lhs: Matrix, rhs: Matrix) -> Check:
    if lhs.shape != rhs.shape:
        return Check(name, False, detail=f"shape {lhs.shape} vs {rhs.shape}")
    if lhs == rhs:
        return Check(name, True)
    return Check(name, False, residual=lhs - rhs)


def _jsonable(x):
    if isinstance(x, Matrix):
        return [[_jsonable(e) for e in r] for r in x.rows]
    if isinstance(x, int):
        return x
    return str(x)
