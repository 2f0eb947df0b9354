"""Structured verification results and their serialisations."""

from __future__ import annotations

import csv
import io
import json
from dataclasses import asdict, dataclass, field
from fractions import Fraction

STATUSES = ("pass", "fail", "skipped")


@dataclass
class Check:
    id: str
    paper_anchor: str
    status: str
    details: str = ""
    elapsed_ms: int = 0

    def __post_init__(self):
        if self.status not in STATUSES:
            raise ValueError(f"bad status {self.status!r}")


@dataclass
class VerifyReport:
    p: int | None = None
    checks: list[Check] = field(default_factory=list)

    def add(self, id: str, anchor: str, ok: bool | None, details: str = "", elapsed_ms: int = 0) -> Check:
        status = "skipped" if ok is None else ("pass" if ok else "fail")
        chk = Check(id, anchor, status, details, int(elapsed_ms))
        self.checks.append(chk)
        return chk

    def extend(self, other: "VerifyReport") -> None:
        self.checks.extend(other.checks)

    @property
    def summary(self) -> dict:
        out = {s: 0 for s in ("passed", "failed", "skipped")}
        for c in self.checks:
            out[{"pass": "passed", "fail": "failed", "skipped": "skipped"}[c.status]] += 1
        return out

    @property
    def ok(self) -> bool:
        return self.summary["failed"] == 0

    def failures(self) -> list[Check]:
        return [c for c in self.checks if c.status == "fail"]

    def sorted(self) -> "VerifyReport":
        return VerifyReport(self.p, sorted(self.checks, key=lambda c: c.id))

    def to_dict(self) -> dict:
        rep = self.sorted()
        return {"p": rep.p, "checks": [asdict(c) for c in rep.checks], "summary": rep.summary}

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=False)

    @classmethod
    def from_dict(cls, d: dict) -> "VerifyReport":
        return cls(d.get("p"), [Check(**c) for c in d["checks"]])

    @classmethod
    def from_json(cls, s: str) -> "VerifyReport":
        return cls.from_dict(json.loads(s))

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["id", "paper_anchor", "status", "details", "elapsed_ms"])
        for c in self.sorted().checks:
            w.writerow([c.id, c.paper_anchor, c.status, c.details, c.elapsed_ms])
        return buf.getvalue()

    def to_text(self) -> str:
        lines = []
        for c in self.sorted().checks:
            line = f"[{c.status.upper():7}] {c.id}: {c.paper_anchor}"
            if c.details:
                line += f" -- {c.details}"
            lines.append(line)
        s = self.summary
        lines.append(f"passed={s['passed']} failed={s['failed']} skipped={s['skipped']}")
        return "\n".join(lines)


def frac_str(x) -> str:
    """Serialise a rational as ``"num/den"`` (``"n/1"`` for integers)."""
    x = Fraction(x)
    return f"{x.numerator}/{x.denominator}"


def parse_frac(s: str) -> Fraction:
    return Fraction(s)
