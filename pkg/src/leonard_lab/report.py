"""Verification report rows and their serialized forms."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Any

PASS, FAIL, SKIPPED = "pass", "fail", "skipped"

CHECK_NAMES = (
    "leonard_pair",
    "rank",
    "det1",
    "det1s",
    "det2",
    "span_gamma",
    "span_gamma_star",
    "lemB_structure",
    "bc_product",
    "psi_prop2",
    "eq_left_lemma1",
    "cor1_ratios",
    "brackets_nonzero",
)


def _show(value) -> Any:
    if value is None:
        return None
    if hasattr(value, "serialize"):
        return value.serialize()
    if hasattr(value, "to_strings"):
        return value.to_strings()
    if isinstance(value, (list, tuple)):
        return [_show(v) for v in value]
    return str(value)


def _cell(value, width=40) -> str:
    shown = _show(value)
    if shown is None:
        return "-"
    if isinstance(shown, list):
        shown = json.dumps(shown, separators=(",", ":"))
    return shown if len(shown) <= width else shown[: width - 3] + "..."


@dataclass
class CheckRow:
    name: str
    status: str
    left_value: Any = None
    right_value: Any = None
    detail: str = ""

    def __post_init__(self):
        if self.name not in CHECK_NAMES:
            raise ValueError(f"unknown check name {self.name!r}")
        if self.status not in (PASS, FAIL, SKIPPED):
            raise ValueError(f"bad status {self.status!r}")

    def to_json(self) -> dict:
        return {
            "name": self.name,
            "status": self.status,
            "lhs": _show(self.left_value),
            "rhs": _show(self.right_value),
            "detail": self.detail,
        }


@dataclass
class VerificationReport:
    subject: str
    checks: list[CheckRow] = field(default_factory=list)
    beta: Any = None  # BetaContext once known
    info: dict = field(default_factory=dict)

    def add(self, name, status, left=None, right=None, detail="") -> CheckRow:
        row = CheckRow(name, status, left, right, detail)
        self.checks.append(row)
        return row

    def compare(self, name, left, right, detail="") -> CheckRow:
        return self.add(name, PASS if left == right else FAIL, left, right, detail)

    def skip(self, name, detail) -> CheckRow:
        return self.add(name, SKIPPED, detail=detail)

    def row(self, name) -> CheckRow:
        for r in self.checks:
            if r.name == name:
                return r
        raise KeyError(name)

    def status_of(self, name) -> str:
        return self.row(name).status

    @property
    def passed(self) -> bool:
        return bool(self.checks) and all(r.status != FAIL for r in self.checks)

    def filtered(self, names) -> "VerificationReport":
        wanted = set(names)
        out = VerificationReport(self.subject, [r for r in self.checks if r.name in wanted], self.beta, dict(self.info))
        return out

    def to_json(self) -> dict:
        beta = None
        if self.beta is not None:
            beta = {
                "value": self.beta.beta.serialize(),
                "source": "eigenvalue ratio" if self.beta.derived else "default choice",
            }
        return {
            "subject": self.subject,
            "passed": self.passed,
            "beta": beta,
            "info": self.info,
            "checks": [r.to_json() for r in self.checks],
        }

    def to_text(self) -> str:
        rows = [(r.name, r.status, _cell(r.left_value), _cell(r.right_value)) for r in self.checks]
        header = ("check", "status", "lhs", "rhs")
        widths = [max(len(x) for x in col) for col in zip(header, *rows)]
        fmt = "  ".join(f"{{:<{w}}}" for w in widths)
        lines = [f"subject: {self.subject}"]
        if self.beta is not None:
            lines.append(f"beta: {self.beta.beta.serialize()}" + ("" if self.beta.derived else " (default)"))
        lines.append(fmt.format(*header).rstrip())
        lines.append(fmt.format(*("-" * w for w in widths)))
        lines.extend(fmt.format(*row).rstrip() for row in rows)
        for r in self.checks:
            if r.status == FAIL and r.detail:
                lines.append(f"! {r.name}: {r.detail}")
        lines.append("result: " + ("PASS" if self.passed else "FAIL"))
        return "\n".join(lines)
