"""Deterministic check/report containers shared by the library and the CLI.

Reports never carry timestamps or timings; the CLI keeps timing on a side
channel so that report bytes are identical across runs for fixed inputs.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

PASS = "pass"
FAIL = "fail"
SKIP = "skip"


@dataclass(frozen=True)
class Check:
    name: str
    status: str
    witness: str | None = None
    detail: str | None = None

    def __post_init__(self) -> None:
        if self.status not in (PASS, FAIL, SKIP):
            raise ValueError(f"unknown check status {self.status!r}")

    def to_dict(self) -> dict:
        return {"name": self.name, "status": self.status,
                "witness": self.witness, "detail": self.detail}

    @classmethod
    def from_dict(cls, d: dict) -> "Check":
        return cls(d["name"], d["status"], d.get("witness"), d.get("detail"))


def passed_check(name: str, detail: str | None = None) -> Check:
    return Check(name, PASS, None, detail)


def failed_check(name: str, witness: str | None, detail: str | None = None) -> Check:
    return Check(name, FAIL, witness, detail)


def skipped_check(name: str, detail: str | None = None) -> Check:
    return Check(name, SKIP, None, detail)


@dataclass(frozen=True)
class Report:
    command: str
    args: dict
    input_digest: str
    checks: tuple[Check, ...]
    result: dict | None = None
    flags: dict = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return all(c.status != FAIL for c in self.checks)

    def to_dict(self) -> dict:
        return {
            "command": self.command,
            "args": self.args,
            "input_digest": self.input_digest,
            "checks": [c.to_dict() for c in self.checks],
            "result": self.result,
            "flags": self.flags,
            "status": PASS if self.passed else FAIL,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True) + "\n"

    @classmethod
    def from_dict(cls, d: dict) -> "Report":
        return cls(
            command=d["command"],
            args=d["args"],
            input_digest=d["input_digest"],
            checks=tuple(Check.from_dict(c) for c in d["checks"]),
            result=d.get("result"),
            flags=d.get("flags", {}),
        )

    @classmethod
    def from_json(cls, text: str) -> "Report":
        return cls.from_dict(json.loads(text))

    def to_text(self) -> str:
        lines = [f"# {self.command} ({self.input_digest})"]
        for c in self.checks:
            mark = {"pass": "PASS", "fail": "FAIL", "skip": "skip"}[c.status]
            line = f"{mark:4s}  {c.name}"
            if c.detail:
                line += f"  [{c.detail}]"
            if c.witness:
                line += f"  witness: {c.witness}"
            lines.append(line)
        # flat result fields render; nested payloads are JSON-only
        for key in sorted(self.result or {}):
            value = self.result[key]
            if isinstance(value, (str, int, bool)) or value is None:
                lines.append(f"{key} = {value}")
            elif isinstance(value, list) and all(isinstance(v, str) for v in value):
                lines.extend(f"{key}[{i + 1}] = {v}" for i, v in enumerate(value))
        if self.flags:
            for k, v in sorted(self.flags.items()):
                lines.append(f"flag  {k} = {v}")
        lines.append(f"overall: {'PASS' if self.passed else 'FAIL'}")
        return "\n".join(lines) + "\n"
