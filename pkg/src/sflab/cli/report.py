"""Line-oriented check reports."""

from __future__ import annotations

from dataclasses import dataclass


@dataclass
class Report:
    env: list[tuple[str, str]]
    checks: list  # CheckResult, in manifest order

    @property
    def passed(self) -> int:
        return sum(c.status == "PASS" for c in self.checks)

    @property
    def ok(self) -> bool:
        return self.passed == len(self.checks)

    def lines(self) -> list[str]:
        out = [f"env {k} = {v}" for k, v in self.env]
        for c in self.checks:
            out.append(f"check {c.name} = {c.status}")
            if c.status != "PASS" and c.witness:
                out.append(f"  witness = {c.witness}")
            out.extend(f"  value {k} = {v}" for k, v in c.values)
        out.append(f"summary = {self.passed}/{len(self.checks)}")
        return out

    def text(self) -> str:
        return "\n".join(self.lines()) + "\n"


def emit_report(report: Report, path=None) -> str:
    text = report.text()
    if path is not None:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text)
    return text
