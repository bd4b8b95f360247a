"""Plain key=value reports with a reproducibility header."""

from __future__ import annotations

from dataclasses import dataclass, field

from . import __version__


@dataclass
class Report:
    command: str
    seed: int
    budget: int
    m_max: int
    weight: str
    body: list[str] = field(default_factory=list)
    extra: list[str] = field(default_factory=list)

    def header(self) -> list[str]:
        # worker count is deliberately absent: reports must not depend on it
        return [
            "tool=cosyx",
            f"version={__version__}",
            f"command={self.command}",
            f"seed={self.seed}",
            f"budget={self.budget}",
            f"m_max={self.m_max}",
            f"weight={self.weight}",
        ]

    def add(self, *lines: str) -> None:
        self.body.extend(lines)

    def text(self) -> str:
        out = self.header() + self.body
        text = "\n".join(out) + "\n"
        if self.extra:
            text += "\n".join(self.extra) + "\n"
        return text

    def comment_header(self) -> str:
        return "".join(f"# {ln}\n" for ln in self.header())
