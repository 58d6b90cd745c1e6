"""Run configuration: ``key = value`` files overridden by command-line flags."""

from __future__ import annotations

import os
from dataclasses import dataclass, field
from pathlib import Path

__all__ = ["CONFIG_ENV", "RunConfig", "read_config_file"]

CONFIG_ENV = "IDIOMEVAL_CONFIG"


@dataclass
class RunConfig:
    subcommand: str = ""
    paths: dict[str, str] = field(default_factory=dict)
    max_len: int = 80
    max_ratio: float = 1.5
    upsample_factor: int = 1
    iterations: int = 5
    lam: float = 4.0
    alpha: float = 0.01
    seed: int = 0
    output: str | None = None
    report_format: str = "structured"

    def validate(self) -> None:
        problems = []
        for name, p in self.paths.items():
            if p and not Path(p).is_file():
                problems.append(f"{name}: no such file {p}")
        if self.max_len < 1:
            problems.append(f"max_len must be >= 1, got {self.max_len}")
        if self.max_ratio < 1:
            problems.append(f"max_ratio must be >= 1, got {self.max_ratio}")
        if self.upsample_factor < 1:
            problems.append(f"upsample factor must be >= 1, got {self.upsample_factor}")
        if self.iterations < 1:
            problems.append(f"iterations must be >= 1, got {self.iterations}")
        if self.lam < 0:
            problems.append(f"lambda must be >= 0, got {self.lam}")
        if self.alpha < 0:
            problems.append(f"alpha must be >= 0, got {self.alpha}")
        if self.report_format not in ("structured", "tabular"):
            problems.append(f"unknown report format {self.report_format!r}")
        if problems:
            raise ValueError("; ".join(problems))


def read_config_file(path: str | Path | None = None) -> dict[str, str]:
    """Parse ``key = value`` lines; ``#`` starts a comment. Keys use underscores.

    Without an explicit path the file named by ``$IDIOMEVAL_CONFIG`` is read, if set.
    """
    if path is None:
        path = os.environ.get(CONFIG_ENV)
        if not path:
            return {}
    values = {}
    for lineno, raw in enumerate(Path(path).read_text(encoding="utf-8").splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        key, sep, value = line.partition("=")
        if not sep:
            raise ValueError(f"{path}:{lineno}: expected 'key = value'")
        values[key.strip().replace("-", "_")] = value.strip()
    return values
