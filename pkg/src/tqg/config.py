"""Run configurations shared by the CLI and the scripts."""

from __future__ import annotations

from dataclasses import dataclass


@dataclass(frozen=True)
class SwapSearchConfig:
    one_qutrit: int = 3
    two_qutrit: int = 6
    workers: int = 1
    certify: bool = True

    @property
    def counts(self) -> tuple[int, int]:
        return (self.one_qutrit, self.two_qutrit)

    @property
    def depth(self) -> int:
        return self.one_qutrit + self.two_qutrit


@dataclass(frozen=True)
class GF3SearchConfig:
    control_values: tuple[int, ...] = (1, 2)
    depth: int = 10
    workers: int = 1
    exact_count: int | None = None
    edges: str = "a-c,b-c"
