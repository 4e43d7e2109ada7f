"""Resource budgets for the finite probes.

Every computation in this package is a finite probe of an infinite object, so the
limits are explicit. ``SYMDYN_BUDGET`` selects a default profile.
"""
from __future__ import annotations

import os
import time
from dataclasses import dataclass, field

PROFILES = {
    "small": dict(max_patterns=2**16, max_states=2**16, max_seconds=10.0),
    "default": dict(max_patterns=2**24, max_states=2**20, max_seconds=300.0),
    "large": dict(max_patterns=2**28, max_states=2**23, max_seconds=3600.0),
}


class BudgetExceeded(RuntimeError):
    """A probe ran past one of its limits."""


@dataclass
class Budget:
    max_patterns: int = 2**24
    max_states: int = 2**20
    max_seconds: float | None = 300.0
    _start: float = field(default_factory=time.monotonic, repr=False, compare=False)

    @classmethod
    def profile(cls, name: str) -> "Budget":
        try:
            return cls(**PROFILES[name])
        except KeyError:
            raise ValueError(f"unknown budget profile {name!r}; expected one of {sorted(PROFILES)}")

    def tick(self):
        if self.max_seconds is not None and time.monotonic() - self._start > self.max_seconds:
            raise BudgetExceeded(f"wall-clock budget of {self.max_seconds}s exceeded")

    def check_patterns(self, n: int):
        if n > self.max_patterns:
            raise BudgetExceeded(f"materializing {n} patterns exceeds {self.max_patterns}")


def default_budget() -> Budget:
    return Budget.profile(os.environ.get("SYMDYN_BUDGET", "default"))
