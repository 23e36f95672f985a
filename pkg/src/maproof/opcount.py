"""Field-operation accounting.

Algorithms report their operation totals in bulk through :func:`tally`;
nothing is recorded unless a counter is active via :func:`counting`.
Totals are attributed to the current phase ("prover", "verifier",
"oracle", ...), set with :func:`phase`.
"""

from __future__ import annotations

from collections import Counter, defaultdict
from contextlib import contextmanager
from contextvars import ContextVar

KINDS = ("add", "mul", "inv")


class OpCounter:
    def __init__(self):
        self.counts: dict[str, Counter] = defaultdict(Counter)

    def add(self, phase_name: str, kind: str, n: int) -> None:
        self.counts[phase_name][kind] += n

    def total(self, phase_name: str | None = None) -> int:
        if phase_name is None:
            return sum(sum(c.values()) for c in self.counts.values())
        return sum(self.counts.get(phase_name, Counter()).values())

    def reset(self) -> None:
        self.counts.clear()

    def as_dict(self) -> dict:
        return {p: {k: c[k] for k in KINDS} for p, c in sorted(self.counts.items())}


_counter: ContextVar[OpCounter | None] = ContextVar("maproof_opcounter", default=None)
_phase: ContextVar[str] = ContextVar("maproof_phase", default="other")


def tally(kind: str, n: int = 1) -> None:
    c = _counter.get()
    if c is not None and n:
        c.counts[_phase.get()][kind] += n


def active() -> bool:
    return _counter.get() is not None


@contextmanager
def counting(counter: OpCounter | None = None):
    counter = OpCounter() if counter is None else counter
    token = _counter.set(counter)
    try:
        yield counter
    finally:
        _counter.reset(token)


def recorded(fn):
    """Run ``fn()`` under a private counter; returns (result, {kind: count})."""
    with counting() as c:
        with phase("recorded"):
            result = fn()
    return result, dict(c.counts.get("recorded", {}))


def replay(costs: dict) -> None:
    """Charge a cost recorded by :func:`recorded` to the active counter."""
    for kind, n in costs.items():
        tally(kind, n)


@contextmanager
def phase(name: str):
    token = _phase.set(name)
    try:
        yield
    finally:
        _phase.reset(token)
