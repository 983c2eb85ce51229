"""Three-valued decisions and the shared bounds record.

Every search in this package answers Yes with a machine-checkable witness,
No with an analytic certificate tag, or Inconclusive when a bounded
stand-in for an exact backend ran out of budget.  Raising a bound can turn
Inconclusive into Yes or No but never flips a committed answer.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from typing import Any

YES = "yes"
NO = "no"
INCONCLUSIVE = "inconclusive"


@dataclass(frozen=True)
class Decision:
    kind: str
    payload: Any = None
    certificate: str | None = None
    bound: Any = None
    trace: tuple[str, ...] = ()

    @property
    def is_yes(self) -> bool:
        return self.kind == YES

    @property
    def is_no(self) -> bool:
        return self.kind == NO

    @property
    def is_inconclusive(self) -> bool:
        return self.kind == INCONCLUSIVE

    def with_trace(self, *stages: str) -> "Decision":
        return replace(self, trace=self.trace + stages)


def yes(payload: Any = None, *trace: str) -> Decision:
    return Decision(YES, payload=payload, trace=trace)


def no(certificate: str, *trace: str) -> Decision:
    return Decision(NO, certificate=certificate, trace=trace)


def inconclusive(bound: Any = None, *trace: str) -> Decision:
    return Decision(INCONCLUSIVE, bound=bound, trace=trace)


@dataclass(frozen=True)
class Bounds:
    """Single tuning surface for every bounded subroutine.

    orbit: max exponent scanned by the single-exponent orbit search.
    conjugator: max conjugator length in the bounded twisted search.
    image: max power probed for membership in iterated images.
    max_k: last iterated-pullback stage tried before giving up; None
        means the rank-dependent default (stabilisation floor + 16).
    word_cap: words longer than this abort a computation path with
        Inconclusive instead of thrashing; never weakens Yes/No answers.
    state_cap: max states explored by the twisted breadth-first search.
    """

    orbit: int = 64
    conjugator: int = 10
    image: int = 32
    max_k: int | None = None
    word_cap: int = 2_000_000
    state_cap: int = 200_000

    def __post_init__(self) -> None:
        for name in ("orbit", "conjugator", "image"):
            if getattr(self, name) < 1:
                raise ValueError(f"bound {name!r} must be >= 1")
        if self.max_k is not None and self.max_k < 1:
            raise ValueError("bound 'max_k' must be >= 1")

    def max_stage(self, rank: int) -> int:
        if self.max_k is not None:
            return self.max_k
        k0 = 2 * (rank - 1) ** 2
        return max(k0, 1) + 16


DEFAULT_BOUNDS = Bounds()


class SizeCapExceeded(Exception):
    """A word or graph outgrew Bounds.word_cap; callers report Inconclusive."""
