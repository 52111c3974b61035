"""Decision outcomes shared by the algebraic, symbolic and topological deciders."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any, Optional

PROVED = "proved"
REFUTED = "refuted"
UNKNOWN_AT_BOUND = "unknown_at_bound"

_EXIT_CODES = {PROVED: 0, REFUTED: 1, UNKNOWN_AT_BOUND: 4}


@dataclass
class Verdict:
    """Outcome of an expansivity-style decision.

    witness/refuter are generator sets, symbolic generators or open covers
    depending on the decider; n_table maps each tested adversary to the least
    window index achieving refinement; cycle_length is the period of the
    normalized window sequence when a repeat was detected.
    """

    status: str
    witness: Any = None
    refuter: Any = None
    n_table: Optional[dict] = None
    cycle_length: Optional[int] = None
    extra: dict = field(default_factory=dict)

    @property
    def proved(self) -> bool:
        return self.status == PROVED

    @property
    def refuted(self) -> bool:
        return self.status == REFUTED

    def exit_code(self) -> int:
        return _EXIT_CODES[self.status]
