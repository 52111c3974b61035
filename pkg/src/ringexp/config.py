"""Configurable size bounds for the exhaustive machinery."""

from __future__ import annotations

from dataclasses import dataclass, replace


@dataclass(frozen=True)
class Bounds:
    """Caps that keep exhaustive searches inside the time budget.

    order_bound: largest ring order for which full tables are built.
    automorphism_bound: largest order for automorphism enumeration.
    lattice_bound: maximum number of ideals enumerate_ideals may return.
    generator_ideal_bound: maximum ideal count for generator enumeration.
    space_point_bound: maximum point count for open-set enumeration.
    """

    order_bound: int = 4096
    automorphism_bound: int = 16
    lattice_bound: int = 4096
    generator_ideal_bound: int = 24
    space_point_bound: int = 12

    def override(self, **kwargs: int) -> "Bounds":
        for key, value in kwargs.items():
            if value is not None and value <= 0:
                raise ValueError(f"bound {key} must be positive, got {value}")
        return replace(self, **{k: v for k, v in kwargs.items() if v is not None})


DEFAULT_BOUNDS = Bounds()
