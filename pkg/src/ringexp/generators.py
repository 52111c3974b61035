"""Generator calculus: finite sets of ideals whose sum is the whole ring.

Refinement (every member contained in some member of the other set) is the
preorder everything else is built on; products of generators play the role
wedges play for open covers.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, Optional

from .config import DEFAULT_BOUNDS, Bounds
from .errors import CapacityError, ValidationError
from .ideals import (
    Ideal,
    enumerate_ideals,
    ideal_preimage,
    ideal_product,
    ideal_sum,
    unit_ideal,
)
from .rings import FiniteRing, RingAutomorphism


@dataclass(frozen=True, eq=False)
class GeneratorSet:
    """A duplicate-free set of ideals of a common ring summing to the ring."""

    host: FiniteRing
    ideals: tuple

    def __post_init__(self):
        if not self.ideals:
            raise ValidationError("a generator must contain at least one ideal")
        for ideal in self.ideals:
            if ideal.host is not self.host:
                raise ValidationError("all ideals of a generator must share the host ring")
        masks = tuple(i.mask for i in self.ideals)
        if masks != tuple(sorted(set(masks))):
            raise ValidationError("generator ideals must be sorted and duplicate-free")
        if not _sums_to_ring(self.host, self.ideals):
            raise ValidationError("ideals do not sum to the whole ring")

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, GeneratorSet)
            and self.host is other.host
            and self.masks == other.masks
        )

    def __hash__(self) -> int:
        return hash((id(self.host), self.masks))

    def __iter__(self):
        return iter(self.ideals)

    def __len__(self) -> int:
        return len(self.ideals)

    def __contains__(self, ideal: Ideal) -> bool:
        return any(i == ideal for i in self.ideals)

    @property
    def masks(self) -> tuple:
        return tuple(i.mask for i in self.ideals)

    def sort_key(self) -> tuple:
        """Fixed total order on generators: lexicographic on sorted bit-vectors."""
        return self.masks

    def __repr__(self) -> str:
        return f"GeneratorSet({[i.indices for i in self.ideals]})"


def _sums_to_ring(ring: FiniteRing, ideals: Iterable[Ideal]) -> bool:
    total = None
    for ideal in ideals:
        total = ideal if total is None else ideal_sum(total, ideal)
        if total.is_unit:
            return True
    return total is not None and total.is_unit


def make_generator(ring: FiniteRing, ideals: Iterable[Ideal]) -> GeneratorSet:
    unique = sorted({i.mask: i for i in ideals}.values(), key=lambda i: i.mask)
    return GeneratorSet(ring, tuple(unique))


def is_generator(ring: FiniteRing, ideals: Iterable[Ideal]) -> bool:
    ideals = list(ideals)
    for ideal in ideals:
        if ideal.host is not ring:
            raise ValidationError("all ideals must live in the given ring")
    return _sums_to_ring(ring, ideals)


def refines(a: GeneratorSet, b: GeneratorSet) -> bool:
    """A < B: every member of A is contained in some member of B."""
    if a.host is not b.host:
        raise ValidationError("generators live in different rings")
    return all(any(i.mask & ~j.mask == 0 for j in b.ideals) for i in a.ideals)


def refinement_witness(a: GeneratorSet, b: GeneratorSet) -> Optional[dict]:
    """Map member -> containing member, or None when A does not refine B."""
    witness = {}
    for i in a.ideals:
        j = next((j for j in b.ideals if i.issubset(j)), None)
        if j is None:
            return None
        witness[i] = j
    return witness


def gen_product(a: GeneratorSet, b: GeneratorSet) -> GeneratorSet:
    if a.host is not b.host:
        raise ValidationError("generators live in different rings")
    return make_generator(a.host, (ideal_product(i, j) for i in a.ideals for j in b.ideals))


def pullback(alpha: RingAutomorphism, a: GeneratorSet) -> GeneratorSet:
    if alpha.host is not a.host:
        raise ValidationError("automorphism acts on a different ring")
    return make_generator(a.host, (ideal_preimage(alpha, i) for i in a.ideals))


def normalize_antichain(a: GeneratorSet) -> GeneratorSet:
    """Drop members strictly contained in other members; refinement-equivalent."""
    kept = [
        i
        for i in a.ideals
        if not any(i.mask != j.mask and i.issubset(j) for j in a.ideals)
    ]
    return make_generator(a.host, kept)


def generator_power(a: GeneratorSet, n: int) -> GeneratorSet:
    if n < 1:
        raise ValidationError("generator powers need n >= 1")
    result = a
    for _ in range(n - 1):
        result = gen_product(result, a)
    return result


def enumerate_generators(
    ring: FiniteRing, antichains_only: bool = True, bounds: Bounds = DEFAULT_BOUNDS
) -> tuple:
    """All generating antichains (or all generating subsets) of the ideal lattice."""
    if antichains_only:
        return antichain_generators(ring, bounds)
    ideals = enumerate_ideals(ring, bounds)
    if len(ideals) > bounds.generator_ideal_bound:
        raise CapacityError(
            f"{len(ideals)} ideals exceed the generator search bound "
            f"{bounds.generator_ideal_bound}"
        )
    out = []
    for mask in range(1, 1 << len(ideals)):
        subset = [ideals[i] for i in range(len(ideals)) if mask >> i & 1]
        if _sums_to_ring(ring, subset):
            out.append(make_generator(ring, subset))
    return tuple(sorted(out, key=GeneratorSet.sort_key))


@lru_cache(maxsize=None)
def antichain_generators(ring: FiniteRing, bounds: Bounds = DEFAULT_BOUNDS) -> tuple:
    """Inclusion-antichains of ideals whose sum is the ring, totally ordered.

    Quantifying over antichains is complete for refinement queries: a set
    refines into J exactly as it refines into J's antichain normalization.
    """
    ideals = enumerate_ideals(ring, bounds)
    if len(ideals) > bounds.generator_ideal_bound:
        raise CapacityError(
            f"{len(ideals)} ideals exceed the generator search bound "
            f"{bounds.generator_ideal_bound}"
        )
    found: list[GeneratorSet] = []

    def extend(start: int, chosen: list[Ideal]) -> None:
        if chosen and _sums_to_ring(ring, chosen):
            found.append(GeneratorSet(ring, tuple(chosen)))
        for i in range(start, len(ideals)):
            candidate = ideals[i]
            if all(
                not candidate.issubset(c) and not c.issubset(candidate) for c in chosen
            ):
                extend(i + 1, chosen + [candidate])

    extend(0, [])
    return tuple(sorted(found, key=GeneratorSet.sort_key))
