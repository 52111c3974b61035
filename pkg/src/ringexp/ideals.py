"""Ideal lattice of a finite ring.

Ideals are bit-vectors (Python ints) over element indices, so inclusion,
intersection and equality are single integer operations.  Enumeration goes
through principal ideals closed under pairwise sums, which is complete for
finite rings.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .config import DEFAULT_BOUNDS, Bounds
from .errors import CapacityError, DomainError, ValidationError
from .rings import FiniteRing, RingAutomorphism


@dataclass(frozen=True, eq=False)
class Ideal:
    host: FiniteRing
    mask: int

    def __post_init__(self):
        if not 0 < self.mask < (1 << self.host.order):
            raise ValidationError("ideal mask out of range")

    def __eq__(self, other) -> bool:
        return isinstance(other, Ideal) and self.host is other.host and self.mask == other.mask

    def __hash__(self) -> int:
        return hash((id(self.host), self.mask))

    @property
    def indices(self) -> tuple:
        return tuple(_mask_indices(self.mask))

    @property
    def size(self) -> int:
        return bin(self.mask).count("1")

    def contains(self, element: int) -> bool:
        return bool(self.mask >> element & 1)

    def issubset(self, other: "Ideal") -> bool:
        return self.mask & ~other.mask == 0

    @property
    def is_zero(self) -> bool:
        return self.mask == 1 << self.host.zero

    @property
    def is_unit(self) -> bool:
        return self.mask == (1 << self.host.order) - 1

    def __repr__(self) -> str:
        return f"Ideal({self.indices})"


def _mask_indices(mask: int) -> list[int]:
    out = []
    i = 0
    while mask:
        if mask & 1:
            out.append(i)
        mask >>= 1
        i += 1
    return out


def _mask_from(iterable) -> int:
    mask = 0
    for i in iterable:
        mask |= 1 << int(i)
    return mask


def _indices_array(mask: int) -> np.ndarray:
    return np.array(_mask_indices(mask), dtype=np.int64)


def _require_same_host(a: Ideal, b: Ideal) -> None:
    if a.host is not b.host:
        raise ValidationError("ideals live in different rings")


def zero_ideal(ring: FiniteRing) -> Ideal:
    return Ideal(ring, 1 << ring.zero)


def unit_ideal(ring: FiniteRing) -> Ideal:
    return Ideal(ring, (1 << ring.order) - 1)


@lru_cache(maxsize=None)
def principal_ideal(ring: FiniteRing, x: int) -> Ideal:
    """Rx, computed as the multiples column; already an ideal in a unital ring."""
    return Ideal(ring, _mask_from(np.unique(ring.mul_table[:, x])))


def ideal_generated(ring: FiniteRing, elements) -> Ideal:
    """Smallest ideal containing the given elements."""
    result = zero_ideal(ring)
    for x in sorted(set(int(e) for e in elements)):
        result = ideal_sum(result, principal_ideal(ring, x))
    return result


@lru_cache(maxsize=None)
def _sum_masks(ring: FiniteRing, mask_a: int, mask_b: int) -> int:
    a = _indices_array(mask_a)
    b = _indices_array(mask_b)
    return _mask_from(np.unique(ring.add_table[np.ix_(a, b)]))


def ideal_sum(a: Ideal, b: Ideal) -> Ideal:
    _require_same_host(a, b)
    if a.issubset(b):
        return b
    if b.issubset(a):
        return a
    lo, hi = sorted((a.mask, b.mask))
    return Ideal(a.host, _sum_masks(a.host, lo, hi))


@lru_cache(maxsize=None)
def _product_masks(ring: FiniteRing, mask_a: int, mask_b: int) -> int:
    a = _indices_array(mask_a)
    b = _indices_array(mask_b)
    products = np.unique(ring.mul_table[np.ix_(a, b)])
    # Additive closure; the product set already absorbs ring multiplication.
    current = np.unique(np.append(products, ring.zero))
    while True:
        closed = np.unique(ring.add_table[np.ix_(current, current)])
        if closed.size == current.size:
            return _mask_from(current)
        current = closed


def ideal_product(a: Ideal, b: Ideal) -> Ideal:
    _require_same_host(a, b)
    lo, hi = sorted((a.mask, b.mask))
    return Ideal(a.host, _product_masks(a.host, lo, hi))


def ideal_intersect(a: Ideal, b: Ideal) -> Ideal:
    _require_same_host(a, b)
    return Ideal(a.host, a.mask & b.mask)


def radical(ring: FiniteRing, ideal: Ideal) -> Ideal:
    """Elements with some positive power inside the ideal."""
    mask = 0
    for x in ring.elements():
        power = x
        seen = set()
        while power not in seen:
            seen.add(power)
            if ideal.contains(power):
                mask |= 1 << x
                break
            power = ring.mul(power, x)
    return Ideal(ring, mask)


def annihilator(ring: FiniteRing, ideal: Ideal) -> Ideal:
    members = _indices_array(ideal.mask)
    rows = ring.mul_table[:, members]
    keep = (rows == ring.zero).all(axis=1)
    return Ideal(ring, _mask_from(np.nonzero(keep)[0]))


@lru_cache(maxsize=None)
def enumerate_ideals(ring: FiniteRing, bounds: Bounds = DEFAULT_BOUNDS) -> tuple:
    """Complete ideal list: principal ideals closed under pairwise sums."""
    masks = {principal_ideal(ring, x).mask for x in ring.elements()}
    frontier = set(masks)
    while frontier:
        fresh = set()
        for m in frontier:
            for n in masks:
                s = _sum_masks(ring, *sorted((m, n)))
                if s not in masks and s not in fresh:
                    fresh.add(s)
        masks |= fresh
        if len(masks) > bounds.lattice_bound:
            raise CapacityError(
                f"ideal lattice exceeds the configured bound {bounds.lattice_bound}"
            )
        frontier = fresh
    return tuple(Ideal(ring, m) for m in sorted(masks))


def is_prime(ring: FiniteRing, ideal: Ideal) -> bool:
    if ideal.is_unit:
        raise DomainError("primality is defined for proper ideals only")
    inside = np.zeros(ring.order, dtype=bool)
    inside[list(ideal.indices)] = True
    product_in = inside[ring.mul_table]
    factor_in = inside[:, None] | inside[None, :]
    return bool((~product_in | factor_in).all())


def is_maximal(ring: FiniteRing, ideal: Ideal, bounds: Bounds = DEFAULT_BOUNDS) -> bool:
    if ideal.is_unit:
        raise DomainError("maximality is defined for proper ideals only")
    for other in enumerate_ideals(ring, bounds):
        if not other.is_unit and ideal.issubset(other) and other.mask != ideal.mask:
            return False
    return True


@lru_cache(maxsize=None)
def maximal_ideals(ring: FiniteRing, bounds: Bounds = DEFAULT_BOUNDS) -> tuple:
    proper = [i for i in enumerate_ideals(ring, bounds) if not i.is_unit]
    out = []
    for i in proper:
        if not any(i.mask != j.mask and i.issubset(j) for j in proper):
            out.append(i)
    return tuple(sorted(out, key=lambda i: i.mask))


def prime_ideals(ring: FiniteRing, bounds: Bounds = DEFAULT_BOUNDS) -> tuple:
    return tuple(
        i for i in enumerate_ideals(ring, bounds) if not i.is_unit and is_prime(ring, i)
    )


def is_local(ring: FiniteRing, bounds: Bounds = DEFAULT_BOUNDS) -> bool:
    return len(maximal_ideals(ring, bounds)) == 1


def idempotent_elements(ring: FiniteRing) -> tuple:
    idx = np.arange(ring.order)
    diag = ring.mul_table[idx, idx]
    return tuple(int(e) for e in np.nonzero(diag == idx)[0])


def primitive_orthogonal_idempotents(ring: FiniteRing) -> tuple:
    """e_1..e_k with sum 1, pairwise products 0, none further splittable."""
    if ring.is_trivial:
        return ()
    idems = [e for e in idempotent_elements(ring) if e != ring.zero]
    work = [ring.one]
    while True:
        for pos, e in enumerate(work):
            split = next(
                (f for f in idems if f != e and ring.mul(f, e) == f),
                None,
            )
            if split is not None:
                work[pos : pos + 1] = [split, ring.sub(e, split)]
                break
        else:
            return tuple(sorted(work))


def validate_ideal(ideal: Ideal) -> None:
    """Re-check the ideal axioms; for untrusted masks."""
    ring = ideal.host
    members = _indices_array(ideal.mask)
    if not ideal.contains(ring.zero):
        raise ValidationError("ideal must contain zero")
    inside = np.zeros(ring.order, dtype=bool)
    inside[members] = True
    if not inside[ring.add_table[np.ix_(members, members)]].all():
        raise ValidationError("ideal is not closed under addition")
    if not inside[ring.mul_table[:, members]].all():
        raise ValidationError("ideal does not absorb ring multiplication")


def ideal_image(alpha: RingAutomorphism, ideal: Ideal) -> Ideal:
    """The image set alpha(I); an ideal because alpha is an automorphism."""
    if alpha.host is not ideal.host:
        raise ValidationError("automorphism and ideal live in different rings")
    return Ideal(ideal.host, _mask_from(alpha.image[i] for i in ideal.indices))


def ideal_preimage(alpha: RingAutomorphism, ideal: Ideal) -> Ideal:
    return ideal_image(alpha.inverse(), ideal)
