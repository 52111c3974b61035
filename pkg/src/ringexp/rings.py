"""Finite commutative unital rings as validated element-indexed tables.

Elements are dense indices 0..order-1.  Structured constructions (cyclic,
polynomial quotients, products, quotients) all compile down to full addition
and multiplication tables, so downstream algorithms never special-case the
recipe.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Optional, Sequence

import numpy as np

from .config import DEFAULT_BOUNDS, Bounds
from .errors import CapacityError, ValidationError

# Associativity / distributivity triples are checked exhaustively up to this
# order and sampled above it (pairs are always exhaustive).
_TRIPLE_EXHAUSTIVE_ORDER = 256
_TRIPLE_SAMPLE = 20000
_SAMPLE_SEED = 0x51B5


def _dtype_for(order: int) -> np.dtype:
    return np.min_scalar_type(max(order - 1, 1))


@dataclass(frozen=True, eq=False)
class FiniteRing:
    """A finite commutative unital ring given by its operation tables."""

    order: int
    add_table: np.ndarray
    mul_table: np.ndarray
    zero: int
    one: int
    recipe: dict
    parents: tuple = ()

    def __post_init__(self):
        _validate_tables(self.order, self.add_table, self.mul_table, self.zero, self.one)
        self.add_table.setflags(write=False)
        self.mul_table.setflags(write=False)
        neg = np.argmax(self.add_table == self.zero, axis=1).astype(self.add_table.dtype)
        neg.setflags(write=False)
        object.__setattr__(self, "_neg_table", neg)

    @property
    def is_trivial(self) -> bool:
        return self.order == 1

    def elements(self) -> range:
        return range(self.order)

    def add(self, a: int, b: int) -> int:
        return int(self.add_table[a, b])

    def mul(self, a: int, b: int) -> int:
        return int(self.mul_table[a, b])

    def neg(self, a: int) -> int:
        return int(self._neg_table[a])

    def sub(self, a: int, b: int) -> int:
        return int(self.add_table[a, self._neg_table[b]])

    def power(self, a: int, n: int) -> int:
        if n < 0:
            raise ValueError("negative element powers are undefined in a ring")
        acc = self.one
        for _ in range(n):
            acc = int(self.mul_table[acc, a])
        return acc

    def characteristic(self) -> int:
        acc, n = self.one, 1
        while acc != self.zero:
            acc = self.add(acc, self.one)
            n += 1
            if n > self.order + 1:
                raise ValidationError("additive order of 1 exceeds ring order")
        return n if self.order > 1 else 1

    def __repr__(self) -> str:
        return f"FiniteRing(order={self.order}, recipe={self.recipe.get('kind')!r})"


def _first_mismatch(lhs: np.ndarray, rhs: np.ndarray) -> tuple:
    where = np.argwhere(lhs != rhs)
    return tuple(int(v) for v in where[0])


def _check_triples(table: np.ndarray, other: Optional[np.ndarray], order: int, law: str) -> None:
    """Check an associativity-shaped law on all (or sampled) triples.

    With other=None: table[table[a,b],c] == table[a,table[b,c]].
    With other=add:  distributivity  mul[a,add[b,c]] == add[mul[a,b],mul[a,c]].
    """
    if order <= _TRIPLE_EXHAUSTIVE_ORDER:
        rows = range(order)
    else:
        rng = np.random.default_rng(_SAMPLE_SEED + order)
        rows = sorted(set(rng.integers(0, order, size=64).tolist()) | {0, 1})
    for a in rows:
        if other is None:
            lhs = table[table[a]]
            rhs = table[a][table]
        else:
            lhs = table[a][other]
            rhs = other[np.ix_(table[a], table[a])]
        if not np.array_equal(lhs, rhs):
            b, c = _first_mismatch(lhs, rhs)
            raise ValidationError(f"{law} fails at elements ({a}, {b}, {c})")
    if order > _TRIPLE_EXHAUSTIVE_ORDER:
        rng = np.random.default_rng(_SAMPLE_SEED ^ order)
        a = rng.integers(0, order, size=_TRIPLE_SAMPLE)
        b = rng.integers(0, order, size=_TRIPLE_SAMPLE)
        c = rng.integers(0, order, size=_TRIPLE_SAMPLE)
        if other is None:
            lhs = table[table[a, b], c]
            rhs = table[a, table[b, c]]
        else:
            lhs = table[a, other[b, c]]
            rhs = other[table[a, b], table[a, c]]
        bad = np.nonzero(lhs != rhs)[0]
        if bad.size:
            i = int(bad[0])
            raise ValidationError(f"{law} fails at elements ({int(a[i])}, {int(b[i])}, {int(c[i])})")


def _validate_tables(order: int, add: np.ndarray, mul: np.ndarray, zero: int, one: int) -> None:
    if order < 1:
        raise ValidationError("ring order must be at least 1")
    for name, table in (("add", add), ("mul", mul)):
        if table.shape != (order, order):
            raise ValidationError(f"{name} table must be {order}x{order}")
        if table.min(initial=0) < 0 or table.max(initial=0) >= order:
            raise ValidationError(f"{name} table contains out-of-range element indices")
    if not (0 <= zero < order and 0 <= one < order):
        raise ValidationError("zero/one indices out of range")
    if order == 1 and zero != one:
        raise ValidationError("trivial ring must have zero == one")

    idx = np.arange(order)
    if not np.array_equal(add, add.T):
        a, b = _first_mismatch(add, add.T)
        raise ValidationError(f"addition not commutative at ({a}, {b})")
    if not np.array_equal(add[zero], idx):
        raise ValidationError("zero is not an additive identity")
    if not (add == zero).any(axis=1).all():
        a = int(np.nonzero(~(add == zero).any(axis=1))[0][0])
        raise ValidationError(f"element {a} has no additive inverse")
    _check_triples(add, None, order, "additive associativity")

    if not np.array_equal(mul, mul.T):
        a, b = _first_mismatch(mul, mul.T)
        raise ValidationError(f"multiplication not commutative at ({a}, {b})")
    if not np.array_equal(mul[one], idx):
        raise ValidationError("one is not a multiplicative identity")
    _check_triples(mul, None, order, "multiplicative associativity")
    _check_triples(mul, add, order, "distributivity")


# ---------------------------------------------------------------------------
# constructors


def _check_order(order: int, bounds: Bounds) -> None:
    if order > bounds.order_bound:
        raise CapacityError(
            f"ring order {order} exceeds the configured bound {bounds.order_bound}"
        )


def make_cyclic(n: int, bounds: Bounds = DEFAULT_BOUNDS) -> FiniteRing:
    """The ring of integers modulo n."""
    if n < 1:
        raise ValidationError("cyclic order must be positive")
    _check_order(n, bounds)
    idx = np.arange(n)
    add = ((idx[:, None] + idx[None, :]) % n).astype(_dtype_for(n))
    mul = ((idx[:, None] * idx[None, :]) % n).astype(_dtype_for(n))
    one = 1 % n
    return FiniteRing(n, add, mul, 0, one, {"kind": "cyclic", "n": n})


def _is_prime(p: int) -> bool:
    if p < 2:
        return False
    d = 2
    while d * d <= p:
        if p % d == 0:
            return False
        d += 1
    return True


def make_poly_quotient(p: int, coeffs: Sequence[int], bounds: Bounds = DEFAULT_BOUNDS) -> FiniteRing:
    """F_p[x]/(f) for a monic f given by coefficients low-to-high."""
    if not _is_prime(p):
        raise ValidationError(f"{p} is not prime")
    f = [c % p for c in coeffs]
    while len(f) > 1 and f[-1] == 0:
        raise ValidationError("polynomial is not monic (zero leading coefficient)")
    deg = len(f) - 1
    if deg < 1:
        raise ValidationError("polynomial must have degree at least 1")
    if f[-1] != 1:
        raise ValidationError("polynomial is not monic")
    order = p**deg
    _check_order(order, bounds)

    # Elements are coefficient vectors low-to-high, encoded little-endian.
    powers = p ** np.arange(deg)
    vecs = np.array([[(i // int(p**a)) % p for a in range(deg)] for i in range(order)])

    add = ((vecs[:, None, :] + vecs[None, :, :]) % p) @ powers
    add = add.astype(_dtype_for(order))

    # Companion-matrix multiplication: row i of the table is M_i applied to
    # every element, where M_i is multiplication by element i.
    comp = np.zeros((deg, deg), dtype=np.int64)
    for a in range(deg - 1):
        comp[a + 1, a] = 1
    comp[:, deg - 1] = [(-f[a]) % p for a in range(deg)]
    xpow = [np.eye(deg, dtype=np.int64)]
    for _ in range(deg - 1):
        xpow.append((comp @ xpow[-1]) % p)
    mul = np.empty((order, order), dtype=_dtype_for(order))
    for i in range(order):
        mat = sum(int(vecs[i, a]) * xpow[a] for a in range(deg)) % p
        prods = (mat @ vecs.T) % p
        mul[i] = powers @ prods
    recipe = {"kind": "poly_quotient", "p": p, "coeffs": f}
    return FiniteRing(order, add, mul, 0, 1, recipe)


def make_product(factors: Sequence[FiniteRing], bounds: Bounds = DEFAULT_BOUNDS) -> FiniteRing:
    """Componentwise product ring; indices are mixed-radix over the factors."""
    if not factors:
        raise ValidationError("product requires at least one factor")
    order = 1
    for f in factors:
        order *= f.order
    _check_order(order, bounds)
    dims = tuple(f.order for f in factors)
    comps = np.unravel_index(np.arange(order), dims)
    add_parts = []
    mul_parts = []
    for k, f in enumerate(factors):
        c = comps[k]
        add_parts.append(f.add_table[np.ix_(c, c)])
        mul_parts.append(f.mul_table[np.ix_(c, c)])
    add = np.ravel_multi_index(tuple(add_parts), dims).astype(_dtype_for(order))
    mul = np.ravel_multi_index(tuple(mul_parts), dims).astype(_dtype_for(order))
    zero = int(np.ravel_multi_index(tuple(f.zero for f in factors), dims))
    one = int(np.ravel_multi_index(tuple(f.one for f in factors), dims))
    recipe = {"kind": "product", "factors": [f.recipe for f in factors]}
    return FiniteRing(order, add, mul, zero, one, recipe, parents=tuple(factors))


def product_components(ring: FiniteRing) -> list[np.ndarray]:
    """Projection maps of a product ring: element index -> factor element index."""
    if not ring.parents:
        raise ValidationError("ring was not built by make_product")
    dims = tuple(f.order for f in ring.parents)
    return [c.copy() for c in np.unravel_index(np.arange(ring.order), dims)]


def product_encode(ring: FiniteRing, parts: Sequence[int]) -> int:
    if not ring.parents:
        raise ValidationError("ring was not built by make_product")
    dims = tuple(f.order for f in ring.parents)
    return int(np.ravel_multi_index(tuple(parts), dims))


def _check_ideal_subset(ring: FiniteRing, members: np.ndarray) -> None:
    if members.size == 0 or ring.zero not in members:
        raise ValidationError("ideal must contain zero")
    inside = np.zeros(ring.order, dtype=bool)
    inside[members] = True
    if not inside[ring.add_table[np.ix_(members, members)]].all():
        raise ValidationError("subset is not closed under addition")
    if not inside[ring.mul_table[:, members]].all():
        raise ValidationError("subset does not absorb ring multiplication")


@dataclass(frozen=True, eq=False)
class Quotient:
    """A quotient ring together with its projection map."""

    ring: FiniteRing
    base: FiniteRing
    ideal_members: tuple
    projection: tuple

    def project(self, a: int) -> int:
        return self.projection[a]


def make_quotient(base: FiniteRing, ideal, bounds: Bounds = DEFAULT_BOUNDS) -> Quotient:
    """Quotient of a ring by an ideal; elements are additive cosets.

    `ideal` may be an Ideal object or any iterable of element indices; the
    ideal axioms are re-checked here so this module stays self-contained.
    """
    members = np.array(sorted(getattr(ideal, "indices", ideal)), dtype=np.int64)
    _check_ideal_subset(base, members)
    coset_rep = np.min(base.add_table[:, members], axis=1)
    reps = np.unique(coset_rep)
    new_index = np.zeros(base.order, dtype=np.int64)
    new_index[reps] = np.arange(reps.size)
    projection = new_index[coset_rep]
    order = int(reps.size)
    add = projection[base.add_table[np.ix_(reps, reps)]].astype(_dtype_for(order))
    mul = projection[base.mul_table[np.ix_(reps, reps)]].astype(_dtype_for(order))
    recipe = {
        "kind": "quotient",
        "base": base.recipe,
        "ideal_generators": [int(m) for m in members],
    }
    ring = FiniteRing(
        order,
        add,
        mul,
        int(projection[base.zero]),
        int(projection[base.one]),
        recipe,
        parents=(base,),
    )
    return Quotient(ring, base, tuple(int(m) for m in members), tuple(int(x) for x in projection))


# ---------------------------------------------------------------------------
# automorphisms


@dataclass(frozen=True, eq=False)
class RingAutomorphism:
    """A validated ring automorphism, stored as an element permutation."""

    host: FiniteRing
    image: tuple

    def __post_init__(self):
        _validate_automorphism(self.host, self.image)

    def __call__(self, a: int) -> int:
        return self.image[a]

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, RingAutomorphism)
            and self.host is other.host
            and self.image == other.image
        )

    def __hash__(self) -> int:
        return hash(self.image)

    @property
    def is_identity(self) -> bool:
        return all(self.image[i] == i for i in range(self.host.order))

    def inverse(self) -> "RingAutomorphism":
        inv = [0] * self.host.order
        for a, b in enumerate(self.image):
            inv[b] = a
        return RingAutomorphism(self.host, tuple(inv))

    def compose(self, other: "RingAutomorphism") -> "RingAutomorphism":
        """self after other: a -> self(other(a))."""
        if other.host is not self.host:
            raise ValidationError("cannot compose automorphisms of different rings")
        return RingAutomorphism(self.host, tuple(self.image[b] for b in other.image))

    def power(self, n: int) -> "RingAutomorphism":
        base = self if n >= 0 else self.inverse()
        result = identity_automorphism(self.host)
        for _ in range(abs(n)):
            result = base.compose(result)
        return result

    def permutation_order(self) -> int:
        n, power = 1, self
        while not power.is_identity:
            power = power.compose(self)
            n += 1
        return n

    def __repr__(self) -> str:
        return f"RingAutomorphism(order={self.host.order}, image={self.image})"


def _validate_automorphism(ring: FiniteRing, image: Sequence[int]) -> None:
    if len(image) != ring.order:
        raise ValidationError("image length must equal the ring order")
    perm = np.array(image, dtype=np.int64)
    if not np.array_equal(np.sort(perm), np.arange(ring.order)):
        raise ValidationError("image is not a bijection")
    if perm[ring.zero] != ring.zero:
        raise ValidationError("zero is not preserved")
    if perm[ring.one] != ring.one:
        raise ValidationError("one is not preserved")
    lhs = perm[ring.add_table]
    rhs = ring.add_table[np.ix_(perm, perm)]
    if not np.array_equal(lhs, rhs):
        a, b = _first_mismatch(lhs, rhs)
        raise ValidationError(f"additivity violated at pair ({a}, {b})")
    lhs = perm[ring.mul_table]
    rhs = ring.mul_table[np.ix_(perm, perm)]
    if not np.array_equal(lhs, rhs):
        a, b = _first_mismatch(lhs, rhs)
        raise ValidationError(f"multiplicativity violated at pair ({a}, {b})")


def make_automorphism(ring: FiniteRing, image: Iterable[int]) -> RingAutomorphism:
    return RingAutomorphism(ring, tuple(int(i) for i in image))


def identity_automorphism(ring: FiniteRing) -> RingAutomorphism:
    return RingAutomorphism(ring, tuple(range(ring.order)))


def frobenius_automorphism(ring: FiniteRing) -> RingAutomorphism:
    """a -> a^p for p the ring characteristic; validation rejects non-automorphisms."""
    p = ring.characteristic()
    return make_automorphism(ring, [ring.power(a, p) for a in ring.elements()])


def swap_automorphism(ring: FiniteRing, i: int, j: int) -> RingAutomorphism:
    """Swap factors i and j of a product ring."""
    if not ring.parents:
        raise ValidationError("swap automorphism requires a product ring")
    k = len(ring.parents)
    if not (0 <= i < k and 0 <= j < k):
        raise ValidationError(f"factor indices must lie in 0..{k - 1}")
    dims = tuple(f.order for f in ring.parents)
    comps = list(np.unravel_index(np.arange(ring.order), dims))
    comps[i], comps[j] = comps[j], comps[i]
    image = np.ravel_multi_index(tuple(comps), dims)
    return make_automorphism(ring, image.tolist())


class _PartialMap:
    """Partial unital map between two rings, closed under +,* propagation."""

    __slots__ = ("dom", "cod", "fwd", "used")

    def __init__(self, dom: FiniteRing, cod: FiniteRing):
        self.dom = dom
        self.cod = cod
        self.fwd: dict[int, int] = {}
        self.used: set[int] = set()

    def clone(self) -> "_PartialMap":
        other = _PartialMap(self.dom, self.cod)
        other.fwd = dict(self.fwd)
        other.used = set(self.used)
        return other

    def assign(self, a: int, b: int) -> bool:
        """Record a -> b and propagate closure; False on any conflict."""
        queue = [(a, b)]
        while queue:
            a, b = queue.pop()
            if a in self.fwd:
                if self.fwd[a] != b:
                    return False
                continue
            if b in self.used:
                return False
            self.fwd[a] = b
            self.used.add(b)
            for c, d in list(self.fwd.items()):
                queue.append((self.dom.add(a, c), self.cod.add(b, d)))
                queue.append((self.dom.mul(a, c), self.cod.mul(b, d)))
        return True


def _search_unital_maps(dom: FiniteRing, cod: FiniteRing, find_all: bool) -> list[tuple]:
    if dom.order != cod.order:
        return []
    seed = _PartialMap(dom, cod)
    if not (seed.assign(dom.zero, cod.zero) and seed.assign(dom.one, cod.one)):
        return []
    results: list[tuple] = []

    def extend(state: _PartialMap) -> bool:
        if len(state.fwd) == dom.order:
            image = tuple(state.fwd[a] for a in range(dom.order))
            results.append(image)
            return not find_all
        a = min(x for x in range(dom.order) if x not in state.fwd)
        for b in range(cod.order):
            if b in state.used:
                continue
            nxt = state.clone()
            if nxt.assign(a, b) and extend(nxt):
                return True
        return False

    extend(seed)
    return results


def enumerate_automorphisms(
    ring: FiniteRing, bounds: Bounds = DEFAULT_BOUNDS
) -> list[RingAutomorphism]:
    """All automorphisms, identity first; bounded because the search is exhaustive."""
    if ring.order > bounds.automorphism_bound:
        raise CapacityError(
            f"automorphism enumeration is bounded at order {bounds.automorphism_bound}; "
            "supply automorphisms explicitly for larger rings"
        )
    images = _search_unital_maps(ring, ring, find_all=True)
    identity = tuple(range(ring.order))
    rest = sorted(img for img in images if img != identity)
    autos = [RingAutomorphism(ring, identity)]
    autos.extend(RingAutomorphism(ring, img) for img in rest)
    return autos


def find_ring_isomorphism(a: FiniteRing, b: FiniteRing) -> Optional[tuple]:
    """Backtracking search for a unital ring isomorphism; a test utility."""
    found = _search_unital_maps(a, b, find_all=False)
    return found[0] if found else None
