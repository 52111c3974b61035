"""Exact symbolic model of the integers semilocalized at k primes.

Nonzero ideals are exponent vectors in N^k (the ideal (p_1^a_1 ... p_k^a_k));
the zero ideal is a separate bottom element.  Containment reverses the
componentwise order, sums take componentwise minima and products add.

The bounded expansivity oracle works in an exponent grid saturated at the
adversary bound: saturation is exact for refinement against bounded
adversaries, and the saturated window sequence lives in a finite state space,
so cycle detection plus escape-direction certificates give exact verdicts on
the tested grid.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from itertools import combinations, product as iter_product
from typing import Iterable, Optional, Sequence

import numpy as np

from .errors import DomainError, InvariantViolation, ValidationError
from .verdicts import PROVED, REFUTED, UNKNOWN_AT_BOUND, Verdict


@dataclass(frozen=True)
class SymIdeal:
    """Bottom (the zero ideal) or an exponent vector; all-zeros is the ring."""

    k: int
    exps: Optional[tuple]

    def __post_init__(self):
        if self.exps is not None:
            if len(self.exps) != self.k:
                raise ValidationError("exponent vector length must equal k")
            if any(e < 0 for e in self.exps):
                raise ValidationError("exponents must be nonnegative")

    @property
    def is_bottom(self) -> bool:
        return self.exps is None

    @property
    def is_ring(self) -> bool:
        return self.exps is not None and all(e == 0 for e in self.exps)

    def issubset(self, other: "SymIdeal") -> bool:
        if self.is_bottom:
            return True
        if other.is_bottom:
            return False
        return all(a >= b for a, b in zip(self.exps, other.exps))

    def zero_coords(self) -> frozenset:
        if self.is_bottom:
            return frozenset(range(self.k))
        return frozenset(i for i, e in enumerate(self.exps) if e == 0)

    def __repr__(self) -> str:
        return "SymIdeal(bottom)" if self.is_bottom else f"SymIdeal{self.exps}"


def sym_bottom(k: int) -> SymIdeal:
    return SymIdeal(k, None)


def sym_ideal(exps: Sequence[int]) -> SymIdeal:
    return SymIdeal(len(exps), tuple(int(e) for e in exps))


def sym_ring(k: int) -> SymIdeal:
    return SymIdeal(k, (0,) * k)


def sym_ideal_sum(a: SymIdeal, b: SymIdeal) -> SymIdeal:
    if a.is_bottom:
        return b
    if b.is_bottom:
        return a
    return SymIdeal(a.k, tuple(min(x, y) for x, y in zip(a.exps, b.exps)))


def sym_ideal_product(a: SymIdeal, b: SymIdeal) -> SymIdeal:
    if a.is_bottom or b.is_bottom:
        return sym_bottom(a.k)
    return SymIdeal(a.k, tuple(x + y for x, y in zip(a.exps, b.exps)))


def sym_ideal_radical(a: SymIdeal) -> SymIdeal:
    if a.is_bottom:
        return a
    return SymIdeal(a.k, tuple(min(e, 1) for e in a.exps))


def _member_key(m: SymIdeal) -> tuple:
    return (0,) if m.is_bottom else (1,) + m.exps


@dataclass(frozen=True)
class SymGenerator:
    """A finite set of symbolic ideals whose componentwise minimum is zero."""

    k: int
    members: tuple

    def __post_init__(self):
        keys = [_member_key(m) for m in self.members]
        if keys != sorted(set(keys)) or not self.members:
            raise ValidationError("members must be sorted and duplicate-free")
        for m in self.members:
            if m.k != self.k:
                raise ValidationError("member arity mismatch")
        if not _members_generate(self.k, self.members):
            raise ValidationError("symbolic ideals do not sum to the whole ring")

    def __iter__(self):
        return iter(self.members)

    def __len__(self) -> int:
        return len(self.members)

    def non_bottom(self) -> tuple:
        return tuple(m for m in self.members if not m.is_bottom)

    def sort_key(self) -> tuple:
        return (len(self.members),) + tuple(_member_key(m) for m in self.members)

    def __repr__(self) -> str:
        parts = ["bottom" if m.is_bottom else str(m.exps) for m in self.members]
        return f"SymGenerator({', '.join(parts)})"


def _members_generate(k: int, members: Iterable[SymIdeal]) -> bool:
    vecs = [m.exps for m in members if not m.is_bottom]
    if not vecs:
        return False
    return all(min(v[i] for v in vecs) == 0 for i in range(k))


def make_sym_generator(k: int, members: Iterable[SymIdeal]) -> SymGenerator:
    unique = sorted({_member_key(m): m for m in members}.values(), key=_member_key)
    return SymGenerator(k, tuple(unique))


def sym_is_generator(k: int, members: Iterable[SymIdeal]) -> bool:
    members = list(members)
    for m in members:
        if m.k != k:
            raise ValidationError("member arity mismatch")
    return _members_generate(k, members)


def sym_refines(a: SymGenerator, b: SymGenerator) -> bool:
    return all(any(m.issubset(n) for n in b.members) for m in a.members)


def sym_product(a: SymGenerator, b: SymGenerator) -> SymGenerator:
    if a.k != b.k:
        raise ValidationError("generator arity mismatch")
    return make_sym_generator(
        a.k, (sym_ideal_product(m, n) for m in a.members for n in b.members)
    )


def sym_radical(a: SymGenerator) -> SymGenerator:
    return make_sym_generator(a.k, (sym_ideal_radical(m) for m in a.members))


def sym_normalize(a: SymGenerator) -> SymGenerator:
    kept = [
        m
        for m in a.members
        if not any(m is not n and m != n and m.issubset(n) for n in a.members)
    ]
    return make_sym_generator(a.k, kept)


def sym_pullback(perm: Sequence[int], a: SymGenerator) -> SymGenerator:
    return make_sym_generator(a.k, (_transport(m, tuple(perm)) for m in a.members))


def _transport(m: SymIdeal, perm: tuple) -> SymIdeal:
    if m.is_bottom:
        return m
    return SymIdeal(m.k, tuple(m.exps[perm[i]] for i in range(m.k)))


def _perm_order(perm: tuple) -> int:
    order = 1
    seen = [False] * len(perm)
    for start in range(len(perm)):
        if seen[start]:
            continue
        length, node = 0, start
        while not seen[node]:
            seen[node] = True
            node = perm[node]
            length += 1
        order = math.lcm(order, length)
    return order


def _inverse_perm(perm: tuple) -> tuple:
    inv = [0] * len(perm)
    for i, p in enumerate(perm):
        inv[p] = i
    return tuple(inv)


def sym_primes(k: int) -> tuple:
    """The zero ideal plus the k maximal ideals (unit exponent vectors)."""
    if k < 1:
        raise DomainError("k must be at least 1")
    units = []
    for i in range(k):
        e = [0] * k
        e[i] = 1
        units.append(sym_ideal(e))
    return (sym_bottom(k), *units)


def sym_maximals(k: int) -> tuple:
    return sym_primes(k)[1:]


def sym_complementary_generator(k: int) -> SymGenerator:
    """The K_i family: all-ones off a single zero coordinate."""
    members = []
    for i in range(k):
        v = [1] * k
        v[i] = 0
        members.append(sym_ideal(v))
    return make_sym_generator(k, members)


def sym_minimal_counter(candidate: SymGenerator) -> SymGenerator:
    """A generator the candidate cannot refine: pure powers above its exponents."""
    k = candidate.k
    if k < 2:
        raise DomainError("no counter-generator exists for k = 1")
    m = max((max(v.exps) for v in candidate.non_bottom()), default=0)
    members = []
    for i in range(k):
        v = [0] * k
        v[i] = m + 1
        members.append(sym_ideal(v))
    counter = make_sym_generator(k, members)
    if sym_refines(candidate, counter):
        raise InvariantViolation("counter-generator construction failed")
    return counter


def sym_minimal_generator_exists(k: int) -> Verdict:
    """Prec-minimal generator existence: proved for k = 1, refuted for k >= 2."""
    if k < 1:
        raise DomainError("k must be at least 1")
    if k == 1:
        witness = make_sym_generator(1, [sym_ring(1)])
        return Verdict(
            PROVED,
            witness=witness,
            extra={"reason": "every generator contains the whole ring when k = 1"},
        )
    example = make_sym_generator(k, sym_maximals(k))
    counter = sym_minimal_counter(example)
    return Verdict(
        REFUTED,
        refuter=counter,
        extra={
            "certificate": "for any candidate with maximal exponent m, the pure powers "
            "m+1 at a single coordinate form a generator it cannot refine",
            "example_candidate": example,
            "example_counter": counter,
        },
    )


def sym_identity_expansivity_criterion(gen: SymGenerator) -> bool:
    """Derived test: every non-bottom member misses at most one coordinate.

    Validated against sym_bounded_oracle; see the acceptance suite.
    """
    if not _members_generate(gen.k, gen.members):
        raise DomainError("input is not a generator")
    return all(len(m.zero_coords()) <= 1 for m in gen.non_bottom())


# ---------------------------------------------------------------------------
# bounded oracle


@lru_cache(maxsize=None)
def _grid(k: int, bound: int) -> tuple:
    """All exponent vectors with entries <= bound, lexicographically ordered."""
    return tuple(iter_product(range(bound + 1), repeat=k))


@lru_cache(maxsize=None)
def _adversary_vectors(k: int, bound: int) -> tuple:
    """Member vectors of every antichain generator with entries <= bound.

    Canonical order: by member count, then lexicographically on the sorted
    member tuples.  Enumeration walks an include/exclude tree over grid
    points with incomparability masks, one leaf per antichain.
    """
    grid = _grid(k, bound)
    n = len(grid)
    incomp = []
    for i, v in enumerate(grid):
        mask = 0
        for j, w in enumerate(grid):
            if j > i and not all(a <= b for a, b in zip(v, w)) and not all(
                a >= b for a, b in zip(v, w)
            ):
                mask |= 1 << j
        incomp.append(mask)
    found = []

    def rec(allowed: int, chosen: tuple, mins: tuple) -> None:
        if not allowed:
            if chosen and all(m == 0 for m in mins):
                found.append(chosen)
            return
        i = (allowed & -allowed).bit_length() - 1
        bit = 1 << i
        rec(allowed & incomp[i], chosen + (grid[i],), tuple(map(min, mins, grid[i])))
        rec(allowed & ~bit, chosen, mins)

    rec((1 << n) - 1, (), (bound + 1,) * k)
    return tuple(sorted(found, key=lambda vs: (len(vs), vs)))


def _adversary_generator(k: int, vectors: tuple) -> SymGenerator:
    return make_sym_generator(k, [sym_ideal(v) for v in vectors])


@lru_cache(maxsize=None)
def _coverage_table(k: int, bound: int) -> np.ndarray:
    """covers[g, j]: a window member clamping to grid point g refines into adversary j."""
    grid = _grid(k, bound)
    adversaries = _adversary_vectors(k, bound)
    member_matrix = np.zeros((len(adversaries), len(grid)), dtype=bool)
    index = {v: i for i, v in enumerate(grid)}
    for j, vectors in enumerate(adversaries):
        for v in vectors:
            member_matrix[j, index[v]] = True
    covers = np.zeros((len(grid), len(adversaries)), dtype=bool)
    for gi, g in enumerate(grid):
        dominated = [index[w] for w in grid if all(a >= b for a, b in zip(g, w))]
        covers[gi] = member_matrix[:, dominated].any(axis=1)
    return covers


def _clamp(v: tuple, bound: int) -> tuple:
    return tuple(min(e, bound) for e in v)


def _sat_products(window: set, factors: list, bound: int) -> set:
    out = set()
    for w in window:
        for f in factors:
            out.add(tuple(min(a + b, bound) for a, b in zip(w, f)))
    return _minimal_vectors(out)


def _minimal_vectors(vectors: set) -> set:
    return {
        v
        for v in vectors
        if not any(w != v and all(a <= b for a, b in zip(w, v)) for w in vectors)
    }


def _escape_candidates(
    k: int, phase_members: list, phase_members_neg: Optional[list]
) -> list:
    """Zero-coordinate sets Z (|Z| >= 2) escapable at every window phase."""
    out = []
    phases = [(r, members) for r, members in enumerate(phase_members)]
    if phase_members_neg is not None:
        phases += [(-r, members) for r, members in enumerate(phase_members_neg) if r > 0]
    for size in range(2, k + 1):
        for coords in combinations(range(k), size):
            z = frozenset(coords)
            choices = {}
            for r, members in phases:
                pick = next((m for m in members if z <= m.zero_coords()), None)
                if pick is None:
                    choices = None
                    break
                choices[r] = pick
            if choices is not None:
                out.append((z, choices))
    return out


def sym_bounded_oracle(
    gen: SymGenerator,
    perm: Optional[Sequence[int]] = None,
    positive: bool = True,
    n_max: int = 12,
    adversary_exponent_bound: int = 3,
) -> Verdict:
    """Decide expansivity of a coordinate permutation against bounded adversaries.

    Refutations carry an escape-direction certificate and are exact; proved
    results hold for every adversary with entries inside the bound, and are
    additionally exact in N when the saturated window sequence cycled.
    """
    if n_max < 0 or adversary_exponent_bound < 1:
        raise DomainError("oracle bounds must be positive")
    k = gen.k
    if not _members_generate(k, gen.members):
        raise DomainError("input is not a generator")
    perm = tuple(range(k)) if perm is None else tuple(perm)
    if sorted(perm) != list(range(k)):
        raise ValidationError("perm must be a coordinate permutation")
    bound = adversary_exponent_bound
    d = _perm_order(perm)
    inv = _inverse_perm(perm)

    base = list(gen.non_bottom())
    phase_members = []
    current = base
    for _ in range(d):
        phase_members.append(current)
        current = [_transport(m, perm) for m in current]
    phase_members_neg = None
    if not positive:
        phase_members_neg = []
        current = base
        for _ in range(d):
            phase_members_neg.append(current)
            current = [_transport(m, inv) for m in current]

    adversaries = _adversary_vectors(k, bound)
    covers = _coverage_table(k, bound)
    grid_index = {v: i for i, v in enumerate(_grid(k, bound))}

    # Escape-direction certificates refute before any window search: products
    # drawn from members vanishing on Z never dominate an adversary member
    # unless that member vanishes on Z too.
    escapes = _escape_candidates(k, phase_members, phase_members_neg)
    refutable = np.zeros(len(adversaries), dtype=bool)
    escape_for: dict[int, tuple] = {}
    for z, choices in escapes:
        safe = np.fromiter(
            (
                any(all(v[c] == 0 for c in z) for v in vectors)
                for vectors in adversaries
            ),
            dtype=bool,
            count=len(adversaries),
        )
        hit = ~safe & ~refutable
        for j in np.nonzero(hit)[0]:
            escape_for[int(j)] = (z, choices)
        refutable |= ~safe
    if refutable.any():
        j = int(np.nonzero(refutable)[0][0])
        z, choices = escape_for[j]
        return Verdict(
            REFUTED,
            refuter=_adversary_generator(k, adversaries[j]),
            extra={
                "escape": {
                    "zero_coords": sorted(z),
                    "phase_members": {
                        int(r): (m.exps if not m.is_bottom else None)
                        for r, m in choices.items()
                    },
                },
                "adversary_count": len(adversaries),
                "bounds": {"n_max": n_max, "adversary_exponent_bound": bound},
            },
        )

    phase_clamped = [[_clamp(m.exps, bound) for m in ms] for ms in phase_members]
    phase_clamped_neg = (
        [[_clamp(m.exps, bound) for m in ms] for ms in phase_members_neg]
        if phase_members_neg is not None
        else None
    )

    window = _minimal_vectors({_clamp(m.exps, bound) for m in base})
    least_n = np.full(len(adversaries), -1, dtype=np.int64)
    uncovered = np.arange(len(adversaries))
    seen_states: dict[tuple, int] = {}
    cycled_at = None
    n = 0
    while True:
        ok = np.ones(len(uncovered), dtype=bool)
        for g in window:
            ok &= covers[grid_index[g]][uncovered]
        least_n[uncovered[ok]] = n
        uncovered = uncovered[~ok]
        if uncovered.size == 0:
            break
        state = (frozenset(window), (n + 1) % d)
        if state in seen_states:
            cycled_at = (seen_states[state], n)
            break
        seen_states[state] = n
        if n >= n_max:
            break
        n += 1
        window = _sat_products(window, phase_clamped[n % d], bound)
        if phase_clamped_neg is not None:
            window = _sat_products(window, phase_clamped_neg[n % d], bound)

    table = {adversaries[i]: int(least_n[i]) for i in range(len(adversaries)) if least_n[i] >= 0}
    extra = {
        "adversary_count": len(adversaries),
        "bounds": {"n_max": n_max, "adversary_exponent_bound": bound},
        "max_window": int(least_n.max()) if len(table) == len(adversaries) else None,
    }
    if uncovered.size:
        # Uncovered without an escape certificate: cannot refute exactly.
        extra["uncovered_count"] = int(uncovered.size)
        return Verdict(UNKNOWN_AT_BOUND, n_table=_maybe_table(table), extra=extra)
    if cycled_at is not None:
        extra["cycle"] = {"preperiod": cycled_at[0], "period": cycled_at[1] - cycled_at[0]}
    elif int(least_n.max()) >= n_max:
        # Refinements found only at the window bound; flag per the contract.
        return Verdict(UNKNOWN_AT_BOUND, n_table=_maybe_table(table), extra=extra)
    extra["proved_on_grid"] = True
    return Verdict(PROVED, witness=gen, n_table=_maybe_table(table), extra=extra)


_N_TABLE_LIMIT = 1000


def _maybe_table(table: dict) -> Optional[dict]:
    return table if len(table) <= _N_TABLE_LIMIT else None


def sym_spec(k: int):
    """Spectrum of the symbolic ring: bottom point under k closed points."""
    from .topology import FiniteSpace

    points = k + 1
    leq = [[False] * points for _ in range(points)]
    for i in range(points):
        leq[i][i] = True
        leq[0][i] = True
    return FiniteSpace(tuple(tuple(row) for row in leq))
