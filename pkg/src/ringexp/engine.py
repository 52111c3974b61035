"""Expansivity deciders for automorphisms of finite rings.

The central loop iterates the normalized window products
G_n = Pi over the index window of alpha^{-i}(I), detects the first repeat of
the pair (normalized set, window phase), and decides refinement coverage of
every antichain generator.  Once a state repeats the sequence replays exactly,
so the set of adversaries ever refined is final: every verdict is exact.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterator, Optional

import numpy as np

from .config import DEFAULT_BOUNDS, Bounds
from .errors import DomainError, InvariantViolation, ValidationError
from .generators import (
    GeneratorSet,
    antichain_generators,
    gen_product,
    make_generator,
    normalize_antichain,
    pullback,
    refinement_witness,
    refines,
)
from .ideals import (
    Ideal,
    enumerate_ideals,
    ideal_preimage,
    ideal_product,
    is_local,
    maximal_ideals,
    principal_ideal,
    primitive_orthogonal_idempotents,
    unit_ideal,
)
from .rings import FiniteRing, RingAutomorphism, identity_automorphism
from .verdicts import PROVED, REFUTED, Verdict


@lru_cache(maxsize=None)
def _ideal_action_order(alpha: RingAutomorphism, bounds: Bounds = DEFAULT_BOUNDS) -> int:
    """Order of the permutation alpha induces on the ideal lattice."""
    ideals = enumerate_ideals(alpha.host, bounds)
    position = {ideal.mask: k for k, ideal in enumerate(ideals)}
    perm = [position[ideal_preimage(alpha, ideal).mask] for ideal in ideals]
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


def _window_products(
    alpha: RingAutomorphism, gen: GeneratorSet, positive: bool
) -> Iterator[GeneratorSet]:
    """Yield normalized G_0, G_1, ...; incremental products over the window."""
    back_factor = gen  # alpha^{-n}(I), advanced by pulling back through alpha
    fwd_factor = gen  # alpha^{+n}(I), advanced through alpha^{-1}
    alpha_inv = alpha.inverse()
    current = normalize_antichain(gen)
    yield current
    while True:
        back_factor = pullback(alpha, back_factor)
        current = gen_product(current, back_factor)
        if not positive:
            fwd_factor = pullback(alpha_inv, fwd_factor)
            current = gen_product(current, fwd_factor)
        current = normalize_antichain(current)
        yield current


def product_sequence(
    alpha: RingAutomorphism, gen: GeneratorSet, positive: bool, n: int
) -> GeneratorSet:
    """Normalized window product G_n for the one- or two-sided window."""
    if n < 0:
        raise DomainError("window index must be nonnegative")
    it = _window_products(alpha, gen, positive)
    for _ in range(n):
        next(it)
    return next(it)


def is_expansivity_generator(
    alpha: RingAutomorphism,
    gen: GeneratorSet,
    positive: bool,
    bounds: Bounds = DEFAULT_BOUNDS,
) -> Verdict:
    """Decide whether gen witnesses (positive) expansivity of alpha.

    Exact on finite rings: the normalized window sequence is eventually
    periodic, refinement coverage is monotone, and coverage is frozen from the
    first repeated (set, phase) state on.
    """
    if alpha.host is not gen.host:
        raise ValidationError("automorphism and generator live in different rings")
    ring = alpha.host
    adversaries = antichain_generators(ring, bounds)
    phase_period = _ideal_action_order(alpha, bounds)
    n_table: dict[GeneratorSet, int] = {}
    uncovered = set(adversaries)
    seen_states: dict[tuple, int] = {}
    windows = _window_products(alpha, gen, positive)
    n = 0
    while True:
        window = next(windows)
        state = (window.masks, (n + 1) % phase_period)
        if state in seen_states:
            first = seen_states[state]
            period = n - first
            if uncovered:
                refuter = min(uncovered, key=GeneratorSet.sort_key)
                return Verdict(
                    REFUTED,
                    refuter=refuter,
                    n_table=dict(n_table),
                    cycle_length=period,
                    extra={"preperiod": first, "windows_checked": n},
                )
            raise InvariantViolation("cycle reached with full coverage but no verdict")
        seen_states[state] = n
        for adversary in [j for j in uncovered if refines(window, j)]:
            n_table[adversary] = n
            uncovered.discard(adversary)
        if not uncovered:
            return Verdict(
                PROVED,
                witness=gen,
                n_table=dict(n_table),
                extra={"windows_checked": n},
            )
        n += 1


def _candidates(ring: FiniteRing, bounds: Bounds, prune: bool = True) -> list[GeneratorSet]:
    """Witness candidates; non-local rings never prove with an R-containing set."""
    all_gens = antichain_generators(ring, bounds)
    if not prune or is_local(ring, bounds):
        return list(all_gens)
    unit = unit_ideal(ring)
    return [g for g in all_gens if unit not in g]


def _trivial_verdict(ring: FiniteRing, bounds: Bounds) -> Verdict:
    whole = make_generator(ring, [unit_ideal(ring)])
    table = {adv: 0 for adv in antichain_generators(ring, bounds)}
    return Verdict(PROVED, witness=whole, n_table=table, extra={"degenerate": True})


def _search_witness(
    alpha: RingAutomorphism, positive: bool, bounds: Bounds, prune: bool = True
) -> Verdict:
    ring = alpha.host
    if ring.is_trivial:
        return _trivial_verdict(ring, bounds)
    failures = []
    for candidate in _candidates(ring, bounds, prune):
        verdict = is_expansivity_generator(alpha, candidate, positive, bounds)
        if verdict.proved:
            verdict.extra["mode"] = "positive" if positive else "two_sided"
            return verdict
        failures.append((candidate, verdict.refuter))
    refuter = failures[0][1] if failures else None
    return Verdict(
        REFUTED,
        refuter=refuter,
        extra={
            "mode": "positive" if positive else "two_sided",
            "candidate_refuters": failures,
        },
    )


def is_expansive(alpha: RingAutomorphism, bounds: Bounds = DEFAULT_BOUNDS) -> Verdict:
    return _search_witness(alpha, positive=False, bounds=bounds)


def is_positively_expansive(alpha: RingAutomorphism, bounds: Bounds = DEFAULT_BOUNDS) -> Verdict:
    return _search_witness(alpha, positive=True, bounds=bounds)


def is_prec_minimal_generator(
    ring: FiniteRing, gen: GeneratorSet, bounds: Bounds = DEFAULT_BOUNDS
) -> bool:
    """gen < J for every generator J (antichain representatives suffice)."""
    return all(refines(gen, j) for j in antichain_generators(ring, bounds))


@dataclass(frozen=True)
class LocalDecomposition:
    """Constructive witness that the ring is a finite product of local rings."""

    idempotents: tuple
    factor_ideals: tuple
    generator: GeneratorSet
    factors: tuple
    maximal_count: int


@dataclass(frozen=True)
class NotMinimalEvidence:
    """Failure record for the minimal-generator construction."""

    candidate: GeneratorSet
    counter: GeneratorSet
    detail: str


def _idempotent_factor_ring(ring: FiniteRing, e: int) -> FiniteRing:
    """Re_i as a ring with unity e_i, re-indexed to dense element indices."""
    members = list(principal_ideal(ring, e).indices)
    back = np.zeros(ring.order, dtype=np.int64)
    back[members] = np.arange(len(members))
    sub = np.array(members, dtype=np.int64)
    add = back[ring.add_table[np.ix_(sub, sub)]]
    mul = back[ring.mul_table[np.ix_(sub, sub)]]
    recipe = {"kind": "idempotent_factor", "base": ring.recipe, "idempotent": int(e)}
    return FiniteRing(
        len(members),
        add,
        mul,
        int(back[ring.zero]),
        int(back[e]),
        recipe,
        parents=(ring,),
    )


def strong_minimal_generator(ring: FiniteRing, bounds: Bounds = DEFAULT_BOUNDS):
    """Build and verify the strong minimal generator {Re_1, ..., Re_k}.

    Returns a LocalDecomposition, or NotMinimalEvidence when the candidate
    fails prec-minimality (never the case for finite rings; the branch exists
    for interface parity with the symbolic module).
    """
    if ring.is_trivial:
        whole = make_generator(ring, [unit_ideal(ring)])
        return LocalDecomposition((), (), whole, (), 0)
    es = primitive_orthogonal_idempotents(ring)
    factor_ideals = tuple(principal_ideal(ring, e) for e in es)
    candidate = make_generator(ring, factor_ideals)
    for adversary in antichain_generators(ring, bounds):
        if not refines(candidate, adversary):
            return NotMinimalEvidence(candidate, adversary, "candidate fails to refine")
    for k, ideal in enumerate(factor_ideals):
        if ideal_product(ideal, ideal) != ideal:
            raise InvariantViolation(f"factor ideal {k} is not idempotent")
        for other in factor_ideals[k + 1 :]:
            if not ideal_product(ideal, other).is_zero:
                raise InvariantViolation("factor ideals are not orthogonal")
    factors = tuple(_idempotent_factor_ring(ring, e) for e in es)
    for factor in factors:
        if not is_local(factor, bounds):
            raise InvariantViolation("idempotent factor ring is not local")
    k = len(maximal_ideals(ring, bounds))
    if k != len(es):
        raise InvariantViolation("factor count differs from the maximal-ideal count")
    return LocalDecomposition(tuple(es), factor_ideals, candidate, factors, k)


def build_complementary_generator(
    ring: FiniteRing, bounds: Bounds = DEFAULT_BOUNDS
) -> GeneratorSet:
    """K_i = product of all maximal ideals except the i-th; empty product is R."""
    maxes = maximal_ideals(ring, bounds)
    if not maxes:
        return make_generator(ring, [unit_ideal(ring)])
    members = []
    for i in range(len(maxes)):
        acc = unit_ideal(ring)
        for j, m in enumerate(maxes):
            if j != i:
                acc = ideal_product(acc, m)
        members.append(acc)
    return make_generator(ring, members)


@dataclass(frozen=True)
class DoublingReport:
    """Replay of the doubling argument behind the finite-maximals theorem."""

    base_index: int
    depth: int
    certificates: tuple  # per n: map member mask -> containing member mask


def verify_doubling_lemma(
    alpha: RingAutomorphism,
    gen: GeneratorSet,
    depth: int = 6,
    bounds: Bounds = DEFAULT_BOUNDS,
) -> DoublingReport:
    """Check alpha^{-n}(J^{2^n}) < I_{N+n} for n = 0..depth, J = I_N.

    N is the least index with alpha^{-1}(I_N) < I; gen must be a proved
    positive-expansivity witness for alpha.
    """
    check = is_expansivity_generator(alpha, gen, positive=True, bounds=bounds)
    if not check.proved:
        raise DomainError("doubling lemma requires a proved positive witness")
    windows = []
    it = _window_products(alpha, gen, positive=True)
    base_index = None
    safety = 0
    while base_index is None:
        windows.append(next(it))
        if refines(pullback(alpha, windows[-1]), gen):
            base_index = len(windows) - 1
        safety += 1
        if safety > 4 * (len(enumerate_ideals(alpha.host, bounds)) ** 2 + 4):
            raise InvariantViolation("no window pulls back into the witness")
    while len(windows) <= base_index + depth:
        windows.append(next(it))

    doubled = windows[base_index]  # alpha^{-n}(J^{2^n}), advanced incrementally
    certificates = []
    for n in range(depth + 1):
        witness = refinement_witness(doubled, windows[base_index + n])
        if witness is None:
            raise InvariantViolation(f"doubling refinement fails at step {n}")
        certificates.append(
            tuple(sorted((a.mask, b.mask) for a, b in witness.items()))
        )
        doubled = normalize_antichain(pullback(alpha, gen_product(doubled, doubled)))
    return DoublingReport(base_index, depth, tuple(certificates))


def count_maximals_bound_check(
    gen: GeneratorSet, adversary: GeneratorSet, n: int, bounds: Bounds = DEFAULT_BOUNDS
) -> bool:
    """Given gen^n < adversary, check #maximal ideals <= |gen|."""
    power = gen
    for _ in range(n - 1):
        power = normalize_antichain(gen_product(power, gen))
    if not refines(power, adversary):
        raise DomainError("precondition gen^n < adversary does not hold")
    return len(maximal_ideals(gen.host, bounds)) <= len(gen)


def zero_expansivity(ring: FiniteRing, bounds: Bounds = DEFAULT_BOUNDS) -> Verdict:
    """Existence of a prec-minimal generator, with the constructive witness."""
    result = strong_minimal_generator(ring, bounds)
    if isinstance(result, NotMinimalEvidence):
        return Verdict(REFUTED, refuter=result.counter, extra={"detail": result.detail})
    table = {adv: 0 for adv in antichain_generators(ring, bounds)}
    return Verdict(
        PROVED,
        witness=result.generator,
        n_table=table,
        extra={
            "idempotents": list(result.idempotents),
            "factor_orders": [f.order for f in result.factors],
            "maximal_count": result.maximal_count,
        },
    )
