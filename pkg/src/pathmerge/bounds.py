"""Closed-form, recursive, and table-driven bounds on minimum merging counts.

Two variants: distinct sources/sinks ("M") and one shared source ("Mstar").
Known exact values override formula bounds in both directions. The shared-source
variant first reduces its cut tuple: 1-entries drop out entirely, and the
largest cut caps at the sum of the others; neither reduction applies to the
distinct-terminal variant, whose pair function is superlinear instead.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import lru_cache

from .errors import InvalidCut

M = "M"
MSTAR = "Mstar"


@dataclass(frozen=True)
class BoundReport:
    variant: str
    cuts: tuple[int, ...]
    lower: int
    upper: int
    exact: int | None
    provenance: tuple[str, ...]


def _check(variant: str, cuts) -> tuple[int, ...]:
    if variant not in (M, MSTAR):
        raise InvalidCut(f"unknown variant {variant!r}")
    cuts = tuple(cuts)
    if not cuts:
        raise InvalidCut("cut tuple is empty")
    if any((not isinstance(c, int)) or c < 1 for c in cuts):
        raise InvalidCut(f"cuts must be positive integers: {cuts}")
    return tuple(sorted(cuts))


def reduce_star_cuts(cuts: tuple[int, ...]) -> tuple[int, ...]:
    """Shared-source reductions: drop 1-cuts, cap the largest at the sum of
    the rest; iterate to a fixpoint."""
    cur = tuple(sorted(cuts))
    while True:
        nxt = tuple(c for c in cur if c != 1)
        if len(nxt) >= 2:
            rest = sum(nxt[:-1])
            if nxt[-1] > rest:
                nxt = tuple(sorted(nxt[:-1] + (rest,)))
        if nxt == cur:
            return cur
        cur = nxt


def exact_value(variant: str, cuts) -> int | None:
    """Known exact value for the cut tuple, None when the table has nothing."""
    cuts = _check(variant, cuts)
    if variant == M:
        if len(cuts) == 1:
            return 0
        if len(cuts) == 2:
            a, b = cuts
            if a == 1:
                return b
            if (a, b) == (2, 2):
                return 5
        return None
    reduced = reduce_star_cuts(cuts)
    if len(reduced) <= 1:
        return 0
    if all(c == 2 for c in reduced):
        return len(reduced) - 1
    if reduced == (3, 3):
        return 5
    return None


@lru_cache(maxsize=None)
def _upper_m(a: int, b: int) -> int:
    a, b = min(a, b), max(a, b)
    exact = exact_value(M, (a, b))
    if exact is not None:
        return exact
    cands = [a * b * (a + b) // 2]
    if a >= 2:
        cands.append(prop8_u(a, b) + prop8_v(a, b) + a - 2)
        cands.append(a * _w(a, a) + prop8_v(a, b) + a - 2)
    return min(cands)


def prop8_u(m: int, n: int) -> int:
    """U(m, n) of the two-pair recursion (requires 2 <= m <= n)."""
    if not 2 <= m <= n:
        raise InvalidCut("recursion needs 2 <= m <= n")
    total = sum(_upper_m(j, m - 1) + 1 + _upper_m(m - j, n) for j in range(1, m))
    return total + _upper_m(m, m - 1) + 1


def prop8_v(m: int, n: int) -> int:
    """V(m, n) of the two-pair recursion (requires 2 <= m <= n)."""
    if not 2 <= m <= n:
        raise InvalidCut("recursion needs 2 <= m <= n")
    total = _upper_m(m, n - 1) if n - 1 >= 1 else 0
    total += sum(_upper_m(j, n) + 1 + _upper_m(m - j, n) for j in range(1, m))
    return total - _upper_m(1, n)


def _w(i: int, m: int) -> int:
    """w_i = sum_{j<=i} (M(j, m-1) + 1); the alternative to U."""
    return sum(_upper_m(j, m - 1) + 1 for j in range(1, i + 1))


@lru_cache(maxsize=None)
def _upper_mstar_pair(a: int, b: int) -> int:
    a, b = min(a, b), max(a, b)
    reduced = reduce_star_cuts((a, b))
    if len(reduced) <= 1:
        return 0
    ra, rb = reduced
    exact = exact_value(MSTAR, (ra, rb))
    if exact is not None:
        return exact
    cands = [_upper_m(ra, rb)]
    if ra == rb and ra >= 2:
        cands.append(_upper_m(ra - 1, ra - 1))
    return min(cands)


def upper_bound_pair(variant: str, c1: int, c2: int) -> int:
    cuts = _check(variant, (c1, c2))
    if variant == M:
        return _upper_m(*cuts)
    return _upper_mstar_pair(*cuts)


def upper_bound(variant: str, cuts) -> int:
    """Sum-over-pairs upper bound, with exact values taking precedence."""
    cuts = _check(variant, cuts)
    exact = exact_value(variant, cuts)
    if exact is not None:
        return exact
    if variant == MSTAR:
        cuts = reduce_star_cuts(cuts)
        if len(cuts) <= 1:
            return 0
    pair = upper_bound_pair
    return sum(pair(variant, cuts[i], cuts[j])
               for i in range(len(cuts)) for j in range(i + 1, len(cuts)))


@lru_cache(maxsize=None)
def _lower_m_pair(a: int, b: int) -> int:
    a, b = min(a, b), max(a, b)
    exact = exact_value(M, (a, b))
    best = exact if exact is not None else 0
    for a0 in range(1, a // 2 + 1):
        best = max(best, _lower_m_pair(a0, b) + _lower_m_pair(a - a0, b))
    for b0 in range(1, b // 2 + 1):
        best = max(best, _lower_m_pair(a, b0) + _lower_m_pair(a, b - b0))
    return best


def lower_bound(variant: str, cuts) -> int:
    """Best split-composition lower bound (distinct terminals); the exact
    table only, for the shared-source variant (its compositions do not
    transfer: the variant is not superlinear)."""
    cuts = _check(variant, cuts)
    if variant == MSTAR:
        exact = exact_value(MSTAR, cuts)
        return exact if exact is not None else 0
    if len(cuts) == 1:
        return 0
    if len(cuts) == 2:
        return _lower_m_pair(*cuts)
    n = len(cuts)
    best = 0
    for mask in range(1, 2 ** (n - 1)):
        left = [cuts[i] for i in range(n) if mask >> i & 1]
        right = [cuts[i] for i in range(n) if not mask >> i & 1]
        if not left or not right:
            continue
        best = max(
            best,
            sum(_lower_m_pair(ci, cj) for ci in left for cj in right),
        )
    return best


def monotone_check(variant: str, cuts_small, cuts_big) -> bool:
    """Dominance precondition of the monotonicity statement: the smaller
    sorted tuple aligns under the tail of the bigger one."""
    small = _check(variant, cuts_small)
    big = _check(variant, cuts_big)
    n, m = len(small), len(big)
    if n > m:
        return False
    return all(small[i] <= big[m - n + i] for i in range(n))


def bound_report(variant: str, cuts) -> BoundReport:
    cuts = _check(variant, cuts)
    exact = exact_value(variant, cuts)
    lower = lower_bound(variant, cuts)
    upper = upper_bound(variant, cuts)
    provenance: list[str] = []
    if exact is not None:
        provenance.append("exact-table")
    if variant == MSTAR:
        reduced = reduce_star_cuts(cuts)
        if reduced != cuts:
            provenance.append(f"star-reduction:{','.join(map(str, reduced))}")
        provenance.append("pair-sum" if exact is None else "exact")
    else:
        if exact is None:
            provenance.append("pair-sum")
        provenance.append("split-composition-lower")
    return BoundReport(variant, cuts, lower, upper, exact, tuple(provenance))


def sweep_tuples(max_entry: int = 4, max_len: int = 4):
    """All sorted cut tuples with entries <= max_entry, length <= max_len."""
    for n in range(1, max_len + 1):
        for tup in itertools.combinations_with_replacement(
            range(1, max_entry + 1), n
        ):
            yield tup
