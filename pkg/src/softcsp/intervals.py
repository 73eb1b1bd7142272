"""Lexicographic assignment intervals and dead-end driven solving.

An interval of assignments decomposes into a short list of boxes, each a
per-variable value restriction, so a solver that only understands domain
restrictions can minimize over it.  The dead-end solver turns the forbidden
pairs of a crisp instance into non-solution intervals, complements them, and
minimizes a finite-valued objective over the remaining boxes.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Sequence

from .costs import Cost, INFINITY
from .errors import InvalidAssignmentError, OracleInconsistencyError
from .instance import Assignment, VcspInstance

Descriptor = tuple[frozenset[int], ...]
ConservativeSolver = Callable[[VcspInstance, Descriptor], tuple[Assignment, Cost]]
DeadEndEnumerator = Callable[[VcspInstance, int, int, int, int], Sequence[Assignment]]


@dataclass(frozen=True)
class LexInterval:
    """All assignments between ``lower`` and ``upper`` inclusive.

    The order is lexicographic by variable index; within each variable the
    order is the supplied one (natural 0..d-1 when ``orderings`` is None).
    """

    domains: tuple[int, ...]
    lower: Assignment
    upper: Assignment
    orderings: tuple[tuple[int, ...], ...] | None = None

    def __post_init__(self):
        n = len(self.domains)
        if len(self.lower) != n or len(self.upper) != n:
            raise InvalidAssignmentError("interval endpoints must cover every variable")
        ords = self.orderings
        if ords is not None:
            if len(ords) != n or any(
                sorted(o) != list(range(d)) for o, d in zip(ords, self.domains)
            ):
                raise InvalidAssignmentError("orderings must permute each domain")
        pos = self._positions()
        for i in range(n):
            if not (0 <= self.lower[i] < self.domains[i]):
                raise InvalidAssignmentError(f"lower endpoint out of range at variable {i}")
            if not (0 <= self.upper[i] < self.domains[i]):
                raise InvalidAssignmentError(f"upper endpoint out of range at variable {i}")
        lo = tuple(pos[i][self.lower[i]] for i in range(n))
        hi = tuple(pos[i][self.upper[i]] for i in range(n))
        if lo > hi:
            raise InvalidAssignmentError("interval lower endpoint exceeds upper endpoint")

    def _positions(self) -> list[dict[int, int]]:
        if self.orderings is None:
            return [{v: v for v in range(d)} for d in self.domains]
        return [{v: p for p, v in enumerate(o)} for o in self.orderings]


def decompose_interval(iv: LexInterval) -> list[Descriptor]:
    """Split an interval into disjoint per-variable value-subset boxes.

    The boxes follow the prefix families of the lexicographic order: walks
    down the lower boundary, the middle band at the first disagreeing
    position, walks down the upper boundary, and the two endpoints
    themselves.  Their disjoint union is exactly the interval.
    """
    n = len(iv.domains)
    if n == 0:
        return [()]
    pos = iv._positions()
    order = iv.orderings or tuple(tuple(range(d)) for d in iv.domains)
    full = [frozenset(range(d)) for d in iv.domains]
    lower, upper = iv.lower, iv.upper

    k = 0
    while k < n and lower[k] == upper[k]:
        k += 1

    out: list[Descriptor] = []

    def box(prefix: Assignment, at: int, values: frozenset[int]) -> Descriptor | None:
        if not values:
            return None
        parts = [frozenset({prefix[i]}) for i in range(at)]
        parts.append(values)
        parts.extend(full[at + 1 :])
        return tuple(parts)

    out.append(tuple(frozenset({v}) for v in lower))
    for m in range(n - 1, k, -1):
        above = frozenset(order[m][pos[m][lower[m]] + 1 :])
        d = box(lower, m, above)
        if d is not None:
            out.append(d)
    if k < n:
        between = frozenset(order[k][pos[k][lower[k]] + 1 : pos[k][upper[k]]])
        d = box(lower, k, between)
        if d is not None:
            out.append(d)
        for m in range(k + 1, n):
            below = frozenset(order[m][: pos[m][upper[m]]])
            d = box(upper, m, below)
            if d is not None:
                out.append(d)
        out.append(tuple(frozenset({v}) for v in upper))
    return out


# -- rank arithmetic (natural orderings) ---------------------------------------


def _rank(domains: Sequence[int], x: Sequence[int]) -> int:
    r = 0
    for d, v in zip(domains, x):
        r = r * d + v
    return r


def _unrank(domains: Sequence[int], r: int) -> Assignment:
    out = []
    for d in reversed(domains):
        out.append(r % d)
        r //= d
    return tuple(reversed(out))


def _merge_ranges(ranges: list[tuple[int, int]]) -> list[tuple[int, int]]:
    merged: list[tuple[int, int]] = []
    for lo, hi in sorted(ranges):
        if merged and lo <= merged[-1][1] + 1:
            merged[-1] = (merged[-1][0], max(merged[-1][1], hi))
        else:
            merged.append((lo, hi))
    return merged


def solve_via_dead_ends(
    crisp: VcspInstance,
    finite_part: VcspInstance,
    conservative_solver: ConservativeSolver,
    dead_end_enumerator: DeadEndEnumerator,
) -> tuple[Assignment | None, Cost]:
    """Minimize ``finite_part`` over the solutions of the crisp instance.

    Dead-end prefixes (from the enumerator callback, one call per infinite
    binary entry) become intervals of non-solutions; their complement is
    decomposed into boxes, each handed to the conservative solver.  With the
    brute-force callbacks from :mod:`softcsp.oracle` the result equals brute
    force on the combined instance.  Returns ``(None, inf)`` when the crisp
    instance has no solution.
    """
    if crisp.domains != finite_part.domains:
        raise ValueError("crisp and finite parts must share variables and domains")
    n = crisp.n
    if n == 0:
        return (), finite_part.evaluate(())
    domains = crisp.domains
    total = math.prod(domains)

    allowed = [
        frozenset(a for a in range(d) if crisp.unary_cost(i, a).is_finite)
        for i, d in enumerate(domains)
    ]
    if any(not vals for vals in allowed):
        return None, INFINITY

    dead: list[tuple[int, int]] = []
    for (j, k, c, d), cost in crisp.binary_items():
        if not cost.is_infinite:
            continue
        suffix = math.prod(domains[k + 1 :])
        for prefix in dead_end_enumerator(crisp, j, k, c, d):
            if len(prefix) != k + 1 or prefix[j] != c or prefix[k] != d:
                raise OracleInconsistencyError(
                    f"enumerator returned malformed prefix {prefix} for ({j},{k},{c},{d})"
                )
            base = _rank(domains[: k + 1], prefix) * suffix
            dead.append((base, base + suffix - 1))

    solution_ranges: list[tuple[int, int]] = []
    cursor = 0
    for lo, hi in _merge_ranges(dead):
        if cursor < lo:
            solution_ranges.append((cursor, lo - 1))
        cursor = max(cursor, hi + 1)
    if cursor <= total - 1:
        solution_ranges.append((cursor, total - 1))

    best_x: Assignment | None = None
    best_c = INFINITY
    for lo, hi in solution_ranges:
        iv = LexInterval(domains, _unrank(domains, lo), _unrank(domains, hi))
        for desc in decompose_interval(iv):
            trimmed = tuple(vals & allowed[i] for i, vals in enumerate(desc))
            if any(not vals for vals in trimmed):
                continue
            x, cost = conservative_solver(finite_part, trimmed)
            if crisp.evaluate(x).is_infinite:
                raise OracleInconsistencyError(
                    f"conservative solver returned {x}, which violates the crisp part"
                )
            if best_x is None or cost < best_c:
                best_x, best_c = x, cost
    return best_x, best_c
