"""Brute-force reference solvers.

Deliberately naive: these depend only on ``VcspInstance.evaluate`` and serve
as ground truth for every other solver in the package.
"""

from __future__ import annotations

import itertools
import math
from typing import AbstractSet, Sequence

from .costs import Cost, INFINITY
from .errors import TooLargeError
from .instance import Assignment, VcspInstance

DEFAULT_BUDGET = 10**6


def _check_budget(size: int, budget: int) -> None:
    if size > budget:
        raise TooLargeError(f"assignment space of size {size} exceeds budget {budget}")


def brute_force_solve(
    instance: VcspInstance, budget: int = DEFAULT_BUDGET
) -> tuple[Assignment, Cost]:
    """Exhaustive minimum of evaluate; ties go to the lexicographically first."""
    _check_budget(instance.assignment_count(), budget)
    best_x: Assignment | None = None
    best_c = INFINITY
    for x in itertools.product(*(range(d) for d in instance.domains)):
        c = instance.evaluate(x)
        if best_x is None or c < best_c:
            best_x, best_c = x, c
    assert best_x is not None
    return best_x, best_c


def enumerate_feasible(
    instance: VcspInstance, budget: int = DEFAULT_BUDGET
) -> list[Assignment]:
    """All assignments of finite cost, in lexicographic order."""
    _check_budget(instance.assignment_count(), budget)
    return [
        x
        for x in itertools.product(*(range(d) for d in instance.domains))
        if instance.evaluate(x).is_finite
    ]


def conservative_minimize(
    instance: VcspInstance,
    allowed: Sequence[AbstractSet[int]],
    budget: int = DEFAULT_BUDGET,
) -> tuple[Assignment, Cost]:
    """Brute-force minimizer over a per-variable value restriction.

    This is the reference implementation of the conservative-solver callback
    contract used by the dead-end decomposition solver.
    """
    if len(allowed) != instance.n:
        raise ValueError("restriction must cover every variable")
    pools = [sorted(vals) for vals in allowed]
    if any(not p for p in pools):
        raise ValueError("restriction leaves a variable without values")
    _check_budget(math.prod(len(p) for p in pools), budget)
    best_x: Assignment | None = None
    best_c = INFINITY
    for x in itertools.product(*pools):
        c = instance.evaluate(x)
        if best_x is None or c < best_c:
            best_x, best_c = x, c
    assert best_x is not None
    return best_x, best_c


def dead_end_solutions(
    crisp: VcspInstance, j: int, k: int, c: int, d: int, budget: int = DEFAULT_BUDGET
) -> list[Assignment]:
    """Solutions of the derived prefix instance for a forbidden pair.

    For a binary entry ``c_jk(c, d) = inf`` with ``j < k``, enumerates the
    assignments to variables ``0 .. k`` that fix ``v_j = c`` and ``v_k = d``,
    satisfy every binary constraint among ``0 .. k-1``, and satisfy the
    constraints into ``v_k`` from variables before ``j`` (constraints from
    ``j .. k-1`` into ``v_k`` are discarded).  This is the reference
    implementation of the dead-end enumerator callback contract.
    """
    if not (0 <= j < k < crisp.n):
        raise ValueError("need variable indices j < k inside the instance")
    pools = [
        [c] if i == j else [d] if i == k else range(crisp.domains[i])
        for i in range(k + 1)
    ]
    _check_budget(math.prod(len(p) if isinstance(p, list) else len(p) for p in pools), budget)
    out: list[Assignment] = []
    for prefix in itertools.product(*pools):
        ok = True
        for x in range(k):
            for y in range(x + 1, k):
                if crisp.binary_cost(x, y, prefix[x], prefix[y]).is_infinite:
                    ok = False
                    break
            if not ok:
                break
        if ok:
            for i in range(j):
                if crisp.binary_cost(i, k, prefix[i], d).is_infinite:
                    ok = False
                    break
        if ok:
            out.append(prefix)
    return out
