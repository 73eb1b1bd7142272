"""Functional constraint arcs and minimum root sets.

An arc (i, j) is functional when every value of variable i is compatible
with at most one value of variable j.  Instantiating one variable per source
component of the arc digraph's strongly-connected condensation determines
the rest, and that count is the minimum root-set size.
"""

from __future__ import annotations

from typing import Iterable

import numpy as np
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import connected_components

from .errors import CertificationError
from .instance import VcspInstance


def is_functional_arc(instance: VcspInstance, i: int, j: int) -> bool:
    """True when each value of i has at most one finite-cost partner in j."""
    if i == j:
        return False
    for a in range(instance.domains[i]):
        partners = 0
        for b in range(instance.domains[j]):
            if instance.binary_cost(i, j, a, b).is_finite:
                partners += 1
                if partners > 1:
                    return False
    return True


def discover_functional_arcs(instance: VcspInstance) -> set[tuple[int, int]]:
    """Convenience scan over all ordered pairs with a stored constraint."""
    scopes = {(i, j) for (i, j, _, _) in dict(instance.binary_items())}
    arcs = set()
    for i, j in scopes:
        if is_functional_arc(instance, i, j):
            arcs.add((i, j))
        if is_functional_arc(instance, j, i):
            arcs.add((j, i))
    return arcs


def root_set_size(
    instance: VcspInstance, functional_arcs: Iterable[tuple[int, int]]
) -> tuple[int, tuple[int, ...]]:
    """Minimum root-set size plus one witnessing root set.

    Every supplied arc is re-certified as functional; the answer is the number
    of source components in the strongly-connected condensation of the arc
    digraph, with the smallest variable of each source component as witness.
    """
    arcs = sorted(set(functional_arcs))
    for i, j in arcs:
        if not (0 <= i < instance.n and 0 <= j < instance.n):
            raise CertificationError(f"arc ({i},{j}) is out of range")
        if not is_functional_arc(instance, i, j):
            raise CertificationError(f"arc ({i},{j}) is not functional")
    n = instance.n
    if n == 0:
        return 0, ()
    rows = [i for i, _ in arcs]
    cols = [j for _, j in arcs]
    mat = csr_matrix(
        (np.ones(len(arcs), dtype=np.int8), (rows, cols)), shape=(n, n)
    )
    n_comp, labels = connected_components(mat, directed=True, connection="strong")
    has_incoming = [False] * n_comp
    for i, j in arcs:
        if labels[i] != labels[j]:
            has_incoming[labels[j]] = True
    roots = []
    for comp in range(n_comp):
        if not has_incoming[comp]:
            roots.append(min(v for v in range(n) if labels[v] == comp))
    return len(roots), tuple(sorted(roots))
