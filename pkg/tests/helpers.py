"""Shared oracles and random builders for the test suite.

Everything here is deliberately naive so it stays independent of the code
under test: reference implementations enumerate, the fast paths vectorize.
"""

from __future__ import annotations

import itertools
import random
from fractions import Fraction

from softcsp import (
    Cost,
    INFINITY,
    JwpWitness,
    LexInterval,
    VcspInstance,
)

COST_POOL = (0, 0, 1, 2, 3, Fraction(1, 2), Fraction(3, 2))


def reference_check_jwp(instance: VcspInstance) -> JwpWitness | None:
    """Rotated min-inequality form, pure Python; cross-checks the fast path."""
    n = instance.n
    for i in range(n):
        for j in range(i + 1, n):
            for k in range(j + 1, n):
                for a in range(instance.domains[i]):
                    for b in range(instance.domains[j]):
                        for c in range(instance.domains[k]):
                            ab = instance.binary_cost(i, j, a, b)
                            ac = instance.binary_cost(i, k, a, c)
                            bc = instance.binary_cost(j, k, b, c)
                            if (
                                ab < min(ac, bc)
                                or ac < min(ab, bc)
                                or bc < min(ab, ac)
                            ):
                                return JwpWitness((i, j, k), (a, b, c), (ab, ac, bc))
    return None


def triangle_is_isosceles(x: Cost, y: Cost, z: Cost) -> bool:
    lo, mid, _ = sorted((x, y, z))
    return lo == mid


def rand_vcsp(rng: random.Random, n: int, d: int, p_inf: float = 0.1) -> VcspInstance:
    unary = {}
    binary = {}
    for i in range(n):
        for a in range(d):
            if rng.random() < 0.5:
                unary[(i, a)] = rng.choice(COST_POOL)
    for i in range(n):
        for j in range(i + 1, n):
            for a in range(d):
                for b in range(d):
                    if rng.random() < p_inf:
                        binary[(i, j, a, b)] = INFINITY
                    elif rng.random() < 0.5:
                        binary[(i, j, a, b)] = rng.choice(COST_POOL)
    return VcspInstance([d] * n, unary, binary)


def rand_crisp(rng: random.Random, n: int, d: int, p_inf: float = 0.25) -> VcspInstance:
    binary = {}
    for i in range(n):
        for j in range(i + 1, n):
            for a in range(d):
                for b in range(d):
                    if rng.random() < p_inf:
                        binary[(i, j, a, b)] = INFINITY
    return VcspInstance([d] * n, binary=binary)


def plant_z_jwp(rng: random.Random, n: int, d: int, seed: int) -> VcspInstance:
    """Random joint-winner instance guaranteed to contain a Z-configuration.

    One variable pair keeps constraints only between its two members (every
    triple through it then carries two zero costs, so the property holds
    vacuously there) and its block gets a forced unique low corner.
    """
    from softcsp import gen_random_jwp

    assert n >= 2 and d >= 2
    base = gen_random_jwp(n, d, [1, 2], seed=seed)
    i, j = sorted(rng.sample(range(n), 2))
    binary = {
        key: c
        for key, c in base.binary_items()
        if i not in (key[0], key[1]) and j not in (key[0], key[1])
    }
    block = {}
    for a in range(d):
        for b in range(d):
            block[(a, b)] = rng.choice((1, 2, 3))
    a0, b0 = rng.randrange(d), rng.randrange(d)
    block[(a0, b0)] = 0
    for (a, b), c in block.items():
        if c:
            binary[(i, j, a, b)] = c
    unary = dict(base.unary_items())
    return VcspInstance(base.domains, unary, binary)


def interval_members(iv: LexInterval) -> set[tuple[int, ...]]:
    """Membership by direct lexicographic comparison (the oracle)."""
    pos = iv._positions()

    def key(x):
        return tuple(pos[i][v] for i, v in enumerate(x))

    lo, hi = key(iv.lower), key(iv.upper)
    return {
        x
        for x in itertools.product(*(range(d) for d in iv.domains))
        if lo <= key(x) <= hi
    }


def descriptor_members(descriptor) -> set[tuple[int, ...]]:
    return set(itertools.product(*(sorted(vals) for vals in descriptor)))


def brute_mis(n: int, edges) -> int:
    """Maximum independent set size by subset enumeration."""
    edge_set = {frozenset(e) for e in edges}
    best = 0
    for mask in range(1 << n):
        picked = [v for v in range(n) if mask >> v & 1]
        if all(
            frozenset((u, w)) not in edge_set
            for x, u in enumerate(picked)
            for w in picked[x + 1 :]
        ):
            best = max(best, len(picked))
    return best


def rand_laminar_nogoods(rng: random.Random, n: int, d: int) -> list[frozenset]:
    """Non-overlapping nogoods, each naming every variable at most once."""
    out: list[frozenset] = []
    n_roots = rng.randint(1, 3)
    for _ in range(n_roots):
        size = rng.randint(1, n)
        variables = rng.sample(range(n), size)
        root = frozenset((v, rng.randrange(d)) for v in variables)
        if any(root & other for other in out):
            continue
        out.append(root)
        current = root
        while len(current) > 1 and rng.random() < 0.5:
            sub = frozenset(rng.sample(sorted(current), rng.randint(1, len(current) - 1)))
            if sub not in out:
                out.append(sub)
            current = sub
    return out
