"""Reduction of unary-soft / binary-crisp instances to maximum-weight
independent set, plus a desk-scale exact branch-and-bound MWIS solver."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Hashable

from .costs import Cost, INFINITY
from .errors import NotCrispError, TooLargeError
from .instance import Assignment, VcspInstance, Vertex

DEFAULT_MAX_VERTICES = 40


@dataclass(frozen=True)
class WeightedGraph:
    """Undirected graph with non-negative rational vertex weights."""

    weights: dict[Hashable, Fraction]
    edges: frozenset[tuple[Hashable, Hashable]]
    # For reduction graphs the nodes themselves are (variable, value) pairs.

    def __post_init__(self):
        norm = set()
        for u, w in self.edges:
            if u == w:
                raise ValueError("self-loops are not allowed")
            if u not in self.weights or w not in self.weights:
                raise ValueError("edge endpoint missing from the vertex set")
            norm.add((u, w) if repr(u) <= repr(w) else (w, u))
        object.__setattr__(self, "edges", frozenset(norm))
        if any(x < 0 for x in self.weights.values()):
            raise ValueError("vertex weights must be non-negative")


def mwis_reduction(instance: VcspInstance) -> tuple[WeightedGraph, Fraction]:
    """Weighted micro-structure complement for a binary-crisp instance.

    Vertex (i, a) carries weight ``M*n - c_i(a)`` where ``M`` exceeds every
    finite unary cost by one; vertices with infinite unary cost are dropped.
    Independent sets of weight strictly above the returned threshold
    ``M*n*(n-1)`` correspond one-to-one to the finite-cost assignments.
    """
    for key, c in instance.binary_items():
        if c.is_finite:
            raise NotCrispError(f"binary entry {key} has soft cost {c}")
    n = instance.n
    max_unary = Fraction(0)
    for _, c in instance.unary_items():
        if c.is_finite and c.finite_value() > max_unary:
            max_unary = c.finite_value()
    m = max_unary + 1

    weights: dict[Hashable, Fraction] = {}
    for i, a in instance.vertices():
        c = instance.unary_cost(i, a)
        if c.is_finite:
            weights[(i, a)] = m * n - c.finite_value()

    edges: set[tuple[Vertex, Vertex]] = set()
    for i, d in enumerate(instance.domains):
        alive = [a for a in range(d) if (i, a) in weights]
        for x in range(len(alive)):
            for y in range(x + 1, len(alive)):
                edges.add(((i, alive[x]), (i, alive[y])))
    for (i, j, a, b), c in instance.binary_items():
        if c.is_infinite and (i, a) in weights and (j, b) in weights:
            edges.add(((i, a), (j, b)))

    threshold = m * n * (n - 1)
    return WeightedGraph(weights, frozenset(edges)), threshold


def solve_mwis(
    graph: WeightedGraph, max_vertices: int = DEFAULT_MAX_VERTICES
) -> tuple[frozenset, Fraction]:
    """Exact maximum-weight independent set by branch and bound.

    Uses a greedy initial solution and the remaining-weight-sum upper bound.
    Among maximum-weight sets the lexicographically smallest sorted vertex
    tuple is returned, so results are deterministic.
    """
    try:
        nodes = sorted(graph.weights)
    except TypeError:
        nodes = sorted(graph.weights, key=repr)
    if len(nodes) > max_vertices:
        raise TooLargeError(f"graph has {len(nodes)} vertices, bound is {max_vertices}")
    index = {v: i for i, v in enumerate(nodes)}
    adj: list[set[int]] = [set() for _ in nodes]
    for u, w in graph.edges:
        adj[index[u]].add(index[w])
        adj[index[w]].add(index[u])
    wts = [graph.weights[v] for v in nodes]

    # Greedy seed: heaviest-first, skip neighbours of chosen vertices.
    chosen: list[int] = []
    blocked: set[int] = set()
    for i in sorted(range(len(nodes)), key=lambda i: (-wts[i], i)):
        if i not in blocked:
            chosen.append(i)
            blocked.add(i)
            blocked |= adj[i]
    best_set = tuple(sorted(chosen))
    best_w = sum((wts[i] for i in chosen), Fraction(0))

    def rec(pos: int, current: list[int], cur_w: Fraction, avail: set[int], avail_w: Fraction):
        nonlocal best_set, best_w
        if cur_w + avail_w < best_w:
            return
        while pos < len(nodes) and pos not in avail:
            pos += 1
        if pos == len(nodes):
            key = tuple(sorted(current))
            if cur_w > best_w or (cur_w == best_w and key < best_set):
                best_w, best_set = cur_w, key
            return
        v = pos
        removed = (avail & adj[v]) | {v}
        removed_w = sum((wts[i] for i in removed), Fraction(0))
        current.append(v)
        rec(pos + 1, current, cur_w + wts[v], avail - removed, avail_w - removed_w)
        current.pop()
        rec(pos + 1, current, cur_w, avail - {v}, avail_w - wts[v])

    all_avail = set(range(len(nodes)))
    rec(0, [], Fraction(0), all_avail, sum(wts, Fraction(0)))
    return frozenset(nodes[i] for i in best_set), best_w


def solve_via_mwis(
    instance: VcspInstance, max_vertices: int = DEFAULT_MAX_VERTICES
) -> tuple[Assignment | None, Cost]:
    """Solve a binary-crisp instance through the independent-set reduction."""
    graph, threshold = mwis_reduction(instance)
    if not graph.weights and instance.n > 0:
        return None, INFINITY
    best, weight = solve_mwis(graph, max_vertices)
    if instance.n == 0:
        return (), Cost(0)
    if weight <= threshold or len(best) < instance.n:
        return None, INFINITY
    values = dict(best)  # nodes are (variable, value) pairs
    x = tuple(values[i] for i in range(instance.n))
    return x, instance.evaluate(x)
