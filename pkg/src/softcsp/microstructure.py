"""Coloured micro-structure graphs and forbidden-pattern detection.

The micro-structure has a vertex per (variable, value) pair, coloured by
variable.  In crisp projection an edge joins two cross-variable vertices iff
their pair cost is finite; the complement flips that and additionally joins
every same-variable pair.  Patterns are small coloured graphs matched with
induced semantics: required edges and required non-edges must both hold.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterator, Sequence

from .costs import Cost, INFINITY, ZERO
from .errors import InvalidAssignmentError, UnsupportedPatternError
from .instance import VcspInstance, Vertex

MICROSTRUCTURE = "microstructure"
COMPLEMENT = "complement"

MAX_PATTERN_VERTICES = 8


def _pair(u: Vertex, w: Vertex) -> tuple[Vertex, Vertex]:
    return (u, w) if u <= w else (w, u)


@dataclass(frozen=True)
class ColouredMicrostructure:
    """Vertex-per-assignment graph; ``edges`` maps canonical pairs to costs.

    In crisp projection only the qualifying pairs are present; otherwise every
    cross-colour pair is present with its exact cost.
    """

    domains: tuple[int, ...]
    mode: str
    crisp: bool
    edges: dict[tuple[Vertex, Vertex], Cost]

    @property
    def n(self) -> int:
        return len(self.domains)

    def vertices(self) -> list[Vertex]:
        return [(i, a) for i, d in enumerate(self.domains) for a in range(d)]

    def colour(self, v: Vertex) -> int:
        return v[0]

    def has_edge(self, u: Vertex, w: Vertex) -> bool:
        if u == w:
            return False
        if u[0] == w[0]:
            return self.mode == COMPLEMENT
        return _pair(u, w) in self.edges


def build_microstructure(
    instance: VcspInstance, complement: bool = False, crisp_only: bool = False
) -> ColouredMicrostructure:
    """Build the (coloured) micro-structure or its complement.

    ``crisp_only`` projects costs to the finite/infinite dichotomy; the
    complement is only defined for that projection.
    """
    if complement and not crisp_only:
        raise ValueError("the micro-structure complement is a crisp projection")
    edges: dict[tuple[Vertex, Vertex], Cost] = {}
    n = instance.n
    for i in range(n):
        for j in range(i + 1, n):
            for a in range(instance.domains[i]):
                for b in range(instance.domains[j]):
                    cost = instance.binary_cost(i, j, a, b)
                    key = _pair((i, a), (j, b))
                    if not crisp_only:
                        edges[key] = cost
                    elif complement and cost.is_infinite:
                        edges[key] = cost
                    elif not complement and cost.is_finite:
                        edges[key] = cost
    mode = COMPLEMENT if complement else MICROSTRUCTURE
    return ColouredMicrostructure(instance.domains, mode, crisp_only, edges)


def microstructure_dot(g: ColouredMicrostructure) -> str:
    """DOT rendering: one cluster per variable, edge labels carry costs."""
    lines = ["graph microstructure {"]
    for i, d in enumerate(g.domains):
        lines.append(f'  subgraph cluster_{i} {{')
        lines.append(f'    label="v{i + 1}";')
        for a in range(d):
            lines.append(f'    "v{i + 1}={a}";')
        lines.append("  }")
    for (u, w), cost in sorted(g.edges.items()):
        if not g.crisp and cost == ZERO:
            continue  # zero-cost pairs stay implicit, mirroring the drawing style
        lines.append(
            f'  "v{u[0] + 1}={u[1]}" -- "v{w[0] + 1}={w[1]}" [label="{cost}"];'
        )
    if g.mode == COMPLEMENT:
        for i, d in enumerate(g.domains):
            for a in range(d):
                for b in range(a + 1, d):
                    lines.append(f'  "v{i + 1}={a}" -- "v{i + 1}={b}";')
    lines.append("}")
    return "\n".join(lines) + "\n"


# -- patterns ----------------------------------------------------------------


@dataclass(frozen=True)
class Pattern:
    """A small coloured graph with induced-substructure semantics.

    ``colours[v]`` groups pattern vertices; ``edges`` and ``nonedges`` must be
    disjoint and together cover every cross-colour pair, so a match leaves no
    pair unconstrained.
    """

    colours: tuple[int, ...]
    edges: frozenset[tuple[int, int]]
    nonedges: frozenset[tuple[int, int]]

    def __post_init__(self):
        norm_e = frozenset(tuple(sorted(e)) for e in self.edges)
        norm_n = frozenset(tuple(sorted(e)) for e in self.nonedges)
        object.__setattr__(self, "edges", norm_e)
        object.__setattr__(self, "nonedges", norm_n)
        if norm_e & norm_n:
            raise ValueError("a pair cannot be both edge and non-edge")
        cross = {
            (u, w)
            for u in range(len(self.colours))
            for w in range(u + 1, len(self.colours))
            if self.colours[u] != self.colours[w]
        }
        if norm_e | norm_n != cross:
            raise ValueError("pattern must classify every cross-colour pair")

    @property
    def size(self) -> int:
        return len(self.colours)


# One compatible pair extending to two values of a third variable; forbidding
# this caps the number of feasible solutions.
DOUBLE_EXTENSION_3 = Pattern(
    colours=(0, 1, 2, 2),
    edges=frozenset({(0, 1), (0, 2), (0, 3), (1, 2), (1, 3)}),
    nonedges=frozenset(),
)

# The 4-variable analogue: a compatible triple extending to two values of a
# fourth variable.
DOUBLE_EXTENSION_4 = Pattern(
    colours=(0, 1, 2, 3, 3),
    edges=frozenset(
        {(0, 1), (0, 2), (1, 2), (0, 3), (0, 4), (1, 3), (1, 4), (2, 3), (2, 4)}
    ),
    nonedges=frozenset(),
)

# Two values of one variable both supporting an incompatible pair; forbidding
# this bounds dead ends in backtracking search.
SHARED_PAIR_SUPPORT = Pattern(
    colours=(0, 0, 1, 2),
    edges=frozenset({(0, 2), (1, 2), (0, 3), (1, 3)}),
    nonedges=frozenset({(2, 3)}),
)

# Broken triangle (unordered form): u-v compatible, each reaching a different
# value of a third variable, with the two crossing pairs incompatible.
BROKEN_TRIANGLE = Pattern(
    colours=(0, 1, 2, 2),
    edges=frozenset({(0, 1), (0, 2), (1, 3)}),
    nonedges=frozenset({(0, 3), (1, 2)}),
)

# In the complement of a crisp instance: two conflicts meeting at one vertex
# whose far endpoints are compatible.  Present iff some triangle carries the
# cost multiset {finite, inf, inf}.
CONFLICT_PATH = Pattern(
    colours=(0, 1, 2),
    edges=frozenset({(0, 2), (1, 2)}),
    nonedges=frozenset({(0, 1)}),
)

# name -> (pattern, wants_complement_host)
PATTERN_LIBRARY: dict[str, tuple[Pattern, bool]] = {
    "double-extension-3": (DOUBLE_EXTENSION_3, False),
    "double-extension-4": (DOUBLE_EXTENSION_4, False),
    "shared-pair-support": (SHARED_PAIR_SUPPORT, False),
    "broken-triangle": (BROKEN_TRIANGLE, False),
    "conflict-path": (CONFLICT_PATH, True),
}


def iter_induced_substructures(
    g: ColouredMicrostructure, p: Pattern
) -> Iterator[dict[int, Vertex]]:
    """All injective colour-respecting maps realizing ``p`` induced in ``g``."""
    if p.size > MAX_PATTERN_VERTICES:
        raise UnsupportedPatternError(
            f"pattern has {p.size} vertices; matcher supports at most {MAX_PATTERN_VERTICES}"
        )
    by_colour: dict[int, list[Vertex]] = {}
    for v in g.vertices():
        by_colour.setdefault(v[0], []).append(v)

    mapping: dict[int, Vertex] = {}
    colour_map: dict[int, int] = {}  # pattern colour -> host colour
    used_host_colours: set[int] = set()

    edge_of: dict[tuple[int, int], bool] = {}
    for u, w in p.edges:
        edge_of[(u, w)] = True
    for u, w in p.nonedges:
        edge_of[(u, w)] = False
    # Same-colour pattern pairs need no explicit check: injectivity plus the
    # colour discipline forces them onto same-variable host pairs, whose edge
    # status is fixed by the mode exactly as induced semantics require.

    def consistent(v: int, host: Vertex) -> bool:
        for u, hu in mapping.items():
            key = (u, v) if u < v else (v, u)
            if key in edge_of and g.has_edge(hu, host) != edge_of[key]:
                return False
        return True

    def extend(pos: int) -> Iterator[dict[int, Vertex]]:
        if pos == p.size:
            yield dict(mapping)
            return
        v = pos
        pc = p.colours[v]
        if pc in colour_map:
            candidates = by_colour.get(colour_map[pc], [])
        else:
            candidates = [
                h
                for c, hosts in sorted(by_colour.items())
                if c not in used_host_colours
                for h in hosts
            ]
        for host in candidates:
            if host in mapping.values():
                continue
            bound_here = pc not in colour_map
            if bound_here:
                colour_map[pc] = host[0]
                used_host_colours.add(host[0])
            elif colour_map[pc] != host[0]:
                continue
            if consistent(v, host):
                mapping[v] = host
                yield from extend(pos + 1)
                del mapping[v]
            if bound_here:
                del colour_map[pc]
                used_host_colours.discard(host[0])

    yield from extend(0)


def find_induced_substructure(
    g: ColouredMicrostructure, p: Pattern
) -> dict[int, Vertex] | None:
    """First witness mapping pattern vertices to host vertices, or None."""
    return next(iter_induced_substructures(g, p), None)


# -- broken-triangle property -------------------------------------------------


@dataclass(frozen=True)
class BtpViolation:
    """A broken triangle: the four witnessing (variable, value) pairs."""

    variables: tuple[int, int, int]  # (i, j, k) with k last in the ordering
    pairs: tuple[Vertex, Vertex, Vertex, Vertex]  # (i,u), (j,v), (k,a), (k,b)


def check_btp(instance: VcspInstance, ordering: Sequence[int]) -> BtpViolation | None:
    """Check the broken-triangle property under a variable ordering.

    For every triple whose ordering-last variable is ``k``: whenever
    ``c_ij(u,v)``, ``c_ik(u,a)`` and ``c_jk(v,b)`` are finite, one of
    ``c_ik(u,b)``, ``c_jk(v,a)`` must be finite too.  Returns the first
    broken triangle found, else None.
    """
    n = instance.n
    if sorted(ordering) != list(range(n)):
        raise InvalidAssignmentError("ordering must be a permutation of the variables")
    pos = {v: p for p, v in enumerate(ordering)}
    for i in range(n):
        for j in range(i + 1, n):
            for k in range(n):
                if k in (i, j) or pos[k] < pos[i] or pos[k] < pos[j]:
                    continue
                for u in range(instance.domains[i]):
                    for v in range(instance.domains[j]):
                        if instance.binary_cost(i, j, u, v).is_infinite:
                            continue
                        for a in range(instance.domains[k]):
                            if instance.binary_cost(i, k, u, a).is_infinite:
                                continue
                            for b in range(instance.domains[k]):
                                if instance.binary_cost(j, k, v, b).is_infinite:
                                    continue
                                if (
                                    instance.binary_cost(i, k, u, b).is_infinite
                                    and instance.binary_cost(j, k, v, a).is_infinite
                                ):
                                    return BtpViolation(
                                        (i, j, k), ((i, u), (j, v), (k, a), (k, b))
                                    )
    return None


# -- small named graphs --------------------------------------------------------

_SMALL_GRAPHS = {
    # vertex count, edge set (everything else is a required non-edge)
    "claw": (4, {(0, 1), (0, 2), (0, 3)}),
    "p4": (4, {(0, 1), (1, 2), (2, 3)}),
    "fork": (5, {(0, 1), (0, 2), (0, 3), (3, 4)}),
}


def detect_small_graph(
    n_vertices: int, edges: Sequence[tuple[int, int]], which: str
) -> tuple[int, ...] | None:
    """Induced search for a claw, P4 or fork in a plain graph.

    Returns host vertices in target order, or None.
    """
    if which not in _SMALL_GRAPHS:
        raise ValueError(f"unknown target graph {which!r}")
    size, target_edges = _SMALL_GRAPHS[which]
    edge_set = {tuple(sorted(e)) for e in edges}

    def adjacent(u: int, w: int) -> bool:
        return tuple(sorted((u, w))) in edge_set

    for combo in itertools.permutations(range(n_vertices), size):
        ok = True
        for u in range(size):
            for w in range(u + 1, size):
                want = (u, w) in target_edges
                if adjacent(combo[u], combo[w]) != want:
                    ok = False
                    break
            if not ok:
                break
        if ok:
            return combo
    return None
