"""Assignment flow networks and an exact min-cost flow solver.

The network has a source, one node per variable, one node per surviving
(variable, value) pair, and one node per clique in a laminar hierarchy, with
the hierarchy root acting as sink.  Source-to-variable arcs carry demand 1
so every feasible flow has value n and selects one value per variable.  A
clique with r members sends a bundle of r unit arcs to its father whose
weights are the increments of the clique's cost function, so routing the
m-th unit through a clique pays exactly the marginal cost of putting an
m-th chosen assignment inside it.  Minimum-cost integral flows therefore
correspond to minimum-cost assignments.

The solver is successive shortest paths with node potentials: an initial
label-correcting pass, then one non-negative-reduced-cost shortest-path
pass per unit of flow.  All arithmetic is exact.
"""

from __future__ import annotations

import heapq
import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Sequence

from .costs import Cost, INFINITY, ZERO
from .errors import (
    InfeasibleError,
    InternalConsistencyError,
    JwpPreconditionError,
    MalformedNetworkError,
)
from .hierarchy import CliqueHierarchy, extract_clique_hierarchy
from .instance import Assignment, VcspInstance, Vertex
from .jwp import MergeLog, check_jwp, eliminate_z


@dataclass(frozen=True)
class Arc:
    tail: int
    head: int
    demand: int
    capacity: int
    weight: Fraction
    kind: str  # "variable" | "assignment" | "membership" | "bundle"
    rank: int | None = None  # 1-based position within a bundle


@dataclass(frozen=True)
class FlowNetwork:
    """Directed network with per-arc demand/capacity/weight."""

    labels: tuple[tuple, ...]  # node index -> label
    arcs: tuple[Arc, ...]
    source: int
    sink: int
    num_variables: int
    assignment_of_arc: dict[int, Vertex]  # assignment-arc index -> (var, value)

    def node_count(self) -> int:
        return len(self.labels)


@dataclass(frozen=True)
class IntegralFlow:
    """0/1 flow per arc, aligned with the network's arc tuple."""

    values: tuple[int, ...]
    amount: int
    cost: Fraction


@dataclass(frozen=True)
class LaminarBundle:
    """A clique node for network assembly: members plus outgoing arc weights.

    ``deltas[m-1]`` is the weight of the m-th bundle arc; infinite entries are
    omitted from the network, capping how many chosen assignments the set can
    hold at finite cost.
    """

    members: frozenset[Vertex]
    deltas: tuple[Cost, ...]


def assemble_network(
    domains: Sequence[int],
    unary: Callable[[int, int], Cost],
    bundles: Sequence[LaminarBundle],
) -> FlowNetwork:
    """Build the network for a laminar family of weighted sets.

    Pairs with infinite unary cost are pruned before construction; a variable
    left without values raises InfeasibleError.  An implicit root over all
    vertices is appended and becomes the sink.
    """
    n = len(domains)
    surviving: list[Vertex] = []
    for i, d in enumerate(domains):
        alive = [(i, a) for a in range(d) if unary(i, a).is_finite]
        if not alive:
            raise InfeasibleError(f"variable {i} has no finite-cost values")
        surviving.extend(alive)

    labels: list[tuple] = [("s",)]
    index: dict[tuple, int] = {("s",): 0}
    for i in range(n):
        index[("v", i)] = len(labels)
        labels.append(("v", i))
    for i, a in surviving:
        index[("a", i, a)] = len(labels)
        labels.append(("a", i, a))
    for b_idx in range(len(bundles)):
        index[("c", b_idx)] = len(labels)
        labels.append(("c", b_idx))
    root_idx = len(bundles)
    index[("c", root_idx)] = len(labels)
    labels.append(("c", root_idx))

    # Deepest containing set per vertex, and each bundle's father: with a
    # laminar family the candidates form a chain, so smallest wins.
    by_size = sorted(range(len(bundles)), key=lambda b: (len(bundles[b].members), b))

    def deepest_set(v: Vertex) -> int:
        for b in by_size:
            if v in bundles[b].members:
                return b
        return root_idx

    def father_of(b: int) -> int:
        best = root_idx
        best_size = None
        for other in range(len(bundles)):
            if other == b:
                continue
            m = bundles[other].members
            if bundles[b].members < m and (best_size is None or len(m) < best_size):
                best, best_size = other, len(m)
        return best

    arcs: list[Arc] = []
    assignment_of_arc: dict[int, Vertex] = {}
    for i in range(n):
        arcs.append(Arc(0, index[("v", i)], 1, 1, Fraction(0), "variable"))
    for i, a in surviving:
        assignment_of_arc[len(arcs)] = (i, a)
        arcs.append(
            Arc(
                index[("v", i)],
                index[("a", i, a)],
                0,
                1,
                unary(i, a).finite_value(),
                "assignment",
            )
        )
    for i, a in surviving:
        arcs.append(
            Arc(
                index[("a", i, a)],
                index[("c", deepest_set((i, a)))],
                0,
                1,
                Fraction(0),
                "membership",
            )
        )
    for b_idx, bundle in enumerate(bundles):
        head = index[("c", father_of(b_idx))]
        tail = index[("c", b_idx)]
        for rank, delta in enumerate(bundle.deltas, start=1):
            if delta.is_infinite:
                continue  # omitted: the set cannot hold this many at finite cost
            arcs.append(Arc(tail, head, 0, 1, delta.finite_value(), "bundle", rank))

    return FlowNetwork(
        labels=tuple(labels),
        arcs=tuple(arcs),
        source=0,
        sink=index[("c", root_idx)],
        num_variables=n,
        assignment_of_arc=assignment_of_arc,
    )


def build_network(instance: VcspInstance, h: CliqueHierarchy) -> FlowNetwork:
    """Network for a Z-free joint-winner instance with extracted hierarchy.

    A clique at threshold alpha whose father sits at beta sends r arcs with
    weights (m-1)(alpha-beta), r its member count; an infinite threshold
    leaves the single weight-0 arc.
    """
    bundles = []
    for idx, node in enumerate(h.nodes):
        if idx == h.root:
            continue
        father = h.nodes[node.parent]
        step = node.threshold - father.threshold
        deltas = tuple(step * (m - 1) for m in range(1, len(node.members) + 1))
        bundles.append(LaminarBundle(node.members, deltas))
    return assemble_network(instance.domains, instance.unary_cost, bundles)


# -- solving -------------------------------------------------------------------


def min_cost_flow(net: FlowNetwork) -> IntegralFlow | None:
    """Exact minimum-cost feasible integral flow, or None when infeasible.

    Demands appear only on source arcs, so feasibility is exactly reaching a
    flow value equal to their sum.
    """
    for arc in net.arcs:
        if not (0 <= arc.demand <= arc.capacity <= 1):
            raise MalformedNetworkError(f"arc {arc} has demand/capacity out of bounds")
        if arc.demand == 1 and arc.tail != net.source:
            raise MalformedNetworkError("demands are only supported on source arcs")

    n_nodes = net.node_count()
    target = sum(a.demand for a in net.arcs)
    flow = [0] * len(net.arcs)
    out_arcs: list[list[int]] = [[] for _ in range(n_nodes)]
    in_arcs: list[list[int]] = [[] for _ in range(n_nodes)]
    for idx, a in enumerate(net.arcs):
        out_arcs[a.tail].append(idx)
        in_arcs[a.head].append(idx)

    # Initial potentials: label-correcting pass over the empty-flow residual.
    pot: list[Fraction | None] = [None] * n_nodes
    pot[net.source] = Fraction(0)
    for _ in range(n_nodes - 1):
        improved = False
        for idx, a in enumerate(net.arcs):
            if a.capacity > 0 and pot[a.tail] is not None:
                cand = pot[a.tail] + a.weight
                if pot[a.head] is None or cand < pot[a.head]:
                    pot[a.head] = cand
                    improved = True
        if not improved:
            break

    counter = itertools.count()
    for _ in range(target):
        # Dijkstra over the residual graph with reduced costs; runs to
        # exhaustion so the potential update keeps every residual arc
        # non-negative for the next round.
        dist: list[Fraction | None] = [None] * n_nodes
        prev: list[tuple[int, bool] | None] = [None] * n_nodes  # (arc, forward)
        dist[net.source] = Fraction(0)
        heap = [(Fraction(0), next(counter), net.source)]
        done = [False] * n_nodes
        while heap:
            d, _, u = heapq.heappop(heap)
            if done[u]:
                continue
            done[u] = True
            for idx in out_arcs[u]:
                a = net.arcs[idx]
                if flow[idx] < a.capacity and pot[a.head] is not None:
                    nd = d + a.weight + pot[u] - pot[a.head]
                    if dist[a.head] is None or nd < dist[a.head]:
                        dist[a.head] = nd
                        prev[a.head] = (idx, True)
                        heapq.heappush(heap, (nd, next(counter), a.head))
            for idx in in_arcs[u]:
                a = net.arcs[idx]
                if flow[idx] > a.demand and pot[a.tail] is not None:
                    nd = d - a.weight + pot[u] - pot[a.tail]
                    if dist[a.tail] is None or nd < dist[a.tail]:
                        dist[a.tail] = nd
                        prev[a.tail] = (idx, False)
                        heapq.heappush(heap, (nd, next(counter), a.tail))
        if not done[net.sink]:
            return None
        for v in range(n_nodes):
            if done[v]:
                pot[v] = pot[v] + dist[v]
        node = net.sink
        while node != net.source:
            idx, forward = prev[node]
            if forward:
                flow[idx] += 1
                node = net.arcs[idx].tail
            else:
                flow[idx] -= 1
                node = net.arcs[idx].head
        # dropping flow below a demand is impossible: demands sit on source
        # arcs, which the path always leaves in the forward direction

    cost = sum((a.weight * f for a, f in zip(net.arcs, flow)), Fraction(0))
    result = IntegralFlow(tuple(flow), target, cost)
    _verify_flow(net, result)
    return result


def _verify_flow(net: FlowNetwork, f: IntegralFlow) -> None:
    balance = [Fraction(0)] * net.node_count()
    for arc, v in zip(net.arcs, f.values):
        if not (arc.demand <= v <= arc.capacity):
            raise InternalConsistencyError("flow violates an arc bound")
        balance[arc.tail] -= v
        balance[arc.head] += v
    for node in range(net.node_count()):
        if node in (net.source, net.sink):
            continue
        if balance[node] != 0:
            raise InternalConsistencyError(f"flow conservation fails at node {node}")
    if balance[net.sink] != f.amount or -balance[net.source] != f.amount:
        raise InternalConsistencyError("flow value disagrees with its demands")
    bundles: dict[tuple[int, int], list[tuple[int, int]]] = {}
    for idx, arc in enumerate(net.arcs):
        if arc.kind == "bundle":
            bundles.setdefault((arc.tail, arc.head), []).append((arc.rank, f.values[idx]))
    for used in bundles.values():
        used.sort()
        seen_gap = False
        for _, v in used:
            if v == 0:
                seen_gap = True
            elif seen_gap:
                raise InternalConsistencyError(
                    "bundle arcs are not used as a weight-ascending prefix"
                )


def canonical_flow(net: FlowNetwork, x: Sequence[int]) -> IntegralFlow | None:
    """The cheapest flow routing exactly the given assignment.

    Saturates each variable's chosen assignment arc and fills every bundle as
    a weight-ascending prefix, one arc per unit entering the clique.  Returns
    None when the assignment uses a pruned value or needs more finite bundle
    arcs than exist (its cost is infinite).
    """
    if len(x) != net.num_variables:
        raise InternalConsistencyError("assignment length does not match the network")
    arc_of_pair = {pair: idx for idx, pair in net.assignment_of_arc.items()}
    flow = [0] * len(net.arcs)
    chosen_nodes: set[int] = set()
    for i, a in enumerate(x):
        idx = arc_of_pair.get((i, a))
        if idx is None:
            return None  # value was pruned for infinite unary cost
        flow[idx] = 1
        chosen_nodes.add(net.arcs[idx].head)

    inflow = [0] * net.node_count()
    for idx, arc in enumerate(net.arcs):
        if arc.kind == "variable":
            flow[idx] = 1
        elif arc.kind == "membership" and arc.tail in chosen_nodes:
            flow[idx] = 1
            inflow[arc.head] += 1

    # Fill bundles in topological order (children hand their units to the
    # father before the father's own bundle is decided).
    group: dict[int, list[int]] = {}
    father: dict[int, int] = {}
    for idx, arc in enumerate(net.arcs):
        if arc.kind == "bundle":
            group.setdefault(arc.tail, []).append(idx)
            father[arc.tail] = arc.head
    pending = {tail: 0 for tail in group}
    for tail, head in father.items():
        if head in pending:
            pending[head] += 1
    ready = [tail for tail, cnt in pending.items() if cnt == 0]
    while ready:
        tail = ready.pop()
        need = inflow[tail]
        arcs_sorted = sorted(group[tail], key=lambda idx: net.arcs[idx].rank)
        if need > len(arcs_sorted):
            return None  # infinite-cost configuration: bundle capacity was omitted
        for pos in range(need):
            flow[arcs_sorted[pos]] = 1
        inflow[father[tail]] += need
        head = father[tail]
        if head in pending:
            pending[head] -= 1
            if pending[head] == 0:
                ready.append(head)
    for node, label in enumerate(net.labels):
        # a clique node with no finite bundle arcs cannot pass units along
        if label[0] == "c" and node != net.sink and node not in group and inflow[node]:
            return None

    cost = sum((a.weight * v for a, v in zip(net.arcs, flow)), Fraction(0))
    result = IntegralFlow(tuple(flow), net.num_variables, cost)
    _verify_flow(net, result)
    return result


def extract_solution(
    net: FlowNetwork,
    f: IntegralFlow,
    merge_log: MergeLog | None = None,
    source_instance: VcspInstance | None = None,
) -> tuple[Assignment, Cost]:
    """Read the assignment off a feasible flow and lift it through merges.

    When the originating instance is supplied, the lifted assignment is
    re-evaluated and must reproduce the flow cost exactly.
    """
    values: dict[int, int] = {}
    for idx, vertex in net.assignment_of_arc.items():
        if f.values[idx]:
            if vertex[0] in values:
                raise InternalConsistencyError(f"two values routed for variable {vertex[0]}")
            values[vertex[0]] = vertex[1]
    if len(values) != net.num_variables:
        raise InternalConsistencyError("flow does not select a value for every variable")
    x = tuple(values[i] for i in range(net.num_variables))
    if merge_log is not None:
        x = merge_log.lift(x)
    cost = Cost(f.cost)
    if source_instance is not None and source_instance.evaluate(x) != cost:
        raise InternalConsistencyError(
            f"assignment {x} evaluates to {source_instance.evaluate(x)}, flow cost is {cost}"
        )
    return x, cost


def solve_flow(instance: VcspInstance) -> tuple[Assignment | None, Cost]:
    """Full pipeline: recognition, Z-elimination, hierarchy, min-cost flow.

    Raises JwpPreconditionError (carrying the witness) when the instance
    fails recognition; returns ``(None, inf)`` when no finite-cost
    assignment exists.
    """
    witness = check_jwp(instance)
    if witness is not None:
        raise JwpPreconditionError(
            f"joint-winner property fails on variables {witness.variables} "
            f"values {witness.values}: costs {[str(c) for c in witness.costs]}",
            witness=witness,
        )
    reduced, log = eliminate_z(instance)
    h = extract_clique_hierarchy(reduced)
    try:
        net = build_network(reduced, h)
    except InfeasibleError:
        return None, INFINITY
    f = min_cost_flow(net)
    if f is None:
        return None, INFINITY
    return extract_solution(net, f, log, instance)


def network_dot(net: FlowNetwork) -> str:
    """DOT rendering with demands/capacities in brackets and weights on arcs."""

    def name(label: tuple) -> str:
        if label[0] == "s":
            return "s"
        if label[0] == "v":
            return f"v{label[1] + 1}"
        if label[0] == "a":
            return f"v{label[1] + 1}={label[2]}"
        return "t" if ("c", label[1]) == net.labels[net.sink][:2] else f"C{label[1]}"

    lines = ["digraph network {", "  rankdir=LR;"]
    for label in net.labels:
        lines.append(f'  "{name(label)}";')
    for arc in net.arcs:
        text = f"[{arc.demand},{arc.capacity}]"
        if arc.weight:
            text = f"{arc.weight} {text}"
        lines.append(
            f'  "{name(net.labels[arc.tail])}" -> "{name(net.labels[arc.head])}" [label="{text}"];'
        )
    lines.append("}")
    return "\n".join(lines) + "\n"
