"""Laminar hierarchy of maximal assignment-cliques.

For a Z-free joint-winner instance, the edges of the micro-structure with
cost at least alpha form disjoint assignment-cliques (sets of vertices that
become cliques once same-variable edges are added), and cliques at different
levels nest.  Processing the distinct cost levels from the largest down with
a union-find therefore builds a laminar tree whose root holds every vertex
at threshold 0.  Each node is verified to really be an assignment-clique, so
broken preconditions surface as errors instead of silent wrong answers.
"""

from __future__ import annotations

from dataclasses import dataclass

from .costs import Cost, ZERO
from .errors import StructureViolatedError
from .instance import VcspInstance, Vertex


class UnionFind:
    def __init__(self):
        self.parent: dict = {}

    def add(self, x):
        if x not in self.parent:
            self.parent[x] = x

    def find(self, x):
        root = x
        while self.parent[root] != root:
            root = self.parent[root]
        while self.parent[x] != root:
            self.parent[x], x = root, self.parent[x]
        return root

    def union(self, a, b):
        ra, rb = self.find(a), self.find(b)
        if ra != rb:
            self.parent[rb] = ra
        return ra


@dataclass(frozen=True)
class CliqueNode:
    threshold: Cost
    members: frozenset[Vertex]
    parent: int | None
    children: tuple[int, ...]


@dataclass(frozen=True)
class CliqueHierarchy:
    """Laminar tree of assignment-cliques, rooted at the all-vertex node."""

    nodes: tuple[CliqueNode, ...]
    root: int
    deepest: dict[Vertex, int]  # vertex -> deepest node containing it

    def node_count(self) -> int:
        return len(self.nodes)

    def ancestors(self, idx: int) -> list[int]:
        chain = [idx]
        while self.nodes[chain[-1]].parent is not None:
            chain.append(self.nodes[chain[-1]].parent)
        return chain

    def deepest_common(self, u: Vertex, w: Vertex) -> int:
        """Deepest node containing both vertices (the root in the worst case)."""
        for idx in self.ancestors(self.deepest[u]):
            if w in self.nodes[idx].members:
                return idx
        raise KeyError(f"{w} is not a vertex of this hierarchy")

    def validate(self, max_nodes: int | None = None) -> None:
        """Check laminarity, threshold growth and (optionally) the size bound."""
        for a in range(len(self.nodes)):
            for b in range(a + 1, len(self.nodes)):
                ma, mb = self.nodes[a].members, self.nodes[b].members
                if ma & mb and not (ma <= mb or mb <= ma):
                    raise StructureViolatedError(f"nodes {a} and {b} properly overlap")
        for idx, node in enumerate(self.nodes):
            if node.parent is not None:
                parent = self.nodes[node.parent]
                if node.threshold <= parent.threshold:
                    raise StructureViolatedError(
                        f"node {idx} does not increase the threshold of its parent"
                    )
                if not node.members <= parent.members:
                    raise StructureViolatedError(f"node {idx} escapes its parent")
                # Children are strict subsets, except that one top clique may
                # legitimately span every vertex, tying with the root.
                if node.members == parent.members and node.parent != self.root:
                    raise StructureViolatedError(f"node {idx} duplicates its parent")
        if max_nodes is not None and len(self.nodes) > max_nodes:
            raise StructureViolatedError(
                f"{len(self.nodes)} nodes exceed the laminar bound {max_nodes}"
            )


def extract_clique_hierarchy(instance: VcspInstance) -> CliqueHierarchy:
    """Build the hierarchy of maximal assignment-cliques by cost level.

    Requires a Z-free joint-winner instance.  Components are grown with a
    union-find over the distinct positive cost levels in descending order;
    each new component is verified to be an assignment-clique of its level
    (every cross-variable pair inside costs at least the level), raising
    StructureViolatedError otherwise.
    """
    by_level: dict[Cost, list[tuple[Vertex, Vertex]]] = {}
    for (i, j, a, b), c in instance.binary_items():
        by_level.setdefault(c, []).append(((i, a), (j, b)))

    uf = UnionFind()
    members: dict[Vertex, list[Vertex]] = {}  # root -> component members
    node_of_root: dict[Vertex, int] = {}
    nodes: list[dict] = []  # threshold, members, children; parent patched later
    vertex_deepest: dict[Vertex, int] = {}

    for level in sorted(by_level, reverse=True):
        touched: set[Vertex] = set()
        for u, w in by_level[level]:
            for v in (u, w):
                if v not in uf.parent:
                    uf.add(v)
                    members[v] = [v]
            ru, rw = uf.find(u), uf.find(w)
            if ru != rw:
                # merge smaller into larger to keep member moves cheap
                if len(members[ru]) < len(members[rw]):
                    ru, rw = rw, ru
                uf.parent[rw] = ru
                members[ru].extend(members.pop(rw))
            touched.add(uf.find(u))
        final_roots = {uf.find(r) for r in touched}
        for root in sorted(final_roots):
            component = members[root]
            _verify_assignment_clique(instance, component, level)
            absorbed = sorted(
                {idx for r, idx in node_of_root.items() if uf.find(r) == root}
            )
            comp = frozenset(component)
            if absorbed and any(nodes[idx]["members"] == comp for idx in absorbed):
                raise StructureViolatedError(
                    f"cost level {level} reproduces an existing clique: "
                    "the instance is not Z-free joint-winner"
                )
            idx = len(nodes)
            nodes.append({"threshold": level, "members": comp, "children": absorbed})
            for r in [r for r, owned in list(node_of_root.items()) if owned in absorbed]:
                del node_of_root[r]
            node_of_root[root] = idx
            for v in comp:
                vertex_deepest.setdefault(v, idx)

    all_vertices = frozenset(instance.vertices())
    root_idx = len(nodes)
    top_children = sorted(set(node_of_root.values()))
    nodes.append({"threshold": ZERO, "members": all_vertices, "children": top_children})
    for v in all_vertices:
        vertex_deepest.setdefault(v, root_idx)

    parent: list[int | None] = [None] * len(nodes)
    for idx, raw in enumerate(nodes):
        for child in raw["children"]:
            parent[child] = idx
    built = tuple(
        CliqueNode(raw["threshold"], raw["members"], parent[idx], tuple(raw["children"]))
        for idx, raw in enumerate(nodes)
    )
    return CliqueHierarchy(built, root_idx, vertex_deepest)


def _verify_assignment_clique(
    instance: VcspInstance, component: list[Vertex], level: Cost
) -> None:
    for x in range(len(component)):
        i, a = component[x]
        for y in range(x + 1, len(component)):
            j, b = component[y]
            if i == j:
                continue
            if instance.binary_cost(i, j, a, b) < level:
                raise StructureViolatedError(
                    f"component at level {level} is not an assignment-clique: "
                    f"pair ({i},{a}),({j},{b}) costs {instance.binary_cost(i, j, a, b)}; "
                    "the instance is not Z-free joint-winner"
                )
