"""Laminar convex objectives: sums of convex step functions over
non-overlapping sets of (variable, value) assignments.

The objective is sum_i f_i(N(x, C_i)) where N counts how many of the
solution's assignments fall into set C_i.  When the family is laminar and
each f_i is non-negative, non-decreasing and has a non-decreasing
derivative, the same flow network used for the binary case solves the
problem exactly: each set forwards its m-th unit along an arc of weight
f_i(m) - f_i(m-1).
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from typing import Mapping, Sequence

from .costs import Cost, CostLike, INFINITY, ZERO, as_cost, cost_sum
from .errors import (
    InvalidFamilyError,
    InvalidInstanceError,
    InternalConsistencyError,
    TooLargeError,
)
from .hierarchy import CliqueHierarchy
from .instance import Assignment, VcspInstance, Vertex
from .flows import LaminarBundle, assemble_network, extract_solution, min_cost_flow


def _distinct_variables(members: frozenset[Vertex]) -> int:
    return len({i for i, _ in members})


@dataclass(frozen=True)
class ConvexStepFn:
    """A convex step function, normalized so the stored values start at 0.

    ``constant`` keeps the subtracted f(0) for cost reporting.  Construction
    asserts the invariants (non-negative, non-decreasing, non-decreasing
    increments), so downstream code can rely on them.
    """

    values: tuple[Cost, ...]
    constant: Cost = ZERO

    def __post_init__(self):
        problem = step_fn_violation(self.values)
        if problem is not None:
            raise InvalidInstanceError(problem)
        if self.values[0] != ZERO:
            raise InvalidInstanceError("normalized step function must start at 0")

    @classmethod
    def from_values(cls, raw: Sequence[CostLike]) -> "ConvexStepFn":
        vals = tuple(as_cost(v) for v in raw)
        problem = step_fn_violation(vals)
        if problem is not None:
            raise InvalidInstanceError(problem)
        base = vals[0]
        if base.is_infinite:
            # every count costs infinity; keep the shape, flag via constant
            return cls(tuple([ZERO] * len(vals)), INFINITY)
        return cls(tuple(v - base for v in vals), base)

    @property
    def arity(self) -> int:
        return len(self.values) - 1

    def delta(self, m: int) -> Cost:
        """Increment f(m) - f(m-1) for m in 1..arity."""
        return self.values[m] - self.values[m - 1]

    def deltas(self) -> tuple[Cost, ...]:
        return tuple(self.delta(m) for m in range(1, len(self.values)))


def step_fn_violation(values: Sequence[Cost]) -> str | None:
    """First invariant broken by a raw value sequence, or None.

    Checks non-negativity, monotonicity, and the non-decreasing derivative
    f(m+2) - f(m+1) >= f(m+1) - f(m), with inf - x = inf.
    """
    if not values:
        return "step function needs at least the value at count 0"
    for m in range(len(values) - 1):
        if values[m + 1] < values[m]:
            return f"step function decreases between counts {m} and {m + 1}"
    for m in range(len(values) - 2):
        lo = values[m + 1] - values[m]
        hi = values[m + 2] - values[m + 1]
        if hi < lo:
            return (
                f"step function derivative decreases at m={m}: "
                f"f({m + 2})-f({m + 1}) = {hi} < f({m + 1})-f({m}) = {lo}"
            )
    return None


@dataclass(frozen=True)
class NocInstance:
    """Variables with domains, plus weighted sets of (variable, value) pairs.

    ``functions[i]`` lists f_i(0..s_i) where s_i is the number of distinct
    variables in ``sets[i]``.  Structural shape is enforced here; the
    non-overlapping and convexity *invariants* are checked by
    :func:`validate_noc` so invalid data can be diagnosed, not just rejected.
    """

    domains: tuple[int, ...]
    sets: tuple[frozenset[Vertex], ...]
    functions: tuple[tuple[Cost, ...], ...]

    def __post_init__(self):
        object.__setattr__(self, "domains", tuple(int(d) for d in self.domains))
        object.__setattr__(self, "sets", tuple(frozenset(s) for s in self.sets))
        object.__setattr__(
            self,
            "functions",
            tuple(tuple(as_cost(v) for v in fn) for fn in self.functions),
        )
        if len(self.sets) != len(self.functions):
            raise InvalidInstanceError("each set needs exactly one cost function")
        n = len(self.domains)
        for s, fn in zip(self.sets, self.functions):
            for i, a in s:
                if not (0 <= i < n and 0 <= a < self.domains[i]):
                    raise InvalidInstanceError(f"set member ({i},{a}) is out of range")
            if len(fn) != _distinct_variables(s) + 1:
                raise InvalidInstanceError(
                    f"function must list values 0..{_distinct_variables(s)}, got {len(fn)}"
                )

    @property
    def n(self) -> int:
        return len(self.domains)


def validate_noc(inst: NocInstance) -> str | None:
    """Report the first violated invariant, or None when the instance is valid."""
    for x in range(len(inst.sets)):
        for y in range(x + 1, len(inst.sets)):
            a, b = inst.sets[x], inst.sets[y]
            if a & b and not (a <= b or b <= a):
                return f"sets {x} and {y} overlap without nesting"
    for idx, fn in enumerate(inst.functions):
        problem = step_fn_violation(fn)
        if problem is not None:
            return f"function {idx}: {problem}"
    return None


def noc_objective(inst: NocInstance, x: Sequence[int]) -> Cost:
    """Direct evaluation of sum_i f_i(N(x, C_i))."""
    if len(x) != inst.n:
        raise InvalidInstanceError("assignment length does not match the instance")
    pairs = {(i, a) for i, a in enumerate(x)}
    return cost_sum(
        fn[len(s & pairs)] for s, fn in zip(inst.sets, inst.functions)
    )


def noc_brute_force(
    inst: NocInstance, budget: int = 10**6
) -> tuple[Assignment, Cost]:
    """Exhaustive reference minimizer for the laminar objective."""
    if math.prod(inst.domains) > budget:
        raise TooLargeError("assignment space exceeds the brute-force budget")
    best_x: Assignment | None = None
    best_c = INFINITY
    for x in itertools.product(*(range(d) for d in inst.domains)):
        c = noc_objective(inst, x)
        if best_x is None or c < best_c:
            best_x, best_c = x, c
    assert best_x is not None
    return best_x, best_c


def noc_network(inst: NocInstance):
    """Flow network plus the constant cost offset for a validated instance.

    Duplicate sets are merged by summing their functions; each set becomes a
    clique node whose bundle arcs carry the function's increments.
    """
    problem = validate_noc(inst)
    if problem is not None:
        raise InvalidInstanceError(problem)
    merged: dict[frozenset[Vertex], ConvexStepFn] = {}
    for s, fn in zip(inst.sets, inst.functions):
        step = ConvexStepFn.from_values(fn)
        if s in merged:
            prev = merged[s]
            combined = tuple(a + b for a, b in zip(prev.values, step.values))
            merged[s] = ConvexStepFn(combined, prev.constant + step.constant)
        else:
            merged[s] = step
    constant = cost_sum(fn.constant for fn in merged.values())
    ordered = sorted(merged.items(), key=lambda kv: (len(kv[0]), sorted(kv[0])))
    bundles = [LaminarBundle(s, fn.deltas()) for s, fn in ordered]
    net = assemble_network(inst.domains, lambda i, a: ZERO, bundles)
    return net, constant


def solve_noc(inst: NocInstance) -> tuple[Assignment | None, Cost]:
    """Exact minimization through the laminar flow network.

    Returns ``(None, inf)`` when no finite-cost assignment exists.
    """
    net, constant = noc_network(inst)
    if constant.is_infinite:
        return None, INFINITY
    flow = min_cost_flow(net)
    if flow is None:
        return None, INFINITY
    x, flow_cost = extract_solution(net, flow)
    objective = noc_objective(inst, x)
    if objective != flow_cost + constant:
        raise InternalConsistencyError(
            f"flow cost {flow_cost} plus constants {constant} disagrees with "
            f"the objective {objective} at {x}"
        )
    return x, objective


def jwp_to_noc(instance: VcspInstance, h: CliqueHierarchy) -> NocInstance:
    """Express a Z-free joint-winner instance as a laminar convex objective.

    Each non-root clique at threshold alpha with father at beta contributes
    the set of its members with f(m) = C(m,2) * (alpha - beta); unary costs
    ride on singleton sets with f(1) = c_i(a).
    """
    sets: list[frozenset[Vertex]] = []
    functions: list[tuple[Cost, ...]] = []
    for idx, node in enumerate(h.nodes):
        if idx == h.root:
            continue
        step = node.threshold - h.nodes[node.parent].threshold
        s = _distinct_variables(node.members)
        sets.append(node.members)
        functions.append(tuple(step * (m * (m - 1) // 2) for m in range(s + 1)))
    for (i, a), c in instance.unary_items():
        sets.append(frozenset({(i, a)}))
        functions.append((ZERO, c))
    return NocInstance(instance.domains, tuple(sets), tuple(functions))


def nogoods_to_noc(
    domains: Sequence[int],
    nogoods: Sequence[frozenset[Vertex] | set[Vertex]],
    mode: str = "hard",
) -> NocInstance:
    """Instance whose optimum is 0 iff some assignment avoids every nogood.

    In ``maxcsp`` mode each completed nogood costs 1 instead, so the optimum
    counts the minimum number of violated nogoods.  Nogoods must be pairwise
    non-overlapping and name each variable at most once.
    """
    if mode not in ("hard", "maxcsp"):
        raise ValueError("mode must be 'hard' or 'maxcsp'")
    full = as_cost(INFINITY) if mode == "hard" else Cost(1)
    sets = []
    functions = []
    for raw in nogoods:
        ng = frozenset(raw)
        if _distinct_variables(ng) != len(ng):
            raise InvalidFamilyError(f"nogood {sorted(ng)} repeats a variable")
        sets.append(ng)
        functions.append(tuple([ZERO] * len(ng)) + (full,))
    inst = NocInstance(tuple(domains), tuple(sets), tuple(functions))
    problem = validate_noc(inst)
    if problem is not None:
        raise InvalidFamilyError(problem)
    return inst
