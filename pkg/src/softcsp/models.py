"""Generators for the solver's example problem classes and for random
instances used throughout the test suite."""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .costs import Cost, CostLike, INFINITY, ZERO, as_cost, cost_sum
from .errors import InternalConsistencyError
from .instance import Assignment, VcspInstance, Vertex
from .jwp import check_jwp, first_z_configuration
from .noc import NocInstance

Literal = tuple[int, bool]  # (variable, is_positive)


# -- soft all-different --------------------------------------------------------


def _normalize_domains(n: int, domains) -> list[tuple[int, ...]]:
    if isinstance(domains, int):
        return [tuple(range(domains))] * n
    out = [tuple(d) for d in domains]
    if len(out) != n:
        raise ValueError("need one domain per variable")
    return out


def gen_softalldiff(n: int, domains, variant: str = "graph") -> VcspInstance:
    """Soft all-different over value labels shared between variables.

    The graph variant charges 1 per equal pair.  The variable-based variant
    doubles each domain with a first/repeat flag: taking a value as a repeat
    costs 1, and two variables may not both claim to take it first.  Both
    satisfy the joint-winner property.
    """
    labels = _normalize_domains(n, domains)
    if variant == "graph":
        binary = {}
        for i in range(n):
            for j in range(i + 1, n):
                for ai, la in enumerate(labels[i]):
                    for bj, lb in enumerate(labels[j]):
                        if la == lb:
                            binary[(i, j, ai, bj)] = 1
        return VcspInstance([len(d) for d in labels], binary=binary)
    if variant == "variable":
        # value encoding: index 2*a + k, k=0 "first to take label a", k=1 "repeat"
        unary = {}
        binary = {}
        for i, dom in enumerate(labels):
            for a in range(len(dom)):
                unary[(i, 2 * a + 1)] = 1
        for i in range(n):
            for j in range(i + 1, n):
                for ai, la in enumerate(labels[i]):
                    for bj, lb in enumerate(labels[j]):
                        if la == lb:
                            binary[(i, j, 2 * ai, 2 * bj)] = INFINITY
        return VcspInstance([2 * len(d) for d in labels], unary, binary)
    raise ValueError(f"unknown variant {variant!r}")


def softalldiff_pair_count(labels: Sequence[Sequence[int]], x: Assignment) -> int:
    """Number of equal-label pairs under an assignment (graph-variant cost)."""
    chosen = [labels[i][v] for i, v in enumerate(x)]
    return sum(
        1
        for i in range(len(chosen))
        for j in range(i + 1, len(chosen))
        if chosen[i] == chosen[j]
    )


# -- machine scheduling ---------------------------------------------------------


@dataclass(frozen=True)
class SchedulingSpec:
    """Jobs x machines matrix of execution lengths; inf marks an impossible pair."""

    lengths: tuple[tuple[Cost, ...], ...]

    def __post_init__(self):
        object.__setattr__(
            self, "lengths", tuple(tuple(as_cost(v) for v in row) for row in self.lengths)
        )
        widths = {len(row) for row in self.lengths}
        if len(widths) > 1:
            raise ValueError("all jobs must list a length for every machine")

    @property
    def n_jobs(self) -> int:
        return len(self.lengths)

    @property
    def n_machines(self) -> int:
        return len(self.lengths[0]) if self.lengths else 0


def gen_scheduling(spec: SchedulingSpec) -> VcspInstance:
    """Jobs-to-machines VCSP minimizing the total time until completion.

    Unary costs are the execution lengths; two jobs on the same machine also
    pay the shorter of their lengths (the waiting time of the longer one).
    """
    n, m = spec.n_jobs, spec.n_machines
    unary = {}
    binary = {}
    for i in range(n):
        for mach in range(m):
            unary[(i, mach)] = spec.lengths[i][mach]
    for i in range(n):
        for j in range(i + 1, n):
            for mach in range(m):
                binary[(i, j, mach, mach)] = min(
                    spec.lengths[i][mach], spec.lengths[j][mach]
                )
    return VcspInstance([m] * n, unary, binary)


def scheduling_total_time(spec: SchedulingSpec, x: Assignment) -> Cost:
    """Total completion time of a machine assignment, computed directly.

    Serves as an independent oracle: jobs sharing a machine run shortest
    first, so each pair contributes the smaller length as waiting time.
    """
    total = cost_sum(spec.lengths[i][mach] for i, mach in enumerate(x))
    for i in range(spec.n_jobs):
        for j in range(i + 1, spec.n_jobs):
            if x[i] == x[j]:
                total = total + min(spec.lengths[i][x[i]], spec.lengths[j][x[j]])
    return total


# -- independent set as a soft-unary VCSP ---------------------------------------


def gen_btp_independent_set(
    n_vertices: int, edges: Sequence[tuple[int, int]]
) -> VcspInstance:
    """Boolean encoding of maximum independent set.

    Adjacent vertices may not both take value 1, and value 0 costs 1, so the
    optimum is n minus the maximum independent set size.  The encoding
    satisfies the broken-triangle property under every variable ordering.
    """
    unary = {(i, 0): 1 for i in range(n_vertices)}
    binary = {}
    for u, w in edges:
        if u == w or not (0 <= u < n_vertices and 0 <= w < n_vertices):
            raise ValueError(f"bad edge ({u},{w})")
        binary[(u, w, 1, 1)] = INFINITY
    return VcspInstance([2] * n_vertices, unary, binary)


# -- 2-clause soft formulas ------------------------------------------------------


def check_max2sat_jwp(
    clauses: Sequence[tuple[Literal, Literal]], n_vars: int | None = None
) -> tuple[tuple[Literal, Literal, Literal] | None, VcspInstance]:
    """Closure test for 2-clause formulas, plus their 0/1 VCSP encoding.

    The encoding satisfies the joint-winner property exactly when for every
    pair of clauses sharing a literal, the clause over the two remaining
    literals is present too.  Returns the first violating literal triple (or
    None) together with the encoding; the two checks are cross-validated.
    """
    seen: set[frozenset[Literal]] = set()
    for l1, l2 in clauses:
        if l1[0] == l2[0]:
            raise ValueError(f"clause {(l1, l2)} repeats a variable")
        key = frozenset((l1, l2))
        if key in seen:
            raise ValueError(f"repeated clause {(l1, l2)}")
        seen.add(key)

    n = n_vars if n_vars is not None else 1 + max(
        (lit[0] for cl in clauses for lit in cl), default=-1
    )
    costs: dict[tuple[int, int, int, int], int] = {}
    for l1, l2 in clauses:
        (i, si), (j, sj) = sorted((l1, l2))
        a = 0 if si else 1  # the value falsifying the literal
        b = 0 if sj else 1
        costs[(i, j, a, b)] = costs.get((i, j, a, b), 0) + 1
    instance = VcspInstance([2] * n, binary=costs)

    violation: tuple[Literal, Literal, Literal] | None = None
    partners: dict[Literal, list[Literal]] = {}
    for cl in seen:
        l1, l2 = sorted(cl)
        partners.setdefault(l1, []).append(l2)
        partners.setdefault(l2, []).append(l1)
    for shared in sorted(partners):
        cands = sorted(partners[shared])
        for x in range(len(cands)):
            for y in range(x + 1, len(cands)):
                la, lb = cands[x], cands[y]
                if la[0] == lb[0]:
                    continue
                if frozenset((la, lb)) not in seen:
                    violation = (shared, la, lb)
                    break
            if violation:
                break
        if violation:
            break

    if (violation is None) != (check_jwp(instance) is None):
        raise InternalConsistencyError(
            "closure condition and joint-winner check disagree on the encoding"
        )
    return violation, instance


# -- random generators -----------------------------------------------------------


def _sample_laminar(
    rng: random.Random, pool: list[Vertex], max_depth: int
) -> list[tuple[frozenset[Vertex], int]]:
    """Random laminar family by recursive partitioning; depths start at 1.

    Every produced set is a strict subset of its parent block, so the family
    is laminar by construction and no two sets coincide.
    """
    out: list[tuple[frozenset[Vertex], int]] = []

    def carve(block: list[Vertex], depth: int) -> None:
        if depth > max_depth or len(block) < 2:
            return
        rng.shuffle(block)
        k = rng.randint(2, len(block))
        cuts = sorted(rng.sample(range(1, len(block)), k - 1))
        pieces = [block[lo:hi] for lo, hi in zip([0] + cuts, cuts + [len(block)])]
        for piece in pieces:
            if len(piece) >= 2 and rng.random() < 0.75:
                out.append((frozenset(piece), depth))
                carve(piece, depth + 1)

    carve(list(pool), 1)
    return out


def gen_random_jwp(
    n: int, d: int, levels: Sequence[CostLike], seed: int
) -> VcspInstance:
    """Random joint-winner, Z-free instance from a planted laminar family.

    Binary cost of a cross pair is the level of the deepest planted set
    containing both vertices (0 when none), with levels indexed by nesting
    depth; that forces isosceles cost triangles and rules out
    Z-configurations.  Unary costs are small random rationals.
    """
    lv = [as_cost(x) for x in levels]
    if any(b <= a for a, b in zip(lv, lv[1:])) or (lv and lv[0] <= ZERO):
        raise ValueError("levels must be strictly increasing and start above 0")
    rng = random.Random(seed)
    vertices = [(i, a) for i in range(n) for a in range(d)]

    for _ in range(10):
        family = _sample_laminar(rng, vertices, len(lv))
        binary: dict[tuple[int, int, int, int], Cost] = {}
        for members, depth in sorted(family, key=lambda sd: -sd[1]):
            level = lv[depth - 1]
            group = sorted(members)
            for x in range(len(group)):
                i, a = group[x]
                for y in range(x + 1, len(group)):
                    j, b = group[y]
                    if i == j:
                        continue
                    key = (i, j, a, b)
                    if key not in binary:  # deepest set wins
                        binary[key] = level
        unary = {}
        for i in range(n):
            for a in range(d):
                c = rng.choice((0, 0, 1, 2, 3, Fraction(1, 2), Fraction(5, 2)))
                if c:
                    unary[(i, a)] = c
        inst = VcspInstance([d] * n, unary, binary)
        if first_z_configuration(inst) is None:
            return inst
    raise InternalConsistencyError("laminar construction produced Z-configurations")


def gen_random_noc(n: int, d: int, r: int, seed: int) -> NocInstance:
    """Random valid laminar-objective instance with at most r sets."""
    rng = random.Random(seed)
    vertices = [(i, a) for i in range(n) for a in range(d)]
    family = [s for s, _ in _sample_laminar(rng, vertices, 3)][:r]
    sets = []
    functions: list[tuple[Cost, ...]] = []
    for members in family:
        s = len({i for i, _ in members})
        base = rng.choice((0, 0, 0, 1))
        incs: list[Cost] = sorted(
            (Cost(rng.randint(0, 3)) for _ in range(s)), key=lambda c: c.finite_value()
        )
        if s >= 1 and rng.random() < 0.3:
            cut = rng.randint(1, s)
            incs[cut - 1 :] = [INFINITY] * (s - cut + 1)
        values: list[Cost] = [Cost(base)]
        for inc in incs:
            values.append(values[-1] + inc)
        sets.append(members)
        functions.append(tuple(values))
    return NocInstance([d] * n, tuple(sets), tuple(functions))


# -- office assignment and course allocation -------------------------------------


def gen_office(
    n_staff: int,
    capacities: Sequence[int],
    groups: Sequence[Sequence[int]] = (),
    preferences: Sequence[Sequence[CostLike]] | None = None,
) -> NocInstance:
    """Staff-to-office assignment with capacities, group spreading and
    per-person preferences, as a laminar convex objective.

    Each office's full assignment set enforces its capacity; each group's
    per-office subset pays one for every member beyond the first; preference
    costs ride on singletons.
    """
    m = len(capacities)
    seen: set[int] = set()
    for g in groups:
        for p in g:
            if not (0 <= p < n_staff):
                raise ValueError(f"group member {p} out of range")
            if p in seen:
                raise ValueError(f"staff member {p} appears in two groups")
            seen.add(p)
    sets = []
    functions = []
    for j, cap in enumerate(capacities):
        sets.append(frozenset((i, j) for i in range(n_staff)))
        functions.append(
            tuple(ZERO if k <= cap else INFINITY for k in range(n_staff + 1))
        )
        for g in groups:
            sets.append(frozenset((p, j) for p in g))
            functions.append(tuple(Cost(max(0, t - 1)) for t in range(len(g) + 1)))
    if preferences is not None:
        for i in range(n_staff):
            for j in range(m):
                c = as_cost(preferences[i][j])
                if c != ZERO:
                    sets.append(frozenset({(i, j)}))
                    functions.append((ZERO, c))
    return NocInstance([m] * n_staff, tuple(sets), tuple(functions))


def gen_courses(
    course_slots: Sequence[int],
    n_teachers: int,
    capacities: Sequence[int],
    overtime_rates: Sequence[CostLike],
    preferences: Sequence[Sequence[CostLike]] | None = None,
) -> NocInstance:
    """Course-to-teacher allocation with overtime costs and slot clashes.

    A teacher's load beyond their capacity is billed at their overtime rate;
    two courses in the same time slot cannot share a teacher.
    """
    n = len(course_slots)
    if len(capacities) != n_teachers or len(overtime_rates) != n_teachers:
        raise ValueError("need a capacity and overtime rate per teacher")
    sets = []
    functions = []
    for j in range(n_teachers):
        rate = as_cost(overtime_rates[j])
        sets.append(frozenset((i, j) for i in range(n)))
        functions.append(
            tuple(
                rate * (k - capacities[j]) if k > capacities[j] else ZERO
                for k in range(n + 1)
            )
        )
        for slot in sorted(set(course_slots)):
            members = frozenset((i, j) for i in range(n) if course_slots[i] == slot)
            if not members:
                continue
            fn = [ZERO] * (len(members) + 1)
            for k in range(2, len(members) + 1):
                fn[k] = INFINITY
            sets.append(members)
            functions.append(tuple(fn))
    if preferences is not None:
        for i in range(n):
            for j in range(n_teachers):
                c = as_cost(preferences[i][j])
                if c != ZERO:
                    sets.append(frozenset({(i, j)}))
                    functions.append((ZERO, c))
    return NocInstance([n_teachers] * n, tuple(sets), tuple(functions))
