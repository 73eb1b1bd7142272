"""Binary valued CSP instances and exact assignment evaluation.

Variables are 0-based; variable ``i`` ranges over values ``0 .. d_i - 1``.
There is a unique cost function per scope: binary entries are stored once
under the ordered pair ``i < j`` and queried symmetrically.  Unspecified
entries cost 0.  Instances are immutable after construction.
"""

from __future__ import annotations

import math
from typing import Iterable, Mapping, Sequence

from .costs import Cost, CostLike, INFINITY, ZERO, as_cost
from .errors import EmptyDomainError, InvalidAssignmentError

Assignment = tuple[int, ...]
Vertex = tuple[int, int]  # (variable, value)


class VcspInstance:
    """A binary VCSP: domains plus unary and binary cost functions."""

    __slots__ = ("domains", "_unary", "_binary")

    def __init__(
        self,
        domains: Sequence[int],
        unary: Mapping[tuple[int, int], CostLike] | None = None,
        binary: Mapping[tuple[int, int, int, int], CostLike] | None = None,
    ):
        self.domains = tuple(int(d) for d in domains)
        if any(d < 1 for d in self.domains):
            raise EmptyDomainError("every domain must contain at least one value")
        n = len(self.domains)

        store_u: dict[tuple[int, int], Cost] = {}
        for (i, a), raw in (unary or {}).items():
            if not (0 <= i < n and 0 <= a < self.domains[i]):
                raise InvalidAssignmentError(f"unary entry ({i},{a}) out of range")
            cost = as_cost(raw)
            prev = store_u.get((i, a))
            if prev is not None and prev != cost:
                raise ValueError(f"conflicting unary costs for ({i},{a})")
            if cost != ZERO:
                store_u[(i, a)] = cost

        store_b: dict[tuple[int, int, int, int], Cost] = {}
        for (i, j, a, b), raw in (binary or {}).items():
            if i == j:
                raise ValueError(f"binary scope ({i},{j}) must join distinct variables")
            if i > j:
                i, j, a, b = j, i, b, a
            if not (0 <= i < n and 0 <= j < n):
                raise InvalidAssignmentError(f"binary scope ({i},{j}) out of range")
            if not (0 <= a < self.domains[i] and 0 <= b < self.domains[j]):
                raise InvalidAssignmentError(
                    f"binary entry ({i},{j},{a},{b}) has a value out of range"
                )
            cost = as_cost(raw)
            prev = store_b.get((i, j, a, b))
            if prev is not None and prev != cost:
                raise ValueError(f"conflicting binary costs for scope ({i},{j}) tuple ({a},{b})")
            if cost != ZERO:
                store_b[(i, j, a, b)] = cost

        self._unary = store_u
        self._binary = store_b

    # -- basic accessors ----------------------------------------------------

    @property
    def n(self) -> int:
        return len(self.domains)

    def unary_cost(self, i: int, a: int) -> Cost:
        return self._unary.get((i, a), ZERO)

    def binary_cost(self, i: int, j: int, a: int, b: int) -> Cost:
        if i > j:
            i, j, a, b = j, i, b, a
        return self._binary.get((i, j, a, b), ZERO)

    def unary_items(self):
        """Stored (i, a) -> Cost entries (non-zero only)."""
        return self._unary.items()

    def binary_items(self):
        """Stored (i, j, a, b) -> Cost entries with i < j (non-zero only)."""
        return self._binary.items()

    def vertices(self) -> Iterable[Vertex]:
        for i, d in enumerate(self.domains):
            for a in range(d):
                yield (i, a)

    def assignment_count(self) -> int:
        return math.prod(self.domains)

    def is_binary_crisp(self) -> bool:
        """True when every binary cost lies in {0, inf}."""
        return all(c.is_infinite for c in self._binary.values())

    # -- evaluation ---------------------------------------------------------

    def validate_assignment(self, x: Sequence[int]) -> None:
        if len(x) != self.n:
            raise InvalidAssignmentError(
                f"assignment has {len(x)} entries, instance has {self.n} variables"
            )
        for i, a in enumerate(x):
            if not (0 <= a < self.domains[i]):
                raise InvalidAssignmentError(f"value {a} out of range for variable {i}")

    def evaluate(self, x: Sequence[int]) -> Cost:
        """Total cost of ``x``: sum of unary plus binary costs over all pairs."""
        self.validate_assignment(x)
        total = ZERO
        for i, a in enumerate(x):
            total = total + self._unary.get((i, a), ZERO)
            if total.is_infinite:
                return INFINITY
        n = self.n
        for i in range(n):
            xi = x[i]
            for j in range(i + 1, n):
                c = self._binary.get((i, j, xi, x[j]))
                if c is not None:
                    total = total + c
                    if total.is_infinite:
                        return INFINITY
        return total

    # -- restriction --------------------------------------------------------

    def restrict_domains(
        self, keep: Mapping[int, Iterable[int]]
    ) -> tuple["VcspInstance", tuple[tuple[int, ...], ...]]:
        """Restrict domains to the kept value subsets, re-indexing densely.

        Variables absent from ``keep`` retain their full domain.  Returns the
        restricted instance together with a remapping table: entry ``i`` lists,
        for each new value index, the original value it stands for.
        """
        remap: list[tuple[int, ...]] = []
        for i, d in enumerate(self.domains):
            if i in keep:
                vals = sorted(set(keep[i]))
                if not vals:
                    raise EmptyDomainError(f"variable {i} would keep no values")
                if vals[0] < 0 or vals[-1] >= d:
                    raise InvalidAssignmentError(f"kept value out of range for variable {i}")
                remap.append(tuple(vals))
            else:
                remap.append(tuple(range(d)))
        back = [{old: new for new, old in enumerate(vals)} for vals in remap]

        unary = {}
        for (i, a), c in self._unary.items():
            new_a = back[i].get(a)
            if new_a is not None:
                unary[(i, new_a)] = c
        binary = {}
        for (i, j, a, b), c in self._binary.items():
            new_a = back[i].get(a)
            new_b = back[j].get(b)
            if new_a is not None and new_b is not None:
                binary[(i, j, new_a, new_b)] = c

        restricted = VcspInstance([len(v) for v in remap], unary, binary)
        return restricted, tuple(remap)


def combine(first: VcspInstance, second: VcspInstance) -> VcspInstance:
    """Pointwise sum of two instances over identical variables and domains."""
    if first.domains != second.domains:
        raise ValueError("instances must share domains to be combined")
    unary: dict[tuple[int, int], Cost] = dict(first.unary_items())
    for key, c in second.unary_items():
        unary[key] = unary.get(key, ZERO) + c
    binary: dict[tuple[int, int, int, int], Cost] = dict(first.binary_items())
    for key, c in second.binary_items():
        binary[key] = binary.get(key, ZERO) + c
    return VcspInstance(first.domains, unary, binary)
