"""Joint-winner recognition and Z-configuration elimination.

A triple of distinct variables satisfies the joint-winner condition when
each of its three binary costs is at least the minimum of the other two;
equivalently, the two smallest of the three are equal.  Recognition runs
the equivalent isosceles test over integer cost codes so the triple loop
vectorizes.  Z-configurations (2x2 blocks of one constraint with a unique
strictly-smaller corner) are removed by the domain-merging substitution,
which preserves both the property and the optimum.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .costs import Cost, INFINITY, ZERO
from .errors import InternalConsistencyError, JwpPreconditionError
from .instance import Assignment, VcspInstance


@dataclass(frozen=True)
class JwpWitness:
    """A violating triple: variables (i, j, k), values (a, b, c), and the
    three binary costs c_ij(a,b), c_ik(a,c), c_jk(b,c)."""

    variables: tuple[int, int, int]
    values: tuple[int, int, int]
    costs: tuple[Cost, Cost, Cost]


@dataclass(frozen=True)
class ZConfiguration:
    """Values a, b of var_i and c, d of var_j with costs on (a,c), (b,c)
    and (b,d) all strictly above the cost on (a,d)."""

    var_i: int
    var_j: int
    a: int
    b: int
    c: int
    d: int


def _code_matrices(instance: VcspInstance) -> dict[tuple[int, int], np.ndarray]:
    """Per ordered pair (i < j), the binary costs as order-preserving codes."""
    costs = {ZERO} | {c for _, c in instance.binary_items()}
    finite = sorted((c for c in costs if c.is_finite), key=lambda c: c.finite_value())
    ordered = finite + ([INFINITY] if INFINITY in costs else [])
    code = {c: r for r, c in enumerate(ordered)}
    n = instance.n
    mats = {
        (i, j): np.zeros((instance.domains[i], instance.domains[j]), dtype=np.int64)
        for i in range(n)
        for j in range(i + 1, n)
    }
    for (i, j, a, b), c in instance.binary_items():
        mats[(i, j)][a, b] = code[c]
    return mats


def check_jwp(instance: VcspInstance) -> JwpWitness | None:
    """First triple violating the joint-winner condition, or None.

    Unary costs play no role.  Deterministic: triples are scanned in
    lexicographic variable order, value triples likewise.
    """
    n = instance.n
    if n < 3:
        return None
    mats = _code_matrices(instance)
    for i in range(n):
        for j in range(i + 1, n):
            ab = mats[(i, j)][:, :, None]
            for k in range(j + 1, n):
                ac = mats[(i, k)][:, None, :]
                bc = mats[(j, k)][None, :, :]
                low = np.minimum(np.minimum(ab, ac), bc)
                ea, eb, ec = ab == low, ac == low, bc == low
                ok = (ea & eb) | (ea & ec) | (eb & ec)
                if not ok.all():
                    a, b, c = (int(v) for v in np.argwhere(~ok)[0])
                    return JwpWitness(
                        (i, j, k),
                        (a, b, c),
                        (
                            instance.binary_cost(i, j, a, b),
                            instance.binary_cost(i, k, a, c),
                            instance.binary_cost(j, k, b, c),
                        ),
                    )
    return None


def first_z_configuration(instance: VcspInstance) -> ZConfiguration | None:
    """First Z-configuration in scan order, or None."""
    n = instance.n
    mats = _code_matrices(instance) if n >= 2 else {}
    for i in range(n):
        for j in range(i + 1, n):
            m = mats[(i, j)]
            di, dj = m.shape
            if di < 2 or dj < 2 or not m.any():
                continue
            low = m[:, :, None, None]  # indexed [a, d, b, c]
            ac = m[:, None, None, :]
            bd = m.T[None, :, :, None]
            bc = m[None, None, :, :]
            hit = (ac > low) & (bd > low) & (bc > low)
            ia = np.arange(di)
            hit[ia, :, ia, :] = False
            id_ = np.arange(dj)
            hit[:, id_, :, id_] = False
            if hit.any():
                a, d, b, c = (int(v) for v in np.argwhere(hit)[0])
                return ZConfiguration(i, j, a, b, c, d)
    return None


def is_zfree(instance: VcspInstance) -> bool:
    return first_z_configuration(instance) is None


def find_z_configurations(instance: VcspInstance) -> list[ZConfiguration]:
    """Every Z-configuration, ordered lexicographically by (i, j, a, b, c, d)."""
    out: list[ZConfiguration] = []
    n = instance.n
    for i in range(n):
        for j in range(i + 1, n):
            di, dj = instance.domains[i], instance.domains[j]
            for a in range(di):
                for b in range(di):
                    if b == a:
                        continue
                    for c in range(dj):
                        for d in range(dj):
                            if d == c:
                                continue
                            low = instance.binary_cost(i, j, a, d)
                            if (
                                instance.binary_cost(i, j, a, c) > low
                                and instance.binary_cost(i, j, b, c) > low
                                and instance.binary_cost(i, j, b, d) > low
                            ):
                                out.append(ZConfiguration(i, j, a, b, c, d))
    return out


def expand_independent_pair(
    instance: VcspInstance, seed: ZConfiguration
) -> tuple[tuple[int, ...], tuple[int, ...]]:
    """Grow the seed's sub-domains to the closure that is independent of the
    other variables and of the remaining domain values.

    A value of var_i joins while its row differs across the current values of
    var_j, and symmetrically.  Both independence properties are re-verified
    before returning; failure means the instance was not joint-winner to
    begin with.
    """
    i, j = seed.var_i, seed.var_j
    low = instance.binary_cost(i, j, seed.a, seed.d)
    if not (
        instance.binary_cost(i, j, seed.a, seed.c) > low
        and instance.binary_cost(i, j, seed.b, seed.c) > low
        and instance.binary_cost(i, j, seed.b, seed.d) > low
    ):
        raise ValueError("seed is not a Z-configuration of this instance")

    s_i = {seed.a, seed.b}
    s_j = {seed.c, seed.d}
    changed = True
    while changed:
        changed = False
        for f in range(instance.domains[i]):
            if f in s_i:
                continue
            if len({instance.binary_cost(i, j, f, t) for t in s_j}) > 1:
                s_i.add(f)
                changed = True
        for g in range(instance.domains[j]):
            if g in s_j:
                continue
            if len({instance.binary_cost(i, j, s, g) for s in s_i}) > 1:
                s_j.add(g)
                changed = True

    for k in range(instance.n):
        if k in (i, j):
            continue
        for e in range(instance.domains[k]):
            seen = {instance.binary_cost(i, k, s, e) for s in s_i}
            seen |= {instance.binary_cost(j, k, t, e) for t in s_j}
            if len(seen) != 1:
                raise JwpPreconditionError(
                    f"sub-domains of variables ({i},{j}) are not independent of "
                    f"variable {k}: the instance is not joint-winner",
                )
    for f in range(instance.domains[i]):
        if f not in s_i and len({instance.binary_cost(i, j, f, t) for t in s_j}) > 1:
            raise JwpPreconditionError("closure failed to reach a fixpoint")
    for g in range(instance.domains[j]):
        if g not in s_j and len({instance.binary_cost(i, j, s, g) for s in s_i}) > 1:
            raise JwpPreconditionError("closure failed to reach a fixpoint")
    return tuple(sorted(s_i)), tuple(sorted(s_j))


@dataclass(frozen=True)
class MergeEntry:
    """One substitution: the kept-value maps and the simulated values."""

    var_i: int
    var_j: int
    kept_i: tuple[int, ...]  # new index -> old value, merged slot excluded
    merged_i: int  # new index of the merged value
    p0: int
    p1: int
    kept_j: tuple[int, ...]
    merged_j: int
    q0: int
    q1: int


@dataclass(frozen=True)
class MergeLog:
    """Eliminations in application order; lifts reduced solutions back."""

    entries: tuple[MergeEntry, ...]

    def __bool__(self) -> bool:
        return bool(self.entries)

    def lift(self, x: Assignment) -> Assignment:
        """Map a solution of the reduced instance to one of the original.

        The merged value simulates p1/q1 when both halves are used and p0/q0
        otherwise, which preserves the assignment's cost exactly.
        """
        out = list(x)
        for e in reversed(self.entries):
            yi, yj = out[e.var_i], out[e.var_j]
            if yi == e.merged_i and yj == e.merged_j:
                out[e.var_i], out[e.var_j] = e.p1, e.q1
            elif yi == e.merged_i:
                out[e.var_i] = e.p0
                out[e.var_j] = e.kept_j[yj]
            elif yj == e.merged_j:
                out[e.var_j] = e.q0
                out[e.var_i] = e.kept_i[yi]
            else:
                out[e.var_i] = e.kept_i[yi]
                out[e.var_j] = e.kept_j[yj]
        return tuple(out)


def _argmin_unary(instance: VcspInstance, var: int, values: tuple[int, ...]) -> int:
    best = values[0]
    for v in values[1:]:
        if instance.unary_cost(var, v) < instance.unary_cost(var, best):
            best = v
    return best


def _substitute(
    instance: VcspInstance, i: int, j: int, s_i: tuple[int, ...], s_j: tuple[int, ...]
) -> tuple[VcspInstance, MergeEntry]:
    p0 = _argmin_unary(instance, i, s_i)
    q0 = _argmin_unary(instance, j, s_j)
    p1, q1 = min(
        ((a, b) for a in s_i for b in s_j),
        key=lambda ab: (
            instance.unary_cost(i, ab[0])
            + instance.unary_cost(j, ab[1])
            + instance.binary_cost(i, j, ab[0], ab[1]),
            ab,
        ),
    )

    kept_i = tuple(v for v in range(instance.domains[i]) if v not in s_i)
    kept_j = tuple(v for v in range(instance.domains[j]) if v not in s_j)
    merged_i, merged_j = len(kept_i), len(kept_j)
    new_index_i = {old: new for new, old in enumerate(kept_i)}
    new_index_j = {old: new for new, old in enumerate(kept_j)}

    def remap(var: int, val: int) -> int | None:
        if var == i:
            return new_index_i.get(val)
        if var == j:
            return new_index_j.get(val)
        return val

    domains = list(instance.domains)
    domains[i] = merged_i + 1
    domains[j] = merged_j + 1

    unary: dict[tuple[int, int], Cost] = {}
    for (v, a), c in instance.unary_items():
        na = remap(v, a)
        if na is not None:
            unary[(v, na)] = c
    unary[(i, merged_i)] = instance.unary_cost(i, p0)
    unary[(j, merged_j)] = instance.unary_cost(j, q0)

    binary: dict[tuple[int, int, int, int], Cost] = {}
    for (x, y, a, b), c in instance.binary_items():
        na, nb = remap(x, a), remap(y, b)
        if na is not None and nb is not None:
            binary[(x, y, na, nb)] = c
    for g_new, g_old in enumerate(kept_j):
        binary[(i, j, merged_i, g_new)] = instance.binary_cost(i, j, p0, g_old)
    for f_new, f_old in enumerate(kept_i):
        binary[(i, j, f_new, merged_j)] = instance.binary_cost(i, j, f_old, q0)
    binary[(i, j, merged_i, merged_j)] = (
        instance.binary_cost(i, j, p1, q1)
        + (instance.unary_cost(i, p1) - instance.unary_cost(i, p0))
        + (instance.unary_cost(j, q1) - instance.unary_cost(j, q0))
    )
    for k in range(instance.n):
        if k in (i, j):
            continue
        for u in range(instance.domains[k]):
            c = instance.binary_cost(i, k, p0, u)
            if c != ZERO:
                binary[(i, k, merged_i, u)] = c  # constructor normalizes orientation
            c = instance.binary_cost(j, k, q0, u)
            if c != ZERO:
                binary[(j, k, merged_j, u)] = c

    reduced = VcspInstance(domains, unary, binary)
    entry = MergeEntry(i, j, kept_i, merged_i, p0, p1, kept_j, merged_j, q0, q1)
    return reduced, entry


def eliminate_z(instance: VcspInstance) -> tuple[VcspInstance, MergeLog]:
    """Merge away every Z-configuration; requires a joint-winner instance.

    Returns the Z-free reduced instance and a log sufficient to lift any of
    its optimal solutions back to an optimal solution of the input.  Raises
    JwpPreconditionError if the closure verification ever fails, which
    signals the input was not joint-winner.
    """
    entries: list[MergeEntry] = []
    inst = instance
    guard = sum(instance.domains) + 1
    while True:
        z = first_z_configuration(inst)
        if z is None:
            break
        s_i, s_j = expand_independent_pair(inst, z)
        inst, entry = _substitute(inst, z.var_i, z.var_j, s_i, s_j)
        entries.append(entry)
        guard -= 1
        if guard < 0:
            raise InternalConsistencyError("Z-elimination failed to terminate")
    return inst, MergeLog(tuple(entries))
