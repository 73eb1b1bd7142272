import itertools
import random

import pytest

from softcsp import (
    Cost,
    INFINITY,
    LexInterval,
    VcspInstance,
    brute_force_solve,
    combine,
    conservative_minimize,
    dead_end_solutions,
    decompose_interval,
    solve_via_dead_ends,
)
from softcsp.errors import InvalidAssignmentError, OracleInconsistencyError

from helpers import descriptor_members, interval_members, rand_crisp, rand_vcsp


def test_interval_validation():
    with pytest.raises(InvalidAssignmentError):
        LexInterval((2, 2), (1, 0), (0, 1))  # lower above upper
    with pytest.raises(InvalidAssignmentError):
        LexInterval((2, 2), (0,), (1, 1))
    with pytest.raises(InvalidAssignmentError):
        LexInterval((2, 2), (0, 0), (1, 1), orderings=((0, 0), (0, 1)))
    # under ordering 1<0 on the first variable, (1,…) precedes (0,…)
    LexInterval((2, 2), (1, 0), (0, 1), orderings=((1, 0), (0, 1)))


def test_single_point_interval():
    iv = LexInterval((2, 3, 2), (1, 2, 0), (1, 2, 0))
    descs = decompose_interval(iv)
    assert descs == [(frozenset({1}), frozenset({2}), frozenset({0}))]


def test_two_variable_example():
    iv = LexInterval((2, 2), (0, 0), (1, 0))
    union = set()
    for d in decompose_interval(iv):
        members = descriptor_members(d)
        assert not (union & members)
        union |= members
    assert union == {(0, 0), (0, 1), (1, 0)}


def test_full_space_interval():
    for domains in ((2, 2), (3, 2, 3), (2, 3, 2)):
        iv = LexInterval(domains, tuple([0] * len(domains)), tuple(d - 1 for d in domains))
        union = set()
        for d in decompose_interval(iv):
            members = descriptor_members(d)
            assert not (union & members)
            union |= members
        assert union == set(itertools.product(*(range(d) for d in domains)))


@pytest.mark.parametrize("domains", [(2, 2), (3, 3), (2, 3, 2), (3, 2, 3), (2, 2, 2, 3)])
def test_decomposition_exhaustive(domains):
    space = sorted(itertools.product(*(range(d) for d in domains)))
    for lo_idx in range(len(space)):
        for hi_idx in range(lo_idx, len(space), max(1, len(space) // 17)):
            iv = LexInterval(domains, space[lo_idx], space[hi_idx])
            union = set()
            for d in decompose_interval(iv):
                members = descriptor_members(d)
                assert not (union & members), "descriptors overlap"
                union |= members
            assert union == interval_members(iv)


def test_decomposition_respects_custom_orderings():
    rng = random.Random(7)
    domains = (3, 2, 3)
    for _ in range(30):
        orderings = tuple(
            tuple(rng.sample(range(d), d)) for d in domains
        )
        pts = [tuple(rng.randrange(d) for d in domains) for _ in range(2)]
        pos = [
            {v: p for p, v in enumerate(o)} for o in orderings
        ]
        keyed = sorted(pts, key=lambda x: tuple(pos[i][v] for i, v in enumerate(x)))
        iv = LexInterval(domains, keyed[0], keyed[1], orderings=orderings)
        union = set()
        for d in decompose_interval(iv):
            members = descriptor_members(d)
            assert not (union & members)
            union |= members
        assert union == interval_members(iv)


# -- dead-end enumerator contract -----------------------------------------------


def test_dead_end_solutions_shape():
    crisp = VcspInstance([2, 2, 2], binary={(0, 2, 0, 0): INFINITY})
    sols = dead_end_solutions(crisp, 0, 2, 0, 0)
    assert all(len(p) == 3 and p[0] == 0 and p[2] == 0 for p in sols)
    # constraints from variables before j=0 into k: none, so both middle values
    assert len(sols) == 2


def test_dead_end_solutions_discards_late_constraints():
    # constraint (1,2) is discarded when enumerating the (0,2) dead end
    crisp = VcspInstance(
        [2, 2, 2],
        binary={(0, 2, 0, 0): INFINITY, (1, 2, 1, 0): INFINITY},
    )
    sols = dead_end_solutions(crisp, 0, 2, 0, 0)
    assert (0, 1, 0) in sols  # kept despite violating (1,2)


# -- the solver ------------------------------------------------------------------


def test_no_infinite_entries_reduces_to_full_space():
    crisp = VcspInstance([2, 2])
    fin = VcspInstance([2, 2], unary={(0, 0): 2, (1, 1): 1})
    x, c = solve_via_dead_ends(crisp, fin, conservative_minimize, dead_end_solutions)
    assert (x, c) == ((1, 0), Cost(0))


def test_everything_forbidden_reports_infinite():
    crisp = VcspInstance(
        [2, 2], binary={(0, 1, a, b): INFINITY for a in range(2) for b in range(2)}
    )
    fin = VcspInstance([2, 2])
    x, c = solve_via_dead_ends(crisp, fin, conservative_minimize, dead_end_solutions)
    assert x is None and c == INFINITY


def test_unary_infinite_values_are_excluded():
    crisp = VcspInstance([2, 2], unary={(0, 0): INFINITY})
    fin = VcspInstance([2, 2], unary={(0, 1): 3, (1, 0): 1})
    x, c = solve_via_dead_ends(crisp, fin, conservative_minimize, dead_end_solutions)
    assert x == (1, 1) and c == Cost(3)


def test_matches_brute_force_on_random_instances():
    rng = random.Random(19)
    for trial in range(40):
        n, d = rng.randint(2, 4), rng.randint(2, 3)
        crisp = rand_crisp(rng, n, d, p_inf=rng.choice((0.1, 0.3)))
        fin = VcspInstance(
            [d] * n,
            {
                (i, a): rng.randint(0, 4)
                for i in range(n)
                for a in range(d)
                if rng.random() < 0.6
            },
            {
                (i, j, a, b): rng.randint(0, 3)
                for i in range(n)
                for j in range(i + 1, n)
                for a in range(d)
                for b in range(d)
                if rng.random() < 0.4
            },
        )
        got_x, got_c = solve_via_dead_ends(
            crisp, fin, conservative_minimize, dead_end_solutions
        )
        _, want = brute_force_solve(combine(crisp, fin))
        assert got_c == want
        if got_c.is_finite:
            assert crisp.evaluate(got_x).is_finite
            assert fin.evaluate(got_x) == got_c


def test_lying_solver_caught():
    crisp = VcspInstance([2, 2], binary={(0, 1, 1, 1): INFINITY})
    fin = VcspInstance([2, 2])

    def liar(instance, allowed):
        return (1, 1), Cost(0)

    with pytest.raises(OracleInconsistencyError):
        solve_via_dead_ends(crisp, fin, liar, dead_end_solutions)
