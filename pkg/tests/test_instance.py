import random

import pytest

from softcsp import Cost, INFINITY, VcspInstance, brute_force_solve, combine
from softcsp.errors import EmptyDomainError, InvalidAssignmentError

from helpers import rand_vcsp


def worked_example() -> VcspInstance:
    # 3 variables, domains {a,b},{a,b},{a}; four non-zero binary costs
    return VcspInstance(
        [2, 2, 1],
        binary={(0, 1, 0, 0): 2, (0, 2, 0, 0): 1, (1, 2, 0, 0): 1, (0, 1, 1, 1): 1},
    )


def test_evaluate_worked_example():
    assert worked_example().evaluate((0, 0, 0)) == Cost(4)


def test_evaluate_all_zero_instance():
    inst = VcspInstance([2, 3, 2])
    assert inst.evaluate((1, 2, 0)) == Cost(0)


def test_evaluate_saturates_on_infinity():
    inst = VcspInstance([2, 2], unary={(0, 1): 3}, binary={(0, 1, 1, 1): INFINITY})
    assert inst.evaluate((1, 1)) == INFINITY


def test_scope_symmetry():
    a = VcspInstance([2, 3], binary={(0, 1, 1, 2): 5})
    b = VcspInstance([2, 3], binary={(1, 0, 2, 1): 5})
    for x in ((0, 0), (1, 2), (0, 2)):
        assert a.evaluate(x) == b.evaluate(x)
    assert a.binary_cost(1, 0, 2, 1) == Cost(5)


def test_conflicting_duplicate_rejected_identical_allowed():
    with pytest.raises(ValueError):
        VcspInstance([2, 2], binary={(0, 1, 0, 0): 1, (1, 0, 0, 0): 2})
    inst = VcspInstance([2, 2], binary={(0, 1, 0, 0): 1, (1, 0, 0, 0): 1})
    assert inst.binary_cost(0, 1, 0, 0) == Cost(1)


def test_validation_errors():
    with pytest.raises(EmptyDomainError):
        VcspInstance([2, 0])
    with pytest.raises(ValueError):
        VcspInstance([2, 2], binary={(0, 0, 0, 1): 1})
    with pytest.raises(InvalidAssignmentError):
        VcspInstance([2, 2], unary={(0, 5): 1})
    inst = VcspInstance([2, 2])
    with pytest.raises(InvalidAssignmentError):
        inst.evaluate((0,))
    with pytest.raises(InvalidAssignmentError):
        inst.evaluate((0, 9))


def test_monotone_under_cost_increase():
    rng = random.Random(0)
    for trial in range(20):
        inst = rand_vcsp(rng, 3, 2)
        entries = list(inst.binary_items())
        if not entries:
            continue
        key, cost = entries[rng.randrange(len(entries))]
        if cost.is_infinite:
            continue
        bumped = dict(inst.binary_items())
        bumped[key] = cost + 1
        higher = VcspInstance(inst.domains, dict(inst.unary_items()), bumped)
        for _ in range(10):
            x = tuple(rng.randrange(d) for d in inst.domains)
            assert inst.evaluate(x) <= higher.evaluate(x)


def test_restrict_identity():
    inst = worked_example()
    restricted, remap = inst.restrict_domains({})
    assert restricted.domains == inst.domains
    assert remap == (tuple(range(2)), tuple(range(2)), tuple(range(1)))
    assert dict(restricted.binary_items()) == dict(inst.binary_items())


def test_restrict_matches_brute_force():
    # optimum of the restricted instance equals the restricted brute-force optimum
    inst = worked_example()
    restricted, remap = inst.restrict_domains({0: [0]})
    _, got = brute_force_solve(restricted)
    best = min(
        inst.evaluate((0, b, 0)) for b in range(2)
    )
    assert got == best


def test_restrict_preserves_costs_under_remap():
    rng = random.Random(3)
    for _ in range(15):
        inst = rand_vcsp(rng, 4, 3)
        keep = {i: sorted(rng.sample(range(3), rng.randint(1, 3))) for i in range(4)}
        restricted, remap = inst.restrict_domains(keep)
        for _ in range(12):
            y = tuple(rng.randrange(d) for d in restricted.domains)
            x = tuple(remap[i][v] for i, v in enumerate(y))
            assert restricted.evaluate(y) == inst.evaluate(x)


def test_restrict_singletons_single_assignment():
    inst = worked_example()
    restricted, _ = inst.restrict_domains({0: [1], 1: [0], 2: [0]})
    assert restricted.domains == (1, 1, 1)
    assert restricted.assignment_count() == 1


def test_restrict_empty_subset_rejected():
    with pytest.raises(EmptyDomainError):
        worked_example().restrict_domains({1: []})


def test_combine_pointwise():
    a = VcspInstance([2, 2], unary={(0, 0): 1}, binary={(0, 1, 0, 0): 2})
    b = VcspInstance([2, 2], unary={(0, 0): 2}, binary={(0, 1, 1, 1): INFINITY})
    c = combine(a, b)
    assert c.unary_cost(0, 0) == Cost(3)
    assert c.binary_cost(0, 1, 0, 0) == Cost(2)
    assert c.evaluate((1, 1)) == INFINITY
