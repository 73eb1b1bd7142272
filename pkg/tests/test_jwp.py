import random
from fractions import Fraction

import pytest

from softcsp import (
    Cost,
    INFINITY,
    VcspInstance,
    ZConfiguration,
    brute_force_solve,
    check_jwp,
    eliminate_z,
    expand_independent_pair,
    find_z_configurations,
    first_z_configuration,
    gen_random_jwp,
    is_zfree,
)
from softcsp.errors import JwpPreconditionError

from helpers import plant_z_jwp, rand_vcsp, reference_check_jwp


def worked_example() -> VcspInstance:
    return VcspInstance(
        [2, 2, 1],
        binary={(0, 1, 0, 0): 2, (0, 2, 0, 0): 1, (1, 2, 0, 0): 1, (0, 1, 1, 1): 1},
    )


# -- recognition -----------------------------------------------------------------


def test_worked_example_passes():
    assert check_jwp(worked_example()) is None


def test_conflict_triangle_fails():
    # multiset {0, inf, inf} across three distinct scopes
    inst = VcspInstance(
        [1, 1, 1], binary={(0, 1, 0, 0): 0, (0, 2, 0, 0): INFINITY, (1, 2, 0, 0): INFINITY}
    )
    witness = check_jwp(inst)
    assert witness is not None
    assert witness.variables == (0, 1, 2)
    assert sorted(witness.costs) == [Cost(0), INFINITY, INFINITY]


def test_vacuous_below_three_variables():
    assert check_jwp(VcspInstance([4, 4], binary={(0, 1, 0, 0): 7})) is None
    assert check_jwp(VcspInstance([5])) is None


def test_unary_costs_ignored():
    inst = VcspInstance([2, 2, 2], unary={(0, 0): INFINITY, (1, 1): 3})
    assert check_jwp(inst) is None


def test_cross_check_against_reference_implementation():
    rng = random.Random(42)
    for _ in range(60):
        inst = rand_vcsp(rng, rng.randint(3, 4), rng.randint(2, 3), p_inf=0.15)
        fast = check_jwp(inst)
        slow = reference_check_jwp(inst)
        assert (fast is None) == (slow is None)
        if fast is not None:
            # both return the first violation in lexicographic scan order
            assert fast == slow


# -- Z-configurations ------------------------------------------------------------


def test_z_configuration_definition_example():
    inst = VcspInstance(
        [2, 2], binary={(0, 1, 0, 0): 1, (0, 1, 1, 0): 1, (0, 1, 1, 1): 1}
    )
    configs = find_z_configurations(inst)
    assert configs == [ZConfiguration(0, 1, 0, 1, 0, 1)]
    assert first_z_configuration(inst) == configs[0]
    assert not is_zfree(inst)


def test_constant_constraint_has_no_z():
    inst = VcspInstance(
        [2, 2], binary={(0, 1, a, b): 3 for a in range(2) for b in range(2)}
    )
    assert find_z_configurations(inst) == []
    assert is_zfree(inst)


def test_first_agrees_with_find_on_random_instances():
    rng = random.Random(6)
    for _ in range(40):
        inst = rand_vcsp(rng, rng.randint(2, 4), rng.randint(2, 4), p_inf=0.1)
        all_configs = find_z_configurations(inst)
        first = first_z_configuration(inst)
        assert (first is None) == (not all_configs)
        if first is not None:
            assert first in all_configs


# -- independent pair expansion ---------------------------------------------------


def test_expand_keeps_seed_when_nothing_qualifies():
    inst = VcspInstance(
        [2, 2], binary={(0, 1, 0, 0): 1, (0, 1, 1, 0): 1, (0, 1, 1, 1): 1}
    )
    s_i, s_j = expand_independent_pair(inst, ZConfiguration(0, 1, 0, 1, 0, 1))
    assert s_i == (0, 1) and s_j == (0, 1)


def test_expand_rejects_fake_seed():
    inst = VcspInstance([2, 2])
    with pytest.raises(ValueError):
        expand_independent_pair(inst, ZConfiguration(0, 1, 0, 1, 0, 1))


def test_expand_grows_to_definitional_closure():
    rng = random.Random(12)
    for seed in range(25):
        inst = plant_z_jwp(rng, 4, 3, seed=seed)
        assert check_jwp(inst) is None
        z = first_z_configuration(inst)
        assert z is not None
        s_i, s_j = expand_independent_pair(inst, z)
        i, j = z.var_i, z.var_j
        # independence of the other variables, straight from the definition
        for k in range(inst.n):
            if k in (i, j):
                continue
            for e in range(inst.domains[k]):
                vals = {inst.binary_cost(i, k, a, e) for a in s_i}
                vals |= {inst.binary_cost(j, k, c, e) for c in s_j}
                assert len(vals) == 1
        # independence of the other domain values
        for f in range(inst.domains[i]):
            if f not in s_i:
                assert len({inst.binary_cost(i, j, f, c) for c in s_j}) == 1
        for g in range(inst.domains[j]):
            if g not in s_j:
                assert len({inst.binary_cost(i, j, a, g) for a in s_i}) == 1


def test_expand_flags_non_jwp_instance():
    # Z-configuration on (0,1) whose sub-domains interact with variable 2
    inst = VcspInstance(
        [2, 2, 2],
        binary={
            (0, 1, 0, 0): 2,
            (0, 1, 1, 0): 2,
            (0, 1, 1, 1): 2,
            (0, 2, 0, 0): 5,  # row a differs from row b towards variable 2
        },
    )
    z = first_z_configuration(inst)
    assert z is not None and (z.var_i, z.var_j) == (0, 1)
    assert check_jwp(inst) is not None
    with pytest.raises(JwpPreconditionError):
        expand_independent_pair(inst, z)


# -- elimination -------------------------------------------------------------------


def test_zfree_input_unchanged():
    inst = worked_example()
    reduced, log = eliminate_z(inst)
    assert not log
    assert reduced.domains == inst.domains
    assert dict(reduced.binary_items()) == dict(inst.binary_items())


def test_elimination_preserves_optimum_and_property():
    rng = random.Random(99)
    for seed in range(40):
        n, d = rng.randint(2, 5), rng.randint(2, 4)
        inst = plant_z_jwp(rng, n, d, seed=seed + 1000)
        assert check_jwp(inst) is None
        reduced, log = eliminate_z(inst)
        assert is_zfree(reduced)
        assert find_z_configurations(reduced) == []
        assert check_jwp(reduced) is None
        _, before = brute_force_solve(inst)
        rx, after = brute_force_solve(reduced)
        assert before == after
        lifted = log.lift(rx)
        assert inst.evaluate(lifted) == after


def test_elimination_idempotent():
    rng = random.Random(55)
    for seed in range(10):
        inst = plant_z_jwp(rng, 4, 3, seed=seed + 77)
        once, log1 = eliminate_z(inst)
        twice, log2 = eliminate_z(once)
        assert not log2
        assert twice.domains == once.domains
        assert dict(twice.binary_items()) == dict(once.binary_items())
        assert dict(twice.unary_items()) == dict(once.unary_items())


def test_merged_value_costs_follow_the_substitution_rule():
    # block on (0,1): unique low corner at (a=0, d=1); no other variables
    inst = VcspInstance(
        [3, 2],
        unary={(0, 0): 2, (0, 1): 1, (0, 2): 4, (1, 0): 1, (1, 1): 3},
        binary={
            (0, 1, 0, 0): 2,
            (0, 1, 1, 0): 2,
            (0, 1, 1, 1): 2,
            (0, 1, 2, 0): 5,
            (0, 1, 2, 1): 1,
        },
    )
    z = first_z_configuration(inst)
    s_i, s_j = expand_independent_pair(inst, z)
    assert s_i == (0, 1, 2) and s_j == (0, 1)  # value 2's row also varies
    reduced, log = eliminate_z(inst)
    assert reduced.domains == (1, 1)
    entry = log.entries[0]
    # p0/q0 minimize the unary costs over the merged sub-domains
    assert entry.p0 == 1 and entry.q0 == 0
    # (p1,q1) minimizes c_i + c_j + c_ij: value pair (2,1) scores 4+3+1 = 8,
    # (1,0) scores 1+1+2 = 4, which wins
    assert (entry.p1, entry.q1) == (1, 0)
    # merged pair cost keeps c_i(p)+c_ij(p,q)+c_j(q) = that minimum sum
    total = (
        reduced.unary_cost(0, 0)
        + reduced.unary_cost(1, 0)
        + reduced.binary_cost(0, 1, 0, 0)
    )
    assert total == Cost(4)


def test_random_jwp_generator_is_jwp_and_zfree():
    for seed in range(25):
        inst = gen_random_jwp(4, 3, [1, "3/2", 4], seed=seed)
        assert check_jwp(inst) is None
        assert is_zfree(inst)
