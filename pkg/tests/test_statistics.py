from fractions import Fraction as F

import pytest
from hypothesis import given, settings

from birnbaum import DomainError, condition, enumerate_ancillaries, is_ancillary, is_sufficient, minimal_sufficient
from birnbaum.report import TABLE2, TABLE3, example1_workspace
from birnbaum.statistics import StatisticPartition, identity_partition, mle_distribution, one_block

from oracles import all_ancillaries, as_set, naive_partitions, sufficient_oracle
from strategies import experiments


@pytest.fixture
def ex1():
    return example1_workspace()


def test_example1_statistics_are_ancillary(ex1):
    e = ex1.experiment("E")
    u = is_ancillary(e, ex1.statistic("U"))
    v = is_ancillary(e, ex1.statistic("V"))
    assert u and v
    assert u.witness["distribution"] == {0: F(1, 3), 1: F(2, 3)}
    assert v.witness["distribution"] == {0: F(1, 2), 1: F(1, 2)}


def test_conditioning_by_hand(ex1):
    # Table 1 rows divided by the block mass, computed without the library
    e = ex1.experiment("E")
    cu = condition(e, ex1.statistic("U"), 1)
    assert cu.outcomes == TABLE2["outcomes"]
    assert cu.pmf[0] == (F(1, 6) / F(1, 3), F(1, 6) / F(1, 3))
    assert cu.pmf[1] == (F(1, 12) / F(1, 3), F(3, 12) / F(1, 3))
    cv = condition(e, ex1.statistic("V"), "1")
    assert cv.pmf == TABLE3["rows"]


def test_only_u_and_v_are_ancillary(ex1):
    found = enumerate_ancillaries(ex1.experiment("E"))
    got = {as_set(t.blocks) for t in found}
    assert got == {as_set(ex1.statistic("U").blocks), as_set(ex1.statistic("V").blocks)}
    assert [t.id for t in found] == ["anc1", "anc2"]


def test_mle_accuracy_tables(ex1):
    mu = mle_distribution(ex1.experiment("E_u1"))
    mv = mle_distribution(ex1.experiment("E_v1"))
    assert mu["1"][("1",)] == F(1, 2)
    assert mu["2"][("2",)] == F(3, 4)
    assert mv["1"][("1",)] == F(1, 3)
    assert mv["2"][("1",)] == F(1, 6)


def test_not_ancillary(ex1):
    e = ex1.experiment("E")
    t = StatisticPartition.of("W", [("(1,1)",), ("(1,2)", "(2,1)", "(2,2)")], "E")
    v = is_ancillary(e, t)
    assert not v and v.witness["block"] == 0
    with pytest.raises(DomainError) as exc:
        condition(e, t, 1)
    assert exc.value.code == "NOT_ANCILLARY"


def test_condition_errors_and_whole_space(ex1):
    e = ex1.experiment("E")
    with pytest.raises(DomainError) as exc:
        condition(e, ex1.statistic("U"), 3)
    assert exc.value.code == "UNKNOWN_BLOCK"
    assert condition(e, one_block(e), 1) is e


def test_not_a_partition(ex1):
    e = ex1.experiment("E")
    bad = StatisticPartition.of("B", [("(1,1)",), ("(1,1)", "(1,2)")], "E")
    with pytest.raises(DomainError) as exc:
        is_sufficient(e, bad)
    assert exc.value.code == "NOT_A_PARTITION"


def test_too_large():
    from birnbaum.methods import binomial_experiment
    with pytest.raises(DomainError) as exc:
        enumerate_ancillaries(binomial_experiment(12))
    assert exc.value.code == "TOO_LARGE"


def test_sufficiency_failure_witness(ex1):
    e = ex1.experiment("E")
    v = is_sufficient(e, one_block(e))
    assert not v
    assert set(v.witness) == {"block", "outcome", "params", "conditionals"}
    assert is_sufficient(e, identity_partition(e))


@settings(max_examples=80, deadline=None)
@given(experiments(max_outcomes=5))
def test_ancillaries_match_brute_force(e):
    got = [as_set(t.blocks) for t in enumerate_ancillaries(e)]
    assert len(got) == len(set(got))
    assert set(got) == all_ancillaries(e)


@settings(max_examples=80, deadline=None)
@given(experiments(max_outcomes=5))
def test_minimal_sufficient_is_sufficient_and_coarsest(e):
    m = minimal_sufficient(e)
    assert is_sufficient(e, m)
    assert sufficient_oracle(e, m.blocks)
    block_of = {x: i for i, b in enumerate(m.blocks) for x in b}
    for p in naive_partitions(e.outcomes):
        if sufficient_oracle(e, p):
            # every sufficient partition refines the minimal one
            assert all(len({block_of[x] for x in b}) == 1 for b in p)
        assert bool(is_sufficient(e, StatisticPartition.of("p", p))) == sufficient_oracle(e, p)


@settings(max_examples=50, deadline=None)
@given(experiments(max_outcomes=5))
def test_conditioning_on_any_ancillary_gives_valid_experiments(e):
    for t in enumerate_ancillaries(e):
        for bi in range(len(t.blocks)):
            c = condition(e, t, bi + 1)
            assert all(sum(row) == 1 for row in c.pmf)
