"""Exhaustive oracles: ground truth on small instances, caps, immunity."""

import pytest
from hypothesis import given, settings, strategies as st

from groupident import rules
from groupident.model import (
    AttackInstance,
    Rule,
    consent,
    make_society,
    random_instance,
    verify_solution,
)
from groupident.oracle import (
    DEFAULT_LIMITS,
    NoWitnessFound,
    OracleCapError,
    OracleLimits,
    SusceptibilityWitness,
    bitmask_qualified,
    brute_bribery,
    brute_control,
    brute_force,
    brute_microbribery,
    immunity_check,
    immunity_search,
)

EX2 = make_society([
    [1, -1, -1, 1, 1, -1],
    [1, 1, -1, 1, 1, -1],
    [1, 1, 1, 1, 1, -1],
    [1, 1, 1, -1, -1, 1],
    [1, 1, 1, -1, -1, 1],
    [1, 1, 1, -1, -1, -1],
])


def test_control_oracle_finds_the_counterexample_deletion():
    inst = AttackInstance(society=EX2, rule=Rule("csr"), kind="delete",
                          aplus=frozenset(), aminus=frozenset({5}), budget=2)
    verdict = brute_control(inst)
    assert verdict.answer
    assert verdict.witness.U == frozenset({3, 4})
    assert verify_solution(inst, verdict.witness).valid
    tight = AttackInstance(society=EX2, rule=Rule("csr"), kind="delete",
                           aplus=frozenset(), aminus=frozenset({5}), budget=1)
    assert not brute_control(tight).answer


def test_add_with_full_base_set_only_checks_the_empty_addition():
    soc = make_society([[1, 1], [-1, -1]])
    met = AttackInstance(society=soc, rule=Rule("lsr"), kind="add",
                         aplus=frozenset({0}), aminus=frozenset(),
                         budget=2, T=frozenset({0, 1}))
    verdict = brute_control(met)
    assert verdict.answer and verdict.witness.U == frozenset()
    hostile = make_society([[-1, -1], [-1, -1]])
    unmet = AttackInstance(society=hostile, rule=Rule("lsr"), kind="add",
                           aplus=frozenset({1}), aminus=frozenset(),
                           budget=2, T=frozenset({0, 1}))
    assert not brute_control(unmet).answer


def test_add_oracle_builds_a_qualification_chain():
    # a1 cannot enter alone; adding a0 gives the liberal closure a path
    soc = make_society([[1, 1], [-1, -1]])
    inst = AttackInstance(society=soc, rule=Rule("lsr"), kind="add",
                          aplus=frozenset({1}), aminus=frozenset(),
                          budget=1, T=frozenset({1}))
    verdict = brute_control(inst)
    assert verdict.answer and verdict.witness.U == frozenset({0})


def test_bribery_oracle_single_bribe_destroys_under_iterative_consensus():
    soc = make_society([[1] * 4] * 4)
    for name in ("ic", "2ic"):
        inst = AttackInstance(society=soc, rule=Rule(name), kind="bribery",
                              aplus=frozenset(), aminus=frozenset({2}),
                              budget=1)
        verdict = brute_bribery(inst)
        assert verdict.answer
        assert verdict.cost == 1
        assert verify_solution(inst, verdict.witness).valid


def test_bribery_oracle_zero_budget_is_no():
    soc = make_society([[-1] * 3] * 3)
    inst = AttackInstance(society=soc, rule=Rule("lsr"), kind="bribery",
                          aplus=frozenset({0}), aminus=frozenset(), budget=0)
    assert not brute_bribery(inst).answer


def test_microbribery_oracle_single_flip_self_qualification():
    # empty consensus seed, so the liberal two-stage rule admits exactly the
    # self-qualifiers; one flip on the diagonal is enough
    soc = make_society([[-1, 1, -1], [-1, -1, 1], [1, -1, -1]])
    inst = AttackInstance(society=soc, rule=Rule("2lic"), kind="microbribery",
                          aplus=frozenset({0}), aminus=frozenset(), budget=1)
    verdict = brute_microbribery(inst)
    assert verdict.answer
    assert verdict.witness.flips == frozenset({(0, 0)})


def test_oracle_caps_refuse_rather_than_truncate():
    big = make_society([[1] * 8] * 8)
    inst = AttackInstance(society=big, rule=Rule("lsr"), kind="delete",
                          aplus=frozenset(), aminus=frozenset({0}), budget=1)
    with pytest.raises(OracleCapError):
        brute_control(inst)
    soc6 = make_society([[1] * 6] * 6)
    bb = AttackInstance(society=soc6, rule=Rule("lsr"), kind="bribery",
                        aplus=frozenset(), aminus=frozenset({0}), budget=1)
    with pytest.raises(OracleCapError):
        brute_bribery(bb)
    # a NO under the flip cap with budget to spare must refuse, not certify
    mb = AttackInstance(society=make_society([[-1] * 3] * 3), rule=consent(5, 1),
                        kind="microbribery", aplus=frozenset({0}),
                        aminus=frozenset(), budget=5)
    with pytest.raises(OracleCapError):
        brute_microbribery(mb)
    # a YES inside the cap is sound even with budget left over
    easy = AttackInstance(society=make_society([[-1] * 3] * 3), rule=Rule("2lic"),
                          kind="microbribery", aplus=frozenset({0}),
                          aminus=frozenset(), budget=5)
    assert brute_microbribery(easy).answer
    # wider limits admit the same instances and run to certified exhaustion
    wide = OracleLimits(control_max_n=9, bribery_max_n=6, micro_max_flips=6)
    assert brute_control(inst, wide).answer is False
    assert brute_bribery(bb, wide).answer is False
    assert brute_microbribery(mb, wide).answer is False


def test_brute_force_dispatches_on_kind():
    soc = make_society([[1, 1], [1, 1]])
    for kind in ("delete", "bribery", "microbribery"):
        inst = AttackInstance(society=soc, rule=Rule("csr"), kind=kind,
                              aplus=frozenset(), aminus=frozenset({1}),
                              budget=1)
        v = brute_force(inst)
        assert v.answer in (True, False)


@given(st.integers(0, 10 ** 6))
@settings(max_examples=25, deadline=None)
def test_oracle_witnesses_are_deterministic_and_verify(seed):
    inst = random_instance(seed, 4, Rule("csr"), "delete", "destructive")
    a = brute_force(inst)
    b = brute_force(inst)
    assert a.answer == b.answer
    if a.answer:
        assert a.witness == b.witness
        assert verify_solution(inst, a.witness).valid


@given(st.integers(0, 10 ** 6))
@settings(max_examples=15, deadline=None)
def test_unpriced_bribery_yes_is_monotone_in_the_budget(seed):
    inst = random_instance(seed, 4, Rule("2ic"), "bribery", "constructive")
    if inst.budget >= 4:
        return
    bigger = AttackInstance(
        society=inst.society, rule=inst.rule, kind=inst.kind,
        aplus=inst.aplus, aminus=inst.aminus, budget=inst.budget + 1)
    if brute_bribery(inst).answer:
        assert brute_bribery(bigger).answer


RULES = [consent(1, 1), consent(2, 2), Rule("lsr"), Rule("csr"),
         Rule("ic"), Rule("2ic"), Rule("2lic")]


@given(st.sampled_from(RULES), st.data())
@settings(max_examples=120)
def test_bitmask_evaluation_matches_the_reference_rules(rule, data):
    n = data.draw(st.integers(1, 5))
    phi = [[data.draw(st.sampled_from((1, -1))) for _ in range(n)]
           for _ in range(n)]
    soc = make_society(phi)
    members = data.draw(st.sets(st.integers(0, n - 1), min_size=1))
    assert bitmask_qualified(rule, soc, frozenset(members)) == \
        rules.evaluate(rule, soc, frozenset(members))


def test_immunity_check_corroborates_an_immune_cell():
    rule = consent(1, 1)

    def sampler(i):
        return random_instance(f"imm:{i}", 4, rule, "delete", "constructive")

    res = immunity_check(rule, "delete", "constructive", sampler, trials=300)
    assert isinstance(res, NoWitnessFound)
    assert res.trials > 0


def test_immunity_check_finds_a_witness_in_a_susceptible_cell():
    rule = Rule("csr")

    def sampler(i):
        return random_instance(f"sus:{i}", 4, rule, "relaxed-delete",
                               "general")

    res = immunity_check(rule, "relaxed-delete", "general", sampler,
                         trials=400)
    assert isinstance(res, SusceptibilityWitness)
    assert verify_solution(res.instance, res.solution).valid


def test_immunity_search_is_exhaustive_at_tiny_sizes():
    # consent(1,1) cannot be attacked constructively by deletion: deleting
    # voters never changes anyone's own vote
    for n in (1, 2):
        assert immunity_search(consent(1, 1), "delete", "constructive", n) is None
    found = immunity_search(Rule("csr"), "relaxed-delete", "general", 3)
    assert found is not None
    inst, sol = found
    assert verify_solution(inst, sol).valid
    with pytest.raises(OracleCapError):
        immunity_search(consent(1, 1), "delete", "constructive", 4)


def test_default_limits_are_the_documented_desk_scale():
    assert DEFAULT_LIMITS.control_max_n == 7
    assert DEFAULT_LIMITS.bribery_max_n == 5
    assert DEFAULT_LIMITS.micro_max_flips == 4
