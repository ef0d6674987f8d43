"""Social rule semantics: pinned worked examples plus structural properties."""

import pytest
from hypothesis import given, settings, strategies as st

from groupident.model import InvalidInstance, Rule, consent, make_society
from groupident.rules import evaluate, trace

# six individuals a1..a6; row i holds i's opinions about everyone
EX1 = make_society(
    [
        [1, 1, 1, 1, -1, -1],
        [1, 1, -1, 1, -1, -1],
        [1, 1, -1, -1, -1, -1],
        [1, 1, -1, 1, 1, -1],
        [1, 1, 1, -1, 1, -1],
        [1, 1, 1, -1, -1, 1],
    ],
    labels=["a1", "a2", "a3", "a4", "a5", "a6"],
)

# same society after a1 and a2 change their minds about themselves
EX1_PRIME = make_society(
    [(-1 if i == j and i in (0, 1) else v) for j, v in enumerate(row)]
    for i, row in enumerate(EX1.phi)
)


def labelled(society, names):
    assert society.labels is not None
    return frozenset(society.labels.index(x) for x in names)


@pytest.mark.parametrize("rule, expected", [
    (consent(1, 1), {"a1", "a2", "a4", "a5", "a6"}),
    (consent(3, 4), {"a1", "a2", "a3", "a4"}),
    (Rule("lsr"), {"a1", "a2", "a3", "a4", "a5", "a6"}),
    (Rule("csr"), {"a1", "a2", "a3", "a4", "a5"}),
    (Rule("ic"), {"a1", "a2", "a4", "a5"}),
    (Rule("2ic"), {"a1", "a2", "a4"}),
])
def test_worked_example(rule, expected):
    assert evaluate(rule, EX1) == labelled(EX1, expected)


def test_worked_example_liberal_two_stage():
    # nobody is unanimously qualified once a1 and a2 disqualify themselves,
    # so the liberal variant falls back to the self-qualifiers
    assert evaluate(Rule("2ic"), EX1_PRIME) == frozenset()
    assert evaluate(Rule("2lic"), EX1_PRIME) == frozenset({3, 4, 5})


def test_worked_example_traces():
    tr = trace(Rule("csr"), EX1)
    assert [sorted(k) for k in tr.stages] == [[0, 1], [0, 1, 2, 3], [0, 1, 2, 3, 4]]
    tr = trace(Rule("ic"), EX1)
    assert [(sorted(q), sorted(k)) for q, k in tr.stages] == [
        ([0, 1], [0, 1]),
        ([3], [0, 1, 3]),
        ([4], [0, 1, 3, 4]),
        ([], [0, 1, 3, 4]),
    ]


ALL_RULES = [consent(1, 1), consent(2, 1), consent(1, 2), consent(2, 3),
             Rule("lsr"), Rule("csr"), Rule("ic"), Rule("2ic"), Rule("2lic")]


@pytest.mark.parametrize("rule", ALL_RULES)
def test_unanimous_profile_qualifies_everyone(rule):
    soc = make_society([[1] * 3] * 3)
    assert evaluate(rule, soc) == frozenset({0, 1, 2})


@pytest.mark.parametrize("rule", ALL_RULES)
def test_hostile_profile_qualifies_nobody(rule):
    soc = make_society([[-1] * 3] * 3)
    assert evaluate(rule, soc) == frozenset()


def test_lsr_trace_on_hostile_profile():
    tr = trace(Rule("lsr"), make_society([[-1] * 3] * 3))
    assert tr.stages == (frozenset(),)
    assert tr.final == frozenset()


def test_consent_counts_include_the_own_vote():
    # a0 backs itself and nobody else does: in for s=1, out for s=2
    soc = make_society([[1, -1], [-1, -1]])
    assert evaluate(consent(1, 1), soc) == frozenset({0})
    assert evaluate(consent(2, 1), soc) == frozenset()
    # a1 disqualifies itself and a0 agrees: two disqualifiers reach t=2
    soc = make_society([[1, -1], [1, -1]])
    assert evaluate(consent(1, 2), soc) == frozenset({0})
    assert evaluate(consent(1, 3), soc) == frozenset({0, 1})


def test_evaluate_rejects_foreign_indices():
    soc = make_society([[1, 1], [1, 1]])
    with pytest.raises(InvalidInstance):
        evaluate(Rule("lsr"), soc, frozenset({0, 5}))


@st.composite
def societies(draw, max_n=6):
    n = draw(st.integers(1, max_n))
    phi = [[draw(st.sampled_from((1, -1))) for _ in range(n)] for _ in range(n)]
    return make_society(phi)


@st.composite
def societies_with_subset(draw, max_n=6):
    soc = draw(societies(max_n))
    members = draw(st.sets(st.integers(0, soc.n - 1), min_size=1))
    return soc, frozenset(members)


@given(st.sampled_from(ALL_RULES), societies_with_subset())
def test_result_is_a_subset_of_the_members(rule, soc_T):
    soc, T = soc_T
    assert evaluate(rule, soc, T) <= T


@given(st.sampled_from(ALL_RULES), societies_with_subset())
@settings(max_examples=60)
def test_restriction_equals_induced_subsociety(rule, soc_T):
    # only opinions among T count, so evaluating the induced society on the
    # same individuals must give the identical set
    soc, T = soc_T
    order = sorted(T)
    sub = make_society([[soc.phi[i][j] for j in order] for i in order])
    via_subset = evaluate(rule, soc, T)
    via_induced = frozenset(order[i] for i in evaluate(rule, sub))
    assert via_subset == via_induced


@given(societies_with_subset())
def test_two_stage_variants_agree_unless_seed_is_empty(soc_T):
    soc, T = soc_T
    seed = frozenset(a for a in T
                     if all(soc.phi[b][a] == 1 for b in T))
    strict = evaluate(Rule("2ic"), soc, T)
    liberal = evaluate(Rule("2lic"), soc, T)
    if seed:
        assert strict == liberal
    else:
        assert strict == frozenset()
        assert liberal == frozenset(a for a in T if soc.phi[a][a] == 1)


@given(st.sampled_from([Rule("ic"), Rule("2ic"), Rule("2lic")]),
       societies_with_subset())
def test_consensus_rules_contain_the_unanimous_seed(rule, soc_T):
    soc, T = soc_T
    seed = frozenset(a for a in T
                     if all(soc.phi[b][a] == 1 for b in T))
    assert seed <= evaluate(rule, soc, T)


@given(societies())
def test_consent_1_1_is_exactly_the_self_qualifiers(soc):
    expected = frozenset(a for a in range(soc.n) if soc.phi[a][a] == 1)
    assert evaluate(consent(1, 1), soc) == expected


@given(st.sampled_from([Rule("lsr"), Rule("csr"), Rule("ic")]),
       societies_with_subset())
def test_traces_are_monotone_and_stabilize(rule, soc_T):
    soc, T = soc_T
    tr = trace(rule, soc, T)
    assert tr.final == evaluate(rule, soc, T)
    assert len(tr.stages) <= len(T) + 1
    if rule.name == "ic":
        seen = set()
        for q, k in tr.stages:
            assert not (q & seen)      # newly qualified layers are disjoint
            seen |= q
            assert q <= k
        assert tr.stages[-1][1] == tr.final
    else:
        for before, after in zip(tr.stages, tr.stages[1:]):
            assert before < after      # cumulative and strictly growing
        assert tr.stages[-1] == tr.final
        # fixpoint: one more qualification round adds nothing
        grown = frozenset(
            a for a in T if any(soc.phi[b][a] == 1 for b in tr.final))
        assert grown <= tr.final


@given(societies_with_subset())
def test_two_stage_trace_shape(soc_T):
    soc, T = soc_T
    for name in ("2ic", "2lic"):
        tr = trace(Rule(name), soc, T)
        k0, k1 = tr.stages
        assert k0 <= k1
        assert tr.final == k1
