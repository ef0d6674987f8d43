"""Efficient solvers: worked examples, dispatch, and witness discipline."""

import pytest
from hypothesis import given, settings, strategies as st

from groupident.model import (
    AttackInstance,
    Rule,
    consent,
    make_society,
    random_instance,
    verify_solution,
)
from groupident.oracle import brute_force
from groupident.polysolvers import (
    PreconditionError,
    csr_rdgcdi_to_dgcdi,
    find_poly_solver,
    solve_2ic_cgb_priced,
    solve_2ic_cgcdi,
    solve_2ic_cgmb,
    solve_2ic_gb_unpriced,
    solve_2lic_cgb_priced,
    solve_2lic_cgcdi,
    solve_2lic_cgmb,
    solve_2lic_gb_unpriced,
    solve_consent_easy_cases,
    solve_consent_s1_rdgcdi,
    solve_csr_dgcdi_corrected,
    solve_csr_dgcdi_naive,
    solve_csr_regcdi,
    solve_ic_2ic_dgb_priced,
    solve_lsr_rdgcdi,
)

EX2 = make_society([
    [1, -1, -1, 1, 1, -1],
    [1, 1, -1, 1, 1, -1],
    [1, 1, 1, 1, 1, -1],
    [1, 1, 1, -1, -1, 1],
    [1, 1, 1, -1, -1, 1],
    [1, 1, 1, -1, -1, -1],
])


def inst(soc, rule, kind, aplus=(), aminus=(), budget=1, **kw):
    return AttackInstance(society=soc, rule=rule, kind=kind,
                          aplus=frozenset(aplus), aminus=frozenset(aminus),
                          budget=budget, **kw)


# --- consent, support threshold one, relaxed destructive -------------------

def test_consent_s1_single_individual():
    i = inst(make_society([[1]]), consent(1, 1), "relaxed-delete",
             aminus={0}, budget=1)
    rep = solve_consent_s1_rdgcdi(i)
    assert rep.verdict.answer
    assert rep.verdict.witness.U == frozenset({0})


def test_consent_s1_protected_self_disqualifier_must_go():
    # a0 disqualifies itself but only counts one disqualifier, below t=2,
    # so it stays in unless deleted outright
    soc = make_society([[-1, -1], [1, -1]])
    i = inst(soc, consent(1, 2), "relaxed-delete", aminus={0}, budget=1)
    rep = solve_consent_s1_rdgcdi(i)
    assert rep.verdict.answer
    assert verify_solution(i, rep.verdict.witness).valid
    assert brute_force(i).answer


def test_consent_s1_rejects_other_cells():
    soc = make_society([[1, 1], [1, 1]])
    with pytest.raises(PreconditionError):
        solve_consent_s1_rdgcdi(inst(soc, consent(2, 1), "relaxed-delete",
                                     aminus={0}))
    with pytest.raises(PreconditionError):
        solve_consent_s1_rdgcdi(inst(soc, consent(1, 1), "delete",
                                     aminus={0}))
    with pytest.raises(PreconditionError):
        solve_consent_s1_rdgcdi(inst(soc, consent(1, 1), "relaxed-delete",
                                     aplus={1}, aminus={0}))


# --- consent and related easy deletion cells --------------------------------

def test_easy_cases_f11_exact_is_immune_when_someone_must_enter():
    soc = make_society([[-1, 1], [1, 1]])     # a0 does not back itself
    i = inst(soc, consent(1, 1), "relaxed-delete", aplus={0}, aminus={1})
    rep = solve_consent_easy_cases(i)
    assert not rep.verdict.answer
    assert "immune" in rep.verdict.reason


def test_easy_cases_f11_exact_all_self_disqualifiers_is_a_free_yes():
    soc = make_society([[-1, 1], [1, -1]])
    i = inst(soc, consent(1, 1), "relaxed-delete", aminus={0, 1}, budget=0)
    rep = solve_consent_easy_cases(i)
    assert rep.verdict.answer
    assert rep.verdict.witness.U == frozenset()


def test_easy_cases_lsr_constructive_is_immune():
    soc = make_society([[-1, -1], [-1, 1]])
    i = inst(soc, Rule("lsr"), "delete", aplus={0}, budget=2)
    rep = solve_consent_easy_cases(i)
    assert not rep.verdict.answer
    assert "immune" in rep.verdict.reason


def test_easy_cases_csr_general_plain_deletion_is_immune():
    # nobody backs a0, while a1 sits in every consensus seed
    soc = make_society([[-1, 1, 1], [-1, 1, 1], [-1, 1, 1]])
    i = inst(soc, Rule("csr"), "delete", aplus={0}, aminus={1}, budget=2)
    rep = solve_consent_easy_cases(i)
    assert not rep.verdict.answer
    assert "immune" in rep.verdict.reason
    assert not brute_force(i).answer


# --- liberal-start rule, relaxed destructive --------------------------------

def test_lsr_rdgcdi_no_self_qualifier_is_a_free_yes():
    soc = make_society([[-1, 1], [1, -1]])
    i = inst(soc, Rule("lsr"), "relaxed-delete", aminus={1}, budget=0)
    rep = solve_lsr_rdgcdi(i)
    assert rep.verdict.answer
    assert rep.verdict.witness.U == frozenset()


def test_lsr_rdgcdi_cuts_the_qualification_chain():
    soc = make_society([
        [1, 1, -1],
        [-1, -1, 1],
        [-1, -1, -1],
    ])
    i = inst(soc, Rule("lsr"), "relaxed-delete", aminus={2}, budget=1)
    rep = solve_lsr_rdgcdi(i)
    assert rep.verdict.answer
    assert len(rep.verdict.witness.U) == 1
    assert verify_solution(i, rep.verdict.witness).valid
    assert brute_force(i).answer


# --- consensus-start rule, deletion ------------------------------------------

def test_csr_relaxed_to_plain_reduction_shape():
    i = inst(EX2, Rule("csr"), "relaxed-delete", aminus={5}, budget=2)
    out = csr_rdgcdi_to_dgcdi(i)
    w = out.n - 1
    assert out.n == i.n + 1
    assert out.kind == "delete"
    assert out.aminus == frozenset({w})
    assert out.budget == i.budget
    # the fresh individual backs every original individual, which keeps the
    # consensus seed intact, disqualifies itself, and is qualified by
    # exactly the original targets
    assert out.society.phi[w] == tuple([1] * i.n + [-1])
    for a in range(i.n):
        assert (out.society.phi[a][w] == 1) == (a in i.aminus)


@given(st.integers(0, 10 ** 6))
@settings(max_examples=40, deadline=None)
def test_csr_relaxed_reduction_preserves_the_answer(seed):
    i = random_instance(seed, 4, Rule("csr"), "relaxed-delete", "destructive")
    mapped = csr_rdgcdi_to_dgcdi(i)
    assert brute_force(i).answer == brute_force(mapped).answer


def test_csr_dgcdi_corrected_solves_the_counterexample():
    i = inst(EX2, Rule("csr"), "delete", aminus={5}, budget=2)
    rep = solve_csr_dgcdi_corrected(i)
    assert rep.verdict.answer
    assert len(rep.verdict.witness.U) == 2
    assert verify_solution(i, rep.verdict.witness).valid
    tight = inst(EX2, Rule("csr"), "delete", aminus={5}, budget=1)
    assert not solve_csr_dgcdi_corrected(tight).verdict.answer
    assert not brute_force(tight).answer


def test_csr_dgcdi_naive_wrongly_rejects_the_counterexample():
    i = inst(EX2, Rule("csr"), "delete", aminus={5}, budget=2)
    assert not solve_csr_dgcdi_naive(i).verdict.answer


def test_csr_dgcdi_already_disqualified_is_a_free_yes():
    soc = make_society([[1, -1], [1, -1]])
    i = inst(soc, Rule("csr"), "delete", aminus={1}, budget=0)
    for solver in (solve_csr_dgcdi_naive, solve_csr_dgcdi_corrected):
        rep = solver(i)
        assert rep.verdict.answer
        assert rep.verdict.witness.U == frozenset()


@given(st.integers(0, 10 ** 6))
@settings(max_examples=60, deadline=None)
def test_csr_naive_yes_implies_corrected_yes(seed):
    # the flawed reference solver only errs towards NO: its YES witnesses
    # still verify, and the corrected solver never loses one
    i = random_instance(seed, 5, Rule("csr"), "delete", "destructive")
    naive = solve_csr_dgcdi_naive(i)
    if naive.verdict.answer:
        assert verify_solution(i, naive.verdict.witness).valid
        assert solve_csr_dgcdi_corrected(i).verdict.answer
    elif not solve_csr_dgcdi_corrected(i).verdict.answer:
        assert not brute_force(i).answer


def test_csr_regcdi_empty_protected_side():
    hostile = make_society([[-1] * 3] * 3)
    i = inst(hostile, Rule("csr"), "relaxed-delete", aminus={0, 1, 2},
             budget=0)
    rep = solve_csr_regcdi(i)
    assert rep.verdict.answer
    assert rep.verdict.witness.U == frozenset()
    friendly = make_society([[1] * 3] * 3)
    i = inst(friendly, Rule("csr"), "relaxed-delete", aminus={0, 1, 2},
             budget=2)
    assert not solve_csr_regcdi(i).verdict.answer
    assert not brute_force(i).answer


# --- two-stage consensus rules, deletion -------------------------------------

def test_two_stage_constructive_deletion_trivial_yes():
    soc = make_society([[1] * 3] * 3)
    for solver, name in ((solve_2ic_cgcdi, "2ic"), (solve_2lic_cgcdi, "2lic")):
        i = inst(soc, Rule(name), "delete", aplus={0}, budget=1)
        rep = solver(i)
        assert rep.verdict.answer
        assert rep.verdict.witness.U == frozenset()


def test_2ic_self_disqualifier_cannot_be_helped():
    soc = make_society([[-1, 1, 1], [1, 1, 1], [1, 1, 1]])
    i = inst(soc, Rule("2ic"), "delete", aplus={0}, budget=2)
    rep = solve_2ic_cgcdi(i)
    assert not rep.verdict.answer
    assert not brute_force(i).answer


# --- bribery ------------------------------------------------------------------

def test_destructive_bribery_picks_the_cheapest_individual():
    soc = make_society([[1] * 3] * 3)
    i = inst(soc, Rule("ic"), "bribery", aminus={2}, budget=2,
             priced=True, prices=(5, 2, 9))
    rep = solve_ic_2ic_dgb_priced(i)
    assert rep.verdict.answer
    assert rep.verdict.cost == 2
    ((who, row),) = rep.verdict.witness.rows
    assert who == 1
    assert all(v == -1 for v in row)
    broke = inst(soc, Rule("2ic"), "bribery", aminus={2}, budget=1,
                 priced=True, prices=(5, 2, 9))
    assert not solve_ic_2ic_dgb_priced(broke).verdict.answer


def test_destructive_bribery_already_done_costs_nothing():
    soc = make_society([[-1] * 3] * 3)
    i = inst(soc, Rule("ic"), "bribery", aminus={0}, budget=0)
    rep = solve_ic_2ic_dgb_priced(i)
    assert rep.verdict.answer and rep.verdict.cost == 0


def test_constructive_bribery_already_done_costs_nothing():
    soc = make_society([[1] * 3] * 3)
    for solver, name in ((solve_2ic_cgb_priced, "2ic"),
                         (solve_2lic_cgb_priced, "2lic")):
        i = inst(soc, Rule(name), "bribery", aplus={0}, budget=0,
                 priced=True, prices=(3, 3, 3))
        rep = solver(i)
        assert rep.verdict.answer and rep.verdict.cost == 0


def test_2lic_two_self_disqualifiers_cost_two():
    # nobody is unanimously qualified, a0 and a1 disqualify themselves
    soc = make_society([
        [-1, 1, -1],
        [1, -1, -1],
        [1, 1, -1],
    ])
    i = inst(soc, Rule("2lic"), "bribery", aplus={0, 1}, budget=2,
             priced=True, prices=(1, 1, 1))
    rep = solve_2lic_cgb_priced(i)
    assert rep.verdict.answer
    assert rep.verdict.cost == 2
    assert verify_solution(i, rep.verdict.witness).valid
    tight = inst(soc, Rule("2lic"), "bribery", aplus={0, 1}, budget=1,
                 priced=True, prices=(1, 1, 1))
    assert not solve_2lic_cgb_priced(tight).verdict.answer
    assert not brute_force(tight).answer


def test_general_bribery_both_sides_already_met():
    soc = make_society([
        [1, -1, 1],
        [1, -1, 1],
        [1, -1, 1],
    ])
    for solver, name in ((solve_2ic_gb_unpriced, "2ic"),
                         (solve_2lic_gb_unpriced, "2lic")):
        i = inst(soc, Rule(name), "bribery", aplus={0}, aminus={1}, budget=0)
        rep = solver(i)
        assert rep.verdict.answer and rep.verdict.cost == 0


def test_2lic_general_bribery_forced_bribes_only():
    # empty consensus seed: bribe the protected self-disqualifier to back
    # itself and the targeted self-qualifier to drop itself
    soc = make_society([
        [-1, -1, -1, -1],
        [-1, 1, -1, -1],
        [-1, -1, -1, -1],
        [-1, -1, -1, -1],
    ])
    i = inst(soc, Rule("2lic"), "bribery", aplus={0}, aminus={1}, budget=2)
    rep = solve_2lic_gb_unpriced(i)
    assert rep.verdict.answer
    assert rep.verdict.cost == 2
    assert verify_solution(i, rep.verdict.witness).valid
    tight = inst(soc, Rule("2lic"), "bribery", aplus={0}, aminus={1}, budget=1)
    assert not solve_2lic_gb_unpriced(tight).verdict.answer
    assert not brute_force(tight).answer


# --- microbribery --------------------------------------------------------------

def test_constructive_microbribery_trivial_and_forced_cases():
    soc = make_society([[1] * 3] * 3)
    for solver, name in ((solve_2ic_cgmb, "2ic"), (solve_2lic_cgmb, "2lic")):
        i = inst(soc, Rule(name), "microbribery", aplus={0}, budget=0)
        rep = solver(i)
        assert rep.verdict.answer and rep.verdict.cost == 0
    # empty seed, one protected self-disqualifier: exactly one flip
    soc = make_society([[-1, -1], [-1, -1]])
    i = inst(soc, Rule("2lic"), "microbribery", aplus={0}, budget=1)
    rep = solve_2lic_cgmb(i)
    assert rep.verdict.answer
    assert rep.verdict.witness.flips == frozenset({(0, 0)})


# --- dispatch -------------------------------------------------------------------

def test_dispatch_finds_the_documented_cells():
    i = inst(EX2, Rule("csr"), "delete", aminus={5}, budget=2)
    name, fn = find_poly_solver(i)
    assert name == "solve_csr_dgcdi_corrected"
    assert fn(i).verdict.answer

    soc = make_society([[1] * 4] * 4)
    cases = [
        (inst(soc, consent(1, 2), "relaxed-delete", aminus={0}),
         "solve_consent_s1_rdgcdi"),
        (inst(soc, consent(1, 1), "relaxed-delete", aplus={0}, aminus={1}),
         "solve_consent_easy_cases"),
        (inst(soc, Rule("lsr"), "relaxed-delete", aminus={0}),
         "solve_lsr_rdgcdi"),
        (inst(soc, Rule("csr"), "relaxed-delete", aminus={0}),
         "solve_csr_rdgcdi"),
        (inst(soc, Rule("csr"), "relaxed-delete", aplus={0}, aminus={1, 2, 3}),
         "solve_csr_regcdi"),
        (inst(soc, Rule("2ic"), "delete", aplus={0}), "solve_2ic_cgcdi"),
        (inst(soc, Rule("2lic"), "delete", aplus={0}), "solve_2lic_cgcdi"),
        (inst(soc, Rule("ic"), "bribery", aminus={0}),
         "solve_ic_2ic_dgb_priced"),
        (inst(soc, Rule("2ic"), "bribery", aplus={0}, priced=True,
              prices=(1, 1, 1, 1)), "solve_2ic_cgb_priced"),
        (inst(soc, Rule("2lic"), "bribery", aplus={0}, aminus={1}),
         "solve_2lic_gb_unpriced"),
        (inst(soc, Rule("2ic"), "microbribery", aplus={0}), "solve_2ic_cgmb"),
    ]
    for instance, expected in cases:
        hit = find_poly_solver(instance)
        assert hit is not None and hit[0] == expected, (expected, hit)


def test_dispatch_returns_none_on_hard_cells():
    soc = make_society([[1] * 4] * 4)
    hard = [
        inst(soc, Rule("ic"), "delete", aplus={0}),
        inst(soc, Rule("csr"), "delete", aplus={0}),
        inst(soc, consent(2, 2), "relaxed-delete", aminus={0}),
        inst(soc, Rule("ic"), "bribery", aplus={0}),
        inst(soc, Rule("2ic"), "bribery", aplus={0}, aminus={1}, priced=True,
             prices=(1, 1, 1, 1)),
        inst(soc, Rule("lsr"), "microbribery", aplus={0}),
        inst(soc, Rule("2ic"), "microbribery", aminus={0}),
        inst(soc, Rule("csr"), "add", aplus={0}, T=frozenset({0, 1})),
    ]
    for instance in hard:
        assert find_poly_solver(instance) is None, instance.kind


def permuted(instance, perm):
    n = instance.n
    phi = [[None] * n for _ in range(n)]
    for i in range(n):
        for j in range(n):
            phi[perm[i]][perm[j]] = instance.society.phi[i][j]
    return AttackInstance(
        society=make_society(phi), rule=instance.rule, kind=instance.kind,
        aplus=frozenset(perm[a] for a in instance.aplus),
        aminus=frozenset(perm[a] for a in instance.aminus),
        budget=instance.budget)


@given(st.integers(0, 10 ** 6), st.permutations(list(range(5))))
@settings(max_examples=40, deadline=None)
def test_anchor_solvers_are_permutation_invariant(seed, perm):
    i = random_instance(seed, 5, Rule("2ic"), "delete", "constructive")
    j = permuted(i, perm)
    assert solve_2ic_cgcdi(i).verdict.answer == solve_2ic_cgcdi(j).verdict.answer


@given(st.integers(0, 10 ** 6), st.permutations(list(range(4))))
@settings(max_examples=40, deadline=None)
def test_general_bribery_is_permutation_invariant(seed, perm):
    i = random_instance(seed, 4, Rule("2lic"), "bribery", "general")
    j = permuted(i, perm)
    assert solve_2lic_gb_unpriced(i).verdict.answer == \
        solve_2lic_gb_unpriced(j).verdict.answer
