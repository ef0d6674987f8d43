"""Polynomial-time solvers for the tractable attack cells.

Each solver covers one family of (rule, attack kind, objective) combinations
and raises PreconditionError outside it.  YES verdicts always carry a witness
that has been re-checked with verify_solution; NO verdicts carry a reason.
Solvers iterate individuals in ascending index order, so results are
deterministic.  The priced bribery solvers minimise total price over their
candidate schedules; the deletion solvers return the first verifying witness.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from itertools import combinations

from .graphs import SINK, SOURCE, DiGraph, Infeasible, lsr_aux_graph, min_vertex_separator
from .model import (
    ADD,
    BRIBERY,
    DELETE,
    DISQUALIFY,
    MICROBRIBERY,
    QUALIFY,
    RELAXED_DELETE,
    AttackInstance,
    Verdict,
    bribe,
    delete_set,
    make_society,
    microbribe,
    verify_solution,
)
from .rules import evaluate


class PreconditionError(RuntimeError):
    """The instance lies outside the cell this solver is correct for."""


@dataclass(frozen=True)
class SolverReport:
    verdict: Verdict
    iterations: int = 0
    guesses_tried: int = 0


def _report_yes(instance, sol, name, iterations=1, guesses=0):
    res = verify_solution(instance, sol)
    if not res.valid:
        raise RuntimeError(f"{name} built a witness that fails verification: {res.reason}")
    return SolverReport(Verdict(True, witness=sol, cost=res.cost, certifier=name),
                        iterations, guesses)


def _report_no(name, reason, iterations=1, guesses=0):
    return SolverReport(Verdict(False, certifier=name, reason=reason),
                        iterations, guesses)


def _row(n, positives):
    pos = set(positives)
    return tuple(QUALIFY if j in pos else DISQUALIFY for j in range(n))


def _unanimous(phi, members):
    mem = sorted(members)
    return [a for a in mem if all(phi[b][a] == QUALIFY for b in mem)]


# ---------------------------------------------------------------------------
# consent rules, deletion


def _consent_destructive_queue(phi, n, targets, t, start=frozenset()):
    """Forced deletions that push every surviving target out of the outcome
    under support threshold one.

    Targeted self-qualifiers must go outright; a targeted self-disqualifier
    must go while it keeps fewer than t surviving disqualifiers.  Deleting
    one target can strip disqualifiers off another, hence the cascade.
    Returns the full deleted set including start.
    """
    deleted = set(start)
    for a in sorted(targets):
        if a not in deleted and phi[a][a] == QUALIFY:
            deleted.add(a)
    live = [a for a in sorted(targets) if a not in deleted]
    d = {a: sum(1 for b in range(n) if b not in deleted and phi[b][a] == DISQUALIFY)
         for a in live}
    queue = deque(live)
    while queue:
        a = queue.popleft()
        if a in deleted or d[a] >= t:
            continue
        deleted.add(a)
        for b in live:
            if b not in deleted and phi[a][b] == DISQUALIFY:
                d[b] -= 1
                if d[b] < t:
                    queue.append(b)
    return frozenset(deleted)


def solve_consent_s1_rdgcdi(instance: AttackInstance) -> SolverReport:
    """Destructive relaxed deletion under consent rules with s = 1.

    Every deletion is forced, so the instance is a YES exactly when the
    forced cascade fits the budget.
    """
    name = "solve_consent_s1_rdgcdi"
    rule = instance.rule
    if rule.name != "consent" or rule.s != 1:
        raise PreconditionError("needs a consent rule with support threshold one")
    if instance.kind != RELAXED_DELETE:
        raise PreconditionError("relaxed deletion only")
    if instance.aplus:
        raise PreconditionError("destructive objectives only")
    U = _consent_destructive_queue(instance.society.phi, instance.n,
                                   instance.aminus, rule.t)
    if len(U) <= instance.budget:
        return _report_yes(instance, delete_set(U), name)
    return _report_no(name, f"{len(U)} forced deletions exceed the budget {instance.budget}")


def _unanimity_purge(phi, n, forbidden=frozenset()):
    """Cascade-delete everyone who becomes unanimously qualified.

    Returns (deleted, blocked).  blocked is a forbidden individual that
    turned unanimous, meaning the seed set cannot be emptied; otherwise the
    surviving society has no unanimously qualified member left.
    """
    deleted = set()
    d = {a: sum(1 for b in range(n) if phi[b][a] == DISQUALIFY) for a in range(n)}
    queue = deque(a for a in range(n) if d[a] == 0)
    while queue:
        a = queue.popleft()
        if a in deleted or d[a] != 0:
            continue
        if a in forbidden:
            return frozenset(deleted), a
        deleted.add(a)
        for b in range(n):
            if b not in deleted and phi[a][b] == DISQUALIFY:
                d[b] -= 1
                if d[b] == 0:
                    queue.append(b)
    return frozenset(deleted), None


def solve_consent_easy_cases(instance: AttackInstance) -> SolverReport:
    """Deletion cells that are immune or decided by forced moves alone.

    Covers: consent rules with t = 1 (self-disqualifiers count their own
    vote and deletions never raise support), consent s = 1 forced cascades
    for t <= 2 under relaxed deletion, plain deletion under s = 1 where the
    targets are stuck, the liberal-start rule whenever qualifying someone
    new is asked of a deletion, its everyone-out relaxed case, and the
    consensus-start immunity for plain deletion with both target sets.
    Anything else raises PreconditionError.
    """
    name = "solve_consent_easy_cases"
    rule = instance.rule
    if instance.kind not in (DELETE, RELAXED_DELETE):
        raise PreconditionError("only deletion attacks are covered")
    if rule.name not in ("consent", "lsr", "csr"):
        raise PreconditionError(f"rule {rule.name!r} is not covered")
    soc = instance.society
    n = soc.n
    phi = soc.phi
    aplus, aminus = instance.aplus, instance.aminus
    relaxed = instance.kind == RELAXED_DELETE
    f0 = evaluate(rule, soc)
    met_plus = aplus <= f0
    met_minus = not (aminus & f0)
    if met_plus and met_minus:
        return _report_yes(instance, delete_set(()), name)

    if rule.name == "lsr":
        if aplus and not met_plus:
            return _report_no(
                name, "immune: deletions never enlarge the liberal-start outcome")
        if relaxed and aminus == soc.individuals():
            U = frozenset(a for a in range(n) if phi[a][a] == QUALIFY)
            if len(U) <= instance.budget:
                return _report_yes(instance, delete_set(U), name)
            return _report_no(name, "every self-qualifier must go and the budget "
                                    "does not cover them")
        raise PreconditionError("liberal-start destruction outside the everyone-out "
                                "case is handled by the separator solver")

    if rule.name == "csr":
        if relaxed:
            raise PreconditionError("relaxed consensus-start deletion has dedicated solvers")
        if not aplus or not aminus:
            raise PreconditionError("consensus-start plain deletion is only decided "
                                    "here with both target sets nonempty")
        if not met_plus and not met_minus:
            return _report_no(
                name, "immune: a targeted outcome member survives every deletion and "
                      "keeps qualifying the consensus seeds, so the outcome never grows")
        raise PreconditionError("plain deletion with one objective already met is not covered")

    s, t = rule.s, rule.t
    # plain deletion, s = 1: a targeted outcome member is either a protected
    # self-qualifier or keeps too few disqualifiers, so destruction is impossible
    if not relaxed and aminus and not met_minus and s == 1:
        return _report_no(
            name, "immune: targeted outcome members stay socially qualified under "
                  "plain deletion with support threshold one")
    if t == 1:
        if aplus and not met_plus:
            return _report_no(
                name, "immune: self-disqualifiers stay out and deletions never raise "
                      "support, so the protected set cannot grow")
        # constructive side met; destruction remains
        if s == 1 and relaxed:
            U = frozenset(a for a in aminus if phi[a][a] == QUALIFY)
            if len(U) <= instance.budget:
                return _report_yes(instance, delete_set(U), name)
            return _report_no(name, "the targeted self-qualifiers outnumber the budget")
        raise PreconditionError("destruction with support threshold above one is not easy")
    if s == 1 and t == 2 and relaxed:
        # forced moves only: strip the other disqualifiers off every protected
        # self-disqualifier, then run the destructive cascade
        phase1 = set()
        for a in sorted(aplus):
            if phi[a][a] == DISQUALIFY:
                others = {b for b in range(n) if b != a and phi[b][a] == DISQUALIFY}
                if others & aplus:
                    return _report_no(
                        name, "a protected individual disqualifies a protected "
                              "self-disqualifier, which no deletion can undo")
                phase1 |= others
        U = _consent_destructive_queue(phi, n, aminus, t, frozenset(phase1))
        if len(U) <= instance.budget:
            return _report_yes(instance, delete_set(U), name)
        return _report_no(name, f"{len(U)} forced deletions exceed the budget {instance.budget}")
    raise PreconditionError(
        f"consent thresholds s={s}, t={t} with kind {instance.kind!r} have no easy rule")


# ---------------------------------------------------------------------------
# liberal-start rule, deletion


def solve_lsr_rdgcdi(instance: AttackInstance) -> SolverReport:
    """Destructive relaxed deletion under the liberal-start rule.

    A target ends up socially qualified exactly when the auxiliary graph
    keeps a source-sink path, so the minimum vertex separator is the
    cheapest deletion set.
    """
    name = "solve_lsr_rdgcdi"
    if instance.rule.name != "lsr":
        raise PreconditionError("liberal-start rule only")
    if instance.kind != RELAXED_DELETE:
        raise PreconditionError("relaxed deletion only")
    if instance.aplus:
        raise PreconditionError("destructive objectives only")
    g = lsr_aux_graph(instance.society, instance.aminus)
    cut = min_vertex_separator(g)
    if len(cut) <= instance.budget:
        return _report_yes(instance, delete_set(cut), name)
    return _report_no(name, f"the minimum separator has {len(cut)} vertices, "
                            f"over the budget {instance.budget}")


# ---------------------------------------------------------------------------
# consensus-start rule, deletion


def csr_rdgcdi_to_dgcdi(instance: AttackInstance) -> AttackInstance:
    """Rewrite relaxed destruction as plain destruction of one fresh individual.

    The new individual w (index n) qualifies every original individual and
    disqualifies itself, so consensus among survivors is unchanged; w is
    qualified exactly by the old targets, so w ends up socially qualified
    iff some old target does.  Budgets carry over unchanged.
    """
    if instance.rule.name != "csr":
        raise PreconditionError("consensus-start rule only")
    if instance.kind != RELAXED_DELETE:
        raise PreconditionError("relaxed deletion only")
    if instance.aplus:
        raise PreconditionError("destructive objectives only")
    n = instance.n
    phi = instance.society.phi
    rows = []
    for a in range(n):
        rows.append(list(phi[a]) + [QUALIFY if a in instance.aminus else DISQUALIFY])
    rows.append([QUALIFY] * n + [DISQUALIFY])
    return AttackInstance(society=make_society(rows), rule=instance.rule,
                          kind=DELETE, aplus=frozenset(), aminus=frozenset({n}),
                          budget=instance.budget)


def _csr_cut_graph(phi, members, targets, sources):
    # opinion digraph over the surviving members with every target collapsed
    # into the sink; sources hang off the artificial source vertex
    keep = [a for a in sorted(members) if a not in targets]
    arcs = []
    for a in keep:
        for b in sorted(members):
            if b == a or phi[a][b] != QUALIFY:
                continue
            arcs.append((a, SINK) if b in targets else (a, b))
    for s in sorted(set(sources)):
        arcs.append((SOURCE, SINK) if s in targets else (SOURCE, s))
    return DiGraph(keep + [SOURCE, SINK], arcs)


def solve_csr_dgcdi_corrected(instance: AttackInstance) -> SolverReport:
    """Destructive plain deletion under the consensus-start rule.

    Repeatedly cut the unanimously qualified seeds off the targets.  When
    the minimum cut would swallow the whole seed set, deleting it outright
    is not always necessary: protecting one seed v and cutting between v's
    endorsements and the targets can be cheaper, so every such v is tried
    before the seeds are committed for deletion.
    """
    name = "solve_csr_dgcdi_corrected"
    if instance.rule.name != "csr":
        raise PreconditionError("consensus-start rule only")
    if instance.kind != DELETE:
        raise PreconditionError("plain deletion only")
    if instance.aplus:
        raise PreconditionError("destructive objectives only")
    phi = instance.society.phi
    targets = instance.aminus
    committed: set[int] = set()
    members = set(range(instance.n))
    remaining = instance.budget
    iterations = 0
    guesses = 0
    while True:
        iterations += 1
        seeds = _unanimous(phi, members)
        if set(seeds) & targets:
            return _report_no(name, "a targeted individual is qualified by every "
                                    "survivor", iterations, guesses)
        cut = min_vertex_separator(_csr_cut_graph(phi, members, targets, seeds))
        if not cut:
            return _report_yes(instance, delete_set(committed), name, iterations, guesses)
        if len(cut) > remaining:
            return _report_no(name, "the cheapest cut between the consensus seeds and "
                                    "the targets exceeds the remaining budget",
                              iterations, guesses)
        if set(seeds) - cut:
            return _report_yes(instance, delete_set(committed | cut), name,
                               iterations, guesses)
        # the cut is exactly the seed set; keeping one seed alive may be cheaper
        best = None
        for v in seeds:
            guesses += 1
            rest = members - {v}
            fed = [x for x in seeds if x != v]
            fed += [b for b in sorted(rest) if phi[v][b] == QUALIFY]
            try:
                alt = min_vertex_separator(_csr_cut_graph(phi, rest, targets, fed))
            except Infeasible:
                continue  # v qualifies a target directly, protecting v cannot work
            if best is None or len(alt) < len(best):
                best = alt
        if best is not None and len(best) <= remaining:
            return _report_yes(instance, delete_set(committed | best), name,
                               iterations, guesses)
        # every solution from here deletes the whole seed set
        committed |= cut
        members -= cut
        remaining -= len(cut)


def solve_csr_dgcdi_naive(instance: AttackInstance) -> SolverReport:
    """Seed-cutting without the seed-protection step.

    Kept as a reference: its YES answers are sound, but committing the
    whole seed set whenever the cut swallows it overlooks cheaper solutions
    that keep a seed alive, so its NO answers can be wrong.
    """
    name = "solve_csr_dgcdi_naive"
    if instance.rule.name != "csr":
        raise PreconditionError("consensus-start rule only")
    if instance.kind != DELETE:
        raise PreconditionError("plain deletion only")
    if instance.aplus:
        raise PreconditionError("destructive objectives only")
    phi = instance.society.phi
    targets = instance.aminus
    committed: set[int] = set()
    members = set(range(instance.n))
    remaining = instance.budget
    iterations = 0
    while True:
        iterations += 1
        seeds = _unanimous(phi, members)
        if set(seeds) & targets:
            return _report_no(name, "a targeted individual is qualified by every "
                                    "survivor", iterations)
        cut = min_vertex_separator(_csr_cut_graph(phi, members, targets, seeds))
        if not cut:
            return _report_yes(instance, delete_set(committed), name, iterations)
        if len(cut) > remaining:
            return _report_no(name, "the next cut exceeds the remaining budget",
                              iterations)
        committed |= cut
        members -= cut
        remaining -= len(cut)
        if set(seeds) - cut:
            return _report_yes(instance, delete_set(committed), name, iterations)


def solve_csr_rdgcdi(instance: AttackInstance) -> SolverReport:
    """Destructive relaxed deletion under the consensus-start rule, solved by
    rewriting to plain destruction of one extra individual."""
    name = "solve_csr_rdgcdi"
    inner = solve_csr_dgcdi_corrected(csr_rdgcdi_to_dgcdi(instance))
    if inner.verdict.answer:
        return _report_yes(instance, delete_set(inner.verdict.witness.U), name,
                           inner.iterations, inner.guesses_tried)
    return _report_no(name, inner.verdict.reason, inner.iterations, inner.guesses_tried)


def solve_csr_regcdi(instance: AttackInstance) -> SolverReport:
    """Exact relaxed deletion under the consensus-start rule.

    With nothing protected, emptying the outcome is a forced cascade on the
    unanimously qualified.  Otherwise some protected individual must become
    unanimous among the survivors, so each protected anchor is tried: delete
    every target a protected individual qualifies, then the anchor's
    remaining disqualifiers, and check the outcome.
    """
    name = "solve_csr_regcdi"
    if instance.rule.name != "csr":
        raise PreconditionError("consensus-start rule only")
    if instance.kind != RELAXED_DELETE:
        raise PreconditionError("relaxed deletion only")
    if instance.aplus | instance.aminus != instance.society.individuals():
        raise PreconditionError("exact objectives only: every individual is a target")
    n = instance.n
    phi = instance.society.phi
    if not instance.aplus:
        deleted, _ = _unanimity_purge(phi, n)
        if len(deleted) <= instance.budget:
            return _report_yes(instance, delete_set(deleted), name)
        return _report_no(name, "emptying the outcome needs more deletions than "
                                "the budget allows")
    phase1 = {a for a in instance.aminus
              if any(phi[p][a] == QUALIFY for p in instance.aplus)}
    if len(phase1) > instance.budget:
        return _report_no(name, "the protected individuals qualify more targets "
                                "than the budget covers")
    guesses = 0
    for a in sorted(instance.aplus):
        guesses += 1
        blockers = {b for b in range(n) if b not in phase1 and phi[b][a] == DISQUALIFY}
        if blockers & instance.aplus:
            continue  # includes a itself when a self-disqualifies
        U = phase1 | blockers
        if len(U) > instance.budget:
            continue
        sol = delete_set(U)
        if verify_solution(instance, sol):
            return _report_yes(instance, sol, name, 1, guesses)
    return _report_no(name, "no protected anchor admits a within-budget deletion set",
                      1, guesses)


# ---------------------------------------------------------------------------
# iterative consensus rules, deletion


def _solve_iterative_cgcdi(instance, liberal):
    name = "solve_2lic_cgcdi" if liberal else "solve_2ic_cgcdi"
    want = "2lic" if liberal else "2ic"
    if instance.rule.name != want:
        raise PreconditionError(f"rule {want!r} only")
    if instance.kind != DELETE:
        raise PreconditionError("plain deletion only")
    if instance.aminus:
        raise PreconditionError("constructive objectives only")
    soc = instance.society
    n = soc.n
    phi = soc.phi
    aplus = instance.aplus
    selfbad = [a for a in sorted(aplus) if phi[a][a] == DISQUALIFY]
    if selfbad:
        who = ", ".join(soc.label(a) for a in selfbad)
        return _report_no(name, f"{who} self-disqualify and can never be socially qualified")
    if aplus <= evaluate(instance.rule, soc):
        return _report_yes(instance, delete_set(()), name)
    iterations = 0
    guesses = 0
    for a_star in range(n):
        if phi[a_star][a_star] == DISQUALIFY:
            continue  # can never become unanimously qualified
        if any(phi[a_star][p] == DISQUALIFY for p in aplus):
            continue  # would sit in the seed set and block consensus forever
        guesses += 1
        removed = {b for b in range(n) if phi[b][a_star] == DISQUALIFY}
        if removed & aplus or len(removed) > instance.budget:
            continue
        ok = True
        while True:
            iterations += 1
            mem = [x for x in range(n) if x not in removed]
            k0 = _unanimous(phi, mem)
            bad = [x for x in k0 if any(phi[x][p] == DISQUALIFY for p in aplus)]
            if not bad:
                break
            if set(bad) & aplus:
                ok = False
                break
            removed.update(bad)
            if len(removed) > instance.budget:
                ok = False
                break
        if ok:
            return _report_yes(instance, delete_set(removed), name, iterations, guesses)
    if liberal:
        # no seed set at all also works: the outcome is then the self-qualifiers
        deleted, blocked = _unanimity_purge(phi, n, forbidden=aplus)
        guesses += 1
        if blocked is None and len(deleted) <= instance.budget:
            return _report_yes(instance, delete_set(deleted), name, iterations + 1, guesses)
    return _report_no(name, "no unanimity anchor fits the budget", iterations, guesses)


def solve_2ic_cgcdi(instance: AttackInstance) -> SolverReport:
    """Constructive plain deletion under the two-stage consensus rule: guess
    the individual that ends up unanimously qualified, then delete the forced
    dissenters until consensus on the protected set holds."""
    return _solve_iterative_cgcdi(instance, liberal=False)


def solve_2lic_cgcdi(instance: AttackInstance) -> SolverReport:
    """Constructive plain deletion under the two-stage liberal consensus
    rule: as for the consensus variant, plus the fallback of emptying the
    seed set so the self-qualifiers win by default."""
    return _solve_iterative_cgcdi(instance, liberal=True)


# ---------------------------------------------------------------------------
# bribery


def _run_ladder(instance, candidates, name):
    """Verify each candidate schedule and keep the cheapest valid one."""
    best_cost = None
    best_sol = None
    tried = 0
    for rows in candidates:
        tried += 1
        sol = bribe(rows)
        res = verify_solution(instance, sol)
        if res.valid and (best_cost is None or res.cost < best_cost):
            best_cost = res.cost
            best_sol = sol
    if best_sol is not None:
        return SolverReport(Verdict(True, witness=best_sol, cost=best_cost,
                                    certifier=name), 1, tried)
    return _report_no(name, "no candidate schedule meets the objective within "
                            "the budget", 1, tried)


def _cgb_2ic_candidates(instance):
    n = instance.n
    phi = instance.society.phi
    aplus = instance.aplus

    def clone(rows):
        return {i: list(r) for i, r in rows.items()}

    def freeze(rows):
        return {i: tuple(r) for i, r in rows.items()}

    base = {}
    for a in sorted(aplus):
        if phi[a][a] == DISQUALIFY:
            row = list(phi[a])
            row[a] = QUALIFY
            base[a] = row
    yield freeze(base)
    for a_star in range(n):
        rows = clone(base)

        def cur(i):
            return rows[i] if i in rows else list(phi[i])

        r = cur(a_star)
        r[a_star] = QUALIFY
        for p in aplus:
            r[p] = QUALIFY
        rows[a_star] = r
        for b in range(n):
            rb = cur(b)
            if rb[a_star] == DISQUALIFY:
                rb[a_star] = QUALIFY
                rows[b] = rb
        yield freeze(rows)
        phi2 = [rows[i] if i in rows else list(phi[i]) for i in range(n)]
        k0 = _unanimous(phi2, range(n))
        k0set = set(k0)
        obstruct = [k for k in sorted(aplus & k0set)
                    if any(phi2[k][p] == DISQUALIFY for p in aplus)]
        if obstruct:
            # everyone in the obstruction endorses the whole protected set
            v = clone(rows)
            for k in obstruct:
                rk = v[k] if k in v else list(phi[k])
                for p in aplus:
                    rk[p] = QUALIFY
                v[k] = rk
            yield freeze(v)
            # or two of them retreat to backing only themselves and the anchor,
            # clearing the seed set down to the anchor alone
            for k1, k2 in combinations(obstruct, 2):
                v = clone(rows)
                v[k1] = list(_row(n, (k1, a_star)))
                v[k2] = list(_row(n, (k2, a_star)))
                yield freeze(v)
            # or a third party wipes the seed set around the anchor
            for z in range(n):
                if z == a_star or z in obstruct:
                    continue
                v = clone(rows)
                rz = v[z] if z in v else list(phi[z])
                for k in k0:
                    if k != a_star:
                        rz[k] = DISQUALIFY
                if z in aplus:
                    rz[z] = QUALIFY
                v[z] = rz
                yield freeze(v)
        else:
            wipe_cols = [k for k in k0 if k != a_star and k not in aplus]
            if wipe_cols:
                for z in range(n):
                    v = clone(rows)
                    rz = v[z] if z in v else list(phi[z])
                    for k in wipe_cols:
                        rz[k] = DISQUALIFY
                    v[z] = rz
                    yield freeze(v)


def solve_2ic_cgb_priced(instance: AttackInstance) -> SolverReport:
    """Constructive bribery under the two-stage consensus rule.

    Fix the protected self-disqualifiers, guess the seed individual, buy
    the seed's disqualifiers over, then repair consensus: buy the seed
    members who block the protected set, or shrink the seed set to the
    anchor.  The cheapest verifying schedule is returned.  Works for unit
    prices too.
    """
    name = "solve_2ic_cgb_priced"
    if instance.rule.name != "2ic":
        raise PreconditionError("two-stage consensus rule only")
    if instance.kind != BRIBERY:
        raise PreconditionError("bribery only")
    if instance.aminus:
        raise PreconditionError("constructive objectives only")
    return _run_ladder(instance, _cgb_2ic_candidates(instance), name)


def _cgb_2lic_candidates(instance):
    n = instance.n
    phi = instance.society.phi
    aplus = instance.aplus
    prices = instance.prices if instance.priced else tuple(1 for _ in range(n))
    aplus_m1 = [a for a in sorted(aplus) if phi[a][a] == DISQUALIFY]
    if len(aplus_m1) >= 2:
        # each must be bribed anyway; backing only themselves empties the
        # seed set, and then the self-qualifiers win by default
        yield {a: _row(n, (a,)) for a in aplus_m1}
        return
    base = {}
    if aplus_m1:
        a = aplus_m1[0]
        row = list(phi[a])
        row[a] = QUALIFY
        base[a] = tuple(row)
    yield dict(base)
    phi_b = [list(r) for r in phi]
    for i, r in base.items():
        phi_b[i] = list(r)
    # one extra bribe on top of the forced fix
    for z in range(n):
        v = dict(base)
        v[z] = _row(n, (z,)) if z in aplus else _row(n, ())
        yield v
        if z in aplus:
            v2 = dict(base)
            v2[z] = _row(n, sorted(aplus))
            yield v2
    # a seed member that blocks consensus can be bought directly
    for k in _unanimous(phi_b, range(n)):
        rk = list(phi_b[k])
        changed = False
        for p in aplus:
            if rk[p] == DISQUALIFY:
                rk[p] = QUALIFY
                changed = True
        if changed:
            v = dict(base)
            v[k] = tuple(rk)
            yield v
    # two cheapest wipers guarantee an empty seed set
    order = sorted(range(n), key=lambda i: (prices[i], i))
    if aplus_m1:
        c1 = aplus_m1[0]
        rest = [i for i in order if i != c1]
        c2 = rest[0] if rest else None
    else:
        c1 = order[0]
        c2 = order[1] if n >= 2 else None
    if c2 is not None:
        v = dict(base)
        v[c1] = _row(n, (c1,)) if c1 in aplus else _row(n, ())
        v[c2] = _row(n, (c2,)) if c2 in aplus else _row(n, ())
        yield v


def solve_2lic_cgb_priced(instance: AttackInstance) -> SolverReport:
    """Constructive bribery under the two-stage liberal consensus rule.

    At most one protected self-disqualifier forces a bribe; beyond that a
    single extra bribe (a wiper or a bought seed member) or the two cheapest
    wipers always suffice, so all such schedules are priced and the cheapest
    verifying one wins.  Works for unit prices too.
    """
    name = "solve_2lic_cgb_priced"
    if instance.rule.name != "2lic":
        raise PreconditionError("two-stage liberal consensus rule only")
    if instance.kind != BRIBERY:
        raise PreconditionError("bribery only")
    if instance.aminus:
        raise PreconditionError("constructive objectives only")
    return _run_ladder(instance, _cgb_2lic_candidates(instance), name)


def solve_ic_2ic_dgb_priced(instance: AttackInstance) -> SolverReport:
    """Destructive bribery under the iterative consensus rules: one bought
    row of disqualifications empties the seed set, and with it the whole
    outcome, so the cheapest individual decides."""
    name = "solve_ic_2ic_dgb_priced"
    if instance.rule.name not in ("ic", "2ic"):
        raise PreconditionError("iterative consensus rules only")
    if instance.kind != BRIBERY:
        raise PreconditionError("bribery only")
    if instance.aplus:
        raise PreconditionError("destructive objectives only")
    n = instance.n
    f0 = evaluate(instance.rule, instance.society)
    if not (instance.aminus & f0):
        return _report_yes(instance, bribe({}), name)
    prices = instance.prices if instance.priced else tuple(1 for _ in range(n))
    z = min(range(n), key=lambda i: (prices[i], i))
    if prices[z] <= instance.budget:
        return _report_yes(instance, bribe({z: _row(n, ())}), name)
    return _report_no(name, "even the cheapest full-row bribe exceeds the budget")


def _gb_candidates(instance, liberal):
    n = instance.n
    phi = instance.society.phi
    aplus = instance.aplus
    aminus = instance.aminus
    aplus_m1 = [a for a in sorted(aplus) if phi[a][a] == DISQUALIFY]
    base = {}
    for a in aplus_m1:
        row = list(phi[a])
        row[a] = QUALIFY
        base[a] = tuple(row)
    yield dict(base)
    if liberal:
        # empty seed set: the outcome becomes exactly the surviving
        # self-qualifiers, which settles both target sets at once
        wipe = {a: _row(n, (a,)) for a in aplus_m1}
        for w in sorted(aminus):
            if phi[w][w] == QUALIFY:
                wipe[w] = _row(n, ())
        if wipe:
            yield dict(wipe)
        for z in range(n):
            if z in wipe:
                continue
            v = dict(wipe)
            v[z] = _row(n, (z,)) if z in aplus else _row(n, ())
            yield v
            if z in aplus:
                v2 = dict(wipe)
                v2[z] = _row(n, sorted(aplus))
                yield v2
    phi_b = [list(r) for r in phi]
    for a in aplus_m1:
        phi_b[a][a] = QUALIFY
    for a_star in sorted(set(range(n)) - aminus):
        blockers = [b for b in range(n) if b != a_star and phi_b[b][a_star] == DISQUALIFY]
        F = sorted(set(aplus_m1) | set(blockers))
        core = dict(base)
        for b in blockers:
            row = list(core.get(b, phi[b]))
            row[a_star] = QUALIFY
            core[b] = tuple(row)
        yield dict(core)
        full = dict(core)
        full[a_star] = _row(n, set(aplus) | {a_star})
        yield dict(full)
        # a funnel row leaves the anchor as the only seed member
        funnel = _row(n, (a_star,))
        for z in range(n):
            if z == a_star or z in aplus:
                continue
            v = dict(core)
            v[z] = funnel
            yield v
            v = dict(full)
            v[z] = funnel
            yield v
        bribed_protected = sorted(set(F) & aplus)
        if bribed_protected:
            v = dict(full)
            for b in bribed_protected:
                v[b] = _row(n, (b, a_star))
            yield v
            if len(bribed_protected) == 1:
                b = bribed_protected[0]
                v = dict(full)
                v[b] = _row(n, set(aplus) | {a_star})
                yield v
        if phi_b[a_star][a_star] == DISQUALIFY or \
                any(phi_b[a_star][p] == DISQUALIFY for p in aplus):
            continue  # the anchor's own row would need buying, handled above
        # promote a second individual whose dissenters all sit inside the
        # already-bribed set, keeping the anchor row untouched
        for a_p in F:
            if a_p == a_star:
                continue
            if any(b != a_p and b not in F and phi_b[b][a_p] == DISQUALIFY
                   for b in range(n)):
                continue
            sched = dict(core)
            for b in F:
                if b == a_p:
                    continue
                row = list(sched.get(b, phi[b]))
                row[a_p] = QUALIFY
                sched[b] = tuple(row)
            sched[a_p] = _row(n, set(aplus) | {a_p, a_star})
            yield dict(sched)
            for z in F:
                if z in aplus or z == a_p:
                    continue
                v = dict(sched)
                v[z] = _row(n, (a_p,))
                yield v
                v = dict(sched)
                v[z] = _row(n, (a_p, a_star))
                yield v
            for b in sorted((set(F) & aplus) - {a_p}):
                v = dict(sched)
                v[b] = _row(n, (b, a_p, a_star))
                yield v
        # fallback: point every bought row at the individuals who already
        # back the whole protected set
        phi_c = [list(r) for r in phi]
        for i, row in core.items():
            phi_c[i] = list(row)
        upl = {b for b in range(n) if b not in aminus
               and all(phi_c[b][p] == QUALIFY for p in aplus)}
        for extra in ((), tuple(sorted(aplus))):
            sched = dict(core)
            for a in aplus_m1:
                sched[a] = _row(n, {a} | upl | set(extra))
            for b in blockers:
                if b in aplus_m1:
                    continue
                keep = {b} if b in aplus else set()
                sched[b] = _row(n, upl | set(extra) | keep)
            yield sched


def solve_2lic_gb_unpriced(instance: AttackInstance) -> SolverReport:
    """Unpriced bribery under the two-stage liberal consensus rule with a
    destructive side: either empty the seed set outright, or anchor one
    individual as the surviving seed and funnel everyone else through it."""
    name = "solve_2lic_gb_unpriced"
    if instance.rule.name != "2lic":
        raise PreconditionError("two-stage liberal consensus rule only")
    if instance.kind != BRIBERY:
        raise PreconditionError("bribery only")
    if instance.priced:
        raise PreconditionError("unit prices only")
    if not instance.aminus:
        raise PreconditionError("constructive instances have a dedicated solver")
    return _run_ladder(instance, _gb_candidates(instance, liberal=True), name)


def solve_2ic_gb_unpriced(instance: AttackInstance) -> SolverReport:
    """Unpriced bribery under the two-stage consensus rule with both target
    sets nonempty.  The seed set can never be emptied here, so only the
    anchor schedules apply."""
    name = "solve_2ic_gb_unpriced"
    if instance.rule.name != "2ic":
        raise PreconditionError("two-stage consensus rule only")
    if instance.kind != BRIBERY:
        raise PreconditionError("bribery only")
    if instance.priced:
        raise PreconditionError("unit prices only")
    if not instance.aplus or not instance.aminus:
        raise PreconditionError("needs both target sets nonempty")
    return _run_ladder(instance, _gb_candidates(instance, liberal=False), name)


# ---------------------------------------------------------------------------
# microbribery


def _cgmb_flip_plan(phi, n, aplus, a_star):
    """Flip plan making a_star unanimously qualified with consensus on the
    protected set: forced self-entries, a_star's column and row, then one
    knock-out flip per dissenting seed member."""
    phi2 = [list(r) for r in phi]
    flips = []
    for a in sorted(aplus):
        if phi2[a][a] == DISQUALIFY:
            flips.append((a, a))
            phi2[a][a] = QUALIFY
    for b in range(n):
        if phi2[b][a_star] == DISQUALIFY:
            flips.append((b, a_star))
            phi2[b][a_star] = QUALIFY
    for p in sorted(aplus):
        if phi2[a_star][p] == DISQUALIFY:
            flips.append((a_star, p))
            phi2[a_star][p] = QUALIFY
    k0 = _unanimous(phi2, range(n))
    k0set = set(k0)
    bad = [k for k in k0 if any(phi2[k][p] == DISQUALIFY for p in aplus)]
    if bad:
        # one disqualification flip per dissenter removes it from the seed
        # set; a victim of the dissent is never unanimous, so z exists
        z = min(x for x in range(n) if x not in k0set)
        for k in bad:
            flips.append((z, k))
    return flips


def solve_2ic_cgmb(instance: AttackInstance) -> SolverReport:
    """Constructive entry-flip bribery under the two-stage consensus rule:
    guess the seed anchor, flip it unanimous and consenting, then knock each
    dissenting seed member out with a single flip.  Minimum over anchors."""
    name = "solve_2ic_cgmb"
    if instance.rule.name != "2ic":
        raise PreconditionError("two-stage consensus rule only")
    if instance.kind != MICROBRIBERY:
        raise PreconditionError("entry flips only")
    if instance.priced:
        raise PreconditionError("unit prices only")
    if instance.aminus:
        raise PreconditionError("constructive objectives only")
    phi = instance.society.phi
    n = instance.n
    best_cost = None
    best_sol = None
    guesses = 0
    for a_star in range(n):
        guesses += 1
        flips = _cgmb_flip_plan(phi, n, instance.aplus, a_star)
        sol = microbribe(flips)
        res = verify_solution(instance, sol)
        if res.valid and (best_cost is None or res.cost < best_cost):
            best_cost = res.cost
            best_sol = sol
    if best_sol is not None:
        return SolverReport(Verdict(True, witness=best_sol, cost=best_cost,
                                    certifier=name), 1, guesses)
    return _report_no(name, "no anchor needs few enough flips", 1, guesses)


def solve_2lic_cgmb(instance: AttackInstance) -> SolverReport:
    """Constructive entry-flip bribery under the two-stage liberal consensus
    rule: fix the protected self-entries, then knock each dissenting seed
    member out with a single flip; an emptied seed set is fine here."""
    name = "solve_2lic_cgmb"
    if instance.rule.name != "2lic":
        raise PreconditionError("two-stage liberal consensus rule only")
    if instance.kind != MICROBRIBERY:
        raise PreconditionError("entry flips only")
    if instance.priced:
        raise PreconditionError("unit prices only")
    if instance.aminus:
        raise PreconditionError("constructive objectives only")
    phi = instance.society.phi
    n = instance.n
    phi2 = [list(r) for r in phi]
    flips = []
    for a in sorted(instance.aplus):
        if phi2[a][a] == DISQUALIFY:
            flips.append((a, a))
            phi2[a][a] = QUALIFY
    k0 = _unanimous(phi2, range(n))
    k0set = set(k0)
    bad = [k for k in k0 if any(phi2[k][p] == DISQUALIFY for p in instance.aplus)]
    if bad:
        z = min(x for x in range(n) if x not in k0set)
        for k in bad:
            flips.append((z, k))
    sol = microbribe(flips)
    res = verify_solution(instance, sol)
    if res.valid:
        return SolverReport(Verdict(True, witness=sol, cost=res.cost,
                                    certifier=name), 1, 1)
    return _report_no(name, f"{len(flips)} forced flips exceed the budget "
                            f"{instance.budget}", 1, 1)


# ---------------------------------------------------------------------------
# dispatch


def find_poly_solver(instance: AttackInstance):
    """The efficient solver whose cell covers the instance, as a
    (name, callable) pair, or None when no polynomial algorithm is known."""
    rule = instance.rule
    kind = instance.kind
    aplus, aminus = instance.aplus, instance.aminus

    def named(fn):
        return fn.__name__, fn

    if kind == ADD:
        return None
    if kind in (DELETE, RELAXED_DELETE):
        if rule.name == "consent":
            s, t = rule.s, rule.t
            if kind == RELAXED_DELETE:
                if not aplus:
                    return named(solve_consent_s1_rdgcdi) if s == 1 else None
                if t == 1 or (s == 1 and t == 2):
                    return named(solve_consent_easy_cases)
                return None
            if not aminus:
                return named(solve_consent_easy_cases) if t == 1 else None
            return named(solve_consent_easy_cases) if s == 1 else None
        if rule.name == "lsr":
            if aplus:
                return named(solve_consent_easy_cases)
            if kind == RELAXED_DELETE:
                return named(solve_lsr_rdgcdi)
            return None
        if rule.name == "csr":
            if kind == DELETE:
                if not aplus:
                    return named(solve_csr_dgcdi_corrected)
                if aminus:
                    return named(solve_consent_easy_cases)
                return None
            if not aplus:
                return named(solve_csr_rdgcdi)
            if aplus | aminus == instance.society.individuals():
                return named(solve_csr_regcdi)
            return None
        if rule.name == "2ic" and kind == DELETE and not aminus:
            return named(solve_2ic_cgcdi)
        if rule.name == "2lic" and kind == DELETE and not aminus:
            return named(solve_2lic_cgcdi)
        return None
    if kind == BRIBERY:
        if rule.name in ("ic", "2ic") and not aplus:
            return named(solve_ic_2ic_dgb_priced)
        if rule.name == "2ic":
            if not aminus:
                return named(solve_2ic_cgb_priced)
            return None if instance.priced else named(solve_2ic_gb_unpriced)
        if rule.name == "2lic":
            if not aminus:
                return named(solve_2lic_cgb_priced)
            return None if instance.priced else named(solve_2lic_gb_unpriced)
        return None
    if kind == MICROBRIBERY:
        if instance.priced or aminus:
            return None
        if rule.name == "2ic":
            return named(solve_2ic_cgmb)
        if rule.name == "2lic":
            return named(solve_2lic_cgmb)
        return None
    return None
