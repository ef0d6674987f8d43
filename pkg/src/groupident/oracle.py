"""Brute-force reference solvers.

Everything here works directly from the rule definitions by exhaustive
enumeration, so the results can be trusted as ground truth for small
societies.  The rule evaluation is reimplemented on bitmasks instead of
reusing :mod:`groupident.rules`; the two paths are compared in the test
suite, which would catch a shared bug in either one.

Enumeration orders are fixed (size then lexicographic, cheapest first
for priced attacks), so verdicts and witnesses are deterministic.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

from .model import (
    ADD,
    BRIBERY,
    CONSTRUCTIVE,
    DELETE,
    DESTRUCTIVE,
    EXACT,
    GENERAL,
    MICROBRIBERY,
    QUALIFY,
    RELAXED_DELETE,
    AttackInstance,
    Rule,
    Society,
    Verdict,
    add_set,
    bribe,
    delete_set,
    make_society,
    microbribe,
)


class OracleCapError(RuntimeError):
    """The instance is too large for exhaustive search."""


@dataclass(frozen=True)
class OracleLimits:
    control_max_n: int = 7
    bribery_max_n: int = 5
    micro_max_flips: int = 4


DEFAULT_LIMITS = OracleLimits()


# ---------------------------------------------------------------------------
# bitmask rule evaluation


def _row_masks(phi):
    n = len(phi)
    rows = []
    for i in range(n):
        m = 0
        for j in range(n):
            if phi[i][j] == QUALIFY:
                m |= 1 << j
        rows.append(m)
    return rows


def _cols_from_rows(rows, n):
    cols = [0] * n
    for i, r in enumerate(rows):
        bit = 1 << i
        for j in range(n):
            if r >> j & 1:
                cols[j] |= bit
    return cols


def _self_mask(rows, n):
    m = 0
    for a in range(n):
        if rows[a] >> a & 1:
            m |= 1 << a
    return m


def _unanimous_mask(cols, mem):
    k = 0
    rest = mem
    while rest:
        low = rest & -rest
        a = low.bit_length() - 1
        if cols[a] & mem == mem:
            k |= low
        rest ^= low
    return k


def _closure(cols, mem, seed):
    k = seed
    changed = True
    while changed:
        changed = False
        rest = mem & ~k
        while rest:
            low = rest & -rest
            a = low.bit_length() - 1
            if cols[a] & k:
                k |= low
                changed = True
            rest ^= low
    return k


def eval_mask(rule: Rule, rows, cols, mem: int, n: int) -> int:
    """Socially qualified members of ``mem`` as a bitmask."""
    selfq = _self_mask(rows, n) & mem
    if rule.name == "consent":
        total = mem.bit_count()
        out = 0
        rest = mem
        while rest:
            low = rest & -rest
            a = low.bit_length() - 1
            quals = (cols[a] & mem).bit_count()
            if selfq >> a & 1:
                if quals >= rule.s:
                    out |= low
            else:
                if total - quals < rule.t:
                    out |= low
            rest ^= low
        return out
    if rule.name == "lsr":
        return _closure(cols, mem, selfq)
    if rule.name == "csr":
        return _closure(cols, mem, _unanimous_mask(cols, mem))
    if rule.name == "ic":
        k = _unanimous_mask(cols, mem)
        q = k
        while q:
            fresh = 0
            rest = mem & selfq & ~k
            while rest:
                low = rest & -rest
                a = low.bit_length() - 1
                if cols[a] & q == q:
                    fresh |= low
                rest ^= low
            k |= fresh
            q = fresh
        return k
    if rule.name == "2ic":
        k0 = _unanimous_mask(cols, mem)
        if not k0:
            return 0
        extra = 0
        rest = mem & selfq
        while rest:
            low = rest & -rest
            a = low.bit_length() - 1
            if cols[a] & k0 == k0:
                extra |= low
            rest ^= low
        return k0 | extra
    if rule.name == "2lic":
        k0 = _unanimous_mask(cols, mem)
        if not k0:
            return mem & selfq
        extra = 0
        rest = mem & selfq
        while rest:
            low = rest & -rest
            a = low.bit_length() - 1
            if cols[a] & k0 == k0:
                extra |= low
            rest ^= low
        return k0 | extra
    raise ValueError(f"unknown rule {rule!r}")


def bitmask_qualified(rule: Rule, society: Society, members=None) -> frozenset:
    """Frozenset variant of :func:`eval_mask`, used to cross-check rules."""
    n = society.n
    rows = _row_masks(society.phi)
    cols = _cols_from_rows(rows, n)
    if members is None:
        mem = (1 << n) - 1
    else:
        mem = 0
        for a in members:
            mem |= 1 << a
    out = eval_mask(rule, rows, cols, mem, n)
    return frozenset(a for a in range(n) if out >> a & 1)


def _mask_of(items) -> int:
    m = 0
    for a in items:
        m |= 1 << a
    return m


# ---------------------------------------------------------------------------
# exhaustive solvers


def brute_control(instance: AttackInstance, limits: OracleLimits = DEFAULT_LIMITS) -> Verdict:
    """Exhaustive search over legal add/delete sets, smallest first."""
    if instance.kind not in (ADD, DELETE, RELAXED_DELETE):
        raise ValueError(f"brute_control cannot handle kind {instance.kind!r}")
    n = instance.n
    if n > limits.control_max_n:
        raise OracleCapError(
            f"control oracle capped at n={limits.control_max_n}, got n={n}"
        )
    rows = _row_masks(instance.society.phi)
    cols = _cols_from_rows(rows, n)
    aplus = _mask_of(instance.aplus)
    aminus = _mask_of(instance.aminus)
    base = _mask_of(instance.base_set())
    pool = sorted(instance.legal_pool())
    adding = instance.kind == ADD

    for k in range(0, min(instance.budget, len(pool)) + 1):
        for combo in itertools.combinations(pool, k):
            u = _mask_of(combo)
            mem = (base | u) if adding else (base & ~u)
            q = eval_mask(instance.rule, rows, cols, mem, n)
            if q & aplus == aplus and not q & aminus:
                witness = add_set(combo) if adding else delete_set(combo)
                return Verdict(True, witness=witness, cost=k, certifier="brute-control")
    return Verdict(False, certifier="brute-control")


def _bribe_row_options(original: int, aplus: int, u: int, n: int):
    """All replacement rows for individual ``u``, plausible fixes first."""
    full = (1 << n) - 1
    canonical = [
        (aplus | 1 << u) & full,
        aplus & full,
        0,
        full,
        1 << u,
    ]
    seen = set()
    out = []
    for r in canonical:
        if r != original and r not in seen:
            seen.add(r)
            out.append(r)
    for r in range(full + 1):
        if r != original and r not in seen:
            out.append(r)
    return out


def brute_bribery(instance: AttackInstance, limits: OracleLimits = DEFAULT_LIMITS) -> Verdict:
    """Exhaustive search over briber sets (cheapest first) and their rows."""
    if instance.kind != BRIBERY:
        raise ValueError(f"brute_bribery cannot handle kind {instance.kind!r}")
    n = instance.n
    if n > limits.bribery_max_n:
        raise OracleCapError(
            f"bribery oracle capped at n={limits.bribery_max_n}, got n={n}"
        )
    prices = instance.prices if instance.prices is not None else tuple([1] * n)
    rows = _row_masks(instance.society.phi)
    aplus = _mask_of(instance.aplus)
    aminus = _mask_of(instance.aminus)
    mem = (1 << n) - 1

    subsets = []
    for k in range(0, n + 1):
        for combo in itertools.combinations(range(n), k):
            cost = sum(prices[u] for u in combo)
            if cost <= instance.budget:
                subsets.append((cost, combo))
    subsets.sort(key=lambda item: (item[0], item[1]))

    for cost, combo in subsets:
        options = [_bribe_row_options(rows[u], aplus, u, n) for u in combo]
        for choice in itertools.product(*options):
            new_rows = list(rows)
            for u, r in zip(combo, choice):
                new_rows[u] = r
            cols = _cols_from_rows(new_rows, n)
            q = eval_mask(instance.rule, new_rows, cols, mem, n)
            if q & aplus == aplus and not q & aminus:
                bribed = {
                    u: tuple(QUALIFY if r >> j & 1 else -QUALIFY for j in range(n))
                    for u, r in zip(combo, choice)
                }
                witness = bribe(bribed)
                return Verdict(True, witness=witness, cost=cost, certifier="brute-bribery")
    return Verdict(False, certifier="brute-bribery")


def brute_microbribery(instance: AttackInstance, limits: OracleLimits = DEFAULT_LIMITS) -> Verdict:
    """Exhaustive search over entry flip sets, up to ``micro_max_flips``."""
    if instance.kind != MICROBRIBERY:
        raise ValueError(f"brute_microbribery cannot handle kind {instance.kind!r}")
    n = instance.n
    if n > limits.bribery_max_n:
        raise OracleCapError(
            f"microbribery oracle capped at n={limits.bribery_max_n}, got n={n}"
        )
    if instance.price_matrix is not None:
        price = {(i, j): instance.price_matrix[i][j] for i in range(n) for j in range(n)}
    else:
        price = {(i, j): 1 for i in range(n) for j in range(n)}
    # every flip costs at least 1, so no solution uses more than budget flips
    needed = min(instance.budget, n * n)
    capped = needed > limits.micro_max_flips
    max_size = min(needed, limits.micro_max_flips)

    rows = _row_masks(instance.society.phi)
    aplus = _mask_of(instance.aplus)
    aminus = _mask_of(instance.aminus)
    mem = (1 << n) - 1
    cells = [(i, j) for i in range(n) for j in range(n)]

    best = None
    for k in range(0, max_size + 1):
        for combo in itertools.combinations(cells, k):
            cost = sum(price[c] for c in combo)
            if cost > instance.budget:
                continue
            if best is not None and (cost, combo) >= best[:2]:
                continue
            new_rows = list(rows)
            for i, j in combo:
                new_rows[i] ^= 1 << j
            cols = _cols_from_rows(new_rows, n)
            q = eval_mask(instance.rule, new_rows, cols, mem, n)
            if q & aplus == aplus and not q & aminus:
                best = (cost, combo)
        if best is not None and instance.price_matrix is None:
            break  # unpriced: cost == size, nothing smaller can follow
    if best is not None:
        cost, combo = best
        return Verdict(
            True,
            witness=microbribe(combo),
            cost=cost,
            certifier="brute-microbribery",
        )
    if capped:
        raise OracleCapError(
            f"microbribery oracle capped at {limits.micro_max_flips} flips, "
            f"budget {instance.budget} may allow more"
        )
    return Verdict(False, certifier="brute-microbribery")


def brute_force(instance: AttackInstance, limits: OracleLimits = DEFAULT_LIMITS) -> Verdict:
    """Dispatch to the matching exhaustive solver."""
    if instance.kind in (ADD, DELETE, RELAXED_DELETE):
        return brute_control(instance, limits)
    if instance.kind == BRIBERY:
        return brute_bribery(instance, limits)
    return brute_microbribery(instance, limits)


# ---------------------------------------------------------------------------
# exhaustive immunity sweeps


def _target_splits(n: int, objective: str):
    everyone = frozenset(range(n))
    subsets = []
    for k in range(1, n + 1):
        subsets.extend(frozenset(c) for c in itertools.combinations(range(n), k))
    if objective == CONSTRUCTIVE:
        for aplus in subsets:
            yield aplus, frozenset()
    elif objective == DESTRUCTIVE:
        for aminus in subsets:
            yield frozenset(), aminus
    elif objective == EXACT:
        for aplus in subsets:
            aminus = everyone - aplus
            if aminus:
                yield aplus, aminus
    elif objective == GENERAL:
        for aplus in subsets:
            for aminus in subsets:
                if aplus & aminus or aplus | aminus == everyone:
                    continue
                yield aplus, aminus
    else:
        raise ValueError(f"unknown objective {objective!r}")


def immunity_search(
    rule: Rule,
    kind: str,
    objective: str,
    n: int,
    limits: OracleLimits = DEFAULT_LIMITS,
):
    """Exhaustively look for any successful attack at society size ``n``.

    Only instances meeting the usual sanity conditions are tried: the
    constructive targets must not all be qualified already, and at least
    one destructive target must be qualified already.  Returns the first
    ``(instance, witness)`` found, or ``None`` if the rule resists every
    attack of this shape, which is a proof for societies of this size.
    """
    if n > 3:
        raise OracleCapError("immunity sweep is exhaustive, n>3 is too large")
    all_rows = list(range(1 << n))
    everyone = frozenset(range(n))
    for rows_choice in itertools.product(all_rows, repeat=n):
        phi = tuple(
            tuple(QUALIFY if r >> j & 1 else -QUALIFY for j in range(n))
            for r in rows_choice
        )
        society = make_society(phi)
        rows = _row_masks(phi)
        cols = _cols_from_rows(rows, n)
        for aplus, aminus in _target_splits(n, objective):
            if kind == ADD:
                bases = [
                    frozenset(t)
                    for k in range(n)
                    for t in itertools.combinations(range(n), k)
                    if aplus <= frozenset(t) and aminus <= frozenset(t) and frozenset(t) != everyone
                ]
            else:
                bases = [everyone]
            for base in bases:
                if kind == DELETE and aplus and aminus and aplus | aminus == everyone:
                    continue  # exact plain deletion is undefined
                f0 = eval_mask(rule, rows, cols, _mask_of(base), n)
                apm = _mask_of(aplus)
                amm = _mask_of(aminus)
                if aplus and f0 & apm == apm:
                    continue
                if aminus and not f0 & amm:
                    continue
                instance = AttackInstance(
                    society=society,
                    rule=rule,
                    kind=kind,
                    aplus=aplus,
                    aminus=aminus,
                    budget=n,
                    T=base if kind == ADD else None,
                )
                pool = instance.legal_pool()
                if not pool and kind != ADD:
                    continue
                verdict = brute_control(instance, limits)
                if verdict.answer:
                    return instance, verdict.witness
    return None


@dataclass(frozen=True)
class NoWitnessFound:
    trials: int


@dataclass(frozen=True)
class SusceptibilityWitness:
    instance: AttackInstance
    solution: object


def immunity_check(rule, kind, objective, sampler, trials=1000,
                   limits: OracleLimits = DEFAULT_LIMITS):
    """Sample instances and hunt for any successful attack.

    sampler(i) must yield an AttackInstance; draws whose rule, kind, or
    objective differ from the requested cell, or whose targets are already
    met before the attack, are discarded.  Returns the first witness found,
    else NoWitnessFound carrying the number of instances actually checked.
    Sampling corroborates immunity, it cannot prove it; immunity_search
    sweeps all profiles exhaustively for n <= 3.
    """
    checked = 0
    for i in range(trials):
        instance = sampler(i)
        if instance is None:
            continue
        if instance.rule != rule or instance.kind != kind:
            continue
        if instance.objective() != objective:
            continue
        f0 = bitmask_qualified(instance.rule, instance.society, instance.base_set())
        if instance.aplus and instance.aplus <= f0:
            continue
        if instance.aminus and not (instance.aminus & f0):
            continue
        checked += 1
        try:
            verdict = brute_force(instance, limits)
        except OracleCapError:
            continue
        if verdict.answer:
            return SusceptibilityWitness(instance, verdict.witness)
    return NoWitnessFound(checked)
