"""Societies, attack instances, solutions, and their application/verification.

Everything downstream (rules, solvers, oracles, reduction generators) works in
terms of the types defined here.  Individuals are 0-indexed integers; labels
are cosmetic display names only.
"""

from __future__ import annotations

import json
import random
from dataclasses import dataclass, field

QUALIFY = 1
DISQUALIFY = -1

ADD = "add"
DELETE = "delete"
RELAXED_DELETE = "relaxed-delete"
BRIBERY = "bribery"
MICROBRIBERY = "microbribery"

KINDS = (ADD, DELETE, RELAXED_DELETE, BRIBERY, MICROBRIBERY)

CONSTRUCTIVE = "constructive"
DESTRUCTIVE = "destructive"
EXACT = "exact"
GENERAL = "general"


class InvalidInstance(ValueError):
    """Structurally ill-formed society, rule, instance, or solution."""


class SolutionMismatch(ValueError):
    """Solution variant or indices incompatible with the instance."""


@dataclass(frozen=True)
class Rule:
    """One of the six social rules.

    name is "consent", "lsr", "csr", "ic", "2ic" or "2lic"; s and t are the
    consent thresholds and stay None for the other five rules.
    """

    name: str
    s: int | None = None
    t: int | None = None

    def __post_init__(self):
        if self.name == "consent":
            if not (isinstance(self.s, int) and isinstance(self.t, int)):
                raise InvalidInstance("consent rule needs integer s and t")
            if self.s < 1 or self.t < 1:
                raise InvalidInstance("consent thresholds must satisfy s >= 1, t >= 1")
        elif self.name in ("lsr", "csr", "ic", "2ic", "2lic"):
            if self.s is not None or self.t is not None:
                raise InvalidInstance(f"rule {self.name} takes no thresholds")
        else:
            raise InvalidInstance(f"unknown rule {self.name!r}")

    def __str__(self):
        if self.name == "consent":
            return f"consent({self.s},{self.t})"
        return self.name


def consent(s: int, t: int) -> Rule:
    return Rule("consent", s, t)


LSR = Rule("lsr")
CSR = Rule("csr")
IC = Rule("ic")
TWO_IC = Rule("2ic")
TWO_LIC = Rule("2lic")


def rule_to_json(rule: Rule):
    if rule.name == "consent":
        return {"consent": {"s": rule.s, "t": rule.t}}
    return rule.name


def rule_from_json(obj) -> Rule:
    if isinstance(obj, str):
        return Rule(obj)
    if isinstance(obj, dict) and set(obj) == {"consent"}:
        inner = obj["consent"]
        return consent(inner["s"], inner["t"])
    raise InvalidInstance(f"cannot parse rule from {obj!r}")


@dataclass(frozen=True)
class Society:
    """n individuals plus the binary profile phi.

    phi[i][j] == 1 means i qualifies j, -1 means i disqualifies j.
    """

    phi: tuple[tuple[int, ...], ...]
    labels: tuple[str, ...] | None = None

    def __post_init__(self):
        n = len(self.phi)
        if n < 1:
            raise InvalidInstance("society needs at least one individual")
        for row in self.phi:
            if len(row) != n:
                raise InvalidInstance("profile must be square")
            for v in row:
                if v not in (QUALIFY, DISQUALIFY):
                    raise InvalidInstance(f"profile entries must be -1 or 1, got {v!r}")
        if self.labels is not None and len(self.labels) != n:
            raise InvalidInstance("labels must match individual count")

    @property
    def n(self) -> int:
        return len(self.phi)

    def individuals(self) -> frozenset[int]:
        return frozenset(range(self.n))

    def label(self, i: int) -> str:
        if self.labels is not None:
            return self.labels[i]
        return f"a{i}"


def make_society(rows, labels=None) -> Society:
    phi = tuple(tuple(int(v) for v in row) for row in rows)
    return Society(phi, tuple(labels) if labels is not None else None)


@dataclass(frozen=True)
class AttackInstance:
    """A attack problem instance: society, rule, attack kind, targets, budget.

    aplus is the set the attacker wants socially qualified, aminus the set
    they want socially disqualified.  T is the initial subset for the adding
    kind.  prices is the per-individual price vector (priced bribery) and
    price_matrix the per-entry price matrix (priced microbribery).
    """

    society: Society
    rule: Rule
    kind: str
    aplus: frozenset[int]
    aminus: frozenset[int]
    budget: int
    priced: bool = False
    T: frozenset[int] | None = None
    prices: tuple[int, ...] | None = None
    price_matrix: tuple[tuple[int, ...], ...] | None = None

    def __post_init__(self):
        n = self.society.n
        everyone = self.society.individuals()
        if self.kind not in KINDS:
            raise InvalidInstance(f"unknown attack kind {self.kind!r}")
        if not isinstance(self.budget, int) or self.budget < 0:
            raise InvalidInstance("budget must be a non-negative integer")
        if not self.aplus <= everyone or not self.aminus <= everyone:
            raise InvalidInstance("target sets must be subsets of the society")
        if self.aplus & self.aminus:
            raise InvalidInstance("aplus and aminus must be disjoint")
        if not self.aplus and not self.aminus:
            raise InvalidInstance("at least one target set must be nonempty")
        if self.kind == ADD:
            if self.T is None:
                raise InvalidInstance("adding kind needs the initial subset T")
            if not self.T <= everyone:
                raise InvalidInstance("T must be a subset of the society")
            if not (self.aplus | self.aminus) <= self.T:
                raise InvalidInstance("target sets must lie inside T for the adding kind")
        elif self.T is not None:
            raise InvalidInstance("T is only meaningful for the adding kind")
        if self.kind == DELETE and self.aplus and self.aminus \
                and self.aplus | self.aminus == everyone:
            # no exact variant exists for plain deletion: the attacker could
            # not delete anyone
            raise InvalidInstance("exact objective is undefined for plain deletion")
        if self.priced and self.kind not in (BRIBERY, MICROBRIBERY):
            raise InvalidInstance("prices only apply to bribery and microbribery")
        if self.kind == BRIBERY and self.priced:
            if self.prices is None or len(self.prices) != n:
                raise InvalidInstance("priced bribery needs one price per individual")
            if any(not isinstance(p, int) or p < 1 for p in self.prices):
                raise InvalidInstance("prices must be positive integers")
        elif self.prices is not None:
            raise InvalidInstance("prices only belong to priced bribery instances")
        if self.kind == MICROBRIBERY and self.priced:
            pm = self.price_matrix
            if pm is None or len(pm) != n or any(len(r) != n for r in pm):
                raise InvalidInstance("priced microbribery needs an n-by-n price matrix")
            if any(not isinstance(p, int) or p < 1 for r in pm for p in r):
                raise InvalidInstance("entry prices must be positive integers")
        elif self.price_matrix is not None:
            raise InvalidInstance("price_matrix only belongs to priced microbribery")

    @property
    def n(self) -> int:
        return self.society.n

    def base_set(self) -> frozenset[int]:
        """The individual set the rule is evaluated on before any attack."""
        if self.kind == ADD:
            return self.T
        return self.society.individuals()

    def universe(self) -> frozenset[int]:
        """The set the exactness condition ranges over (T for adding, N else)."""
        return self.T if self.kind == ADD else self.society.individuals()

    def objective(self) -> str:
        if self.aplus and self.aminus:
            if self.aplus | self.aminus == self.universe():
                return EXACT
            return GENERAL
        if self.aminus:
            return DESTRUCTIVE
        if self.aplus == self.universe():
            return EXACT
        return CONSTRUCTIVE

    def legal_pool(self) -> frozenset[int]:
        """Individuals the attacker may add/delete/bribe, per the kind."""
        everyone = self.society.individuals()
        if self.kind == ADD:
            return everyone - self.T
        if self.kind == DELETE:
            return everyone - self.aplus - self.aminus
        if self.kind == RELAXED_DELETE:
            return everyone - self.aplus
        return everyone


@dataclass(frozen=True)
class Solution:
    """An attack the solver proposes: what to add/delete/bribe/flip."""

    kind: str  # "add", "delete", "bribe", "microbribe"
    U: frozenset[int] | None = None
    rows: tuple[tuple[int, tuple[int, ...]], ...] | None = None
    flips: frozenset[tuple[int, int]] | None = None

    def __post_init__(self):
        if self.kind in ("add", "delete"):
            if self.U is None or self.rows is not None or self.flips is not None:
                raise SolutionMismatch(f"{self.kind} solution carries exactly U")
        elif self.kind == "bribe":
            if self.rows is None or self.U is not None or self.flips is not None:
                raise SolutionMismatch("bribe solution carries exactly rows")
            seen = [i for i, _ in self.rows]
            if len(seen) != len(set(seen)):
                raise SolutionMismatch("duplicate bribed individual")
            if list(seen) != sorted(seen):
                raise SolutionMismatch("bribed rows must be sorted by individual")
        elif self.kind == "microbribe":
            if self.flips is None or self.U is not None or self.rows is not None:
                raise SolutionMismatch("microbribe solution carries exactly flips")
        else:
            raise SolutionMismatch(f"unknown solution kind {self.kind!r}")


def add_set(U) -> Solution:
    return Solution("add", U=frozenset(U))


def delete_set(U) -> Solution:
    return Solution("delete", U=frozenset(U))


def bribe(rows) -> Solution:
    """rows: mapping or iterable of (individual, replacement outgoing row)."""
    if hasattr(rows, "items"):
        rows = rows.items()
    packed = tuple(sorted((int(i), tuple(int(v) for v in row)) for i, row in rows))
    return Solution("bribe", rows=packed)


def microbribe(flips) -> Solution:
    return Solution("microbribe", flips=frozenset((int(i), int(j)) for i, j in flips))


_SOLUTION_KIND_FOR = {
    ADD: "add",
    DELETE: "delete",
    RELAXED_DELETE: "delete",
    BRIBERY: "bribe",
    MICROBRIBERY: "microbribe",
}


def apply_solution(instance: AttackInstance, sol: Solution):
    """Apply sol to the instance.  Returns (individual set, profile).

    Pure: the instance is unchanged.  Raises SolutionMismatch on variant
    mismatch, out-of-range indices, or deletion of a protected individual.
    """
    if sol.kind != _SOLUTION_KIND_FOR[instance.kind]:
        raise SolutionMismatch(
            f"solution kind {sol.kind!r} does not fit attack kind {instance.kind!r}")
    soc = instance.society
    everyone = soc.individuals()
    if sol.kind in ("add", "delete"):
        if not sol.U <= everyone:
            raise SolutionMismatch("solution indices out of range")
        pool = instance.legal_pool()
        if not sol.U <= pool:
            raise SolutionMismatch(
                f"individuals {sorted(sol.U - pool)} may not be touched by this attack")
        if sol.kind == "add":
            return instance.T | sol.U, soc.phi
        return everyone - sol.U, soc.phi
    if sol.kind == "bribe":
        phi = [list(row) for row in soc.phi]
        for i, row in sol.rows:
            if i not in everyone:
                raise SolutionMismatch("bribed individual out of range")
            if len(row) != soc.n or any(v not in (QUALIFY, DISQUALIFY) for v in row):
                raise SolutionMismatch("replacement rows must be full rows over -1/1")
            phi[i] = list(row)
        return everyone, tuple(tuple(r) for r in phi)
    # microbribe
    phi = [list(row) for row in soc.phi]
    for i, j in sol.flips:
        if i not in everyone or j not in everyone:
            raise SolutionMismatch("flip indices out of range")
        phi[i][j] = -phi[i][j]
    return everyone, tuple(tuple(r) for r in phi)


def solution_cost(instance: AttackInstance, sol: Solution) -> int:
    """The size or price actually spent.  Bribe rows equal to the original
    profile row are dropped before costing."""
    if sol.kind in ("add", "delete"):
        return len(sol.U)
    if sol.kind == "bribe":
        changed = [i for i, row in sol.rows if row != instance.society.phi[i]]
        if instance.priced:
            return sum(instance.prices[i] for i in changed)
        return len(changed)
    if instance.priced:
        return sum(instance.price_matrix[i][j] for i, j in sol.flips)
    return len(sol.flips)


@dataclass(frozen=True)
class VerifyResult:
    valid: bool
    cost: int | None = None
    reason: str | None = None

    def __bool__(self):
        return self.valid


def verify_solution(instance: AttackInstance, sol: Solution) -> VerifyResult:
    """Check that sol achieves the instance's objective within budget.

    Structural problems raise; semantic failures come back as an invalid
    result with a reason.
    """
    from . import rules  # late import: rules depends on this module

    members, phi = apply_solution(instance, sol)
    # deleting the whole society leaves nobody socially qualified
    qualified = rules.evaluate(instance.rule, Society(phi), members) if members \
        else frozenset()
    missing = instance.aplus - qualified
    if missing:
        who = ", ".join(instance.society.label(i) for i in sorted(missing))
        return VerifyResult(False, reason=f"{who} not socially qualified")
    # individuals deleted from the society cannot be socially qualified, so a
    # deleted aminus member counts as satisfied automatically
    still_in = instance.aminus & qualified
    if still_in:
        who = ", ".join(instance.society.label(i) for i in sorted(still_in))
        return VerifyResult(False, reason=f"{who} still socially qualified")
    cost = solution_cost(instance, sol)
    if cost > instance.budget:
        return VerifyResult(False, cost=cost, reason="budget exceeded")
    return VerifyResult(True, cost=cost)


@dataclass(frozen=True)
class Verdict:
    answer: bool
    witness: Solution | None = None
    cost: int | None = None
    certifier: str = ""
    reason: str | None = None

    def __post_init__(self):
        if self.answer and self.witness is None:
            raise InvalidInstance("YES verdicts must carry a witness")


@dataclass(frozen=True)
class Classification:
    protective: bool
    aplus_initially_met: bool
    aminus_initially_met: bool


def classify_instance(instance: AttackInstance) -> Classification:
    """Evaluate the rule on the untouched society and report target status.

    protective means aplus is nonempty and already fully socially qualified.
    """
    from . import rules

    qualified = rules.evaluate(instance.rule, instance.society, instance.base_set())
    aplus_met = instance.aplus <= qualified
    aminus_met = not (instance.aminus & qualified)
    return Classification(
        protective=bool(instance.aplus) and aplus_met,
        aplus_initially_met=aplus_met,
        aminus_initially_met=aminus_met,
    )


def random_instance(seed, n, rule, kind, objective, density=0.5, priced=False) -> AttackInstance:
    """Deterministic random instance for a fixed seed.

    Profile entries come up +1 with probability `density`.  Target sets are
    sampled disjoint and nonempty per the requested objective; impossible
    shapes are repaired rather than rejected.  Budget lands in [1, n].
    """
    rng = random.Random(seed)
    phi = tuple(
        tuple(QUALIFY if rng.random() < density else DISQUALIFY for _ in range(n))
        for _ in range(n)
    )
    soc = Society(phi)
    T = None
    if kind == ADD:
        base = sorted(rng.sample(range(n), rng.randint(1, n)))
        T = frozenset(base)
        universe = sorted(T)
    else:
        universe = list(range(n))
    if objective == CONSTRUCTIVE:
        aplus = frozenset(rng.sample(universe, rng.randint(1, len(universe))))
        aminus = frozenset()
    elif objective == DESTRUCTIVE:
        aplus = frozenset()
        aminus = frozenset(rng.sample(universe, rng.randint(1, len(universe))))
    elif objective == EXACT:
        aplus = frozenset(rng.sample(universe, rng.randint(0, len(universe))))
        aminus = frozenset(universe) - aplus
        if not aplus and not aminus:
            aminus = frozenset(universe)
    elif objective == GENERAL:
        if len(universe) < 2:
            aplus, aminus = frozenset(universe), frozenset()
        else:
            k = rng.randint(2, len(universe))
            picked = rng.sample(universe, k)
            cut = rng.randint(1, k - 1)
            aplus = frozenset(picked[:cut])
            aminus = frozenset(picked[cut:])
    else:
        raise InvalidInstance(f"unknown objective {objective!r}")
    budget = rng.randint(1, n)
    prices = None
    price_matrix = None
    if priced and kind == BRIBERY:
        prices = tuple(rng.randint(1, 3) for _ in range(n))
    if priced and kind == MICROBRIBERY:
        price_matrix = tuple(tuple(rng.randint(1, 3) for _ in range(n)) for _ in range(n))
    return AttackInstance(
        society=soc, rule=rule, kind=kind, aplus=aplus, aminus=aminus,
        budget=budget, priced=priced, T=T, prices=prices, price_matrix=price_matrix,
    )


# ---------------------------------------------------------------------------
# JSON serialization.  Instance files and society-only files share the
# profile fields; solution files are separate.

def society_to_json(soc: Society) -> dict:
    out = {"n": soc.n, "profile": [list(row) for row in soc.phi]}
    if soc.labels is not None:
        out["labels"] = list(soc.labels)
    return out


def society_from_json(obj) -> Society:
    soc = make_society(obj["profile"], obj.get("labels"))
    if "n" in obj and obj["n"] != soc.n:
        raise InvalidInstance("declared n does not match the profile")
    return soc


def instance_to_json(inst: AttackInstance) -> dict:
    out = society_to_json(inst.society)
    out["rule"] = rule_to_json(inst.rule)
    out["kind"] = inst.kind
    out["priced"] = inst.priced
    out["aplus"] = sorted(inst.aplus)
    out["aminus"] = sorted(inst.aminus)
    out["budget"] = inst.budget
    if inst.T is not None:
        out["T"] = sorted(inst.T)
    if inst.prices is not None:
        out["prices"] = list(inst.prices)
    if inst.price_matrix is not None:
        out["priceMatrix"] = [list(row) for row in inst.price_matrix]
    return out


def instance_from_json(obj) -> AttackInstance:
    soc = society_from_json(obj)
    return AttackInstance(
        society=soc,
        rule=rule_from_json(obj["rule"]),
        kind=obj["kind"],
        aplus=frozenset(obj.get("aplus", [])),
        aminus=frozenset(obj.get("aminus", [])),
        budget=obj["budget"],
        priced=bool(obj.get("priced", False)),
        T=frozenset(obj["T"]) if "T" in obj else None,
        prices=tuple(obj["prices"]) if "prices" in obj else None,
        price_matrix=tuple(tuple(r) for r in obj["priceMatrix"])
        if "priceMatrix" in obj else None,
    )


def solution_to_json(sol: Solution) -> dict:
    if sol.kind in ("add", "delete"):
        return {"kind": sol.kind, "U": sorted(sol.U)}
    if sol.kind == "bribe":
        return {"kind": "bribe", "rows": {str(i): list(row) for i, row in sol.rows}}
    return {"kind": "microbribe", "flips": sorted([i, j] for i, j in sol.flips)}


def solution_from_json(obj) -> Solution:
    kind = obj["kind"]
    if kind in ("add", "delete"):
        return Solution(kind, U=frozenset(obj["U"]))
    if kind == "bribe":
        return bribe({int(i): row for i, row in obj["rows"].items()})
    if kind == "microbribe":
        return microbribe(obj["flips"])
    raise SolutionMismatch(f"unknown solution kind {kind!r}")


def dumps(obj) -> str:
    """Canonical JSON text: sorted keys, two-space indent, trailing newline."""
    return json.dumps(obj, indent=2, sort_keys=True) + "\n"


def load_json(path):
    with open(path, "r", encoding="utf-8") as fh:
        return json.load(fh)
