"""Cross-checking machinery: efficient solvers against the exhaustive
oracle, immunity sweeps, reduction round-trips, and the worked-example
fixtures.  Reports are newline-delimited JSON plus a summary record,
deterministic for a fixed seed and replayable from the embedded seeds.
"""

from __future__ import annotations

import itertools
import json
import random
import statistics
import time
from dataclasses import dataclass
from importlib import resources

from .model import (
    BRIBERY,
    CONSTRUCTIVE,
    DELETE,
    DESTRUCTIVE,
    DISQUALIFY,
    EXACT,
    GENERAL,
    MICROBRIBERY,
    QUALIFY,
    RELAXED_DELETE,
    AttackInstance,
    InvalidInstance,
    Rule,
    Society,
    consent,
    instance_from_json,
    instance_to_json,
    society_from_json,
    solution_to_json,
    verify_solution,
)
from . import polysolvers
from .oracle import (
    DEFAULT_LIMITS,
    OracleCapError,
    OracleLimits,
    bitmask_qualified,
    brute_force,
    immunity_search,
)
from .polysolvers import find_poly_solver
from .reductions import (
    CnfSat,
    Graph,
    IndependentSet,
    Rx3c,
    SetCover,
    VertexCover,
    build_reduction,
    has_exact_cover,
    rx3c_corpus,
    source_to_json,
)
from . import rules as rules_mod


SUITES = ("poly-vs-oracle", "immunity", "reduction-roundtrip", "fixtures")


# ---------------------------------------------------------------------------
# report type


@dataclass(frozen=True)
class CrossCheckReport:
    """One suite run: per-trial records plus failure extracts.

    timings (seconds per solver) are kept off the serialized records so
    that report text stays byte-stable for a fixed seed.
    """

    suite: str
    seed: int
    trials: int
    agreements: int
    disagreements: tuple
    records: tuple
    timings: dict

    @property
    def passed(self) -> bool:
        return not self.disagreements

    def summary(self) -> dict:
        return {
            "record": "summary",
            "suite": self.suite,
            "seed": self.seed,
            "trials": self.trials,
            "agreements": self.agreements,
            "disagreements": len(self.disagreements),
            "passed": self.passed,
        }

    def to_ndjson(self) -> str:
        lines = [json.dumps(r, sort_keys=True) for r in self.records]
        lines.append(json.dumps(self.summary(), sort_keys=True))
        return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# instance sampling under the usual sanity conditions: at least one
# constructive target starts out unqualified and at least one destructive
# target starts out qualified, so the attacker actually has work to do


_DENSITIES = (0.35, 0.5, 0.65, 0.8, 0.92)


def _pick_targets(rng: random.Random, n: int, f0: frozenset, objective: str):
    outside = sorted(set(range(n)) - f0)
    inside = sorted(f0)
    if objective == CONSTRUCTIVE:
        if not outside:
            return None
        aplus = {rng.choice(outside)}
        aplus.update(a for a in range(n) if rng.random() < 0.3)
        return frozenset(aplus), frozenset()
    if objective == DESTRUCTIVE:
        if not inside:
            return None
        aminus = {rng.choice(inside)}
        aminus.update(a for a in range(n) if rng.random() < 0.3)
        return frozenset(), frozenset(aminus)
    if objective == EXACT:
        if not inside or not outside:
            return None
        x, y = rng.choice(inside), rng.choice(outside)
        aplus, aminus = {y}, {x}
        for a in range(n):
            if a not in (x, y):
                (aplus if rng.random() < 0.5 else aminus).add(a)
        return frozenset(aplus), frozenset(aminus)
    if objective == GENERAL:
        if not inside or not outside or n < 3:
            return None
        x = rng.choice(inside)
        y = rng.choice([a for a in outside if a != x])
        rest = [a for a in range(n) if a not in (x, y)]
        spare = rng.choice(rest)
        aplus, aminus = {y}, {x}
        for a in rest:
            if a == spare:
                continue
            r = rng.random()
            if r < 0.34:
                aplus.add(a)
            elif r < 0.67:
                aminus.add(a)
        return frozenset(aplus), frozenset(aminus)
    raise ValueError(f"unknown objective {objective!r}")


def _bribery_budget_cap(kind: str, n: int) -> int:
    # keep the exhaustive oracle tractable: its row enumeration is 2^(n c)
    if kind == BRIBERY:
        return 3 if n <= 3 else 2
    if kind == MICROBRIBERY:
        return 4
    return n


def sample_standing_instance(rng: random.Random, rule: Rule, kind: str,
                             objective: str, max_n: int,
                             priced: bool = False,
                             exact_n: bool = False) -> AttackInstance:
    """Random instance of the requested cell with unmet targets.

    Draws societies until the initial outcome leaves room for the
    objective; raises after too many failed draws.
    """
    min_n = 3 if objective == GENERAL else 2
    for _ in range(500):
        n = max_n if exact_n else rng.randint(min_n, max(min_n, max_n))
        density = rng.choice(_DENSITIES)
        phi = tuple(
            tuple(QUALIFY if rng.random() < density else DISQUALIFY
                  for _ in range(n))
            for _ in range(n)
        )
        society = Society(phi)
        f0 = bitmask_qualified(rule, society)
        picked = _pick_targets(rng, n, f0, objective)
        if picked is None:
            continue
        aplus, aminus = picked
        budget = min(rng.randint(1, n), _bribery_budget_cap(kind, n))
        prices = None
        if priced and kind == BRIBERY:
            prices = tuple(rng.randint(1, 3) for _ in range(n))
        try:
            inst = AttackInstance(society, rule, kind, aplus, aminus, budget,
                                  priced=priced, prices=prices)
        except InvalidInstance:
            continue
        if inst.objective() != objective:
            continue
        return inst
    raise RuntimeError(
        f"no standing instance found for {rule.name}/{kind}/{objective}")


# ---------------------------------------------------------------------------
# solver cells: every efficient solver with the draws spanning its cell


@dataclass(frozen=True)
class SolverCell:
    solver: str
    draws: tuple  # of (rule, kind, objective, priced)
    max_n: int


def _consent_rules(pairs):
    return tuple(consent(s, t) for s, t in pairs)


def _draws(rules, kinds, objectives, priced=(False,)):
    return tuple(
        (rule, kind, objective, p)
        for rule in rules
        for kind in kinds
        for objective in objectives
        for p in priced
    )


SOLVER_CELLS = (
    SolverCell(
        "solve_consent_s1_rdgcdi",
        _draws(_consent_rules([(1, 1), (1, 2), (1, 3)]),
               (RELAXED_DELETE,), (DESTRUCTIVE,)),
        max_n=6,
    ),
    SolverCell(
        "solve_consent_easy_cases",
        _draws(_consent_rules([(1, 1), (2, 1), (3, 1), (1, 2)]),
               (RELAXED_DELETE,), (CONSTRUCTIVE, GENERAL, EXACT))
        + _draws(_consent_rules([(1, 1), (2, 1), (3, 1)]),
                 (DELETE,), (CONSTRUCTIVE,))
        + _draws(_consent_rules([(1, 1), (1, 2), (1, 3)]),
                 (DELETE,), (DESTRUCTIVE, GENERAL))
        + _draws((Rule("lsr"),), (DELETE,), (CONSTRUCTIVE, GENERAL))
        + _draws((Rule("lsr"),), (RELAXED_DELETE,),
                 (CONSTRUCTIVE, GENERAL, EXACT))
        + _draws((Rule("csr"),), (DELETE,), (GENERAL,)),
        max_n=6,
    ),
    SolverCell(
        "solve_lsr_rdgcdi",
        _draws((Rule("lsr"),), (RELAXED_DELETE,), (DESTRUCTIVE,)),
        max_n=6,
    ),
    SolverCell(
        "solve_csr_dgcdi_corrected",
        _draws((Rule("csr"),), (DELETE,), (DESTRUCTIVE,)),
        max_n=6,
    ),
    SolverCell(
        "solve_csr_rdgcdi",
        _draws((Rule("csr"),), (RELAXED_DELETE,), (DESTRUCTIVE,)),
        max_n=6,
    ),
    SolverCell(
        "solve_csr_regcdi",
        _draws((Rule("csr"),), (RELAXED_DELETE,), (EXACT,)),
        max_n=6,
    ),
    SolverCell(
        "solve_2ic_cgcdi",
        _draws((Rule("2ic"),), (DELETE,), (CONSTRUCTIVE,)),
        max_n=6,
    ),
    SolverCell(
        "solve_2lic_cgcdi",
        _draws((Rule("2lic"),), (DELETE,), (CONSTRUCTIVE,)),
        max_n=6,
    ),
    SolverCell(
        "solve_ic_2ic_dgb_priced",
        _draws((Rule("ic"), Rule("2ic")), (BRIBERY,), (DESTRUCTIVE,),
               priced=(False, True)),
        max_n=5,
    ),
    SolverCell(
        "solve_2ic_cgb_priced",
        _draws((Rule("2ic"),), (BRIBERY,), (CONSTRUCTIVE,),
               priced=(False, True)),
        max_n=5,
    ),
    SolverCell(
        "solve_2lic_cgb_priced",
        _draws((Rule("2lic"),), (BRIBERY,), (CONSTRUCTIVE,),
               priced=(False, True)),
        max_n=5,
    ),
    SolverCell(
        "solve_2ic_gb_unpriced",
        _draws((Rule("2ic"),), (BRIBERY,), (GENERAL, EXACT)),
        max_n=5,
    ),
    SolverCell(
        "solve_2lic_gb_unpriced",
        _draws((Rule("2lic"),), (BRIBERY,), (GENERAL, EXACT)),
        max_n=5,
    ),
    SolverCell(
        "solve_2ic_cgmb",
        _draws((Rule("2ic"),), (MICROBRIBERY,), (CONSTRUCTIVE,)),
        max_n=5,
    ),
    SolverCell(
        "solve_2lic_cgmb",
        _draws((Rule("2lic"),), (MICROBRIBERY,), (CONSTRUCTIVE,)),
        max_n=5,
    ),
)


def _poly_vs_oracle(seed: int, trials: int, limits: OracleLimits):
    records = []
    disagreements = []
    timings = {}
    for cell in SOLVER_CELLS:
        solver_fn = getattr(polysolvers, cell.solver)
        spent = 0.0
        for trial in range(trials):
            rng = random.Random(f"{seed}:{cell.solver}:{trial}")
            rule, kind, objective, priced = cell.draws[
                rng.randrange(len(cell.draws))]
            inst = sample_standing_instance(rng, rule, kind, objective,
                                            cell.max_n, priced)
            dispatched = find_poly_solver(inst)
            rec = {
                "record": "trial",
                "suite": "poly-vs-oracle",
                "cell": cell.solver,
                "trial": trial,
                "seed": f"{seed}:{cell.solver}:{trial}",
                "n": inst.n,
                "kind": inst.kind,
                "objective": inst.objective(),
                "budget": inst.budget,
            }
            if dispatched is None or dispatched[0] != cell.solver:
                rec["agree"] = False
                rec["error"] = "dispatch mismatch"
                records.append(rec)
                disagreements.append(
                    {"record": "disagreement", "cell": cell.solver,
                     "trial": trial, "error": "dispatch mismatch",
                     "instance": instance_to_json(inst)})
                continue
            t0 = time.perf_counter()
            report = solver_fn(inst)
            spent += time.perf_counter() - t0
            try:
                truth = brute_force(inst, limits)
            except OracleCapError as exc:
                rec["skipped"] = str(exc)
                records.append(rec)
                continue
            poly_v, true_v = report.verdict, truth
            witness_ok = None
            if poly_v.answer:
                witness_ok = verify_solution(inst, poly_v.witness).valid
            agree = (poly_v.answer == true_v.answer
                     and witness_ok is not False)
            rec.update({
                "poly": poly_v.answer,
                "oracle": true_v.answer,
                "poly_cost": poly_v.cost,
                "oracle_cost": true_v.cost,
                "witness_ok": witness_ok,
                "agree": agree,
            })
            records.append(rec)
            if not agree:
                item = {
                    "record": "disagreement",
                    "cell": cell.solver,
                    "trial": trial,
                    "seed": rec["seed"],
                    "instance": instance_to_json(inst),
                    "poly": poly_v.answer,
                    "oracle": true_v.answer,
                }
                if poly_v.witness is not None:
                    item["poly_witness"] = solution_to_json(poly_v.witness)
                if true_v.witness is not None:
                    item["oracle_witness"] = solution_to_json(true_v.witness)
                disagreements.append(item)
        timings[cell.solver] = spent
    return records, disagreements, timings


# ---------------------------------------------------------------------------
# immunity sweeps: exhaustive corroboration of every immune cell at n <= 3,
# plus witness hunts in the susceptible-but-hard cells


IMMUNE_CELLS = tuple(
    [(f"consent({s},1)-del-constructive", consent(s, 1), DELETE, CONSTRUCTIVE)
     for s in (1, 2, 3)]
    + [(f"consent(1,{t})-del-destructive", consent(1, t), DELETE, DESTRUCTIVE)
       for t in (1, 2, 3)]
    + [(f"consent(1,{t})-del-general", consent(1, t), DELETE, GENERAL)
       for t in (1, 2, 3)]
    + [("consent(2,1)-del-general", consent(2, 1), DELETE, GENERAL),
       ("consent(3,1)-del-general", consent(3, 1), DELETE, GENERAL),
       ("lsr-del-constructive", Rule("lsr"), DELETE, CONSTRUCTIVE),
       ("lsr-del-general", Rule("lsr"), DELETE, GENERAL),
       ("csr-del-general", Rule("csr"), DELETE, GENERAL)]
    + [(f"consent({s},1)-rdel-{obj}", consent(s, 1), RELAXED_DELETE, obj)
       for s in (1, 2, 3)
       for obj in (CONSTRUCTIVE, EXACT, GENERAL)]
    + [(f"lsr-rdel-{obj}", Rule("lsr"), RELAXED_DELETE, obj)
       for obj in (CONSTRUCTIVE, EXACT, GENERAL)]
)

SUSCEPTIBLE_CELLS = (
    ("csr-rdel-general", Rule("csr"), RELAXED_DELETE, GENERAL),
    ("consent(2,2)-rdel-destructive", consent(2, 2), RELAXED_DELETE,
     DESTRUCTIVE),
    ("consent(3,2)-rdel-destructive", consent(3, 2), RELAXED_DELETE,
     DESTRUCTIVE),
)


def _immunity(seed: int, trials: int, limits: OracleLimits):
    records = []
    disagreements = []
    timings = {}
    t0 = time.perf_counter()
    for name, rule, kind, objective in IMMUNE_CELLS:
        for n in (1, 2, 3):
            found = immunity_search(rule, kind, objective, n, limits)
            ok = found is None
            rec = {
                "record": "trial",
                "suite": "immunity",
                "cell": name,
                "n": n,
                "expect": "immune",
                "agree": ok,
            }
            records.append(rec)
            if not ok:
                inst, wit = found
                disagreements.append({
                    "record": "disagreement",
                    "cell": name,
                    "n": n,
                    "error": "witness found in a claimed-immune cell",
                    "instance": instance_to_json(inst),
                    "witness": solution_to_json(wit),
                })
    for name, rule, kind, objective in SUSCEPTIBLE_CELLS:
        found = None
        for n in (1, 2, 3):
            found = immunity_search(rule, kind, objective, n, limits)
            if found:
                break
        ok = found is not None
        rec = {
            "record": "trial",
            "suite": "immunity",
            "cell": name,
            "expect": "witness",
            "agree": ok,
        }
        if ok:
            inst, wit = found
            rec["witness_n"] = inst.n
            rec["witness"] = solution_to_json(wit)
            rec["instance"] = instance_to_json(inst)
        records.append(rec)
        if not ok:
            disagreements.append({
                "record": "disagreement",
                "cell": name,
                "error": "no witness found in a susceptible cell",
            })
    timings["immunity_search"] = time.perf_counter() - t0
    return records, disagreements, timings


# ---------------------------------------------------------------------------
# brute-force source-problem solvers for the reduction round-trips


def solve_cnfsat(source: CnfSat):
    """A satisfying assignment, or None."""
    variables = source.variables
    for bits in itertools.product((False, True), repeat=len(variables)):
        assignment = dict(zip(variables, bits))
        ok = True
        for clause in source.clauses:
            sat = False
            for lit in clause:
                neg = lit.startswith("-")
                var = lit[1:] if neg else lit
                if assignment[var] != neg:
                    sat = True
                    break
            if not sat:
                ok = False
                break
        if ok:
            return assignment
    return None


def solve_setcover(source: SetCover):
    """Family indices covering the universe, smallest first, or None."""
    need = set(source.universe)
    for k in range(0, source.k + 1):
        for combo in itertools.combinations(range(len(source.family)), k):
            covered = set()
            for i in combo:
                covered |= source.family[i]
            if covered >= need:
                return tuple(combo)
    return None


def solve_vertexcover(source: VertexCover):
    """A vertex cover of size <= k, or None."""
    g = source.graph
    for k in range(0, min(source.k, len(g.vertices)) + 1):
        for combo in itertools.combinations(g.vertices, k):
            chosen = set(combo)
            if all(e & chosen for e in g.edges):
                return tuple(combo)
    return None


def solve_independentset(source: IndependentSet):
    """An independent set of size >= k, or None."""
    g = source.graph
    if source.k <= 0:
        return ()
    if source.k > len(g.vertices):
        return None
    for combo in itertools.combinations(g.vertices, source.k):
        chosen = set(combo)
        if not any(e <= chosen for e in g.edges):
            return tuple(combo)
    return None


def solve_rx3c(source: Rx3c):
    """An exact cover as family indices, or None."""
    m = len(source.universe) // 3
    target = set(source.universe)
    for combo in itertools.combinations(range(len(source.family)), m):
        union = set()
        for i in combo:
            union |= source.family[i]
        if union == target and sum(len(source.family[i]) for i in combo) == len(target):
            return tuple(combo)
    if not source.universe:
        return ()
    return None


def _check_source_certificate(source, cert) -> bool:
    """Does cert actually solve the source problem?"""
    if isinstance(source, CnfSat):
        if not all(v in cert for v in source.variables):
            return False
        for clause in source.clauses:
            if not any((cert[lit[1:]] is False) if lit.startswith("-")
                       else (cert[lit] is True) for lit in clause):
                return False
        return True
    if isinstance(source, SetCover):
        if len(set(cert)) != len(tuple(cert)) or len(tuple(cert)) > source.k:
            return False
        covered = set()
        for i in cert:
            if not 0 <= i < len(source.family):
                return False
            covered |= source.family[i]
        return covered >= set(source.universe)
    if isinstance(source, VertexCover):
        chosen = set(cert)
        if len(chosen) > source.k or not chosen <= set(source.graph.vertices):
            return False
        return all(e & chosen for e in source.graph.edges)
    if isinstance(source, IndependentSet):
        chosen = set(cert)
        if len(chosen) < source.k or not chosen <= set(source.graph.vertices):
            return False
        return not any(e <= chosen for e in source.graph.edges)
    if isinstance(source, Rx3c):
        idx = tuple(cert)
        if len(set(idx)) != len(idx):
            return False
        union = set()
        total = 0
        for i in idx:
            if not 0 <= i < len(source.family):
                return False
            union |= source.family[i]
            total += 3
        return union == set(source.universe) and total == len(source.universe)
    return False


_SOURCE_SOLVERS = {
    CnfSat: solve_cnfsat,
    SetCover: solve_setcover,
    VertexCover: solve_vertexcover,
    IndependentSet: solve_independentset,
    Rx3c: solve_rx3c,
}


# ---------------------------------------------------------------------------
# tiny source corpora, deterministic per seed


def _sat_source(rng: random.Random) -> CnfSat:
    nv = rng.randint(1, 3)
    variables = ("x", "y", "z")[:nv]
    literals = [v for v in variables] + [f"-{v}" for v in variables]
    clauses = []
    for _ in range(rng.randint(1, 3)):
        size = rng.randint(1, min(3, len(literals)))
        clauses.append(tuple(rng.sample(literals, size)))
    return CnfSat.make(variables, clauses)


def _setcover_source(rng: random.Random) -> SetCover:
    ne = rng.randint(0, 4)
    universe = tuple(f"e{i}" for i in range(ne))
    nf = rng.randint(0, 4)
    family = []
    for _ in range(nf):
        family.append(frozenset(
            x for x in universe if rng.random() < 0.55))
    k = rng.randint(0, 4)
    return SetCover(universe, tuple(family), k)


def _graph_source(rng: random.Random):
    nv = rng.randint(2, 5)
    vertices = tuple(f"v{i}" for i in range(nv))
    edges = []
    for u, v in itertools.combinations(vertices, 2):
        if rng.random() < 0.5:
            edges.append(frozenset((u, v)))
    k = rng.randint(0, nv)
    return Graph(vertices, tuple(edges)), k


_RX3C_NO_CACHE = []


def _rx3c_source(rng: random.Random) -> Rx3c:
    if rng.random() < 0.55:
        return rx3c_corpus(1)[0]
    corpus = rx3c_corpus(2)
    if not _RX3C_NO_CACHE:
        _RX3C_NO_CACHE.extend(
            s for s in corpus if not has_exact_cover(s))
    if rng.random() < 0.4:
        return _RX3C_NO_CACHE[rng.randrange(len(_RX3C_NO_CACHE))]
    return corpus[rng.randrange(len(corpus))]


def _source_for(theorem_id: str, rng: random.Random):
    kwargs = {}
    if theorem_id in ("T-GMB-PROT", "T-CSR-RGCDI", "T-CSR-GCDI-PROT"):
        src = _sat_source(rng)
        if theorem_id == "T-GMB-PROT":
            kwargs["rule"] = rng.choice(("csr", "lsr"))
    elif theorem_id in ("T-RDGCDI-VC", "T-FST-REGCDI"):
        graph, k = _graph_source(rng)
        src = VertexCover(graph, k)
        kwargs["s"] = rng.choice((2, 3))
        kwargs["t"] = rng.choice((1, 2)) if theorem_id == "T-RDGCDI-VC" \
            else rng.choice((2, 3))
    elif theorem_id == "T-2IC-CGMB":
        graph, k = _graph_source(rng)
        src = IndependentSet(graph, k)
        kwargs["rule"] = rng.choice(("2ic", "2lic"))
    elif theorem_id in ("T-REGCDI-RX3C", "T-IC-DGMB", "T-IC-EGMB"):
        src = _rx3c_source(rng)
        if theorem_id == "T-REGCDI-RX3C":
            kwargs["t"] = rng.choice((3, 4))
        else:
            kwargs["rule"] = rng.choice(("ic", "2ic", "2lic"))
    else:
        src = _setcover_source(rng)
        if theorem_id in ("T-IC-DGCAI", "T-IC-CGCAI", "T-IC-DGCDI"):
            kwargs["rule"] = rng.choice(("ic", "2ic", "2lic"))
        elif theorem_id in ("T-2IC-EGCAI", "T-2IC-GCDI", "T-2IC-EGB"):
            kwargs["rule"] = rng.choice(("2ic", "2lic"))
    return src, kwargs


def _oracle_work_estimate(inst: AttackInstance) -> int:
    n = inst.n
    if inst.kind in (DELETE, RELAXED_DELETE):
        pool = len(inst.legal_pool())
        return sum(_ncr(pool, c) for c in range(0, min(inst.budget, pool) + 1))
    if inst.kind == BRIBERY:
        total = 0
        for c in range(0, min(inst.budget, n) + 1):
            total += _ncr(n, c) * (1 << (n * c))
            if total > 1 << 30:
                break
        return total
    cap = min(inst.budget, 4)
    return sum(_ncr(n * n, c) for c in range(0, cap + 1))


def _ncr(n, r):
    if r < 0 or r > n:
        return 0
    out = 1
    for i in range(r):
        out = out * (n - i) // (i + 1)
    return out


_ROUNDTRIP_LIMITS = OracleLimits(control_max_n=24, bribery_max_n=24,
                                 micro_max_flips=4)
_WORK_BUDGET = 400_000


def _roundtrip_one(theorem_id: str, trial: int, seed: int):
    rng = random.Random(f"{seed}:{theorem_id}:{trial}")
    src, kwargs = _source_for(theorem_id, rng)
    rec = {
        "record": "trial",
        "suite": "reduction-roundtrip",
        "cell": theorem_id,
        "trial": trial,
        "seed": f"{seed}:{theorem_id}:{trial}",
        "source": source_to_json(src),
        "params": {k: v for k, v in kwargs.items()},
    }
    try:
        out = build_reduction(theorem_id, src, **kwargs)
    except InvalidInstance as exc:
        rec["skipped"] = f"degenerate source rejected: {exc}"
        rec["agree"] = True
        return rec, None
    inst = out.instance
    rec["n"] = inst.n
    rec["budget"] = inst.budget

    cert = _SOURCE_SOLVERS[type(src)](src)
    source_yes = cert is not None
    rec["source_yes"] = source_yes

    problems = []
    if source_yes:
        sol = out.forward(cert)
        check = verify_solution(inst, sol)
        rec["forward_ok"] = check.valid
        if not check.valid:
            problems.append(f"forward certificate rejected: {check.reason}")
        else:
            back = out.backward(sol)
            rec["backward_of_forward_ok"] = _check_source_certificate(
                src, back)
            if not rec["backward_of_forward_ok"]:
                problems.append("backward map broke the forward certificate")

    if _oracle_work_estimate(inst) <= _WORK_BUDGET:
        try:
            verdict = brute_force(inst, _ROUNDTRIP_LIMITS)
        except OracleCapError as exc:
            rec["oracle"] = f"capped: {exc}"
            verdict = None
    else:
        rec["oracle"] = "capped: search space too large"
        verdict = None
    if verdict is not None:
        rec["oracle"] = verdict.answer
        if verdict.answer != source_yes:
            problems.append(
                f"oracle says {verdict.answer}, source says {source_yes}")
        elif verdict.answer:
            back = out.backward(verdict.witness)
            rec["backward_ok"] = _check_source_certificate(src, back)
            if not rec["backward_ok"]:
                problems.append("backward map broke the oracle witness")

    rec["agree"] = not problems
    if problems:
        return rec, {
            "record": "disagreement",
            "cell": theorem_id,
            "trial": trial,
            "seed": rec["seed"],
            "source": rec["source"],
            "errors": problems,
            "instance": instance_to_json(inst),
        }
    return rec, None


def _reduction_roundtrip(seed: int, trials: int, limits: OracleLimits):
    from .reductions import THEOREM_IDS

    records = []
    disagreements = []
    timings = {}
    for theorem_id in THEOREM_IDS:
        t0 = time.perf_counter()
        for trial in range(trials):
            rec, bad = _roundtrip_one(theorem_id, trial, seed)
            records.append(rec)
            if bad is not None:
                disagreements.append(bad)
        timings[theorem_id] = time.perf_counter() - t0
    return records, disagreements, timings


# ---------------------------------------------------------------------------
# fixtures suite: the two fully specified worked examples


def load_fixture(name: str) -> dict:
    path = resources.files("groupident").joinpath("fixtures", name)
    return json.loads(path.read_text(encoding="utf-8"))


def _fixture_checks():
    soc1 = society_from_json(load_fixture("ex1.json"))
    six = frozenset(range(6))
    yield ("ex1 consent(1,1)",
           rules_mod.evaluate(consent(1, 1), soc1), frozenset({0, 1, 3, 4, 5}))
    yield ("ex1 consent(3,4)",
           rules_mod.evaluate(consent(3, 4), soc1), frozenset({0, 1, 2, 3}))
    yield ("ex1 lsr", rules_mod.evaluate(Rule("lsr"), soc1), six)
    yield ("ex1 csr",
           rules_mod.evaluate(Rule("csr"), soc1), frozenset({0, 1, 2, 3, 4}))
    yield ("ex1 ic",
           rules_mod.evaluate(Rule("ic"), soc1), frozenset({0, 1, 3, 4}))
    yield ("ex1 2ic",
           rules_mod.evaluate(Rule("2ic"), soc1), frozenset({0, 1, 3}))
    rows = [list(r) for r in soc1.phi]
    rows[0][0] = DISQUALIFY
    rows[1][1] = DISQUALIFY
    modified = Society(tuple(tuple(r) for r in rows))
    yield ("ex1 2lic on self-doubting variant",
           rules_mod.evaluate(Rule("2lic"), modified), frozenset({3, 4, 5}))

    inst2 = instance_from_json(load_fixture("ex2.json"))
    naive = polysolvers.solve_csr_dgcdi_naive(inst2)
    yield ("ex2 naive says no", naive.verdict.answer, False)
    fixed = polysolvers.solve_csr_dgcdi_corrected(inst2)
    yield ("ex2 corrected says yes", fixed.verdict.answer, True)
    if fixed.verdict.answer:
        check = verify_solution(inst2, fixed.verdict.witness)
        yield ("ex2 corrected witness verifies", check.valid, True)
        yield ("ex2 corrected witness cost", check.cost, 2)
    one = AttackInstance(inst2.society, inst2.rule, inst2.kind,
                         inst2.aplus, inst2.aminus, 1)
    yield ("ex2 budget-1 naive no",
           polysolvers.solve_csr_dgcdi_naive(one).verdict.answer, False)
    yield ("ex2 budget-1 corrected no",
           polysolvers.solve_csr_dgcdi_corrected(one).verdict.answer, False)
    yield ("ex2 budget-1 oracle no",
           brute_force(one, OracleLimits(control_max_n=7)).answer, False)
    yield ("ex2 budget-2 oracle yes",
           brute_force(inst2, OracleLimits(control_max_n=7)).answer, True)


def _fixtures(seed: int, trials: int, limits: OracleLimits):
    records = []
    disagreements = []
    t0 = time.perf_counter()
    for i, (name, got, want) in enumerate(_fixture_checks()):
        ok = got == want
        records.append({
            "record": "trial",
            "suite": "fixtures",
            "trial": i,
            "check": name,
            "got": sorted(got) if isinstance(got, frozenset) else got,
            "want": sorted(want) if isinstance(want, frozenset) else want,
            "agree": ok,
        })
        if not ok:
            disagreements.append({
                "record": "disagreement",
                "check": name,
                "got": sorted(got) if isinstance(got, frozenset) else got,
                "want": sorted(want) if isinstance(want, frozenset) else want,
            })
    return records, disagreements, {"fixtures": time.perf_counter() - t0}


# ---------------------------------------------------------------------------
# entry points


def run_crosscheck(suite: str, seed: int = 0, trials: int = 50,
                   caps: OracleLimits = DEFAULT_LIMITS) -> CrossCheckReport:
    """Run one verification suite and collect a machine-readable report.

    trials is per solver cell (poly-vs-oracle) or per catalog entry
    (reduction-roundtrip); the immunity and fixtures suites are exhaustive
    and ignore it.
    """
    if suite == "poly-vs-oracle":
        records, disagreements, timings = _poly_vs_oracle(seed, trials, caps)
    elif suite == "immunity":
        records, disagreements, timings = _immunity(seed, trials, caps)
    elif suite == "reduction-roundtrip":
        records, disagreements, timings = _reduction_roundtrip(
            seed, trials, caps)
    elif suite == "fixtures":
        records, disagreements, timings = _fixtures(seed, trials, caps)
    else:
        raise ValueError(f"unknown suite {suite!r}; pick from {SUITES}")
    agreements = sum(1 for r in records if r.get("agree"))
    return CrossCheckReport(
        suite=suite,
        seed=seed,
        trials=len(records),
        agreements=agreements,
        disagreements=tuple(disagreements),
        records=tuple(records),
        timings=timings,
    )


_BENCH_CELLS = {cell.solver: cell for cell in SOLVER_CELLS}


def bench_scaling(solver: str, sizes, seed: int = 0, runs: int = 5):
    """Median wall-times of one efficient solver across society sizes.

    Returns (n, median seconds) rows; purely observational, asserts
    nothing about growth rates.
    """
    cell = _BENCH_CELLS.get(solver)
    if cell is None:
        raise ValueError(f"unknown solver {solver!r}")
    fn = getattr(polysolvers, solver)
    rows = []
    for n in sizes:
        rng = random.Random(f"bench:{seed}:{solver}:{n}")
        rule, kind, objective, priced = cell.draws[
            rng.randrange(len(cell.draws))]
        inst = sample_standing_instance(rng, rule, kind, objective, n, priced,
                                        exact_n=True)
        samples = []
        for _ in range(max(5, runs)):
            t0 = time.perf_counter()
            fn(inst)
            samples.append(time.perf_counter() - t0)
        rows.append((n, statistics.median(samples)))
    return rows
