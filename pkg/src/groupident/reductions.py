"""Constructions embedding classic NP-hard problems into attack instances.

Each construction returns the built attack instance together with certificate
translators: forward turns a certificate of the source problem into an attack
solution, backward reads a source certificate off a successful attack.  The
two maps are total on valid certificates/solutions of their side.

Source instances are plain frozen dataclasses.  validate_source reports
structural violations as data; build_reduction rejects invalid sources.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from math import lcm
from typing import Callable, Union

from .model import (
    ADD,
    BRIBERY,
    DELETE,
    DISQUALIFY,
    MICROBRIBERY,
    QUALIFY,
    RELAXED_DELETE,
    AttackInstance,
    InvalidInstance,
    Rule,
    Society,
    Solution,
    add_set,
    bribe,
    consent,
    delete_set,
    make_society,
    microbribe,
)
from . import rules as rules_mod


# ---------------------------------------------------------------------------
# source problems


@dataclass(frozen=True)
class Graph:
    """Undirected simple graph; edges are 2-element frozensets."""

    vertices: tuple
    edges: tuple

    @staticmethod
    def make(vertices, edges) -> "Graph":
        vs = tuple(vertices)
        es = tuple(frozenset(e) for e in edges)
        return Graph(vs, es)

    def degree(self, v) -> int:
        return sum(1 for e in self.edges if v in e)


@dataclass(frozen=True)
class CnfSat:
    """CNF formula; a literal is "x" or "-x" for a variable named x."""

    variables: tuple
    clauses: tuple

    @staticmethod
    def make(variables, clauses) -> "CnfSat":
        return CnfSat(tuple(variables),
                      tuple(tuple(cl) for cl in clauses))


@dataclass(frozen=True)
class SetCover:
    universe: tuple
    family: tuple
    k: int

    @staticmethod
    def make(universe, family, k) -> "SetCover":
        return SetCover(tuple(universe),
                        tuple(frozenset(f) for f in family), int(k))


@dataclass(frozen=True)
class VertexCover:
    graph: Graph
    k: int


@dataclass(frozen=True)
class IndependentSet:
    graph: Graph
    k: int


@dataclass(frozen=True)
class Rx3c:
    """Exact cover by 3-sets, restricted: every set has three elements and
    every element occurs in exactly three sets."""

    universe: tuple
    family: tuple

    @staticmethod
    def make(universe, family) -> "Rx3c":
        return Rx3c(tuple(universe), tuple(frozenset(f) for f in family))


SourceProblem = Union[CnfSat, SetCover, VertexCover, IndependentSet, Rx3c]


def _literal(lit: str):
    """Split a literal string into (variable, polarity)."""
    if lit.startswith("-"):
        return lit[1:], False
    return lit, True


def _graph_violations(graph: Graph) -> list:
    out = []
    if len(set(graph.vertices)) != len(graph.vertices):
        out.append("duplicate vertices")
    vs = set(graph.vertices)
    for e in graph.edges:
        if len(e) != 2:
            out.append(f"edge {sorted(e)} does not have two endpoints")
        elif not e <= vs:
            out.append(f"edge {sorted(e)} leaves the vertex set")
    if len(set(graph.edges)) != len(graph.edges):
        out.append("duplicate edges")
    return out


def validate_source(source: SourceProblem) -> list:
    """Structural check; returns a list of violations, empty when fine."""
    out = []
    if isinstance(source, CnfSat):
        if len(set(source.variables)) != len(source.variables):
            out.append("duplicate variable names")
        known = set(source.variables)
        for j, clause in enumerate(source.clauses):
            for lit in clause:
                var, _ = _literal(lit)
                if var not in known:
                    out.append(f"clause {j} uses unknown variable {var!r}")
    elif isinstance(source, SetCover):
        if len(set(source.universe)) != len(source.universe):
            out.append("duplicate universe elements")
        if source.k < 0:
            out.append("k must be non-negative")
        elems = set(source.universe)
        for i, f in enumerate(source.family):
            if not f <= elems:
                out.append(f"set {i} leaves the universe")
    elif isinstance(source, (VertexCover, IndependentSet)):
        out.extend(_graph_violations(source.graph))
        if source.k < 0:
            out.append("k must be non-negative")
    elif isinstance(source, Rx3c):
        if len(set(source.universe)) != len(source.universe):
            out.append("duplicate universe elements")
        if len(source.universe) % 3 != 0:
            out.append("universe size must be a multiple of three")
        elems = set(source.universe)
        for i, f in enumerate(source.family):
            if len(f) != 3:
                out.append(f"set {i} does not have exactly three elements")
            if not f <= elems:
                out.append(f"set {i} leaves the universe")
        for x in source.universe:
            occ = sum(1 for f in source.family if x in f)
            if occ != 3:
                out.append(f"element {x!r} occurs in {occ} sets, not 3")
    else:
        out.append(f"unknown source problem {type(source).__name__}")
    return out


# ---------------------------------------------------------------------------
# output type


@dataclass(frozen=True)
class ReductionOutput:
    """A constructed attack instance with certificate translators."""

    instance: AttackInstance
    forward: Callable[..., Solution]
    backward: Callable[[Solution], object]
    theorem_id: str
    metadata: dict = field(default_factory=dict)


def _grid(n: int, value: int):
    return [[value] * n for _ in range(n)]


def _society(rows, labels) -> Society:
    return make_society([tuple(r) for r in rows], tuple(labels))


def _evaluate_after(instance: AttackInstance, sol: Solution):
    """Socially qualified set after applying sol (empty when nobody is left)."""
    from .model import apply_solution

    members, phi = apply_solution(instance, sol)
    if not members:
        return frozenset()
    return rules_mod.evaluate(instance.rule, Society(phi), members)


def _changed_rows(instance: AttackInstance, sol: Solution):
    return frozenset(i for i, row in sol.rows
                     if row != instance.society.phi[i])


def _pad_family(family, k):
    """Append empty sets until the family outnumbers the budget."""
    fam = list(family)
    pads = 0
    while len(fam) <= k:
        fam.append(frozenset())
        pads += 1
    return fam, pads


# ---------------------------------------------------------------------------
# protective microbribery from CNF-SAT (csr, lsr)


def _build_gmb_prot(source: CnfSat, rule: Rule) -> ReductionOutput:
    variables = source.variables
    clauses = source.clauses
    nc, nv = len(clauses), len(variables)
    n = nc + 6 * nv + 1
    hub = n - 1

    def var_base(i):
        return nc + 6 * i

    labels = [f"c{j}" for j in range(nc)]
    for x in variables:
        labels += [f"pos_{x}", f"neg_{x}", f"q1_{x}", f"q2_{x}",
                   f"d1_{x}", f"d2_{x}"]
    labels.append("hub")

    phi = _grid(n, DISQUALIFY)
    for a in range(n):
        phi[a][hub] = QUALIFY
    pos_of = {x: var_base(i) for i, x in enumerate(variables)}
    for i, x in enumerate(variables):
        b = var_base(i)
        pos, neg = b, b + 1
        phi[hub][pos] = QUALIFY
        phi[hub][neg] = QUALIFY
        for lit_row in (pos, neg):
            for off in (2, 3, 4, 5):
                phi[lit_row][b + off] = QUALIFY
    for j, clause in enumerate(clauses):
        for lit in clause:
            var, positive = _literal(lit)
            row = pos_of[var] + (0 if positive else 1)
            phi[row][j] = QUALIFY

    aplus = {hub} | set(range(nc))
    aminus = set()
    for i in range(nv):
        b = var_base(i)
        aplus |= {b + 2, b + 3}
        aminus |= {b + 4, b + 5}
    inst = AttackInstance(_society(phi, labels), rule, MICROBRIBERY,
                          frozenset(aplus), frozenset(aminus), 3 * nv)

    def forward(assignment) -> Solution:
        flips = []
        for i, x in enumerate(variables):
            b = var_base(i)
            pos, neg = b, b + 1
            if assignment[x]:
                flips += [(hub, neg), (pos, b + 4), (pos, b + 5)]
            else:
                flips += [(hub, pos), (neg, b + 4), (neg, b + 5)]
        return microbribe(flips)

    def backward(sol: Solution):
        qualified = _evaluate_after(inst, sol)
        return {x: pos_of[x] in qualified for x in variables}

    return ReductionOutput(inst, forward, backward, "T-GMB-PROT")


# ---------------------------------------------------------------------------
# relaxed destructive deletion from Vertex Cover (consent, s >= 2)


def _vertex_gadget(graph: Graph, s: int):
    """Vertex individuals plus s-2 supporter dummies per vertex."""
    nv = len(graph.vertices)
    n = nv * (s - 1)
    vidx = {v: i for i, v in enumerate(graph.vertices)}
    labels = [f"v_{v}" for v in graph.vertices]
    for v in graph.vertices:
        labels += [f"d{i + 1}_{v}" for i in range(s - 2)]

    def dummies(v):
        base = nv + vidx[v] * (s - 2)
        return range(base, base + s - 2)

    phi = _grid(n, DISQUALIFY)
    for a in range(n):
        phi[a][a] = QUALIFY
    for e in graph.edges:
        u, v = sorted(e, key=vidx.get)
        phi[vidx[u]][vidx[v]] = QUALIFY
        phi[vidx[v]][vidx[u]] = QUALIFY
    for v in graph.vertices:
        for d in dummies(v):
            phi[d][vidx[v]] = QUALIFY
    return phi, labels, vidx, dummies


def _vertex_cover_from_deletions(graph: Graph, vidx, dummies, U):
    """Read a cover off a deletion set, trading deleted supporter dummies
    for their vertex's still-uncovered edges."""
    cover = {v for v in graph.vertices if vidx[v] in U}
    for e in graph.edges:
        u, v = sorted(e, key=vidx.get)
        if u in cover or v in cover:
            continue
        du = sum(1 for d in dummies(u) if d in U)
        dv = sum(1 for d in dummies(v) if d in U)
        cover.add(u if du >= dv else v)
    return tuple(sorted(cover, key=vidx.get))


def _build_rdgcdi_vc(source: VertexCover, s: int, t: int) -> ReductionOutput:
    graph, k = source.graph, source.k
    phi, labels, vidx, dummies = _vertex_gadget(graph, s)
    n = len(labels)
    inst = AttackInstance(_society(phi, labels), consent(s, t),
                          RELAXED_DELETE, frozenset(), frozenset(range(n)), k)

    def forward(cover) -> Solution:
        return delete_set(vidx[v] for v in cover)

    def backward(sol: Solution):
        return _vertex_cover_from_deletions(graph, vidx, dummies, sol.U)

    return ReductionOutput(inst, forward, backward, "T-RDGCDI-VC")


# ---------------------------------------------------------------------------
# relaxed exact deletion from RX3C (consent, s = 1, t >= 3)


def _build_regcdi_rx3c(source: Rx3c, t: int) -> ReductionOutput:
    universe, family = source.universe, source.family
    m = len(universe) // 3
    ne, nf = len(universe), len(family)
    pads = t - 3
    n = ne + nf + pads + 1
    probe = n - 1
    eidx = {x: i for i, x in enumerate(universe)}
    labels = [f"x_{x}" for x in universe]
    labels += [f"s{i}" for i in range(nf)]
    labels += [f"pad{i + 1}" for i in range(pads)]
    labels.append("probe")

    phi = _grid(n, DISQUALIFY)
    for a in range(ne):
        for b in range(n):
            phi[a][b] = QUALIFY
        phi[a][a] = DISQUALIFY
        for i in range(nf):
            phi[a][ne + i] = DISQUALIFY
    for i, f in enumerate(family):
        row = ne + i
        for x in universe:
            if x not in f:
                phi[row][eidx[x]] = QUALIFY
    for p in range(pads):
        d = ne + nf + p
        phi[d][d] = QUALIFY
    phi[probe][probe] = QUALIFY
    for x in universe:
        phi[probe][eidx[x]] = QUALIFY

    aplus = frozenset(range(ne)) | frozenset(range(ne + nf, ne + nf + pads))
    aminus = frozenset(range(ne, ne + nf)) | {probe}
    inst = AttackInstance(_society(phi, labels), consent(1, t),
                          RELAXED_DELETE, aplus, aminus, 2 * m + 1)

    def forward(chosen) -> Solution:
        keep = set(chosen)
        U = [ne + i for i in range(nf) if i not in keep]
        U.append(probe)
        return delete_set(U)

    def backward(sol: Solution):
        return tuple(sorted(i for i in range(nf) if ne + i not in sol.U))

    return ReductionOutput(inst, forward, backward, "T-REGCDI-RX3C")


# ---------------------------------------------------------------------------
# relaxed exact deletion from Vertex Cover (consent, s >= 2, t >= 2)


def _build_fst_regcdi(source: VertexCover, s: int, t: int) -> ReductionOutput:
    graph, k = source.graph, source.k
    base_phi, base_labels, vidx, dummies = _vertex_gadget(graph, s)
    base_n = len(base_labels)
    n = base_n + t
    gate = base_n
    labels = base_labels + ["gate"] + [f"gd{i + 1}" for i in range(t - 1)]

    phi = _grid(n, DISQUALIFY)
    for a in range(base_n):
        for b in range(base_n):
            phi[a][b] = base_phi[a][b]
        phi[a][gate] = QUALIFY
    # the gate and its t-1 escorts disqualify everyone, themselves included

    aplus = frozenset({gate})
    aminus = frozenset(range(n)) - aplus
    inst = AttackInstance(_society(phi, labels), consent(s, t),
                          RELAXED_DELETE, aplus, aminus, k + 1)

    def forward(cover) -> Solution:
        return delete_set([vidx[v] for v in cover] + [gate + 1])

    def backward(sol: Solution):
        U = frozenset(i for i in sol.U if i < base_n)
        return _vertex_cover_from_deletions(graph, vidx, dummies, U)

    return ReductionOutput(inst, forward, backward, "T-FST-REGCDI")


# ---------------------------------------------------------------------------
# relaxed deletion / protective deletion from CNF-SAT (csr)


def _csr_deletion_gadget(source: CnfSat, protective: bool):
    """Shared clause/variable gadget for the consensus-spread deletions.

    Non-protective: seven individuals per variable plus hub and anchor,
    the anchor is the lone initial seed.  Protective: eight per variable
    (a buried target fed by the four decoys), hub only, everyone starts
    qualified.
    """
    variables, clauses = source.variables, source.clauses
    nc, nv = len(clauses), len(variables)
    per = 8 if protective else 7
    n = nc + per * nv + (1 if protective else 2)
    hub = nc + per * nv
    anchor = None if protective else hub + 1

    def var_base(i):
        return nc + per * i

    labels = [f"c{j}" for j in range(nc)]
    for x in variables:
        labels += [f"pos_{x}", f"neg_{x}", f"q_{x}",
                   f"d1_{x}", f"d2_{x}", f"d3_{x}", f"d4_{x}"]
        if protective:
            labels.append(f"z_{x}")
    labels.append("hub")
    if not protective:
        labels.append("anchor")

    phi = _grid(n, DISQUALIFY)
    for a in range(n):
        phi[a][hub] = QUALIFY
        if not protective:
            phi[a][anchor] = QUALIFY
    if not protective:
        phi[anchor][hub] = DISQUALIFY
        for b in range(n):
            if b != anchor:
                phi[anchor][b] = DISQUALIFY
    pos_of = {x: var_base(i) for i, x in enumerate(variables)}
    for i, x in enumerate(variables):
        b = var_base(i)
        pos, neg, q = b, b + 1, b + 2
        phi[hub][pos] = QUALIFY
        phi[hub][neg] = QUALIFY
        phi[pos][q] = QUALIFY
        phi[pos][b + 3] = QUALIFY
        phi[pos][b + 4] = QUALIFY
        phi[neg][q] = QUALIFY
        phi[neg][b + 5] = QUALIFY
        phi[neg][b + 6] = QUALIFY
        if protective:
            z = b + 7
            phi[z][hub] = QUALIFY
            for d in (b + 3, b + 4, b + 5, b + 6):
                phi[d][z] = QUALIFY
    for j, clause in enumerate(clauses):
        for lit in clause:
            var, positive = _literal(lit)
            phi[pos_of[var] + (0 if positive else 1)][j] = QUALIFY

    return phi, labels, pos_of, var_base, hub, anchor


def _build_csr_rgcdi(source: CnfSat) -> ReductionOutput:
    variables = source.variables
    nc, nv = len(source.clauses), len(variables)
    phi, labels, pos_of, var_base, hub, anchor = \
        _csr_deletion_gadget(source, protective=False)

    aplus = {hub} | set(range(nc))
    aminus = {anchor}
    for i in range(nv):
        b = var_base(i)
        aplus.add(b + 2)
        aminus |= {b + 3, b + 4, b + 5, b + 6}
    inst = AttackInstance(_society(phi, labels), Rule("csr"), RELAXED_DELETE,
                          frozenset(aplus), frozenset(aminus), 3 * nv + 1)

    def forward(assignment) -> Solution:
        U = [anchor]
        for x in variables:
            b = pos_of[x]
            if assignment[x]:
                U += [b + 1, b + 3, b + 4]
            else:
                U += [b, b + 5, b + 6]
        return delete_set(U)

    def backward(sol: Solution):
        qualified = _evaluate_after(inst, sol)
        return {x: pos_of[x] in qualified for x in variables}

    return ReductionOutput(inst, forward, backward, "T-CSR-RGCDI")


def _build_csr_gcdi_prot(source: CnfSat) -> ReductionOutput:
    variables = source.variables
    nc, nv = len(source.clauses), len(variables)
    phi, labels, pos_of, var_base, hub, _ = \
        _csr_deletion_gadget(source, protective=True)

    aplus = {hub} | set(range(nc))
    aminus = set()
    for i in range(nv):
        b = var_base(i)
        aplus.add(b + 2)
        aminus.add(b + 7)
    inst = AttackInstance(_society(phi, labels), Rule("csr"), DELETE,
                          frozenset(aplus), frozenset(aminus), 3 * nv)

    def forward(assignment) -> Solution:
        U = []
        for x in variables:
            b = pos_of[x]
            if assignment[x]:
                U += [b + 1, b + 3, b + 4]
            else:
                U += [b, b + 5, b + 6]
        return delete_set(U)

    def backward(sol: Solution):
        qualified = _evaluate_after(inst, sol)
        return {x: pos_of[x] in qualified for x in variables}

    return ReductionOutput(inst, forward, backward, "T-CSR-GCDI-PROT")


# ---------------------------------------------------------------------------
# control by adding from Set Cover (ic, 2ic, 2lic)


def _gcai_gadget(source: SetCover, specials: int):
    """Element individuals plus one row per set; optional trailing specials."""
    universe, family = source.universe, source.family
    ne, nf = len(universe), len(family)
    n = ne + nf + specials
    eidx = {x: i for i, x in enumerate(universe)}
    labels = [f"x_{x}" for x in universe] + [f"s{i}" for i in range(nf)]
    labels += [f"g{j + 1}" for j in range(specials)]

    phi = _grid(n, QUALIFY)
    for i, f in enumerate(family):
        row = ne + i
        for b in range(n):
            phi[row][b] = QUALIFY
        for x in f:
            phi[row][eidx[x]] = DISQUALIFY
    return phi, labels, eidx


def _gcai_maps(nf, ne, sets_offset):
    def forward(chosen) -> Solution:
        return add_set(sets_offset + i for i in set(chosen))

    def backward(sol: Solution):
        return tuple(sorted(i for i in range(nf)
                            if sets_offset + i in sol.U))

    return forward, backward


def _build_ic_dgcai(source: SetCover, rule: Rule) -> ReductionOutput:
    ne, nf = len(source.universe), len(source.family)
    phi, labels, _ = _gcai_gadget(source, specials=0)
    T = frozenset(range(ne))
    inst = AttackInstance(_society(phi, labels), rule, ADD,
                          frozenset(), T, source.k, T=T)
    forward, backward = _gcai_maps(nf, ne, ne)
    return ReductionOutput(inst, forward, backward, "T-IC-DGCAI")


def _build_ic_cgcai(source: SetCover, rule: Rule) -> ReductionOutput:
    ne, nf = len(source.universe), len(source.family)
    phi, labels, _ = _gcai_gadget(source, specials=1)
    g1 = ne + nf
    for a in range(ne):
        phi[a][g1] = DISQUALIFY
    T = frozenset(range(ne)) | {g1}
    inst = AttackInstance(_society(phi, labels), rule, ADD,
                          frozenset({g1}), frozenset(), source.k, T=T)
    forward, backward = _gcai_maps(nf, ne, ne)
    return ReductionOutput(inst, forward, backward, "T-IC-CGCAI")


def _build_2ic_egcai(source: SetCover, rule: Rule) -> ReductionOutput:
    ne, nf = len(source.universe), len(source.family)
    phi, labels, _ = _gcai_gadget(source, specials=1)
    g1 = ne + nf
    for a in range(ne):
        phi[a][g1] = DISQUALIFY
    T = frozenset(range(ne)) | {g1}
    inst = AttackInstance(_society(phi, labels), rule, ADD,
                          frozenset({g1}), frozenset(range(ne)),
                          source.k, T=T)
    forward, backward = _gcai_maps(nf, ne, ne)
    return ReductionOutput(inst, forward, backward, "T-2IC-EGCAI")


def _build_ic_egcai(source: SetCover) -> ReductionOutput:
    if not source.universe:
        raise InvalidInstance("this construction needs a nonempty universe")
    ne, nf = len(source.universe), len(source.family)
    phi, labels, _ = _gcai_gadget(source, specials=3)
    g1, g2, g3 = ne + nf, ne + nf + 1, ne + nf + 2
    for a in range(ne):
        phi[a][g1] = DISQUALIFY
        phi[a][g2] = DISQUALIFY
    for i in range(nf):
        phi[ne + i][g2] = DISQUALIFY
        phi[ne + i][g3] = DISQUALIFY
    for g in (g1, g2):
        for b in range(ne):
            phi[g][b] = DISQUALIFY
    phi[g3][g1] = DISQUALIFY
    phi[g3][g2] = DISQUALIFY
    T = frozenset(range(ne)) | {g1, g2, g3}
    inst = AttackInstance(_society(phi, labels), Rule("ic"), ADD,
                          frozenset({g1, g2, g3}), frozenset(range(ne)),
                          source.k, T=T)
    forward, backward = _gcai_maps(nf, ne, ne)
    return ReductionOutput(inst, forward, backward, "T-IC-EGCAI")


# ---------------------------------------------------------------------------
# constructive / general deletion from Set Cover (ic), chain gadget


def _build_ic_cgcdi_family(source: SetCover, with_mark: bool):
    universe, k = source.universe, source.k
    family, pads = _pad_family(source.family, k)
    m = len(family)
    ne = len(universe)
    nf_orig = len(source.family)
    extras = 4 if with_mark else 2
    n = ne + 2 * m + extras
    eidx = {x: i for i, x in enumerate(universe)}
    sets = lambda i: ne + i
    twins = lambda i: ne + m + i
    hub = ne + 2 * m
    sink = hub + 1
    decoy = sink + 1 if with_mark else None
    mark = sink + 2 if with_mark else None

    labels = [f"x_{x}" for x in universe]
    labels += [f"s{i}" for i in range(m)]
    labels += [f"w{i}" for i in range(m)]
    labels += ["hub", "sink"]
    if with_mark:
        labels += ["decoy", "mark"]

    phi = _grid(n, DISQUALIFY)
    for a in range(n):
        phi[a][a] = QUALIFY
        phi[a][hub] = QUALIFY
    for a in range(ne):
        for b in range(n):
            phi[a][b] = QUALIFY
        if with_mark:
            phi[a][mark] = DISQUALIFY
    phi[hub][sets(0)] = QUALIFY
    phi[hub][twins(0)] = QUALIFY
    for i in range(m):
        for row in (sets(i), twins(i)):
            if i + 1 < m:
                phi[row][sets(i + 1)] = QUALIFY
                phi[row][twins(i + 1)] = QUALIFY
            else:
                phi[row][sink] = QUALIFY
        for x in family[i]:
            phi[sets(i)][eidx[x]] = QUALIFY
    if with_mark:
        phi[sink][decoy] = QUALIFY
        phi[decoy][mark] = QUALIFY

    aplus = set(range(ne)) | {sets(i) for i in range(m)} | {hub, sink}
    aminus = {mark} if with_mark else set()
    budget = k + 1 if with_mark else k
    inst = AttackInstance(_society(phi, labels), Rule("ic"), DELETE,
                          frozenset(aplus), frozenset(aminus), budget)
    metadata = {"padded_empty_sets": pads, "family_size": m}

    def forward(chosen) -> Solution:
        U = [twins(i) for i in set(chosen)]
        if with_mark:
            U.append(decoy)
        return delete_set(U)

    def backward(sol: Solution):
        return tuple(sorted(i for i in range(nf_orig)
                            if twins(i) in sol.U))

    theorem = "T-IC-GCDI" if with_mark else "T-IC-CGCDI"
    return ReductionOutput(inst, forward, backward, theorem, metadata)


# ---------------------------------------------------------------------------
# destructive / general deletion from Set Cover (ic, 2ic, 2lic)


def _dgcdi_gadget(source: SetCover, extras: int):
    universe, family = source.universe, source.family
    ne, m = len(universe), len(family)
    n = ne + 2 * m + extras
    eidx = {x: i for i, x in enumerate(universe)}
    labels = [f"x_{x}" for x in universe]
    labels += [f"s{i}" for i in range(m)]
    labels += [f"w{i}" for i in range(m)]

    phi = _grid(n, QUALIFY)
    for i, f in enumerate(family):
        for x in f:
            phi[ne + i][eidx[x]] = DISQUALIFY
        phi[ne + m + i][ne + i] = DISQUALIFY
    return phi, labels


def _build_ic_dgcdi(source: SetCover, rule: Rule) -> ReductionOutput:
    ne, m = len(source.universe), len(source.family)
    phi, labels = _dgcdi_gadget(source, extras=0)
    inst = AttackInstance(_society(phi, labels), rule, DELETE,
                          frozenset(), frozenset(range(ne)), source.k)

    def forward(chosen) -> Solution:
        return delete_set(ne + m + i for i in set(chosen))

    def backward(sol: Solution):
        return tuple(sorted(i for i in range(m) if ne + m + i in sol.U))

    return ReductionOutput(inst, forward, backward, "T-IC-DGCDI")


def _build_2ic_gcdi(source: SetCover, rule: Rule) -> ReductionOutput:
    ne, m = len(source.universe), len(source.family)
    phi, labels = _dgcdi_gadget(source, extras=2)
    guard = ne + 2 * m
    veto = guard + 1
    labels = labels + ["guard", "veto"]
    phi[veto][guard] = DISQUALIFY
    inst = AttackInstance(_society(phi, labels), rule, DELETE,
                          frozenset({guard}), frozenset(range(ne)),
                          source.k + 1)

    def forward(chosen) -> Solution:
        return delete_set([ne + m + i for i in set(chosen)] + [veto])

    def backward(sol: Solution):
        return tuple(sorted(i for i in range(m) if ne + m + i in sol.U))

    return ReductionOutput(inst, forward, backward, "T-2IC-GCDI")


# ---------------------------------------------------------------------------
# group bribery from Set Cover (ic), laddered columns


def _build_ic_cgb_family(source: SetCover, with_mark: bool):
    # Known gap, kept as constructed: these bribery instances are faithful
    # on the YES side only.  With budget >= 1 an attacker can bribe one
    # universally approved individual to qualify only itself plus the
    # element block; the unanimous seed then shrinks to that individual,
    # the all-qualifying element rows become the next consensus layer, and
    # every self-qualifying individual floods in regardless of any cover.
    # So cover-free sources can still yield YES instances.  The forward
    # map below is sound and its witnesses always verify; metadata flags
    # the one-directional equivalence for consumers that cross-check.
    universe, k = source.universe, source.k
    family = list(source.family)
    appended = False
    if not family or family[-1] != frozenset():
        family.append(frozenset())
        appended = True
    family, pads = _pad_family(family, k)
    m = len(family)
    ne = len(universe)
    nf_orig = len(source.family)
    width = k + 1
    n = ne + width * m + width + (1 if with_mark else 0)
    eidx = {x: i for i, x in enumerate(universe)}

    def member(i, j):
        return ne + i * width + j

    anchors = [ne + width * m + j for j in range(width)]
    mark = n - 1 if with_mark else None

    labels = [f"x_{x}" for x in universe]
    for i in range(m):
        labels += [f"s{i}_{j + 1}" for j in range(width)]
    labels += [f"h{j + 1}" for j in range(width)]
    if with_mark:
        labels.append("mark")

    phi = _grid(n, DISQUALIFY)
    for a in range(n):
        phi[a][a] = QUALIFY
        for h in anchors:
            phi[a][h] = QUALIFY
    for a in range(ne):
        for b in range(n):
            phi[a][b] = QUALIFY
    for h in anchors:
        for j in range(width):
            phi[h][member(0, j)] = QUALIFY
        if with_mark:
            phi[h][mark] = DISQUALIFY
    for i in range(m):
        for j in range(width):
            row = member(i, j)
            if i + 1 < m:
                for j2 in range(width):
                    phi[row][member(i + 1, j2)] = QUALIFY
            if j < k:
                for x in family[i]:
                    phi[row][eidx[x]] = QUALIFY
            if with_mark and i == m - 1:
                phi[row][mark] = QUALIFY
    if with_mark:
        phi[mark][mark] = QUALIFY

    if with_mark:
        aplus = frozenset(range(n)) - {mark}
        aminus = frozenset({mark})
        budget = k + 1
    else:
        aplus = frozenset(range(n))
        aminus = frozenset()
        budget = k
    society = _society(phi, labels)
    inst = AttackInstance(society, Rule("ic"), BRIBERY, aplus, aminus, budget)
    metadata = {"appended_empty_set": appended, "padded_empty_sets": pads,
                "family_size": m, "forward_only": True,
                "caveat": "single-bribe consensus reseed can flood all "
                          "self-qualifiers, so cover-free sources may "
                          "still build YES instances"}

    def forward(chosen) -> Solution:
        rows = {}
        for i in set(chosen):
            row = list(society.phi[member(i, k)])
            for b in range(ne):
                row[b] = QUALIFY
            rows[member(i, k)] = row
        if with_mark:
            last = member(m - 1, k)
            row = rows.get(last, list(society.phi[last]))
            row = list(row)
            row[mark] = DISQUALIFY
            rows[last] = row
        return bribe(rows)

    def backward(sol: Solution):
        changed = _changed_rows(inst, sol)
        chosen = []
        for i in range(nf_orig):
            if with_mark and i == m - 1:
                continue
            if member(i, k) in changed:
                chosen.append(i)
        return tuple(chosen)

    theorem = "T-IC-GB" if with_mark else "T-IC-CGB"
    return ReductionOutput(inst, forward, backward, theorem, metadata)


# ---------------------------------------------------------------------------
# priced group bribery from Set Cover (2lic destructive; 2ic/2lic exact)


def _dgb_gadget(universe, family, extras: int):
    ne, m = len(universe), len(family)
    n = ne + 2 * m + extras
    eidx = {x: i for i, x in enumerate(universe)}
    labels = [f"x_{x}" for x in universe]
    labels += [f"s{i}" for i in range(m)]
    labels += [f"w{i}" for i in range(m)]

    phi = _grid(n, QUALIFY)
    for i, f in enumerate(family):
        for x in f:
            phi[ne + i][eidx[x]] = DISQUALIFY
        phi[ne + m + i][ne + i] = DISQUALIFY
        phi[ne + m + i][ne + m + i] = DISQUALIFY
    return phi, labels


def _build_2lic_dgb(source: SetCover) -> ReductionOutput:
    universe, k = source.universe, source.k
    family = source.family
    ne, m = len(universe), len(family)
    phi, labels = _dgb_gadget(universe, family, extras=0)
    prices = [k + 1] * (ne + m) + [1] * m
    society = _society(phi, labels)
    inst = AttackInstance(society, Rule("2lic"), BRIBERY,
                          frozenset(), frozenset(range(ne)) |
                          frozenset(range(ne + m, ne + 2 * m)),
                          k, priced=True, prices=tuple(prices))

    def forward(chosen) -> Solution:
        rows = {}
        for i in set(chosen):
            row = list(society.phi[ne + m + i])
            row[ne + i] = QUALIFY
            rows[ne + m + i] = row
        return bribe(rows)

    def backward(sol: Solution):
        changed = _changed_rows(inst, sol)
        return tuple(sorted(i for i in range(m) if ne + m + i in changed))

    return ReductionOutput(inst, forward, backward, "T-2LIC-DGB")


def _build_2ic_egb(source: SetCover, rule: Rule) -> ReductionOutput:
    universe, k = source.universe, source.k
    family, pads = _pad_family(source.family, k)
    ne, m = len(universe), len(family)
    nf_orig = len(source.family)
    phi, labels = _dgb_gadget(universe, family, extras=2)
    hub = ne + 2 * m
    gate = hub + 1
    labels = labels + ["hub", "gate"]
    phi[gate][gate] = DISQUALIFY
    for i in range(m):
        phi[ne + m + i][gate] = DISQUALIFY
    prices = [k + 1] * (ne + m) + [1] * m + [k + 1, 1]
    society = _society(phi, labels)
    aminus = frozenset(range(ne + m, ne + 2 * m)) | frozenset(range(ne))
    inst = AttackInstance(society, rule, BRIBERY,
                          frozenset(range(ne, ne + m)) | {hub, gate},
                          aminus, k + 1, priced=True, prices=tuple(prices))
    metadata = {"padded_empty_sets": pads, "family_size": m}

    def forward(chosen) -> Solution:
        rows = {gate: [QUALIFY] * (ne + 2 * m + 2)}
        for i in set(chosen):
            row = list(society.phi[ne + m + i])
            row[ne + i] = QUALIFY
            rows[ne + m + i] = row
        return bribe(rows)

    def backward(sol: Solution):
        changed = _changed_rows(inst, sol)
        return tuple(sorted(i for i in range(nf_orig)
                            if ne + m + i in changed))

    return ReductionOutput(inst, forward, backward, "T-2IC-EGB", metadata)


# ---------------------------------------------------------------------------
# priced constructive microbribery from Independent Set (2ic, 2lic)


def _build_2ic_cgmb(source: IndependentSet, rule: Rule) -> ReductionOutput:
    graph, k = source.graph, source.k
    dropped = tuple(v for v in graph.vertices if graph.degree(v) == 0)
    kept = tuple(v for v in graph.vertices if graph.degree(v) >= 1)
    k_eff = k - len(dropped)
    if not graph.edges:
        raise InvalidInstance(
            "this construction needs a graph with at least one edge")
    nv, ne = len(kept), len(graph.edges)
    n = nv + ne + 2
    vidx = {v: i for i, v in enumerate(kept)}
    hub, gate = n - 2, n - 1
    labels = [f"v_{v}" for v in kept]
    labels += ["e_{}_{}".format(*sorted(e, key=graph.vertices.index))
               for e in graph.edges]
    labels += ["hub", "gate"]

    phi = _grid(n, QUALIFY)
    for j, e in enumerate(graph.edges):
        for v in e:
            phi[vidx[v]][nv + j] = DISQUALIFY
        phi[nv + j][gate] = DISQUALIFY

    deg = {v: graph.degree(v) for v in kept}
    D = lcm(*deg.values())
    budget = max(0, nv * (D + 1) - k_eff)
    price = [[budget + 1] * n for _ in range(n)]
    for v in kept:
        price[vidx[v]][vidx[v]] = D + 1
    for j, e in enumerate(graph.edges):
        for v in e:
            price[vidx[v]][nv + j] = D // deg[v]

    inst = AttackInstance(_society(phi, labels), rule, MICROBRIBERY,
                          frozenset(range(nv, nv + ne)) | {gate},
                          frozenset(), budget, priced=True,
                          price_matrix=tuple(tuple(r) for r in price))
    metadata = {"dropped_isolated_vertices": dropped, "k_effective": k_eff,
                "degree_lcm": D,
                "budget_clamped": nv * (D + 1) - k_eff < 0}

    def forward(chosen) -> Solution:
        members = {v for v in chosen if v in vidx}
        flips = []
        for v in kept:
            if v in members:
                flips += [(vidx[v], nv + j)
                          for j, e in enumerate(graph.edges) if v in e]
            else:
                flips.append((vidx[v], vidx[v]))
        return microbribe(flips)

    def backward(sol: Solution):
        members = [v for v in kept if (vidx[v], vidx[v]) not in sol.flips]
        members.extend(dropped)
        return tuple(sorted(members, key=graph.vertices.index))

    return ReductionOutput(inst, forward, backward, "T-2IC-CGMB", metadata)


# ---------------------------------------------------------------------------
# destructive / exact microbribery from RX3C (ic, 2ic, 2lic)


def _build_ic_dgmb_family(source: Rx3c, rule: Rule, exact: bool):
    universe, family = source.universe, source.family
    m = len(universe) // 3
    ne, nf = len(universe), len(family)
    n = ne + nf + (m + 1) + 1
    probe = n - 1
    eidx = {x: i for i, x in enumerate(universe)}
    labels = [f"x_{x}" for x in universe]
    labels += [f"s{i}" for i in range(nf)]
    labels += [f"d{i + 1}" for i in range(m + 1)]
    labels.append("probe")

    phi = _grid(n, QUALIFY)
    for i, f in enumerate(family):
        for x in f:
            phi[ne + i][eidx[x]] = DISQUALIFY
    phi[probe][probe] = DISQUALIFY
    for i in range(nf):
        phi[probe][ne + i] = DISQUALIFY
    if exact:
        d1 = ne + nf
        phi[d1][d1] = DISQUALIFY

    aminus = set(range(ne))
    if exact:
        aminus.add(probe)
        aplus = frozenset(range(ne, ne + nf + m + 1))
        budget = m + 1
    else:
        aplus = frozenset()
        budget = m
    inst = AttackInstance(_society(phi, labels), rule, MICROBRIBERY,
                          aplus, frozenset(aminus), budget)

    def forward(chosen) -> Solution:
        flips = [(probe, ne + i) for i in set(chosen)]
        if exact:
            flips.append((ne + nf, ne + nf))
        return microbribe(flips)

    def backward(sol: Solution):
        return tuple(sorted(i for i in range(nf)
                            if (probe, ne + i) in sol.flips))

    theorem = "T-IC-EGMB" if exact else "T-IC-DGMB"
    return ReductionOutput(inst, forward, backward, theorem)


# ---------------------------------------------------------------------------
# catalog and dispatch


@dataclass(frozen=True)
class _Entry:
    source_type: type
    rules: tuple
    default_rule: str
    build: Callable


_CATALOG = {
    "T-GMB-PROT": _Entry(CnfSat, ("csr", "lsr"), "csr",
                         lambda src, rule, s, t: _build_gmb_prot(src, rule)),
    "T-RDGCDI-VC": _Entry(VertexCover, ("consent",), "consent",
                          lambda src, rule, s, t: _build_rdgcdi_vc(src, s, t)),
    "T-REGCDI-RX3C": _Entry(Rx3c, ("consent",), "consent",
                            lambda src, rule, s, t:
                            _build_regcdi_rx3c(src, t)),
    "T-FST-REGCDI": _Entry(VertexCover, ("consent",), "consent",
                           lambda src, rule, s, t:
                           _build_fst_regcdi(src, s, t)),
    "T-CSR-RGCDI": _Entry(CnfSat, ("csr",), "csr",
                          lambda src, rule, s, t: _build_csr_rgcdi(src)),
    "T-CSR-GCDI-PROT": _Entry(CnfSat, ("csr",), "csr",
                              lambda src, rule, s, t:
                              _build_csr_gcdi_prot(src)),
    "T-IC-DGCAI": _Entry(SetCover, ("ic", "2ic", "2lic"), "ic",
                         lambda src, rule, s, t: _build_ic_dgcai(src, rule)),
    "T-IC-CGCAI": _Entry(SetCover, ("ic", "2ic", "2lic"), "ic",
                         lambda src, rule, s, t: _build_ic_cgcai(src, rule)),
    "T-2IC-EGCAI": _Entry(SetCover, ("2ic", "2lic"), "2ic",
                          lambda src, rule, s, t: _build_2ic_egcai(src, rule)),
    "T-IC-EGCAI": _Entry(SetCover, ("ic",), "ic",
                         lambda src, rule, s, t: _build_ic_egcai(src)),
    "T-IC-CGCDI": _Entry(SetCover, ("ic",), "ic",
                         lambda src, rule, s, t:
                         _build_ic_cgcdi_family(src, with_mark=False)),
    "T-IC-GCDI": _Entry(SetCover, ("ic",), "ic",
                        lambda src, rule, s, t:
                        _build_ic_cgcdi_family(src, with_mark=True)),
    "T-IC-DGCDI": _Entry(SetCover, ("ic", "2ic", "2lic"), "ic",
                         lambda src, rule, s, t: _build_ic_dgcdi(src, rule)),
    "T-2IC-GCDI": _Entry(SetCover, ("2ic", "2lic"), "2ic",
                         lambda src, rule, s, t: _build_2ic_gcdi(src, rule)),
    "T-IC-CGB": _Entry(SetCover, ("ic",), "ic",
                       lambda src, rule, s, t:
                       _build_ic_cgb_family(src, with_mark=False)),
    "T-IC-GB": _Entry(SetCover, ("ic",), "ic",
                      lambda src, rule, s, t:
                      _build_ic_cgb_family(src, with_mark=True)),
    "T-2LIC-DGB": _Entry(SetCover, ("2lic",), "2lic",
                         lambda src, rule, s, t: _build_2lic_dgb(src)),
    "T-2IC-EGB": _Entry(SetCover, ("2ic", "2lic"), "2ic",
                        lambda src, rule, s, t: _build_2ic_egb(src, rule)),
    "T-2IC-CGMB": _Entry(IndependentSet, ("2ic", "2lic"), "2ic",
                         lambda src, rule, s, t: _build_2ic_cgmb(src, rule)),
    "T-IC-DGMB": _Entry(Rx3c, ("ic", "2ic", "2lic"), "ic",
                        lambda src, rule, s, t:
                        _build_ic_dgmb_family(src, rule, exact=False)),
    "T-IC-EGMB": _Entry(Rx3c, ("ic", "2ic", "2lic"), "ic",
                        lambda src, rule, s, t:
                        _build_ic_dgmb_family(src, rule, exact=True)),
}

THEOREM_IDS = tuple(sorted(_CATALOG))

# lower bounds for the consent-threshold constructions
_CONSENT_BOUNDS = {
    "T-RDGCDI-VC": (2, 1),
    "T-REGCDI-RX3C": (1, 3),
    "T-FST-REGCDI": (2, 2),
}


def build_reduction(theorem_id: str, source: SourceProblem, *,
                    rule: str | None = None,
                    s: int | None = None,
                    t: int | None = None) -> ReductionOutput:
    """Construct the attack instance a catalog entry derives from source.

    rule selects one of the entry's supported social rules; s and t set the
    consent thresholds where the entry uses a consent rule.
    """
    entry = _CATALOG.get(theorem_id)
    if entry is None:
        raise InvalidInstance(f"unknown theorem id {theorem_id!r}")
    if not isinstance(source, entry.source_type):
        raise InvalidInstance(
            f"{theorem_id} starts from {entry.source_type.__name__}, "
            f"got {type(source).__name__}")
    violations = validate_source(source)
    if violations:
        raise InvalidInstance("invalid source: " + "; ".join(violations))

    if entry.rules == ("consent",):
        if rule is not None and rule != "consent":
            raise InvalidInstance(f"{theorem_id} uses the consent rule")
        smin, tmin = _CONSENT_BOUNDS[theorem_id]
        if theorem_id == "T-REGCDI-RX3C":
            if s is not None and s != 1:
                raise InvalidInstance(f"{theorem_id} needs s = 1")
            s = 1
        else:
            s = smin if s is None else s
        t = tmin if t is None else t
        if s < smin or t < tmin:
            raise InvalidInstance(
                f"{theorem_id} needs s >= {smin} and t >= {tmin}")
        return entry.build(source, None, s, t)

    if s is not None or t is not None:
        raise InvalidInstance(f"{theorem_id} takes no consent thresholds")
    name = entry.default_rule if rule is None else rule
    if name not in entry.rules:
        raise InvalidInstance(
            f"{theorem_id} supports rules {', '.join(entry.rules)}")
    return entry.build(source, Rule(name), None, None)


# ---------------------------------------------------------------------------
# tiny RX3C corpus


def rx3c_corpus(m: int):
    """All RX3C instances over a fixed 3m-element universe, by exhaustion.

    Families are multisets of 3-element subsets in which every element
    occurs exactly three times.  Feasible only for tiny m.
    """
    if m not in (1, 2):
        raise InvalidInstance("exhaustive corpus only covers m in {1, 2}")
    universe = tuple(range(3 * m))
    triples = [frozenset(c) for c in itertools.combinations(universe, 3)]
    out = []
    for combo in itertools.combinations_with_replacement(
            range(len(triples)), 3 * m):
        counts = [0] * len(universe)
        for ti in combo:
            for x in triples[ti]:
                counts[x] += 1
        if all(c == 3 for c in counts):
            out.append(Rx3c(universe, tuple(triples[ti] for ti in combo)))
    return tuple(out)


def has_exact_cover(source: Rx3c) -> bool:
    """Brute-force exact-cover check, usable as a tiny-corpus oracle."""
    m = len(source.universe) // 3
    target = frozenset(source.universe)
    for combo in itertools.combinations(range(len(source.family)), m):
        union = frozenset().union(*(source.family[i] for i in combo))
        if union == target:
            return True
    return not source.universe


# ---------------------------------------------------------------------------
# source (de)serialization for the command line


def source_to_json(source: SourceProblem) -> dict:
    if isinstance(source, CnfSat):
        return {"problem": "cnfsat",
                "variables": list(source.variables),
                "clauses": [list(c) for c in source.clauses]}
    if isinstance(source, SetCover):
        return {"problem": "setcover",
                "universe": list(source.universe),
                "family": [sorted(f, key=source.universe.index)
                           for f in source.family],
                "k": source.k}
    if isinstance(source, (VertexCover, IndependentSet)):
        name = "vertexcover" if isinstance(source, VertexCover) else \
            "independentset"
        g = source.graph
        return {"problem": name,
                "vertices": list(g.vertices),
                "edges": [sorted(e, key=g.vertices.index) for e in g.edges],
                "k": source.k}
    if isinstance(source, Rx3c):
        return {"problem": "rx3c",
                "universe": list(source.universe),
                "family": [sorted(f, key=source.universe.index)
                           for f in source.family]}
    raise InvalidInstance(f"unknown source problem {type(source).__name__}")


def source_from_json(obj) -> SourceProblem:
    try:
        kind = obj["problem"]
    except (TypeError, KeyError):
        raise InvalidInstance("source object needs a 'problem' field")
    if kind == "cnfsat":
        return CnfSat.make(obj["variables"], obj["clauses"])
    if kind == "setcover":
        return SetCover.make(obj["universe"], obj["family"], obj["k"])
    if kind == "vertexcover":
        return VertexCover(Graph.make(obj["vertices"], obj["edges"]),
                           int(obj["k"]))
    if kind == "independentset":
        return IndependentSet(Graph.make(obj["vertices"], obj["edges"]),
                              int(obj["k"]))
    if kind == "rx3c":
        return Rx3c.make(obj["universe"], obj["family"])
    raise InvalidInstance(f"unknown source problem {kind!r}")
