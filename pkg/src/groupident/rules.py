"""The six social rules.

evaluate() returns the socially qualified subset of T; trace() additionally
exposes the iteration stages of the five iterative rules.  Restricting to a
subset T means only opinions among T count, so "qualified by everyone" is
always relative to T.
"""

from __future__ import annotations

from dataclasses import dataclass

from .model import QUALIFY, InvalidInstance, Rule, Society


@dataclass(frozen=True)
class RuleTrace:
    """Iteration record of an evaluation.

    stages holds, per rule family:
      lsr/csr:   the cumulative sets K0, K1, ...
      ic:        pairs (Q_i, K_i) of newly qualified and cumulative sets
      2ic/2lic:  the pair (K0, K1)
      consent:   a single degenerate stage (the final set)
    """

    rule: Rule
    stages: tuple
    final: frozenset[int]


def _as_set(society: Society, T) -> frozenset[int]:
    if T is None:
        return society.individuals()
    T = frozenset(T)
    if not T <= society.individuals():
        raise InvalidInstance("T must be a subset of the society")
    if not T:
        raise InvalidInstance("T must be nonempty")
    return T


def _consent_set(society: Society, T: frozenset[int], s: int, t: int) -> frozenset[int]:
    phi = society.phi
    out = set()
    for a in T:
        if phi[a][a] == QUALIFY:
            # the count includes a's own opinion
            if sum(1 for b in T if phi[b][a] == QUALIFY) >= s:
                out.add(a)
        else:
            if sum(1 for b in T if phi[b][a] != QUALIFY) < t:
                out.add(a)
    return frozenset(out)


def _unanimous(society: Society, T: frozenset[int]) -> frozenset[int]:
    phi = society.phi
    return frozenset(a for a in T if all(phi[b][a] == QUALIFY for b in T))


def _self_qualifiers(society: Society, T: frozenset[int]) -> frozenset[int]:
    return frozenset(a for a in T if society.phi[a][a] == QUALIFY)


def _closure_stages(society: Society, T: frozenset[int], seed: frozenset[int]):
    """Cumulative stages K0 subseteq K1 subseteq ... until the fixpoint."""
    phi = society.phi
    stages = [seed]
    current = seed
    for _ in range(len(T) + 1):
        grown = current | frozenset(
            a for a in T if any(phi[b][a] == QUALIFY for b in current))
        if grown == current:
            return stages
        stages.append(grown)
        current = grown
    raise AssertionError("closure failed to stabilize within n+1 stages")


def _ic_stages(society: Society, T: frozenset[int]):
    phi = society.phi
    q0 = _unanimous(society, T)
    stages = [(q0, q0)]
    cumulative = q0
    previous = q0
    for _ in range(len(T) + 1):
        if not previous:
            return stages
        fresh = frozenset(
            a for a in T - cumulative
            if phi[a][a] == QUALIFY and all(phi[b][a] == QUALIFY for b in previous))
        if not fresh:
            stages.append((fresh, cumulative))
            return stages
        cumulative = cumulative | fresh
        stages.append((fresh, cumulative))
        previous = fresh
    raise AssertionError("iterative consensus failed to stabilize within n+1 stages")


def _two_stage(society: Society, T: frozenset[int], liberal: bool):
    phi = society.phi
    k0 = _unanimous(society, T)
    extra = frozenset(
        a for a in T
        if phi[a][a] == QUALIFY
        and ((k0 and all(phi[b][a] == QUALIFY for b in k0)) or (liberal and not k0)))
    return k0, k0 | extra


def trace(rule: Rule, society: Society, T=None) -> RuleTrace:
    T = _as_set(society, T)
    if rule.name == "consent":
        final = _consent_set(society, T, rule.s, rule.t)
        return RuleTrace(rule, (final,), final)
    if rule.name == "lsr":
        stages = _closure_stages(society, T, _self_qualifiers(society, T))
        return RuleTrace(rule, tuple(stages), stages[-1])
    if rule.name == "csr":
        stages = _closure_stages(society, T, _unanimous(society, T))
        return RuleTrace(rule, tuple(stages), stages[-1])
    if rule.name == "ic":
        stages = _ic_stages(society, T)
        return RuleTrace(rule, tuple(stages), stages[-1][1])
    if rule.name in ("2ic", "2lic"):
        k0, k1 = _two_stage(society, T, liberal=rule.name == "2lic")
        return RuleTrace(rule, (k0, k1), k1)
    raise InvalidInstance(f"unknown rule {rule.name!r}")


def evaluate(rule: Rule, society: Society, T=None) -> frozenset[int]:
    return trace(rule, society, T).final
