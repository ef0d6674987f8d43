import dataclasses
import itertools

from groupident.model import verify_solution
from groupident.oracle import OracleLimits, brute_force
from groupident import rules as R
from groupident.reductions import (
    CnfSat, Graph, IndependentSet, Rx3c, SetCover, VertexCover,
    THEOREM_IDS, build_reduction, has_exact_cover, rx3c_corpus,
    validate_source,
)

print("theorem ids:", len(THEOREM_IDS))
assert len(THEOREM_IDS) == 21, THEOREM_IDS

BIG = OracleLimits(control_max_n=12, bribery_max_n=9, micro_max_flips=4)


def oracle_says(inst, limits=BIG):
    return brute_force(inst, limits)


def check_yes(name, out, cert):
    sol = out.forward(cert)
    res = verify_solution(out.instance, sol)
    assert res.valid, (name, res.reason)
    back = out.backward(sol)
    print(f"  {name}: forward ok (cost {res.cost}), backward {back!r}")
    return sol


# --- 1. T-GMB-PROT, single positive clause -------------------------------
src = CnfSat.make(["x"], [["x"]])
out = build_reduction("T-GMB-PROT", src)
inst = out.instance
assert inst.n == 8, inst.n
assert inst.budget == 3
initial = R.evaluate(inst.rule, inst.society)
assert initial == frozenset(range(8)), initial
check_yes("gmb-prot x:=True", out, {"x": True})
out_negated = build_reduction("T-GMB-PROT", CnfSat.make(["x"], [["-x"]]))
check_yes("gmb-prot x:=False", out_negated, {"x": False})
v3 = oracle_says(inst)
assert v3.answer is True and v3.cost <= 3, v3
v2 = oracle_says(dataclasses.replace(inst, budget=2))
assert v2.answer is False, v2
out_lsr = build_reduction("T-GMB-PROT", src, rule="lsr")
assert oracle_says(out_lsr.instance).answer is True
print("T-GMB-PROT ok", v3.cost)

# unsatisfiable: x and not-x
src_no = CnfSat.make(["x"], [["x"], ["-x"]])
out_no = build_reduction("T-GMB-PROT", src_no)
assert out_no.instance.n == 9
v = oracle_says(out_no.instance)
assert v.answer is False, v
print("T-GMB-PROT unsat ok")

# --- 2. T-RDGCDI-VC -------------------------------------------------------
p2 = Graph.make(["a", "b"], [("a", "b")])
out = build_reduction("T-RDGCDI-VC", VertexCover(p2, 1))
assert out.instance.n == 2
check_yes("rdgcdi-vc", out, ("a",))
assert oracle_says(out.instance).answer is True
out0 = build_reduction("T-RDGCDI-VC", VertexCover(p2, 0))
assert oracle_says(out0.instance).answer is False
out3 = build_reduction("T-RDGCDI-VC", VertexCover(p2, 1), s=3, t=2)
assert out3.instance.n == 4
sol = check_yes("rdgcdi-vc s=3", out3, ("b",))
assert out3.backward(sol) == ("b",)
print("T-RDGCDI-VC ok")

# --- 3. T-REGCDI-RX3C -----------------------------------------------------
r1 = rx3c_corpus(1)
assert len(r1) == 1 and has_exact_cover(r1[0])
out = build_reduction("T-REGCDI-RX3C", r1[0])
assert out.instance.n == 7 and out.instance.budget == 3
sol = check_yes("regcdi-rx3c", out, (0,))
assert out.backward(sol) == (0,)
assert oracle_says(out.instance).answer is True
out5 = build_reduction("T-REGCDI-RX3C", r1[0], t=5)
assert out5.instance.n == 9
assert verify_solution(out5.instance, out5.forward((1,))).valid
print("T-REGCDI-RX3C ok")

# --- 4. T-FST-REGCDI ------------------------------------------------------
out = build_reduction("T-FST-REGCDI", VertexCover(p2, 1))
assert out.instance.n == 4 and out.instance.budget == 2
check_yes("fst-regcdi", out, ("a",))
assert oracle_says(out.instance).answer is True
out0 = build_reduction("T-FST-REGCDI", VertexCover(p2, 0))
assert oracle_says(out0.instance).answer is False
print("T-FST-REGCDI ok")

# --- 5. T-CSR-RGCDI / T-CSR-GCDI-PROT -------------------------------------
src = CnfSat.make(["x"], [["x"]])
out = build_reduction("T-CSR-RGCDI", src)
assert out.instance.n == 10 and out.instance.budget == 4
initial = R.evaluate(out.instance.rule, out.instance.society)
assert initial == frozenset({9}), initial  # only the anchor at the start
check_yes("csr-rgcdi true", out, {"x": True})
v = oracle_says(out.instance)
assert v.answer is True, v
src_no = CnfSat.make(["x"], [["x"], ["-x"]])
out_no = build_reduction("T-CSR-RGCDI", src_no)
assert oracle_says(out_no.instance).answer is False
print("T-CSR-RGCDI ok")

out = build_reduction("T-CSR-GCDI-PROT", src)
assert out.instance.n == 10 and out.instance.budget == 3
initial = R.evaluate(out.instance.rule, out.instance.society)
assert initial == frozenset(range(10)), initial
sol = check_yes("csr-gcdi-prot", out, {"x": True})
assert out.backward(sol) == {"x": True}
assert oracle_says(out.instance).answer is True
out_no = build_reduction("T-CSR-GCDI-PROT", src_no)
assert oracle_says(out_no.instance).answer is False
print("T-CSR-GCDI-PROT ok")

# --- 6. adding-control family ---------------------------------------------
sc = SetCover.make(["x1", "x2"], [["x1"], ["x2"]], 2)
out = build_reduction("T-IC-DGCAI", sc)
assert out.instance.n == 4 and out.instance.budget == 2
check_yes("ic-dgcai", out, (0, 1))
assert oracle_says(out.instance).answer is True
assert oracle_says(dataclasses.replace(out.instance, budget=1)).answer is False
for rule in ("2ic", "2lic"):
    o = build_reduction("T-IC-DGCAI", sc, rule=rule)
    assert oracle_says(o.instance).answer is True

sc1 = SetCover.make(["x1", "x2"], [["x1", "x2"], ["x1"]], 1)
for tid in ("T-IC-CGCAI", "T-2IC-EGCAI", "T-IC-EGCAI"):
    o = build_reduction(tid, sc1)
    sol = check_yes(tid, o, (0,))
    assert o.backward(sol) == (0,)
    assert oracle_says(o.instance).answer is True
    bad = SetCover.make(["x1", "x2"], [["x1"]], 1)
    o_no = build_reduction(tid, bad)
    assert oracle_says(o_no.instance).answer is False, tid
print("adding-control family ok")

# --- 7. deletion-control family -------------------------------------------
for tid in ("T-IC-CGCDI", "T-IC-GCDI"):
    o = build_reduction(tid, sc1)
    sol = check_yes(tid, o, (0,))
    assert o.backward(sol) == (0,)
    assert oracle_says(o.instance).answer is True
    bad = SetCover.make(["x1", "x2"], [["x1"]], 1)
    o_no = build_reduction(tid, bad)
    assert oracle_says(o_no.instance).answer is False, tid
    print(tid, "ok", o.metadata)

for tid, rules in (("T-IC-DGCDI", ("ic", "2ic", "2lic")),
                   ("T-2IC-GCDI", ("2ic", "2lic"))):
    for rule in rules:
        o = build_reduction(tid, sc1, rule=rule)
        sol = check_yes(f"{tid}/{rule}", o, (0,))
        assert o.backward(sol) == (0,)
        assert oracle_says(o.instance).answer is True
        bad = SetCover.make(["x1", "x2"], [["x1"]], 1)
        o_no = build_reduction(tid, bad, rule=rule)
        assert oracle_says(o_no.instance).answer is False, (tid, rule)
    print(tid, "ok")

# --- 8. bribery family -----------------------------------------------------
o = build_reduction("T-IC-CGB", sc1)
n_expect = 2 + (1 + 1) * o.metadata["family_size"] + (1 + 1)
assert o.instance.n == n_expect, (o.instance.n, n_expect)
sol = check_yes("T-IC-CGB", o, (0,))
assert o.backward(sol) == (0,)
# oracle equivalence on sources small enough for full row enumeration
sc_tiny = SetCover.make(["x"], [["x"]], 1)
bad_tiny = SetCover.make(["x"], [], 0)
o = build_reduction("T-IC-CGB", sc_tiny)
check_yes("T-IC-CGB tiny", o, (0,))
assert oracle_says(o.instance).answer is True
assert oracle_says(build_reduction("T-IC-CGB", bad_tiny).instance).answer is False
assert oracle_says(
    build_reduction("T-IC-CGB", SetCover.make([], [], 0)).instance
).answer is True
print("T-IC-CGB ok", o.metadata)

o = build_reduction("T-IC-GB", sc1)
sol = check_yes("T-IC-GB", o, (0,))
assert o.backward(sol) == (0,)
o = build_reduction("T-IC-GB", sc_tiny)
check_yes("T-IC-GB tiny", o, (0,))
v = oracle_says(o.instance)
assert v.answer is True, v
assert oracle_says(build_reduction("T-IC-GB", bad_tiny).instance).answer is False
print("T-IC-GB ok")
bad = SetCover.make(["x1", "x2"], [["x1"]], 1)

o = build_reduction("T-2LIC-DGB", sc1)
assert o.instance.n == 2 + 2 * 2
sol = check_yes("T-2LIC-DGB", o, (0,))
assert o.backward(sol) == (0,)
assert oracle_says(o.instance).answer is True
assert oracle_says(build_reduction("T-2LIC-DGB", bad).instance).answer is False
print("T-2LIC-DGB ok")

for rule in ("2ic", "2lic"):
    o = build_reduction("T-2IC-EGB", sc1, rule=rule)
    sol = check_yes(f"T-2IC-EGB/{rule}", o, (0,))
    assert o.backward(sol) == (0,)
    assert oracle_says(o.instance).answer is True
    o_no = build_reduction("T-2IC-EGB", bad, rule=rule)
    assert oracle_says(o_no.instance).answer is False, rule
print("T-2IC-EGB ok")

# --- 9. T-2IC-CGMB ----------------------------------------------------------
iset = IndependentSet(p2, 1)
o = build_reduction("T-2IC-CGMB", iset)
D = o.metadata["degree_lcm"]
assert o.instance.budget == 2 * (D + 1) - 1
sol = check_yes("T-2IC-CGMB", o, ("a",))
assert o.backward(sol) == ("a",)
assert oracle_says(o.instance).answer is True
o_no = build_reduction("T-2IC-CGMB", IndependentSet(p2, 2))
assert oracle_says(o_no.instance).answer is False
tri = Graph.make(["a", "b", "c"], [("a", "b"), ("b", "c"), ("a", "c")])
o_tri = build_reduction("T-2IC-CGMB", IndependentSet(tri, 1), rule="2lic")
assert oracle_says(o_tri.instance).answer is True
iso = Graph.make(["z", "a", "b"], [("a", "b")])
o_iso = build_reduction("T-2IC-CGMB", IndependentSet(iso, 2))
assert o_iso.metadata["dropped_isolated_vertices"] == ("z",)
sol = check_yes("T-2IC-CGMB iso", o_iso, ("z", "a"))
assert o_iso.backward(sol) == ("z", "a")
assert oracle_says(o_iso.instance).answer is True
print("T-2IC-CGMB ok")

# --- 10. microbribery from RX3C --------------------------------------------
for rule in ("ic", "2ic", "2lic"):
    o = build_reduction("T-IC-DGMB", r1[0], rule=rule)
    assert o.instance.n == 9 and o.instance.budget == 1
    sol = check_yes(f"T-IC-DGMB/{rule}", o, (0,))
    assert o.backward(sol) == (0,)
    assert oracle_says(o.instance).answer is True

    o = build_reduction("T-IC-EGMB", r1[0], rule=rule)
    assert o.instance.budget == 2
    sol = check_yes(f"T-IC-EGMB/{rule}", o, (1,))
    assert o.backward(sol) == (1,)
    assert oracle_says(o.instance).answer is True
print("RX3C microbribery ok")

# --- 11. corpus and validation ---------------------------------------------
r2 = rx3c_corpus(2)
yes = sum(1 for s in r2 for _ in [0] if has_exact_cover(s))
print(f"rx3c corpus m=2: {len(r2)} instances, {yes} with exact cover")
assert any(has_exact_cover(s) for s in r2)
assert any(not has_exact_cover(s) for s in r2)

bad_graph = Graph.make(["a"], [("a", "a")])
assert validate_source(VertexCover(bad_graph, 1))
assert validate_source(Rx3c.make([1, 2, 3], [[1, 2, 3]]))
assert not validate_source(r1[0])
print("validation ok")
print("ALL SMOKE CHECKS PASSED")
