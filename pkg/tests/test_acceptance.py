"""Acceptance criteria, one test each.

Every test records a single ``[PASS]`` or ``[FAIL]`` line before asserting;
``conftest.py`` prints the collected lines at the end of the run.
Timings use the best of a few repeats so that import and cache warm-up do
not count against a budget.
"""

import io
import random
import sys
import time
from fractions import Fraction as F

import pytest

from birnbaum import InferenceBase, RelationKind, birnbaum_chain, closure, condition, related, verify_birnbaum
from birnbaum import normal
from birnbaum.cli import main
from birnbaum.freq import (
    REFERENCE_FIGURES,
    InstrumentSpec,
    TwoPointModel,
    enumerate_two_point,
    equal_level_test,
    example3_coverage,
    example4_analysis,
    optimal_mixture_test,
)
from birnbaum.methods import BinomialSpec, NegBinomialSpec, audit_sp2_wcp, binomial_experiment, negbinomial_experiment
from birnbaum.report import TABLE2, TABLE3
from birnbaum.statistics import StatisticPartition, is_sufficient
from birnbaum.workspace import FIXTURES, load_fixture, parse_workspace_text, serialize_workspace

from oracles import l_classes_oracle
from strategies import random_universe
from test_normal import REFERENCE

A, S, C = RelationKind.A, RelationKind.S, RelationKind.C


VERDICTS = []


def verdict(number, title, ok, detail=""):
    line = f"[{'PASS' if ok else 'FAIL'}] criterion {number}: {title}" + (f" ({detail})" if detail else "")
    VERDICTS.append((number, line))
    print(line)
    assert ok, line


def best_time(fn, repeats=5):
    best = float("inf")
    for _ in range(repeats):
        t0 = time.perf_counter()
        out = fn()
        best = min(best, time.perf_counter() - t0)
    return out, best


@pytest.fixture(scope="module")
def ex1():
    return load_fixture("example1")


def test_criterion_1_tables(ex1):
    e = ex1.experiment("E")

    def work():
        return condition(e, ex1.statistic("U"), 1), condition(e, ex1.statistic("V"), 1)

    (cu, cv), secs = best_time(work)
    ok = (
        cu.outcomes == TABLE2["outcomes"] and cu.pmf == TABLE2["rows"]
        and cv.outcomes == TABLE3["outcomes"] and cv.pmf == TABLE3["rows"]
        and secs < 1e-3
    )
    verdict(1, "conditioning on U=1 and V=1 reproduces Tables 2 and 3", ok, f"{secs * 1e3:.3f} ms")


def test_criterion_2_non_transitivity(ex1):
    stats = list(ex1.statistics.values())
    e, u, v = (ex1.base(r) for r in ("E:(1,1)", "E_u1:(1,1)", "E_v1:(1,1)"))
    eu, ev, uv = (bool(related(A, *p, stats)) for p in ((e, u), (e, v), (u, v)))
    cl = closure(ex1.universe("ex1-universe"), {A}, stats)
    lr = [u.experiment.column("(1,1)"), v.experiment.column("(1,1)")]
    ratios = [col[0] / col[1] for col in lr]
    ok = eu and ev and not uv and cl.classes == ((0, 1, 2),) and ratios == [2, 2]
    verdict(2, "A holds E~E_u1 and E~E_v1, fails E_u1~E_v1; closure merges all three", ok,
            f"A: {eu}, {ev}, {uv}; classes {cl.classes}; ratios {[str(r) for r in ratios]}")


def test_criterion_3_birnbaum_chain():
    a = InferenceBase(binomial_experiment(12), "9")
    b = InferenceBase(negbinomial_experiment(3), "9")
    chain, secs = best_time(lambda: birnbaum_chain(a, b))
    block = chain.steps[1].evidence["birnbaum_block"]
    mix = chain.mixture
    t = StatisticPartition.of("T", [block] + [(x,) for x in mix.outcomes if x not in block], mix.id)
    suff = is_sufficient(mix, t)
    ok = (
        chain.constant == 4
        and bool(suff)
        and suff.witness["conditionals"][0][block[0]] == F(4, 5)
        and all(related(s.kind, s.source, s.target) for s in chain.steps)
        and chain.verify()
        and secs < 10e-3
    )
    verdict(3, "C-S-C chain Bin(12):9 to NB(3):9 with c=4 and block conditional 4/5", ok,
            f"c={chain.constant}, {secs * 1e3:.2f} ms")


def test_criterion_4_theorem_at_desk_scale():
    trials = 240
    t0 = time.perf_counter()
    complete = sound = agree = 0
    nontrivial = 0
    for seed in range(trials):
        u = random_universe(random.Random(seed))
        for b in u.bases:
            e = b.experiment
            assert len(e.outcomes) <= 5 and len(e.params) <= 3
            assert all(v.denominator <= 12 for row in e.pmf for v in row)
        rep = verify_birnbaum(u)
        oracle = l_classes_oracle(u.bases)
        complete += rep.complete
        sound += rep.sound and not rep.failures
        # independent soundness: no restricted S/C class straddles two oracle L classes
        where = {i: k for k, c in enumerate(oracle) for i in c}
        agree += sorted(rep.l_classes) == oracle and all(len({where[i] for i in c}) == 1 for c in rep.sc_classes)
        nontrivial += any(len(c) > 1 for c in oracle)
    secs = time.perf_counter() - t0
    ok = complete == sound == agree == trials and secs < 60
    verdict(4, "closure({S,C}) equals the L classes on random universes", ok,
            f"{trials} universes, {nontrivial} with non-trivial L classes; complete {complete}, "
            f"sound {sound}, oracle agreement {agree}; {secs:.1f} s")


def test_criterion_5_mayo_audit():
    r = audit_sp2_wcp(BinomialSpec(12, F(1, 2)), NegBinomialSpec(3, F(1, 2)), (9, 3))
    ok = (
        (r.sp2_check, r.wcp_check, r.lp_check) == (True, True, False)
        and r.m_values["E1"] == F(299, 4096)
        and r.m_values["E2"] == F(134, 4096)
        and r.m_values["Emix(1,x)"] == r.m_values["Emix(2,x)"] == F(433, 8192)
        and r.premise_verified and r.premise_constant == 4
    )
    verdict(5, "audit gives sp2, wcp true and lp false with exact p-values", ok,
            f"p = {r.m_values['E1']}, {r.m_values['E2']}, {r.m_values['Emix(1,x)']}; c = {r.premise_constant}")


def test_criterion_6_example3():
    ok = True
    for theta in (F(0), F(1, 4), F(1, 2), F(9, 10)):
        ok &= example3_coverage(theta) == 1 - theta
        ok &= example3_coverage(theta, "given_X_zero") == (1 if theta == 0 else 0)
        if theta > 0:
            ok &= example3_coverage(theta, "given_X_positive") == 1
    verdict(6, "point-mass coverage: 1-theta, 1 given X>0, indicator given X=0", ok)


def test_criterion_7_example4():
    checked = 0
    ok = True
    for eps in (F(0), F(1, 4), F(1, 2), F(3, 4)):
        if eps == 0:
            thetas = [F(-4), F(-1), F(0), F(1, 2), F(7)]
        else:
            w = 1 / (2 * eps)
            thetas = [-w, -w / 2, F(0), w / 3, w]
        for theta in thetas:
            m = TwoPointModel(eps, theta)
            a = example4_analysis(m)
            oracle = enumerate_two_point(m)
            ok &= all(a.values()[k] == oracle[k] for k in oracle)
            checked += 1
            if eps > 0 and theta == 1 / (2 * eps):
                ok &= a.unconditional == 0
    a0 = example4_analysis(TwoPointModel(0, 0))
    ok &= (a0.given_d1, a0.given_d0, a0.unconditional) == (1, F(1, 2), F(3, 4))
    verdict(7, "two-point closed forms equal the 4-outcome enumeration", ok,
            f"{checked} grid points; eps=0 gives ({a0.given_d1}, {a0.given_d0}) and {a0.unconditional}")


def test_criterion_8_instrument_mixture():
    t0 = time.perf_counter()
    ok = True
    worst = 0.0
    for s1, s2 in ((0.1, 0.05), (0.2, 0.05), (0.1, 0.09), (0.5, 0.1), (0.05, 0.1)):
        for n in range(1, 11):
            i1, i2 = InstrumentSpec(s1, 1.0, 1.1, n), InstrumentSpec(s2, 1.0, 1.1, n)
            opt = optimal_mixture_test(i1, i2, 0.05)
            eq = equal_level_test(i1, i2, 0.05)
            worst = max(worst, abs(opt.avg_alpha - 0.05))
            ok &= abs(opt.avg_alpha - 0.05) <= 1e-9 and opt.avg_power >= eq.avg_power
    sym = optimal_mixture_test(InstrumentSpec(0.1, 1.0, 1.1, 4), InstrumentSpec(0.1, 1.0, 1.1, 4), 0.05)
    ok &= abs(sym.alpha1 - sym.alpha2) <= 1e-12
    out = io.StringIO()
    main(["np-mixture", "0.1", "0.05", "1", "1.1", "1", "0.05", "--sweep-n", "1..10"], out, io.StringIO())
    text = out.getvalue()
    printed = all(f"{v:g}" in text for v in REFERENCE_FIGURES.values()) and "unreconciled" in text
    ok &= printed
    secs = time.perf_counter() - t0
    ok &= secs < 1
    verdict(8, "optimal allocation meets size, beats equal levels, splits evenly when symmetric", ok,
            f"max size error {worst:.1e}; reference 0.646/0.694/0.099/0.001 printed as unreconciled; {secs:.2f} s")


def test_criterion_9_normal_cdf():
    exact_half = normal.cdf(0.0) == 0.5
    sym = max(abs(normal.cdf(i / 100) + normal.cdf(-i / 100) - 1) for i in range(-1000, 1001))
    ref = max(abs(normal.cdf(x) - p) for x, p in REFERENCE)
    ok = exact_half and sym <= 1e-14 and ref <= 1e-10 and len(REFERENCE) == 20
    verdict(9, "Phi(0)=0.5, symmetry to 1e-14, 20 reference pairs to 1e-10", ok,
            f"symmetry {sym:.1e}, reference {ref:.1e}")


def test_criterion_10_determinism():
    outs = []
    for _ in range(3):
        buf = io.StringIO()
        code = main(["paper-report"], buf, io.StringIO())
        outs.append((code, buf.getvalue().encode()))
    same = all(o == outs[0] for o in outs) and outs[0][0] == 0
    trips = []
    for name in FIXTURES:
        ws = load_fixture(name)
        text = serialize_workspace(ws)
        back = parse_workspace_text(text)
        trips.append(
            back.experiments == ws.experiments and back.statistics == ws.statistics
            and back.universes == ws.universes and serialize_workspace(back) == text
        )
    ok = same and all(trips)
    verdict(10, "paper-report is byte-identical across runs; fixtures round-trip", ok,
            f"{len(outs)} runs, fixtures {list(FIXTURES)}")


if __name__ == "__main__":
    sys.exit(pytest.main([__file__, "-q"]))
