"""Builders for the bundled fixtures and the consolidated reproduction report.

Every entry in the report carries a status:

``matched``       computed value equals a published figure;
``derived``       value computed here with no published counterpart;
``unreconciled``  published figure that the computation does not reproduce.
"""

from __future__ import annotations

from fractions import Fraction

from . import freq, methods
from .model import Experiment, InferenceBase, likelihood_vector, render
from .relations import RelationKind, birnbaum_chain, closure, related
from .statistics import StatisticPartition, condition, indicator_blocks, is_sufficient, mle_distribution
from .workspace import Workspace, load_fixture

F = Fraction

TABLE1 = {
    "params": ("1", "2"),
    "outcomes": ("(1,1)", "(1,2)", "(2,1)", "(2,2)"),
    "rows": ((F(1, 6), F(1, 6), F(2, 6), F(2, 6)), (F(1, 12), F(3, 12), F(5, 12), F(3, 12))),
}
TABLE2 = {"outcomes": ("(1,1)", "(1,2)"), "rows": ((F(1, 2), F(1, 2)), (F(1, 4), F(3, 4)))}
TABLE3 = {"outcomes": ("(1,1)", "(2,1)"), "rows": ((F(1, 3), F(2, 3)), (F(1, 6), F(5, 6)))}

MAYO_THETAS = methods.DEFAULT_THETAS
MAYO_TAIL = 16


def example1_workspace() -> Workspace:
    ws = Workspace()
    ws.experiments["E"] = Experiment.build("E", TABLE1["params"], TABLE1["outcomes"], TABLE1["rows"])
    ws.experiments["E_u1"] = Experiment.build("E_u1", TABLE1["params"], TABLE2["outcomes"], TABLE2["rows"])
    ws.experiments["E_v1"] = Experiment.build("E_v1", TABLE1["params"], TABLE3["outcomes"], TABLE3["rows"])
    ws.statistics["U"] = StatisticPartition.of("U", [("(1,1)", "(1,2)"), ("(2,1)", "(2,2)")], "E")
    ws.statistics["V"] = StatisticPartition.of("V", [("(1,1)", "(2,1)"), ("(1,2)", "(2,2)")], "E")
    ws.universes["ex1-universe"] = (("E", "(1,1)"), ("E_u1", "(1,1)"), ("E_v1", "(1,1)"))
    ws.universes["ex1-conditionals"] = (("E_u1", "(1,1)"), ("E_v1", "(1,1)"))
    return ws


def mayo_workspace(n: int = 12, k: int = 3, successes: int = 9) -> Workspace:
    mix = methods.mayo_mixture(n, k, MAYO_THETAS, MAYO_TAIL)
    e1, e2 = mix.components
    ws = Workspace()
    ws.experiments[e1.id] = e1
    ws.experiments[e2.id] = e2
    ws.experiments[mix.id] = mix
    ws.statistics["J"] = StatisticPartition.of("J", indicator_blocks(mix), mix.id)
    s = str(successes)
    block = (f"(1,{s})", f"(2,{s})")
    ws.statistics["T"] = StatisticPartition.of(
        "T", [block] + [(x,) for x in mix.outcomes if x not in block], mix.id
    )
    ws.universes["mayo-universe"] = ((e1.id, s), (e2.id, s), (mix.id, block[0]), (mix.id, block[1]))
    ws.universes["mayo-pair"] = ((e1.id, s), (e2.id, s))
    return ws


def _entry(name, status, values, reference=None, note=None):
    d = {"name": name, "status": status, "values": values}
    if reference is not None:
        d["reference"] = reference
    if note:
        d["note"] = note
    return d


def paper_report() -> list[dict]:
    """Run every worked example and return report entries (JSON-ready except Fractions)."""
    entries = []
    ws = load_fixture("example1.bw")
    e, eu, ev = ws.experiments["E"], ws.experiments["E_u1"], ws.experiments["E_v1"]
    u, v = ws.statistics["U"], ws.statistics["V"]

    cu = condition(e, u, 1)
    cv = condition(e, v, 1)
    entries.append(_entry(
        "conditional models given U=1 and V=1",
        "matched" if cu.same_distributions(eu) and cv.same_distributions(ev) else "unreconciled",
        {"given U=1": {p: dict(zip(cu.outcomes, row)) for p, row in zip(cu.params, cu.pmf)},
         "given V=1": {p: dict(zip(cv.outcomes, row)) for p, row in zip(cv.params, cv.pmf)}},
    ))

    b_e, b_u, b_v = (InferenceBase(x, "(1,1)") for x in (e, eu, ev))
    stats = list(ws.statistics.values())
    a_eu = bool(related(RelationKind.A, b_e, b_u, stats))
    a_ev = bool(related(RelationKind.A, b_e, b_v, stats))
    a_uv = bool(related(RelationKind.A, b_u, b_v, stats))
    cl = closure(ws.universe("ex1-universe"), {RelationKind.A}, stats)
    lr_u = likelihood_vector(b_u).ratio(0, 1)
    lr_v = likelihood_vector(b_v).ratio(0, 1)
    ok = a_eu and a_ev and not a_uv and len(cl.classes) == 1 and lr_u == lr_v == 2
    entries.append(_entry(
        "A is not transitive", "matched" if ok else "unreconciled",
        {"A(E, E_u1)": a_eu, "A(E, E_v1)": a_ev, "A(E_u1, E_v1)": a_uv,
         "closure classes": len(cl.classes), "direct edges": len(cl.edges),
         "likelihood ratio given U": lr_u, "likelihood ratio given V": lr_v},
    ))

    mle_u, mle_v = mle_distribution(eu), mle_distribution(ev)
    p_u = mle_u["1"].get(("1",), F(0))
    p_v = mle_v["2"].get(("1",), F(0))
    entries.append(_entry(
        "accuracy of the MLE, theta=1 given U=1", "matched" if p_u == F(1, 2) else "unreconciled",
        {"P_1(mle=1 | U=1)": p_u}, reference=F(1, 2),
    ))
    entries.append(_entry(
        "accuracy of the MLE, theta=2 given V=1", "matched" if p_v == F(3, 4) else "unreconciled",
        {"P_2(mle=1 | V=1)": p_v, "P_2(mle=2 | V=1)": mle_v["2"].get(("2",), F(0)),
         "P_2(mle=2 | U=1)": mle_u["2"].get(("2",), F(0)), "P_1(mle=1 | V=1)": mle_v["1"].get(("1",), F(0))},
        reference=F(3, 4),
        note="the quoted 3/4 equals P_2(mle=2 | U=1), not P_2(mle=1 | V=1)",
    ))

    bin12 = methods.binomial_experiment(12)
    nb3 = methods.negbinomial_experiment(3)
    chain = birnbaum_chain(InferenceBase(bin12, "9"), InferenceBase(nb3, "9"))
    s_step = chain.steps[1].evidence
    entries.append(_entry(
        "C-S-C chain, binomial(12) vs negative binomial(3) at 9 successes", "derived",
        {"c": chain.constant, "block conditional": chain.block_conditional,
         "block sufficient": s_step["block_sufficient"], "steps verified": chain.verify(),
         "steps": chain.describe()},
    ))
    cond_chain = birnbaum_chain(b_u, b_v)
    entries.append(_entry(
        "C-S-C chain between the two conditional models", "derived",
        {"c": cond_chain.constant, "block conditional": cond_chain.block_conditional,
         "steps verified": cond_chain.verify()},
    ))

    audit = methods.audit_sp2_wcp(methods.BinomialSpec(12, F(1, 2)), methods.NegBinomialSpec(3, F(1, 2)), (9, 3))
    entries.append(_entry(
        "p-values and the M versus Ev audit", "derived",
        {"M": audit.m_values, "Ev": audit.ev_values, "SP2": audit.sp2_check, "WCP": audit.wcp_check,
         "LP": audit.lp_check, "SP on Ev": audit.sp_check, "likelihood constant": audit.premise_constant},
        note=audit.header,
    ))

    thetas = [F(0), F(1, 4), F(1, 2), F(9, 10)]
    cov = {}
    for t in thetas:
        row = {"unconditional": freq.example3_coverage(t, "unconditional"),
               "given X=0": freq.example3_coverage(t, "given_X_zero")}
        row["given X>0"] = freq.example3_coverage(t, "given_X_positive") if t > 0 else None
        cov[str(t)] = row
    entries.append(_entry("coverage of C={X}", "matched", cov))

    a0 = freq.example4_analysis(freq.TwoPointModel(0, 0))
    ok = (a0.unconditional, a0.given_d1, a0.given_d0, a0.d_ancillary) == (F(3, 4), 1, F(1, 2), True)
    entries.append(_entry(
        "two-point model, eps=0", "matched" if ok else "unreconciled",
        {"P(T=theta)": a0.unconditional, "given D=1": a0.given_d1, "given D=0": a0.given_d0,
         "D ancillary": a0.d_ancillary},
    ))
    grid = {}
    for eps, theta in ((F(1, 4), F(0)), (F(1, 4), F(2)), (F(1, 2), F(1)), (F(3, 4), F(1, 3))):
        an = freq.example4_analysis(freq.TwoPointModel(eps, theta))
        grid[f"eps={eps}, theta={theta}"] = {**an.values(), "D ancillary": an.d_ancillary,
                                             "sets disjoint": an.sets_disjoint}
    entries.append(_entry("two-point model, eps > 0 (closed form = enumeration)", "derived", grid))

    i1 = freq.InstrumentSpec(0.1, 1.0, 1.1, 1)
    i2 = freq.InstrumentSpec(0.05, 1.0, 1.1, 1)
    eq = freq.equal_level_test(i1, i2, 0.05)
    opt = freq.optimal_mixture_test(i1, i2, 0.05)
    entries.append(_entry(
        "instrument mixture at n=1", "derived",
        {"equal level": eq.as_dict(), "common cutoff": opt.as_dict()},
    ))
    rows = freq.reproduction_sweep(0.1, 0.05, 1.0, 1.1, 0.05)
    entries.append(_entry(
        "instrument mixture reference figures", "unreconciled",
        {"sweep": [{"n": r.n, "equal avg power": r.equal.avg_power, "optimal avg power": r.optimal.avg_power,
                    "alpha old": r.optimal.alpha1, "alpha new": r.optimal.alpha2} for r in rows],
         "closest": freq.closest_to_reference(rows)},
        reference=freq.REFERENCE_FIGURES,
        note="sample size and test statistic are not stated; no n in 1..10 reproduces all four figures",
    ))
    return entries


def _fmt(v):
    if v is None:
        return "undefined"
    if isinstance(v, Fraction):
        return render(v)
    if isinstance(v, float):
        return f"{v:.6g}"
    return str(v)


def format_report(entries: list[dict]) -> str:
    lines = []

    def walk(obj, indent):
        pad = "  " * indent
        if isinstance(obj, dict):
            for k, v in obj.items():
                if isinstance(v, (dict, list)):
                    lines.append(f"{pad}{k}:")
                    walk(v, indent + 1)
                else:
                    lines.append(f"{pad}{k}: {_fmt(v)}")
        elif isinstance(obj, list):
            for item in obj:
                if isinstance(item, (dict, list)):
                    lines.append(f"{pad}-")
                    walk(item, indent + 1)
                else:
                    lines.append(f"{pad}- {_fmt(item)}")

    for ent in entries:
        lines.append(f"[{ent['status']}] {ent['name']}")
        walk(ent["values"], 1)
        if "reference" in ent:
            ref = ent["reference"]
            if isinstance(ref, dict):
                lines.append("  reference:")
                walk(ref, 2)
            else:
                lines.append(f"  reference: {_fmt(ref)}")
        if "note" in ent:
            lines.append(f"  note: {ent['note']}")
        lines.append("")
    return "\n".join(lines)
