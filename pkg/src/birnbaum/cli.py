"""``bw`` command-line front end.

Exit codes: 0 success, 1 domain error (or a failed verification), 2 usage
error.  Every subcommand accepts ``--json``; JSON reports always carry the
keys ``command``, ``inputs``, ``values``, ``witnesses`` and ``warnings``.
"""

from __future__ import annotations

import argparse
import contextlib
import json
import os
import sys
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path

from . import freq, methods
from .errors import DomainError
from .model import Experiment, MixtureExperiment, render
from .relations import RelationKind, birnbaum_chain, closure, related, verify_birnbaum
from .report import format_report, paper_report
from .statistics import (
    DEFAULT_ANCILLARY_CAP,
    StatisticPartition,
    condition,
    enumerate_ancillaries,
    is_ancillary,
    is_sufficient,
    minimal_sufficient,
)
from .workspace import FIXTURES, Workspace, load_fixture, parse_workspace


@dataclass
class Report:
    command: str
    inputs: dict = field(default_factory=dict)
    values: dict = field(default_factory=dict)
    witnesses: dict = field(default_factory=dict)
    warnings: list = field(default_factory=list)
    text: list = field(default_factory=list)
    ok: bool = True


def to_json(obj):
    if isinstance(obj, Fraction):
        return str(obj)
    if isinstance(obj, RelationKind):
        return obj.value
    if isinstance(obj, StatisticPartition):
        return {"id": obj.id, "blocks": [list(b) for b in obj.blocks]}
    if isinstance(obj, Experiment):
        return {"id": obj.id, "params": list(obj.params), "outcomes": list(obj.outcomes),
                "pmf": [[str(v) for v in row] for row in obj.pmf]}
    if isinstance(obj, dict):
        return {(k if isinstance(k, str) else str(to_json(k))): to_json(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [to_json(v) for v in obj]
    return obj


def fmt_block(block) -> str:
    return "{" + ",".join(block) + "}"


def fmt_pmf(e: Experiment) -> list[str]:
    width = max(len(x) for x in e.outcomes + tuple(str(v) for row in e.pmf for v in row))
    pw = max(len(p) for p in e.params) + 2
    lines = [" " * pw + " ".join(x.rjust(width) for x in e.outcomes)]
    for p, row in zip(e.params, e.pmf):
        lines.append(f"{p}:".ljust(pw) + " ".join(str(v).rjust(width) for v in row))
    return lines


def ancillary_cap() -> int:
    raw = os.environ.get("BW_ANCILLARY_CAP")
    if raw is None:
        return DEFAULT_ANCILLARY_CAP
    try:
        return int(raw)
    except ValueError:
        raise DomainError("BAD_ENV", f"BW_ANCILLARY_CAP must be an integer, got {raw!r}") from None


def load_workspace(ref: str | None) -> Workspace:
    if ref is None:
        raise DomainError("NO_WORKSPACE", "this command needs a workspace (-w FILE)")
    path = Path(ref)
    if path.exists():
        return parse_workspace(path)
    name = ref if ref.endswith(".bw") else ref + ".bw"
    if name in FIXTURES:
        return load_fixture(name)
    raise DomainError("NO_WORKSPACE", f"workspace file {ref!r} not found (bundled: {', '.join(FIXTURES)})")


def fraction_arg(text: str) -> Fraction:
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"not a rational number: {text!r}") from None


def range_arg(text: str) -> range:
    lo, sep, hi = text.partition("..")
    try:
        a, b = int(lo), int(hi)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected a..b, got {text!r}") from None
    if not sep or a < 1 or b < a:
        raise argparse.ArgumentTypeError(f"expected a..b with 1 <= a <= b, got {text!r}")
    return range(a, b + 1)


# -- subcommands ----------------------------------------------------------------


def cmd_validate(args, ws: Workspace) -> Report:
    r = Report("validate", {"workspace": args.workspace})
    exps = {}
    for e in ws.experiments.values():
        kind = "mixture" if isinstance(e, MixtureExperiment) else "experiment"
        exps[e.id] = {"kind": kind, "params": len(e.params), "outcomes": len(e.outcomes)}
        r.text.append(f"{kind} {e.id}: {len(e.params)} parameters, {len(e.outcomes)} outcomes")
    stats = {}
    for t in ws.statistics.values():
        e = ws.experiment(t.experiment_id)
        anc, suff = bool(is_ancillary(e, t)), bool(is_sufficient(e, t))
        stats[t.id] = {"on": t.experiment_id, "ancillary": anc, "sufficient": suff}
        r.text.append(f"statistic {t.id} on {t.experiment_id}: ancillary={str(anc).lower()} "
                      f"sufficient={str(suff).lower()}")
    for name, refs in ws.universes.items():
        r.text.append(f"universe {name}: {len(refs)} bases")
    r.values = {"experiments": exps, "statistics": stats,
                "universes": {k: len(v) for k, v in ws.universes.items()}}
    r.text.append("workspace valid")
    return r


def cmd_suff_min(args, ws) -> Report:
    e = ws.experiment(args.experiment)
    t = minimal_sufficient(e)
    v = is_sufficient(e, t)
    r = Report("suff-min", {"experiment": e.id})
    r.values = {"blocks": [list(b) for b in t.blocks], "sufficient": v.holds}
    r.witnesses = {"conditionals": {str(bi + 1): c for bi, c in v.witness["conditionals"].items()}}
    r.text.append(f"minimal sufficient partition of {e.id}: {len(t.blocks)} block(s)")
    for bi, b in enumerate(t.blocks):
        conds = v.witness["conditionals"].get(bi, {})
        r.text.append(f"  {bi + 1}: {fmt_block(b)}  conditionals " +
                      ", ".join(f"{x}={q}" for x, q in conds.items()))
    r.text.append(f"certified sufficient: {str(v.holds).lower()}")
    return r


def cmd_ancillaries(args, ws) -> Report:
    e = ws.experiment(args.experiment)
    cap = args.cap if args.cap is not None else ancillary_cap()
    parts = enumerate_ancillaries(e, cap)
    r = Report("ancillaries", {"experiment": e.id, "cap": cap})
    listing = []
    r.text.append(f"{len(parts)} non-trivial ancillary partition(s) of {e.id}")
    for t in parts:
        dist = is_ancillary(e, t).witness["distribution"]
        listing.append({"blocks": [list(b) for b in t.blocks],
                        "probabilities": [dist[i] for i in range(len(t.blocks))]})
        named = [s.id for s in ws.statistics_on(e.id) if {frozenset(b) for b in s.blocks} ==
                 {frozenset(b) for b in t.blocks}]
        tag = f"  [= {', '.join(named)}]" if named else ""
        r.text.append("  " + " ".join(f"{fmt_block(b)}:{dist[i]}" for i, b in enumerate(t.blocks)) + tag)
    r.values = {"count": len(parts), "partitions": listing}
    return r


def cmd_condition(args, ws) -> Report:
    e = ws.experiment(args.experiment)
    t = ws.statistic(args.statistic)
    c = condition(e, t, args.block)
    r = Report("condition", {"experiment": e.id, "statistic": t.id, "block": args.block})
    r.values = {"experiment": c}
    r.text.append(f"{e.id} given {t.id} in block {args.block}:")
    r.text.extend("  " + line for line in fmt_pmf(c))
    return r


def _describe_witness(kind: RelationKind, w: dict) -> str:
    if kind is RelationKind.A:
        return f"conditioning witness: statistic {w['statistic']}, block {fmt_block(w['block'])}"
    if kind is RelationKind.S:
        return f"sufficient block {fmt_block(w['block'])}"
    if kind is RelationKind.C:
        return f"mixture {w['mixture']}, component {w['component']}"
    return f"c = {render(w['c'])}"


def cmd_relate(args, ws) -> Report:
    kind = RelationKind.parse(args.kind)
    a, b = ws.base(args.a), ws.base(args.b)
    v = related(kind, a, b, list(ws.statistics.values()))
    r = Report("relate", {"kind": kind.value, "a": a.label, "b": b.label})
    r.values = {"related": v.holds}
    r.witnesses = {k: val for k, val in v.witness.items()}
    line = f"related: {str(v.holds).lower()}"
    if v.holds:
        line += f" ({_describe_witness(kind, v.witness)})"
    r.text.append(line)
    return r


def cmd_closure(args, ws) -> Report:
    u = ws.universe(args.universe)
    kinds = RelationKind.parse_set(args.kinds)
    cl = closure(u, kinds, list(ws.statistics.values()))
    r = Report("closure", {"universe": args.universe, "kinds": sorted(k.value for k in kinds)})
    classes = [u.labels(c) for c in cl.classes]
    edges = [{"a": u.bases[e.i].label, "b": u.bases[e.j].label, "kind": e.kind,
              "witness": {k: v for k, v in e.witness.items() if k != "partition"}} for e in cl.edges]
    added = cl.added_pairs
    r.values = {"classes": classes, "direct_edges": len(cl.edges), "added_pairs": len(added)}
    r.witnesses = {"edges": edges}
    r.text.append(f"{len(classes)} class(es), {len(cl.edges)} direct edge(s)")
    for c in classes:
        r.text.append("  {" + ", ".join(c) + "}")
    for e in edges:
        r.text.append(f"  edge {e['a']} ~{e['kind'].value} {e['b']}")
    if added:
        note = f"relation not transitive; closure added {len(added)} pair{'s' if len(added) != 1 else ''}"
        r.warnings.append(note)
        r.text.append(f"note: {note}")
    return r


def _chain_report(chain) -> tuple[dict, list[str]]:
    steps = [{"from": s.source.label, "to": s.target.label, "kind": s.kind,
              "evidence": {k: v for k, v in s.evidence.items() if k != "partition"}} for s in chain.steps]
    lines = [f"  {s['from']} ~{s['kind'].value} {s['to']}" for s in steps]
    return {"steps": steps, "c": chain.constant, "block_conditional": chain.block_conditional,
            "verified": chain.verify()}, lines


def cmd_chain(args, ws) -> Report:
    a, b = ws.base(args.a), ws.base(args.b)
    chain = birnbaum_chain(a, b)
    r = Report("chain", {"a": a.label, "b": b.label})
    data, lines = _chain_report(chain)
    r.values = {"length": len(chain), "c": chain.constant, "block_conditional": chain.block_conditional,
                "verified": data["verified"]}
    r.witnesses = {"steps": data["steps"], "mixture": chain.mixture.id if chain.mixture else None}
    r.text.append(f"chain of length {len(chain)}, c = {render(chain.constant)}")
    r.text.extend(lines)
    if chain.block_conditional is not None:
        r.text.append(f"block conditional: {render(chain.block_conditional)}")
    r.text.append(f"every step re-verified: {str(data['verified']).lower()}")
    r.ok = data["verified"]
    return r


def cmd_verify(args, ws) -> Report:
    u = ws.universe(args.universe)
    rep = verify_birnbaum(u, args.depth)
    r = Report("verify-birnbaum", {"universe": args.universe, "depth": args.depth})
    pairs = []
    r.text.append(f"{len(rep.pairs)} chain(s) built; augmented universe has {len(rep.augmented)} bases")
    for i, j, c, chain in rep.pairs:
        data, lines = _chain_report(chain)
        pairs.append({"a": u.bases[i].label, "b": u.bases[j].label, "c": c, "chain": data["steps"]})
        r.text.append(f"{u.bases[i].label} ~L {u.bases[j].label} (c = {render(c)}):")
        r.text.extend(lines)
    r.values = {"sc_classes": [u.labels(c) for c in rep.sc_classes],
                "l_classes": [u.labels(c) for c in rep.l_classes],
                "complete": rep.complete, "sound": rep.sound, "ok": rep.ok}
    r.witnesses = {"pairs": pairs}
    r.warnings.extend(rep.failures)
    r.text.append("S+C classes (restricted): " + "; ".join("{" + ", ".join(u.labels(c)) + "}" for c in rep.sc_classes))
    r.text.append("L classes:                 " + "; ".join("{" + ", ".join(u.labels(c)) + "}" for c in rep.l_classes))
    r.text.append(f"S+C closure equals L: {str(rep.complete).lower()}; sound: {str(rep.sound).lower()}")
    r.ok = rep.ok
    return r


def cmd_pvalue(args, ws) -> Report:
    r = Report("pvalue", {"family": args.family, "theta0": args.theta0, "successes": args.successes})
    if args.family == "binom":
        _need(args, "n")
        value = methods.binom_pvalue(methods.BinomialSpec(args.n, args.theta0), args.successes)
        r.inputs["n"] = args.n
    elif args.family == "negbinom":
        _need(args, "k")
        value = methods.negbinom_pvalue(methods.NegBinomialSpec(args.k, args.theta0), args.successes)
        r.inputs["k"] = args.k
    else:
        _need(args, "n", "k")
        failures = args.failures if args.failures is not None else args.k
        value = methods.mixture_pvalue(methods.BinomialSpec(args.n, args.theta0),
                                       methods.NegBinomialSpec(args.k, args.theta0),
                                       (args.successes, failures))
        r.inputs.update(n=args.n, k=args.k, failures=failures)
    r.values = {"p_value": value, "decimal": float(value)}
    r.text.append(render(value))
    return r


def _need(args, *names):
    missing = [f"--{n}" for n in names if getattr(args, n) is None]
    if missing:
        raise UsageError(f"{args.family} needs {', '.join(missing)}")


class UsageError(Exception):
    pass


def cmd_audit(args, ws) -> Report:
    failures = args.failures if args.failures is not None else args.k
    rep = methods.audit_sp2_wcp(methods.BinomialSpec(args.n, args.theta0),
                                methods.NegBinomialSpec(args.k, args.theta0), (args.successes, failures))
    r = Report("audit-mayo", rep.inputs)
    r.values = {"M": rep.m_values, "Ev": rep.ev_values, "sp2_check": rep.sp2_check, "wcp_check": rep.wcp_check,
                "lp_check": rep.lp_check, "sp_check": rep.sp_check,
                "premise_constant": rep.premise_constant, "premise_verified": rep.premise_verified}
    r.witnesses = {"sp2": rep.sp2_witness, "narrative": rep.narrative}
    r.warnings.append(rep.header)
    r.text.append(f"# {rep.header}")
    for key in rep.m_values:
        r.text.append(f"M({key}) = {render(rep.m_values[key])}   Ev({key}) = {render(rep.ev_values[key])}")
    r.text.append(f"sufficient block: {fmt_block(rep.sp2_witness['block'])} in {rep.sp2_witness['mixture']}")
    r.text.append(f"likelihood constant: {rep.premise_constant} (verified: {str(rep.premise_verified).lower()})")
    for name, flag in (("SP2", rep.sp2_check), ("WCP", rep.wcp_check), ("LP", rep.lp_check), ("SP (on Ev)", rep.sp_check)):
        r.text.append(f"{name}: {str(flag).lower()}")
    for k, v in rep.narrative.items():
        r.text.append(f"  {k}: {v}")
    return r


def cmd_coverage(args, ws) -> Report:
    value = freq.example3_coverage(args.theta, args.conditioning)
    r = Report("coverage-ex3", {"theta": args.theta, "conditioning": args.conditioning})
    r.values = {"coverage": value}
    r.text.append(render(value))
    return r


def cmd_twopoint(args, ws) -> Report:
    an = freq.example4_analysis(freq.TwoPointModel(args.epsilon, args.theta))
    r = Report("twopoint", {"epsilon": args.epsilon, "theta": args.theta})
    r.values = {**an.values(), "d_ancillary": an.d_ancillary, "sets_disjoint": an.sets_disjoint,
                "event_probabilities": an.event_probabilities}
    r.witnesses = {"enumeration": an.oracle}
    for k, v in an.values().items():
        r.text.append(f"{k}: {render(v) if v is not None else 'undefined (event has probability 0)'}")
    r.text.append(f"D ancillary: {str(an.d_ancillary).lower()}")
    r.text.append(f"support sets disjoint: {str(an.sets_disjoint).lower()}")
    r.text.append("all values match the four-outcome enumeration")
    return r


def cmd_np(args, ws) -> Report:
    i1 = freq.InstrumentSpec(args.sigma1, args.mu0, args.mu1, args.n)
    i2 = freq.InstrumentSpec(args.sigma2, args.mu0, args.mu1, args.n)
    eq = freq.equal_level_test(i1, i2, args.alpha)
    opt = freq.optimal_mixture_test(i1, i2, args.alpha)
    grid = freq.allocation_grid(i1, i2, args.alpha)
    r = Report("np-mixture", {"sigma1": args.sigma1, "sigma2": args.sigma2, "mu0": args.mu0,
                              "mu1": args.mu1, "n": args.n, "alpha": args.alpha})
    r.values = {"equal_level": eq.as_dict(), "optimal": opt.as_dict(),
                "grid_check": {"alpha1": grid[0], "alpha2": grid[1], "avg_power": grid[2]}}
    r.text.append(f"equal level:   alpha = ({eq.alpha1:.6g}, {eq.alpha2:.6g})  power = ({eq.power1:.6g}, "
                  f"{eq.power2:.6g})  average power {eq.avg_power:.6g}")
    r.text.append(f"common cutoff: alpha = ({opt.alpha1:.6g}, {opt.alpha2:.6g})  power = ({opt.power1:.6g}, "
                  f"{opt.power2:.6g})  average power {opt.avg_power:.6g}  log LR cutoff {opt.lr_cutoff:.6g}")
    r.text.append(f"grid check:    best split ({grid[0]:.4g}, {grid[1]:.4g}) average power {grid[2]:.6g}")
    if args.sweep_n is not None:
        rows = freq.reproduction_sweep(args.sigma1, args.sigma2, args.mu0, args.mu1, args.alpha, args.sweep_n)
        r.values["sweep"] = [{"n": row.n, "equal_avg_power": row.equal.avg_power,
                              "optimal_avg_power": row.optimal.avg_power,
                              "alpha1": row.optimal.alpha1, "alpha2": row.optimal.alpha2} for row in rows]
        r.values["reference"] = {**freq.REFERENCE_FIGURES, "status": "unreconciled"}
        r.values["closest"] = freq.closest_to_reference(rows)
        r.text.append("   n  equal   optimal  alpha1   alpha2")
        for row in rows:
            r.text.append(f"  {row.n:2d}  {row.equal.avg_power:.4f}  {row.optimal.avg_power:.4f}   "
                          f"{row.optimal.alpha1:.4f}   {row.optimal.alpha2:.4f}")
        ref = freq.REFERENCE_FIGURES
        r.text.append(f"reference (unreconciled): conditional power {ref['conditional_power']}, optimal power "
                      f"{ref['optimal_power']}, alphas ({ref['alpha_old']}, {ref['alpha_new']})")
        r.warnings.append("reference figures are not reproduced; sample size and statistic are unstated")
    return r


def cmd_paper_report(args, ws) -> Report:
    entries = paper_report()
    r = Report("paper-report")
    r.values = {"entries": entries}
    r.text.append(format_report(entries).rstrip("\n"))
    statuses = [e["status"] for e in entries]
    r.text.append(f"summary: {statuses.count('matched')} matched, {statuses.count('derived')} derived, "
                  f"{statuses.count('unreconciled')} unreconciled")
    return r


COMMANDS = {
    "validate": (cmd_validate, True),
    "suff-min": (cmd_suff_min, True),
    "ancillaries": (cmd_ancillaries, True),
    "condition": (cmd_condition, True),
    "relate": (cmd_relate, True),
    "closure": (cmd_closure, True),
    "chain": (cmd_chain, True),
    "verify-birnbaum": (cmd_verify, True),
    "pvalue": (cmd_pvalue, False),
    "audit-mayo": (cmd_audit, False),
    "coverage-ex3": (cmd_coverage, False),
    "twopoint": (cmd_twopoint, False),
    "np-mixture": (cmd_np, False),
    "paper-report": (cmd_paper_report, False),
}


def build_parser() -> argparse.ArgumentParser:
    def flags(p, default):
        p.add_argument("--json", action="store_true", default=default(False), help="machine-readable output")
        p.add_argument("-w", "--workspace", default=default(None),
                       help="workspace .bw file (or a bundled fixture name)")

    parser = argparse.ArgumentParser(prog="bw", description="Exact checks of sufficiency, conditionality "
                                     "and likelihood relations on finite experiments.")
    flags(parser, lambda v: v)
    # subcommands accept the same flags; SUPPRESS keeps them from clobbering top-level values
    common = argparse.ArgumentParser(add_help=False)
    flags(common, lambda v: argparse.SUPPRESS)
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, help):
        return sub.add_parser(name, help=help, parents=[common])

    add("validate", "parse and validate the workspace")
    p = add("suff-min", "minimal sufficient partition")
    p.add_argument("experiment")
    p = add("ancillaries", "enumerate ancillary partitions")
    p.add_argument("experiment")
    p.add_argument("--cap", type=int, help=f"max outcomes (default $BW_ANCILLARY_CAP or {DEFAULT_ANCILLARY_CAP})")
    p = add("condition", "condition on a block of an ancillary statistic")
    p.add_argument("experiment")
    p.add_argument("statistic")
    p.add_argument("block", help="1-based block number")
    p = add("relate", "check one relation between two bases")
    p.add_argument("kind", choices=["S", "C", "A", "L", "s", "c", "a", "l"])
    p.add_argument("a", help="<experiment>:<outcome>")
    p.add_argument("b", help="<experiment>:<outcome>")
    p = add("closure", "equivalence closure over a universe")
    p.add_argument("universe")
    p.add_argument("--kinds", default="S,C", help="comma-separated subset of S,C,A,L")
    p = add("chain", "C-S-C chain between two bases with proportional likelihoods")
    p.add_argument("a")
    p.add_argument("b")
    p = add("verify-birnbaum", "check that S and C generate L on a universe")
    p.add_argument("universe")
    p.add_argument("--depth", type=int, default=1)
    p = add("pvalue", "exact one-sided p-values")
    p.add_argument("family", choices=["binom", "negbinom", "mixture"])
    p.add_argument("--n", type=int)
    p.add_argument("--k", type=int)
    p.add_argument("--theta0", type=fraction_arg, required=True)
    p.add_argument("--successes", type=int, required=True)
    p.add_argument("--failures", type=int)
    p = add("audit-mayo", "method output versus inference audit")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--theta0", type=fraction_arg, required=True)
    p.add_argument("--successes", type=int, required=True)
    p.add_argument("--failures", type=int)
    p = add("coverage-ex3", "coverage of the point-mass confidence set")
    p.add_argument("theta", type=fraction_arg)
    p.add_argument("conditioning", choices=list(freq.CONDITIONINGS))
    p = add("twopoint", "two-point translation model")
    p.add_argument("epsilon", type=fraction_arg)
    p.add_argument("theta", type=fraction_arg)
    p = add("np-mixture", "level allocation across two instruments")
    for name in ("sigma1", "sigma2", "mu0", "mu1"):
        p.add_argument(name, type=float)
    p.add_argument("n", type=int)
    p.add_argument("alpha", type=float)
    p.add_argument("--sweep-n", type=range_arg, help="also sweep sample sizes a..b")
    add("paper-report", "run every worked example")
    return parser


def emit(report: Report, as_json: bool, out):
    if as_json:
        payload = {"command": report.command, "inputs": to_json(report.inputs), "values": to_json(report.values),
                   "witnesses": to_json(report.witnesses), "warnings": to_json(report.warnings)}
        out.write(json.dumps(payload, indent=2) + "\n")
    else:
        out.write("\n".join(report.text) + "\n")


def main(argv=None, out=None, err=None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    parser = build_parser()
    try:
        with contextlib.redirect_stderr(err), contextlib.redirect_stdout(out):
            args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    func, needs_ws = COMMANDS[args.command]
    try:
        ws = load_workspace(args.workspace) if needs_ws else None
        report = func(args, ws)
    except UsageError as exc:
        err.write(f"bw {args.command}: {exc}\n")
        return 2
    except DomainError as exc:
        if args.json:
            payload = {"command": args.command, "inputs": {}, "values": {},
                       "witnesses": {}, "warnings": [], "error": {"code": exc.code, "message": str(exc)}}
            out.write(json.dumps(to_json(payload), indent=2) + "\n")
        err.write(f"bw {args.command}: {exc}\n")
        return 1
    emit(report, args.json, out)
    return 0 if report.ok else 1


if __name__ == "__main__":
    sys.exit(main())
