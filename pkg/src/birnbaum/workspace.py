"""Line-oriented ``.bw`` workspace files.

::

    # comments run to end of line
    experiment E
      outcomes (1,1) (1,2) (2,1) (2,2)
      pmf 1  1/6 1/6 2/6 2/6          # pmf <parameter> <probabilities...>
      pmf 2  1/12 3/12 5/12 3/12

    mixture M of E1 E2                 # outcomes (1,x) then (2,x)
      weight 1/2                       # optional, default 1/2

    statistic U on E
      block (1,1) (1,2)
      block (2,1) (2,2)

    universe ex1
      base E:(1,1)                     # <experiment-id>:<outcome>

Tokens are separated by whitespace; labels are any token without ``#``.
Experiment ids may not contain ``:``.  Parameters are ordered as their
``pmf`` lines appear.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path

from .errors import DomainError, WorkspaceError
from .model import (
    HALF,
    Experiment,
    InferenceBase,
    MixtureExperiment,
    as_rational,
    make_mixture,
    validate_experiment,
)
from .relations import Universe
from .statistics import StatisticPartition, check_partition

FIXTURES = ("example1.bw", "mayo.bw")


@dataclass
class Workspace:
    experiments: dict[str, Experiment] = field(default_factory=dict)
    statistics: dict[str, StatisticPartition] = field(default_factory=dict)
    universes: dict[str, tuple[tuple[str, str], ...]] = field(default_factory=dict)

    def experiment(self, eid: str) -> Experiment:
        try:
            return self.experiments[eid]
        except KeyError:
            raise DomainError("UNRESOLVED_REFERENCE", f"no experiment named {eid!r}") from None

    def statistic(self, sid: str) -> StatisticPartition:
        try:
            return self.statistics[sid]
        except KeyError:
            raise DomainError("UNRESOLVED_REFERENCE", f"no statistic named {sid!r}") from None

    def base(self, ref: str) -> InferenceBase:
        """Resolve ``<experiment-id>:<outcome>``."""
        eid, sep, outcome = ref.partition(":")
        if not sep or not outcome:
            raise DomainError("BAD_BASE", f"base must look like <experiment>:<outcome>, got {ref!r}")
        e = self.experiment(eid)
        if outcome not in e.outcomes:
            raise DomainError("UNRESOLVED_REFERENCE", f"{outcome!r} is not an outcome of {eid!r}")
        return InferenceBase(e, outcome)

    def universe(self, name: str) -> Universe:
        try:
            refs = self.universes[name]
        except KeyError:
            raise DomainError("UNRESOLVED_REFERENCE", f"no universe named {name!r}") from None
        return Universe(tuple(self.base(f"{e}:{x}") for e, x in refs))

    def statistics_on(self, eid: str) -> list[StatisticPartition]:
        return [t for t in self.statistics.values() if t.experiment_id == eid]


def _strip(line: str) -> list[str]:
    return line.split("#", 1)[0].split()


class _Parser:
    def __init__(self):
        self.ws = Workspace()
        self.block = None  # (kind, header tokens, header line, body [(line, tokens)])

    def _names(self):
        return set(self.ws.experiments) | set(self.ws.statistics) | set(self.ws.universes)

    def feed(self, lineno: int, tokens: list[str]):
        head = tokens[0]
        if head in ("experiment", "mixture", "statistic", "universe"):
            self.flush()
            self.block = (head, tokens, lineno, [])
        elif self.block is None:
            raise WorkspaceError("PARSE_ERROR", f"{head!r} outside of a block", lineno)
        else:
            self.block[3].append((lineno, tokens))

    def flush(self):
        if self.block is None:
            return
        kind, header, lineno, body = self.block
        self.block = None
        getattr(self, "_" + kind)(header, lineno, body)

    def _claim(self, name, lineno):
        if name in self._names():
            raise WorkspaceError("PARSE_ERROR", f"name {name!r} is already defined", lineno)

    def _experiment(self, header, lineno, body):
        if len(header) != 2:
            raise WorkspaceError("PARSE_ERROR", "expected 'experiment <id>'", lineno)
        eid = header[1]
        if ":" in eid:
            raise WorkspaceError("PARSE_ERROR", f"experiment id {eid!r} may not contain ':'", lineno)
        self._claim(eid, lineno)
        outcomes, outcome_line = None, lineno
        params, rows, row_lines = [], [], []
        for ln, toks in body:
            if toks[0] == "outcomes":
                if outcomes is not None:
                    raise WorkspaceError("PARSE_ERROR", "duplicate 'outcomes' line", ln)
                outcomes, outcome_line = toks[1:], ln
            elif toks[0] == "pmf":
                if len(toks) < 3:
                    raise WorkspaceError("PARSE_ERROR", "expected 'pmf <parameter> <probabilities...>'", ln)
                try:
                    row = [as_rational(v) for v in toks[2:]]
                except (ValueError, ZeroDivisionError, TypeError):
                    raise WorkspaceError("PARSE_ERROR", f"bad probability in {' '.join(toks[2:])!r}", ln) from None
                params.append(toks[1])
                rows.append(row)
                row_lines.append(ln)
            else:
                raise WorkspaceError("PARSE_ERROR", f"unexpected {toks[0]!r} in experiment block", ln)
        if outcomes is None:
            raise WorkspaceError("PARSE_ERROR", f"experiment {eid!r} has no 'outcomes' line", lineno)
        try:
            e = validate_experiment({"id": eid, "params": params, "outcomes": outcomes, "rows": rows})
        except DomainError as err:
            row = err.context.get("row")
            where = row_lines[row] if row is not None else (
                outcome_line if err.code in ("DEAD_OUTCOME", "DUPLICATE_LABEL") else lineno)
            raise WorkspaceError("VALIDATION_ERROR", str(err), where, cause=err.code) from None
        self.ws.experiments[eid] = e

    def _mixture(self, header, lineno, body):
        if len(header) != 5 or header[2] != "of":
            raise WorkspaceError("PARSE_ERROR", "expected 'mixture <id> of <exp1> <exp2>'", lineno)
        mid, c1, c2 = header[1], header[3], header[4]
        if ":" in mid:
            raise WorkspaceError("PARSE_ERROR", f"experiment id {mid!r} may not contain ':'", lineno)
        self._claim(mid, lineno)
        weight = HALF
        for ln, toks in body:
            if toks[0] == "weight" and len(toks) == 2:
                try:
                    weight = as_rational(toks[1])
                except (ValueError, ZeroDivisionError):
                    raise WorkspaceError("PARSE_ERROR", f"bad weight {toks[1]!r}", ln) from None
            else:
                raise WorkspaceError("PARSE_ERROR", f"unexpected {toks[0]!r} in mixture block", ln)
        comps = []
        for c in (c1, c2):
            if c not in self.ws.experiments:
                raise WorkspaceError("UNRESOLVED_REFERENCE", f"mixture component {c!r} is not defined", lineno)
            comps.append(self.ws.experiments[c])
        try:
            self.ws.experiments[mid] = make_mixture(comps[0], comps[1], weight, id=mid)
        except DomainError as err:
            raise WorkspaceError("VALIDATION_ERROR", str(err), lineno, cause=err.code) from None

    def _statistic(self, header, lineno, body):
        if len(header) != 4 or header[2] != "on":
            raise WorkspaceError("PARSE_ERROR", "expected 'statistic <id> on <experiment>'", lineno)
        sid, eid = header[1], header[3]
        self._claim(sid, lineno)
        if eid not in self.ws.experiments:
            raise WorkspaceError("UNRESOLVED_REFERENCE", f"statistic {sid!r} refers to unknown experiment {eid!r}", lineno)
        blocks = []
        for ln, toks in body:
            if toks[0] != "block" or len(toks) < 2:
                raise WorkspaceError("PARSE_ERROR", "expected 'block <outcome...>'", ln)
            blocks.append(tuple(toks[1:]))
        t = StatisticPartition(sid, tuple(blocks), eid)
        try:
            check_partition(self.ws.experiments[eid], t)
        except DomainError as err:
            raise WorkspaceError("VALIDATION_ERROR", str(err), lineno, cause=err.code) from None
        self.ws.statistics[sid] = t

    def _universe(self, header, lineno, body):
        if len(header) != 2:
            raise WorkspaceError("PARSE_ERROR", "expected 'universe <id>'", lineno)
        name = header[1]
        self._claim(name, lineno)
        refs = []
        for ln, toks in body:
            if toks[0] != "base" or len(toks) != 2:
                raise WorkspaceError("PARSE_ERROR", "expected 'base <experiment>:<outcome>'", ln)
            eid, sep, outcome = toks[1].partition(":")
            if not sep or not outcome:
                raise WorkspaceError("PARSE_ERROR", f"bad base {toks[1]!r}", ln)
            if eid not in self.ws.experiments or outcome not in self.ws.experiments[eid].outcomes:
                raise WorkspaceError("UNRESOLVED_REFERENCE", f"base {toks[1]!r} does not resolve", ln)
            try:
                InferenceBase(self.ws.experiments[eid], outcome)
            except DomainError as err:
                raise WorkspaceError("VALIDATION_ERROR", str(err), ln, cause=err.code) from None
            refs.append((eid, outcome))
        self.ws.universes[name] = tuple(refs)
        try:
            self.ws.universe(name)
        except DomainError as err:
            raise WorkspaceError("VALIDATION_ERROR", str(err), lineno, cause=err.code) from None


def parse_workspace_text(text: str) -> Workspace:
    parser = _Parser()
    for lineno, line in enumerate(text.splitlines(), start=1):
        tokens = _strip(line)
        if tokens:
            parser.feed(lineno, tokens)
    parser.flush()
    return parser.ws


def parse_workspace(path) -> Workspace:
    """Parse and validate a workspace file.

    Raises
    ------
    WorkspaceError
        ``PARSE_ERROR``, ``VALIDATION_ERROR`` or ``UNRESOLVED_REFERENCE``,
        with the offending line number.
    """
    try:
        text = Path(path).read_text(encoding="utf-8")
    except UnicodeDecodeError as err:
        raise WorkspaceError("PARSE_ERROR", f"{path} is not UTF-8: {err}") from None
    return parse_workspace_text(text)


def serialize_workspace(ws: Workspace) -> str:
    out: list[str] = []
    written: set[str] = set()

    def emit_experiment(e: Experiment):
        if e.id in written:
            return
        if isinstance(e, MixtureExperiment):
            for comp in e.components:
                emit_experiment(comp)
            out.append(f"mixture {e.id} of {e.components[0].id} {e.components[1].id}")
            if e.weights[0] != HALF:
                out.append(f"  weight {e.weights[0]}")
        else:
            out.append(f"experiment {e.id}")
            out.append("  outcomes " + " ".join(e.outcomes))
            for p, row in zip(e.params, e.pmf):
                out.append(f"  pmf {p} " + " ".join(str(v) for v in row))
        out.append("")
        written.add(e.id)

    for e in ws.experiments.values():
        emit_experiment(e)
    for t in ws.statistics.values():
        out.append(f"statistic {t.id} on {t.experiment_id}")
        out.extend("  block " + " ".join(b) for b in t.blocks)
        out.append("")
    for name, refs in ws.universes.items():
        out.append(f"universe {name}")
        out.extend(f"  base {e}:{x}" for e, x in refs)
        out.append("")
    return "\n".join(out)


def fixture_path(name: str):
    return resources.files("birnbaum") / "data" / name


def load_fixture(name: str) -> Workspace:
    if not name.endswith(".bw"):
        name += ".bw"
    if name not in FIXTURES:
        raise DomainError("UNRESOLVED_REFERENCE", f"no bundled fixture {name!r}; have {list(FIXTURES)}")
    return parse_workspace_text(fixture_path(name).read_text(encoding="utf-8"))
