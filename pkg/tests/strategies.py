"""Random finite experiments and universes for property tests.

Rows are compositions of a small denominator ``d <= 12``; outcome columns
that come out zero under every parameter are dropped, so every generated
experiment is valid without rejection sampling.
"""

import random
from fractions import Fraction

from hypothesis import strategies as st

from birnbaum import Experiment, InferenceBase, Universe, validate_experiment

MAX_DEN = 12


def _composition(cuts, d):
    cuts = sorted(cuts)
    edges = [0] + cuts + [d]
    return [Fraction(b - a, d) for a, b in zip(edges, edges[1:])]


def _assemble(eid, params, rows, labels=None):
    keep = [k for k in range(len(rows[0])) if any(r[k] for r in rows)]
    labels = labels or [f"x{k}" for k in range(len(rows[0]))]
    return validate_experiment({
        "id": eid,
        "params": params,
        "outcomes": [labels[k] for k in keep],
        "rows": [[r[k] for k in keep] for r in rows],
    })


@st.composite
def experiments(draw, eid="E", max_outcomes=5, max_params=3, n_params=None):
    m = draw(st.integers(1, max_outcomes))
    p = n_params or draw(st.integers(1, max_params))
    rows = []
    for _ in range(p):
        d = draw(st.integers(1, MAX_DEN))
        cuts = draw(st.lists(st.integers(0, d), min_size=m - 1, max_size=m - 1))
        rows.append(_composition(cuts, d))
    return _assemble(eid, [f"t{i}" for i in range(p)], rows)


@st.composite
def experiment_pairs(draw, max_outcomes=4):
    """Two experiments on a shared parameter list."""
    p = draw(st.integers(1, 3))
    e = draw(experiments("E", max_outcomes, n_params=p))
    f = draw(experiments("F", max_outcomes, n_params=p))
    return e, f


@st.composite
def bases(draw, e):
    return InferenceBase(e, draw(st.sampled_from(e.outcomes)))


# -- seeded generators for the acceptance sweep ------------------------------


def random_experiment(rng: random.Random, eid, params, max_outcomes=5):
    m = rng.randint(1, max_outcomes)
    rows = []
    for _ in params:
        d = rng.randint(1, MAX_DEN)
        rows.append(_composition([rng.randint(0, d) for _ in range(m - 1)], d))
    return _assemble(eid, params, rows)


def permuted_clone(rng: random.Random, e: Experiment, eid):
    """Same distributions with outcomes relabelled and reordered."""
    order = list(range(len(e.outcomes)))
    rng.shuffle(order)
    rows = [[row[k] for k in order] for row in e.pmf]
    return _assemble(eid, e.params, rows, [f"y{k}" for k in order])


def split_clone(rng: random.Random, e: Experiment, eid):
    """Split one outcome into two halves; stays within denominator 12 when possible."""
    dens = [max(v.denominator for v in row) for row in e.pmf]
    if len(e.outcomes) >= 5 or max(dens) > MAX_DEN // 2:
        return permuted_clone(rng, e, eid)
    k = rng.randrange(len(e.outcomes))
    rows = [list(row[:k]) + [row[k] / 2, row[k] / 2] + list(row[k + 1:]) for row in e.pmf]
    labels = list(e.outcomes[:k]) + [e.outcomes[k] + "a", e.outcomes[k] + "b"] + list(e.outcomes[k + 1:])
    return _assemble(eid, e.params, rows, labels)


def random_universe(rng: random.Random, max_bases=8):
    """A universe over 2-3 experiments on one parameter set, with planted L-pairs."""
    p = rng.randint(1, 3)
    params = [f"t{i}" for i in range(p)]
    exps = [random_experiment(rng, "E0", params)]
    for j in range(1, rng.randint(2, 3)):
        roll = rng.random()
        if roll < 0.3:
            exps.append(permuted_clone(rng, exps[0], f"E{j}"))
        elif roll < 0.6:
            exps.append(split_clone(rng, rng.choice(exps), f"E{j}"))
        else:
            exps.append(random_experiment(rng, f"E{j}", params))
    pool = [InferenceBase(e, x) for e in exps for x in e.outcomes]
    rng.shuffle(pool)
    return Universe(tuple(pool[:max_bases]))
