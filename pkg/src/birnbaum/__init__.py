"""Exact finite-experiment engine for sufficiency, conditionality and likelihood relations."""

from .errors import DomainError, WorkspaceError
from .model import (
    Experiment,
    InferenceBase,
    LikelihoodVector,
    MixtureExperiment,
    likelihood_vector,
    make_mixture,
    proportionality_constant,
    validate_experiment,
)
from .relations import (
    ClosureResult,
    RelationKind,
    Universe,
    WitnessChain,
    birnbaum_chain,
    closure,
    related,
    verify_birnbaum,
)
from .statistics import (
    StatisticPartition,
    condition,
    enumerate_ancillaries,
    is_ancillary,
    is_sufficient,
    minimal_sufficient,
)

__all__ = [
    "ClosureResult",
    "DomainError",
    "Experiment",
    "InferenceBase",
    "LikelihoodVector",
    "MixtureExperiment",
    "RelationKind",
    "StatisticPartition",
    "Universe",
    "WitnessChain",
    "WorkspaceError",
    "birnbaum_chain",
    "closure",
    "condition",
    "enumerate_ancillaries",
    "is_ancillary",
    "is_sufficient",
    "likelihood_vector",
    "make_mixture",
    "minimal_sufficient",
    "proportionality_constant",
    "related",
    "validate_experiment",
    "verify_birnbaum",
]
