"""Exact enumeration of generalized Kottwitz sets and their Hodge-Newton invariants."""

from .catalog import build, standard_catalog
from .dsl import Scenario, parse, serialize
from .rootdatum import BasedRootDatum, GaloisAction, relative_data, validate
from .sets import (
    GroupDatum,
    admissibility_bound_check,
    dualize_to_Jb,
    enumerate_B_dual,
    enumerate_B_mu,
    enumerate_kottwitz,
    is_fully_hn_decomposable,
    is_hn_decomposable,
    minute,
    newton_of_basic,
    pi1_gamma,
    sharp,
    stratification_report,
)

__all__ = [
    "BasedRootDatum",
    "GaloisAction",
    "GroupDatum",
    "Scenario",
    "admissibility_bound_check",
    "build",
    "dualize_to_Jb",
    "enumerate_B_dual",
    "enumerate_B_mu",
    "enumerate_kottwitz",
    "is_fully_hn_decomposable",
    "is_hn_decomposable",
    "minute",
    "newton_of_basic",
    "parse",
    "pi1_gamma",
    "relative_data",
    "serialize",
    "sharp",
    "standard_catalog",
    "stratification_report",
    "validate",
]
