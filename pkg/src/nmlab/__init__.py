"""Finite checkers for preferential semantics, choice functions, size
systems, revision, higher-level arrow diagrams, inheritance nets, gate
circuits and plausibility sequents."""

__version__ = "0.1.0"

from .choice import ChoiceFunction, parse_choice
from .conditions import ConditionReport, check_cum_alpha, check_mu_condition
from .errors import ClosureError, ConditionError, ContractError, InputError, NMError, ResourceError
from .representation import (represent_general, represent_ranked, represent_smooth,
                             represent_smooth_transitive, represent_transitive)
from .structures import PrefStructure, parse_structure

__all__ = [
    "ChoiceFunction", "ClosureError", "ConditionError", "ConditionReport", "ContractError",
    "InputError", "NMError", "PrefStructure", "ResourceError", "check_cum_alpha",
    "check_mu_condition", "parse_choice", "parse_structure", "represent_general",
    "represent_ranked", "represent_smooth", "represent_smooth_transitive",
    "represent_transitive", "__version__",
]
