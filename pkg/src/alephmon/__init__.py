"""Decision procedures for countable-sum monoid presentations and graph monoids."""
from __future__ import annotations

__version__ = "0.1.0"

from .congruence import CongruenceOracle, Presentation, build_oracle, canonical, equal
from .forms import OMEGA, FamilySpec, Form, ext_add, ext_mul, family_sum, form_sum

__all__ = [
    "OMEGA",
    "CongruenceOracle",
    "FamilySpec",
    "Form",
    "Presentation",
    "build_oracle",
    "canonical",
    "equal",
    "ext_add",
    "ext_mul",
    "family_sum",
    "form_sum",
]
