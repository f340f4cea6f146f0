"""Finite nonabelian H^1 and the canonical maps between induced and restricted cohomology."""
from depthkit.cohomology.checks import (
    CheckReport,
    hom_count_check,
    inflation_injectivity_check,
    refined_shapiro_check,
    shapiro_check,
    submodule_lemma_check,
)
from depthkit.cohomology.groups import (
    FiniteGGroup,
    FiniteGroup,
    QuotientGroup,
    Subgroup,
    action_from_generators,
    action_through_quotient,
    count_homomorphisms,
    cyclic,
    dihedral4,
    klein_four,
    symmetric3,
    trivial_action,
)
from depthkit.cohomology.h1 import H1PointedSet, enumerate_h1, is_cocycle
from depthkit.cohomology.induction import InducedModule, descend, fixed_points, induce

__all__ = [
    "CheckReport",
    "FiniteGGroup",
    "FiniteGroup",
    "H1PointedSet",
    "InducedModule",
    "QuotientGroup",
    "Subgroup",
    "action_from_generators",
    "action_through_quotient",
    "count_homomorphisms",
    "cyclic",
    "descend",
    "dihedral4",
    "enumerate_h1",
    "fixed_points",
    "hom_count_check",
    "induce",
    "inflation_injectivity_check",
    "is_cocycle",
    "klein_four",
    "refined_shapiro_check",
    "shapiro_check",
    "submodule_lemma_check",
    "symmetric3",
    "trivial_action",
]
