"""Brute-force checks of the canonical maps between H^1 pointed sets.

Each check builds the map explicitly on cocycles and verifies it class by
class.  A mathematical failure is reported through a falsy ``CheckReport``
with a counterexample; structural problems (not a subgroup, not normal,
budget exceeded) raise.
"""
import logging
from typing import Any, Callable, Dict, Optional, Sequence, Union

import numpy as np
from pydantic import BaseModel, ConfigDict, Field

from depthkit.cohomology.groups import FiniteGGroup, FiniteGroup, Subgroup, count_homomorphisms
from depthkit.cohomology.h1 import DEFAULT_ENUMERATION_BUDGET, Cocycle, H1PointedSet, enumerate_h1
from depthkit.cohomology.induction import (
    DEFAULT_MAX_INDUCED_ORDER,
    ImageModule,
    _as_subgroup,
    descend,
    induce,
)
from depthkit.errors import GroupStructureError


class CheckReport(BaseModel):
    """Outcome of one check; truthy iff it passed"""
    model_config = ConfigDict(frozen=True)

    name: str
    passed: bool
    details: Dict[str, Any] = Field(default_factory=dict)
    counterexample: Optional[Dict[str, Any]] = None

    def __bool__(self) -> bool:
        return self.passed


def _fail(name: str, details: Dict[str, Any], reason: str, **witness: Any) -> CheckReport:
    logging.warning(f"{name} failed: {reason} {witness}")
    return CheckReport(name=name, passed=False, details=details, counterexample={"reason": reason, **witness})


def compare_pointed_sets(
    name: str,
    source: H1PointedSet,
    target: H1PointedSet,
    transport: Callable[[Cocycle], Cocycle],
    bijective: bool = True,
) -> CheckReport:
    """Verify that ``transport`` on cocycles induces a well-defined pointed map
    that is injective, and surjective when ``bijective``."""
    details = {"source_classes": len(source), "target_classes": len(target)}
    image_of: Dict[int, int] = {}
    for i, members in enumerate(source.members):
        for alpha in members:
            beta = transport(alpha)
            j = target.classify(beta)
            if j is None:
                return _fail(name, details, "image is not a cocycle", cocycle=list(alpha), image=list(beta))
            if i in image_of and image_of[i] != j:
                return _fail(
                    name,
                    details,
                    "cohomologous cocycles map to different classes",
                    first=list(source.representatives[i]),
                    second=list(alpha),
                )
            image_of[i] = j

    if image_of.get(source.distinguished) != target.distinguished:
        return _fail(name, details, "distinguished point is not preserved")

    hit: Dict[int, int] = {}
    for i, j in sorted(image_of.items()):
        if j in hit:
            return _fail(
                name,
                details,
                "two classes have the same image",
                first=list(source.representatives[hit[j]]),
                second=list(source.representatives[i]),
            )
        hit[j] = i

    if bijective and len(hit) != len(target):
        missing = next(j for j in range(len(target)) if j not in hit)
        return _fail(name, details, "class not in the image", target=list(target.representatives[missing]))
    return CheckReport(name=name, passed=True, details=details)


def shapiro_check(
    g: FiniteGroup,
    h: Union[Subgroup, Sequence[int]],
    module: FiniteGGroup,
    budget: int = DEFAULT_ENUMERATION_BUDGET,
    max_order: int = DEFAULT_MAX_INDUCED_ORDER,
    jobs: int = 1,
) -> CheckReport:
    """H^1(g, Ind_h^g A) -> H^1(h, A), [alpha] -> [s -> alpha(s)(1)], is a bijection"""
    h = _as_subgroup(g, h)
    induced = induce(g, h, module, max_order=max_order)
    lhs = enumerate_h1(induced, budget=budget, jobs=jobs)
    rhs = enumerate_h1(module, budget=budget, jobs=jobs)
    at_one = induced.coords[:, 0].tolist()
    embedding = h.embedding

    def transport(alpha: Cocycle) -> Cocycle:
        return tuple(at_one[alpha[x]] for x in embedding)

    report = compare_pointed_sets(f"shapiro {module.name} from {h.group.name} to {g.name}", lhs, rhs, transport)
    return report.model_copy(update={"details": {**report.details, "induced_order": induced.coefficients.order}})


def inflation_injectivity_check(
    module: FiniteGGroup,
    normal: Sequence[int],
    budget: int = DEFAULT_ENUMERATION_BUDGET,
    jobs: int = 1,
) -> CheckReport:
    """H^1(g/u, A^u) -> H^1(g, A) is injective"""
    descended = descend(module, normal)
    lhs = enumerate_h1(descended, budget=budget, jobs=jobs)
    rhs = enumerate_h1(module, budget=budget, jobs=jobs)
    projection = descended.quotient.projection
    embedding = descended.fixed.embedding

    def transport(alpha: Cocycle) -> Cocycle:
        return tuple(embedding[alpha[q]] for q in projection)

    return compare_pointed_sets(
        f"inflation {module.name} through quotient of order {descended.acting.order}",
        lhs,
        rhs,
        transport,
        bijective=False,
    )


def submodule_lemma_check(
    j: FiniteGroup,
    h: Union[Subgroup, Sequence[int]],
    normal: Sequence[int],
    module: FiniteGGroup,
    max_order: int = DEFAULT_MAX_INDUCED_ORDER,
) -> CheckReport:
    """(Ind_H^J M)^A = Ind_{H/B}^{J/A} M^B with B = H meet A, as (J/A)-groups.

    The map sends an A-invariant equivariant f: J -> M to the function it
    induces on J/A, read off at the coset representatives of the image of H.
    """
    h = _as_subgroup(j, h)
    induced = induce(j, h, module, max_order=max_order)
    lhs = descend(induced, normal)
    quotient = lhs.quotient
    image = ImageModule(module, h, quotient)
    rhs = induce(quotient.group, image.image, image, max_order=max_order)

    name = f"submodule lemma {module.name} from {h.group.name} to {j.name}"
    details = {"lhs_order": lhs.coefficients.order, "rhs_order": rhs.coefficients.order}
    lookup_b = {a: i for i, a in enumerate(image.fixed.embedding)}
    n_lhs = lhs.coefficients.order
    mapping = np.empty(n_lhs, dtype=np.int64)
    for i, code in enumerate(lhs.fixed.embedding):
        values = [induced.value_at(code, x) for x in range(j.order)]
        for x in range(j.order):
            if values[x] != values[quotient.lift[quotient.projection[x]]]:
                return _fail(name, details, "fixed map is not constant on cosets", element=code)
        coords = []
        for r in rhs.reps:
            v = values[quotient.lift[r]]
            if v not in lookup_b:
                return _fail(name, details, "value outside the B-fixed points", element=code)
            coords.append(lookup_b[v])
        mapping[i] = int(rhs.encode(np.asarray(coords)))

    if len(set(mapping.tolist())) != n_lhs:
        return _fail(name, details, "map is not injective")
    if n_lhs != rhs.coefficients.order:
        return _fail(name, details, "map is not surjective")
    product_lhs = mapping[lhs.coefficients.table]
    product_rhs = rhs.coefficients.table[mapping[:, None], mapping[None, :]]
    if not np.array_equal(product_lhs, product_rhs):
        a, b = np.argwhere(product_lhs != product_rhs)[0]
        return _fail(name, details, "map is not a homomorphism", pair=[int(a), int(b)])
    for q in range(quotient.group.order):
        if not np.array_equal(mapping[lhs.action[q]], rhs.action[q][mapping]):
            return _fail(name, details, "map does not commute with the quotient action", element=q)
    return CheckReport(name=name, passed=True, details=details)


def refined_shapiro_check(
    g: FiniteGroup,
    h: Union[Subgroup, Sequence[int]],
    normal: Sequence[int],
    module: FiniteGGroup,
    budget: int = DEFAULT_ENUMERATION_BUDGET,
    max_order: int = DEFAULT_MAX_INDUCED_ORDER,
    jobs: int = 1,
) -> CheckReport:
    """H^1(g/N, (A*)^N) = H^1(h/(h meet N), A^(h meet N)), with eta: h/(h meet N) -> g/N injective"""
    h = _as_subgroup(g, h)
    name = f"refined shapiro {module.name} from {h.group.name} to {g.name}"
    induced = induce(g, h, module, max_order=max_order)
    lhs_module = descend(induced, normal)
    quotient = lhs_module.quotient

    normal_set = set(quotient.normal)
    intersection = [i for i, x in enumerate(h.embedding) if x in normal_set]
    small = h.group.quotient(intersection)
    rhs_module = descend(module, intersection)

    eta = [quotient.projection[h.embedding[x]] for x in small.lift]
    details: Dict[str, Any] = {"quotient_order": quotient.group.order, "small_quotient_order": small.group.order}
    if len(set(eta)) != len(eta):
        return _fail(name, details, "eta is not injective", eta=eta)

    lhs = enumerate_h1(lhs_module, budget=budget, jobs=jobs)
    rhs = enumerate_h1(rhs_module, budget=budget, jobs=jobs)
    details.update(source_classes=len(lhs), target_classes=len(rhs))
    embed_n = lhs_module.fixed.embedding
    at_one = induced.coords[:, 0].tolist()
    lookup_b = {a: i for i, a in enumerate(rhs_module.fixed.embedding)}

    def transport(alpha: Cocycle) -> Cocycle:
        return tuple(lookup_b.get(at_one[embed_n[alpha[q]]], -1) for q in eta)

    report = compare_pointed_sets(name, lhs, rhs, transport)
    return report.model_copy(update={"details": {**details, **report.details}})


def hom_count_check(module: FiniteGGroup, budget: int = DEFAULT_ENUMERATION_BUDGET) -> CheckReport:
    """|H^1(g, A)| = |Hom(g, A)| for trivial action on abelian A"""
    trivial = bool(np.all(module.action == np.arange(module.coefficients.order)[None, :]))
    if not (trivial and module.coefficients.is_abelian()):
        raise GroupStructureError("the Hom count applies to trivial actions on abelian groups only")
    classes = len(enumerate_h1(module, budget=budget))
    homs = count_homomorphisms(module.acting, module.coefficients)
    details = {"classes": classes, "homomorphisms": homs}
    if classes != homs:
        return _fail(f"hom count {module.name}", details, "class count differs from Hom count")
    return CheckReport(name=f"hom count {module.name}", passed=True, details=details)
