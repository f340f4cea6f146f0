"""The fixed in-repo battery of (group, subgroup, coefficients, action) cases.

Acting groups: Z/1 to Z/8, V4, S3, D4 with all their subgroups.
Coefficients: Z/2, Z/3, Z/4, S3.
Actions: the trivial action, and for every index-2 subgroup K of the acting
group the action through the quotient by K by one involutive automorphism of
the coefficients (inversion on Z/3 and Z/4, conjugation by a transposition on
S3; Z/2 has none).
"""
from functools import lru_cache
import logging
from typing import Callable, Iterator, List, NamedTuple, Optional, Tuple, Union

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
    action_through_quotient,
    conjugation_automorphism,
    cyclic,
    dihedral4,
    index_two_subgroups,
    inversion_automorphism,
    klein_four,
    symmetric3,
    trivial_action,
)
from depthkit.errors import BudgetExceededError
from depthkit.reports import CaseResult


class BatteryCase(NamedTuple):
    name: str
    run: Callable[[], Union[CaseResult, List[CaseResult]]]


class BatterySettings(NamedTuple):
    budget: int = 10 ** 7
    max_induced_order: int = 729
    jobs: int = 1


@lru_cache(maxsize=None)
def acting_groups() -> Tuple[FiniteGroup, ...]:
    return (*(cyclic(n) for n in range(1, 9)), klein_four(), symmetric3(), dihedral4())


@lru_cache(maxsize=None)
def coefficient_groups() -> Tuple[Tuple[FiniteGroup, Optional[List[int]]], ...]:
    """Each coefficient group with its involutive automorphism, if any"""
    s3 = symmetric3()
    transposition = next(a for a in range(1, s3.order) if s3.element_order(a) == 2)
    z3, z4 = cyclic(3), cyclic(4)
    return (
        (cyclic(2), None),
        (z3, inversion_automorphism(z3)),
        (z4, inversion_automorphism(z4)),
        (s3, conjugation_automorphism(s3, transposition)),
    )


def modules_for(acting: FiniteGroup, coefficients: FiniteGroup, involution: Optional[List[int]]) -> Iterator[FiniteGGroup]:
    yield trivial_action(acting, coefficients)
    if involution is None:
        return
    for kernel in index_two_subgroups(acting):
        yield action_through_quotient(
            acting,
            coefficients,
            kernel,
            involution,
            name=f"{coefficients.name} (sign via {list(kernel)} in {acting.name})",
        )


def _result(name: str, expected: str, report: CheckReport, measured: Optional[str] = None) -> CaseResult:
    if measured is None:
        if report.passed:
            measured = ", ".join(f"{k}={v}" for k, v in report.details.items())
        else:
            measured = str(report.counterexample)
    return CaseResult(case=name, expected=expected, measured=measured, passed=report.passed)


def _label(group: FiniteGroup, indices) -> str:
    return f"<{','.join(str(i) for i in indices)}>" if len(indices) < group.order else group.name


def shapiro_cases(settings: BatterySettings = BatterySettings()) -> Iterator[BatteryCase]:
    for g in acting_groups():
        for h_idx in g.all_subgroups:
            h = g.subgroup(h_idx)
            index = g.order // len(h_idx)
            for coeffs, involution in coefficient_groups():
                if coeffs.order ** index > settings.max_induced_order:
                    logging.warning(f"skipping Ind from {list(h_idx)} to {g.name} of {coeffs.name}")
                    continue
                for module in modules_for(h.group, coeffs, involution):
                    name = f"{g.name} > {_label(g, h_idx)}, {module.name}"

                    def run(g=g, h=h, module=module, name=name) -> CaseResult:
                        report = shapiro_check(
                            g, h, module, budget=settings.budget, max_order=settings.max_induced_order
                        )
                        return _result(name, "bijection", report)

                    yield BatteryCase(name, run)


def cohomology_cases(settings: BatterySettings = BatterySettings()) -> Iterator[BatteryCase]:
    groups = acting_groups()

    for g in groups:
        for coeffs, _ in coefficient_groups()[:3]:
            name = f"Hom count {g.name} -> {coeffs.name}"

            def run(g=g, coeffs=coeffs, name=name) -> CaseResult:
                report = hom_count_check(trivial_action(g, coeffs), budget=settings.budget)
                return _result(name, "|H1| = |Hom|", report)

            yield BatteryCase(name, run)

    for g in groups:
        for coeffs, involution in coefficient_groups():
            for module in modules_for(g, coeffs, involution):
                for u in g.normal_subgroups:
                    name = f"inflation {module.name} through {_label(g, u)}"

                    def run(module=module, u=u, name=name) -> CaseResult:
                        report = inflation_injectivity_check(module, u, budget=settings.budget)
                        return _result(name, "injective", report)

                    yield BatteryCase(name, run)

    for g in groups:
        for h_idx in g.all_subgroups:
            h = g.subgroup(h_idx)
            index = g.order // len(h_idx)
            for coeffs, involution in coefficient_groups():
                if coeffs.order ** index > settings.max_induced_order:
                    logging.warning(
                        f"skipping submodule and refined cases for {_label(g, h_idx)} in {g.name} of {coeffs.name}"
                    )
                    continue
                for module in modules_for(h.group, coeffs, involution):
                    for n_idx in g.normal_subgroups:
                        tag = f"{g.name} > {_label(g, h_idx)}, N={_label(g, n_idx)}, {module.name}"

                        def run_sub(g=g, h=h, n_idx=n_idx, module=module, name=f"submodule {tag}") -> CaseResult:
                            report = submodule_lemma_check(g, h, n_idx, module, max_order=settings.max_induced_order)
                            return _result(name, "isomorphism of quotient groups", report)

                        def run_refined(g=g, h=h, n_idx=n_idx, module=module, name=f"refined {tag}") -> CaseResult:
                            report = refined_shapiro_check(
                                g, h, n_idx, module, budget=settings.budget, max_order=settings.max_induced_order
                            )
                            return _result(name, "bijection", report)

                        yield BatteryCase(f"submodule {tag}", run_sub)
                        yield BatteryCase(f"refined {tag}", run_refined)


def run_case(case: BatteryCase) -> Union[CaseResult, List[CaseResult]]:
    """Budget overruns become failed cases; other errors propagate"""
    try:
        return case.run()
    except BudgetExceededError as err:
        return CaseResult(case=case.name, expected="within budget", measured=str(err), passed=False)
