import pytest
import numpy as np

from depthkit.cohomology import (
    FiniteGroup,
    action_from_generators,
    action_through_quotient,
    count_homomorphisms,
    cyclic,
    descend,
    dihedral4,
    enumerate_h1,
    fixed_points,
    hom_count_check,
    induce,
    inflation_injectivity_check,
    is_cocycle,
    klein_four,
    refined_shapiro_check,
    shapiro_check,
    submodule_lemma_check,
    symmetric3,
    trivial_action,
)
from depthkit.cohomology.battery import cohomology_cases, run_case, shapiro_cases
from depthkit.cohomology.groups import conjugation_automorphism, inversion_automorphism, trivial_group
from depthkit.errors import BudgetExceededError, GroupStructureError


@pytest.fixture
def s3():
    return symmetric3()


@pytest.fixture
def a3(s3):
    return next(s for s in s3.all_subgroups if len(s) == 3)


def _inversion_module(acting, coefficients):
    """Act through acting/(index-2 subgroup) by inversion"""
    kernel = next(s for s in acting.normal_subgroups if 2 * len(s) == acting.order)
    return action_through_quotient(acting, coefficients, kernel, inversion_automorphism(coefficients))


def test_group_structure(s3):
    assert s3.order == 6
    assert not s3.is_abelian()
    assert len(s3.all_subgroups) == 6
    assert len(s3.normal_subgroups) == 3
    assert len(cyclic(6).all_subgroups) == 4
    assert len(klein_four().all_subgroups) == 5
    assert len(dihedral4().all_subgroups) == 10
    assert len(dihedral4().normal_subgroups) == 6
    assert cyclic(8).generators == (1,)


def test_bad_tables_are_rejected():
    with pytest.raises(GroupStructureError):
        FiniteGroup(np.array([[0, 1], [1, 1]]))
    with pytest.raises(GroupStructureError):
        FiniteGroup(np.array([[1, 0], [0, 1]]))
    with pytest.raises(GroupStructureError):
        cyclic(4).subgroup([0, 1])


def test_quotient_needs_normal_subgroup(s3):
    transposition = next(s for s in s3.all_subgroups if len(s) == 2)
    with pytest.raises(GroupStructureError):
        s3.quotient(transposition)
    quotient = cyclic(6).quotient([0, 2, 4])
    assert quotient.group.order == 2
    assert quotient.lift == (0, 1)


def test_actions():
    z3 = cyclic(3)
    module = action_from_generators(cyclic(2), z3, {1: inversion_automorphism(z3)})
    assert module.apply(1, 1) == 2
    with pytest.raises(GroupStructureError):
        action_from_generators(z3, z3, {1: inversion_automorphism(z3)})
    with pytest.raises(GroupStructureError):
        inversion_automorphism(symmetric3())


def test_count_homomorphisms(s3):
    assert count_homomorphisms(cyclic(4), cyclic(2)) == 2
    assert count_homomorphisms(klein_four(), cyclic(2)) == 4
    assert count_homomorphisms(s3, cyclic(2)) == 2
    assert count_homomorphisms(s3, s3) == 10
    assert count_homomorphisms(cyclic(6), cyclic(4)) == 2


def test_h1_examples():
    z2, z3 = cyclic(2), cyclic(3)
    assert len(enumerate_h1(trivial_action(z2, z3))) == 1
    assert len(enumerate_h1(_inversion_module(z2, z3))) == 1
    h1 = enumerate_h1(trivial_action(z2, z2))
    assert len(h1) == 2
    assert h1.distinguished == 0
    assert h1.representatives == ((0, 0), (0, 1))


def test_h1_nonabelian_coefficients(s3):
    transposition = next(a for a in range(1, 6) if s3.element_order(a) == 2)
    module = action_through_quotient(cyclic(2), s3, (0,), conjugation_automorphism(s3, transposition))
    h1 = enumerate_h1(module)
    assert len(h1) == 2
    assert len(h1.cocycles) == 4
    assert len(enumerate_h1(trivial_action(cyclic(2), s3))) == 2
    assert len(enumerate_h1(trivial_action(cyclic(3), s3))) == 2


def test_h1_parallel_search_matches():
    module = _inversion_module(dihedral4(), cyclic(4))
    serial = enumerate_h1(module)
    parallel = enumerate_h1(module, jobs=3)
    assert serial.representatives == parallel.representatives


def test_is_cocycle():
    module = trivial_action(cyclic(2), cyclic(2))
    assert is_cocycle(module, (0, 0))
    assert is_cocycle(module, (0, 1))
    assert not is_cocycle(module, (1, 0))
    assert not is_cocycle(module, (0,))


def test_enumeration_budget():
    d4 = dihedral4()
    with pytest.raises(BudgetExceededError) as err:
        enumerate_h1(trivial_action(d4, symmetric3()), budget=10)
    assert err.value.required == 6 ** len(d4.generators)
    assert err.value.budget == 10


def test_induce():
    z2, z3 = cyclic(2), cyclic(3)
    trivial = z2.subgroup([0])
    induced = induce(z2, trivial, trivial_action(trivial.group, z3))
    assert induced.coefficients.order == 9
    for code in range(9):
        a, b = induced.coordinates(code)
        assert induced.coordinates(induced.action[1][code]) == (b, a)

    whole = z2.subgroup([0, 1])
    module = _inversion_module(whole.group, z3)
    same = induce(z2, whole, module)
    assert np.array_equal(same.action, module.action)

    assert induce(z2, trivial, trivial_action(trivial.group, trivial_group())).coefficients.order == 1

    with pytest.raises(BudgetExceededError):
        induce(cyclic(8), [0], trivial_action(trivial_group(), z3), max_order=100)


def test_induced_values_are_equivariant(s3, a3):
    h = s3.subgroup(a3)
    z3 = cyclic(3)
    base = action_from_generators(h.group, z3, {g: list(range(3)) for g in h.group.generators})
    induced = induce(s3, h, base)
    for code in range(induced.coefficients.order):
        for i, x in enumerate(h.embedding):
            for y in range(s3.order):
                assert induced.value_at(code, s3.mul(x, y)) == base.apply(i, induced.value_at(code, y))


def test_fixed_points_and_descent():
    z4, z2 = cyclic(4), cyclic(2)
    module = _inversion_module(z4, cyclic(4))
    assert fixed_points(module, [0, 1, 2, 3]).embedding == (0, 2)
    descended = descend(module, [0, 2])
    assert descended.acting.order == 2
    assert descended.coefficients.order == 4


def test_shapiro_examples(s3, a3):
    z2, z3 = cyclic(2), cyclic(3)
    trivial = z2.subgroup([0])
    report = shapiro_check(z2, trivial, trivial_action(trivial.group, z3))
    assert report
    assert report.details["source_classes"] == report.details["target_classes"] == 1

    h = s3.subgroup(a3)
    report = shapiro_check(s3, h, trivial_action(h.group, z3))
    assert report.passed
    assert report.details["target_classes"] == 3
    assert report.details["induced_order"] == 9

    whole = z2.subgroup([0, 1])
    report = shapiro_check(z2, whole, trivial_action(whole.group, z2))
    assert report
    assert report.details["target_classes"] == 2


def test_inflation_examples():
    z4, z2 = cyclic(4), cyclic(2)
    module = trivial_action(z4, z2)
    for u in z4.normal_subgroups:
        assert inflation_injectivity_check(module, u)
    report = inflation_injectivity_check(module, [0, 2])
    assert report.details == {"source_classes": 2, "target_classes": 2}
    s3 = symmetric3()
    with pytest.raises(GroupStructureError):
        inflation_injectivity_check(trivial_action(s3, z2), next(s for s in s3.all_subgroups if len(s) == 2))


def test_submodule_lemma_examples(s3, a3):
    z4, z2 = cyclic(4), cyclic(2)
    h = z4.subgroup([0, 2])
    assert submodule_lemma_check(z4, h, [0, 2], trivial_action(h.group, z2))
    assert submodule_lemma_check(z4, h, [0], trivial_action(h.group, z2))

    full = s3.subgroup(range(6))
    assert submodule_lemma_check(s3, full, range(6), trivial_action(full.group, cyclic(3)))

    h = s3.subgroup(a3)
    report = submodule_lemma_check(s3, h, a3, trivial_action(h.group, cyclic(3)))
    assert report
    assert report.details["lhs_order"] == report.details["rhs_order"]


def test_refined_shapiro_examples(s3, a3):
    h = s3.subgroup(a3)
    module = trivial_action(h.group, cyclic(3))
    assert refined_shapiro_check(s3, h, [0], module)
    report = refined_shapiro_check(s3, h, a3, module)
    assert report
    assert report.details["small_quotient_order"] == 1

    z4, z2 = cyclic(4), cyclic(2)
    sub = z4.subgroup([0, 2])
    assert refined_shapiro_check(z4, sub, [0, 2], trivial_action(sub.group, z2))


def test_hom_count_check():
    report = hom_count_check(trivial_action(klein_four(), cyclic(2)))
    assert report
    assert report.details == {"classes": 4, "homomorphisms": 4}
    with pytest.raises(GroupStructureError):
        hom_count_check(_inversion_module(cyclic(2), cyclic(3)))


def _run_battery(cases):
    results = []
    for case in cases:
        outcome = run_case(case)
        results.extend(outcome if isinstance(outcome, list) else [outcome])
    return results


@pytest.mark.slow
def test_shapiro_battery():
    results = _run_battery(shapiro_cases())
    assert results
    assert all(r.passed for r in results), [r.case for r in results if not r.passed]


@pytest.mark.slow
def test_cohomology_battery():
    results = _run_battery(cohomology_cases())
    failed = [r.case for r in results if not r.passed]
    assert not failed, failed
    names = [r.case for r in results]
    assert any(n.startswith("inflation") for n in names)
    assert any(n.startswith("submodule") and "S3 (" in n for n in names)
    assert any(n.startswith("refined") and "S3 (" in n for n in names)
