import pytest
from fractions import Fraction

import numpy as np

from depthkit.errors import ClosureError, IdentityAutomorphismError, InvalidParameterError, PrecisionError
from depthkit.laurent import (
    AtLeast,
    TruncatedLaurentSeries,
    as_automorphism,
    automorphism_order,
    close_group,
    identity_automorphism,
    is_fixed,
    measured_break,
    norm,
    norm_filtration_probe,
    profile_from_group,
    root_of_unity,
    scaling_automorphism,
    torus_filtration_check,
)
from depthkit.ramification import artin_schreier, tame

PRECISION = 48


@pytest.fixture
def t2():
    return TruncatedLaurentSeries.uniformizer(2, PRECISION)


def test_frobenius_in_characteristic_two(t2):
    one = TruncatedLaurentSeries.one(2, PRECISION)
    square = (one + t2) * (one + t2)
    assert square.agrees_with(one + t2 ** 2)
    assert square.coefficient(1) == 0
    assert square.coefficient(2) == 1


def test_valuation_and_precision(t2):
    x = t2 ** 3 + t2 ** 5
    assert x.valuation() == 3
    assert (x - x).valuation() == AtLeast(x.absolute_precision)
    assert str(AtLeast(7)) == ">= 7"
    with pytest.raises(PrecisionError):
        x.coefficient(x.absolute_precision)
    with pytest.raises(PrecisionError):
        (x - x).invert()


def test_inverse(t2):
    u = 1 + t2 + t2 ** 4
    assert (u * u.invert()).agrees_with(TruncatedLaurentSeries.one(2, PRECISION))
    assert t2.invert().valuation() == -1
    with pytest.raises(InvalidParameterError):
        t2 + TruncatedLaurentSeries.uniformizer(3, PRECISION)


def test_compose_matches_automorphism_call():
    sigma = as_automorphism(3, 2, PRECISION)
    t = TruncatedLaurentSeries.uniformizer(3, PRECISION)
    x = 2 + t ** 2 + 2 * t ** 7
    assert sigma(x).agrees_with(x.compose(sigma.image))
    with pytest.raises(InvalidParameterError):
        x.compose(t ** 2)


@pytest.mark.parametrize("p,m", [(2, 1), (2, 3), (3, 1), (3, 2), (5, 4)])
def test_as_automorphism(p, m):
    sigma = as_automorphism(p, m, PRECISION)
    assert automorphism_order(sigma) == p
    assert measured_break(sigma) == m
    assert profile_from_group([sigma], p, e_expected=p) == artin_schreier(p, m)


def test_as_automorphism_rejects_bad_breaks():
    with pytest.raises(InvalidParameterError, match=r"gcd\(m, p\) must be 1"):
        as_automorphism(2, 2)
    with pytest.raises(InvalidParameterError):
        as_automorphism(4, 1)


def test_tame_automorphisms():
    zeta = root_of_unity(7, 3)
    assert zeta != 1 and pow(zeta, 3, 7) == 1
    tau = scaling_automorphism(5, root_of_unity(5, 4), PRECISION)
    assert automorphism_order(tau) == 4
    assert measured_break(tau) == 0
    assert profile_from_group([tau], 5, e_expected=4) == tame(4, 5)
    with pytest.raises(InvalidParameterError):
        root_of_unity(7, 4)


def test_identity_has_no_break():
    ident = identity_automorphism(2, 16)
    assert ident.is_identity()
    with pytest.raises(IdentityAutomorphismError):
        measured_break(ident)
    assert profile_from_group([], 2).e == 1


def test_closure():
    sigma = as_automorphism(3, 1, PRECISION)
    group = close_group([sigma])
    assert len(group) == 3
    assert group[0].is_identity()
    with pytest.raises(ClosureError):
        close_group([sigma], max_elements=2)
    with pytest.raises(InvalidParameterError):
        profile_from_group([sigma], 3, e_expected=9)


def test_norm(t2):
    group = close_group([as_automorphism(2, 1, PRECISION)])
    n = norm(t2, group)
    assert n.valuation() == 2
    assert is_fixed(n, group)
    assert not is_fixed(t2, group)
    with pytest.raises(ClosureError):
        norm(t2, group[1:])


def test_norm_of_random_series_is_fixed():
    rng = np.random.default_rng(19)
    groups = [
        close_group([as_automorphism(2, 1, PRECISION)]),
        close_group([as_automorphism(3, 2, PRECISION)]),
        close_group([scaling_automorphism(5, root_of_unity(5, 4), PRECISION)]),
    ]
    for group in groups:
        p = group[0].p
        for _ in range(10):
            coeffs = rng.integers(0, p, size=PRECISION)
            coeffs[0] = rng.integers(1, p)
            x = TruncatedLaurentSeries(p, coeffs, int(rng.integers(-2, 4)))
            n = norm(x, group)
            assert is_fixed(n, group)
            assert n.valuation() == len(group) * x.valuation()


@pytest.mark.parametrize("p,m", [(2, 1), (3, 2)])
def test_norm_probe(p, m):
    group = close_group([as_automorphism(p, m, 64)])
    profile = artin_schreier(p, m)
    for n in range(0, 4):
        report = norm_filtration_probe(group, profile, n, trials=8, seed=3)
        assert report, n
        assert report.threshold == p * n


def test_norm_probe_is_reproducible():
    group = close_group([as_automorphism(2, 3, 64)])
    first = norm_filtration_probe(group, artin_schreier(2, 3), 2, trials=6, seed=11)
    second = norm_filtration_probe(group, artin_schreier(2, 3), 2, trials=6, seed=11, jobs=2)
    assert first == second
    assert first.psi_n == 2


def test_norm_probe_needs_precision():
    group = close_group([as_automorphism(2, 1, 8)])
    with pytest.raises(PrecisionError):
        norm_filtration_probe(group, artin_schreier(2, 1), 5)
    with pytest.raises(InvalidParameterError):
        norm_filtration_probe(group, tame(3), 1)


def test_torus_filtration():
    for e in (2, 3):
        for r in (0, Fraction(1, 2), Fraction(5, 4), Fraction(3, 2), 2):
            assert torus_filtration_check(e, r, samples=20, precision=64)
    with pytest.raises(PrecisionError):
        torus_filtration_check(4, 20, precision=64)
    with pytest.raises(InvalidParameterError):
        torus_filtration_check(2, -1)
