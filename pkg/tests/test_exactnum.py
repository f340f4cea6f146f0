import pytest
from fractions import Fraction

import numpy as np

from depthkit.errors import DomainError, InvalidFunctionError
from depthkit.exactnum import (
    PiecewiseLinearFn,
    format_rational,
    plf_compose,
    plf_eval,
    plf_invert,
    rational_grid,
    to_rational,
)


@pytest.fixture
def psi_as21():
    # psi of as(p=2, m=1): slope 1 up to 1, then slope 2
    return PiecewiseLinearFn.from_slopes([0, 1], [1, 2])


def test_to_rational():
    assert to_rational("3/2") == Fraction(3, 2)
    assert to_rational(" 4 ") == 4
    assert to_rational(Fraction(6, 4)) == Fraction(3, 2)
    with pytest.raises(InvalidFunctionError):
        to_rational("1.5.2")
    with pytest.raises(InvalidFunctionError):
        to_rational(1.5)
    with pytest.raises(InvalidFunctionError):
        to_rational(True)


def test_format_rational():
    assert format_rational(Fraction(6, 4)) == "3/2"
    assert format_rational(Fraction(2)) == "2"
    assert format_rational(Fraction(-1, 3)) == "-1/3"


def test_eval_at_breaks_and_between(psi_as21):
    assert plf_eval(psi_as21, 0) == 0
    assert plf_eval(psi_as21, 1) == 1
    assert plf_eval(psi_as21, 2) == 3
    assert plf_eval(psi_as21, Fraction(1, 2)) == Fraction(1, 2)
    assert psi_as21("3/2") == 2


def test_eval_rejects_negative(psi_as21):
    with pytest.raises(DomainError):
        plf_eval(psi_as21, -1)


def test_inverse(psi_as21):
    phi = plf_invert(psi_as21)
    assert plf_eval(phi, 2) == Fraction(3, 2)
    assert phi.slopes == (Fraction(1), Fraction(1, 2))
    for x in rational_grid(10, 41):
        assert plf_eval(phi, plf_eval(psi_as21, x)) == x
        assert plf_eval(psi_as21, plf_eval(phi, x)) == x


def test_compose(psi_as21):
    triple = PiecewiseLinearFn.linear(3)
    composed = plf_compose(psi_as21, triple)
    for x in rational_grid(5, 21):
        assert plf_eval(composed, x) == plf_eval(psi_as21, 3 * x)
    assert composed.xs == (0, Fraction(1, 3))
    assert plf_compose(PiecewiseLinearFn.identity(), psi_as21) == psi_as21


def test_from_slopes_merges_collinear():
    f = PiecewiseLinearFn.from_slopes([0, 1, 2], [2, 2, 3])
    assert f.xs == (0, 2)
    assert f.slopes == (2, 3)
    assert f == PiecewiseLinearFn.from_slopes([0, 2], [2, 3])


def test_canonical_form_is_enforced():
    # Spurious break
    with pytest.raises(InvalidFunctionError):
        PiecewiseLinearFn(breaks=[(0, 0), (1, 1)], slopes=[1, 1])
    # Discontinuity
    with pytest.raises(InvalidFunctionError):
        PiecewiseLinearFn(breaks=[(0, 0), (1, 2)], slopes=[1, 2])
    # Must start at the origin
    with pytest.raises(InvalidFunctionError):
        PiecewiseLinearFn(breaks=[(1, 1)], slopes=[1])
    # Strictly increasing
    with pytest.raises(InvalidFunctionError):
        PiecewiseLinearFn.linear(0)


def test_shape_predicates(psi_as21):
    assert psi_as21.is_convex()
    assert plf_invert(psi_as21).is_concave()
    assert PiecewiseLinearFn.linear(5).is_linear()
    assert psi_as21.last_break == 1
    assert psi_as21.final_slope == 2


def test_json_form(psi_as21):
    assert psi_as21.to_json_dict() == {
        "breaks": [{"x": "0", "y": "0"}, {"x": "1", "y": "1"}],
        "slopes": ["1", "2"],
    }
    assert psi_as21.describe() == ["[0, 1]: 1*x", "[1, oo): 2*x - 1"]


def test_rational_grid():
    grid = rational_grid(3, 4)
    assert grid == [0, 1, 2, 3]
    assert len(rational_grid(Fraction(7, 2), 50)) == 50
    assert rational_grid(5, 1) == [0]


def _random_plf(rng: np.random.Generator) -> PiecewiseLinearFn:
    pieces = int(rng.integers(1, 5))
    steps = [Fraction(int(rng.integers(1, 7)), int(rng.integers(1, 4))) for _ in range(pieces - 1)]
    xs = [Fraction(0)]
    for step in steps:
        xs.append(xs[-1] + step)
    slopes = [Fraction(int(rng.integers(1, 9)), int(rng.integers(1, 4))) for _ in range(pieces)]
    return PiecewiseLinearFn.from_slopes(xs, slopes)


def test_random_inverse_round_trip():
    rng = np.random.default_rng(2024)
    for _ in range(200):
        f = _random_plf(rng)
        g = plf_invert(f)
        assert plf_invert(g) == f
        for x in rational_grid(2 * f.last_break + 3, 17):
            assert plf_eval(g, plf_eval(f, x)) == x
            assert plf_eval(f, plf_eval(g, x)) == x


def test_random_compose_is_associative():
    rng = np.random.default_rng(7)
    for _ in range(200):
        f, g, h = (_random_plf(rng) for _ in range(3))
        left = plf_compose(plf_compose(f, g), h)
        right = plf_compose(f, plf_compose(g, h))
        assert left == right
        for x in rational_grid(5, 11):
            assert plf_eval(left, x) == plf_eval(f, plf_eval(g, plf_eval(h, x)))
