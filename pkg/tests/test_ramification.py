import pytest
from fractions import Fraction

import numpy as np

from depthkit.errors import InvalidFunctionError, InvalidParameterError, InvalidProfileError, NotAbelianError
from depthkit.exactnum import PiecewiseLinearFn, plf_eval, plf_invert, rational_grid
from depthkit.ramification import (
    ExtensionTower,
    RamificationProfile,
    artin_schreier,
    build_phi,
    build_psi,
    catalog,
    compose_tower_psi,
    cyclotomic,
    from_breaks,
    hasse_arf_check,
    is_psi_shaped,
    is_tame,
    largest_upper_jump,
    standard_profiles,
    tame,
    unramified,
    upper_jumps,
)


def test_psi_examples():
    assert build_psi(tame(3)) == PiecewiseLinearFn.linear(3)
    assert build_psi(unramified(4)) == PiecewiseLinearFn.identity()

    psi = build_psi(artin_schreier(2, 1))
    assert psi.xs == (0, 1)
    assert psi.slopes == (1, 2)
    assert plf_eval(psi, 2) == 3


def test_phi_examples():
    assert plf_eval(build_phi(tame(2)), 5) == Fraction(5, 2)
    assert plf_eval(build_phi(artin_schreier(2, 1)), 2) == Fraction(3, 2)
    assert plf_eval(build_phi(artin_schreier(2, 3)), 5) == 4

    phi = build_phi(cyclotomic(2, 3))
    assert phi.xs == (0, 1, 3)
    assert phi.slopes == (1, Fraction(1, 2), Fraction(1, 4))
    assert plf_eval(phi, 3) == 2
    assert plf_eval(phi, 4) == Fraction(9, 4)


def test_upper_jumps():
    assert upper_jumps(tame(5)) == [0]
    assert upper_jumps(artin_schreier(3, 2)) == [0, 2]
    assert upper_jumps(cyclotomic(2, 3)) == [0, 1, 2]
    assert upper_jumps(cyclotomic(3, 2)) == [0, 1]
    assert upper_jumps(unramified(3)) == []


def test_tame_and_largest_jump():
    assert is_tame(tame(7, p=2))
    assert largest_upper_jump(tame(7, p=2)) == 0
    assert not is_tame(artin_schreier(2, 5))
    assert largest_upper_jump(artin_schreier(2, 5)) == 5
    assert largest_upper_jump(cyclotomic(3, 2)) == 1
    assert is_tame(unramified(2))


def test_hasse_arf():
    assert hasse_arf_check(cyclotomic(2, 3))
    assert hasse_arf_check(artin_schreier(5, 4))
    assert hasse_arf_check(tame(6))
    # Quaternion-type filtration: lower breaks 1 and 3, upper jump 3/2
    quaternion_like = from_breaks(2, 8, 1, [(0, 8), (2, 2), (4, 1)], abelian=False)
    assert upper_jumps(quaternion_like) == [0, 1, Fraction(3, 2)]
    with pytest.raises(NotAbelianError):
        hasse_arf_check(quaternion_like)


def test_compose_tower_psi():
    psi = compose_tower_psi(build_psi(tame(2)), build_psi(artin_schreier(2, 1)))
    assert psi.xs == (0, Fraction(1, 2))
    assert psi.slopes == (2, 4)
    assert compose_tower_psi(PiecewiseLinearFn.identity(), psi) == psi
    assert compose_tower_psi(build_psi(tame(2)), build_psi(tame(3))) == PiecewiseLinearFn.linear(6)
    with pytest.raises(InvalidFunctionError):
        compose_tower_psi(build_phi(artin_schreier(2, 1)), psi)


def test_tower():
    tower = ExtensionTower(terms=[tame(2), artin_schreier(2, 1)])
    assert tower.e == 4
    assert tower.p == 2
    assert tower.psi.slopes == (2, 4)
    assert tower.upper_jumps == [0, Fraction(1, 2)]
    assert tower.largest_upper_jump == Fraction(1, 2)
    assert not tower.is_tame
    assert plf_eval(tower.phi, 1) == Fraction(1, 2)
    with pytest.raises(InvalidProfileError):
        ExtensionTower(terms=[artin_schreier(2, 1), artin_schreier(3, 1)])
    with pytest.raises(InvalidProfileError):
        ExtensionTower(terms=[])


def test_catalog():
    assert catalog("artin_schreier", p=2, m=3) == artin_schreier(2, 3)
    assert artin_schreier(2, 3).filtration[0].lower_break == 3
    assert catalog("tame", e=4, p=3).order_at(1) == 1
    assert from_breaks(2, 2, 1, [(0, 2), (1, 2)]) == artin_schreier(2, 1)
    assert from_breaks(2, 2, 1, [(0, 2), (2, 1)]) == artin_schreier(2, 1)
    with pytest.raises(InvalidParameterError, match=r"gcd\(m, p\) must be 1"):
        artin_schreier(2, 2)
    with pytest.raises(InvalidParameterError):
        tame(4, p=2)
    with pytest.raises(InvalidParameterError):
        cyclotomic(4, 1)
    with pytest.raises(InvalidParameterError):
        catalog("lubin_tate", p=2)
    with pytest.raises(InvalidParameterError):
        catalog("tame", q=3)


def test_profile_invariants():
    with pytest.raises(InvalidProfileError):
        RamificationProfile(p=2, e=4, f=1, filtration=[(0, 4), (1, 3)])
    with pytest.raises(InvalidProfileError):
        RamificationProfile(p=2, e=2, f=1, filtration=[(0, 4)])
    with pytest.raises(InvalidProfileError):
        RamificationProfile(p=None, e=2, f=1, filtration=[(3, 2)])
    with pytest.raises(InvalidProfileError):
        RamificationProfile(p=4, e=1)


def test_profile_json_round_trip():
    profile = cyclotomic(2, 3)
    data = profile.to_json_dict()
    assert data["filtration"] == [{"break": 1, "order": 4}, {"break": 3, "order": 2}]
    assert RamificationProfile.from_json_dict(data) == profile


def test_catalog_battery_laws():
    for name, profile in standard_profiles():
        psi, phi = build_psi(profile), build_phi(profile)
        assert phi == plf_invert(psi), name
        assert psi.final_slope == profile.e, name
        assert is_psi_shaped(psi), name
        j = largest_upper_jump(profile)
        psi_j = plf_eval(psi, j)
        for x in rational_grid(3 * j + 5, 50):
            assert plf_eval(psi, plf_eval(phi, x)) == x, name
            assert plf_eval(psi, x) <= profile.e * x, name
            if x >= j:
                assert plf_eval(psi, x) == psi_j + profile.e * (x - j), name
        if profile.abelian:
            assert hasse_arf_check(profile), name


@pytest.mark.parametrize(
    "args, message",
    [
        ((2, 0, 1, [(0, 0)]), "e must be >= 1"),
        ((2, 2, 0, [(0, 2)]), "f must be >= 1"),
        ((2, 2, 1, [(0, 2), (1, 0)]), "group orders must be >= 1"),
        ((2, 2, 1, [(0, 2), (1, -2)]), "group orders must be >= 1"),
        ((2, 2, 1, [(-1, 2)]), "break indices must be >= 0"),
    ],
)
def test_from_breaks_rejects_degenerate_orders(args, message):
    with pytest.raises(InvalidParameterError, match=message):
        from_breaks(*args)


def test_random_tower_pairs():
    profiles = [profile for _, profile in standard_profiles()]
    rng = np.random.default_rng(11)
    checked = 0
    while checked < 150:
        lower, upper = (profiles[int(i)] for i in rng.integers(0, len(profiles), size=2))
        if lower.p is not None and upper.p is not None and lower.p != upper.p:
            continue
        tower = ExtensionTower(terms=[lower, upper])
        psi = tower.psi
        for x in rational_grid(12, 25):
            assert plf_eval(psi, x) == plf_eval(build_psi(upper), plf_eval(build_psi(lower), x))
        assert psi.final_slope == lower.e * upper.e
        assert is_psi_shaped(psi)
        assert tower.phi == plf_invert(psi)
        checked += 1
