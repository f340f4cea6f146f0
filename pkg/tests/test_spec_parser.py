import pytest

from depthkit.errors import SpecSemanticError, SpecSyntaxError
from depthkit.ramification import ExtensionTower, artin_schreier, cyclotomic, tame, unramified
from depthkit.spec_parser import format_spec, parse_extension, parse_spec


def test_single_terms():
    assert parse_extension("as(p=2, m=3)") == artin_schreier(2, 3)
    assert parse_extension("as(2, 1)") == artin_schreier(2, 1)
    assert parse_extension("tame(3)") == tame(3)
    assert parse_extension("unram(f=2)") == unramified(2)
    assert parse_extension("  cyclo(p=3, n=2)  ") == cyclotomic(3, 2)
    assert parse_extension("breaks(p=2, e=2, f=1, breaks=[(0, 2), (1, 2)])") == artin_schreier(2, 1)


def test_tower_is_base_first():
    tower = parse_extension("tame(2) * as(p=2, m=1)")
    assert isinstance(tower, ExtensionTower)
    assert tower.e == 4
    assert tower.terms[0] == tame(2)
    spec = parse_spec("tame(2)*as(2,1)")
    assert spec.p == 2
    assert [t.family for t in spec.terms] == ["tame", "as"]


def test_format_round_trip():
    spec = parse_spec("tame(2)*as(2,3)")
    text = format_spec(spec)
    assert text == "tame(e=2) * as(p=2, m=3)"
    assert parse_spec(text) == spec
    breaks = parse_spec("breaks(2, 2, 1, [(0,2),(1,2)])")
    assert format_spec(breaks) == "breaks(p=2, e=2, f=1, breaks=[(0, 2), (1, 2)])"


@pytest.mark.parametrize("text,offset", [
    ("as(p=2, m=)", 10),
    ("as(p=2", 6),
    ("tame(2) tame(3)", 8),
    ("tame(2) * ", 10),
    ("tame(é)", 5),
    ("(2)", 0),
])
def test_syntax_errors(text, offset):
    with pytest.raises(SpecSyntaxError) as err:
        parse_spec(text)
    assert err.value.offset == offset


def test_offsets_count_bytes():
    # U+3000 is whitespace and three bytes long
    with pytest.raises(SpecSyntaxError) as err:
        parse_spec("\u3000tame(2) ]")
    assert err.value.offset == 11


@pytest.mark.parametrize("text,message", [
    ("as(p=2, m=2)", r"gcd\(m, p\) must be 1"),
    ("lubin(2)", "unknown extension"),
    ("as(2, 1, 3)", "at most 2 arguments"),
    ("as(p=2, 1)", "positional argument after keyword"),
    ("as(p=2, p=3)", "given twice"),
    ("as(p=2, q=1)", "no parameter 'q'"),
    ("tame(e=[(0, 2)])", "wrong type"),
    ("as(p=2, m=1) * as(p=3, m=1)", "contradicts p = 2"),
    ("as(m=1)", "offset 0"),
    ("tame(4, 2)", r"gcd\(e, p\) must be 1"),
])
def test_semantic_errors(text, message):
    with pytest.raises(SpecSemanticError, match=message):
        parse_spec(text)
