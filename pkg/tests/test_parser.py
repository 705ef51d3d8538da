import cmath
import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from juliasym.errors import ParseError
from juliasym.isometry import inversion, rotation
from juliasym.parser import parse_isometry, parse_map
from juliasym.rational import equals, newton_map, rational_map

from conftest import mcmullen

Z = np.array([0.31 + 0.2j, -1.4 + 0.5j, 2.2j, 0.9])


@pytest.mark.parametrize("text,f", [
    ("z^2", lambda z: z ** 2),
    ("z^2 - 1", lambda z: z ** 2 - 1),
    ("z^2-0.12+0.75i", lambda z: z ** 2 - 0.12 + 0.75j),
    ("2z^3 + (1-2i)z", lambda z: 2 * z ** 3 + (1 - 2j) * z),
    ("(z^4+1)/z^2", lambda z: (z ** 4 + 1) / z ** 2),
    ("z^-2 + z^3", lambda z: z ** -2.0 + z ** 3),
    ("-z^2", lambda z: -z ** 2),
    ("i*z", lambda z: 1j * z),
    ("3 i z", lambda z: 3j * z),
    ("exp(i pi/3) z^2", lambda z: cmath.exp(1j * math.pi / 3) * z ** 2),
    ("1e-1/z + z^2", lambda z: 0.1 / z + z ** 2),
    ("(z-1)(z+1)", lambda z: z ** 2 - 1),
    ("2iz - z^3", lambda z: 2j * z - z ** 3),
])
def test_parse_values(text, f):
    R = parse_map(text)
    assert np.allclose(R(Z), f(Z), rtol=1e-12)


def test_parse_families():
    assert equals(parse_map("mcmullen(2,2,1)"), mcmullen(2, 2, 1))
    assert equals(parse_map("mcmullen(3, 2, 0.5+0.25i)"), mcmullen(3, 2, 0.5 + 0.25j))
    assert equals(parse_map("mcmullen(2,2,exp(0.7i))"), mcmullen(2, 2, cmath.exp(0.7j)))
    assert equals(parse_map("newton(z^3+1)"), newton_map([1, 0, 0, 1]))
    assert equals(parse_map("mobius(a=1, b=0)"), rational_map([0, 1]))


def test_parse_isometries():
    assert parse_isometry("i*z").is_close(rotation(1j))
    assert parse_isometry("1/z").is_close(inversion(1))
    assert parse_isometry("-z").is_close(rotation(-1))
    with pytest.raises(ParseError):
        parse_isometry("2z")
    with pytest.raises(ParseError):
        parse_isometry("z^2")


@pytest.mark.parametrize("text,pos", [
    ("z^^2", 2),
    ("z^2 +", 5),
    ("z $ 2", 2),
    ("foo(z)", 0),
    ("(z+1", 4),
    ("z^1.5", 2),
    ("mcmullen(1,2,1)", 0),
    ("mcmullen(2,2,z)", 13),
    ("z/0", 1),
    ("", 0),
])
def test_parse_errors(text, pos):
    with pytest.raises(ParseError) as info:
        parse_map(text)
    assert info.value.position == pos
    assert f"position {pos}" in str(info.value)


def test_error_caret():
    with pytest.raises(ParseError) as info:
        parse_map("z^^2")
    lines = str(info.value).splitlines()
    assert lines[-1].index("^") - 2 == 2


@given(st.lists(st.complex_numbers(max_magnitude=5, allow_nan=False, allow_infinity=False),
                min_size=3, max_size=6))
def test_text_round_trip(coeffs):
    coeffs[-1] = coeffs[-1] if abs(coeffs[-1]) > 0.1 else 1
    R = rational_map(coeffs)
    back = parse_map(R.to_text())
    assert equals(R, back, 1e-9)


@pytest.mark.parametrize("text,shown", [
    ("z^2", "z^2"),
    ("mcmullen(2,2,10)", "(z^4 + 10.0)/z^2"),
    ("-z^3 + 2iz", "-z^3 + 2.0i*z"),
    ("(z-1)/(2z+3)", "(0.5*z - 0.5)/(z + 1.5)"),
])
def test_map_text(text, shown):
    assert parse_map(text).to_text() == shown
