from __future__ import annotations

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from utforms.errors import InputError, NoValidContour
from utforms.holo import Circle, Contour, auto_contour, parse


def test_circle_validation():
    with pytest.raises(InputError):
        Circle(0, 0.0)
    with pytest.raises(InputError):
        Circle(0, 1.0, nodes=8)
    with pytest.raises(InputError):
        Circle(0, 1.0, orientation=-1)


def test_winding_numbers():
    c = Contour((Circle(0, 1, 64), Circle(5, 1, 64)))
    np.testing.assert_array_equal(c.winding_numbers([0.2, 5.5j + 5 - 5j, 3, 10j]), [1, 1, 0, 0])
    with pytest.raises(NoValidContour):
        Circle(0, 1, 16).winding_number(1.0)


def test_entire_function_single_circle():
    h = parse("z^2")
    c = auto_contour([1, 2], h)
    assert len(c.circles) == 1
    assert c.circles[0].center == 1.5
    c.validate([1, 2], h)


def test_pole_keeps_radius_below_distance():
    h = parse("1/(z-3)")
    c = auto_contour([0], h)
    (circle,) = c.circles
    assert abs(circle.center) < 1e-15
    assert circle.radius < 3 / 1.1
    assert c.winding_number(3) == 0


def test_pole_between_points_forces_split():
    h = parse("1/(z-5)")
    c = auto_contour([0, 10], h)
    assert len(c.circles) == 2
    np.testing.assert_array_equal(c.winding_numbers([0, 10, 5]), [1, 1, 0])


def test_inseparable_singularity():
    with pytest.raises(NoValidContour, match="supply a contour"):
        auto_contour([1.0], parse("1/(z-1)"))


def test_branch_cut_is_avoided():
    h = parse("sqrt(z)")
    c = auto_contour([1, 2], h)
    for circle in c.circles:
        assert h.cuts[0].distance(circle.center) > circle.radius
    with pytest.raises(NoValidContour):
        Contour((Circle(0.5, 1.0),)).validate([1.0], h)


def test_validate_reports_missing_point():
    with pytest.raises(NoValidContour, match="winding number"):
        Contour((Circle(0, 1),)).validate([2.0])


def test_json_round_trip():
    c = Contour((Circle(1 + 2j, 0.5, 32), Circle(-3, 2.0, 64)))
    assert Contour.from_json(c.to_json()) == c
    with pytest.raises(InputError):
        Contour.from_json({"circles": []})
    with pytest.raises(InputError):
        Contour.from_json({"circles": [{"center": [0, 0]}]})


points = st.lists(
    st.complex_numbers(max_magnitude=10, allow_nan=False, allow_infinity=False), min_size=1, max_size=12
)


@given(points, st.complex_numbers(max_magnitude=20, allow_nan=False, allow_infinity=False))
def test_auto_contour_is_valid_or_refuses(pts, pole):
    h = parse(f"1/(z - ({pole.real!r} + {pole.imag!r}i))")
    try:
        c = auto_contour(pts, h, nodes=64)
    except NoValidContour:
        return
    assert np.all(c.winding_numbers(pts) == 1)
    assert c.winding_number(h.poles[0]) == 0
