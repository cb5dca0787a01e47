import cmath

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from cpflab.errors import DomainError, ValidationError
from cpflab.wirtinger import (
    ChiralCoordinate,
    ScalarField2D,
    check_beta,
    cr_residual,
    direction_independence,
    from_complex,
    to_complex,
    unit_directions,
    wirtinger_derivative,
    wirtinger_grid,
)

WINDOW = (-10.0, 10.0, -10.0, 10.0)
coords = st.floats(-3, 3, allow_nan=False)
betas = st.sampled_from([1, -1])


def holo(beta, g=lambda z: z**2):
    return ScalarField2D.from_complex(g, beta, WINDOW, analytic=True)


@pytest.mark.parametrize("bad", [0, 2, True, 0.5, "1"])
def test_check_beta_rejects(bad):
    with pytest.raises(ValidationError):
        check_beta(bad)


@given(coords, coords)
def test_chiral_pair_is_conjugate_and_invertible(x1, x2):
    zp, zm = to_complex(x1, x2, 1), to_complex(x1, x2, -1)
    assert zm == pytest.approx(np.conj(zp))
    back = from_complex(zp, zm)
    assert back == pytest.approx((x1, x2), abs=1e-12)


def test_from_complex_rejects_non_conjugate_pair():
    with pytest.raises(ValidationError, match="inconsistent coordinate pair"):
        from_complex(1 + 2j, 1 + 2j)


def test_mirrored_coordinate_keeps_z():
    p = ChiralCoordinate(0.3, -1.2, 1)
    m = p.mirrored()
    assert m.beta == -1
    assert m.z == p.z
    assert ChiralCoordinate.from_z(p.z, 1) == p


@settings(max_examples=30, deadline=None)
@given(coords, coords, betas)
def test_wirtinger_of_square_matches_analytic(x1, x2, beta):
    at = ChiralCoordinate(x1, x2, beta)
    f = holo(beta)
    assert wirtinger_derivative(f, at, "z") == pytest.approx(2 * at.z, abs=1e-6)
    assert cr_residual(f, at) < 1e-6


@settings(max_examples=30, deadline=None)
@given(coords, coords, betas)
def test_wirtinger_of_modulus_squared(x1, x2, beta):
    # |z|^2 = z z*: d/dz gives z*, d/dz* gives z
    at = ChiralCoordinate(x1, x2, beta)
    f = ScalarField2D(lambda a, b: a**2 + b**2 + 0j, WINDOW)
    assert wirtinger_derivative(f, at, "z") == pytest.approx(at.zbar, abs=1e-6)
    assert wirtinger_derivative(f, at, "z*") == pytest.approx(at.z, abs=1e-6)


def test_conjugate_field_is_antiholomorphic_in_same_chirality():
    at = ChiralCoordinate(0.7, 0.4, 1)
    f = holo(1, cmath.exp)
    assert cr_residual(f.conjugate(), at) == pytest.approx(abs(cmath.exp(at.z)), rel=1e-6)
    # and holomorphic in the mirrored chirality
    assert cr_residual(f.conjugate(), ChiralCoordinate(0.7, -0.4, -1)) < 1e-6


def test_grid_matches_pointwise():
    f = holo(-1, lambda z: z**3)
    x1 = np.array([0.1, -0.5, 1.5])
    x2 = np.array([0.2, 0.9, -1.1])
    grid = wirtinger_grid(f, x1, x2, -1, "z")
    for i in range(3):
        assert grid[i] == pytest.approx(wirtinger_derivative(f, ChiralCoordinate(x1[i], x2[i], -1)))


def test_direction_independence_separates_holomorphic_from_not():
    at = ChiralCoordinate(0.5, -0.25, 1)
    dirs = unit_directions(8)
    assert direction_independence(holo(1), at, dirs, 1e-6) < 1e-5
    conj = ScalarField2D(lambda a, b: a - 1j * b, WINDOW)
    # z* has quotient exp(-2i theta): spread between opposite-phase directions is 2
    assert direction_independence(conj, at, dirs, 1e-6) == pytest.approx(2.0, rel=1e-6)


def test_unit_directions_are_unit():
    for d in unit_directions(8):
        assert np.hypot(*d) == pytest.approx(1.0)


def test_window_is_enforced():
    f = holo(1)
    with pytest.raises(DomainError):
        f(11.0, 0.0)
    with pytest.raises(DomainError):
        wirtinger_derivative(f, ChiralCoordinate(10.0, 0.0, 1))
    with pytest.raises(ValidationError):
        ScalarField2D(lambda a, b: a, (1, 0, 0, 1))


def test_which_and_step_validated():
    f = holo(1)
    with pytest.raises(ValidationError):
        wirtinger_derivative(f, ChiralCoordinate(0, 0), "w")
    with pytest.raises(ValidationError):
        wirtinger_derivative(f, ChiralCoordinate(0, 0), step=0.0)


def test_fourth_order_stencil_converges_faster():
    # exp(x1) is not holomorphic: d/dz = exp(x1)/2, with central-difference
    # error h^2/12 exp(x1) for the 3-point and h^4/60 exp(x1) for the 5-point stencil
    f = ScalarField2D(lambda a, b: np.exp(a) + 0j * b, WINDOW)
    x1, x2 = np.array([0.4]), np.array([-0.2])
    exact = np.exp(0.4) / 2
    h = 1e-2
    err2 = abs(wirtinger_grid(f, x1, x2, 1, "z", h)[0] - exact)
    err4 = abs(wirtinger_grid(f, x1, x2, 1, "z", h, order=4)[0] - exact)
    assert err2 == pytest.approx(h**2 / 12 * np.exp(0.4), rel=1e-3)
    assert err4 == pytest.approx(h**4 / 60 * np.exp(0.4), rel=1e-2)
    with pytest.raises(ValidationError):
        wirtinger_grid(f, x1, x2, 1, "z", h, order=3)
