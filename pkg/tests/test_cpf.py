import csv
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from cpflab.cpf import (
    ComplexPointFunction,
    ConstraintDomain,
    DeltaRegularization,
    GaussianProfile,
    PointSource,
    SWEEP_FIELDS,
    contour_harmonicity_residual,
    cpf_cr_residual,
    cr_defect,
    harmonicity_residual,
    nascent_delta,
    nascent_delta_2d,
    nascent_delta_prime,
    nascent_delta_second,
    normalization_check,
    residual_sweep,
    sift,
    standard_integrals,
    state_profile,
    write_sweep_csv,
)
from cpflab.errors import DomainError, ValidationError
from cpflab.fock import SymmetricState
from cpflab.wirtinger import ChiralCoordinate, ScalarField2D

WINDOW = (-20.0, 20.0, -20.0, 20.0)


def test_nascent_delta_family_by_trapezoid():
    eps = 0.05
    tau = np.linspace(-1, 1, 200001)
    d = nascent_delta(tau, eps)
    assert np.trapezoid(d, tau) == pytest.approx(1.0, abs=1e-10)
    # derivatives checked against numpy.gradient of the sampled delta
    h = tau[1] - tau[0]
    assert np.max(np.abs(np.gradient(d, h) - nascent_delta_prime(tau, eps))) < 1e-3 * d.max() / eps
    dd = nascent_delta_prime(tau, eps)
    assert np.max(np.abs(np.gradient(dd, h) - nascent_delta_second(tau, eps))) < 1e-3 * d.max() / eps**2
    # -int tau delta' = 1 (integration by parts)
    assert -np.trapezoid(tau * dd, tau) == pytest.approx(1.0, abs=1e-8)


def test_nascent_delta_2d_unit_mass():
    eps = 0.1
    s = np.linspace(-1, 1, 1001)
    a, b = np.meshgrid(s, s)
    mass = np.trapezoid(np.trapezoid(nascent_delta_2d(a + 1j * b, eps), s), s)
    assert mass == pytest.approx(1.0, abs=1e-8)


def test_epsilon_must_be_positive():
    with pytest.raises(ValidationError):
        DeltaRegularization(0.0)
    with pytest.raises(ValidationError):
        DeltaRegularization(1e-3, alpha1=1.0, alpha2=1.0)
    with pytest.raises(ValidationError):
        DeltaRegularization(1e-2, tau0=1e-2)


def test_point_source_rejects_origin_and_mirrors():
    with pytest.raises(ValidationError):
        PointSource(0.0, 0.0)
    src = PointSource(1.5, -0.5, 1)
    m = src.mirrored()
    assert m.beta == -1 and m.xi == src.xi


def test_constraint_domain_membership():
    src = PointSource(2.0, 1.0, -1)
    dom = ConstraintDomain(src)
    assert dom.contains(ChiralCoordinate(2.0, 1.0, -1))
    assert not dom.contains(ChiralCoordinate(2.0, 1.0, 1))
    assert not dom.contains(ChiralCoordinate(2.0, 1.1, -1))


def test_profile_is_one_on_unit_zeta_circle():
    phi = ComplexPointFunction(PointSource(3.0, 4.0), GaussianProfile(2.0))
    assert phi.gaussian(3.0, 4.0) == pytest.approx(1.0)
    assert phi.gaussian(-4.0, 3.0) == pytest.approx(1.0)


def test_chirality_mismatch_rejected():
    with pytest.raises(ValidationError):
        ComplexPointFunction(PointSource(1.0, 0.0, 1), beta=-1)


# -- sifting ------------------------------------------------------------------

poly_coeffs = st.lists(st.complex_numbers(max_magnitude=3, allow_nan=False, allow_infinity=False),
                       min_size=1, max_size=5)
src_coord = st.floats(-3, 3).filter(lambda v: abs(v) > 0.2)


@settings(max_examples=20, deadline=None)
@given(poly_coeffs, src_coord, src_coord, st.sampled_from([1, -1]))
def test_sift_reproduces_polynomial(coeffs, a, b, beta):
    p = np.polynomial.Polynomial(coeffs)
    f = ScalarField2D.from_complex(p, beta, WINDOW)
    src = PointSource(a, b, beta)
    exact = p(src.xi)
    assert abs(sift(f, src, DeltaRegularization(1e-3)) - exact) <= 1e-5 * max(1.0, abs(exact))


def test_sift_direction_independence():
    f = ScalarField2D.from_complex(lambda z: z**4 - 2 * z + 1, 1, WINDOW)
    src = PointSource(0.8, -1.3, 1)
    values = []
    for k in range(8):
        th = 2 * math.pi * k / 8
        values.append(sift(f, src, DeltaRegularization(1e-3, math.cos(th), math.sin(th))))
    assert max(abs(v - values[0]) for v in values) < 1e-8


def test_sift_contour_must_fit_window():
    f = ScalarField2D.from_complex(lambda z: z, 1, (-1.0, 1.0, -1.0, 1.0))
    with pytest.raises(DomainError):
        sift(f, PointSource(1.0, 0.0), DeltaRegularization(1e-2))


# -- Cauchy-Riemann residual ---------------------------------------------------

def test_cr_residual_monotone_and_small():
    phi = ComplexPointFunction(PointSource(1.0, 0.0))
    base = DeltaRegularization()
    sweep = [cpf_cr_residual(phi, base.with_epsilon(e)) for e in (1e-1, 5e-2, 2.5e-2, 1.25e-2)]
    assert all(b < a for a, b in zip(sweep, sweep[1:]))
    # leading error is O(eps^2): each halving cuts it by about 4
    for a, b in zip(sweep, sweep[1:]):
        assert a / b == pytest.approx(4.0, rel=0.05)
    assert cpf_cr_residual(phi, DeltaRegularization(1e-3)) < 1e-6


def test_standard_integrals_match_sifted_values():
    # oracle: for psi(r) = exp(-r^2/2) the sifted limits are +psi'(1) and -psi'(1)
    psi, dpsi, _, sigma = state_profile(1, 1.0, 1.0)
    i1, i2 = standard_integrals(psi, dpsi, sigma, DeltaRegularization(1e-3))
    assert abs(abs(i1) - abs(i2)) / abs(i1) < 1e-8
    assert i1 == pytest.approx(-math.exp(0.0), rel=1e-5)


def test_kink_profile_breaks_cr():
    # psi(r) = r at sigma = 0: r = |tau| has a kink, so the pair no longer cancels
    defect = cr_defect(lambda r: r, lambda r: np.ones_like(r), 0.0, DeltaRegularization(1e-3))
    assert defect == pytest.approx(1.0, abs=1e-12)


def test_state_profile_derivatives():
    psi, dpsi, d2psi, sigma = state_profile(3, 0.7, 1.4)
    r, h = 1.1, 1e-4
    assert dpsi(r) == pytest.approx((psi(r + h) - psi(r - h)) / (2 * h), rel=1e-7)
    assert d2psi(r) == pytest.approx((dpsi(r + h) - dpsi(r - h)) / (2 * h), rel=1e-7)
    assert psi(sigma) == pytest.approx(math.sqrt(6))


# -- normalization -----------------------------------------------------------

def test_normalization_random_sources():
    rng = np.random.default_rng(7)
    reg = DeltaRegularization(1e-3)
    for _ in range(20):
        r, th = rng.uniform(0.5, 5), rng.uniform(0, 2 * np.pi)
        kappa = rng.choice([0.5, 1.0, 2.0])
        src = PointSource(r * np.cos(th), r * np.sin(th), int(rng.choice([1, -1])))
        phi = ComplexPointFunction(src, GaussianProfile(kappa))
        assert normalization_check(phi, reg) == pytest.approx(1.0, abs=1e-6)
        assert normalization_check(phi, reg, "raw") == pytest.approx(r**2, abs=1e-6)


def test_normalization_measure_validated():
    with pytest.raises(ValidationError):
        normalization_check(ComplexPointFunction(PointSource(1, 0)), measure="flat")


# -- harmonicity -------------------------------------------------------------

def test_contour_harmonicity_decreases():
    state = SymmetricState.identical(2, PointSource(1.0, 0.5))
    res = [contour_harmonicity_residual(state, DeltaRegularization(0.1 / 2**i)) for i in range(4)]
    assert all(b < a for a, b in zip(res, res[1:]))


def test_bare_gaussian_is_not_harmonic():
    # oracle: Laplacian of exp(a (r^2 - s^2)) at r = s is 4a(1 + a s^2)
    src = PointSource(1.0, 0.5)
    state = SymmetricState.identical(1, src)
    s2 = src.modulus**2
    a = -1.0 / (2 * s2)
    expected = abs(4 * a * (1 + a * s2))
    got = harmonicity_residual(state, ChiralCoordinate(1.0, 0.5), DeltaRegularization(0.1), 1e-3,
                               constrained=False)
    assert got == pytest.approx(expected, rel=1e-5)
    assert got > 0.1


def test_harmonicity_chirality_checked():
    state = SymmetricState.identical(1, PointSource(1.0, 0.5, 1))
    with pytest.raises(ValidationError):
        harmonicity_residual(state, ChiralCoordinate(1.0, 0.5, -1))


# -- sweep export ------------------------------------------------------------

def test_sweep_csv_roundtrip(tmp_path):
    phi = ComplexPointFunction(PointSource(1.0, 2.0, -1), GaussianProfile(0.5))
    rows = residual_sweep(phi, [0.1, 0.05])
    path = tmp_path / "sweep.csv"
    write_sweep_csv(rows, path)
    with open(path) as fh:
        back = list(csv.DictReader(fh))
    assert tuple(back[0]) == SWEEP_FIELDS
    assert len(back) == 2
    assert float(back[1]["residual"]) == pytest.approx(rows[1]["residual"])
    assert back[0]["beta"] == "-1"
