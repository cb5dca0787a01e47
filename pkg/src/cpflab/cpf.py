"""Complex point functions and their regularized delta-function calculus.

A complex point function (CPF) is a real Gaussian profile multiplied by a
delta function of complex argument that pins ``z*`` to a source point
``xi*``::

    phi = exp(-kappa**2/2 * (|zeta|**2 - 1)) * delta(zeta* - 1),  zeta = z/xi

The complex delta is realized along a straight contour through the source,
``z(tau) = xi + (alpha1 + i alpha2) tau``, with a Gaussian nascent delta of
width ``epsilon`` in the real contour parameter. Every integral here is a
Gauss-Legendre quadrature over that parameter. Results that should converge
to a sifted value as ``epsilon -> 0`` are Richardson-extrapolated over the
widths ``epsilon, epsilon/2, ...`` unless ``levels=0``.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass, field, replace
from typing import Callable, Iterable

import numpy as np

from .config import DEFAULTS
from .errors import ValidationError
from .quadrature import gauss_legendre, richardson
from .wirtinger import ChiralCoordinate, ScalarField2D, check_beta

SQRT_PI = math.sqrt(math.pi)


# -- nascent delta family ----------------------------------------------------

def _check_eps(epsilon):
    if not epsilon > 0:
        raise ValidationError(f"epsilon must be positive, got {epsilon}")


def nascent_delta(tau, epsilon: float):
    """Gaussian nascent delta ``exp(-tau**2/eps**2) / (eps*sqrt(pi))``."""
    _check_eps(epsilon)
    t = np.asarray(tau, dtype=float) / epsilon
    return np.exp(-t * t) / (epsilon * SQRT_PI)


def nascent_delta_prime(tau, epsilon: float):
    """First derivative of :func:`nascent_delta` in ``tau``."""
    tau = np.asarray(tau, dtype=float)
    return -2.0 * tau / epsilon**2 * nascent_delta(tau, epsilon)


def nascent_delta_second(tau, epsilon: float):
    tau = np.asarray(tau, dtype=float)
    return (4.0 * tau**2 / epsilon**4 - 2.0 / epsilon**2) * nascent_delta(tau, epsilon)


def nascent_delta_2d(w, epsilon: float):
    """Product of nascent deltas in ``Re w`` and ``Im w``; unit mass on the plane."""
    w = np.asarray(w, dtype=complex)
    return nascent_delta(w.real, epsilon) * nascent_delta(w.imag, epsilon)


# -- value types -------------------------------------------------------------

@dataclass(frozen=True)
class PointSource:
    """Source point ``xi_beta = xi_a + i*beta*xi_b``."""

    xi_a: float
    xi_b: float
    beta: int = 1

    def __post_init__(self):
        object.__setattr__(self, "beta", check_beta(self.beta))
        if math.hypot(self.xi_a, self.xi_b) == 0.0:
            raise ValidationError("point source at the origin: zeta = z/xi is undefined")

    @property
    def xi(self) -> complex:
        return complex(self.xi_a, self.beta * self.xi_b)

    @property
    def modulus(self) -> float:
        return math.hypot(self.xi_a, self.xi_b)

    def zeta(self, x1, x2):
        return (x1 + 1j * self.beta * x2) / self.xi

    def mirrored(self) -> "PointSource":
        """Parity partner: same ``xi_beta`` value in the opposite chirality."""
        return PointSource(self.xi_a, -self.xi_b, -self.beta)


@dataclass(frozen=True)
class GaussianProfile:
    kappa: float = DEFAULTS.kappa

    def __post_init__(self):
        if not self.kappa > 0:
            raise ValidationError(f"kappa must be positive, got {self.kappa}")

    def of_zeta(self, abs_zeta):
        """Profile as a function of ``|zeta|``; equals 1 on ``|zeta| = 1``."""
        return np.exp(-0.5 * self.kappa**2 * (np.asarray(abs_zeta) ** 2 - 1.0))


@dataclass(frozen=True)
class ComplexPointFunction:
    source: PointSource
    profile: GaussianProfile = field(default_factory=GaussianProfile)
    beta: int | None = None

    def __post_init__(self):
        beta = self.source.beta if self.beta is None else check_beta(self.beta)
        if beta != self.source.beta:
            raise ValidationError("CPF chirality differs from its source chirality")
        object.__setattr__(self, "beta", beta)

    @property
    def kappa(self) -> float:
        return self.profile.kappa

    def gaussian(self, x1, x2):
        return self.profile.of_zeta(np.abs(self.source.zeta(x1, x2)))

    def evaluate(self, x1, x2, epsilon: float, constrained: bool = True):
        """Regularized CPF on the plane.

        The constraint is realized by a 2-D nascent delta at ``zeta = 1``;
        ``constrained=False`` returns the bare Gaussian profile.
        """
        zeta = self.source.zeta(x1, x2)
        val = self.profile.of_zeta(np.abs(zeta))
        if constrained:
            val = val * nascent_delta_2d(zeta - 1.0, epsilon)
        return val

    def radial(self):
        """``(psi, dpsi, d2psi, sigma)`` as functions of ``r = |z|``."""
        return state_profile(1, self.kappa, self.source.modulus)


@dataclass(frozen=True)
class DeltaRegularization:
    """Nascent-delta width, contour direction and quadrature rule."""

    epsilon: float = DEFAULTS.epsilon
    alpha1: float = 1.0
    alpha2: float = 0.0
    tau0: float | None = None
    n_quad: int = DEFAULTS.n_quad

    def __post_init__(self):
        _check_eps(self.epsilon)
        if abs(self.alpha1**2 + self.alpha2**2 - 1.0) > 1e-12:
            raise ValidationError("contour direction (alpha1, alpha2) must be a unit vector")
        if self.tau0 is None:
            object.__setattr__(self, "tau0", DEFAULTS.tau_factor * self.epsilon)
        if self.tau0 < 8.0 * self.epsilon * (1 - 1e-12):
            raise ValidationError("tau0 must be at least 8*epsilon")
        if int(self.n_quad) < 1:
            raise ValidationError("n_quad must be a positive integer")

    @property
    def direction(self) -> complex:
        return complex(self.alpha1, self.alpha2)

    def nodes(self):
        return gauss_legendre(self.tau0, self.n_quad)

    def with_epsilon(self, epsilon: float) -> "DeltaRegularization":
        """Same rule at another width, keeping ``tau0/epsilon`` fixed."""
        return replace(self, epsilon=epsilon, tau0=self.tau0 * epsilon / self.epsilon)

    def ladder(self, levels: int) -> list["DeltaRegularization"]:
        return [self.with_epsilon(self.epsilon / 2**i) for i in range(levels + 1)]


@dataclass(frozen=True)
class ConstraintDomain:
    """The set ``C_beta = {z* = xi*}`` attached to a source."""

    source: PointSource

    @property
    def beta(self) -> int:
        return self.source.beta

    def contains(self, at: ChiralCoordinate, tol: float = 1e-9) -> bool:
        if at.beta != self.beta:
            return False
        return abs(at.zbar - self.source.xi.conjugate()) <= tol


def _levels(levels):
    return DEFAULTS.richardson_levels if levels is None else int(levels)


def _extrapolated(evaluate: Callable[[DeltaRegularization], complex], reg, levels):
    values = [evaluate(r) for r in reg.ladder(_levels(levels))]
    return richardson(values)


# -- sifting -----------------------------------------------------------------

def sift_raw(f: ScalarField2D, source: PointSource, reg: DeltaRegularization) -> complex:
    """Quadrature of ``f`` against the nascent delta along the contour, no extrapolation."""
    tau, w = reg.nodes()
    x1 = source.xi_a + reg.alpha1 * tau
    x2 = source.xi_b + source.beta * reg.alpha2 * tau
    f.require(x1, x2)
    return complex(np.sum(w * nascent_delta(tau, reg.epsilon) * f(x1, x2)))


def sift(f: ScalarField2D, source: PointSource, reg: DeltaRegularization | None = None,
         levels: int | None = None) -> complex:
    """Sift ``f`` at ``xi`` through the contour realization of the complex delta.

    Parameters
    ----------
    f : ScalarField2D
        Field whose window must contain the whole contour segment.
    source : PointSource
        Sifting point; its chirality fixes how the contour maps to ``(x1, x2)``.
    reg : DeltaRegularization
        Width, direction and quadrature rule.
    levels : int, optional
        Richardson levels over halved widths (default from config; 0 disables).
    """
    reg = reg or DeltaRegularization()
    value, _ = _extrapolated(lambda r: sift_raw(f, source, r), reg, levels)
    return value


# -- Cauchy-Riemann property of a CPF ----------------------------------------

def state_profile(n: int, kappa: float, sigma: float, coeff: float | None = None):
    """Radial profile of an ``n``-fold product of identical CPF Gaussians.

    Returns ``(psi, dpsi, d2psi, sigma)`` with ``psi(r) = c * exp(a (r**2 - sigma**2))``,
    ``a = -n kappa**2 / (2 sigma**2)``, ``c = sqrt(n!)`` unless given.
    """
    c = math.sqrt(math.factorial(n)) if coeff is None else coeff
    a = -n * kappa**2 / (2.0 * sigma**2)

    def psi(r):
        r = np.asarray(r, dtype=float)
        return c * np.exp(a * (r * r - sigma**2))

    def dpsi(r):
        r = np.asarray(r, dtype=float)
        return 2 * a * r * psi(r)

    def d2psi(r):
        r = np.asarray(r, dtype=float)
        return (2 * a + 4 * a * a * r * r) * psi(r)

    return psi, dpsi, d2psi, sigma


def standard_integrals(psi, dpsi, sigma: float, reg: DeltaRegularization) -> tuple[float, float]:
    """The pair ``(int psi'(|tau+sigma|) delta(tau), int psi(|tau+sigma|) delta'(tau))``.

    ``dpsi`` is the derivative of ``psi`` with respect to its own argument, so
    the two integrals cancel only when ``r = |tau + sigma|`` is smooth on the
    support of the nascent delta.
    """
    tau, w = reg.nodes()
    r = np.abs(tau + sigma)
    first = float(np.sum(w * dpsi(r) * nascent_delta(tau, reg.epsilon)))
    second = float(np.sum(w * psi(r) * nascent_delta_prime(tau, reg.epsilon)))
    return first, second


def cr_defect(psi, dpsi, sigma: float, reg: DeltaRegularization) -> float:
    """``|I1 + I2| + |I1 - psi'(|sigma|)|`` for the standard-integral pair.

    The first term is the contour integral of ``d phi / dz*``; the second is
    how far the regularized pair still is from the sifted values
    ``+psi'`` / ``-psi'``. Both vanish in the limit for a smooth profile.
    """
    first, second = standard_integrals(psi, dpsi, sigma, reg)
    limit = float(dpsi(abs(sigma)))
    return abs(first + second) + abs(first - limit)


def cpf_cr_residual(phi: ComplexPointFunction, reg: DeltaRegularization | None = None) -> float:
    """Regularized Cauchy-Riemann residual of a CPF along its constraint contour."""
    reg = reg or DeltaRegularization()
    psi, dpsi, _, sigma = phi.radial()
    return cr_defect(psi, dpsi, sigma, reg)


# -- normalization -----------------------------------------------------------

def _normalization_raw_level(phi: ComplexPointFunction, reg: DeltaRegularization) -> complex:
    s, w = reg.nodes()
    xi_hat = phi.source.xi / phi.source.modulus
    tilt = reg.direction / xi_hat
    zeta = 1.0 + tilt * s
    zeta_star = 1.0 + np.conj(tilt) * s
    gauss2 = np.exp(-phi.kappa**2 * (np.outer(zeta, zeta_star) - 1.0))
    weight = w * nascent_delta(s, reg.epsilon)
    return phi.source.modulus**2 * complex(weight @ gauss2 @ weight)


def normalization_check(phi: ComplexPointFunction, reg: DeltaRegularization | None = None,
                        measure: str = "scaled", levels: int | None = None) -> float:
    """Double integral of ``phi* phi`` by iterated siftings.

    ``measure="scaled"`` divides by ``|xi|**2`` (result 1 for every source);
    ``measure="raw"`` keeps the plain ``dz dz*`` measure (result ``|xi|**2``).
    """
    if measure not in ("scaled", "raw"):
        raise ValidationError(f"measure must be 'scaled' or 'raw', got {measure!r}")
    reg = reg or DeltaRegularization()
    raw, _ = _extrapolated(lambda r: _normalization_raw_level(phi, r), reg, levels)
    value = raw.real
    return value / phi.source.modulus**2 if measure == "scaled" else value


# -- harmonicity of symmetric states -----------------------------------------

def state_value(sources, kappa: float, coeff: float, x1, x2, epsilon: float,
                constrained: bool = True):
    """Regularized ``Phi`` of a product state at plane points.

    ``coeff`` multiplies the product of per-photon Gaussians; each distinct
    source contributes one 2-D nascent delta (a repeated constraint is the
    same constraint).
    """
    if not sources:
        return np.ones(np.broadcast(np.asarray(x1), np.asarray(x2)).shape) * coeff
    val = coeff
    for src in sources:
        val = val * GaussianProfile(kappa).of_zeta(np.abs(src.zeta(x1, x2)))
    if constrained:
        for src in dict.fromkeys(sources):
            val = val * nascent_delta_2d(src.zeta(x1, x2) - 1.0, epsilon)
    return val


def _laplacian5(f: ScalarField2D, x1: float, x2: float, h: float):
    f.require(x1, x2, margin=h)
    return (f(x1 + h, x2) + f(x1 - h, x2) + f(x1, x2 + h) + f(x1, x2 - h)
            - 4.0 * f(x1, x2)) / h**2


def harmonicity_residual(state, at: ChiralCoordinate, reg: DeltaRegularization | None = None,
                         step: float = DEFAULTS.step, constrained: bool = True) -> float:
    """Five-point Laplacian magnitude of the regularized state at ``at``.

    ``constrained=False`` drops the delta factor and measures the bare
    Gaussian product, which is not harmonic.
    """
    reg = reg or DeltaRegularization()
    if at.beta != state.beta:
        raise ValidationError("evaluation point and state have different chirality")
    field_ = state.as_field(reg.epsilon, constrained=constrained)
    return float(abs(_laplacian5(field_, at.x1, at.x2, step)))


def contour_harmonicity_residual(state, reg: DeltaRegularization | None = None) -> float:
    """Second-order analogue of :func:`cr_defect` for ``d2 Phi / dz dz*``.

    Sums ``int psi'' delta + 2 int psi' delta' + int psi delta''`` (the
    contour integral of the mixed derivative) and the distance of the first
    term from its sifted value ``psi''(sigma)``.
    """
    reg = reg or DeltaRegularization()
    if state.n == 0:
        return 0.0
    psi, dpsi, d2psi, sigma = state.radial()
    tau, w = reg.nodes()
    r = np.abs(tau + sigma)
    eps = reg.epsilon
    j1 = float(np.sum(w * d2psi(r) * nascent_delta(tau, eps)))
    j2 = float(np.sum(w * dpsi(r) * nascent_delta_prime(tau, eps)))
    j3 = float(np.sum(w * psi(r) * nascent_delta_second(tau, eps)))
    return abs(j1 + 2 * j2 + j3) + abs(j1 - float(d2psi(sigma)))


# -- sweep export ------------------------------------------------------------

SWEEP_FIELDS = ("epsilon", "residual", "quantity_name", "beta", "kappa", "xi_a", "xi_b")


def residual_sweep(phi: ComplexPointFunction, epsilons: Iterable[float],
                   reg: DeltaRegularization | None = None) -> list[dict]:
    """C-R residual of ``phi`` at each width, as CSV-ready rows."""
    reg = reg or DeltaRegularization()
    rows = []
    for eps in epsilons:
        rows.append({
            "epsilon": float(eps),
            "residual": cpf_cr_residual(phi, reg.with_epsilon(eps)),
            "quantity_name": "cpf_cr_residual",
            "beta": phi.beta,
            "kappa": phi.kappa,
            "xi_a": phi.source.xi_a,
            "xi_b": phi.source.xi_b,
        })
    return rows


def write_sweep_csv(rows: Iterable[dict], path) -> None:
    with open(path, "w", newline="") as fh:
        writer = csv.DictWriter(fh, fieldnames=SWEEP_FIELDS)
        writer.writeheader()
        for row in rows:
            writer.writerow({k: row[k] for k in SWEEP_FIELDS})
