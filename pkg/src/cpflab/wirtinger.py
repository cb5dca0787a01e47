"""Chiral complex coordinates, finite-difference Wirtinger derivatives and
Cauchy-Riemann residuals.

A point of the real plane is written ``z_beta = x1 + i*beta*x2`` with the
chirality ``beta`` equal to +1 or -1. The Wirtinger pair is

    d/dz_beta  = (d/dx1 - i*beta*d/dx2) / 2
    d/dz_beta* = (d/dx1 + i*beta*d/dx2) / 2

and a function is holomorphic in ``z_beta`` where the second one vanishes.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from .config import DEFAULTS
from .errors import DomainError, ValidationError


def check_beta(beta) -> int:
    """Return ``beta`` as an int, rejecting anything but +1 / -1."""
    if isinstance(beta, bool) or beta not in (1, -1):
        raise ValidationError(f"chirality must be +1 or -1, got {beta!r}")
    return int(beta)


def to_complex(x1, x2, beta: int):
    """``x1 + i*beta*x2``; works elementwise on arrays."""
    beta = check_beta(beta)
    return x1 + 1j * beta * x2


def from_complex(zp: complex, zm: complex, tol: float = DEFAULTS.tau_conj) -> tuple[float, float]:
    """Invert the chiral map from the conjugate pair ``(z_{+1}, z_{-1})``.

    Raises ValidationError("inconsistent coordinate pair") when ``zm`` is not
    the conjugate of ``zp`` within ``tol``.
    """
    x1 = (zp + zm) / 2
    x2 = (zp - zm) / 2j
    if abs(complex(x1).imag) > tol or abs(complex(x2).imag) > tol:
        raise ValidationError("inconsistent coordinate pair")
    return float(complex(x1).real), float(complex(x2).real)


@dataclass(frozen=True)
class ChiralCoordinate:
    x1: float
    x2: float
    beta: int = 1

    def __post_init__(self):
        object.__setattr__(self, "beta", check_beta(self.beta))

    @property
    def z(self) -> complex:
        return complex(self.x1, self.beta * self.x2)

    @property
    def zbar(self) -> complex:
        return self.z.conjugate()

    @classmethod
    def from_z(cls, z: complex, beta: int = 1) -> "ChiralCoordinate":
        beta = check_beta(beta)
        return cls(float(z.real), float(beta * z.imag), beta)

    def mirrored(self) -> "ChiralCoordinate":
        """Parity image ``(x1, -x2)`` with opposite chirality; ``z`` is unchanged."""
        return ChiralCoordinate(self.x1, -self.x2, -self.beta)


Window = tuple[float, float, float, float]


class ScalarField2D:
    """Complex scalar field on an axis-aligned window ``(x1_min, x1_max, x2_min, x2_max)``.

    Calling the field outside its window raises DomainError instead of
    extrapolating. The evaluator must accept numpy arrays.
    """

    def __init__(self, evaluator: Callable, window: Window, analytic: bool = False):
        x1a, x1b, x2a, x2b = map(float, window)
        if not (x1a < x1b and x2a < x2b):
            raise ValidationError(f"degenerate window {window}")
        self.evaluator = evaluator
        self.window = (x1a, x1b, x2a, x2b)
        self.analytic = analytic

    @classmethod
    def from_complex(cls, g: Callable, beta: int, window: Window, analytic: bool = False):
        """Wrap ``g(z_beta)`` as a field of ``(x1, x2)``."""
        beta = check_beta(beta)
        return cls(lambda x1, x2: g(x1 + 1j * beta * x2), window, analytic)

    def contains(self, x1, x2, margin: float = 0.0) -> bool:
        x1a, x1b, x2a, x2b = self.window
        x1 = np.asarray(x1)
        x2 = np.asarray(x2)
        return bool(
            np.all(x1 - margin >= x1a) and np.all(x1 + margin <= x1b)
            and np.all(x2 - margin >= x2a) and np.all(x2 + margin <= x2b)
        )

    def require(self, x1, x2, margin: float = 0.0) -> None:
        if not self.contains(x1, x2, margin):
            raise DomainError(f"point(s) outside window {self.window} (margin {margin})")

    def __call__(self, x1, x2):
        self.require(x1, x2)
        return self.evaluator(x1, x2)

    def conjugate(self) -> "ScalarField2D":
        ev = self.evaluator
        return ScalarField2D(lambda x1, x2: np.conj(ev(x1, x2)), self.window)


# central-difference weights for offsets 1..m (antisymmetric stencils)
_STENCILS = {2: (0.5,), 4: (2 / 3, -1 / 12)}


def _partials(f: ScalarField2D, x1, x2, step: float, order: int = 2):
    if not step > 0:
        raise ValidationError("step must be positive")
    if order not in _STENCILS:
        raise ValidationError(f"order must be one of {sorted(_STENCILS)}")
    weights = _STENCILS[order]
    f.require(x1, x2, margin=len(weights) * step)
    d1 = d2 = 0
    for j, c in enumerate(weights, start=1):
        d1 = d1 + c * (f(x1 + j * step, x2) - f(x1 - j * step, x2))
        d2 = d2 + c * (f(x1, x2 + j * step) - f(x1, x2 - j * step))
    return d1 / step, d2 / step


def wirtinger_derivative(f: ScalarField2D, at: ChiralCoordinate, which: str = "z",
                         step: float = DEFAULTS.step) -> complex:
    """Second-order central-difference Wirtinger derivative of ``f`` at ``at``.

    ``which`` selects ``"z"`` or ``"z*"`` with respect to ``z_beta`` where
    ``beta = at.beta``.
    """
    if which not in ("z", "z*"):
        raise ValidationError(f"which must be 'z' or 'z*', got {which!r}")
    d1, d2 = _partials(f, at.x1, at.x2, step)
    sign = -1 if which == "z" else 1
    return complex(0.5 * (d1 + sign * 1j * at.beta * d2))


def wirtinger_grid(f: ScalarField2D, x1, x2, beta: int, which: str = "z",
                   step: float = DEFAULTS.step, order: int = 2):
    """Vectorised form of :func:`wirtinger_derivative` over arrays of points.

    ``order=4`` switches to the five-point stencil (error O(step**4)).
    """
    beta = check_beta(beta)
    d1, d2 = _partials(f, np.asarray(x1, float), np.asarray(x2, float), step, order)
    sign = -1 if which == "z" else 1
    return 0.5 * (d1 + sign * 1j * beta * d2)


def cr_residual(f: ScalarField2D, at: ChiralCoordinate, step: float = DEFAULTS.step) -> float:
    """``|df/dz_beta*|`` at ``at``; zero up to O(step**2) iff ``f`` is holomorphic there."""
    return abs(wirtinger_derivative(f, at, "z*", step))


def direction_independence(f: ScalarField2D, at: ChiralCoordinate,
                           directions: Sequence[Sequence[float]],
                           step: float = DEFAULTS.step) -> float:
    """Largest pairwise spread of one-sided complex difference quotients.

    For each unit direction ``d`` the quotient is
    ``(f(p + h d) - f(p)) / (h (d1 + i beta d2))``. A holomorphic ``f`` gives
    the same quotient in every direction up to O(h).
    """
    dirs = [np.asarray(d, dtype=float) for d in directions]
    if len(dirs) < 2:
        raise ValidationError("need at least two directions")
    for d in dirs:
        if d.shape != (2,) or abs(np.hypot(*d) - 1.0) > 1e-12:
            raise ValidationError(f"direction {d} is not a unit 2-vector")
    if not step > 0:
        raise ValidationError("step must be positive")
    f.require(at.x1, at.x2, margin=step)
    f0 = f(at.x1, at.x2)
    quotients = [
        (f(at.x1 + step * d[0], at.x2 + step * d[1]) - f0) / (step * (d[0] + 1j * at.beta * d[1]))
        for d in dirs
    ]
    return max(abs(a - b) for a, b in itertools.combinations(quotients, 2))


def unit_directions(count: int) -> list[tuple[float, float]]:
    """``count`` equispaced unit vectors starting at (1, 0)."""
    angles = 2 * np.pi * np.arange(count) / count
    return [(float(np.cos(a)), float(np.sin(a))) for a in angles]
