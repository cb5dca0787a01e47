"""Momentum, energy and spin expectation values of symmetric photon states.

Each expectation is computed along two independent routes:

* algebraic: closed forms ``n hbar k``, ``n hbar omega`` and ``n beta hbar kappa**2``;
* quadrature: Fock contraction of the number operator in the truncated
  algebra, finite differences of the field operator's mode function, and
  nascent-delta quadrature of the transverse sandwich over the scaled
  ``zeta`` plane (``d^2 zeta = d^2 z / |xi|^2``).

Sandwich convention for the transverse integral: the bra's delta pins
``z = xi`` and the ket's delta pins ``z* = xi*`` (iterated sifting, as in the
normalization). After the bra sifts ``z``, only the ``z*`` dependence is left,
so the angular momentum operator in Wirtinger form,
``L3 = hbar beta (z d/dz - z* d/dz*)``, acts through its ``-hbar beta z* d/dz*``
half on the sandwich density ``|Phi|^2``.
"""

from __future__ import annotations

import dataclasses
import math
from dataclasses import dataclass
from typing import Iterable

import numpy as np

from .config import DEFAULTS
from .cpf import DeltaRegularization, nascent_delta_2d
from .errors import ValidationError
from .field import FieldOperator, ModeSpec
from .fock import SymmetricState
from .quadrature import gauss_legendre, richardson
from .wirtinger import ChiralCoordinate, ScalarField2D, wirtinger_grid

KINDS = ("momentum_x3", "energy", "angular_momentum_x3")


@dataclass(frozen=True)
class ObservableSpec:
    kind: str
    occupancy_modified: bool | None = None

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValidationError(f"unknown observable {self.kind!r}; expected one of {KINDS}")
        expected = self.kind != "angular_momentum_x3"
        if self.occupancy_modified is None:
            object.__setattr__(self, "occupancy_modified", expected)
        elif self.occupancy_modified != expected:
            raise ValidationError(
                f"{self.kind} is {'' if expected else 'not '}occupancy-modified")


MOMENTUM = ObservableSpec("momentum_x3")
ENERGY = ObservableSpec("energy")
SPIN = ObservableSpec("angular_momentum_x3")


@dataclass(frozen=True)
class ExpectationResult:
    value: float
    quadrature_error_estimate: float
    epsilon_used: float
    n: int
    beta: int
    kappa: float
    kind: str = ""
    algebraic: float = float("nan")
    imag_part: float = 0.0

    @property
    def rel_error(self) -> float:
        """Relative gap between the quadrature and algebraic routes."""
        if self.algebraic == 0:
            return abs(self.value)
        return abs(self.value - self.algebraic) / abs(self.algebraic)


def algebraic_expectation(spec: ObservableSpec, state: SymmetricState, mode: ModeSpec,
                          hbar: float = DEFAULTS.hbar) -> float:
    if spec.kind == "momentum_x3":
        return state.n * hbar * mode.k
    if spec.kind == "energy":
        return state.n * hbar * mode.omega
    return state.n * state.beta * hbar * state.kappa**2


# -- transverse sandwich on the zeta plane -----------------------------------

def _density_field(state: SymmetricState) -> ScalarField2D:
    window = state.as_field(1.0).window
    return ScalarField2D(lambda x1, x2: np.abs(state.evaluate(x1, x2, 1.0, constrained=False)) ** 2,
                         window)


def _l3_density(state: SymmetricState, x1, x2, epsilon: float, step: float, hbar: float,
                constrained: bool):
    rho = _density_field(state)
    z = x1 + 1j * state.beta * np.asarray(x2)
    dzbar = wirtinger_grid(rho, x1, x2, state.beta, "z*", step, order=4)
    lz = -hbar * state.beta * np.conj(z) * dzbar
    if not constrained:
        dz = wirtinger_grid(rho, x1, x2, state.beta, "z", step, order=4)
        return lz + hbar * state.beta * z * dz
    return lz * nascent_delta_2d(state.source.zeta(x1, x2) - 1.0, epsilon)


def angular_momentum_density(state: SymmetricState, at: ChiralCoordinate,
                             reg: DeltaRegularization | None = None, step: float = DEFAULTS.step,
                             hbar: float = DEFAULTS.hbar, constrained: bool = True) -> complex:
    """Pointwise spin-sandwich integrand at ``at``.

    ``constrained=False`` drops the delta and applies the full ``L3`` to
    ``|Phi|^2``; for the radial Gaussian this vanishes identically.
    """
    reg = reg or DeltaRegularization()
    if at.beta != state.beta:
        raise ValidationError("evaluation point and state have different chirality")
    if state.n == 0:
        return 0j
    return complex(_l3_density(state, np.array(at.x1), np.array(at.x2), reg.epsilon, step, hbar,
                               constrained))


def _zeta_grid(state: SymmetricState, half_width: float, n_quad: int, centre: complex = 1.0):
    s, w = gauss_legendre(half_width, n_quad)
    s1, s2 = np.meshgrid(s, s, indexing="ij")
    weights = np.outer(w, w)
    zeta = centre + s1 + 1j * s2
    z = state.source.xi * zeta
    return z.real, state.beta * z.imag, weights


def _sandwich_level(state: SymmetricState, reg: DeltaRegularization, step: float, hbar: float,
                    spin: bool) -> complex:
    x1, x2, weights = _zeta_grid(state, reg.tau0, reg.n_quad)
    delta = nascent_delta_2d(state.source.zeta(x1, x2) - 1.0, reg.epsilon)
    rho = np.abs(state.evaluate(x1, x2, reg.epsilon, constrained=False)) ** 2
    norm = np.sum(weights * rho * delta) / math.factorial(state.n)
    if not spin:
        return complex(norm)
    num = np.sum(weights * _l3_density(state, x1, x2, reg.epsilon, step, hbar, True))
    return complex(num / np.sum(weights * rho * delta))


def integrated_density(state: SymmetricState, reg: DeltaRegularization | None = None,
                       step: float = DEFAULTS.step, hbar: float = DEFAULTS.hbar,
                       constrained: bool = True, half_width: float = 4.0, n_quad: int = 201) -> complex:
    """Integral of :func:`angular_momentum_density` over the ``zeta`` plane.

    Constrained: divided by the sandwich norm, i.e. the spin expectation at
    this single width. Unconstrained: plain integral over the square
    ``|Re(zeta)|, |Im(zeta)| <= half_width`` around the origin.
    """
    reg = reg or DeltaRegularization()
    if state.n == 0:
        return 0j
    if constrained:
        return _sandwich_level(state, reg, step, hbar, spin=True)
    x1, x2, weights = _zeta_grid(state, half_width, n_quad, centre=0.0)
    return complex(np.sum(weights * _l3_density(state, x1, x2, reg.epsilon, step, hbar, False)))


# -- expectation -------------------------------------------------------------

def _phase_ratio(op: FieldOperator, kind: str, mode_index: int, step: float,
                 x3: float = 0.0, t: float = 0.0) -> complex:
    c = op.creation_coefficient(x3, t, mode_index)
    if kind == "momentum_x3":
        dc = (op.creation_coefficient(x3 + step, t, mode_index)
              - op.creation_coefficient(x3 - step, t, mode_index)) / (2 * step)
        applied = -1j * dc
    else:
        dc = (op.creation_coefficient(x3, t + step, mode_index)
              - op.creation_coefficient(x3, t - step, mode_index)) / (2 * step)
        applied = 1j * dc
    return complex(np.vdot(c, applied) / np.vdot(c, c))


def expectation(spec: ObservableSpec, state: SymmetricState, mode: ModeSpec, op: FieldOperator,
                reg: DeltaRegularization | None = None, step: float = DEFAULTS.step,
                hbar: float = DEFAULTS.hbar, levels: int | None = None,
                mode_index: int = 0) -> ExpectationResult:
    """Sandwich expectation of ``spec`` in ``state`` through the field operator.

    ``value`` is the quadrature route; ``algebraic`` is the closed form.
    Momentum and energy carry the number operator, contracted in the
    truncated algebra (raises TruncationError when ``n`` is outside it).
    """
    reg = reg or DeltaRegularization()
    if state.beta != mode.beta:
        raise ValidationError("state and mode chirality differ")
    if abs(state.mode_k - mode.k) > 1e-12:
        raise ValidationError(f"state mode k = {state.mode_k} differs from mode k = {mode.k}")
    if op.modes[mode_index] != mode:
        raise ValidationError("field operator mode does not match the requested mode")
    levels = DEFAULTS.richardson_levels if levels is None else levels

    algebraic = algebraic_expectation(spec, state, mode, hbar)
    if spec.occupancy_modified:
        occupancy = op.algebra.expectation(op.algebra.number, state.n)
        if state.n == 0:
            raw, err = 0j, 0.0
        else:
            norms = [_sandwich_level(state, r, step, hbar, spin=False) for r in reg.ladder(levels)]
            norm, err = richardson(norms) if levels else (norms[0], 0.0)
            ratio = _phase_ratio(op, spec.kind, mode_index, step)
            raw = hbar * occupancy * ratio * norm
            err = abs(raw) * (err if err == err else 0.0)
    else:
        if state.n == 0:
            raw, err = 0j, 0.0
        else:
            vals = [_sandwich_level(state, r, step, hbar, spin=True) for r in reg.ladder(levels)]
            raw, err = richardson(vals) if levels else (vals[0], 0.0)
    return ExpectationResult(
        value=float(raw.real), quadrature_error_estimate=float(err), epsilon_used=reg.epsilon,
        n=state.n, beta=state.beta, kappa=state.kappa, kind=spec.kind,
        algebraic=float(algebraic), imag_part=float(raw.imag),
    )


def kappa_sweep(state: SymmetricState, kappas: Iterable[float], mode: ModeSpec, op: FieldOperator,
                reg: DeltaRegularization | None = None, step: float = DEFAULTS.step,
                hbar: float = DEFAULTS.hbar) -> list[ExpectationResult]:
    """Spin expectation as a function of the Gaussian width constant."""
    kappas = list(kappas)
    if any(not k > 0 for k in kappas):
        raise ValidationError("kappas must be positive")
    return [expectation(SPIN, dataclasses.replace(state, kappa=k), mode, op, reg, step, hbar)
            for k in kappas]
