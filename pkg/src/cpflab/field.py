"""Plane-wave modes along x3, the four-way constrained field, the Lorenz-gauge
polarization solve and the single-mode field operator.

Units: c = hbar = 1. Polarization 4-vectors are stored in the order
``(e1, e2, e3, e0)`` (spatial components first, time component last), so the
gauge solution reads ``(1, i*beta, 0, 0)/sqrt(2)``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from . import cpf
from .config import DEFAULTS
from .cpf import DeltaRegularization
from .errors import DomainError, ValidationError
from .fock import LadderAlgebra, SymmetricState, annihilate, create
from .wirtinger import check_beta

_DISPERSION_TOL = 1e-12


@dataclass(frozen=True)
class ModeSpec:
    k: float
    beta: int = 1
    amplitude: complex = 1.0
    omega: float | None = None
    on_shell: bool = field(default=True, repr=False)

    def __post_init__(self):
        object.__setattr__(self, "beta", check_beta(self.beta))
        omega = abs(self.k) if self.omega is None else float(self.omega)
        if not omega > 0:
            raise ValidationError("omega must be positive")
        if self.on_shell and abs(omega - abs(self.k)) > _DISPERSION_TOL:
            raise ValidationError(f"omega = {omega} violates omega = |k| = {abs(self.k)}")
        object.__setattr__(self, "omega", omega)

    @classmethod
    def off_shell(cls, k: float, omega: float, beta: int = 1, amplitude: complex = 1.0):
        """A mode that deliberately breaks the dispersion relation (for negative controls)."""
        return cls(k, beta, amplitude, omega, on_shell=False)

    @property
    def measure(self) -> float:
        return 1.0 / math.sqrt(2.0 * self.omega)


def plane_wave(mode: ModeSpec, x3, t, measure: bool = False):
    """``exp(i(k x3 - omega t))``, times ``1/sqrt(2 omega)`` if ``measure``."""
    phase = np.exp(1j * (mode.k * np.asarray(x3) - mode.omega * np.asarray(t)))
    return phase * mode.measure if measure else phase


@dataclass(frozen=True)
class PolarizationVector:
    components: tuple[complex, complex, complex, complex]

    def __post_init__(self):
        comps = tuple(complex(c) for c in self.components)
        if len(comps) != 4:
            raise ValidationError("polarization needs four components")
        object.__setattr__(self, "components", comps)

    @classmethod
    def transverse(cls, e1: complex, e2: complex) -> "PolarizationVector":
        return cls((e1, e2, 0.0, 0.0))

    @property
    def e1(self) -> complex:
        return self.components[0]

    @property
    def e2(self) -> complex:
        return self.components[1]

    @property
    def e3(self) -> complex:
        return self.components[2]

    @property
    def e0(self) -> complex:
        return self.components[3]

    @property
    def array(self) -> np.ndarray:
        return np.array(self.components, dtype=complex)

    @property
    def norm(self) -> float:
        return float(np.linalg.norm(self.array))

    def conj(self) -> "PolarizationVector":
        return PolarizationVector(tuple(np.conj(self.array)))

    def is_circular(self, beta: int, tol: float = 1e-12) -> bool:
        return (abs(self.e0) <= tol and abs(self.e3) <= tol
                and abs(self.e2 - 1j * beta * self.e1) <= tol and abs(self.norm - 1) <= tol)


def solve_gauge_polarization(beta: int) -> PolarizationVector:
    """Unit transverse polarization that removes the unpaired gauge term.

    With ``e0 = e3 = 0`` the gauge divergence of a chirality-``beta``
    component splits as ``e1 d1 + e2 d2 = A (d1 + i beta d2) + B (d1 - i beta d2)``
    with ``B = (e1 + i beta e2)/2``. The first operator is the C-R operator
    that annihilates the particle state; the second is not. Solving ``B = 0``
    is a one-row null-space problem. Phase is fixed by ``e1`` real positive.
    """
    beta = check_beta(beta)
    row = np.array([[1.0, 1j * beta]])
    _, _, vh = np.linalg.svd(row)
    null = vh[-1].conj()
    null = null / np.linalg.norm(null)
    null = null * np.exp(-1j * np.angle(null[0]))
    e1 = complex(null[0].real, 0.0)
    return PolarizationVector.transverse(e1, complex(null[1]))


# -- field components --------------------------------------------------------

@dataclass(frozen=True)
class FieldComponent:
    """One of ``A^{beta +}`` (``energy_sign=+1``) or ``A^{beta -}`` (``-1``).

    Positive energy: ``a Phi eps exp(+i theta) / sqrt(2 omega)``.
    Negative energy: ``a* conj(Phi) conj(eps) exp(-i theta) / sqrt(2 omega)``.
    ``window`` bounds ``(x3, t)`` as ``(x3_min, x3_max, t_min, t_max)``.
    """

    mode: ModeSpec
    state: SymmetricState
    polarization: PolarizationVector
    energy_sign: int = 1
    epsilon: float = DEFAULTS.epsilon
    amplitude: complex | None = None
    window: tuple[float, float, float, float] | None = None

    def __post_init__(self):
        if self.energy_sign not in (1, -1):
            raise ValidationError("energy_sign must be +1 or -1")
        if self.state.beta != self.mode.beta:
            raise ValidationError("state and mode chirality differ")

    @property
    def beta(self) -> int:
        return self.mode.beta

    @property
    def effective_beta(self) -> int:
        """Chirality of the transverse factor; conjugation flips it."""
        return self.mode.beta * self.energy_sign

    @property
    def coefficient(self) -> complex:
        a = self.mode.amplitude if self.amplitude is None else self.amplitude
        return complex(a) if self.energy_sign > 0 else complex(a).conjugate()

    def polarization_array(self) -> np.ndarray:
        eps = self.polarization.array
        return eps if self.energy_sign > 0 else eps.conj()

    def require(self, x3, t, margin: float = 0.0) -> None:
        if self.window is None:
            return
        x3a, x3b, ta, tb = self.window
        if not (x3a <= x3 - margin and x3 + margin <= x3b and ta <= t - margin and t + margin <= tb):
            raise DomainError(f"(x3, t) = ({x3}, {t}) outside window {self.window}")

    def longitudinal(self, x3, t):
        """Scalar factor ``coefficient * phase / sqrt(2 omega)``."""
        phase = plane_wave(self.mode, x3, t, measure=True)
        return self.coefficient * (phase if self.energy_sign > 0 else np.conj(phase))

    def transverse(self, x1, x2):
        phi = self.state.evaluate(x1, x2, self.epsilon)
        return phi if self.energy_sign > 0 else np.conj(phi)

    def __call__(self, x1, x2, x3, t) -> np.ndarray:
        scalar = self.longitudinal(x3, t) * self.transverse(x1, x2)
        return np.multiply.outer(scalar, self.polarization_array())


class Superposition:
    """Sum of field components, callable like a single component."""

    def __init__(self, components: Iterable):
        self.components = list(components)

    def __call__(self, x1, x2, x3, t):
        return sum(c(x1, x2, x3, t) for c in self.components)

    def require(self, x3, t, margin: float = 0.0) -> None:
        for c in self.components:
            c.require(x3, t, margin)


COMPONENT_KEYS = ((1, 1), (-1, 1), (1, -1), (-1, -1))  # (beta, energy_sign)


@dataclass(frozen=True)
class ConstrainedField:
    """``A^c = A^{++} + A^{-+} + A^{+-} + A^{--}`` keyed by (beta, energy sign)."""

    components: dict

    def __post_init__(self):
        for key, comp in self.components.items():
            if key not in COMPONENT_KEYS:
                raise ValidationError(f"unknown component key {key}")
            if (comp.beta, comp.energy_sign) != key:
                raise ValidationError(f"component stored under {key} has the wrong labels")

    @classmethod
    def from_states(cls, entries: dict, epsilon: float = DEFAULTS.epsilon) -> "ConstrainedField":
        """Build from ``{beta: (mode, state_r, state_s, polarization)}``.

        ``state_r`` feeds the positive-energy part and ``state_s`` the
        negative-energy part; the two occupancies may differ.
        """
        comps = {}
        for beta, (mode, state_r, state_s, pol) in entries.items():
            pol = pol or solve_gauge_polarization(beta)
            comps[(beta, 1)] = FieldComponent(mode, state_r, pol, 1, epsilon)
            comps[(beta, -1)] = FieldComponent(mode, state_s, pol, -1, epsilon)
        return cls(comps)

    def component(self, beta: int, energy_sign: int):
        return self.components.get((beta, energy_sign))

    def __call__(self, x1, x2, x3, t) -> np.ndarray:
        out = np.zeros(np.broadcast(np.asarray(x1), np.asarray(x2)).shape + (4,), dtype=complex)
        for key in COMPONENT_KEYS:
            comp = self.components.get(key)
            if comp is not None:
                out = out + comp(x1, x2, x3, t)
        return out

    def total(self, x1, x2, x3, t) -> np.ndarray:
        """Direct evaluation of the mode sum without going through the components."""
        out = 0
        for beta in (1, -1):
            pos, neg = self.components.get((beta, 1)), self.components.get((beta, -1))
            for comp in (pos, neg):
                if comp is None:
                    continue
                phase = np.exp(1j * comp.energy_sign * (comp.mode.k * x3 - comp.mode.omega * t))
                phi = comp.state.evaluate(x1, x2, comp.epsilon)
                if comp.energy_sign < 0:
                    phi = np.conj(phi)
                scalar = comp.coefficient * phi * phase / math.sqrt(2 * comp.mode.omega)
                out = out + np.multiply.outer(scalar, comp.polarization_array())
        return np.asarray(out, dtype=complex)


# -- residual checks ---------------------------------------------------------

def wave_equation_residual(component, at: Sequence[float], step: float = 1e-3) -> float:
    """Finite-difference ``|d3^2 A - dt^2 A|`` (max over mu) at ``(x1, x2, x3, t)``.

    The transverse Laplacian is not included here; the transverse factor is
    checked separately by the harmonicity residual of the state.
    """
    x1, x2, x3, t = at
    component.require(x3, t, margin=step)
    centre = component(x1, x2, x3, t)
    d33 = (component(x1, x2, x3 + step, t) - 2 * centre + component(x1, x2, x3 - step, t)) / step**2
    dtt = (component(x1, x2, x3, t + step) - 2 * centre + component(x1, x2, x3, t - step)) / step**2
    return float(np.max(np.abs(d33 - dtt)))


def _transverse_integrals(state: SymmetricState, reg: DeltaRegularization):
    psi, dpsi, _, sigma = state.radial()
    first, second = cpf.standard_integrals(psi, dpsi, sigma, reg)
    defect = cpf.cr_defect(psi, dpsi, sigma, reg)
    return first, second, defect, psi, sigma


def cr_constraint_residual(component: FieldComponent, at: Sequence[float],
                           reg: DeltaRegularization | None = None, step: float = DEFAULTS.step,
                           operator_beta: int | None = None) -> float:
    """C-R operator of chirality ``operator_beta`` applied to a component.

    The longitudinal factor is constant across the transverse plane, so the
    residual is ``|longitudinal| * max|eps_mu|`` times the contour defect of
    the state: the matched defect when the operator chirality equals the
    component's transverse chirality, ``|I1 - I2|`` otherwise.
    """
    reg = reg or DeltaRegularization(component.epsilon)
    x3, t = at
    component.require(x3, t, margin=step)
    op_beta = component.effective_beta if operator_beta is None else check_beta(operator_beta)
    if component.state.n == 0:
        return 0.0
    first, second, defect, _, _ = _transverse_integrals(component.state, reg)
    transverse = defect if op_beta == component.effective_beta else abs(first - second)
    scale = abs(component.longitudinal(x3, t)) * float(np.max(np.abs(component.polarization_array())))
    return float(scale * transverse)


def gauge_residual(component: FieldComponent, at: Sequence[float],
                   reg: DeltaRegularization | None = None, step: float = DEFAULTS.step,
                   polarization: PolarizationVector | None = None) -> float:
    """Lorenz-gauge divergence ``d1 A1 + d2 A2 + d3 A3 - dt A0`` of a component.

    Transverse part: ``e1 d1 + e2 d2 = A*(C-R operator) + B*(anti C-R operator)``
    on the state, bounded by ``|A| * defect + |B| * |I1 - I2|`` from the
    contour integrals. Longitudinal part: central differences of the
    plane-wave factor at ``at = (x3, t)`` times the sifted state value.
    ``polarization`` overrides the component's own vector.
    """
    reg = reg or DeltaRegularization(component.epsilon)
    x3, t = at
    component.require(x3, t, margin=step)
    eps = component.polarization_array() if polarization is None else (
        polarization.array if component.energy_sign > 0 else polarization.array.conj())
    e1, e2, e3, e0 = eps
    beta = component.effective_beta
    scale = abs(component.coefficient) / math.sqrt(2 * component.mode.omega)
    if scale == 0.0:
        return 0.0

    if component.state.n == 0:
        transverse, sifted = 0.0, 1.0
    else:
        first, second, defect, psi, sigma = _transverse_integrals(component.state, reg)
        paired = (e1 - 1j * beta * e2) / 2
        unpaired = (e1 + 1j * beta * e2) / 2
        transverse = abs(paired) * defect + abs(unpaired) * abs(first - second)
        sifted = float(psi(sigma))

    def lon(x3_, t_):
        return component.longitudinal(x3_, t_)

    d3 = (lon(x3 + step, t) - lon(x3 - step, t)) / (2 * step)
    dt = (lon(x3, t + step) - lon(x3, t - step)) / (2 * step)
    longitudinal = abs((e3 * d3 - e0 * dt) * sifted)
    return float(scale * transverse + longitudinal)


# -- field operator ----------------------------------------------------------

@dataclass(frozen=True)
class FieldOperator:
    """Discrete-mode field operator on one truncated Fock algebra.

    The (2 pi)^(-3/2) measure constant is left out; each mode carries
    ``1/sqrt(2 omega)``.
    """

    modes: tuple[ModeSpec, ...]
    algebra: LadderAlgebra
    polarizations: tuple[PolarizationVector, ...]

    def _modes(self, mode_index):
        idx = range(len(self.modes)) if mode_index is None else [mode_index]
        return [(self.modes[i], self.polarizations[i]) for i in idx]

    def creation_coefficient(self, x3, t, mode_index: int = 0) -> np.ndarray:
        """4-vector multiplying ``a^dagger``: ``eps exp(i theta) / sqrt(2 omega)``."""
        mode, pol = self.modes[mode_index], self.polarizations[mode_index]
        return pol.array * plane_wave(mode, x3, t, measure=True)

    def annihilation_coefficient(self, x3, t, mode_index: int = 0) -> np.ndarray:
        return np.conj(self.creation_coefficient(x3, t, mode_index))

    def matrix(self, mu: int, x3: float, t: float, mode_index: int | None = None) -> np.ndarray:
        """Operator-valued component ``mu`` (storage order e1, e2, e3, e0) at ``(x3, t)``."""
        out = np.zeros((self.algebra.dim, self.algebra.dim), dtype=complex)
        for i, _ in enumerate(self.modes):
            if mode_index is not None and i != mode_index:
                continue
            c = self.creation_coefficient(x3, t, i)[mu]
            out += c * self.algebra.create + np.conj(c) * self.algebra.annihilate
        return out

    def hermiticity_defect(self, x3: float, t: float) -> float:
        return max(float(np.max(np.abs(m - m.conj().T)))
                   for m in (self.matrix(mu, x3, t) for mu in range(4)))

    def apply(self, state: SymmetricState, x3, t, mode_index: int = 0):
        """Terms ``(coefficient 4-vector, state)`` of the operator acting on ``state``.

        Truncation errors from the raising branch propagate.
        """
        terms = []
        up_scale, up = create(state, self.algebra.dim)
        terms.append((up_scale * self.creation_coefficient(x3, t, mode_index), up))
        down_scale, down = annihilate(state)
        if down_scale != 0.0:
            terms.append((down_scale * self.annihilation_coefficient(x3, t, mode_index), down))
        return terms

    def evaluate_on_state(self, state: SymmetricState, x1, x2, x3, t,
                          epsilon: float = DEFAULTS.epsilon, mode_index: int = 0) -> np.ndarray:
        """Spatially evaluate the operator applied to ``state``."""
        out = 0
        for coeff, st in self.apply(state, x3, t, mode_index):
            out = out + np.multiply.outer(st.evaluate(x1, x2, epsilon), coeff)
        return np.asarray(out, dtype=complex)


def assemble_field_operator(modes: Sequence[ModeSpec], algebra: LadderAlgebra | None = None,
                            polarizations: Sequence[PolarizationVector] | None = None) -> FieldOperator:
    modes = tuple(modes)
    if not modes:
        raise ValidationError("need at least one mode")
    algebra = algebra or LadderAlgebra()
    if polarizations is None:
        polarizations = tuple(solve_gauge_polarization(m.beta) for m in modes)
    if len(polarizations) != len(modes):
        raise ValidationError("one polarization per mode is required")
    return FieldOperator(modes, algebra, tuple(polarizations))


def inferred_amplitudes(state: SymmetricState) -> tuple[float, float]:
    """Amplitudes implied by identifying ``a Phi^r`` with ``a^dagger |n>`` and
    ``a* Phi^s*`` with ``a |n>``: ``(sqrt(n+1), sqrt(n))``."""
    return math.sqrt(state.n + 1), math.sqrt(state.n)


def identified_field(state: SymmetricState, mode: ModeSpec, polarization: PolarizationVector | None = None,
                     epsilon: float = DEFAULTS.epsilon) -> ConstrainedField:
    """Classical constrained field whose components are fixed by the operator identities.

    Positive part: amplitude ``sqrt(n+1)`` with occupancy ``r = n+1``.
    Negative part: amplitude ``sqrt(n)`` with occupancy ``s = n-1`` (absent for the vacuum).
    """
    if state.beta != mode.beta:
        raise ValidationError("state and mode chirality differ")
    pol = polarization or solve_gauge_polarization(mode.beta)
    a_r, a_s = inferred_amplitudes(state)
    comps = {(mode.beta, 1): FieldComponent(mode, state.with_occupancy(state.n + 1), pol, 1,
                                            epsilon, a_r)}
    if state.n > 0:
        comps[(mode.beta, -1)] = FieldComponent(mode, state.with_occupancy(state.n - 1), pol, -1,
                                                epsilon, a_s)
    return ConstrainedField(comps)


def occupancy_field(state: SymmetricState, mode: ModeSpec, polarization: PolarizationVector | None = None,
                    epsilon: float = DEFAULTS.epsilon) -> ConstrainedField:
    """Classical field of an ``n``-photon mode, amplitude ``sqrt(n)`` and ``r = s = n``.

    Zero for the vacuum; this is what field snapshots export.
    """
    pol = polarization or solve_gauge_polarization(mode.beta)
    amp = math.sqrt(state.n)
    return ConstrainedField({
        (mode.beta, 1): FieldComponent(mode, state, pol, 1, epsilon, amp),
        (mode.beta, -1): FieldComponent(mode, state, pol, -1, epsilon, amp),
    })
