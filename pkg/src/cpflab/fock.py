"""Symmetric n-photon states and truncated ladder-operator algebra.

States are kept symbolic: an occupancy plus the list of per-photon point
sources. The spatial profile only appears when a state is evaluated on the
plane or reduced to its radial profile for contour integrals.
"""

from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass, field
from functools import cached_property

import numpy as np

from . import cpf
from .config import DEFAULTS
from .cpf import ComplexPointFunction, PointSource
from .errors import TruncationError, ValidationError
from .wirtinger import ScalarField2D, check_beta


def _source_key(src: PointSource):
    return (src.xi_a, src.xi_b, src.beta)


@dataclass(frozen=True)
class SymmetricState:
    """Permutation-symmetric product of ``n`` CPFs sharing chirality and kappa.

    ``sources`` is stored in canonical (sorted) order, so states built from
    any ordering of the same components compare equal. ``reservoir`` is the
    source used when a photon is added; it defaults to the first source and
    lets the vacuum remember which mode it belongs to.
    """

    beta: int
    kappa: float = DEFAULTS.kappa
    mode_k: float = 1.0
    sources: tuple[PointSource, ...] = ()
    reservoir: PointSource | None = None

    def __post_init__(self):
        beta = check_beta(self.beta)
        object.__setattr__(self, "beta", beta)
        if not self.kappa > 0:
            raise ValidationError("kappa must be positive")
        srcs = tuple(sorted(self.sources, key=_source_key))
        if any(s.beta != beta for s in srcs):
            raise ValidationError("all sources must share the state chirality")
        object.__setattr__(self, "sources", srcs)
        reservoir = self.reservoir if self.reservoir is not None else (srcs[0] if srcs else None)
        if reservoir is not None and reservoir.beta != beta:
            raise ValidationError("reservoir source has the wrong chirality")
        object.__setattr__(self, "reservoir", reservoir)

    @classmethod
    def vacuum(cls, source: PointSource, kappa: float = DEFAULTS.kappa, mode_k: float = 1.0):
        return cls(source.beta, kappa, mode_k, (), source)

    @classmethod
    def identical(cls, n: int, source: PointSource, kappa: float = DEFAULTS.kappa,
                  mode_k: float = 1.0):
        if n < 0:
            raise ValidationError("occupancy must be non-negative")
        return cls(source.beta, kappa, mode_k, (source,) * n, source)

    @property
    def n(self) -> int:
        return len(self.sources)

    @property
    def is_identical(self) -> bool:
        return len(set(self.sources)) <= 1

    @property
    def non_standard(self) -> bool:
        """True for distinct-source states, which the field construction never uses."""
        return not self.is_identical

    @cached_property
    def norm_coeff(self) -> float:
        """Coefficient of each distinct ordered product after symmetrization.

        Every permutation that leaves the product unchanged adds one copy, so
        the coefficient is ``prod(m_i!) / sqrt(n!)`` over source multiplicities.
        """
        copies = math.prod(math.factorial(m) for m in Counter(self.sources).values())
        return copies / math.sqrt(math.factorial(self.n))

    @property
    def source(self) -> PointSource:
        if self.reservoir is None:
            raise ValidationError("state has no source")
        return self.reservoir

    def with_occupancy(self, n: int) -> "SymmetricState":
        if n < 0:
            raise ValidationError("occupancy must be non-negative")
        if not self.is_identical:
            raise ValidationError("ladder operators act on identical-photon states only")
        return SymmetricState(self.beta, self.kappa, self.mode_k, (self.source,) * n, self.reservoir)

    def evaluate(self, x1, x2, epsilon: float, constrained: bool = True):
        """Regularized ``Phi`` on the plane; the vacuum is the constant 1."""
        return cpf.state_value(self.sources, self.kappa, self.plane_coeff, x1, x2,
                               epsilon, constrained)

    @property
    def plane_coeff(self) -> float:
        # all n factors share one coordinate, so the n! permutation terms coincide
        return math.sqrt(math.factorial(self.n))

    def as_field(self, epsilon: float, constrained: bool = True, window=None) -> ScalarField2D:
        if window is None:
            half = 10.0 * max([1.0] + [s.modulus for s in self.sources]
                              + ([self.reservoir.modulus] if self.reservoir else []))
            window = (-half, half, -half, half)
        return ScalarField2D(lambda x1, x2: self.evaluate(x1, x2, epsilon, constrained), window)

    def radial(self):
        """Radial profile ``(psi, dpsi, d2psi, sigma)`` of an identical-photon state."""
        if not self.is_identical:
            raise ValidationError("radial profile is defined for identical photons only")
        return cpf.state_profile(self.n, self.kappa, self.source.modulus, self.plane_coeff)


def symmetrize(components, mode_k: float = 1.0) -> SymmetricState:
    """Build the symmetric state from a non-empty list of CPFs."""
    components = list(components)
    if not components:
        raise ValidationError("need at least one component")
    betas = {c.beta for c in components}
    kappas = {c.kappa for c in components}
    if len(betas) != 1:
        raise ValidationError("components mix chiralities")
    if len(kappas) != 1:
        raise ValidationError("components mix kappa values")
    return SymmetricState(betas.pop(), kappas.pop(), mode_k, tuple(c.source for c in components))


def annihilate(state: SymmetricState) -> tuple[float, SymmetricState]:
    """``a |n> = sqrt(n) |n-1>``; the vacuum maps to the zero vector (scale 0)."""
    if state.n == 0:
        return 0.0, state
    return math.sqrt(state.n), state.with_occupancy(state.n - 1)


def create(state: SymmetricState, dim: int | None = None) -> tuple[float, SymmetricState]:
    """``a^dagger |n> = sqrt(n+1) |n+1>``.

    With ``dim`` given, raises TruncationError when ``n + 1`` is outside the
    truncated basis ``0 .. dim-1``.
    """
    if dim is not None and state.n + 1 >= dim:
        raise TruncationError(f"truncation exceeded: n+1 = {state.n + 1} >= dim = {dim}")
    return math.sqrt(state.n + 1), state.with_occupancy(state.n + 1)


def number_of(state: SymmetricState) -> int:
    return state.n


@dataclass(frozen=True)
class LadderAlgebra:
    """Truncated single-mode Fock algebra on levels ``0 .. dim-1``."""

    dim: int = DEFAULTS.dim
    annihilate: np.ndarray = field(init=False, repr=False)
    create: np.ndarray = field(init=False, repr=False)
    number: np.ndarray = field(init=False, repr=False)

    def __post_init__(self):
        if int(self.dim) < 1:
            raise ValidationError("dim must be positive")
        a = np.diag(np.sqrt(np.arange(1, self.dim, dtype=float)), 1).astype(complex)
        adag = a.conj().T.copy()
        num = np.diag(np.arange(self.dim, dtype=float)).astype(complex)
        for m in (a, adag, num):
            m.setflags(write=False)
        object.__setattr__(self, "annihilate", a)
        object.__setattr__(self, "create", adag)
        object.__setattr__(self, "number", num)

    def basis(self, n: int) -> np.ndarray:
        if not 0 <= n < self.dim:
            raise TruncationError(f"level {n} outside truncated basis of dim {self.dim}")
        v = np.zeros(self.dim, dtype=complex)
        v[n] = 1.0
        return v

    def raise_vector(self, vec: np.ndarray) -> np.ndarray:
        """Apply ``a^dagger``, refusing to push weight past the top level."""
        if abs(vec[-1]) > 0:
            raise TruncationError("truncation exceeded: top level is occupied")
        return self.create @ vec

    def expectation(self, op: np.ndarray, n: int) -> complex:
        v = self.basis(n)
        return complex(v.conj() @ op @ v)


def commutator_defect(algebra: LadderAlgebra) -> float:
    """Largest deviation of ``[a, a^dagger]`` from the identity below the top level."""
    if algebra.dim < 2:
        raise ValidationError("dim must be at least 2")
    a, ad = algebra.annihilate, algebra.create
    comm = a @ ad - ad @ a - np.eye(algebra.dim)
    return float(np.max(np.abs(comm[:-1, :-1])))
