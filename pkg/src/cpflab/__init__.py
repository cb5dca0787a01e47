"""Numerical verification of complex point functions and circularly polarized photon fields."""

from .config import DEFAULTS, Defaults, load_defaults
from .cpf import (
    ComplexPointFunction,
    DeltaRegularization,
    GaussianProfile,
    PointSource,
    cpf_cr_residual,
    harmonicity_residual,
    normalization_check,
    sift,
)
from .errors import CpfLabError, DomainError, TruncationError, ValidationError
from .field import (
    ConstrainedField,
    FieldComponent,
    FieldOperator,
    ModeSpec,
    PolarizationVector,
    gauge_residual,
    solve_gauge_polarization,
    wave_equation_residual,
)
from .fock import LadderAlgebra, SymmetricState, annihilate, commutator_defect, create, symmetrize
from .observables import ENERGY, MOMENTUM, SPIN, ExpectationResult, ObservableSpec, expectation
from .wirtinger import ChiralCoordinate, ScalarField2D, cr_residual, wirtinger_derivative

__all__ = [name for name in dir() if not name.startswith("_")]
__version__ = "0.1.0"
