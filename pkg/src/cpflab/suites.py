"""Verification suites run by the ``verify`` command.

Each suite returns a list of check rows (plain dicts). A row always has a
``pass`` flag; observable rows use the fixed schema
``{observable, n, beta, kappa, epsilon, value, expected, rel_error, pass}``.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from . import cpf, fock, observables
from .config import Defaults, load_defaults
from .cpf import ComplexPointFunction, DeltaRegularization, GaussianProfile, PointSource
from .errors import ValidationError
from .field import (FieldComponent, ModeSpec, PolarizationVector, assemble_field_operator,
                    gauge_residual, solve_gauge_polarization)
from .wirtinger import (ChiralCoordinate, ScalarField2D, cr_residual, direction_independence,
                        from_complex, to_complex, wirtinger_derivative)

SUITES = ("cr", "cpf", "fock", "gauge", "observables")
SCHEMA_VERSION = 1
MEASURE_NOTE = "normalization and sandwich integrals use the scaled measure dz dz*/|xi|^2"


@dataclass(frozen=True)
class RunConfig:
    suite: str = "all"
    epsilon_list: tuple[float, ...] = (1e-3,)
    step: float = 1e-4
    n_max: int = 3
    kappa: float = 1.0
    beta: str = "both"
    output_path: str | None = None
    format: str = "json"
    defaults: Defaults = field(default_factory=load_defaults)

    def __post_init__(self):
        if self.suite not in SUITES + ("all",):
            raise ValidationError(f"unknown suite {self.suite!r}")
        eps = tuple(float(e) for e in self.epsilon_list)
        if not eps:
            raise ValidationError("epsilon list is empty")
        if any(e <= 0 for e in eps) or any(b >= a for a, b in zip(eps, eps[1:])):
            raise ValidationError("epsilon list must be positive and strictly decreasing")
        object.__setattr__(self, "epsilon_list", eps)
        if not self.step > 0:
            raise ValidationError("step must be positive")
        if not 0 <= self.n_max < self.defaults.dim - 1:
            raise ValidationError(f"n_max must lie in [0, {self.defaults.dim - 2}]")
        if not self.kappa > 0:
            raise ValidationError("kappa must be positive")
        if self.beta not in ("+1", "-1", "both"):
            raise ValidationError("beta must be +1, -1 or both")
        if self.format not in ("json", "csv"):
            raise ValidationError("format must be json or csv")

    @property
    def betas(self) -> tuple[int, ...]:
        return (1, -1) if self.beta == "both" else (int(self.beta),)

    @property
    def epsilon(self) -> float:
        return self.epsilon_list[-1]

    def as_dict(self) -> dict:
        return {
            "suite": self.suite, "epsilon_list": list(self.epsilon_list), "step": self.step,
            "n_max": self.n_max, "kappa": self.kappa, "beta": self.beta,
            "dim": self.defaults.dim, "hbar": self.defaults.hbar,
        }


def _row(check: str, value, expected, tol: float, ok: bool, **extra) -> dict:
    row = {"check": check, "value": value, "expected": expected, "tolerance": tol, "pass": bool(ok)}
    row.update(extra)
    return row


def _close(check, value, expected, tol, **extra):
    return _row(check, value, expected, tol, abs(value - expected) <= tol, **extra)


def _cx(z: complex) -> list[float]:
    return [float(np.real(z)), float(np.imag(z))]


# -- suites --------------------------------------------------------------------

def suite_cr(cfg: RunConfig) -> list[dict]:
    window = (-5.0, 5.0, -5.0, 5.0)
    at = ChiralCoordinate(1.0, 1.0, 1)
    h = cfg.step
    sq = ScalarField2D.from_complex(lambda z: z**2, 1, window)
    cube = ScalarField2D.from_complex(lambda z: z**3, 1, window)
    conj = ScalarField2D.from_complex(np.conj, 1, window)
    real = ScalarField2D.from_complex(np.real, 1, window)
    rows = [
        _close("to_complex(1,2,+1)", abs(to_complex(1, 2, 1) - (1 + 2j)), 0.0, 0.0),
        _close("from_complex(1+2i,1-2i)", float(np.hypot(*np.subtract(from_complex(1 + 2j, 1 - 2j), (1, 2)))),
               0.0, 1e-15),
        _close("d(z^2)/dz at 1+i", abs(wirtinger_derivative(sq, at, "z", h) - (2 + 2j)), 0.0, 1e-6),
        _close("cr_residual(z^3)", cr_residual(cube, at, h), 0.0, 10 * h**2),
        _close("cr_residual(z*)", cr_residual(conj, at, h), 1.0, 1e-6),
        _close("cr_residual(Re z)", cr_residual(real, at, h), 0.5, 1e-6),
        _close("direction spread z*", direction_independence(conj, at, [(1, 0), (0, 1)], h), 2.0, 1e-6),
    ]
    steps = [0.1 / 2**i for i in range(5)]
    res = [cr_residual(cube, at, s) for s in steps]
    orders = [math.log2(a / b) for a, b in zip(res, res[1:])]
    rows.append(_row("cr_residual convergence order (z^3)", min(orders), 1.9, 0.0, min(orders) >= 1.9))
    return rows


def suite_cpf(cfg: RunConfig) -> list[dict]:
    rows = []
    window = (-10.0, 10.0, -10.0, 10.0)
    reg = DeltaRegularization(cfg.epsilon)
    sq = ScalarField2D.from_complex(lambda z: z**2, 1, window)
    src = PointSource(2.0, 1.0, 1)
    rows.append(_close("sift z^2 at 2+i", abs(cpf.sift(sq, src, reg) - (3 + 4j)), 0.0, 1e-5))
    spread = abs(cpf.sift(sq, src, reg) - cpf.sift(sq, src, DeltaRegularization(cfg.epsilon, 0.0, 1.0)))
    rows.append(_close("sift direction invariance", spread, 0.0, 1e-8))
    for xi in ((1.0, 0.0), (3.0, 4.0)):
        phi = ComplexPointFunction(PointSource(*xi, 1), GaussianProfile(cfg.kappa))
        rows.append(_close(f"normalization scaled xi={xi}", cpf.normalization_check(phi, reg), 1.0, 1e-6))
        rows.append(_close(f"normalization raw xi={xi}", cpf.normalization_check(phi, reg, "raw"),
                           xi[0] ** 2 + xi[1] ** 2, 1e-6))
    for beta in cfg.betas:
        phi = ComplexPointFunction(PointSource(1.0, 0.0, beta), GaussianProfile(cfg.kappa))
        sweep = [cpf.cpf_cr_residual(phi, reg.with_epsilon(e)) for e in cfg.epsilon_list]
        monotone = all(b < a for a, b in zip(sweep, sweep[1:]))
        rows.append(_row(f"cpf_cr_residual sweep beta={beta}", sweep, "strictly decreasing", 0.0,
                         monotone, epsilons=list(cfg.epsilon_list)))
        # 1e-6 at eps = 1e-3, scaled with the eps**2 leading error
        bound = 1e-6 * max(1.0, (cfg.epsilon / 1e-3) ** 2)
        rows.append(_close(f"cpf_cr_residual beta={beta} eps={cfg.epsilon}", sweep[-1], 0.0, bound))
        psi, dpsi, _, sigma = phi.radial()
        i1, i2 = cpf.standard_integrals(psi, dpsi, sigma, reg)
        rows.append(_close(f"standard integrals antisymmetry beta={beta}", abs(abs(i1) - abs(i2)) / abs(i1),
                           0.0, 1e-8))
    state = fock.SymmetricState.identical(1, PointSource(1.0, 0.0, 1), cfg.kappa)
    harm = [cpf.contour_harmonicity_residual(state, DeltaRegularization(0.1 / 2**i)) for i in range(4)]
    rows.append(_row("contour harmonicity residual sweep", harm, "strictly decreasing", 0.0,
                     all(b < a for a, b in zip(harm, harm[1:]))))
    bare = cpf.harmonicity_residual(state, ChiralCoordinate(1.0, 0.0, 1), reg, 1e-3, constrained=False)
    rows.append(_row("harmonicity without delta (negative control)", bare, ">= 0.1", 0.0, bare >= 0.1))
    return rows


def suite_fock(cfg: RunConfig) -> list[dict]:
    alg = fock.LadderAlgebra(cfg.defaults.dim)
    eig = np.sort(np.linalg.eigvalsh(alg.number))
    vac = fock.SymmetricState.vacuum(PointSource(1.0, 0.0, 1))
    rows = [
        _close("commutator defect", fock.commutator_defect(alg), 0.0, 1e-14),
        _row("number eigenvalues", eig.tolist(), list(range(alg.dim)), 0.0,
             bool(np.array_equal(eig, np.arange(alg.dim)))),
        _row("annihilate(vacuum) scale", fock.annihilate(vac)[0], 0.0, 0.0, fock.annihilate(vac)[0] == 0.0),
    ]
    for n in range(cfg.n_max + 1):
        st = fock.SymmetricState.identical(n, PointSource(1.0, 0.0, 1))
        up, raised = fock.create(st, alg.dim)
        down, back = fock.annihilate(raised)
        rows.append(_close(f"a a^dagger scale n={n}", up * down, n + 1, 1e-12))
        rows.append(_row(f"number_of n={n}", fock.number_of(st), n, 0.0, fock.number_of(st) == n))
        rows.append(_close(f"symmetrize norm_coeff n={n}",
                           fock.SymmetricState.identical(n, PointSource(1.0, 0.0, 1)).norm_coeff,
                           math.sqrt(math.factorial(n)), 1e-12))
    return rows


def suite_gauge(cfg: RunConfig) -> list[dict]:
    rows = []
    reg = DeltaRegularization(cfg.epsilon)
    for beta in cfg.betas:
        pol = solve_gauge_polarization(beta)
        target = np.array([1, 1j * beta, 0, 0]) / math.sqrt(2)
        rows.append(_close(f"polarization beta={beta:+d}", float(np.max(np.abs(pol.array - target))), 0.0,
                           1e-12, polarization=[_cx(c) for c in pol.components]))
        state = fock.SymmetricState.identical(1, PointSource(1.0, 0.0, beta), cfg.kappa)
        comp = FieldComponent(ModeSpec(1.0, beta), state, pol, 1, cfg.epsilon)
        circ = gauge_residual(comp, (0.3, 0.1), reg, cfg.step)
        lin = gauge_residual(comp, (0.3, 0.1), reg, cfg.step, polarization=PolarizationVector((1, 0, 0, 0)))
        rows.append(_row(f"gauge selectivity beta={beta:+d}", lin / circ, ">= 100", 0.0, lin >= 100 * circ,
                         circular_residual=circ, linear_residual=lin))
    return rows


def observable_rows(cfg: RunConfig, ks=(0.5, 1.0, 2.0), tol: float = 1e-5) -> list[dict]:
    hbar = cfg.defaults.hbar
    reg = DeltaRegularization(cfg.epsilon)
    jobs = []
    for beta in cfg.betas:
        for k in ks:
            mode = ModeSpec(k, beta)
            op = assemble_field_operator([mode], fock.LadderAlgebra(cfg.defaults.dim))
            for n in range(cfg.n_max + 1):
                state = fock.SymmetricState.identical(n, PointSource(1.0, 0.0, beta), cfg.kappa, k)
                for spec in (observables.MOMENTUM, observables.ENERGY, observables.SPIN):
                    jobs.append((spec, state, mode, op))

    def run(job):
        spec, state, mode, op = job
        res = observables.expectation(spec, state, mode, op, reg, cfg.step)
        rel = res.rel_error
        return {
            "observable": spec.kind, "n": state.n, "beta": state.beta, "kappa": state.kappa,
            "epsilon": reg.epsilon, "value": res.value * hbar, "expected": res.algebraic * hbar,
            "rel_error": rel, "pass": bool(rel <= tol and abs(res.imag_part) <= 1e-10 * max(1, abs(res.value))),
        }

    with ThreadPoolExecutor() as pool:
        return list(pool.map(run, jobs))


SUITE_FUNCS = {
    "cr": suite_cr,
    "cpf": suite_cpf,
    "fock": suite_fock,
    "gauge": suite_gauge,
    "observables": observable_rows,
}


def run_suites(cfg: RunConfig) -> dict:
    """Run the configured suite(s) and assemble the report dict."""
    names = SUITES if cfg.suite == "all" else (cfg.suite,)
    with ThreadPoolExecutor() as pool:
        results = list(pool.map(lambda name: SUITE_FUNCS[name](cfg), names))
    checks = []
    for name, rows in zip(names, results):
        for row in rows:
            checks.append({"suite": name, **row})
    return {
        "schema_version": SCHEMA_VERSION,
        "suite": cfg.suite,
        "config": cfg.as_dict(),
        "notes": [MEASURE_NOTE],
        "checks": checks,
        "passed": all(c["pass"] for c in checks),
    }
