"""Default numerical settings, overridable from a JSON file named by
``CPF_LAB_DEFAULTS`` and then by explicit keyword overrides."""

from __future__ import annotations

import dataclasses
import json
import os
from dataclasses import dataclass

ENV_VAR = "CPF_LAB_DEFAULTS"


@dataclass(frozen=True)
class Defaults:
    epsilon: float = 1e-3
    step: float = 1e-4
    kappa: float = 1.0
    dim: int = 16
    n_quad: int = 201
    tau_factor: float = 8.0
    richardson_levels: int = 2
    tau_conj: float = 1e-9
    hbar: float = 1.0


def load_defaults(path: str | None = None, **overrides) -> Defaults:
    """Build the active defaults.

    Precedence (lowest first): built-in values, the JSON file at ``path`` or
    ``$CPF_LAB_DEFAULTS``, then ``overrides`` whose value is not None.
    """
    values = dataclasses.asdict(Defaults())
    path = path or os.environ.get(ENV_VAR)
    if path:
        with open(path) as fh:
            data = json.load(fh)
        unknown = set(data) - set(values)
        if unknown:
            raise ValueError(f"unknown default keys in {path}: {sorted(unknown)}")
        values.update(data)
    values.update({k: v for k, v in overrides.items() if v is not None})
    return Defaults(**values)


DEFAULTS = Defaults()
