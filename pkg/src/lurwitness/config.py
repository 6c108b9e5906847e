"""Central tolerance and optimizer defaults.

Every validating constructor accepts a :class:`Tolerances` instance; the
module-level :data:`DEFAULT_TOLERANCES` is used when none is given.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, fields, replace
from pathlib import Path


@dataclass(frozen=True)
class Tolerances:
    norm: float = 1e-12  # pure-state normalization
    herm: float = 1e-10  # max elementwise |M - M^dagger|
    trace: float = 1e-10
    psd: float = 1e-9  # smallest eigenvalue may dip to -psd
    imag: float = 1e-10  # imaginary part of a Hermitian expectation value
    variance_clamp: float = 1e-12
    judge: float = 1e-9  # verdict Entangled iff total < bound - judge
    weights: float = 1e-12  # mixture weights sum
    prob_sum: float = 1e-6  # measurement probabilities sum
    spectrum_match: float = 1e-9


@dataclass(frozen=True)
class OptimizerConfig:
    restarts: int = 64
    tol: float = 1e-9
    max_iter: int = 10_000


DEFAULT_TOLERANCES = Tolerances()
DEFAULT_OPTIMIZER = OptimizerConfig()


def load_config(path: str | Path) -> tuple[Tolerances, OptimizerConfig]:
    """Read overrides from a JSON file.

    The file may contain a ``"tolerances"`` object and/or an ``"optimizer"``
    object whose keys are field names of the respective records.  Unknown
    keys are rejected.
    """
    raw = json.loads(Path(path).read_text())
    tol_over = raw.get("tolerances", {})
    opt_over = raw.get("optimizer", {})
    unknown = set(raw) - {"tolerances", "optimizer"}
    for cls, over in ((Tolerances, tol_over), (OptimizerConfig, opt_over)):
        names = {f.name for f in fields(cls)}
        unknown |= {f"{cls.__name__}.{k}" for k in set(over) - names}
    if unknown:
        raise ValueError(f"unknown config keys: {sorted(unknown)}")
    return replace(DEFAULT_TOLERANCES, **tol_over), replace(DEFAULT_OPTIMIZER, **opt_over)
