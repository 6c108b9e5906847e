"""Joint measurement statistics: parsing, empirical LUR evaluation, simulation.

Dataset files are JSON::

    {"dims": [NA, NB],
     "mode": "counts" | "probabilities",
     "settings": [{"label": "Lx",
                   "outcomes": [{"a": 1, "b": -1, "w": 0.33}, ...]}, ...]}

Each outcome is a pair of local eigenvalues (a on A, b on B) and a weight.
Omitted pairs have weight zero.  Setting labels refer to the operator names
of an :class:`~lurwitness.lur.LURSpec` (``spec.settings``).
"""
from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .config import DEFAULT_TOLERANCES, Tolerances
from .errors import DimMismatch, MissingSetting, NormalizationError, SchemaError, SpectrumMismatch
from .linalg import as_density, expectation
from .lur import LURReport, LURSpec, make_report

MODES = ("counts", "probabilities")


@dataclass(frozen=True)
class SettingRecord:
    label: str
    outcomes: tuple[tuple[float, float, float], ...]  # (a, b, weight)

    @property
    def weights(self) -> np.ndarray:
        return np.array([w for _, _, w in self.outcomes], dtype=float)

    @property
    def total_weight(self) -> float:
        return float(self.weights.sum())

    def probabilities(self) -> np.ndarray:
        w = self.weights
        return w / w.sum()


@dataclass(frozen=True)
class MeasurementDataset:
    dims: tuple[int, int]
    mode: str
    settings: tuple[SettingRecord, ...]

    def record(self, label: str) -> SettingRecord:
        for rec in self.settings:
            if rec.label == label:
                return rec
        raise MissingSetting(f"dataset has no setting {label!r} (has {[r.label for r in self.settings]})")

    @property
    def n_outcomes(self) -> int:
        return sum(len(r.outcomes) for r in self.settings)

    @property
    def total_shots(self) -> int | None:
        if self.mode != "counts":
            return None
        return int(round(sum(r.total_weight for r in self.settings)))

    def normalized(self) -> "MeasurementDataset":
        """Probability-mode copy; the raw counts stay on ``self``."""
        recs = tuple(
            SettingRecord(r.label, tuple((a, b, float(p)) for (a, b, _), p in zip(r.outcomes, r.probabilities())))
            for r in self.settings
        )
        return MeasurementDataset(self.dims, "probabilities", recs)

    def to_dict(self) -> dict:
        def num(x):
            x = float(f"{x:.12g}") + 0.0
            return int(x) if self.mode == "counts" and x.is_integer() else x

        return {
            "dims": list(self.dims),
            "mode": self.mode,
            "settings": [
                {
                    "label": r.label,
                    "outcomes": [{"a": float(f"{a:.12g}") + 0.0, "b": float(f"{b:.12g}") + 0.0, "w": num(w)}
                                 for a, b, w in r.outcomes],
                }
                for r in self.settings
            ],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2)

    def digest(self) -> str:
        blob = json.dumps(self.to_dict(), sort_keys=True).encode()
        return hashlib.sha256(blob).hexdigest()[:16]


def _number(x, where: str) -> float:
    if isinstance(x, bool) or not isinstance(x, (int, float)):
        raise SchemaError(f"{where} must be a number, got {x!r}")
    x = float(x)
    if not np.isfinite(x):
        raise SchemaError(f"{where} must be finite")
    return x


def parse(source, spec: LURSpec | None = None, tol: Tolerances = DEFAULT_TOLERANCES) -> MeasurementDataset:
    """Read and validate a dataset from a path, JSON text, or an already-decoded dict.

    With ``spec`` given, outcome eigenvalues are also checked against the
    spectra of the relation's local operators (see :func:`validate_against`).
    """
    if isinstance(source, dict):
        obj = source
    else:
        if isinstance(source, str) and source.lstrip()[:1] in ("{", "["):
            text = source
        else:
            text = Path(source).read_text()
        try:
            obj = json.loads(text)
        except json.JSONDecodeError as exc:
            raise SchemaError(f"dataset is not valid JSON: {exc}") from exc
    if not isinstance(obj, dict):
        raise SchemaError("dataset must be a JSON object")
    missing = {"dims", "mode", "settings"} - set(obj)
    if missing:
        raise SchemaError(f"dataset is missing keys {sorted(missing)}")
    dims = obj["dims"]
    if not (isinstance(dims, list) and len(dims) == 2 and all(isinstance(d, int) and d >= 1 for d in dims)):
        raise SchemaError(f"dims must be two positive integers, got {dims!r}")
    mode = obj["mode"]
    if mode not in MODES:
        raise SchemaError(f"mode must be one of {MODES}, got {mode!r}")
    if not isinstance(obj["settings"], list) or not obj["settings"]:
        raise SchemaError("settings must be a non-empty list")

    records = []
    seen_labels = set()
    for k, s in enumerate(obj["settings"]):
        if not isinstance(s, dict) or not isinstance(s.get("label"), str) or not isinstance(s.get("outcomes"), list):
            raise SchemaError(f"setting {k} needs a string 'label' and a list 'outcomes'")
        label = s["label"]
        if label in seen_labels:
            raise SchemaError(f"setting {label!r} appears twice")
        seen_labels.add(label)
        outcomes = []
        for j, o in enumerate(s["outcomes"]):
            if not isinstance(o, dict) or set(o) != {"a", "b", "w"}:
                raise SchemaError(f"outcome {j} of setting {label!r} must have exactly the keys a, b, w")
            a = _number(o["a"], f"{label}[{j}].a")
            b = _number(o["b"], f"{label}[{j}].b")
            w = _number(o["w"], f"{label}[{j}].w")
            if w < 0:
                raise NormalizationError(f"negative weight {w} in setting {label!r}")
            for a2, b2, _ in outcomes:
                if abs(a - a2) <= tol.spectrum_match and abs(b - b2) <= tol.spectrum_match:
                    raise SchemaError(f"outcome pair ({a}, {b}) listed twice in setting {label!r}")
            outcomes.append((a, b, w))
        total = sum(w for _, _, w in outcomes)
        if mode == "probabilities":
            if abs(total - 1.0) > tol.prob_sum:
                raise NormalizationError(f"probabilities of setting {label!r} sum to {total:.9g}, not 1")
        elif total <= 0:
            raise NormalizationError(f"setting {label!r} has no counts")
        records.append(SettingRecord(label, tuple(outcomes)))

    ds = MeasurementDataset((dims[0], dims[1]), mode, tuple(records))
    if spec is not None:
        validate_against(ds, spec, tol)
    return ds


def load(path, spec: LURSpec | None = None, tol: Tolerances = DEFAULT_TOLERANCES) -> MeasurementDataset:
    return parse(Path(path), spec, tol)


def save(ds: MeasurementDataset, path) -> None:
    Path(path).write_text(ds.to_json() + "\n")


def validate_against(ds: MeasurementDataset, spec: LURSpec, tol: Tolerances = DEFAULT_TOLERANCES) -> None:
    """Check dims, setting coverage and outcome eigenvalues against ``spec``.

    Settings the relation does not use are ignored.
    """
    if tuple(ds.dims) != tuple(spec.dims):
        raise DimMismatch(f"dataset dims {ds.dims} do not match the dims {spec.dims} of relation {spec.label!r}")
    for k, name in enumerate(spec.settings):
        rec = ds.record(name)
        spec_a = np.array(spec.obs_a.spectra[k].values)
        spec_b = np.array(spec.obs_b.spectra[k].values)
        for a, b, _ in rec.outcomes:
            for side, val, allowed in (("A", a, spec_a), ("B", b, spec_b)):
                if np.min(np.abs(allowed - val)) > tol.spectrum_match:
                    raise SpectrumMismatch(
                        f"setting {name!r}: outcome {val} on side {side} is not an eigenvalue "
                        f"(spectrum {allowed.tolist()})"
                    )


def empirical_variance(record: SettingRecord, tol: Tolerances = DEFAULT_TOLERANCES) -> float:
    """Variance of the sum variable a + b under the record's outcome distribution."""
    p = record.probabilities()
    s = np.array([a + b for a, b, _ in record.outcomes])
    mean = float(p @ s)
    val = float(p @ (s * s)) - mean * mean
    if val < 0:
        if val < -tol.variance_clamp * max(1.0, float(p @ (s * s))):
            raise ArithmeticError(f"empirical variance came out as {val:.3g}")
        val = 0.0
    return val


def evaluate_from_data(ds: MeasurementDataset, spec: LURSpec, tol: Tolerances = DEFAULT_TOLERANCES) -> LURReport:
    """LUR report from outcome statistics.

    The verdict compares the point estimate with the bound exactly as for
    density matrices; ``margin`` and ``shots`` are reported so callers can
    apply their own statistical standard.
    """
    validate_against(ds, spec, tol)
    variances = [empirical_variance(ds.record(name), tol) for name in spec.settings]
    return make_report(variances, spec, tol, source="data", shots=ds.total_shots, digest=ds.digest())


def outcome_distribution(rho, spec: LURSpec, k: int) -> list[tuple[float, float, float]]:
    """Exact P(a, b) = tr(rho Pi_a x Pi_b) for setting ``k``, over all eigenvalue pairs."""
    rho = as_density(rho)
    sa, sb = spec.obs_a.spectra[k], spec.obs_b.spectra[k]
    out = []
    for a, pa in zip(sa.values, sa.projectors):
        for b, pb in zip(sb.values, sb.projectors):
            p = expectation(rho, np.kron(pa, pb))
            out.append((a, b, max(p, 0.0)))
    return out


def simulate(rho, spec: LURSpec, shots: int | None = None, seed=None) -> MeasurementDataset:
    """Dataset a local projective measurement of each setting would record.

    ``shots=None`` gives exact probabilities; otherwise one multinomial
    sample of ``shots`` per setting, drawn in setting order from ``seed``.
    """
    rho = as_density(rho)
    na, nb = spec.dims
    if rho.dim != na * nb:
        raise DimMismatch(f"state has dim {rho.dim}, relation {spec.label!r} needs {na * nb}")
    rng = np.random.default_rng(seed)
    records = []
    for k, name in enumerate(spec.settings):
        dist = outcome_distribution(rho, spec, k)
        p = np.array([w for _, _, w in dist])
        p = p / p.sum()
        if shots is None:
            weights = p
        else:
            if shots < 1:
                raise ValueError("shots must be positive")
            weights = rng.multinomial(shots, p)
        records.append(SettingRecord(name, tuple((a, b, float(w)) for (a, b, _), w in zip(dist, weights))))
    return MeasurementDataset((na, nb), "probabilities" if shots is None else "counts", tuple(records))
