"""Declarative parameter sweeps over the diode models, with CSV/JSON export.

A sweep is a model template plus a list of axes (explicit values or
linspace/logspace descriptors), optional coupled parameters (expressions
of the axis variables and the two critical-line functions, e.g.
``J34 = critical_j34(Delta)``), and a bath block selecting spin, heat or
fermionic transport.  Grid points are evaluated row-major over the axes,
optionally across a process pool; failed points are recorded in an error
column rather than dropped, and the same config always produces the same
table.
"""

from __future__ import annotations

import hashlib
import json
import math
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, fields as dc_fields, replace
from itertools import product
from pathlib import Path

import numpy as np

from . import __version__
from .globalbath import evaluate_heat_diode
from .jordanwigner import fermionic_current_metrics
from .liouville import decoherence_channels
from .models import ModelSpec, critical_j34, critical_j34_heat
from .observables import concurrence, evaluate_diode, fidelity_pure
from .spinops import bell_state, partial_trace

__all__ = [
    "BathConfig",
    "SweepConfig",
    "SweepTable",
    "run_sweep",
    "export",
]

_COUPLED_FUNCS = {
    "critical_j34": critical_j34,
    "critical_j34_heat": critical_j34_heat,
}

_MODEL_FIELDS = {
    "Delta",
    "delta",
    "J34",
    "h",
    "omega_global",
    "h3",
    "h4",
    "delta_prime",
    "A",
    "omega_drive",
    "gamma_S",
}

_BATH_FIELDS = {"gamma", "T", "T_C", "T_H", "dT", "secular_cutoff"}


@dataclass(frozen=True)
class BathConfig:
    """Transport mode and bath parameters shared by all grid points.

    ``mode`` is one of ``spin`` (boundary ladder baths), ``heat``
    (thermal baths under the global master equation) or ``fermion``
    (Jordan-Wigner ladder baths).  ``T`` is the optional single-spin
    decoherence lifetime (T1 = T2 = T, units of 1/J) applied to every
    site in spin mode.
    """

    mode: str = "spin"
    gamma: float = 1.0
    T: float | None = None
    T_C: float = 0.1
    T_H: float = 10.1
    dT: float | None = None
    secular_cutoff: float = 0.0

    def __post_init__(self):
        if self.mode not in ("spin", "heat", "fermion"):
            raise ValueError(f"bath.mode must be spin, heat or fermion, got {self.mode!r}")

    @property
    def hot_temperature(self) -> float:
        """T_H, or T_C + dT when a temperature difference is set."""
        return self.T_C + self.dT if self.dT is not None else self.T_H


_DEFAULT_OUTPUTS = {
    "spin": ["J_f", "J_r", "R", "C"],
    "fermion": ["J_f", "J_r", "R", "C"],
    "heat": ["K_f", "K_r", "R_Q"],
}

_KNOWN_OUTPUTS = {
    "spin": [
        "J_f",
        "J_r",
        "R",
        "C",
        "continuity_f",
        "continuity_r",
        "F_psi_minus_34_r",
        "F_psi_plus_34_r",
        "concurrence_34_r",
    ],
    "fermion": ["J_f", "J_r", "R", "C", "continuity_f", "continuity_r"],
    "heat": ["K_f", "K_r", "R_Q", "balance_f", "balance_r"],
}


@dataclass(frozen=True)
class SweepConfig:
    """A validated sweep: model template, axes, couplings, bath, outputs."""

    model: ModelSpec
    axes: tuple[tuple[str, tuple[float, ...]], ...]
    coupled: tuple[tuple[str, str], ...] = ()
    bath: BathConfig = field(default_factory=BathConfig)
    outputs: tuple[str, ...] = ()
    workers: int = 1

    def __post_init__(self):
        if not self.axes:
            raise ValueError("axes: need at least one axis")
        seen = set()
        for name, values in self.axes:
            self._check_path(f"axes.{name}", name)
            if name in seen:
                raise ValueError(f"axes.{name}: duplicate axis")
            seen.add(name)
            if len(values) == 0:
                raise ValueError(f"axes.{name}: empty value list")
        axis_names = {name for name, _ in self.axes}
        for name, expr in self.coupled:
            self._check_path(f"coupled.{name}", name)
            if name in axis_names:
                raise ValueError(f"coupled.{name}: already an axis")
            try:
                code = compile(expr, "<coupled>", "eval")
            except SyntaxError as exc:
                raise ValueError(f"coupled.{name}: {exc}") from None
            allowed = axis_names | set(_COUPLED_FUNCS)
            bad = set(code.co_names) - allowed
            if bad:
                raise ValueError(
                    f"coupled.{name}: unknown name(s) {sorted(bad)}; "
                    f"only axis variables and {sorted(_COUPLED_FUNCS)} may appear"
                )
        outputs = self.outputs or tuple(_DEFAULT_OUTPUTS[self.bath.mode])
        known = _KNOWN_OUTPUTS[self.bath.mode]
        for name in outputs:
            if name not in known:
                raise ValueError(f"outputs.{name}: unknown metric for mode {self.bath.mode}; choose from {known}")
        object.__setattr__(self, "outputs", tuple(outputs))
        if self.workers < 1:
            raise ValueError(f"workers must be >= 1, got {self.workers}")

    @staticmethod
    def _check_path(label: str, name: str) -> None:
        if name in _MODEL_FIELDS or name in _BATH_FIELDS:
            return
        if name.startswith("local_field_") and name[len("local_field_") :].isdigit():
            return
        raise ValueError(f"{label}: not a model or bath parameter")

    def canonical_json(self) -> str:
        doc = {
            "model": json.loads(self.model.to_json()),
            "axes": [[name, list(values)] for name, values in self.axes],
            "coupled": {name: expr for name, expr in self.coupled},
            "bath": {f.name: getattr(self.bath, f.name) for f in dc_fields(self.bath)},
            "outputs": list(self.outputs),
        }
        return json.dumps(doc, sort_keys=True)

    def digest(self) -> str:
        return hashlib.sha256(self.canonical_json().encode()).hexdigest()[:16]

    @classmethod
    def from_json(cls, text: str) -> "SweepConfig":
        doc = json.loads(text)
        if not isinstance(doc, dict):
            raise ValueError("sweep config must be a JSON object")
        unknown = set(doc) - {"model", "axes", "coupled", "bath", "outputs", "workers"}
        if unknown:
            raise ValueError(f"unknown config fields: {sorted(unknown)}")
        model = ModelSpec.from_json(json.dumps(doc.get("model", {})))
        axes = tuple(
            (name, _expand_axis(name, values)) for name, values in doc.get("axes", [])
        )
        coupled = tuple(sorted(doc.get("coupled", {}).items()))
        bath_doc = doc.get("bath", {})
        bad = set(bath_doc) - {f.name for f in dc_fields(BathConfig)}
        if bad:
            raise ValueError(f"bath: unknown fields {sorted(bad)}")
        bath = BathConfig(**bath_doc)
        return cls(
            model=model,
            axes=axes,
            coupled=coupled,
            bath=bath,
            outputs=tuple(doc.get("outputs", ())),
            workers=int(doc.get("workers", 1)),
        )


def _expand_axis(name: str, values) -> tuple[float, ...]:
    """Explicit list, or {linspace|logspace: [start, stop, num]}."""
    if isinstance(values, dict):
        if len(values) != 1:
            raise ValueError(f"axes.{name}: descriptor must have exactly one key")
        kind, args = next(iter(values.items()))
        if kind == "linspace":
            return tuple(float(x) for x in np.linspace(*args))
        if kind == "logspace":
            return tuple(float(x) for x in np.logspace(*args))
        raise ValueError(f"axes.{name}: unknown descriptor {kind!r}")
    return tuple(float(x) for x in values)


@dataclass
class SweepTable:
    """Rectangular sweep output: header, rows, provenance."""

    header: list[str]
    rows: list[list]
    provenance: dict

    def column(self, name: str) -> list:
        idx = self.header.index(name)
        return [row[idx] for row in self.rows]

    @classmethod
    def from_json(cls, text: str) -> "SweepTable":
        doc = json.loads(text)
        header = doc["header"]
        rows = []
        for obj in doc["rows"]:
            row = []
            for name in header:
                v = obj[name]
                if v is None and obj.get(f"{name}_infinite"):
                    v = math.inf
                row.append(v)
            rows.append(row)
        return cls(header=header, rows=rows, provenance=doc["provenance"])


def _point_model(config: SweepConfig, params: dict[str, float]) -> tuple[ModelSpec, BathConfig]:
    spec = config.model
    bath = config.bath
    for name, value in params.items():
        if name in _BATH_FIELDS:
            bath = replace(bath, **{name: value})
        elif name.startswith("local_field_"):
            idx = int(name[len("local_field_") :])
            fields = list(spec.local_fields or (0.0,) * spec.n_sites)
            if not 1 <= idx <= spec.n_sites:
                raise ValueError(f"{name}: site out of range for {spec.n_sites} sites")
            fields[idx - 1] = value
            spec = spec.replace(local_fields=tuple(fields))
        else:
            spec = spec.replace(**{name: value})
    return spec, bath


def _evaluate_point(config: SweepConfig, params: dict[str, float]) -> dict[str, float]:
    spec, bath = _point_model(config, params)
    if bath.mode == "heat":
        m = evaluate_heat_diode(
            spec,
            T_C=bath.T_C,
            T_H=bath.hot_temperature,
            gamma=bath.gamma,
            secular_cutoff=bath.secular_cutoff,
        )
        return {
            "K_f": m.K_f,
            "K_r": m.K_r,
            "R_Q": m.R_Q,
            "balance_f": m.balance[0],
            "balance_r": m.balance[1],
        }
    if bath.mode == "fermion":
        m = fermionic_current_metrics(spec, gamma=bath.gamma)
        return {
            "J_f": m.J_f,
            "J_r": m.J_r,
            "R": m.R,
            "C": m.C,
            "continuity_f": m.continuity[0],
            "continuity_r": m.continuity[1],
        }
    extra = decoherence_channels(spec.n_sites, bath.T) if bath.T is not None else ()
    m = evaluate_diode(spec, gamma=bath.gamma, extra_dissipators=extra)
    out = {
        "J_f": m.J_f,
        "J_r": m.J_r,
        "R": m.R,
        "C": m.C,
        "continuity_f": m.continuity[0],
        "continuity_r": m.continuity[1],
    }
    wanted = set(config.outputs)
    if wanted & {"F_psi_minus_34_r", "F_psi_plus_34_r", "concurrence_34_r"}:
        # entanglement diagnostics live on the middle pair of the chain
        reduced = partial_trace(m.rho_r, keep=(3, 4))
        out["F_psi_minus_34_r"] = fidelity_pure(reduced, bell_state("psi-"))
        out["F_psi_plus_34_r"] = fidelity_pure(reduced, bell_state("psi+"))
        out["concurrence_34_r"] = concurrence(reduced)
    return out


def _run_point(args) -> tuple[dict[str, float] | None, str]:
    config, params = args
    try:
        return _evaluate_point(config, params), ""
    except Exception as exc:  # recorded per-row, never dropped
        return None, f"{type(exc).__name__}: {exc}"


def _grid(config: SweepConfig):
    names = [name for name, _ in config.axes]
    for combo in product(*(values for _, values in config.axes)):
        params = dict(zip(names, combo))
        ns = dict(params)
        ns.update(_COUPLED_FUNCS)
        for cname, expr in config.coupled:
            params[cname] = float(eval(expr, {"__builtins__": {}}, ns))  # noqa: S307 - validated names only
        yield params


def run_sweep(config: SweepConfig) -> SweepTable:
    """Evaluate every grid point; row-major order over the axes."""
    points = list(_grid(config))
    args = [(config, p) for p in points]
    workers = config.workers
    if workers == 1 or len(points) <= 1:
        results = [_run_point(a) for a in args]
    else:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(_run_point, args, chunksize=1))

    param_names = [name for name, _ in config.axes] + [name for name, _ in config.coupled]
    header = param_names + list(config.outputs) + ["error"]
    rows = []
    for params, (metrics, err) in zip(points, results):
        row = [params[n] for n in param_names]
        if metrics is None:
            row.extend([math.nan] * len(config.outputs))
        else:
            row.extend(metrics[n] for n in config.outputs)
        row.append(err)
        rows.append(row)
    provenance = {"config_sha256": config.digest(), "version": __version__}
    return SweepTable(header=header, rows=rows, provenance=provenance)


def _format_cell(v) -> str:
    if isinstance(v, float):
        if math.isinf(v):
            return "inf" if v > 0 else "-inf"
        if math.isnan(v):
            return "nan"
        return format(v, ".17g")
    return str(v)


def export(table: SweepTable, fmt: str, path) -> Path:
    """Write a table as CSV (17 significant digits) or JSON row objects."""
    if not table.rows:
        raise ValueError("refusing to export an empty table")
    path = Path(path)
    if fmt == "csv":
        import csv

        with open(path, "w", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(table.header)
            for row in table.rows:
                writer.writerow([_format_cell(v) for v in row])
        return path
    if fmt == "json":
        out_rows = []
        for row in table.rows:
            obj = {}
            for name, v in zip(table.header, row):
                if isinstance(v, float) and math.isinf(v):
                    obj[name] = None
                    obj[f"{name}_infinite"] = True
                elif isinstance(v, float) and math.isnan(v):
                    obj[name] = None
                else:
                    obj[name] = v
            out_rows.append(obj)
        doc = {"header": table.header, "rows": out_rows, "provenance": table.provenance}
        with open(path, "w") as fh:
            json.dump(doc, fh, indent=1)
            fh.write("\n")
        return path
    raise ValueError(f"unknown export format {fmt!r}")


def default_workers() -> int:
    """--workers fallback: SPINDIODE_WORKERS, else 1."""
    env = os.environ.get("SPINDIODE_WORKERS")
    if env is None:
        return 1
    try:
        n = int(env)
    except ValueError as exc:
        raise ValueError(f"SPINDIODE_WORKERS must be an integer, got {env!r}") from exc
    return max(1, n)
