"""Hamiltonian variants of the boundary-driven spin-chain diode.

The reference chain is six spins with XX bonds arranged so that two
interfering paths connect the left pair to the right pair through the
middle pair (3, 4):

    H/J = X12 + (1+delta) X23 + X24 + (J34/J) X34 + X35 + X45 + X56
          + Delta Z12

with X_ij the XX exchange and Z_ij = sigma_z sigma_z.  All energies are
measured in units of J (J = 1 internally).  The other variants replace
the Z coupling by local fields, flip interference signs, add spins at
either end, add perturbations, or attach a driven shadow qubit to spin 3.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field, fields as dc_fields
from enum import Enum
from typing import NamedTuple

import numpy as np

from .spinops import (
    SIGMA_MINUS,
    SIGMA_PLUS,
    SIGMA_Z,
    Operator,
    coupling_zz,
    exchange_xx,
    site_operator,
)

__all__ = [
    "Variant",
    "Term",
    "ModelSpec",
    "build_hamiltonian",
    "critical_j34",
    "critical_j34_heat",
    "restrict_to_sites",
    "chain_ends",
    "current_bonds",
]


class Variant(Enum):
    DIODE = "Diode"
    DIODE_PERTURBED = "DiodePerturbed"
    FIELD_H1 = "FieldVariant_H1"
    SIGN_H2 = "SignVariant_H2"
    HEAT_HQ = "Heat_HQ"
    EXTENDED_MXX = "Extended_mXX"
    EXTENDED_XXM = "Extended_XXm"
    EXTENDED_XXZM = "Extended_XXZm"
    SHADOW_CORRECTED = "ShadowCorrected"
    LINEAR_REFERENCE = "LinearReference"


_N_SITES = {
    Variant.DIODE: 6,
    Variant.DIODE_PERTURBED: 6,
    Variant.FIELD_H1: 6,
    Variant.SIGN_H2: 6,
    Variant.HEAT_HQ: 6,
    Variant.EXTENDED_MXX: 7,
    Variant.EXTENDED_XXM: 7,
    Variant.EXTENDED_XXZM: 7,
    Variant.SHADOW_CORRECTED: 7,
    Variant.LINEAR_REFERENCE: 5,
}

# which numeric fields may be nonzero for each variant
_ACTIVE = {
    Variant.DIODE: {"Delta", "delta", "J34"},
    Variant.DIODE_PERTURBED: {"Delta", "delta", "J34", "h3", "h4", "delta_prime"},
    Variant.FIELD_H1: {"delta", "J34", "h"},
    Variant.SIGN_H2: {"delta", "J34", "h"},
    Variant.HEAT_HQ: {"delta", "J34", "h", "omega_global"},
    Variant.EXTENDED_MXX: {"Delta", "delta", "J34"},
    Variant.EXTENDED_XXM: {"Delta", "delta", "J34"},
    Variant.EXTENDED_XXZM: {"Delta", "delta", "J34"},
    Variant.SHADOW_CORRECTED: {"Delta", "delta", "J34", "A", "omega_drive", "gamma_S"},
    # delta and J34 do not enter the reference chain (their bonds involve
    # the removed spin); Delta, h and omega_global are all allowed so the
    # chain can serve as reference for both the spin and the heat diode.
    Variant.LINEAR_REFERENCE: {"Delta", "h", "omega_global", "delta", "J34"},
}


class Term(NamedTuple):
    """One Hamiltonian term: ``coeff`` times the named coupling.

    kind is one of ``xx`` (XX exchange), ``zz`` (sigma_z sigma_z),
    ``z`` (single-site sigma_z) or ``raise2`` (sigma_+ sigma_+ + h.c.).
    Sites are 1-based.
    """

    kind: str
    sites: tuple[int, ...]
    coeff: float


@dataclass(frozen=True)
class ModelSpec:
    """Declarative description of one Hamiltonian variant.

    All energies are in units of J.  ``local_fields``, when given, adds
    sum_i local_fields[i-1] * sigma_z^(i) on top of any variant; it must
    have one entry per site.  For ShadowCorrected, ``omega_drive=None``
    resolves to Delta + 1.2 (the empirically best drive detuning) and the
    shadow decay rate ``gamma_S`` is consumed by the dissipator builders,
    not by the Hamiltonian.
    """

    variant: Variant = Variant.DIODE
    J: float = 1.0
    Delta: float = 0.0
    delta: float = 0.0
    J34: float = 1.0
    h: float = 0.0
    omega_global: float = 0.0
    h3: float = 0.0
    h4: float = 0.0
    delta_prime: float = 0.0
    A: float = 0.1
    omega_drive: float | None = None
    gamma_S: float = 1.0
    local_fields: tuple[float, ...] | None = None

    def __post_init__(self):
        if not isinstance(self.variant, Variant):
            object.__setattr__(self, "variant", Variant(self.variant))
        if self.local_fields is not None:
            object.__setattr__(self, "local_fields", tuple(float(x) for x in self.local_fields))
        self.validate()

    @property
    def n_sites(self) -> int:
        return _N_SITES[self.variant]

    def validate(self) -> None:
        if self.J <= 0:
            raise ValueError(f"J must be positive, got {self.J}")
        active = _ACTIVE[self.variant]
        for name in ("Delta", "h", "omega_global", "h3", "h4", "delta_prime"):
            if name not in active and getattr(self, name) != 0.0:
                raise ValueError(
                    f"{self.variant.value} does not take {name} "
                    f"(got {name}={getattr(self, name)})"
                )
        # shadow-qubit knobs have nonzero defaults, so compare against those
        for name, default in (("A", 0.1), ("omega_drive", None), ("gamma_S", 1.0)):
            if name not in active and getattr(self, name) != default:
                raise ValueError(
                    f"{self.variant.value} does not take {name} "
                    f"(got {name}={getattr(self, name)})"
                )
        if self.local_fields is not None and len(self.local_fields) != self.n_sites:
            raise ValueError(
                f"local_fields needs {self.n_sites} entries, got {len(self.local_fields)}"
            )

    def resolved_omega_drive(self) -> float:
        if self.variant is not Variant.SHADOW_CORRECTED:
            raise ValueError("omega_drive only applies to ShadowCorrected")
        if self.omega_drive is None:
            return self.Delta + 1.2
        return self.omega_drive

    def replace(self, **kwargs) -> "ModelSpec":
        current = {f.name: getattr(self, f.name) for f in dc_fields(self)}
        current.update(kwargs)
        return ModelSpec(**current)

    def to_json(self) -> str:
        doc = {f.name: getattr(self, f.name) for f in dc_fields(self)}
        doc["variant"] = self.variant.value
        if doc["local_fields"] is not None:
            doc["local_fields"] = list(doc["local_fields"])
        return json.dumps(doc)

    @classmethod
    def from_json(cls, text: str) -> "ModelSpec":
        doc = json.loads(text)
        if not isinstance(doc, dict):
            raise ValueError("model document must be a JSON object")
        known = {f.name for f in dc_fields(cls)}
        unknown = set(doc) - known
        if unknown:
            raise ValueError(f"unknown model fields: {sorted(unknown)}")
        if "variant" in doc:
            doc["variant"] = Variant(doc["variant"])
        return cls(**doc)


def _diode_terms(delta: float, j34: float) -> list[Term]:
    """The seven XX bonds of the reference six-spin chain."""
    return [
        Term("xx", (1, 2), 1.0),
        Term("xx", (2, 3), 1.0 + delta),
        Term("xx", (2, 4), 1.0),
        Term("xx", (3, 4), j34),
        Term("xx", (3, 5), 1.0),
        Term("xx", (4, 5), 1.0),
        Term("xx", (5, 6), 1.0),
    ]


def _shift(terms: list[Term], offset: int) -> list[Term]:
    return [Term(t.kind, tuple(s + offset for s in t.sites), t.coeff) for t in terms]


def hamiltonian_terms(spec: ModelSpec) -> list[Term]:
    """The term list of a variant, before assembly into a matrix."""
    v = spec.variant
    if v is Variant.DIODE:
        terms = _diode_terms(spec.delta, spec.J34)
        terms.append(Term("zz", (1, 2), spec.Delta))
    elif v is Variant.DIODE_PERTURBED:
        terms = _diode_terms(spec.delta, spec.J34)
        terms.append(Term("zz", (1, 2), spec.Delta))
        terms.append(Term("z", (3,), spec.h3))
        terms.append(Term("z", (4,), spec.h4))
        terms.append(Term("xx", (4, 5), spec.delta_prime))
    elif v in (Variant.FIELD_H1, Variant.SIGN_H2, Variant.HEAT_HQ):
        terms = _diode_terms(spec.delta, spec.J34)
        if v is Variant.SIGN_H2:
            terms[1] = Term("xx", (2, 3), -(1.0 + spec.delta))
            terms[4] = Term("xx", (3, 5), -1.0)
        terms.append(Term("z", (1,), spec.h))
        terms.append(Term("z", (2,), spec.h))
        if v is Variant.HEAT_HQ and spec.omega_global != 0.0:
            terms.extend(Term("z", (i,), spec.omega_global) for i in range(1, 7))
    elif v is Variant.EXTENDED_MXX:
        terms = _diode_terms(spec.delta, spec.J34)
        terms.append(Term("zz", (1, 2), spec.Delta))
        terms.append(Term("xx", (6, 7), 1.0))
    elif v in (Variant.EXTENDED_XXM, Variant.EXTENDED_XXZM):
        terms = _shift(_diode_terms(spec.delta, spec.J34), 1)
        terms.append(Term("zz", (2, 3), spec.Delta))
        terms.append(Term("xx", (1, 2), 1.0))
        if v is Variant.EXTENDED_XXZM:
            terms.append(Term("zz", (1, 2), spec.Delta))
    elif v is Variant.SHADOW_CORRECTED:
        terms = _diode_terms(spec.delta, spec.J34)
        terms.append(Term("zz", (1, 2), spec.Delta))
        terms.append(Term("raise2", (3, 7), spec.A))
        terms.append(Term("z", (7,), -spec.resolved_omega_drive()))
    elif v is Variant.LINEAR_REFERENCE:
        # bonds (1,2),(2,4),(4,5),(5,6) of the six-spin chain survive the
        # removal of spin 3; renumbered (1,2),(2,3),(3,4),(4,5)
        terms = [
            Term("xx", (1, 2), 1.0),
            Term("xx", (2, 3), 1.0),
            Term("xx", (3, 4), 1.0),
            Term("xx", (4, 5), 1.0),
            Term("zz", (1, 2), spec.Delta),
            Term("z", (1,), spec.h),
            Term("z", (2,), spec.h),
        ]
        if spec.omega_global != 0.0:
            terms.extend(Term("z", (i,), spec.omega_global) for i in range(1, 6))
    else:
        raise ValueError(f"unhandled variant {v}")

    if spec.local_fields is not None:
        terms.extend(Term("z", (i + 1,), f) for i, f in enumerate(spec.local_fields))
    return [t for t in terms if t.coeff != 0.0]


def _assemble(n_sites: int, terms: list[Term]) -> np.ndarray:
    dim = 2**n_sites
    mat = np.zeros((dim, dim), dtype=complex)
    for kind, sites, coeff in terms:
        if kind == "xx":
            mat += coeff * exchange_xx(n_sites, *sites).matrix
        elif kind == "zz":
            mat += coeff * coupling_zz(n_sites, *sites).matrix
        elif kind == "z":
            mat += coeff * site_operator(n_sites, sites[0], SIGMA_Z).matrix
        elif kind == "raise2":
            i, j = sites
            pp = (
                site_operator(n_sites, i, SIGMA_PLUS).matrix
                @ site_operator(n_sites, j, SIGMA_PLUS).matrix
            )
            mm = (
                site_operator(n_sites, i, SIGMA_MINUS).matrix
                @ site_operator(n_sites, j, SIGMA_MINUS).matrix
            )
            mat += coeff * (pp + mm)
        else:
            raise ValueError(f"unknown term kind {kind!r}")
    return mat


def build_hamiltonian(spec: ModelSpec) -> Operator:
    """Hermitian Hamiltonian of the variant, in units of J.

    The returned Operator carries its term list in ``.terms`` so that
    sub-chains can be cut out with :func:`restrict_to_sites`.
    """
    terms = hamiltonian_terms(spec)
    return Operator(_assemble(spec.n_sites, terms), terms=tuple(terms))


def critical_j34(Delta):
    """Interface coupling at which the diode closes, as a function of Delta.

    The closing resonance follows J34 = -(Delta + 1.3) for Delta > 0 and
    the mirrored branch (-Delta + 1.3) for Delta < 0; at Delta = 0 the
    positive-Delta branch limit -1.3 is returned.  Accepts scalars or
    arrays.  The line is empirical: the true ridge drifts slowly with
    delta, so sweeps should scan a window around it.
    """
    d = np.asarray(Delta, dtype=float)
    out = np.where(d < 0.0, -d + 1.3, -(d + 1.3))
    if out.ndim == 0:
        return float(out)
    return out


def critical_j34_heat(h):
    """Closing line of the local-field (heat) variant: J34 = h + 1.3."""
    hh = np.asarray(h, dtype=float)
    out = hh + 1.3
    if out.ndim == 0:
        return float(out)
    return out


def restrict_to_sites(H: Operator, sites) -> Operator:
    """Sub-Hamiltonian with only the terms fully supported on ``sites``.

    ``sites`` must be a contiguous 1-based window, e.g. [1, 2, 3, 4];
    couplings crossing the cut are dropped and the kept sites are
    renumbered 1..len(sites).
    """
    if H.terms is None:
        raise ValueError("operator carries no term list; build it with build_hamiltonian")
    window = list(sites)
    if window != list(range(window[0], window[0] + len(window))):
        raise ValueError(f"sites must be contiguous, got {window}")
    relabel = {s: k + 1 for k, s in enumerate(window)}
    kept = [
        Term(t.kind, tuple(relabel[s] for s in t.sites), t.coeff)
        for t in H.terms
        if all(s in relabel for s in t.sites)
    ]
    return Operator(_assemble(len(window), kept), terms=tuple(kept))


def chain_ends(spec: ModelSpec) -> tuple[int, int]:
    """The two bath-coupled sites (hot end first under forward bias)."""
    v = spec.variant
    if v in (Variant.EXTENDED_MXX, Variant.EXTENDED_XXM, Variant.EXTENDED_XXZM):
        return (1, 7)
    if v is Variant.LINEAR_REFERENCE:
        return (1, 5)
    # ShadowCorrected keeps the baths on the six-spin chain; the shadow
    # qubit has its own decay channel
    return (1, 6)


def current_bonds(spec: ModelSpec) -> tuple[tuple[int, int], tuple[int, int]]:
    """First and last XX bond of the chain (where currents are measured)."""
    first, last = chain_ends(spec)
    return ((first, first + 1), (last - 1, last))
