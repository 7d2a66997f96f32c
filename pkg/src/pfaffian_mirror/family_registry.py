"""Family records shipped as one JSON document per Calabi-Yau family."""
from __future__ import annotations

import json
import os
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from importlib import resources
from pathlib import Path
from typing import Any

from .geometry import GradedResolution, Poly, SkewPolyMatrix
from .theta_operator import ThetaOperator
from .periods import period_series
from .exact_series import Series

__all__ = [
    "REGISTRY_ENV",
    "RegistryError",
    "Invariants",
    "FamilySpec",
    "registry_path",
    "list_families",
    "get_family",
    "closed_form_period",
]

REGISTRY_ENV = "PFAFFIAN_MIRROR_REGISTRY"


class RegistryError(KeyError):
    pass


def _frac(v):
    return None if v is None else Fraction(v)


@dataclass(frozen=True)
class Invariants:
    deg: Fraction | None = None
    c2H: Fraction | None = None
    h11: int | None = None
    h12: int | None = None
    chi: Fraction | None = None

    @classmethod
    def from_json(cls, doc: dict) -> "Invariants":
        h11 = doc.get("h11")
        h12 = doc.get("h12")
        inv = cls(
            _frac(doc.get("deg")),
            _frac(doc.get("c2H")),
            None if h11 is None else int(h11),
            None if h12 is None else int(h12),
            _frac(doc.get("chi")),
        )
        if inv.h11 is not None and inv.h12 is not None and inv.chi is not None:
            if inv.chi != 2 * (inv.h11 - inv.h12):
                raise RegistryError(f"chi={inv.chi} is not 2(h11 - h12)")
        return inv

    def to_json(self) -> dict:
        return {k: (None if v is None else str(v)) for k, v in self.__dict__.items()}


@dataclass(frozen=True)
class FamilySpec:
    name: str
    description: str
    weights: tuple[int, ...] | None
    bundle_twists: tuple[int, ...] | None
    t: int | None
    period_rule: str | None
    period_status: str
    operator: ThetaOperator | None
    invariants: Invariants
    effective_power: int | None
    effective_power_status: str
    i2_resolution: GradedResolution | None
    mirror_variables: tuple[str, ...] = ()
    mirror_matrix_doc: Any = None
    ideal_generators_doc: Any = None
    disc_choice: tuple[Fraction, ...] | None = None
    transforms: dict = field(default_factory=dict)
    printed_operators: dict = field(default_factory=dict)
    source: dict = field(default_factory=dict)
    virtual: dict = field(default_factory=dict)
    golden: dict = field(default_factory=dict)
    notes: tuple[str, ...] = ()
    known_discrepancies: tuple[str, ...] = ()
    raw: dict = field(default_factory=dict, repr=False, compare=False)

    @property
    def mirror_matrix(self) -> SkewPolyMatrix | None:
        if self.mirror_matrix_doc is None:
            return None
        return SkewPolyMatrix.from_json(self.mirror_matrix_doc, self.mirror_variables)

    @property
    def ideal_generators(self) -> list[Poly] | None:
        if self.ideal_generators_doc is None:
            return None
        return [Poly.from_terms(g, self.mirror_variables) for g in self.ideal_generators_doc]

    def transform_steps(self, recipe: str) -> list:
        try:
            steps = self.transforms[recipe]
        except KeyError:
            raise RegistryError(f"{self.name} has no transform recipe {recipe!r}") from None
        return [_step(x) for x in steps]

    @classmethod
    def from_json(cls, doc: dict) -> "FamilySpec":
        op = doc.get("operator")
        amb = doc.get("weights")
        mm = doc.get("mirror_matrix") or {}
        period = doc.get("period_rule") or {}
        eff = doc.get("effective_power") or {}
        i2 = doc.get("i2_resolution")
        disc = doc.get("disc_choice")
        return cls(
            name=doc["name"],
            description=doc.get("description", ""),
            weights=None if amb is None else tuple(int(w) for w in amb),
            bundle_twists=None if doc.get("bundle_twists") is None else tuple(int(a) for a in doc["bundle_twists"]),
            t=None if doc.get("t") is None else int(doc["t"]),
            period_rule=period.get("name"),
            period_status=period.get("status", "none"),
            operator=None if op is None else ThetaOperator.from_json(op),
            invariants=Invariants.from_json(doc.get("invariants", {})),
            effective_power=None if eff.get("value") is None else int(eff["value"]),
            effective_power_status=eff.get("status", "none"),
            i2_resolution=None if i2 is None else GradedResolution.from_json(i2),
            mirror_variables=tuple(mm.get("variables", ())),
            mirror_matrix_doc=mm.get("entries"),
            ideal_generators_doc=doc.get("ideal_generators"),
            disc_choice=None if disc is None else tuple(Fraction(a) for a in disc["polynomial"]),
            transforms=dict(doc.get("transforms", {})),
            printed_operators={k: ThetaOperator.from_json(v) for k, v in doc.get("printed_operators", {}).items()},
            source=dict(doc.get("source", {})),
            virtual=dict(doc.get("virtual", {})),
            golden=dict(doc.get("golden", {})),
            notes=tuple(doc.get("notes", ())),
            known_discrepancies=tuple(doc.get("known_discrepancies", ())),
            raw=doc,
        )


def _step(s) -> tuple:
    if isinstance(s, str):
        return (s,)
    kind, *rest = s
    return (kind, *(Fraction(v) for v in rest))


def registry_path() -> Path:
    override = os.environ.get(REGISTRY_ENV)
    if override:
        return Path(override)
    return Path(str(resources.files("pfaffian_mirror") / "data" / "families"))


@lru_cache(maxsize=None)
def _load(path: str) -> dict[str, FamilySpec]:
    out = {}
    for f in sorted(Path(path).glob("*.json")):
        spec = FamilySpec.from_json(json.loads(f.read_text()))
        out[spec.name] = spec
    return out


def list_families() -> list[str]:
    return sorted(_load(str(registry_path())))


def get_family(name: str) -> FamilySpec:
    fams = _load(str(registry_path()))
    try:
        return fams[name]
    except KeyError:
        raise RegistryError(f"unknown family {name!r}; known: {', '.join(sorted(fams))}") from None


def closed_form_period(spec: FamilySpec | str, order: int = 30) -> Series:
    if isinstance(spec, str):
        spec = get_family(spec)
    if spec.period_rule is None:
        raise RegistryError(f"{spec.name} has no closed-form period")
    return period_series(spec.period_rule, order)
