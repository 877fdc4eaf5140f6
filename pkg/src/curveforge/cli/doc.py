"""JSON system descriptions.

A document looks like::

    {"variables": ["x", "y"],
     "components": ["-y", "x"],
     "curves": ["x^2 + y^2 - 1"],
     "params": {"a": "1/2"}}

Parameters are rational strings substituted into every expression before
parsing, so the polynomial core never sees a symbol it does not know.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path

from ..brackets import VectorField
from ..ratpoly import MPoly, to_str
from .parse import parse_poly, parse_rational, substitute_params

_KEYS = {"variables", "components", "curves", "params", "labels"}


class DocError(ValueError):
    pass


@dataclass(frozen=True)
class SystemDoc:
    variables: tuple
    components: tuple
    curves: tuple = ()
    params: dict = field(default_factory=dict)
    labels: tuple = ()

    def __post_init__(self):
        object.__setattr__(self, "variables", tuple(self.variables))
        object.__setattr__(self, "components", tuple(self.components))
        object.__setattr__(self, "curves", tuple(self.curves))
        object.__setattr__(self, "labels", tuple(self.labels))
        if not self.variables:
            raise DocError("no variables")
        if len(set(self.variables)) != len(self.variables):
            raise DocError("repeated variable name")
        if len(self.components) != len(self.variables):
            raise DocError(f"{len(self.components)} components for {len(self.variables)} variables")
        clash = set(self.params) & set(self.variables)
        if clash:
            raise DocError(f"parameter names clash with variables: {sorted(clash)}")
        if self.labels and len(self.labels) != len(self.curves):
            raise DocError("one label per curve")
        for k, v in self.params.items():
            try:
                parse_rational(v)
            except ValueError as exc:
                raise DocError(f"parameter {k}: {exc}") from None

    @classmethod
    def from_json(cls, obj: dict) -> "SystemDoc":
        if not isinstance(obj, dict):
            raise DocError("a system document is a JSON object")
        extra = set(obj) - _KEYS
        if extra:
            raise DocError(f"unknown keys: {sorted(extra)}")
        for key in ("variables", "components"):
            if key not in obj:
                raise DocError(f"missing key {key!r}")
        return cls(obj["variables"], obj["components"], obj.get("curves", ()),
                   {k: str(v) for k, v in obj.get("params", {}).items()}, obj.get("labels", ()))

    @classmethod
    def load(cls, path) -> "SystemDoc":
        try:
            obj = json.loads(Path(path).read_text())
        except json.JSONDecodeError as exc:
            raise DocError(f"{path}: invalid JSON: {exc}") from None
        return cls.from_json(obj)

    @classmethod
    def from_field(cls, v: VectorField, curves=(), labels=()) -> "SystemDoc":
        return cls(v.variables, tuple(to_str(c) for c in v.components),
                   tuple(to_str(g) for g in curves), {}, tuple(labels))

    def to_json(self) -> dict:
        out = {"variables": list(self.variables), "components": list(self.components)}
        if self.curves:
            out["curves"] = list(self.curves)
        if self.labels:
            out["labels"] = list(self.labels)
        if self.params:
            out["params"] = dict(self.params)
        return out

    def parse(self, src: str) -> MPoly:
        return parse_poly(substitute_params(src, self.params), self.variables)

    def field(self) -> VectorField:
        return VectorField(self.variables, tuple(self.parse(c) for c in self.components))

    def curve_polys(self) -> list:
        return [self.parse(c) for c in self.curves]

    def curve_labels(self) -> list:
        return list(self.labels) if self.labels else [f"g{i}" for i in range(len(self.curves))]
