"""Fixture gallery: worked examples stored as data and re-verified on demand.

Each record carries the identity as printed and, when that fails, a
re-derived identity.  A record's observed status is

* ``verified`` if the printed identity holds at every sample,
* ``known-discrepancy`` if only the re-derived one holds,
* ``unresolved`` otherwise.

A run is clean when every observed status equals the recorded one.
"""

from __future__ import annotations

import json
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from decimal import Decimal, localcontext
from fractions import Fraction
from importlib import resources
from pathlib import Path

from ..brackets import VectorField, bracket2
from ..invariance import NotInvariantError, cofactor, darboux_search
from ..lines import invariant_lines
from .parse import parse_poly, substitute_params

VERIFIED = "verified"
KNOWN_DISCREPANCY = "known-discrepancy"
UNRESOLVED = "unresolved"
STATUSES = (VERIFIED, KNOWN_DISCREPANCY)
KINDS = ("cofactor", "darboux", "bracket", "lines")
FLOAT_TOL = 1e-9


@dataclass(frozen=True)
class FixtureRecord:
    id: str
    source: str
    status: str
    kind: str
    mode: str
    variables: tuple
    samples: tuple
    printed: dict
    rederived: dict | None = None
    details: str = ""
    param_degree: int | None = None
    constants: dict = field(default_factory=dict)
    max_abs: str = "10"

    def __post_init__(self):
        if self.status not in STATUSES:
            raise ValueError(f"{self.id}: unknown status {self.status!r}")
        if self.kind not in KINDS:
            raise ValueError(f"{self.id}: unknown kind {self.kind!r}")
        if self.mode not in ("exact", "float"):
            raise ValueError(f"{self.id}: unknown mode {self.mode!r}")
        if self.status == KNOWN_DISCREPANCY and (not self.details or not self.rederived):
            raise ValueError(f"{self.id}: a known discrepancy needs details and a re-derived identity")
        if not self.samples:
            raise ValueError(f"{self.id}: no samples")
        if self.param_degree is not None and len(self.samples) <= self.param_degree:
            raise ValueError(f"{self.id}: {len(self.samples)} samples cannot certify parameter degree "
                             f"{self.param_degree}")

    @classmethod
    def from_dict(cls, d: dict) -> "FixtureRecord":
        d = dict(d)
        d["variables"] = tuple(d["variables"])
        d["samples"] = tuple(d["samples"])
        return cls(**d)


@dataclass(frozen=True)
class FixtureResult:
    id: str
    source: str
    expected: str
    observed: str
    details: str
    seconds: float

    @property
    def ok(self) -> bool:
        return self.expected == self.observed

    def as_dict(self) -> dict:
        return {"id": self.id, "source": self.source, "expected": self.expected,
                "observed": self.observed, "ok": self.ok, "details": self.details,
                "seconds": round(self.seconds, 3)}


def default_path() -> Path:
    return Path(str(resources.files(__package__).joinpath("fixtures.json")))


def load_fixtures(path=None) -> list:
    path = Path(path) if path is not None else default_path()
    data = json.loads(path.read_text())
    records = [FixtureRecord.from_dict(d) for d in data["fixtures"]]
    ids = [r.id for r in records]
    if len(set(ids)) != len(ids):
        raise ValueError("duplicate fixture ids")
    return records


def _constant_value(spec: str) -> Fraction:
    # "sqrt:5" -> 50-digit rational approximation
    kind, _, arg = spec.partition(":")
    if kind != "sqrt":
        raise ValueError(f"unsupported constant {spec!r}")
    with localcontext() as ctx:
        ctx.prec = 60
        return Fraction(Decimal(arg).sqrt()).limit_denominator(10**50)


class _Sample:
    def __init__(self, record: FixtureRecord, sample: dict):
        self.vars = record.variables
        self.params = dict(sample)
        self.params.update({k: str(_constant_value(v)) for k, v in record.constants.items()})

    def poly(self, src: str):
        return parse_poly(substitute_params(src, self.params), self.vars)

    def number(self, src: str) -> Fraction:
        p = parse_poly(substitute_params(src, self.params), ())
        return p.coeff(()) if not p.is_zero() else Fraction(0)

    def field(self, block: dict) -> VectorField:
        return VectorField.planar(self.poly(block["P"]), self.poly(block["Q"]))


def _check_cofactors(s: _Sample, block: dict) -> str | None:
    v = s.field(block)
    expected = block.get("cofactors") or [None] * len(block["curves"])
    for i, (src, ksrc) in enumerate(zip(block["curves"], expected)):
        rep = cofactor(s.poly(src), v)
        if not rep.invariant:
            return f"curve {i} not invariant, remainder has {len(rep.remainder)} terms"
        if ksrc is not None and rep.cofactor != s.poly(ksrc):
            return f"curve {i} has cofactor {rep.cofactor}, expected {s.poly(ksrc)}"
    return None


def _check_darboux(s: _Sample, block: dict) -> str | None:
    bad = _check_cofactors(s, block)
    if bad:
        return bad
    v = s.field(block)
    try:
        certs = darboux_search([s.poly(c) for c in block["curves"]], v)
    except NotInvariantError as exc:
        return str(exc)
    if len(certs) != 1:
        return f"null space has dimension {len(certs)}"
    sigma = certs[0].exponents
    want = [s.number(e) for e in block["exponents"]]
    # proportional iff all 2x2 minors vanish
    for i in range(len(sigma)):
        for j in range(i + 1, len(sigma)):
            if sigma[i] * want[j] != sigma[j] * want[i]:
                return f"exponents {list(map(str, sigma))} not proportional to {list(map(str, want))}"
    return None


def _check_bracket(s: _Sample, block: dict) -> str | None:
    f, g = (s.poly(c) for c in block["curves"])
    got = bracket2(f, g)
    want = s.poly(block["bracket"])
    return None if got == want else f"bracket is {got}"


def _check_lines(s: _Sample, block: dict, max_abs: str) -> str | None:
    rep = invariant_lines(s.field(block), Fraction(max_abs))
    found = rep.pairs()
    for k_src, l_src in block["lines"]:
        k, l = float(s.number(k_src)), float(s.number(l_src))
        if not any(abs(a - k) <= FLOAT_TOL and abs(b - l) <= FLOAT_TOL for a, b in found):
            return f"line y = {k:.12g}*x + {l:.12g} not found"
    if block.get("count") is not None:
        if rep.non_isolated:
            return f"non-isolated lines: {rep.families}"
        if len(found) != block["count"]:
            return f"found {len(found)} lines, expected {block['count']}"
    return None


def check_block(record: FixtureRecord, block: dict) -> str | None:
    """First failure message over all samples, or None if the identity holds.

    A block may restrict itself to its own ``samples`` (a parameter slice).
    """
    for sample in block.get("samples", record.samples):
        s = _Sample(record, sample)
        if record.kind == "cofactor":
            bad = _check_cofactors(s, block)
        elif record.kind == "darboux":
            bad = _check_darboux(s, block)
        elif record.kind == "bracket":
            bad = _check_bracket(s, block)
        else:
            bad = _check_lines(s, block, record.max_abs)
        if bad:
            where = ", ".join(f"{k}={v}" for k, v in sample.items())
            return f"{bad} (at {where})" if where else bad
    return None


def identity_text(record: FixtureRecord, block: dict) -> str:
    if record.kind == "bracket":
        return f"{{{block['curves'][0]}, {block['curves'][1]}}} = {block['bracket']}"
    head = f"P = {block['P']}, Q = {block['Q']}"
    if record.kind == "lines":
        pairs = "; ".join(f"K = {k}, L = {l}" for k, l in block["lines"])
        return f"{head}: invariant lines {pairs}" + (f" ({block['count']} in all)" if block.get("count") else "")
    parts = []
    for i, c in enumerate(block["curves"]):
        K = (block.get("cofactors") or [None] * len(block["curves"]))[i]
        parts.append(f"g = {c} with cofactor {K if K is not None else '(any)'}")
    if record.kind == "darboux":
        parts.append(f"exponents proportional to ({', '.join(block['exponents'])})")
    return f"{head}: " + "; ".join(parts)


def run_fixture(record: FixtureRecord) -> FixtureResult:
    t0 = time.perf_counter()
    failure = check_block(record, record.printed)
    if failure is None:
        observed = VERIFIED
        details = f"printed identity holds at {len(record.samples)} sample(s)"
    else:
        printed = f"printed: {identity_text(record, record.printed)} -- fails: {failure}"
        if record.rederived is None:
            observed, details = UNRESOLVED, printed
        else:
            again = check_block(record, record.rederived)
            rederived = f"re-derived: {identity_text(record, record.rederived)}"
            if again is None:
                observed = KNOWN_DISCREPANCY
                n = len(record.rederived.get("samples", record.samples))
                details = f"{printed}. {rederived} -- holds at {n} sample(s). {record.details}"
            else:
                observed = UNRESOLVED
                details = f"{printed}. {rederived} -- fails too: {again}"
    return FixtureResult(record.id, record.source, record.status, observed, details,
                         time.perf_counter() - t0)


def run_gallery(records, prefix: str | None = None, jobs: int = 1) -> list:
    """Run the selected fixtures; results are sorted by id."""
    chosen = [r for r in records if prefix is None or r.id.startswith(prefix)]
    if jobs > 1 and len(chosen) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            results = list(pool.map(run_fixture, chosen))
    else:
        results = [run_fixture(r) for r in chosen]
    return sorted(results, key=lambda r: r.id)
