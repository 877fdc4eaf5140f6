"""Sparse multivariate polynomials with exact rational coefficients.

Coefficients are :class:`fractions.Fraction` throughout.  A polynomial is a
mapping from exponent tuples (one entry per declared variable) to nonzero
coefficients; the variable list is explicit and ordered, and arithmetic is
only defined between polynomials over the same list.

Terms are ordered graded-lexicographically: higher total degree first, ties
broken lexicographically in declaration order.  That order drives the
leading term used by :func:`div_exact` and the canonical printer.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Mapping, Sequence, Union

Scalar = Union[int, Fraction]
Monomial = tuple  # tuple[int, ...]


class VariableMismatch(ValueError):
    """Operands live over different variable lists."""


def _grlex_key(exps: Monomial):
    return (sum(exps), exps)


class MPoly:
    """Immutable sparse polynomial over the rationals.

    >>> x, y = MPoly.gens(("x", "y"))
    >>> str((x - 1) * (x + 1))
    'x^2 - 1'
    """

    __slots__ = ("_vars", "_terms", "_hash")

    def __init__(self, variables: Sequence[str], terms: Mapping[Monomial, Scalar] | None = None):
        variables = tuple(variables)
        if len(set(variables)) != len(variables):
            raise ValueError(f"duplicate variable names in {variables}")
        clean = {}
        if terms:
            n = len(variables)
            for exps, c in terms.items():
                exps = tuple(int(e) for e in exps)
                if len(exps) != n or any(e < 0 for e in exps):
                    raise ValueError(f"bad exponent vector {exps} for variables {variables}")
                c = Fraction(c)
                if c:
                    clean[exps] = clean.get(exps, 0) + c
            clean = {e: c for e, c in clean.items() if c}
        self._vars = variables
        self._terms = clean
        self._hash = None

    @classmethod
    def _raw(cls, variables: tuple, terms: dict) -> "MPoly":
        # trusted constructor: terms already canonical
        p = object.__new__(cls)
        p._vars = variables
        p._terms = terms
        p._hash = None
        return p

    # constructors

    @classmethod
    def zero(cls, variables: Sequence[str]) -> "MPoly":
        return cls._raw(tuple(variables), {})

    @classmethod
    def const(cls, c: Scalar, variables: Sequence[str]) -> "MPoly":
        variables = tuple(variables)
        c = Fraction(c)
        return cls._raw(variables, {(0,) * len(variables): c} if c else {})

    @classmethod
    def var(cls, name: str, variables: Sequence[str]) -> "MPoly":
        variables = tuple(variables)
        if name not in variables:
            raise KeyError(f"unknown variable {name!r}")
        exps = tuple(1 if v == name else 0 for v in variables)
        return cls._raw(variables, {exps: Fraction(1)})

    @classmethod
    def gens(cls, variables: Sequence[str]) -> tuple:
        return tuple(cls.var(v, variables) for v in variables)

    @classmethod
    def monomial(cls, exps: Monomial, variables: Sequence[str], coeff: Scalar = 1) -> "MPoly":
        return cls(variables, {tuple(exps): coeff})

    # introspection

    @property
    def variables(self) -> tuple:
        return self._vars

    @property
    def terms(self) -> dict:
        """A copy of the exponent -> coefficient map."""
        return dict(self._terms)

    def items(self):
        return self._terms.items()

    def __len__(self):
        return len(self._terms)

    def __bool__(self):
        return bool(self._terms)

    def is_zero(self) -> bool:
        return not self._terms

    def is_constant(self) -> bool:
        return all(sum(e) == 0 for e in self._terms)

    def coeff(self, exps: Monomial) -> Fraction:
        return self._terms.get(tuple(exps), Fraction(0))

    def constant_term(self) -> Fraction:
        return self.coeff((0,) * len(self._vars))

    def degree(self, var: str | None = None) -> int:
        """Total degree, or degree in ``var``.  The zero polynomial has degree -1."""
        if not self._terms:
            return -1
        if var is None:
            return max(sum(e) for e in self._terms)
        i = self._index(var)
        return max(e[i] for e in self._terms)

    def sorted_terms(self) -> list:
        """Terms in descending graded-lex order."""
        return sorted(self._terms.items(), key=lambda t: _grlex_key(t[0]), reverse=True)

    def leading_term(self):
        if not self._terms:
            raise ValueError("zero polynomial has no leading term")
        return max(self._terms.items(), key=lambda t: _grlex_key(t[0]))

    def leading_coeff(self) -> Fraction:
        return self.leading_term()[1]

    def homogeneous_part(self, d: int) -> "MPoly":
        return MPoly._raw(self._vars, {e: c for e, c in self._terms.items() if sum(e) == d})

    def _index(self, var: str) -> int:
        try:
            return self._vars.index(var)
        except ValueError:
            raise KeyError(f"unknown variable {var!r}; have {self._vars}") from None

    # arithmetic

    def _coerce(self, other) -> "MPoly":
        if isinstance(other, MPoly):
            if other._vars != self._vars:
                raise VariableMismatch(f"{self._vars} vs {other._vars}")
            return other
        if isinstance(other, (int, Fraction)):
            return MPoly.const(other, self._vars)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        out = dict(self._terms)
        for e, c in other._terms.items():
            s = out.get(e, 0) + c
            if s:
                out[e] = s
            else:
                out.pop(e, None)
        return MPoly._raw(self._vars, out)

    __radd__ = __add__

    def __neg__(self):
        return MPoly._raw(self._vars, {e: -c for e, c in self._terms.items()})

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return other + (-self)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            c = Fraction(other)
            if not c:
                return MPoly.zero(self._vars)
            return MPoly._raw(self._vars, {e: v * c for e, v in self._terms.items()})
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        out: dict = {}
        for e1, c1 in self._terms.items():
            for e2, c2 in other._terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                out[e] = out.get(e, 0) + c1 * c2
        return MPoly._raw(self._vars, {e: c for e, c in out.items() if c})

    __rmul__ = __mul__

    def __truediv__(self, other):
        # scalar division only; polynomial division is div_exact
        if isinstance(other, (int, Fraction)):
            c = Fraction(other)
            if not c:
                raise ZeroDivisionError("division by zero scalar")
            return self * (1 / c)
        return NotImplemented

    def __pow__(self, k: int):
        if not isinstance(k, int) or k < 0:
            raise ValueError("exponent must be a non-negative integer")
        result = MPoly.const(1, self._vars)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def __eq__(self, other):
        if isinstance(other, MPoly):
            return self._vars == other._vars and self._terms == other._terms
        if isinstance(other, (int, Fraction)):
            return self._terms == MPoly.const(other, self._vars)._terms
        return NotImplemented

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self._vars, frozenset(self._terms.items())))
        return self._hash

    def __repr__(self):
        return f"MPoly({self._vars}, {self})"

    def __str__(self):
        return to_str(self)

    # calculus and substitution

    def diff(self, var: str) -> "MPoly":
        return partial(self, var)

    def __call__(self, *point):
        return evaluate(self, point)

    def monic(self) -> "MPoly":
        """Scale so the graded-lex leading coefficient is 1."""
        if not self._terms:
            return self
        return self * (1 / self.leading_coeff())

    def with_variables(self, variables: Sequence[str]) -> "MPoly":
        """Re-express over a superset (or reordering) of the variable list."""
        variables = tuple(variables)
        idx = []
        for v in self._vars:
            if v not in variables:
                if self.degree(v) > 0:
                    raise VariableMismatch(f"{v!r} occurs but is missing from {variables}")
                idx.append(None)
            else:
                idx.append(variables.index(v))
        out = {}
        for e, c in self._terms.items():
            new = [0] * len(variables)
            for k, i in zip(e, idx):
                if i is not None:
                    new[i] = k
            out[tuple(new)] = c
        return MPoly._raw(variables, out)


def _check_same(p: MPoly, q: MPoly):
    if p.variables != q.variables:
        raise VariableMismatch(f"{p.variables} vs {q.variables}")


def add(p: MPoly, q: MPoly) -> MPoly:
    _check_same(p, q)
    return p + q


def mul(p: MPoly, q: MPoly) -> MPoly:
    _check_same(p, q)
    return p * q


def partial(p: MPoly, var: str) -> MPoly:
    """Formal partial derivative with respect to ``var``."""
    i = p._index(var)
    out = {}
    for e, c in p._terms.items():
        k = e[i]
        if k:
            ne = e[:i] + (k - 1,) + e[i + 1:]
            out[ne] = c * k
    return MPoly._raw(p.variables, out)


def divmod_poly(p: MPoly, d: MPoly) -> tuple:
    """Single-divisor division with remainder in graded-lex order.

    Returns ``(q, r)`` with ``p = q*d + r`` and no term of ``r`` divisible by
    the leading monomial of ``d``.
    """
    _check_same(p, d)
    if d.is_zero():
        raise ZeroDivisionError("division by the zero polynomial")
    lm, lc = d.leading_term()
    dterms = list(d.items())
    work = dict(p._terms)
    quot: dict = {}
    rem: dict = {}
    while work:
        e, c = max(work.items(), key=lambda t: _grlex_key(t[0]))
        if all(a >= b for a, b in zip(e, lm)):
            qe = tuple(a - b for a, b in zip(e, lm))
            qc = c / lc
            quot[qe] = quot.get(qe, 0) + qc
            for de, dc in dterms:
                te = tuple(a + b for a, b in zip(qe, de))
                s = work.get(te, 0) - qc * dc
                if s:
                    work[te] = s
                else:
                    work.pop(te, None)
        else:
            rem[e] = c
            del work[e]
    return (MPoly._raw(p.variables, {e: c for e, c in quot.items() if c}),
            MPoly._raw(p.variables, rem))


def div_exact(p: MPoly, d: MPoly) -> MPoly | None:
    """Return ``q`` with ``p == q*d``, or ``None`` if ``d`` does not divide ``p``."""
    q, r = divmod_poly(p, d)
    return q if r.is_zero() else None


def evaluate(p: MPoly, point: Sequence) -> Fraction:
    """Exact value of ``p`` at ``point`` (one coordinate per variable).

    Coordinates may be ints or Fractions; floats work too and give a float.
    """
    point = tuple(point)
    if len(point) != len(p.variables):
        raise ValueError(f"point has {len(point)} coordinates, polynomial has {len(p.variables)} variables")
    total = 0
    for e, c in p._terms.items():
        t = c
        for v, k in zip(point, e):
            if k:
                t = t * v ** k
        total = total + t
    return total if not isinstance(total, int) else Fraction(total)


def substitute(p: MPoly, var: str, r: MPoly) -> MPoly:
    """Replace ``var`` by ``r`` and expand.

    The result lives over ``r``'s variable list extended by the remaining
    variables of ``p`` (in ``p``'s order) that ``r`` does not already carry.
    """
    i = p._index(var)
    rest = [v for v in p.variables if v != var]
    target = tuple(r.variables) + tuple(v for v in rest if v not in r.variables)
    r = r.with_variables(target)
    powers = {0: MPoly.const(1, target)}
    out = MPoly.zero(target)
    for e, c in p._terms.items():
        k = e[i]
        if k not in powers:
            powers[k] = r ** k
        mono = {}
        ne = [0] * len(target)
        for v, kk in zip(p.variables, e):
            if v != var and kk:
                ne[target.index(v)] += kk
        mono[tuple(ne)] = c
        out = out + MPoly._raw(target, mono) * powers[k]
    return out


def from_coeffs(variables: Sequence[str], pairs: Iterable) -> MPoly:
    """Build from ``(exponents, coefficient)`` pairs."""
    return MPoly(variables, dict(pairs))


def _fmt_coeff(c: Fraction) -> str:
    return str(c.numerator) if c.denominator == 1 else f"{c.numerator}/{c.denominator}"


def to_str(p: MPoly) -> str:
    """Canonical text: graded-lex order, explicit ``*`` and ``^``.

    The output re-parses to the same polynomial (see ``curveforge.cli.parse``).
    """
    if p.is_zero():
        return "0"
    parts = []
    for e, c in p.sorted_terms():
        factors = []
        for v, k in zip(p.variables, e):
            if k == 1:
                factors.append(v)
            elif k > 1:
                factors.append(f"{v}^{k}")
        mag = abs(c)
        if not factors:
            body = _fmt_coeff(mag)
        elif mag == 1:
            body = "*".join(factors)
        else:
            body = _fmt_coeff(mag) + "*" + "*".join(factors)
        sign = "-" if c < 0 else "+"
        parts.append((sign, body))
    first_sign, first_body = parts[0]
    out = ("-" if first_sign == "-" else "") + first_body
    for sign, body in parts[1:]:
        out += f" {sign} {body}"
    return out


def monomials(nvars: int, max_deg: int, min_deg: int = 0) -> list:
    """Exponent tuples with ``min_deg <= total degree <= max_deg``, descending graded-lex."""
    out = []

    def rec(prefix, left, k):
        if k == 1:
            out.append(prefix + (left,))
            return
        for e in range(left, -1, -1):
            rec(prefix + (e,), left - e, k - 1)

    for d in range(max_deg, min_deg - 1, -1):
        if nvars == 0:
            if d == 0:
                out.append(())
            continue
        rec((), d, nvars)
    return out
