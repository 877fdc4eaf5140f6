from fractions import Fraction

import pytest
import sympy as sp
from hypothesis import given, settings

from curveforge.brackets import (VectorField, bracket2, bracketN, directional, gradient, plucker_residual,
                                 ternary_residual)
from curveforge.ratpoly import MPoly, VariableMismatch
from oracles import from_sympy, to_sympy
from strategies import XY, XYZ, polys

x, y = MPoly.gens(XY)
X, Y, Z = MPoly.gens(XYZ)
MANY = settings(max_examples=200, deadline=None)


def test_canonical_pair_and_antisymmetry():
    assert bracket2(x, y) == MPoly.const(1, XY)
    assert bracket2(y, x) == MPoly.const(-1, XY)
    f = x ** 2 * y + 3
    assert bracket2(f, f).is_zero()


def test_conics_bracket_sign():
    # nu1, nu2, l0, l1 are free; the bracket does not depend on l0, l1
    nu1, nu2, l0, l1 = Fraction(3), Fraction(2), Fraction(1, 3), Fraction(2, 3)
    g1 = nu1 * (x ** 2 - l0) - y ** 2 + l1
    g2 = nu2 * (x ** 2 - l0) - y ** 2 + l1
    assert bracket2(g1, g2) == -4 * x * y * (nu1 - nu2)


def test_bracket_dimension_errors():
    with pytest.raises(ValueError):
        bracket2(X, Y)
    with pytest.raises(ValueError):
        bracketN([X, Y])
    with pytest.raises(VariableMismatch):
        bracketN([x, MPoly.var("u", ("u", "y"))])


def test_bracketN_examples():
    assert bracketN([X, Y, Z]) == MPoly.const(1, XYZ)
    f = X * Y + Z
    assert bracketN([f, f, Z]).is_zero()


def test_directional_examples():
    g = x ** 2 + y ** 2 - 1
    zero = VectorField(XY, (MPoly.zero(XY), MPoly.zero(XY)))
    assert directional(g, zero).is_zero()
    assert directional(g, VectorField.planar(-y, x)).is_zero()
    assert gradient(g) == (2 * x, 2 * y)


def test_conics_directional():
    a, b, c, alpha = Fraction(1), Fraction(1), Fraction(1), Fraction(2)
    nu1, nu2 = Fraction(3), Fraction(2)
    gamma = b + c * (nu1 + nu2)
    beta = -c * nu1 * nu2
    den = b * gamma - c * beta
    l0 = (gamma * a - alpha * c) / den
    l1 = (alpha * b - beta * a) / den
    v = VectorField.planar(y * (a + b * x ** 2 + c * y ** 2), x * (alpha + beta * x ** 2 + gamma * y ** 2))
    for nu in (nu1, nu2):
        g = nu * (x ** 2 + l0) - y ** 2 - l1
        assert directional(g, v) == 2 * x * y * (gamma - nu * c) * g


def test_plucker_all_equal_arguments():
    f = x ** 2 - y
    assert ternary_residual(f, f, f, f).is_zero()
    assert plucker_residual([f], [f, f], f).is_zero()


def test_plucker_dimension_errors():
    with pytest.raises(ValueError):
        plucker_residual([x, y], [x, y], x)
    with pytest.raises(ValueError):
        plucker_residual([X], [X, Y], Z)


@settings(max_examples=50, deadline=None)
@given(polys(), polys())
def test_bracketN_matches_bracket2(f, g):
    assert bracketN([f, g]) == bracket2(f, g)


@MANY
@given(polys(), polys())
def test_bracket_antisymmetric(f, g):
    assert bracket2(f, g) == -bracket2(g, f)


@MANY
@given(polys(), polys(), polys())
def test_bracket_leibniz(f, h, g):
    assert bracket2(f * h, g) == f * bracket2(h, g) + h * bracket2(f, g)


@given(polys(max_deg=2))
def test_bracket_of_function_of_itself(g):
    assert bracket2(g, g * g).is_zero()
    assert bracket2(g, g * g * 3 + g).is_zero()


@settings(max_examples=60, deadline=None)
@given(polys(XYZ, max_deg=2), polys(XYZ, max_deg=2), polys(XYZ, max_deg=2))
def test_bracketN_matches_sympy_jacobian(f, g, h):
    exprs = [to_sympy(p)[0] for p in (f, g, h)]
    syms = sp.symbols(XYZ)
    det = sp.Matrix([[sp.diff(e, s) for s in syms] for e in exprs]).det()
    assert from_sympy(det, XYZ) == bracketN([f, g, h])


@MANY
@given(polys(), polys(), polys(), polys())
def test_ternary_identity(a, b, c, d):
    assert ternary_residual(a, b, c, d).is_zero()
    assert plucker_residual([a], [b, c], d).is_zero()


@MANY
@given(polys(XYZ), polys(XYZ), polys(XYZ), polys(XYZ), polys(XYZ), polys(XYZ))
def test_plucker_identity_three_variables(f1, f2, g1, g2, g3, G):
    assert plucker_residual([f1, f2], [g1, g2, g3], G).is_zero()


@MANY
@given(polys(), polys(), polys())
def test_directional_is_derivation(f, g, p):
    v = VectorField.planar(p, p * x - 1)
    assert directional(f * g, v) == directional(f, v) * g + f * directional(g, v)
