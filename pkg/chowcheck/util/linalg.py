# This Source Code Form is subject to the terms of the Mozilla Public
# License, v. 2.0. If a copy of the MPL was not distributed with this
# file, you can obtain one at http://mozilla.org/MPL/2.0/.

# Exact linear algebra over Q and Z. Inputs and outputs are plain lists of ints or
# Fractions; sympy matrices never leak out of this module.

from fractions import Fraction
from itertools import combinations, product
from math import gcd

import sympy
from sympy.matrices.normalforms import smith_normal_form


class UnimodularError(ValueError):
    pass


def to_sympy(value):
    value = Fraction(value)
    return sympy.Rational(value.numerator, value.denominator)


def to_fraction(value):
    value = sympy.Rational(value)
    return Fraction(int(value.p), int(value.q))


def matrix(rows, ncols=None):
    rows = [list(r) for r in rows]
    if not rows:
        return sympy.zeros(0, ncols or 0)
    return sympy.Matrix([[to_sympy(x) for x in r] for r in rows])


def rank(rows):
    """Rank over Q; an empty list of rows has rank 0."""
    rows = [list(r) for r in rows]
    if not rows or not rows[0]:
        return 0
    return matrix(rows).rank()


def nullspace(rows):
    """A basis of the rational right kernel, as lists of Fractions."""
    return [[to_fraction(x) for x in v] for v in matrix(rows).nullspace()]


def determinant(rows):
    return to_fraction(matrix(rows).det())


def principal_minors(rows):
    """All principal minors of a square matrix, indexed by row subsets."""
    m = matrix(rows)
    size = m.rows
    for k in range(1, size + 1):
        for subset in combinations(range(size), k):
            yield subset, to_fraction(m.extract(list(subset), list(subset)).det())


def solve(rows, rhs):
    """
    One rational solution x of rows * x = rhs, with every free parameter set to zero, or
    None if the system is inconsistent.
    """
    params, solution = _gauss_jordan(rows, rhs)
    if solution is None:
        return None
    fixed = solution.subs({p: 0 for p in params})
    return [to_fraction(x) for x in fixed]


def _gauss_jordan(rows, rhs):
    a = matrix(rows)
    b = sympy.Matrix([to_sympy(x) for x in rhs])
    try:
        solution, params = a.gauss_jordan_solve(b)
    except ValueError:
        return (), None
    return list(params), solution


def centered_range(bound):
    """0, 1, -1, 2, -2, ..., bound, -bound."""
    values = [0]
    for k in range(1, bound + 1):
        values.extend([k, -k])
    return values


def integer_solutions(rows, rhs, bound):
    """
    Yield the integer solutions x of rows * x = rhs with |x_k| <= bound.

    The free variables of the reduced system are enumerated in centered order, so the
    solution closest to zero in the free coordinates comes first.
    """
    params, solution = _gauss_jordan(rows, rhs)
    if solution is None:
        return
    for values in product(centered_range(bound), repeat=len(params)):
        candidate = solution.subs(dict(zip(params, values)))
        fractions = [to_fraction(x) for x in candidate]
        if all(f.denominator == 1 and abs(f) <= bound for f in fractions):
            yield tuple(int(f) for f in fractions)


def invariant_factors(rows):
    """The nonzero elementary divisors of an integer matrix, from its Smith normal form."""
    rows = [list(r) for r in rows]
    if not rows:
        return []
    snf = smith_normal_form(sympy.Matrix(rows), domain=sympy.ZZ)
    diagonal = [abs(int(snf[k, k])) for k in range(min(snf.rows, snf.cols))]
    diagonal = [x for x in diagonal if x]
    # put the diagonal in divisibility order: d_1 | d_2 | ...
    for i in range(len(diagonal)):
        for j in range(i + 1, len(diagonal)):
            a, b = diagonal[i], diagonal[j]
            diagonal[i] = gcd(a, b)
            diagonal[j] = a * b // diagonal[i]
    return diagonal


def integer_inverse(rows):
    """Inverse of a unimodular integer matrix, as lists of ints."""
    m = sympy.Matrix([list(r) for r in rows])
    if m.rows != m.cols or abs(m.det()) != 1:
        raise UnimodularError('Matrix {} is not invertible over Z'.format([list(r) for r in rows]))
    inv = m.inv()
    return [[int(inv[i, j]) for j in range(inv.cols)] for i in range(inv.rows)]
