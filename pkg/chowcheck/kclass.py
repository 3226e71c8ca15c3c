#!/usr/bin/env python
# encoding: utf-8

# This Source Code Form is subject to the terms of the Mozilla Public
# License, v. 2.0. If a copy of the MPL was not distributed with this
# file, You can obtain one at http://mozilla.org/MPL/2.0/.

from __future__ import division

import logging
from collections import Counter, namedtuple
from fractions import Fraction
from functools import lru_cache
from itertools import combinations
from math import factorial

from . import series
from .exact import todd_coefficients
from .series import GradedSeries, SeriesError, default_degree, grade_component, mul

logger = logging.getLogger(__name__)


class VirtualClassError(ValueError):
    pass


class KClass(object):
    """
    A split K-theory class: a multiset of Chern roots with integer multiplicities.

    Roots are integer linear forms in a1..ag, stored as coefficient tuples. A negative
    multiplicity makes the class virtual.
    """

    __slots__ = ('_num_vars', '_roots')

    def __init__(self, num_vars, roots=None):
        """
        :param num_vars: the number g of root variables.
        :param roots: a mapping from root tuples to multiplicities, or an iterable of roots
            each counted once.
        """
        if isinstance(num_vars, bool) or not isinstance(num_vars, int) or num_vars < 1:
            raise ValueError('Number of variables must be a positive integer, got {!r}'
                             .format(num_vars))
        if roots is None:
            roots = {}
        elif not isinstance(roots, dict):
            roots = Counter(tuple(r) for r in roots)
        self._num_vars = num_vars
        self._roots = {}
        for root, mult in roots.items():
            root = tuple(root)
            if len(root) != num_vars or not all(isinstance(c, int) for c in root):
                raise ValueError('Root {} is not an integer linear form in {} variables'
                                 .format(root, num_vars))
            if mult:
                self._roots[root] = self._roots.get(root, 0) + mult
                if not self._roots[root]:
                    del self._roots[root]

    @property
    def num_vars(self):
        return self._num_vars

    @property
    def roots(self):
        return sorted(self._roots.items())

    @property
    def rank(self):
        return sum(self._roots.values())

    @property
    def is_effective(self):
        return all(mult > 0 for mult in self._roots.values())

    def expanded_roots(self):
        """Roots repeated by multiplicity, in sorted order (effective classes only)."""
        _require_effective(self)
        return [root for root, mult in self.roots for _ in range(mult)]

    def __eq__(self, other):
        if not isinstance(other, KClass):
            return NotImplemented
        return self._num_vars == other._num_vars and self._roots == other._roots

    def __ne__(self, other):
        result = self.__eq__(other)
        return result if result is NotImplemented else not result

    def __hash__(self):
        return hash((self._num_vars, frozenset(self._roots.items())))

    def __add__(self, other):
        return direct_sum(self, other)

    def __repr__(self):
        return 'KClass(g={}, {})'.format(self._num_vars, self.roots)


def _require_effective(k):
    if not k.is_effective:
        raise VirtualClassError('Operation needs an effective class, got {!r}'.format(k))


def trivial(g):
    return KClass(g, {(0,) * g: 1})


def line(g, root):
    return KClass(g, {tuple(root): 1})


def generic(g):
    """The rank-g class with roots a1..ag (the Hodge bundle E)."""
    return KClass(g, [tuple(1 if k == i else 0 for k in range(g)) for i in range(g)])


def weight_one_bundle(g):
    """H = E + E^dual, roots +-a_i."""
    e = generic(g)
    return direct_sum(e, dual(e))


def dual(k):
    return KClass(k.num_vars, {tuple(-c for c in root): m for root, m in k.roots})


def direct_sum(k1, k2):
    _check_same_vars(k1, k2)
    roots = dict(k1.roots)
    for root, mult in k2.roots:
        roots[root] = roots.get(root, 0) + mult
    return KClass(k1.num_vars, roots)


def tensor(k1, k2):
    """Tensor product: roots add, multiplicities multiply."""
    _check_same_vars(k1, k2)
    roots = Counter()
    for r, m in k1.roots:
        for s, n in k2.roots:
            roots[tuple(x + y for x, y in zip(r, s))] += m * n
    return KClass(k1.num_vars, dict(roots))


def _check_same_vars(k1, k2):
    if k1.num_vars != k2.num_vars:
        raise ValueError('Classes live over {} and {} root variables'
                         .format(k1.num_vars, k2.num_vars))


@lru_cache(maxsize=2**12)
def exp_root(g, D, root):
    """e^root, expanded directly: the coefficient of a^e is prod c_k^{e_k} / e_k!."""
    support = [k for k, c in enumerate(root) if c]
    terms = {}
    for exps in _exponents_up_to(len(support), D):
        coeff = Fraction(1)
        full = [0] * g
        for k, e in zip(support, exps):
            coeff *= Fraction(root[k] ** e, factorial(e))
            full[k] = e
        terms[tuple(full)] = coeff
    return GradedSeries(g, D, terms)


def _exponents_up_to(n, total):
    if n == 0:
        yield ()
        return
    for first in range(total + 1):
        for rest in _exponents_up_to(n - 1, total - first):
            yield (first,) + rest


def ch(k, D):
    """Chern character: sum over roots of mult * e^root, truncated at D."""
    result = GradedSeries(k.num_vars, D)
    for root, mult in k.roots:
        result = result + exp_root(k.num_vars, D, root).scale(mult)
    return result


def lambda_k(k, power):
    """
    The exterior power: roots are the sums over all power-element sub-multisets.

    :raises VirtualClassError: for virtual classes.
    """
    if isinstance(power, bool) or not isinstance(power, int) or power < 0:
        raise ValueError('Exterior power must be a nonnegative integer, got {!r}'.format(power))
    expanded = k.expanded_roots()
    sums = Counter()
    for subset in combinations(expanded, power):
        sums[tuple(sum(col) for col in zip(*subset)) if subset else (0,) * k.num_vars] += 1
    return KClass(k.num_vars, dict(sums))


def lambda_t_ch(k, D):
    """[ch(lambda_0 K), ch(lambda_1 K), ..., ch(lambda_rank K)] by wedge enumeration."""
    return [ch(lambda_k(k, power), D) for power in range(k.rank + 1)]


def lambda_t_product(k, D):
    """The same list read off prod over roots of (1 + e^root t)."""
    coeffs = [GradedSeries.constant(k.num_vars, D, 1)]
    for root in k.expanded_roots():
        e = exp_root(k.num_vars, D, root)
        shifted = [GradedSeries(k.num_vars, D)] + [mul(c, e) for c in coeffs]
        coeffs = [a + b for a, b in zip(coeffs + [GradedSeries(k.num_vars, D)], shifted)]
    return coeffs


def lambda_pm1_ch(k, sign, D):
    """
    sum_k sign^k ch(lambda_k K), by enumerating sub-multisets of roots.

    Subsets with the same root sum are merged before exponentiating.
    """
    if sign not in (1, -1):
        raise ValueError('sign must be +1 or -1, got {!r}'.format(sign))
    expanded = k.expanded_roots()
    weights = Counter()
    for size in range(len(expanded) + 1):
        for subset in combinations(expanded, size):
            total = tuple(sum(col) for col in zip(*subset)) if subset else (0,) * k.num_vars
            weights[total] += sign ** size
    result = GradedSeries(k.num_vars, D)
    for root, weight in sorted(weights.items()):
        if weight:
            result = result + exp_root(k.num_vars, D, root).scale(weight)
    return result


@lru_cache(maxsize=2**10)
def _todd_factor(g, D, root):
    form = GradedSeries.linear_form(g, D, root)
    return series.compose_univariate(todd_coefficients(D), form)


def todd(k, D):
    """
    prod over roots of Q(root)^mult with Q(x) = x / (1 - e^{-x}).

    Negative multiplicities divide by the unit series Q(root).
    """
    result = GradedSeries.constant(k.num_vars, D, 1)
    for root, mult in k.roots:
        factor = _todd_factor(k.num_vars, D, root)
        if mult < 0:
            factor = series.inverse(factor)
        for _ in range(abs(mult)):
            result = mul(result, factor)
    return result


def _total_chern(k, D):
    _require_effective(k)
    result = GradedSeries.constant(k.num_vars, D, 1)
    for root in k.expanded_roots():
        result = mul(result, GradedSeries.linear_form(k.num_vars, D, root) + 1)
    return result


def chern_class(k, index, D=None):
    """The index-th elementary symmetric function of the roots."""
    if D is None:
        D = index
    if index > D:
        raise ValueError('c_{} does not fit below truncation degree {}'.format(index, D))
    return grade_component(_total_chern(k, D), index)


def c_top(k, D=None):
    """Product of all roots; zero if any root is 0."""
    return chern_class(k, k.rank, D)


class IdentityReport(namedtuple('IdentityReport',
                                ('name', 'g', 'D', 'passed', 'first_failure', 'residuals',
                                 'extras'))):
    """
    Outcome of an exact identity check.

    residuals is a list of (label, GradedSeries) pairs, one per degree (or per power of t
    and degree); a passing report has all of them zero.
    """
    __slots__ = ()

    def to_dict(self):
        return {
            'name': self.name,
            'g': self.g,
            'D': self.D,
            'passed': self.passed,
            'first_failure': self.first_failure,
            'residuals': [[str(label), s.render()] for label, s in self.residuals
                          if not s.is_zero()],
            'extras': dict(self.extras),
        }


def compare_by_degree(name, g, D, lhs, rhs, extras=None):
    """Build an IdentityReport from the degree-by-degree difference lhs - rhs."""
    residuals = []
    first_failure = None
    diff = lhs - rhs
    for degree in range(D + 1):
        piece = grade_component(diff, degree)
        residuals.append((degree, piece))
        if first_failure is None and not piece.is_zero():
            first_failure = 'degree {}'.format(degree)
    return IdentityReport(name, g, D, first_failure is None, first_failure, residuals,
                          extras or {})


def check_genus(g, D, minimum_degree=1):
    if isinstance(g, bool) or not isinstance(g, int) or g < 1:
        raise ValueError('g must be a positive integer, got {!r}'.format(g))
    if D is None:
        D = default_degree(g)
    if isinstance(D, bool) or not isinstance(D, int) or D < minimum_degree:
        raise ValueError('D must be an integer >= {}, got {!r}'.format(minimum_degree, D))
    return D


def verify_cg_identity(g, D=None):
    """
    Check todd(F^dual) * sum_k (-1)^k ch(lambda_k F) = (-1)^g c_g(F) exactly up to D,
    where F is the generic rank-g class.
    """
    D = check_genus(g, D, minimum_degree=g)
    f = generic(g)
    lhs = mul(todd(dual(f), D), lambda_pm1_ch(f, -1, D))
    rhs = c_top(f, D).scale((-1) ** g)
    report = compare_by_degree('cg-identity', g, D, lhs, rhs)
    logger.info('c_g identity g=%d D=%d: %s', g, D, 'pass' if report.passed else 'FAIL')
    return report


def verify_lambda_product(g, D=None):
    """
    Compare sum_k ch(lambda_k H) t^k (wedge enumeration) against
    prod_i (1 + e^{a_i} t)(1 + e^{-a_i} t) (product expansion), per power of t and degree.
    """
    D = check_genus(g, D)
    h = weight_one_bundle(g)
    wedge = lambda_t_ch(h, D)
    product = lambda_t_product(h, D)
    residuals = []
    first_failure = None
    for power, (left, right) in enumerate(zip(wedge, product)):
        diff = left - right
        for degree in range(D + 1):
            piece = grade_component(diff, degree)
            residuals.append(('t^{} degree {}'.format(power, degree), piece))
            if first_failure is None and not piece.is_zero():
                first_failure = 't^{} degree {}'.format(power, degree)
    if len(wedge) != len(product) and first_failure is None:
        first_failure = 'number of t-coefficients'
    logger.info('lambda-product g=%d D=%d: %s', g, D, first_failure or 'pass')
    return IdentityReport('lambda-product', g, D, first_failure is None, first_failure,
                          residuals, {'t_degree': len(wedge) - 1})


def verify_dual_sum(g, D=None):
    """
    ch(E + E^dual) has no odd components and its degree-2l piece is 2 ch_{2l}(E); so
    ch(E + E^dual) lies in degree 0 iff ch_{2l}(E) = 0 for every l >= 1.
    """
    D = check_genus(g, D)
    e = generic(g)
    total = ch(direct_sum(e, dual(e)), D)
    ch_e = ch(e, D)
    expected = GradedSeries(g, D)
    for degree in range(0, D + 1, 2):
        expected = expected + grade_component(ch_e, degree).scale(2)
    return compare_by_degree('dual-sum', g, D, total, expected)


def negate_odd(s):
    """The series with every odd-degree component negated (the effect of dualizing)."""
    return GradedSeries(s.num_vars, s.trunc_degree,
                        {e: (c if sum(e) % 2 == 0 else -c) for e, c in s.items()})


__all__ = ['KClass', 'VirtualClassError', 'IdentityReport', 'SeriesError', 'trivial', 'line',
           'generic', 'weight_one_bundle', 'dual', 'direct_sum', 'tensor', 'ch', 'lambda_k',
           'lambda_t_ch', 'lambda_t_product', 'lambda_pm1_ch', 'todd', 'chern_class', 'c_top',
           'verify_cg_identity', 'verify_lambda_product', 'verify_dual_sum', 'negate_odd',
           'exp_root', 'compare_by_degree']
