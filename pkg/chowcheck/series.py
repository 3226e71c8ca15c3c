#!/usr/bin/env python
# encoding: utf-8

# This Source Code Form is subject to the terms of the Mozilla Public
# License, v. 2.0. If a copy of the MPL was not distributed with this
# file, You can obtain one at http://mozilla.org/MPL/2.0/.

from __future__ import division

import logging
from collections import defaultdict
from fractions import Fraction
from functools import lru_cache
from math import factorial

from .shared_utils import format_rat

logger = logging.getLogger(__name__)

# Orbit comparison enumerates permutations of the variables; the CLI rejects larger g.
MAX_SYMMETRIC_VARS = 6


class SeriesError(ValueError):
    pass


def default_degree(g):
    return 2 * g + 2


class GradedSeries(object):
    """
    A power series over the rationals in the variables a1..ag, truncated above total
    degree D.

    Terms are keyed by exponent vectors. Instances are treated as immutable: every
    operation returns a new series. Terms of degree > D and zero coefficients are never
    stored.
    """

    __slots__ = ('_num_vars', '_trunc_degree', '_terms')

    def __init__(self, num_vars, trunc_degree, terms=None):
        if isinstance(num_vars, bool) or not isinstance(num_vars, int) or num_vars < 1:
            raise SeriesError('Number of variables must be a positive integer, got {!r}'
                              .format(num_vars))
        if isinstance(trunc_degree, bool) or not isinstance(trunc_degree, int) or \
                trunc_degree < 1:
            raise SeriesError('Truncation degree must be a positive integer, got {!r}'
                              .format(trunc_degree))
        self._num_vars = num_vars
        self._trunc_degree = trunc_degree
        self._terms = {}
        for exps, coeff in (terms or {}).items():
            exps = tuple(exps)
            if len(exps) != num_vars or any(e < 0 for e in exps):
                raise SeriesError('Bad exponent vector {} for {} variables'
                                  .format(exps, num_vars))
            coeff = Fraction(coeff)
            if coeff and sum(exps) <= trunc_degree:
                self._terms[exps] = coeff

    @classmethod
    def constant(cls, num_vars, trunc_degree, value):
        return cls(num_vars, trunc_degree, {(0,) * num_vars: value})

    @classmethod
    def variable(cls, num_vars, trunc_degree, index):
        """The series a_{index + 1} (variables are indexed from zero)."""
        return cls.linear_form(num_vars, trunc_degree,
                               [1 if k == index else 0 for k in range(num_vars)])

    @classmethod
    def linear_form(cls, num_vars, trunc_degree, coeffs):
        if len(coeffs) != num_vars:
            raise SeriesError('Linear form {} does not have {} coefficients'
                              .format(tuple(coeffs), num_vars))
        terms = {}
        for k, c in enumerate(coeffs):
            exps = [0] * num_vars
            exps[k] = 1
            terms[tuple(exps)] = c
        return cls(num_vars, trunc_degree, terms)

    @property
    def num_vars(self):
        return self._num_vars

    @property
    def trunc_degree(self):
        return self._trunc_degree

    @property
    def terms(self):
        return dict(self._terms)

    def items(self):
        return self._terms.items()

    def coefficient(self, exps):
        return self._terms.get(tuple(exps), Fraction(0))

    @property
    def constant_term(self):
        return self.coefficient((0,) * self._num_vars)

    def is_zero(self):
        return not self._terms

    def min_degree(self):
        """Lowest degree carrying a nonzero term, or None for the zero series."""
        if not self._terms:
            return None
        return min(sum(e) for e in self._terms)

    def by_degree(self):
        groups = defaultdict(list)
        for exps, coeff in self._terms.items():
            groups[sum(exps)].append((exps, coeff))
        return groups

    def _coerce(self, other):
        if isinstance(other, GradedSeries):
            if (other._num_vars, other._trunc_degree) != (self._num_vars, self._trunc_degree):
                raise SeriesError('Cannot combine series over (g={}, D={}) and (g={}, D={})'
                                  .format(self._num_vars, self._trunc_degree,
                                          other._num_vars, other._trunc_degree))
            return other
        if isinstance(other, (int, Fraction)) and not isinstance(other, bool):
            return GradedSeries.constant(self._num_vars, self._trunc_degree, other)
        return None

    def __add__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return add(self, other)

    __radd__ = __add__

    def __neg__(self):
        return self.scale(-1)

    def __sub__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return add(self, other.scale(-1))

    def __rsub__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return add(other, self.scale(-1))

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)) and not isinstance(other, bool):
            return self.scale(other)
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return mul(self, other)

    __rmul__ = __mul__

    def __pow__(self, exponent):
        if isinstance(exponent, bool) or not isinstance(exponent, int) or exponent < 0:
            raise SeriesError('Only nonnegative integer powers are supported')
        result = GradedSeries.constant(self._num_vars, self._trunc_degree, 1)
        for _ in range(exponent):
            result = mul(result, self)
        return result

    def scale(self, factor):
        factor = Fraction(factor)
        return GradedSeries(self._num_vars, self._trunc_degree,
                            {e: c * factor for e, c in self._terms.items()})

    def truncate(self, degree):
        """Re-truncate at a lower degree."""
        return GradedSeries(self._num_vars, min(degree, self._trunc_degree), self._terms)

    def __eq__(self, other):
        if isinstance(other, GradedSeries):
            return (self._num_vars == other._num_vars and
                    self._trunc_degree == other._trunc_degree and
                    self._terms == other._terms)
        if isinstance(other, (int, Fraction)) and not isinstance(other, bool):
            return self == GradedSeries.constant(self._num_vars, self._trunc_degree, other)
        return NotImplemented

    def __ne__(self, other):
        result = self.__eq__(other)
        return result if result is NotImplemented else not result

    def __hash__(self):
        return hash((self._num_vars, self._trunc_degree, frozenset(self._terms.items())))

    def render(self):
        """Render as sorted "coeff * a1^e1*a2^e2" lines, lowest degree first."""
        lines = []
        for exps in sorted(self._terms, key=lambda e: (sum(e), tuple(-x for x in e))):
            lines.append('{} * {}'.format(format_rat(self._terms[exps]), render_monomial(exps)))
        return lines

    def __str__(self):
        return ' + '.join(self.render()) if self._terms else '0'

    def __repr__(self):
        return 'GradedSeries(g={}, D={}, {})'.format(self._num_vars, self._trunc_degree, self)


def render_monomial(exps, symbol='a'):
    factors = []
    for k, e in enumerate(exps):
        if e == 1:
            factors.append('{}{}'.format(symbol, k + 1))
        elif e > 1:
            factors.append('{}{}^{}'.format(symbol, k + 1, e))
    return '*'.join(factors) or '1'


def add(a, b):
    a._coerce(b)
    terms = dict(a._terms)
    for exps, coeff in b._terms.items():
        terms[exps] = terms.get(exps, 0) + coeff
    return GradedSeries(a.num_vars, a.trunc_degree, terms)


def mul(a, b):
    """Truncated product; pairs whose degrees add past D are never formed."""
    a._coerce(b)
    top = a.trunc_degree
    b_groups = b.by_degree()
    terms = defaultdict(Fraction)
    for ea, ca in a._terms.items():
        da = sum(ea)
        for db in range(0, top - da + 1):
            for eb, cb in b_groups.get(db, ()):
                terms[tuple(x + y for x, y in zip(ea, eb))] += ca * cb
    return GradedSeries(a.num_vars, top, terms)


def grade_component(s, k):
    """The degree-k part of s, as a series over the same (g, D)."""
    return GradedSeries(s.num_vars, s.trunc_degree,
                        {e: c for e, c in s.items() if sum(e) == k})


def components(s):
    return [grade_component(s, k) for k in range(s.trunc_degree + 1)]


def compose_univariate(coeffs, s):
    """
    Evaluate sum_n coeffs[n] * s^n in the truncated ring by Horner's rule.

    :param coeffs: rationals c_0, c_1, ...; entries past D are ignored.
    :param s: a series with zero constant term, so that the sum is finite.
    """
    if s.constant_term != 0:
        raise SeriesError('Cannot substitute a series with nonzero constant term {}'
                          .format(s.constant_term))
    coeffs = list(coeffs)[:s.trunc_degree + 1]
    result = GradedSeries(s.num_vars, s.trunc_degree)
    for c in reversed(coeffs):
        result = mul(result, s) + c
    return result


def exp_series(s):
    """sum_{k <= D} s^k / k!, for s with zero constant term."""
    if s.constant_term != 0:
        raise SeriesError('exp_series needs a zero constant term, got {}'
                          .format(s.constant_term))
    return compose_univariate([Fraction(1, factorial(k)) for k in range(s.trunc_degree + 1)], s)


def log_series(s):
    """sum_{k=1..D} (-1)^{k+1} (s - 1)^k / k, for s with constant term 1."""
    if s.constant_term != 1:
        raise SeriesError('log_series needs constant term 1, got {}'.format(s.constant_term))
    coeffs = [Fraction(0)] + [Fraction((-1) ** (k + 1), k) for k in range(1, s.trunc_degree + 1)]
    return compose_univariate(coeffs, s - 1)


def inverse(s):
    """Multiplicative inverse of a unit series (constant term 1)."""
    if s.constant_term != 1:
        raise SeriesError('Only series with constant term 1 are inverted here, got {}'
                          .format(s.constant_term))
    return compose_univariate([(-1) ** k for k in range(s.trunc_degree + 1)], s - 1)


def is_symmetric(s):
    """
    Check s is invariant under permuting the variables.

    Terms are grouped into orbits by their sorted exponent vector; each orbit must be
    fully present with a single coefficient.
    """
    if s.num_vars > MAX_SYMMETRIC_VARS:
        raise SeriesError('Symmetry checks are limited to {} variables, got {}'
                          .format(MAX_SYMMETRIC_VARS, s.num_vars))
    orbits = defaultdict(list)
    for exps, coeff in s.items():
        orbits[tuple(sorted(exps, reverse=True))].append(coeff)
    for rep, coeffs in orbits.items():
        if len(coeffs) != _orbit_size(rep) or len(set(coeffs)) != 1:
            return False
    return True


def _orbit_size(exps):
    size = factorial(len(exps))
    for value in set(exps):
        size //= factorial(exps.count(value))
    return size


class PowerSumExpr(object):
    """
    A rational combination of power-sum products p_lambda = p_{l1} p_{l2} ...

    Partitions are stored as weakly decreasing tuples; the empty partition is the
    constant 1.
    """

    __slots__ = ('_terms',)

    def __init__(self, terms=None):
        self._terms = {}
        for partition, coeff in (terms or {}).items():
            partition = tuple(sorted(partition, reverse=True))
            if any(part < 1 for part in partition):
                raise SeriesError('Partition parts must be positive: {}'.format(partition))
            coeff = Fraction(coeff)
            if coeff:
                self._terms[partition] = self._terms.get(partition, 0) + coeff
                if not self._terms[partition]:
                    del self._terms[partition]

    @classmethod
    def power_sum(cls, m, coeff=1):
        return cls({(m,): coeff})

    @classmethod
    def constant(cls, value):
        return cls({(): value})

    def items(self):
        return self._terms.items()

    def coefficient(self, partition):
        return self._terms.get(tuple(sorted(partition, reverse=True)), Fraction(0))

    def is_zero(self):
        return not self._terms

    def degree_component(self, k):
        return PowerSumExpr({p: c for p, c in self._terms.items() if sum(p) == k})

    def truncate(self, degree):
        return PowerSumExpr({p: c for p, c in self._terms.items() if sum(p) <= degree})

    def max_part(self):
        return max([max(p) for p in self._terms if p] or [0])

    def scale(self, factor):
        return PowerSumExpr({p: c * factor for p, c in self._terms.items()})

    def __add__(self, other):
        terms = dict(self._terms)
        for p, c in other._terms.items():
            terms[p] = terms.get(p, 0) + c
        return PowerSumExpr(terms)

    def __sub__(self, other):
        return self + other.scale(-1)

    def __neg__(self):
        return self.scale(-1)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)) and not isinstance(other, bool):
            return self.scale(other)
        terms = defaultdict(Fraction)
        for p, c in self._terms.items():
            for q, d in other._terms.items():
                terms[tuple(sorted(p + q, reverse=True))] += c * d
        return PowerSumExpr(terms)

    __rmul__ = __mul__

    def __eq__(self, other):
        if not isinstance(other, PowerSumExpr):
            return NotImplemented
        return self._terms == other._terms

    def __ne__(self, other):
        result = self.__eq__(other)
        return result if result is NotImplemented else not result

    def __hash__(self):
        return hash(frozenset(self._terms.items()))

    def render(self):
        pieces = []
        for p in sorted(self._terms, key=lambda q: (sum(q), q)):
            pieces.append('{} * {}'.format(format_rat(self._terms[p]), _render_partition(p)))
        return pieces

    def __str__(self):
        return ' + '.join(self.render()) if self._terms else '0'

    def __repr__(self):
        return 'PowerSumExpr({})'.format(self)


def _render_partition(partition):
    if not partition:
        return '1'
    factors = []
    for part in sorted(set(partition), reverse=True):
        count = partition.count(part)
        factors.append('p{}'.format(part) if count == 1 else 'p{}^{}'.format(part, count))
    return '*'.join(factors)


@lru_cache(maxsize=2**10)
def power_sum_series(g, D, m):
    """p_m = a1^m + ... + ag^m as a series."""
    terms = {}
    for k in range(g):
        exps = [0] * g
        exps[k] = m
        terms[tuple(exps)] = 1
    return GradedSeries(g, D, terms)


@lru_cache(maxsize=2**10)
def elementary_series(g, D, k):
    """The elementary symmetric polynomial e_k in g variables."""
    terms = {}
    for exps in _zero_one_vectors(g, k):
        terms[exps] = 1
    return GradedSeries(g, D, terms)


def _zero_one_vectors(g, k):
    if k == 0:
        yield (0,) * g
        return
    if g == 0:
        return
    for rest in _zero_one_vectors(g - 1, k - 1):
        yield (1,) + rest
    for rest in _zero_one_vectors(g - 1, k):
        yield (0,) + rest


@lru_cache(maxsize=2**12)
def _elementary_monomial(g, D, alpha):
    result = GradedSeries.constant(g, D, 1)
    for k, power in enumerate(alpha, start=1):
        for _ in range(power):
            result = mul(result, elementary_series(g, D, k))
    return result


@lru_cache(maxsize=2**8)
def elementary_in_power_sums(k):
    """Newton's identity k e_k = sum_{i=1..k} (-1)^{i-1} e_{k-i} p_i, solved for e_k."""
    if k == 0:
        return PowerSumExpr.constant(1)
    total = PowerSumExpr()
    for i in range(1, k + 1):
        total = total + elementary_in_power_sums(k - i) * PowerSumExpr.power_sum(i, (-1) ** (i - 1))
    return total.scale(Fraction(1, k))


def to_elementary(s):
    """
    Rewrite a symmetric series as a polynomial in e_1..e_g.

    Repeatedly cancels the lexicographically leading monomial a^mu (mu weakly decreasing)
    against e_1^{mu1-mu2} ... e_g^{mug}. Returns a dict from exponent vectors alpha to
    coefficients.
    """
    g, top = s.num_vars, s.trunc_degree
    if not is_symmetric(s):
        raise SeriesError('Series is not symmetric in its {} variables'.format(g))
    remainder = s
    result = {}
    while not remainder.is_zero():
        mu = max(remainder.terms)
        coeff = remainder.coefficient(mu)
        alpha = tuple(mu[k] - (mu[k + 1] if k + 1 < g else 0) for k in range(g))
        result[alpha] = result.get(alpha, 0) + coeff
        remainder = remainder - _elementary_monomial(g, top, alpha).scale(coeff)
    return result


def to_power_sums(s):
    """
    Exact rewrite of a symmetric series in the power-sum basis.

    The result only involves p_1..p_g: for g variables these are algebraically
    independent, so the rewrite is unique. Any p_m with m > g is expressed through them
    (the relation ideal is generated by Newton's identity e_{g+1} = 0), so for inputs
    built from p_lambda with parts <= g the round trip through from_power_sums is the
    identity.
    """
    top = s.trunc_degree
    result = PowerSumExpr()
    for alpha, coeff in to_elementary(s).items():
        term = PowerSumExpr.constant(coeff)
        for k, power in enumerate(alpha, start=1):
            for _ in range(power):
                term = (term * elementary_in_power_sums(k)).truncate(top)
        result = result + term
    logger.debug('Rewrote a degree-%d symmetric series into %d power-sum terms',
                 top, len(result._terms))
    return result


def from_power_sums(expr, g, D):
    """Evaluate a PowerSumExpr in g variables, truncated at degree D."""
    result = GradedSeries(g, D)
    for partition, coeff in expr.items():
        if sum(partition) > D:
            continue
        term = GradedSeries.constant(g, D, coeff)
        for part in partition:
            term = mul(term, power_sum_series(g, D, part))
        result = result + term
    return result
