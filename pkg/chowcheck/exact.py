#!/usr/bin/env python
# encoding: utf-8

# This Source Code Form is subject to the terms of the Mozilla Public
# License, v. 2.0. If a copy of the MPL was not distributed with this
# file, You can obtain one at http://mozilla.org/MPL/2.0/.

from __future__ import division

import logging
import threading
from fractions import Fraction
from math import comb, factorial

logger = logging.getLogger(__name__)

# Exact rationals are plain fractions: always in lowest terms with a positive
# denominator, and equal iff numerators and denominators agree.
Rat = Fraction

# Tables only ever grow, under _TABLE_LOCK; readers index below len() without locking.
_BERNOULLI = [Fraction(1), Fraction(-1, 2)]
# Coefficients v_n of 2 / (1 + e^t) = sum v_n t^n, so that E_n(0) = n! v_n.
_EULER_SERIES = [Fraction(1)]
_TABLE_LOCK = threading.Lock()


def _check_index(n, minimum=0):
    if isinstance(n, bool) or not isinstance(n, int):
        raise ValueError('Expected an integer index, got {!r}'.format(n))
    if n < minimum:
        raise ValueError('Index must be at least {}, got {}'.format(minimum, n))


def _extend_bernoulli(n):
    with _TABLE_LOCK:
        for m in range(len(_BERNOULLI), n + 1):
            if m % 2:
                _BERNOULLI.append(Fraction(0))
                continue
            # sum_{k <= m} C(m+1, k) B_k = 0, odd terms above B_1 vanish
            acc = (m + 1) * _BERNOULLI[1]
            for k in range(0, m, 2):
                acc += comb(m + 1, k) * _BERNOULLI[k]
            _BERNOULLI.append(-acc / (m + 1))
        logger.debug('Bernoulli table extended through %d', n)


def _extend_euler(n):
    with _TABLE_LOCK:
        for m in range(len(_EULER_SERIES), n + 1):
            # (1 + e^t) / 2 = 1 + sum_{k >= 1} t^k / (2 k!)
            acc = Fraction(0)
            for k in range(1, m + 1):
                acc += _EULER_SERIES[m - k] / (2 * factorial(k))
            _EULER_SERIES.append(-acc)
        logger.debug('Euler table extended through %d', n)


def bernoulli(n):
    """
    Returns the Bernoulli number B_n, with the convention t / (e^t - 1) = sum B_n t^n / n!.

    So B_1 = -1/2 and B_{2k+1} = 0 for k >= 1.

    :param n: a nonnegative integer.
    :return: B_n as a Fraction.
    """
    _check_index(n)
    if n >= len(_BERNOULLI):
        _extend_bernoulli(n)
    return _BERNOULLI[n]


def euler_number(n):
    """
    Returns E_n(0), the value at 0 of the n-th Euler polynomial.

    These are the coefficients of 1 / (1 + e^t) = 1/2 sum E_n(0) t^n / n!, obtained by exact
    inversion of the series (1 + e^t) / 2.

    :param n: a nonnegative integer.
    :return: E_n(0) as a Fraction.
    """
    _check_index(n)
    if n >= len(_EULER_SERIES):
        _extend_euler(n)
    return _EULER_SERIES[n] * factorial(n)


def euler_via_bernoulli(n):
    """
    Returns 2 (1 - 2^{2n}) / (2n) * B_{2n}, which equals E_{2n-1}(0).

    :param n: a positive integer.
    :raises ArithmeticError: if the value is zero, which would mean B_{2n} = 0.
    """
    _check_index(n, minimum=1)
    value = Fraction(2 * (1 - 4 ** n), 2 * n) * bernoulli(2 * n)
    if value == 0:
        raise ArithmeticError('E_{}(0) computed from B_{} vanishes'.format(2 * n - 1, 2 * n))
    return value


def bridge_mismatches(n_max):
    """Lists every n in 1..n_max where the Bernoulli route and the series route to
    E_{2n-1}(0) disagree; an empty list means the two routes agree exactly."""
    return [n for n in range(1, n_max + 1) if euler_via_bernoulli(n) != euler_number(2 * n - 1)]


def todd_coefficients(degree):
    """Coefficients c_0..c_degree of x / (1 - e^{-x}) = sum (-1)^n B_n x^n / n!."""
    return [(-1) ** n * bernoulli(n) / factorial(n) for n in range(degree + 1)]


__all__ = ['Rat', 'bernoulli', 'euler_number', 'euler_via_bernoulli', 'bridge_mismatches',
           'todd_coefficients']
