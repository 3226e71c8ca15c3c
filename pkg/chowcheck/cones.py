# This Source Code Form is subject to the terms of the Mozilla Public
# License, v. 2.0. If a copy of the MPL was not distributed with this
# file, You can obtain one at http://mozilla.org/MPL/2.0/.

"""
Cones in B(N) x N^dual and the involution (b, l) -> (b, -l).

A point of B(N) x N^dual is a pair (b, l) of an integer symmetric g x g matrix and an
integer covector. Coordinates are the upper triangle of b, row by row, followed by l.
"""

import logging
import os
from collections import namedtuple
from itertools import groupby, permutations, product

import numpy as np
import yaml

from . import shared_utils as utils
from .shared_utils import ParserError
from .util import linalg

logger = logging.getLogger(__name__)

STATUSES = ('smooth-fixed', 'hypothesis-violation', 'not-smooth', 'no-witness', 'odd-level',
            'failed')


class LatticeContext(namedtuple('LatticeContext', ('g',))):
    __slots__ = ()

    def __new__(cls, g):
        if isinstance(g, bool) or not isinstance(g, int) or g < 1:
            raise ValueError('The rank of N must be a positive integer, got {!r}'.format(g))
        return super(LatticeContext, cls).__new__(cls, g)

    @property
    def dim_b(self):
        return self.g * (self.g + 1) // 2

    @property
    def dim(self):
        return self.dim_b + self.g

    def coordinates(self, b, l):
        upper = [b[i][j] for i in range(self.g) for j in range(i, self.g)]
        return upper + list(l)


def _freeze(b, l):
    return (tuple(tuple(int(x) for x in row) for row in b), tuple(int(x) for x in l))


class Cone(object):
    """
    A cone given by integer generators (b_k, l_k). Generators are kept sorted so that
    cones with the same generators compare equal.
    """

    def __init__(self, generators):
        frozen = [_freeze(b, l) for b, l in generators]
        if not frozen:
            raise ValueError('A cone needs at least one generator')
        g = len(frozen[0][1])
        for b, l in frozen:
            _validate_generator(b, l, g)
        self._generators = tuple(sorted(frozen))
        self._ctx = LatticeContext(g)

    @property
    def generators(self):
        return self._generators

    @property
    def context(self):
        return self._ctx

    @property
    def rank(self):
        return len(self._generators)

    def vectors(self):
        return [self._ctx.coordinates(b, l) for b, l in self._generators]

    def __eq__(self, other):
        return isinstance(other, Cone) and self._generators == other._generators

    def __ne__(self, other):
        return not self == other

    def __hash__(self):
        return hash(self._generators)

    def __repr__(self):
        return 'Cone({})'.format(list(self._generators))


def _validate_generator(b, l, g):
    if len(l) != g or len(b) != g or any(len(row) != g for row in b):
        raise ValueError('Generator ({}, {}) does not have rank {}'.format(b, l, g))
    if any(b[i][j] != b[j][i] for i in range(g) for j in range(g)):
        raise ValueError('b = {} is not symmetric'.format(b))
    if not any(l) and not any(any(row) for row in b):
        raise ValueError('Generators must be nonzero')


def is_smooth(cone, ctx=None):
    """Whether the generators extend to a Z-basis: independent, with all elementary
    divisors equal to 1."""
    vectors = cone.vectors()
    if linalg.rank(vectors) != len(vectors):
        return False
    return all(d == 1 for d in linalg.invariant_factors(vectors))


def act(gamma, mu, point):
    """
    The action of (gamma, mu) in GL(N) x N on a pair (b, l):
        b' = gamma^-T b gamma^-1,  l' = l gamma^-1 + b'(mu, -).

    (gamma1, mu1) . (gamma2, mu2) = (gamma1 gamma2, mu1 + gamma1 mu2).

    :raises UnimodularError: if gamma is not invertible over Z.
    """
    b, l = point
    inverse = np.array(linalg.integer_inverse(gamma), dtype=object)
    b = np.array(b, dtype=object)
    b_new = inverse.T.dot(b).dot(inverse)
    l_new = np.array(l, dtype=object).dot(inverse) + b_new.dot(np.array(mu, dtype=object))
    return _freeze(b_new.tolist(), l_new.tolist())


def compose(x, y):
    """The group law: x . y for pairs (gamma, mu)."""
    gamma1, mu1 = x
    gamma2, mu2 = y
    g1 = np.array(gamma1, dtype=object)
    gamma = g1.dot(np.array(gamma2, dtype=object))
    mu = np.array(mu1, dtype=object) + g1.dot(np.array(mu2, dtype=object))
    return [list(map(int, row)) for row in gamma.tolist()], [int(x) for x in mu.tolist()]


def involution(g, mu=None):
    """The pair (-I, mu)."""
    minus = [[-1 if i == j else 0 for j in range(g)] for i in range(g)]
    return minus, list(mu) if mu is not None else [0] * g


def in_ctilde(point, ctx=None):
    """Whether b is positive semi-definite and l vanishes on the kernel of b."""
    b, l = point
    if any(minor < 0 for _, minor in linalg.principal_minors(b)):
        return False
    for k in linalg.nullspace(b):
        if sum(x * y for x, y in zip(l, k)) != 0:
            return False
    return True


class Witness(namedtuple('Witness', ('permutation', 'mu'))):
    __slots__ = ()

    def to_dict(self):
        return {'permutation': list(self.permutation), 'mu': list(self.mu)}


def default_bound(cone):
    return max(abs(x) for _, l in cone.generators for x in l) * cone.context.g + 1


def b_preserving_permutations(generators):
    """
    Permutations j of sorted generators with b_j(i) = b_i, in lexicographic order.

    Sorting puts generators with equal b next to each other, so j permutes each block
    independently.
    """
    blocks = [tuple(indices) for _, indices in
              groupby(range(len(generators)), key=lambda k: generators[k][0])]
    for choice in product(*(permutations(block) for block in blocks)):
        yield tuple(k for part in choice for k in part)


def find_invariance_witness(cone, ctx=None, bound=None):
    """
    Search for a permutation j of the generators and mu with
        b_i = b_j(i)  and  l_i + l_j(i) = b_j(i) mu,
    so that (-I, mu) maps the generator set to itself.

    Permutations are tried in lexicographic order and mu in centered order within
    |mu_k| <= bound. Not finding one proves nothing beyond the bound.

    :return: a Witness or None.
    """
    ctx = ctx or cone.context
    if bound is None:
        bound = default_bound(cone)
    if not is_smooth(cone, ctx):
        logger.warning('Searching a witness on a cone that is not smooth: %r', cone)
    gens = cone.generators
    for perm in b_preserving_permutations(gens):
        rows, rhs = [], []
        for i, k in enumerate(perm):
            b_k, l_k = gens[k]
            rows.extend(list(row) for row in b_k)
            rhs.extend(x + y for x, y in zip(gens[i][1], l_k))
        for mu in linalg.integer_solutions(rows, rhs, bound):
            logger.debug('Candidate witness %s, mu = %s', perm, mu)
            witness = Witness(tuple(perm), tuple(mu))
            if _witness_holds(cone, witness):
                return witness
    return None


def _witness_holds(cone, witness):
    gens = cone.generators
    minus, mu = involution(cone.context.g, witness.mu)
    return all(act(minus, mu, gens[k]) == gens[i] for i, k in enumerate(witness.permutation))


class FixedStratumReport(namedtuple('FixedStratumReport',
                                    ('status', 'passed', 'mu_prime', 'checks'))):
    """checks is a list of (name, bool) in the order they were made."""
    __slots__ = ()

    def to_dict(self):
        return {
            'status': self.status,
            'passed': self.passed,
            'mu_prime': list(self.mu_prime) if self.mu_prime is not None else None,
            'checks': [[name, ok] for name, ok in self.checks],
        }


def fixed_stratum_check(cone, witness, ctx=None, even_level=True):
    """
    Check that the stratum fixed by the involution lies in the smooth locus.

    With an even level, mu = 2 mu'. The generators of a smooth cone are distinct mod 2,
    which forces j(i) = i; then l_i = b_i mu' and the generators (b_i, l_i) span a space
    of the same dimension as the b_i.

    :param even_level: whether the level is even; an odd mu then violates the hypothesis.
    """
    ctx = ctx or cone.context
    checks = [('witness valid', _witness_holds(cone, witness))]
    if not checks[0][1]:
        return FixedStratumReport('failed', False, None, checks)
    if any(m % 2 for m in witness.mu):
        if even_level:
            logger.warning('mu = %s is odd at even level for %r', witness.mu, cone)
            return FixedStratumReport('hypothesis-violation', False, None, checks)
        return FixedStratumReport('odd-level', False, None, checks)

    mu_prime = tuple(m // 2 for m in witness.mu)
    gens = cone.generators
    smooth = is_smooth(cone, ctx)
    checks.append(('smooth', smooth))
    reduced = set(tuple(x % 2 for x in ctx.coordinates(b, l)) for b, l in gens)
    checks.append(('distinct mod 2', len(reduced) == len(gens)))
    checks.append(('j is the identity', witness.permutation == tuple(range(len(gens)))))
    b_mu = [tuple(sum(row[k] * mu_prime[k] for k in range(ctx.g)) for row in b)
            for b, _ in gens]
    checks.append(('l_i = b_i mu\'', all(l == bm for (_, l), bm in zip(gens, b_mu))))
    pairs_rank = linalg.rank(cone.vectors())
    b_rank = linalg.rank([ctx.coordinates(b, [0] * ctx.g)[:ctx.dim_b] for b, _ in gens])
    checks.append(('rank (b_i, l_i) = rank b_i', pairs_rank == b_rank))

    passed = all(ok for _, ok in checks)
    status = 'smooth-fixed' if passed else ('not-smooth' if not smooth else 'failed')
    return FixedStratumReport(status, passed, mu_prime, checks)


class ConeVerdict(namedtuple('ConeVerdict', ('status', 'smooth', 'witness', 'stratum'))):
    __slots__ = ()

    def to_dict(self):
        return {
            'status': self.status,
            'smooth': self.smooth,
            'witness': self.witness.to_dict() if self.witness else None,
            'stratum': self.stratum.to_dict() if self.stratum else None,
        }


def check_cone(cone, even_level=True, bound=None):
    """Smoothness, witness search and fixed stratum check in one go."""
    ctx = cone.context
    smooth = is_smooth(cone, ctx)
    witness = find_invariance_witness(cone, ctx, bound)
    if not smooth:
        return ConeVerdict('not-smooth', False, witness, None)
    if witness is None:
        return ConeVerdict('no-witness', True, None, None)
    report = fixed_stratum_check(cone, witness, ctx, even_level)
    return ConeVerdict(report.status, True, witness, report)


def _parse_matrix(value, what, where):
    try:
        parsed = yaml.safe_load(value)
    except yaml.YAMLError as e:
        raise ParserError('{}: cannot parse {}: {}'.format(where, what, e))
    if what == 'b':
        ok = isinstance(parsed, list) and all(isinstance(row, list) for row in parsed)
        flat = [x for row in parsed for x in row] if ok else []
    else:
        ok = isinstance(parsed, list)
        flat = parsed if ok else []
    if not ok or not all(isinstance(x, int) and not isinstance(x, bool) for x in flat):
        raise ParserError('{}: {} must be integers, got {!r}'.format(where, what, value))
    return parsed


def parse_cone_text(text, name='cone'):
    """
    Parse a cone file.

    :return: a pair (Cone, options) where options holds 'expect' and 'even_level'.
    :raises ParserError: on malformed lines or inconsistent generators.
    """
    generators = []
    options = {'expect': None, 'even_level': True}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split('#', 1)[0].strip()
        if not line:
            continue
        where = '{}:{}'.format(name, lineno)
        fields = dict()
        for part in line.split(';'):
            if '=' not in part:
                raise ParserError("{}: expected 'key = value', got {!r}".format(where, part))
            key, value = part.split('=', 1)
            fields[key.strip()] = value.strip()
        if set(fields) == {'b', 'l'}:
            b = _parse_matrix(fields['b'], 'b', where)
            l = _parse_matrix(fields['l'], 'l', where)
            generators.append((b, l))
        elif set(fields) == {'expect'}:
            if fields['expect'] not in STATUSES:
                raise ParserError('{}: unknown expectation {!r}'.format(where, fields['expect']))
            options['expect'] = fields['expect']
        elif set(fields) == {'even_level'}:
            if fields['even_level'] not in ('true', 'false'):
                raise ParserError('{}: even_level must be true or false'.format(where))
            options['even_level'] = fields['even_level'] == 'true'
        else:
            raise ParserError('{}: unexpected keys {}'.format(where, sorted(fields)))
    if not generators:
        raise ParserError('{}: no generators'.format(name))
    try:
        return Cone(generators), options
    except ValueError as e:
        raise ParserError('{}: {}'.format(name, e))


def parse_cone_file(filename):
    name = os.path.splitext(os.path.basename(filename))[0]
    return parse_cone_text(utils.load_text_file(filename), name)


def cone_files(directory):
    return sorted(os.path.join(directory, f) for f in os.listdir(directory)
                  if f.endswith('.cone'))
