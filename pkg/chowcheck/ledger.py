#!/usr/bin/env python
# encoding: utf-8

# This Source Code Form is subject to the terms of the Mozilla Public
# License, v. 2.0. If a copy of the MPL was not distributed with this
# file, You can obtain one at http://mozilla.org/MPL/2.0/.

"""
The cancellation ledger behind the logarithmic Grothendieck-Riemann-Roch formula.

Classes of the form c_g * Y_{i_1} * ... * Y_{i_mu} are rewritten with two rules: a kill
rule (the product vanishes when the stratum is empty or when delta_I > 0) and a
substitution rule (a repeated Y_i is traded for a pulled back base class plus larger
strata). What survives is pushed forward and shown to vanish by a dimension count.
The correction terms coming from the multiple fibers are tracked by their support only.
"""

from __future__ import division

import logging
from collections import namedtuple
from fractions import Fraction
from itertools import combinations, combinations_with_replacement

from . import kclass
from .cycles import CycleExpr, make_monomial
from .shared_utils import format_rat
from .util import linalg

logger = logging.getLogger(__name__)

ORIGINS = ('err', 'ext-C', 'v_j', 'w_j', 'N(i)')


class RewriteError(RuntimeError):
    """Raised when rewriting cannot proceed; carries the working expression."""

    def __init__(self, message, dump=None):
        super(RewriteError, self).__init__(message)
        self.dump = dump


class Substitution(namedtuple('Substitution', ('index', 'support', 'gamma', 'beta'))):
    """
    One application of the substitution rule Y_i * Y_I = f^*(Gamma) * Y_I + sum beta_l Y_{I+l}.

    gamma maps base components to the coefficients of Gamma, beta maps the added
    components l to beta_l. Zero entries are omitted from both.
    """
    __slots__ = ()

    def to_dict(self, cfg):
        return {
            'index': self.index,
            'support': list(cfg.sort_y(self.support)),
            'gamma': {t: format_rat(c) for t, c in self.gamma.items()},
            'beta': {y: format_rat(c) for y, c in self.beta.items()},
        }


class CorrectionTerm(namedtuple('CorrectionTerm',
                                ('origin', 'j', 'support', 'monomial', 'path', 'certified',
                                 'detail'))):
    """A correction term tracked at support level, with the path that annihilates it."""
    __slots__ = ()

    def to_dict(self, cfg):
        return {
            'origin': self.origin,
            'j': self.j,
            'support': list(cfg.sort_y(self.support)),
            'monomial': self.monomial,
            'path': self.path,
            'certified': self.certified,
            'detail': self.detail,
        }


class ComponentClasses(namedtuple('ComponentClasses',
                                  ('z', 'phi', 'v', 'phi_total', 'v_total', 'n'))):
    """
    Per base component T_j: z[j] are the Y_i with nu_i^j >= 2, phi[j] the components
    mapping onto T_j, v[j] those over T_j mapping to a deeper stratum. n[i] counts the
    extra T_j containing Y_i.
    """
    __slots__ = ()


class CertificationReport(namedtuple('CertificationReport',
                                     ('config', 'passed', 'first_failure', 'cg_identity',
                                      'err_terms', 'ledger', 'counterexamples', 'lines'))):
    __slots__ = ()

    def to_dict(self, cfg):
        return {
            'config': self.config,
            'passed': self.passed,
            'first_failure': self.first_failure,
            'cg_identity': self.cg_identity.to_dict(),
            'err_terms': [t.to_dict(cfg) for t in self.err_terms],
            'ledger': [t.to_dict(cfg) for t in self.ledger],
            'counterexamples': [t.to_dict(cfg) for t in self.counterexamples],
        }


def _stratum(names, cfg):
    stratum = frozenset(names)
    if not stratum:
        raise ValueError('Expected a nonempty subset of components')
    if not cfg.is_stratum(stratum):
        raise ValueError('{} is not a nonempty stratum of {}'
                         .format(cfg.render_set(stratum), cfg.name))
    return stratum


def delta(names, cfg):
    """
    Codimension of the image of phi_I: |I| minus the rank of nu restricted to the rows
    in I and the columns in J(I).

    :param names: the components in I.
    :param cfg: a BoundaryConfig.
    :raises ValueError: if I is empty or Y_I is empty.
    """
    stratum = _stratum(names, cfg)
    columns = cfg.sort_t(cfg.j_of(stratum))
    rows = [cfg.row(y, columns) for y in cfg.sort_y(stratum)]
    value = len(stratum) - linalg.rank(rows)
    if value == 0 and len(stratum) > len(columns):
        raise RuntimeError('delta({}) = 0 with |I| > |J(I)|'.format(cfg.render_set(stratum)))
    return value


def residue_factors(names, cfg):
    """Whether the residue onto O_{Y_I} factors through the relative log forms."""
    return delta(names, cfg) > 0


def kill_rule(mono, cfg, origin=None):
    """
    Whether c_g times the monomial vanishes.

    It does when Y_I is empty or delta_I > 0, I being the underlying set of the Y
    symbols. For terms coming from O_Y~ / O_T~ (origin 'err') every stratum with at
    least two components is killed as well.

    :raises ValueError: if the monomial does not carry c_g.
    """
    if mono.marker != 'cg':
        raise ValueError('kill_rule applies to c_g monomials, got {}'.format(mono.render()))
    support = mono.support
    if not support:
        return False
    if not cfg.is_stratum(support):
        return True
    if origin == 'err' and len(support) >= 2:
        return True
    return delta(support, cfg) > 0


def solve_substitution(index, names, cfg):
    """
    Solve sum_j gamma_j nu_{i'}^j = [i' = index] over i' in I for gamma supported on J(I).

    Among all solutions the one with the fewest nonzero gamma_j is taken, ties going to
    the lexicographically smallest set of columns.

    :raises ValueError: if index is not in I or delta_I > 0.
    :raises RewriteError: if the system has no solution.
    """
    stratum = _stratum(names, cfg)
    if index not in stratum:
        raise ValueError('{} is not in {}'.format(index, cfg.render_set(stratum)))
    if delta(stratum, cfg) > 0:
        raise ValueError('delta({}) > 0, substitution does not apply'
                         .format(cfg.render_set(stratum)))
    rows_y = cfg.sort_y(stratum)
    columns = cfg.sort_t(cfg.j_of(stratum))
    target = [1 if y == index else 0 for y in rows_y]

    gamma = None
    for size in range(1, len(columns) + 1):
        for subset in combinations(columns, size):
            solution = linalg.solve([cfg.row(y, subset) for y in rows_y], target)
            if solution is not None:
                gamma = dict((t, c) for t, c in zip(subset, solution) if c)
                break
        if gamma is not None:
            break
    if gamma is None:
        raise RewriteError('No Gamma for Y_{} * Y_{} although delta is 0'
                           .format(index, cfg.render_set(stratum)))

    beta = {}
    for y in cfg.components_y:
        if y in stratum:
            continue
        value = sum((c * cfg.nu(y, t) for t, c in gamma.items()), Fraction(0))
        if value and cfg.is_stratum(stratum | {y}):
            beta[y] = -value
    return Substitution(index, stratum, gamma, beta)


def check_substitution(sub, cfg):
    """
    Multiply Gamma back through nu: f^*(Gamma) must equal Y_i plus the components outside
    I, with coefficients -beta_l wherever Y_{I+l} is nonempty.
    """
    pulled = {}
    for y in cfg.components_y:
        pulled[y] = sum((c * cfg.nu(y, t) for t, c in sub.gamma.items()), Fraction(0))
    if not set(sub.gamma) <= cfg.j_of(sub.support):
        return False
    for y in sub.support:
        if pulled[y] != (1 if y == sub.index else 0):
            return False
    for y, value in pulled.items():
        if y in sub.support:
            continue
        if cfg.is_stratum(sub.support | {y}):
            if sub.beta.get(y, 0) != -value:
                return False
        elif y in sub.beta:
            return False
    return True


def substitute_rule(index, names, cfg):
    """
    The class Y_i * Y_I rewritten as f^*(Gamma) * Y_I + sum_l beta_l Y_{I+l}.

    :return: a CycleExpr without markers.
    """
    sub = solve_substitution(index, names, cfg)
    return _substitution_expr(sub, cfg)


def _substitution_expr(sub, cfg):
    ys = tuple(sub.support)
    result = CycleExpr.zero(cfg)
    for t, c in sub.gamma.items():
        result = result + CycleExpr.monomial(cfg, ys=ys, pullbacks=(t,), coeff=c)
    for y, b in sub.beta.items():
        result = result + CycleExpr.monomial(cfg, ys=ys + (y,), coeff=b)
    return result


def _apply(mono, coeff, sub, cfg):
    # Y_i * Y_I * R -> f^*(Gamma) * Y_I * R + sum beta_l * Y_l * Y_I * R
    rest = list(mono.ys)
    rest.remove(sub.index)
    result = CycleExpr.zero(cfg)
    for t, c in sub.gamma.items():
        m = make_monomial(cfg, mono.marker, rest, mono.pullbacks + (t,))
        result = result + CycleExpr(cfg, {m: coeff * c})
    for y, b in sub.beta.items():
        m = make_monomial(cfg, mono.marker, rest + [y], mono.pullbacks)
        result = result + CycleExpr(cfg, {m: coeff * b})
    return result


def iteration_cap(cfg):
    return len(cfg.components_y) * (cfg.base_dim + cfg.fiber_dim)


def reduce(expr, cfg, rng=None, trace=None):
    """
    Rewrite an expression until every c_g monomial meeting Z is in normal form: Y_I with
    no repeats, delta_I = 0 and times pulled back base classes.

    Each round kills what the kill rule allows and applies one substitution, on the
    smallest repeated index, to every other monomial with a repeat. Monomials without
    c_g or not meeting Z pass through unchanged.

    :param expr: a CycleExpr over cfg.
    :param cfg: the BoundaryConfig.
    :param rng: a numpy RandomState; when given the repeated index is picked at random.
    :param trace: a list receiving one dict per rewriting step.
    :raises RewriteError: if the iteration cap is reached.
    """
    if expr.config is not cfg:
        raise ValueError('Expression and config do not match')
    cap = iteration_cap(cfg)
    current = expr
    for rnd in range(cap + 1):
        result = CycleExpr.zero(cfg)
        changed = False
        for mono, coeff in current.items():
            if mono.marker != 'cg' or not mono.meets(cfg.z_support):
                if rnd == 0:
                    logger.warning('Leaving %s unchanged: it does not carry c_g and meet Z',
                                   mono.render())
                result = result + CycleExpr(cfg, {mono: coeff})
                continue
            if kill_rule(mono, cfg):
                changed = True
                _record(trace, mono, 'killed', _kill_reason(mono, cfg))
                continue
            repeated = mono.repeated(cfg)
            if not repeated:
                result = result + CycleExpr(cfg, {mono: coeff})
                continue
            index = repeated[rng.randint(len(repeated))] if rng is not None else repeated[0]
            sub = solve_substitution(index, mono.support, cfg)
            round_trip = check_substitution(sub, cfg)
            if not round_trip:
                raise RewriteError('Substitution for {} fails its round trip'
                                   .format(mono.render()), current.render())
            _record(trace, mono, 'substituted', sub.to_dict(cfg), round_trip=round_trip)
            result = result + _apply(mono, coeff, sub, cfg)
            changed = True
        logger.debug('Round %d: %s', rnd, result.render())
        current = result
        if not changed:
            return current
    raise RewriteError('No normal form after {} rounds'.format(cap), current.render())


def _kill_reason(mono, cfg):
    if not cfg.is_stratum(mono.support):
        return 'empty stratum'
    return 'delta({}) = {}'.format(cfg.render_set(mono.support), delta(mono.support, cfg))


def _record(trace, mono, action, detail, **extra):
    if trace is None:
        return
    entry = {'monomial': mono.render(), 'action': action, 'detail': detail}
    entry.update(extra)
    trace.append(entry)


def pushforward_vanishes(expr, cfg, rng=None):
    """
    Decide whether f_* of a sum of c_g * Y monomials meeting Z vanishes.

    After reduce, c_g is split as f^*(xi) + W. W times a component of Z is zero. Every
    surviving f^*(xi) * f^*(Gamma) * Y_I term has delta_I = 0, so |I| <= |J(I)| and
    Y_I has fibers of dimension g + |J(I)| - |I| >= g over T_{J(I)}; its pushforward
    vanishes.

    :return: a pair (verdict, certificate) where the certificate lists the fate of
        every monomial.
    :raises ValueError: if a monomial does not carry c_g or does not meet Z.
    """
    for mono in expr.monomials():
        if mono.marker != 'cg' or not mono.meets(cfg.z_support):
            raise ValueError('{} does not carry c_g and meet Z'.format(mono.render()))
    trace = []
    normal = reduce(expr, cfg, rng=rng, trace=trace)
    fates = []
    verdict = True
    for mono, coeff in normal.items():
        stratum = mono.support
        js = cfg.j_of(stratum)
        d = delta(stratum, cfg)
        fiber = cfg.fiber_dim + len(js) - len(stratum)
        w_part = CycleExpr(cfg, {make_monomial(cfg, 'W', mono.ys, mono.pullbacks): coeff})
        xi_ok = d == 0 and len(stratum) <= len(js)
        ok = w_part.is_zero() and xi_ok
        fates.append({
            'monomial': mono.render(),
            'coefficient': format_rat(coeff),
            'W': ('W*{} = 0'.format(cfg.sort_y(stratum & cfg.z_support)[0])
                  if w_part.is_zero() else 'survives: ' + w_part.render()),
            'xi': ('|I| = {} <= |J(I)| = {}, fiber dimension {} >= g'
                   .format(len(stratum), len(js), fiber) if xi_ok else
                   '|I| = {} > |J(I)| = {}'.format(len(stratum), len(js))),
            'vanishes': ok,
        })
        if not ok:
            verdict = False
    certificate = {
        'input': expr.render(),
        'normal_form': normal.render(),
        'steps': trace,
        'fates': fates,
    }
    return verdict, certificate


def classify_components(cfg):
    """Split the boundary components along each T_j; see ComponentClasses."""
    z, phi, v = {}, {}, {}
    for t in cfg.components_t:
        over = [y for y in cfg.components_y if cfg.nu(y, t) > 0]
        z[t] = frozenset(y for y in over if cfg.nu(y, t) >= 2)
        phi[t] = frozenset(y for y in over if cfg.j_of([y]) == frozenset([t]))
        v[t] = frozenset(y for y in over if y not in phi[t])
    n = {}
    for y in cfg.components_y:
        n[y] = sum(1 for t in cfg.components_t if cfg.nu(y, t) > 0) - 1
    phi_total = frozenset().union(*phi.values())
    v_total = frozenset().union(*v.values())
    return ComponentClasses(z, phi, v, phi_total, v_total, n)


def _monomials_on(stratum, max_length):
    # every multiset containing each element of the stratum at least once
    base = tuple(sorted(stratum))
    for extra in range(0, max_length - len(base) + 1):
        for more in combinations_with_replacement(base, extra):
            yield base + more


def _via_pushforward(origin, t, stratum, ys, cfg):
    expr = CycleExpr.monomial(cfg, marker='cg', ys=ys)
    mono = make_monomial(cfg, 'cg', ys)
    if not mono.meets(cfg.z_support):
        return CorrectionTerm(origin, t, stratum, mono.render(), 'pushforward', False,
                              'does not meet Z')
    verdict, certificate = pushforward_vanishes(expr, cfg)
    return CorrectionTerm(origin, t, stratum, mono.render(), 'pushforward', verdict,
                          certificate)


def err_terms(cfg):
    """Supports of O_Y~ / O_T~: the strata with at least two components."""
    terms = []
    for stratum in cfg.sorted_strata():
        if len(stratum) < 2:
            continue
        mono = make_monomial(cfg, 'cg', stratum)
        killed = kill_rule(mono, cfg, origin='err')
        terms.append(CorrectionTerm('err', None, stratum, mono.render(), 'strata relation',
                                    killed, None))
    return terms


def correction_support_audit(cfg):
    """
    Enumerate the correction terms coming from the multiple fibers and certify each is
    annihilated by c_g or by the pushforward.

    Only monomials of length at most dim S matter: longer ones push forward to a degree
    above dim S.

    :return: a pair (terms, counterexamples).
    """
    if not cfg.z_support:
        logger.info('%s: Z is empty, the correction sheaf vanishes', cfg.name)
        return [], []
    classes = classify_components(cfg)
    strata = cfg.sorted_strata()
    max_length = cfg.base_dim
    terms = []

    for t in cfg.components_t:
        z_j = classes.z[t]
        for y in cfg.sort_y(z_j):
            # Ext^1 is an O_{Z_j}-module: c_g times it lives on Y_i for i in Z_j
            terms.append(_via_pushforward('ext-C', t, frozenset([y]), (y,), cfg))
        for stratum in strata:
            if not stratum & z_j:
                continue
            for ys in _monomials_on(stratum, max_length):
                terms.append(_via_pushforward('v_j', t, stratum, ys, cfg))

    for t in cfg.components_t:
        over = classes.phi[t] | classes.v[t]
        for stratum in strata:
            if len(stratum) < 2 or not stratum <= over:
                continue
            if stratum <= classes.phi[t]:
                mono = make_monomial(cfg, 'cg', stratum)
                d = delta(stratum, cfg)
                terms.append(CorrectionTerm('w_j', t, stratum, mono.render(), 'kill', d > 0,
                                            'delta = {}'.format(d)))
                continue
            for ys in _monomials_on(stratum, max_length):
                terms.append(_via_pushforward('w_j', t, stratum, ys, cfg))

    for y in cfg.components_y:
        if classes.n[y] <= 0:
            continue
        stratum = frozenset([y])
        for length in range(1, max_length + 1):
            terms.append(_via_pushforward('N(i)', None, stratum, (y,) * length, cfg))

    counterexamples = [term for term in terms if not term.certified]
    for term in counterexamples:
        logger.warning('%s: %s term on %s is not annihilated', cfg.name, term.origin,
                       cfg.render_set(term.support))
    return terms, counterexamples


def theorem_grr_certify(cfg, D=None):
    """
    Certify that the correction factor in the log-GRR formula contributes nothing: the
    alternating sum of ch of the Gauss-Manin pieces then reduces to (-1)^g f_*(c_g),
    which is of degree 0.

    :param cfg: a validated BoundaryConfig; fiber_dim is the genus g.
    :param D: truncation for the c_g identity, 2g + 2 by default.
    :return: a CertificationReport whose lines are the human-readable ledger.
    """
    g = cfg.fiber_dim
    identity = kclass.verify_cg_identity(g, D)
    errs = err_terms(cfg)
    ledger, counterexamples = correction_support_audit(cfg)
    counterexamples = [t for t in errs if not t.certified] + counterexamples

    lines = ['config {}: g = {}, dim S = {}, Z = {}'.format(
        cfg.name, g, cfg.base_dim, cfg.render_set(cfg.z_support))]
    lines.append('c_g identity (D = {}): {}'.format(identity.D,
                                                   'ok' if identity.passed else 'FAILED'))
    for term in errs:
        lines.append('  err on {}: {}'.format(cfg.render_set(term.support),
                                              'killed' if term.certified else 'SURVIVES'))
    if not ledger:
        lines.append('correction ledger: empty')
    for term in ledger:
        where = ' over {}'.format(term.j) if term.j else ''
        what = term.monomial or cfg.render_set(term.support)
        lines.append('  {}{}: {} via {}: {}'.format(
            term.origin, where, what, term.path, 'ok' if term.certified else 'FAILED'))

    first_failure = None
    if not identity.passed:
        first_failure = 'c_g identity at {}'.format(identity.first_failure)
    elif counterexamples:
        first = counterexamples[0]
        first_failure = '{} term on {}'.format(first.origin, cfg.render_set(first.support))
    passed = first_failure is None
    lines.append('certified' if passed else 'not certified: ' + first_failure)
    logger.info('%s: %s', cfg.name, lines[-1])
    return CertificationReport(cfg.name, passed, first_failure, identity, errs, ledger,
                               counterexamples, lines)
