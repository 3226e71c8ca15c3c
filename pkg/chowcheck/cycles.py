# This Source Code Form is subject to the terms of the Mozilla Public
# License, v. 2.0. If a copy of the MPL was not distributed with this
# file, You can obtain one at http://mozilla.org/MPL/2.0/.

import re
from collections import namedtuple
from fractions import Fraction

from .shared_utils import ParserError, format_rat, parse_rat

MARKERS = ('cg', 'W', 'xi')
_MARKER_ORDER = {None: 0, 'cg': 1, 'W': 2, 'xi': 3}
_MARKER_TEXT = {'cg': 'cg', 'W': 'W', 'xi': 'f*(xi)'}

TOKEN_RE = re.compile(r'\s*(?:(f\*\()|(\d+(?:/\d+)?)|([A-Za-z][A-Za-z0-9_]*)|(\S))')


class Monomial(namedtuple('Monomial', ('marker', 'ys', 'pullbacks'))):
    """
    One product of symbols: an optional marker (c_g, W or f^*xi), a multiset of boundary
    components Y_i and a multiset of pulled back base components f^*T_j.

    ys and pullbacks are tuples sorted by the config's declaration order, repeats kept.
    """
    __slots__ = ()

    @property
    def support(self):
        return frozenset(self.ys)

    def codim(self, cfg):
        return (cfg.fiber_dim if self.marker else 0) + len(self.ys) + len(self.pullbacks)

    def repeated(self, cfg):
        return cfg.sort_y(y for y in self.support if self.ys.count(y) >= 2)

    def meets(self, names):
        return bool(self.support & frozenset(names))

    def render(self):
        parts = []
        if self.marker:
            parts.append(_MARKER_TEXT[self.marker])
        parts.extend('f*({})'.format(t) for t in self.pullbacks)
        parts.extend(self.ys)
        return '*'.join(parts) if parts else '1'


def make_monomial(cfg, marker=None, ys=(), pullbacks=()):
    if marker is not None and marker not in MARKERS:
        raise ValueError('Unknown marker {!r}'.format(marker))
    return Monomial(marker, cfg.sort_y(ys), cfg.sort_t(pullbacks))


def multiply_monomials(cfg, a, b):
    if a.marker and b.marker:
        raise ValueError('Cannot multiply {} by {}: at most one of cg, W, f*(xi) per monomial'
                         .format(a.render(), b.render()))
    return make_monomial(cfg, a.marker or b.marker, a.ys + b.ys, a.pullbacks + b.pullbacks)


class CycleExpr(object):
    """
    A Q-linear combination of monomials, kept in normal form.

    Monomials supported on an empty stratum are dropped, and so are W-monomials meeting
    a component of Z. Two expressions over the same config are equal iff their
    normal forms agree.
    """

    def __init__(self, cfg, terms=None):
        self._cfg = cfg
        self._terms = {}
        for mono, coeff in (terms or {}).items():
            self._add(mono, coeff)

    def _add(self, mono, coeff):
        coeff = Fraction(coeff)
        if coeff == 0 or self.vanishes(mono):
            return
        total = self._terms.get(mono, 0) + coeff
        if total:
            self._terms[mono] = total
        else:
            del self._terms[mono]

    def vanishes(self, mono):
        if mono.ys and not self._cfg.is_stratum(mono.support):
            return True
        return mono.marker == 'W' and mono.meets(self._cfg.z_support)

    @classmethod
    def zero(cls, cfg):
        return cls(cfg)

    @classmethod
    def monomial(cls, cfg, marker=None, ys=(), pullbacks=(), coeff=1):
        return cls(cfg, {make_monomial(cfg, marker, ys, pullbacks): coeff})

    @property
    def config(self):
        return self._cfg

    def items(self):
        return sorted(self._terms.items(), key=lambda kv: self.sort_key(kv[0]))

    def monomials(self):
        return [m for m, _ in self.items()]

    def coefficient(self, mono):
        return self._terms.get(mono, Fraction(0))

    def is_zero(self):
        return not self._terms

    def __len__(self):
        return len(self._terms)

    def sort_key(self, mono):
        cfg = self._cfg
        return (mono.codim(cfg), _MARKER_ORDER[mono.marker],
                [cfg.y_key(y) for y in mono.ys], [cfg.t_key(t) for t in mono.pullbacks])

    def _same_config(self, other):
        if other._cfg is not self._cfg:
            raise ValueError('Cannot combine cycle expressions over different configs')

    def __add__(self, other):
        self._same_config(other)
        result = CycleExpr(self._cfg, self._terms)
        for mono, coeff in other._terms.items():
            result._add(mono, coeff)
        return result

    def __neg__(self):
        return self.scale(-1)

    def __sub__(self, other):
        return self + (-other)

    def scale(self, factor):
        factor = Fraction(factor)
        return CycleExpr(self._cfg, {m: c * factor for m, c in self._terms.items()})

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        self._same_config(other)
        result = CycleExpr(self._cfg)
        for m1, c1 in self._terms.items():
            for m2, c2 in other._terms.items():
                result._add(multiply_monomials(self._cfg, m1, m2), c1 * c2)
        return result

    __rmul__ = __mul__

    def __eq__(self, other):
        if not isinstance(other, CycleExpr):
            return NotImplemented
        return self._cfg is other._cfg and self._terms == other._terms

    def __ne__(self, other):
        result = self.__eq__(other)
        return result if result is NotImplemented else not result

    def __hash__(self):
        return hash(frozenset(self._terms.items()))

    def render(self):
        """Canonical text form, parseable by parse_expr."""
        if not self._terms:
            return '0'
        out = []
        for mono, coeff in self.items():
            sign = '-' if coeff < 0 else '+'
            magnitude = abs(coeff)
            body = mono.render()
            if magnitude != 1:
                body = format_rat(magnitude) if body == '1' else format_rat(magnitude) + '*' + body
            out.append((sign, body))
        text = ('-' if out[0][0] == '-' else '') + out[0][1]
        for sign, body in out[1:]:
            text += ' {} {}'.format(sign, body)
        return text

    def __repr__(self):
        return 'CycleExpr({})'.format(self.render())


class _Parser(object):
    """Recursive descent over the token stream of a cycle expression."""

    def __init__(self, text, cfg):
        self.text = text
        self.cfg = cfg
        self.tokens = self.tokenize(text)
        self.pos = 0

    def tokenize(self, text):
        tokens = []
        pos = 0
        text = text.rstrip()
        while pos < len(text):
            m = TOKEN_RE.match(text, pos)
            if m is None:
                break
            pullback, number, name, symbol = m.groups()
            if pullback:
                tokens.append(('pullback', pullback))
            elif number:
                tokens.append(('number', number))
            elif name:
                tokens.append(('name', name))
            elif symbol in '+-*()':
                tokens.append(('symbol', symbol))
            else:
                raise ParserError("Unexpected character '{}' in '{}'".format(symbol, text))
            pos = m.end()
        return tokens

    def peek(self):
        return self.tokens[self.pos] if self.pos < len(self.tokens) else (None, None)

    def take(self, kind=None, value=None):
        tok = self.peek()
        if tok[0] is None or (kind and tok[0] != kind) or (value and tok[1] != value):
            raise ParserError("Expected {} in '{}', got {}"
                              .format(value or kind or 'a token', self.text,
                                      repr(tok[1]) if tok[1] else 'end of input'))
        self.pos += 1
        return tok

    def parse(self):
        if not self.tokens:
            raise ParserError('Empty cycle expression')
        expr = self.expr()
        if self.pos != len(self.tokens):
            raise ParserError("Trailing input '{}' in '{}'".format(self.peek()[1], self.text))
        return expr

    def expr(self):
        negate = False
        if self.peek() == ('symbol', '-'):
            self.take()
            negate = True
        result = self.term()
        if negate:
            result = -result
        while self.peek() in (('symbol', '+'), ('symbol', '-')):
            _, op = self.take()
            term = self.term()
            result = result + term if op == '+' else result - term
        return result

    def term(self):
        result = self.factor()
        while self.peek() == ('symbol', '*'):
            self.take()
            try:
                result = result * self.factor()
            except ValueError as e:
                raise ParserError("{} in '{}'".format(e, self.text))
        return result

    def factor(self):
        kind, value = self.peek()
        cfg = self.cfg
        if kind == 'number':
            self.take()
            return CycleExpr.monomial(cfg, coeff=parse_rat(value))
        if kind == 'pullback':
            self.take()
            return self.pullback()
        if (kind, value) == ('symbol', '('):
            self.take()
            inner = self.expr()
            self.take('symbol', ')')
            return inner
        if kind == 'name':
            self.take()
            if value in ('cg', 'W'):
                return CycleExpr.monomial(cfg, marker=value)
            if value in cfg.components_y:
                return CycleExpr.monomial(cfg, ys=(value,))
            if value in cfg.components_t:
                raise ParserError("Base component '{}' must appear inside f*(...) in '{}'"
                                  .format(value, self.text))
            raise ParserError("Unknown symbol '{}' in '{}'".format(value, self.text))
        self.take('factor')

    def pullback(self):
        cfg = self.cfg
        if self.peek() == ('name', 'xi'):
            self.take()
            self.take('symbol', ')')
            return CycleExpr.monomial(cfg, marker='xi')
        result = CycleExpr.zero(cfg)
        sign = 1
        if self.peek() == ('symbol', '-'):
            self.take()
            sign = -1
        while True:
            coeff = Fraction(1)
            if self.peek()[0] == 'number':
                coeff = parse_rat(self.take()[1])
                self.take('symbol', '*')
            _, name = self.take('name')
            if name not in cfg.components_t:
                raise ParserError("f*(...) expects base components, got '{}' in '{}'"
                                  .format(name, self.text))
            result = result + CycleExpr.monomial(cfg, pullbacks=(name,), coeff=sign * coeff)
            if self.peek() == ('symbol', ')'):
                self.take()
                return result
            _, op = self.take('symbol')
            if op not in '+-':
                raise ParserError("Expected '+', '-' or ')' in f*(...) of '{}'".format(self.text))
            sign = 1 if op == '+' else -1


def parse_expr(text, cfg):
    """
    Parse a cycle expression over a boundary config.

    :param text: e.g. "cg*Y1*Y1" or "1/2*cg*f*(T1 - 2*T2)*Y2".
    :param cfg: the BoundaryConfig that names the symbols.
    :raises ParserError: on a syntax error or an unknown symbol.
    """
    return _Parser(text, cfg).parse()
