# This Source Code Form is subject to the terms of the Mozilla Public
# License, v. 2.0. If a copy of the MPL was not distributed with this
# file, you can obtain one at http://mozilla.org/MPL/2.0/.
from fractions import Fraction

import pytest

from chowcheck.cycles import CycleExpr, make_monomial, multiply_monomials, parse_expr
from chowcheck.shared_utils import ParserError


@pytest.fixture
def chain(bundled_config):
    return bundled_config('chain.cfg')


@pytest.fixture
def toric(bundled_config):
    return bundled_config('toric_corner.yaml')


def test_parse_monomial(chain):
    expr = parse_expr('cg*Y2*Y2', chain)
    mono = make_monomial(chain, 'cg', ('Y2', 'Y2'))
    assert expr == CycleExpr.monomial(chain, 'cg', ('Y2', 'Y2'))
    assert expr.coefficient(mono) == 1
    assert expr.render() == 'cg*Y2*Y2'
    assert mono.codim(chain) == 4
    assert mono.repeated(chain) == ('Y2',)
    assert mono.meets(chain.z_support)


def test_monomials_are_sorted_by_declaration_order(chain):
    assert parse_expr('Y2*cg*Y1', chain) == parse_expr('cg*Y1*Y2', chain)
    assert make_monomial(chain, None, ('Y2', 'Y1')).ys == ('Y1', 'Y2')


def test_render(chain):
    expr = parse_expr('1/2*cg*f*(T1)*Y2 - 1/2*cg*Y1*Y2', chain)
    assert expr.render() == '-1/2*cg*Y1*Y2 + 1/2*cg*f*(T1)*Y2'
    assert parse_expr(expr.render(), chain) == expr
    assert parse_expr('2*3', chain).render() == '6'
    assert parse_expr('Y1 - Y1', chain).render() == '0'
    assert parse_expr('f*(xi)*Y1', chain).render() == 'f*(xi)*Y1'


def test_distributivity(chain):
    assert parse_expr('cg*(Y1 + Y2)*Y2', chain) == parse_expr('cg*Y1*Y2 + cg*Y2*Y2', chain)
    assert parse_expr('-(Y1 - 2*Y2)', chain) == parse_expr('2*Y2 - Y1', chain)


def test_pullback_lincombs(toric):
    expr = parse_expr('cg*f*(T1 - 2*T2)*Y3', toric)
    assert expr == (parse_expr('cg*f*(T1)*Y3', toric) -
                    parse_expr('cg*f*(T2)*Y3', toric).scale(2))
    assert parse_expr('f*(-T1 + T1)', toric).is_zero()
    assert parse_expr('f*(1/2*T2)', toric) == CycleExpr.monomial(toric, pullbacks=('T2',),
                                                                 coeff=Fraction(1, 2))


def test_empty_strata_are_dropped(toric):
    assert parse_expr('Y1*Y2', toric).is_zero()
    assert parse_expr('cg*Y1*Y3*Y2', toric).is_zero()
    assert not parse_expr('Y1*Y3', toric).is_zero()


def test_w_vanishes_on_z(chain):
    assert parse_expr('W*Y2', chain).is_zero()
    assert parse_expr('W*Y1*Y2', chain).is_zero()
    assert len(parse_expr('W*Y1 + cg*Y1', chain)) == 2


def test_products(chain):
    a = parse_expr('cg + Y1', chain)
    b = parse_expr('Y2', chain)
    assert a * b == parse_expr('cg*Y2 + Y1*Y2', chain)
    assert 3 * b == b.scale(3)
    with pytest.raises(ValueError):
        a * parse_expr('W', chain)


def test_at_most_one_marker(chain):
    cg = make_monomial(chain, 'cg')
    with pytest.raises(ValueError):
        multiply_monomials(chain, cg, make_monomial(chain, 'xi'))
    with pytest.raises(ValueError):
        make_monomial(chain, 'c1')
    with pytest.raises(ParserError):
        parse_expr('cg*f*(xi)', chain)


def test_configs_do_not_mix(chain, toric):
    with pytest.raises(ValueError):
        parse_expr('cg', chain) + parse_expr('cg', toric)


@pytest.mark.parametrize('text,message', [
    ('', 'Empty cycle expression'),
    ('cg*', 'end of input'),
    ('(cg', 'Expected )'),
    ('cg $', "Unexpected character '$'"),
    ('cg Y1', 'Trailing input'),
    ('T1*cg', 'must appear inside f*(...)'),
    ('Y9', "Unknown symbol 'Y9'"),
    ('f*(Y1)', 'f*(...) expects base components'),
    ('f*(T1 * T1)', "Expected '+', '-' or ')'"),
    ('1/0*cg', 'Zero denominator'),
])
def test_syntax_errors(chain, text, message):
    with pytest.raises(ParserError) as excinfo:
        parse_expr(text, chain)
    assert message in str(excinfo.value)
