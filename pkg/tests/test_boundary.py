# This Source Code Form is subject to the terms of the Mozilla Public
# License, v. 2.0. If a copy of the MPL was not distributed with this
# file, you can obtain one at http://mozilla.org/MPL/2.0/.
import os

import pytest

from chowcheck import boundary
from chowcheck.boundary import BoundaryConfig, HypothesisError
from chowcheck.shared_utils import ParserError

CHAIN = """
[components]
Y = Y1, Y2
T = T1

[nu]
Y1: T1=1
Y2: T1=2   # the multiple component

[strata]
Y1, Y2

[meta]
base_dim = 2
fiber_dim = 2
"""


def chain(**kwargs):
    options = dict(strata=[['Y1', 'Y2']], base_dim=2, fiber_dim=2)
    options.update(kwargs)
    return BoundaryConfig(['Y1', 'Y2'], ['T1'], {('Y1', 'T1'): 1, ('Y2', 'T1'): 2},
                          **options)


def test_parse_text():
    cfg = boundary.parse_config_text(CHAIN, 'chain')
    assert cfg.name == 'chain'
    assert cfg.components_y == ('Y1', 'Y2')
    assert cfg.components_t == ('T1',)
    assert cfg.nu('Y2', 'T1') == 2
    assert cfg.row('Y1') == [1]
    assert cfg.base_dim == 2 and cfg.fiber_dim == 2
    assert cfg.expect is None
    assert cfg.z_support == frozenset(['Y2'])


def test_strata_are_closed_downwards():
    cfg = chain()
    assert cfg.strata == frozenset([frozenset(['Y1']), frozenset(['Y2']),
                                    frozenset(['Y1', 'Y2'])])
    assert [cfg.render_set(s) for s in cfg.sorted_strata()] == ['{Y1}', '{Y2}', '{Y1,Y2}']
    assert cfg.is_stratum(['Y2', 'Y1'])
    assert not BoundaryConfig(['Y1', 'Y2'], ['T1'], {('Y1', 'T1'): 1, ('Y2', 'T1'): 1},
                              base_dim=1, fiber_dim=1).is_stratum(['Y1', 'Y2'])


def test_j_defaults_to_column_support():
    cfg = BoundaryConfig(['Y1', 'Y2', 'Y3'], ['T1', 'T2'],
                         {('Y1', 'T1'): 1, ('Y2', 'T2'): 1, ('Y3', 'T1'): 1, ('Y3', 'T2'): 1},
                         strata=[['Y1', 'Y3'], ['Y2', 'Y3']], base_dim=2, fiber_dim=1)
    assert cfg.j_of(['Y1']) == frozenset(['T1'])
    assert cfg.j_of(['Y3']) == frozenset(['T1', 'T2'])
    assert cfg.j_of(['Y1', 'Y3']) == frozenset(['T1', 'T2'])
    assert cfg.z_support == frozenset(['Y3'])
    with pytest.raises(ValueError):
        cfg.j_of(['Y1', 'Y2'])


def test_j_overrides():
    cfg = BoundaryConfig(['Y1', 'Y2'], ['T1', 'T2'], {('Y1', 'T1'): 1, ('Y2', 'T1'): 1},
                         strata=[['Y1', 'Y2']],
                         j_overrides={frozenset(['Y1', 'Y2']): ['T1', 'T2']},
                         base_dim=2, fiber_dim=1)
    assert cfg.j_of(['Y1', 'Y2']) == frozenset(['T1', 'T2'])
    assert cfg.j_of(['Y1']) == frozenset(['T1'])


@pytest.mark.parametrize('overrides', [
    # misses the column support
    {frozenset(['Y1']): ['T2']},
    # not a stratum
    {frozenset(['Y1', 'Y3']): ['T1']},
    # breaks monotonicity: J({Y1}) grows past J({Y1,Y2})
    {frozenset(['Y1']): ['T1', 'T2']},
])
def test_bad_j_overrides(overrides):
    with pytest.raises(ParserError):
        BoundaryConfig(['Y1', 'Y2', 'Y3'], ['T1', 'T2'],
                       {('Y1', 'T1'): 1, ('Y2', 'T1'): 1, ('Y3', 'T2'): 1},
                       strata=[['Y1', 'Y2']], j_overrides=overrides,
                       base_dim=2, fiber_dim=1)


def test_z_support():
    assert chain(z_support=['Y1', 'Y2']).z_support == frozenset(['Y1', 'Y2'])
    with pytest.raises(ParserError):
        chain(z_support=['Y1'])
    with pytest.raises(ParserError):
        chain(z_support=['Y7'])


@pytest.mark.parametrize('kwargs', [
    {'base_dim': 0},
    {'fiber_dim': '2'},
    {'base_dim': True},
    {'expect': 'maybe'},
    {'strata': [['Y1', 'Y9']]},
])
def test_bad_meta(kwargs):
    with pytest.raises(ParserError):
        chain(**kwargs)


def test_bad_names_and_nu():
    with pytest.raises(ParserError):
        BoundaryConfig([], ['T1'], {}, base_dim=1, fiber_dim=1)
    with pytest.raises(ParserError):
        BoundaryConfig(['Y1'], ['Y1'], {('Y1', 'Y1'): 1}, base_dim=1, fiber_dim=1)
    with pytest.raises(ParserError):
        BoundaryConfig(['cg'], ['T1'], {('cg', 'T1'): 1}, base_dim=1, fiber_dim=1)
    with pytest.raises(ParserError):
        BoundaryConfig(['1Y'], ['T1'], {('1Y', 'T1'): 1}, base_dim=1, fiber_dim=1)
    with pytest.raises(ParserError):
        BoundaryConfig(['Y1'], ['T1'], {('Y1', 'T1'): -1}, base_dim=1, fiber_dim=1)
    with pytest.raises(ParserError):
        BoundaryConfig(['Y1'], ['T1'], {('Y1', 'T2'): 1}, base_dim=1, fiber_dim=1)
    # Y2 lies over nothing
    with pytest.raises(ParserError):
        BoundaryConfig(['Y1', 'Y2'], ['T1'], {('Y1', 'T1'): 1}, base_dim=1, fiber_dim=1)


def test_hypotheses():
    with pytest.raises(HypothesisError):
        chain(w_nonzero_on=['Y2'])
    # three components meeting in a surface
    with pytest.raises(HypothesisError):
        BoundaryConfig(['Y1', 'Y2', 'Y3'], ['T1'],
                       {('Y1', 'T1'): 1, ('Y2', 'T1'): 1, ('Y3', 'T1'): 1},
                       strata=[['Y1', 'Y2', 'Y3']], base_dim=1, fiber_dim=1)
    # J(Y3) has two components over a curve
    with pytest.raises(HypothesisError) as excinfo:
        BoundaryConfig(['Y3'], ['T1', 'T2'], {('Y3', 'T1'): 1, ('Y3', 'T2'): 1},
                       base_dim=1, fiber_dim=2, expect='rejected')
    assert excinfo.value.expect == 'rejected'
    assert 'dim S = 1' in str(excinfo.value)


def test_w_may_be_nonzero_away_from_z():
    cfg = chain(w_nonzero_on=['Y1'])
    assert cfg.w_nonzero_on == frozenset(['Y1'])


@pytest.mark.parametrize('text,message', [
    ('Y = Y1', 'content before the first section'),
    ('[components]\nY = Y1\n[other]\n', 'unknown section'),
    ('[components]\n[components]\n', 'duplicated section'),
    ('[components]\nY = Y1\nT = T1\n[nu]\nY1: T1=1\n', 'missing sections'),
    ('[components]\nY = Y1\n[nu]\nY1: T1=1\n[meta]\nbase_dim = 1\nfiber_dim = 1\n',
     'must list both Y and T'),
    ('[components]\nY = Y1\nT = T1\n[nu]\nY1: T1=x\n[meta]\nbase_dim = 1\nfiber_dim = 1\n',
     'is not an integer'),
    ('[components]\nY = Y1\nT = T1\n[nu]\nY1: T1=1\n[meta]\nbase_dim = 1\n',
     'missing meta fields'),
    ('[components]\nY = Y1\nT = T1\n[nu]\nY1: T1=1\n[meta]\nbase_dim = 1\nfiber_dim = 1\n'
     'colour = red\n', 'unknown [meta] field'),
    ('[components]\nZ = Y1\n[nu]\n[meta]\n', '[components] keys are Y and T'),
])
def test_text_syntax_errors(text, message):
    with pytest.raises(ParserError) as excinfo:
        boundary.parse_config_text(text, 'broken')
    assert message in str(excinfo.value)


def test_parse_yaml():
    data = {
        'components': {'Y': ['Y1', 'Y2'], 'T': ['T1']},
        'nu': {'Y1': {'T1': 1}, 'Y2': {'T1': 2}},
        'strata': [['Y1', 'Y2']],
        'J': [{'I': ['Y2'], 'J': ['T1']}],
        'meta': {'base_dim': 2, 'fiber_dim': 2, 'z_support': 'Y2', 'name': 'chain'},
    }
    cfg = boundary.parse_config_yaml(data, 'ignored')
    reference = boundary.parse_config_text(CHAIN, 'chain')
    assert cfg.name == 'chain'
    assert cfg.strata == reference.strata
    assert cfg.z_support == reference.z_support
    assert cfg.j_of(['Y1', 'Y2']) == reference.j_of(['Y1', 'Y2'])


@pytest.mark.parametrize('data', [
    ['not', 'a', 'mapping'],
    {'components': {'Y': ['Y1'], 'T': ['T1']}, 'extra': 1},
    {'nu': {'Y1': 3}},
    {'J': [{'I': ['Y1']}]},
    {'meta': {'base_dim': 1, 'colour': 'red'}},
])
def test_bad_yaml(data):
    with pytest.raises(ParserError):
        boundary.parse_config_yaml(data)


def test_bundled_configs(bundled_dir):
    files = boundary.config_files(os.path.join(bundled_dir, 'configs'))
    names = [os.path.basename(f) for f in files]
    assert names == ['adversarial.cfg', 'chain.cfg', 'double_fiber.cfg', 'semistable.cfg',
                     'toric_corner.yaml']
    for filename in files:
        if 'adversarial' in filename:
            with pytest.raises(HypothesisError) as excinfo:
                boundary.load_config(filename)
            assert excinfo.value.expect == 'rejected'
        else:
            assert boundary.load_config(filename).expect == 'certified'


def test_toric_corner(bundled_config):
    cfg = bundled_config('toric_corner.yaml')
    assert cfg.name == 'toric_corner'
    assert cfg.j_of(['Y3']) == frozenset(['T1', 'T2'])
    assert not cfg.is_stratum(['Y1', 'Y2'])


def test_corrupt_config(data_dir):
    with pytest.raises(ParserError) as excinfo:
        boundary.load_config(os.path.join(data_dir, 'corrupt.cfg'))
    assert 'corrupt:8' in str(excinfo.value)


def test_missing_config_file(tmpdir):
    with pytest.raises(ParserError):
        boundary.load_config(str(tmpdir.join('nowhere.cfg')))
