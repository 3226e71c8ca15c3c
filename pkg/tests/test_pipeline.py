# This Source Code Form is subject to the terms of the Mozilla Public
# License, v. 2.0. If a copy of the MPL was not distributed with this
# file, you can obtain one at http://mozilla.org/MPL/2.0/.
import os
import shutil

import pytest

from chowcheck import pipeline

BUNDLED_CHECKS = [
    'euler-bernoulli bridge n<=64',
    'E_(2n-1)(0) nonzero n<=200',
    'lemma21 g=1 D=4',
    'first-relation g=1 D=4',
    'cg-identity g=1 D=4',
    'lambda-product g=1 D=4',
    'hodge-alternating-sum g=1 D=4',
    'main-chain g=1 D=4',
    'grr adversarial.cfg',
    'grr chain.cfg',
    'grr double_fiber.cfg',
    'grr semistable.cfg',
    'grr toric_corner.yaml',
    'cone g1_notsmooth.cone',
    'cone g1_odd.cone',
    'cone g1_trivial.cone',
    'cone g2_fixed.cone',
    'cone g2_nowitness.cone',
    'cone g2_offdiag.cone',
]


@pytest.fixture
def config_dir(tmpdir, data_dir, bundled_dir):
    configs = tmpdir.mkdir('configs')
    shutil.copy(os.path.join(data_dir, 'corrupt.cfg'), str(configs))
    for name in ('chain.cfg', 'adversarial.cfg'):
        shutil.copy(os.path.join(bundled_dir, 'configs', name), str(configs))
    configs.join('unexpected.cfg').write(
        '[components]\nY = Y1\nT = T1\n[nu]\nY1: T1=2\n'
        '[meta]\nbase_dim = 1\nfiber_dim = 1\nw_nonzero_on = Y1\n')
    return str(configs)


@pytest.fixture
def empty_cone_dir(tmpdir):
    return str(tmpdir.mkdir('cones'))


def test_verify_all_on_the_bundled_corpus(dummy_pool_executor):
    report = pipeline.verify_all(g_max=1, D_max=4)
    assert [c.name for c in report.checks] == BUNDLED_CHECKS
    assert report.passed, report.render_text()
    assert report.inputs == {
        'g_max': 1,
        'D_max': 4,
        'configs': ['adversarial.cfg', 'chain.cfg', 'double_fiber.cfg', 'semistable.cfg',
                    'toric_corner.yaml'],
        'cones': ['g1_notsmooth.cone', 'g1_odd.cone', 'g1_trivial.cone', 'g2_fixed.cone',
                  'g2_nowitness.cone', 'g2_offdiag.cone'],
    }
    assert list(report.timings)[0] == 'numbers'


def test_verify_all_is_reproducible():
    first = pipeline.verify_all(g_max=1, D_max=4, max_concurrency=4)
    second = pipeline.verify_all(g_max=1, D_max=4, max_concurrency=1)
    assert first.to_json() == second.to_json()


def test_broken_configs_fail_by_name(dummy_pool_executor, config_dir, empty_cone_dir):
    report = pipeline.verify_all(g_max=1, D_max=4, config_dir=config_dir,
                                 cone_dir=empty_cone_dir)
    assert not report.passed
    assert report.first_failure == 'grr corrupt.cfg'
    checks = {c.name: c for c in report.checks}
    corrupt = checks['grr corrupt.cfg']
    assert corrupt.details['outcome'] == 'unreadable'
    assert 'corrupt:8' in corrupt.details['error']
    assert checks['grr chain.cfg'].passed
    assert checks['grr adversarial.cfg'].passed
    unexpected = checks['grr unexpected.cfg']
    assert not unexpected.passed
    assert unexpected.details['outcome'] == 'rejected'
    assert unexpected.details['expect'] is None


def test_grr_outcome(bundled_dir, data_dir):
    outcome, expect, details = pipeline.grr_outcome(
        os.path.join(bundled_dir, 'configs', 'toric_corner.yaml'))
    assert (outcome, expect) == ('certified', 'certified')
    assert details == {'first_failure': None, 'ledger_size': 4, 'err_terms': 2}
    outcome, expect, _ = pipeline.grr_outcome(
        os.path.join(bundled_dir, 'configs', 'adversarial.cfg'))
    assert (outcome, expect) == ('rejected', 'rejected')
    outcome, expect, _ = pipeline.grr_outcome(os.path.join(data_dir, 'corrupt.cfg'))
    assert (outcome, expect) == ('unreadable', None)


def test_broken_cone_file(dummy_pool_executor, tmpdir, bundled_dir):
    cone_dir = tmpdir.mkdir('cones')
    cone_dir.join('bad.cone').write('b = [[1, 2], [3, 4]]; l = [0, 0]\n')
    cone_dir.join('wrong.cone').write('b = [[2]]; l = [0]\nexpect = smooth-fixed\n')
    report = pipeline.verify_all(g_max=1, D_max=4,
                                 config_dir=os.path.join(bundled_dir, 'configs'),
                                 cone_dir=str(cone_dir))
    checks = {c.name: c for c in report.checks}
    assert 'not symmetric' in checks['cone bad.cone'].details['error']
    assert checks['cone wrong.cone'].details['status'] == 'not-smooth'
    assert report.first_failure == 'cone bad.cone'


def test_stages():
    names = [stage for stage, _, _ in pipeline.stages(g_max=2, D_max=4)]
    assert names[:8] == ['numbers', 'lemma21 g=1', 'lemma21 g=2', 'cg g=1', 'cg g=2',
                         'lambda-product g=1', 'lambda-product g=2', 'hodge g=1']
    args = dict((stage, a) for stage, _, a in pipeline.stages(g_max=4, D_max=6))
    assert args['lemma21 g=4'] == (4, 6)
    assert args['cg g=4'] == (4, 6)
    assert 'lambda-product g=4' not in args
    assert 'hodge g=4' not in args


@pytest.mark.parametrize('g_max,D_max', [(0, 4), (7, 4), (1, 1), (1, 15), (True, 4)])
def test_limits(g_max, D_max):
    with pytest.raises(ValueError):
        pipeline.verify_all(g_max, D_max)


@pytest.mark.slow
def test_verify_all_defaults():
    report = pipeline.verify_all()
    assert report.passed, report.render_text()
