# This Source Code Form is subject to the terms of the Mozilla Public
# License, v. 2.0. If a copy of the MPL was not distributed with this
# file, you can obtain one at http://mozilla.org/MPL/2.0/.
import json
import os
import shutil

import pytest
from click.testing import CliRunner

from chowcheck.cli import cli
from chowcheck.report import parse_report


@pytest.fixture
def runner():
    return CliRunner()


@pytest.fixture
def configs(bundled_dir):
    return os.path.join(bundled_dir, 'configs')


@pytest.fixture
def cone_dir(bundled_dir):
    return os.path.join(bundled_dir, 'cones')


def test_numbers(runner):
    result = runner.invoke(cli, ['numbers', '--bernoulli', '1', '--bernoulli', '12',
                                 '--euler', '3', '--bridge', '10'])
    assert result.exit_code == 0
    assert result.output.splitlines() == [
        '-1/2',
        '-691/2730',
        '1/4',
        'bridge n<=10: ok',
    ]


def test_numbers_needs_something_to_do(runner):
    assert runner.invoke(cli, ['numbers']).exit_code == 2
    assert runner.invoke(cli, ['numbers', '--bernoulli', '-1']).exit_code == 2


def test_identities(runner):
    result = runner.invoke(cli, ['identities', '--cg', '--lambda-product', '--dual-sum',
                                 '-g', '2'])
    assert result.exit_code == 0
    assert result.output.splitlines() == [
        'identities: passed (3 checks)',
        '  [ok] cg-identity g=2 D=6',
        '  [ok] lambda-product g=2 D=6',
        '  [ok] dual-sum g=2 D=6',
    ]


@pytest.mark.parametrize('args', [
    ['identities', '-g', '1'],
    ['identities', '--cg', '-g', '3', '-D', '2'],
    ['identities', '--cg', '-g', '7'],
    ['identities', '--cg', '-g', '1', '-D', '0'],
])
def test_identities_usage_errors(runner, args):
    assert runner.invoke(cli, args).exit_code == 2


def test_lemma21(runner):
    result = runner.invoke(cli, ['lemma21', '-g', '1'])
    assert result.exit_code == 0
    assert result.output.splitlines() == [
        'g = 1, D = 4',
        '  P_2 = 1/4 * ch_2(H)',
        '  P_4 = -1/8 * ch_4(H)',
        'certified',
    ]


def test_lemma21_json(runner):
    result = runner.invoke(cli, ['lemma21', '-g', '2', '--json'])
    assert result.exit_code == 0
    data = json.loads(result.output)
    assert data['passed']
    assert data['even_ratios'][:2] == [[1, '1/4'], [2, '-1/8']]


def test_grr_certify(runner, configs):
    result = runner.invoke(cli, ['grr', 'certify', os.path.join(configs, 'chain.cfg')])
    assert result.exit_code == 0
    lines = result.output.splitlines()
    assert lines[0] == 'config chain: g = 2, dim S = 2, Z = {Y2}'
    assert [x for x in lines if x.startswith('  w_j')][0].endswith('cg*Y1*Y2 via kill: ok')
    assert lines[-1] == 'certified'


def test_grr_certify_rejects_the_adversarial_config(runner, configs):
    result = runner.invoke(cli, ['grr', 'certify', os.path.join(configs, 'adversarial.cfg')])
    assert result.exit_code == 1
    assert 'W.Y_i is declared nonzero on {Y1}' in result.output


def test_grr_certify_unreadable_config(runner, data_dir):
    result = runner.invoke(cli, ['grr', 'certify', os.path.join(data_dir, 'corrupt.cfg')])
    assert result.exit_code == 1
    assert 'corrupt:8' in result.output


def test_grr_delta(runner, configs):
    chain = os.path.join(configs, 'chain.cfg')
    result = runner.invoke(cli, ['grr', 'delta', chain, '--set', 'Y2,Y1'])
    assert result.exit_code == 0
    assert result.output.strip() == 'delta{Y1,Y2} = 1'
    assert runner.invoke(cli, ['grr', 'delta', chain, '--set', 'Y3']).exit_code == 2


def test_grr_reduce(runner, configs):
    chain = os.path.join(configs, 'chain.cfg')
    result = runner.invoke(cli, ['grr', 'reduce', chain, '--expr', 'cg*Y2*Y2'])
    assert result.exit_code == 0
    assert result.output.splitlines() == [
        'cg*Y2*Y2 -> 1/2*cg*f*(T1)*Y2',
        'pushforward vanishes',
    ]
    result = runner.invoke(cli, ['grr', 'reduce', chain, '--expr', 'Y2*Y2'])
    assert result.exit_code == 0
    assert result.output.splitlines() == ['Y2*Y2 -> Y2*Y2']
    result = runner.invoke(cli, ['grr', 'reduce', chain, '--expr', 'cg*'])
    assert result.exit_code == 1


def test_cone_check(runner, cone_dir):
    result = runner.invoke(cli, ['cone', 'check', os.path.join(cone_dir, 'g2_fixed.cone')])
    assert result.exit_code == 0
    lines = result.output.splitlines()
    assert lines[:2] == ['smooth: yes', 'witness: j = [0, 1], mu = [2, 0]']
    assert lines[-1] == 'status: smooth-fixed'

    result = runner.invoke(cli, ['cone', 'check', os.path.join(cone_dir, 'g2_nowitness.cone')])
    assert result.exit_code == 0
    assert 'witness: none found (bounded search)' in result.output


def test_cone_check_level_parity(runner, cone_dir):
    path = os.path.join(cone_dir, 'g1_odd.cone')
    assert runner.invoke(cli, ['cone', 'check', path]).exit_code == 0
    result = runner.invoke(cli, ['cone', 'check', path, '--odd-level'])
    assert result.exit_code == 1
    assert result.output.splitlines()[-1] == 'status: odd-level'


def test_cone_check_bound(runner, tmpdir):
    path = tmpdir.join('far.cone')
    path.write('b = [[1]]; l = [3]\n')
    assert runner.invoke(cli, ['cone', 'check', str(path)]).exit_code == 1
    assert runner.invoke(cli, ['cone', 'check', str(path), '--bound', '6']).exit_code == 0


def test_verify_all(runner):
    result = runner.invoke(cli, ['verify-all', '--g-max', '1', '--D-max', '4'])
    assert result.exit_code == 0
    assert result.output.splitlines()[0] == 'verify-all: passed (19 checks)'


def test_verify_all_reports_the_first_failure(runner, tmpdir, data_dir, cone_dir):
    configs = tmpdir.mkdir('configs')
    shutil.copy(os.path.join(data_dir, 'corrupt.cfg'), str(configs))
    result = runner.invoke(cli, ['verify-all', '--g-max', '1', '--D-max', '4',
                                 '--config-dir', str(configs), '--cone-dir', cone_dir])
    assert result.exit_code == 1
    assert result.output.splitlines()[-1] == 'first failure: grr corrupt.cfg'


def test_verify_all_limits(runner):
    assert runner.invoke(cli, ['verify-all', '--g-max', '7']).exit_code == 2
    assert runner.invoke(cli, ['verify-all', '--D-max', '1']).exit_code == 2


def test_output_dir_and_report(runner, tmpdir):
    out = str(tmpdir.join('out'))
    result = runner.invoke(cli, ['--output-dir', out, 'numbers', '--bernoulli', '2'])
    assert result.exit_code == 0
    saved = os.path.join(out, 'numbers.json')
    assert os.path.exists(os.path.join(out, 'numbers.timings.json'))
    with open(saved) as f:
        text = f.read()
    report = parse_report(text)
    assert report.checks[0].details == {'value': '1/6'}

    result = runner.invoke(cli, ['report', '--input', saved])
    assert result.exit_code == 0
    assert result.output.splitlines() == ['numbers: passed (1 checks)', '  [ok] B_2']

    result = runner.invoke(cli, ['report', '--format', 'json', '--input', saved])
    assert result.output == text + '\n'


def test_report_reads_saved_reports(runner, tmpdir):
    out = str(tmpdir.join('out'))
    assert runner.invoke(cli, ['--output-dir', out, 'lemma21', '-g', '1']).exit_code == 0
    result = runner.invoke(cli, ['--output-dir', out, 'report', '--saved', 'lemma21'])
    assert result.exit_code == 0
    assert result.output.startswith('lemma21: passed')

    result = runner.invoke(cli, ['--output-dir', out, 'report', '--saved', 'numbers'])
    assert result.exit_code == 1
    assert 'No report "numbers.json"' in result.output
    assert runner.invoke(cli, ['report', '--saved', 'lemma21']).exit_code == 2


def test_output_dir_from_the_environment(runner, tmpdir, configs):
    out = str(tmpdir.join('env'))
    result = runner.invoke(cli, ['grr', 'certify', os.path.join(configs, 'semistable.cfg')],
                           env={'CHOWCHECK_OUTPUT_DIR': out})
    assert result.exit_code == 0
    assert os.path.exists(os.path.join(out, 'grr-certify.json'))


def test_report_rejects_garbage(runner):
    result = runner.invoke(cli, ['report'], input='{"passed": true}')
    assert result.exit_code == 1
    assert 'Report keys must be' in result.output
