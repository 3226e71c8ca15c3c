# This Source Code Form is subject to the terms of the Mozilla Public
# License, v. 2.0. If a copy of the MPL was not distributed with this
# file, you can obtain one at http://mozilla.org/MPL/2.0/.
import json
import os

import pytest

from chowcheck.report import RunReport, load_report, parse_report, save_report
from chowcheck.shared_utils import ParserError
from chowcheck.store import DirectoryStore, StoreError


def make_report():
    report = RunReport('grr-certify', {'config': 'chain.cfg', 'D': None})
    report.add_check('grr chain', True, {'first_failure': None, 'url': 'a/b'})
    report.add_check('grr toric_corner', False, {'first_failure': 'v_j term on {Y3}'})
    return report


def test_verdicts():
    report = make_report()
    assert not report.passed
    assert report.first_failure == 'grr toric_corner'
    assert RunReport('empty').passed
    assert RunReport('empty').first_failure is None


def test_json_form():
    data = json.loads(make_report().to_json())
    assert sorted(data) == ['checks', 'inputs', 'inputs_digest', 'passed', 'subcommand']
    assert data['passed'] is False
    assert data['checks'][0] == {'name': 'grr chain', 'passed': True,
                                 'details': {'first_failure': None, 'url': 'a/b'}}
    assert 'timings' not in data


def test_json_is_byte_stable():
    first = make_report()
    second = make_report()
    with second.timed('certify'):
        pass
    assert first.to_json() == second.to_json()
    assert first.inputs_digest == second.inputs_digest
    # forward slashes are not escaped
    assert '"a/b"' in first.to_json()


def test_digest_depends_on_the_inputs():
    assert RunReport('x', {'g': 1}).inputs_digest != RunReport('x', {'g': 2}).inputs_digest
    assert RunReport('x', {'a': 1, 'b': 2}).inputs_digest == \
        RunReport('x', {'b': 2, 'a': 1}).inputs_digest


def test_timings():
    report = make_report()
    with report.timed('certify'):
        pass
    with report.timed('certify'):
        pass
    timings = json.loads(report.timings_json())['timings']
    assert list(timings) == ['certify']
    assert timings['certify'] >= 0


def test_round_trip():
    report = make_report()
    assert parse_report(report.to_json()) == report
    assert parse_report(report.to_json()).to_json() == report.to_json()


def test_render_text():
    assert make_report().render_text().splitlines() == [
        'grr-certify: FAILED (2 checks)',
        '  [ok] grr chain',
        '  [FAIL] grr toric_corner',
        '      first_failure: v_j term on {Y3}',
    ]


@pytest.mark.parametrize('mutate', [
    lambda d: d.pop('inputs_digest'),
    lambda d: d.update(passed=True),
    lambda d: d.update(inputs={'config': 'other.cfg', 'D': None}),
    lambda d: d['checks'].append({'name': 'x'}),
])
def test_parse_rejects_inconsistent_reports(mutate):
    data = json.loads(make_report().to_json())
    mutate(data)
    with pytest.raises(ParserError):
        parse_report(json.dumps(data))


def test_parse_rejects_garbage():
    with pytest.raises(ParserError):
        parse_report('not json')
    with pytest.raises(ParserError):
        parse_report('[]')


def test_save_and_load_report(tmpdir):
    store = DirectoryStore(str(tmpdir))
    report = make_report()
    with report.timed('certify'):
        pass
    save_report(store, report, prefix='run/')
    assert sorted(os.listdir(str(tmpdir.join('run')))) == ['grr-certify.json',
                                                           'grr-certify.timings.json']
    assert load_report(store, 'grr-certify', prefix='run/') == report
    with pytest.raises(StoreError):
        load_report(store, 'lemma21', prefix='run/')
