# This Source Code Form is subject to the terms of the Mozilla Public
# License, v. 2.0. If a copy of the MPL was not distributed with this
# file, You can obtain one at http://mozilla.org/MPL/2.0/.

import hashlib
import logging
import time
from collections import OrderedDict, namedtuple
from contextlib import contextmanager
from io import BytesIO

from .shared_utils import ParserError

try:
    import ujson as json
    _DUMP_OPTIONS = {'escape_forward_slashes': False}
except ImportError:  # pragma: no cover
    import json
    _DUMP_OPTIONS = {}

logger = logging.getLogger(__name__)

REPORT_KEYS = ('checks', 'inputs', 'inputs_digest', 'passed', 'subcommand')


class Check(namedtuple('Check', ('name', 'passed', 'details'))):
    __slots__ = ()

    def to_dict(self):
        return {'name': self.name, 'passed': self.passed, 'details': self.details}


def dumps(obj):
    return json.dumps(obj, sort_keys=True, indent=2, **_DUMP_OPTIONS)


class RunReport(object):
    """
    Verdicts of one CLI run. Everything but the timings is a pure function of the
    inputs, so the JSON form is byte-stable; timings are serialized separately.
    """

    def __init__(self, subcommand, inputs=None):
        self.subcommand = subcommand
        self.inputs = dict(inputs or {})
        self.checks = []
        self.timings = OrderedDict()

    def add_check(self, name, passed, details=None):
        check = Check(name, bool(passed), details if details is not None else {})
        self.checks.append(check)
        if not check.passed:
            logger.info('%s: check %s failed', self.subcommand, name)
        return check

    @property
    def passed(self):
        return all(c.passed for c in self.checks)

    @property
    def first_failure(self):
        for c in self.checks:
            if not c.passed:
                return c.name
        return None

    @property
    def inputs_digest(self):
        return hashlib.sha256(dumps(self.inputs).encode('utf-8')).hexdigest()

    @contextmanager
    def timed(self, phase):
        start = time.time()
        try:
            yield
        finally:
            self.timings[phase] = self.timings.get(phase, 0.0) + time.time() - start

    def to_dict(self):
        return {
            'subcommand': self.subcommand,
            'inputs': self.inputs,
            'inputs_digest': self.inputs_digest,
            'passed': self.passed,
            'checks': [c.to_dict() for c in self.checks],
        }

    def to_json(self):
        return dumps(self.to_dict())

    def timings_json(self):
        return dumps({'timings': dict(self.timings)})

    def render_text(self):
        lines = ['{}: {} ({} checks)'.format(self.subcommand,
                                             'passed' if self.passed else 'FAILED',
                                             len(self.checks))]
        for c in self.checks:
            lines.append('  [{}] {}'.format('ok' if c.passed else 'FAIL', c.name))
            if not c.passed and isinstance(c.details, dict):
                for key in sorted(c.details):
                    lines.append('      {}: {}'.format(key, c.details[key]))
        return '\n'.join(lines)

    def __eq__(self, other):
        return isinstance(other, RunReport) and self.to_dict() == other.to_dict()

    def __ne__(self, other):
        return not self == other


def parse_report(text):
    """
    Rebuild a RunReport from its JSON form.

    :raises ParserError: if the document does not follow the report schema.
    """
    try:
        data = json.loads(text)
    except ValueError as e:
        raise ParserError('Report is not valid JSON: {}'.format(e))
    if not isinstance(data, dict) or sorted(data) != list(REPORT_KEYS):
        raise ParserError('Report keys must be {}'.format(list(REPORT_KEYS)))
    report = RunReport(data['subcommand'], data['inputs'])
    for entry in data['checks']:
        if not isinstance(entry, dict) or sorted(entry) != ['details', 'name', 'passed']:
            raise ParserError('Malformed check entry: {!r}'.format(entry))
        report.add_check(entry['name'], entry['passed'], entry['details'])
    if report.inputs_digest != data['inputs_digest']:
        raise ParserError('Inputs digest does not match the inputs')
    if report.passed != data['passed']:
        raise ParserError('Overall verdict does not match the checks')
    return report


def save_report(store, report, prefix=''):
    """Upload <subcommand>.json and <subcommand>.timings.json to a store."""
    name = report.subcommand
    store.upload_file(BytesIO(report.to_json().encode('utf-8')), prefix, name + '.json')
    store.upload_file(BytesIO(report.timings_json().encode('utf-8')), prefix,
                      name + '.timings.json')
    logger.info('Saved %s report under %r', name, prefix)


def load_report(store, subcommand, prefix=''):
    """Read back the <subcommand>.json report saved by save_report."""
    text = store.get_key('{}{}.json'.format(prefix, subcommand)).read().decode('utf-8')
    return parse_report(text)
