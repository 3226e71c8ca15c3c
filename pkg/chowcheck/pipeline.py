# This Source Code Form is subject to the terms of the Mozilla Public
# License, v. 2.0. If a copy of the MPL was not distributed with this
# file, You can obtain one at http://mozilla.org/MPL/2.0/.

import logging
import os
import time
from concurrent import futures
from multiprocessing import cpu_count

from . import boundary, cones, exact, kclass, ledger, weight_one
from .boundary import HypothesisError
from .report import RunReport
from .shared_utils import ParserError

logger = logging.getLogger(__name__)

DEFAULT_MAX_CONCURRENCY = int(cpu_count() * 1.5)

MAX_GENUS = 6
MAX_DEGREE = 14
DEFAULT_G_MAX = 4
DEFAULT_D_MAX = 10

BRIDGE_RANGE = 64
NONZERO_RANGE = 200
LAMBDA_PRODUCT_GENUS = 3
LAMBDA_PRODUCT_DEGREE = 8
HODGE_GENUS = 3

DATA_DIR = os.path.join(os.path.dirname(os.path.abspath(__file__)), 'data')
CONFIG_DIR = os.path.join(DATA_DIR, 'configs')
CONE_DIR = os.path.join(DATA_DIR, 'cones')


def check_limits(g_max, D_max):
    """:raises ValueError: if g_max or D_max is outside what the pipeline supports."""
    if isinstance(g_max, bool) or not isinstance(g_max, int) or not 1 <= g_max <= MAX_GENUS:
        raise ValueError('g_max must be between 1 and {}, got {!r}'.format(MAX_GENUS, g_max))
    if isinstance(D_max, bool) or not isinstance(D_max, int) or not 2 <= D_max <= MAX_DEGREE:
        raise ValueError('D_max must be between 2 and {}, got {!r}'.format(MAX_DEGREE, D_max))


def _numbers_stage():
    mismatches = exact.bridge_mismatches(BRIDGE_RANGE)
    yield ('euler-bernoulli bridge n<={}'.format(BRIDGE_RANGE), not mismatches,
           {'mismatches': mismatches})
    zeros = []
    for n in range(1, NONZERO_RANGE + 1):
        try:
            exact.euler_via_bernoulli(n)
        except ArithmeticError:
            zeros.append(n)
    yield ('E_(2n-1)(0) nonzero n<={}'.format(NONZERO_RANGE), not zeros, {'zeros': zeros})


def _identity_check(report):
    return (report.name + ' g={} D={}'.format(report.g, report.D), report.passed,
            {'first_failure': report.first_failure})


def _lemma_stage(g, D):
    lemma = weight_one.verify_lemma21(g, D)
    yield ('lemma21 g={} D={}'.format(g, D), lemma.passed, lemma.to_dict())
    yield _identity_check(weight_one.first_relation_rewrite(g, D))


def _cg_stage(g, D):
    yield _identity_check(kclass.verify_cg_identity(g, D))


def _lambda_stage(g, D):
    yield _identity_check(kclass.verify_lambda_product(g, D))


def _hodge_stage(g, D):
    yield _identity_check(weight_one.verify_hodge_alternating_sum(g, D))
    yield _identity_check(weight_one.verify_main_chain(g, D))


def grr_outcome(filename):
    """
    Load and certify one boundary config.

    :return: a tuple (outcome, expect, details) where outcome is 'certified',
        'not-certified', 'rejected' or 'unreadable'.
    """
    try:
        cfg = boundary.load_config(filename)
    except HypothesisError as e:
        return 'rejected', e.expect, {'error': str(e)}
    except ParserError as e:
        return 'unreadable', None, {'error': str(e)}
    report = ledger.theorem_grr_certify(cfg)
    outcome = 'certified' if report.passed else 'not-certified'
    return outcome, cfg.expect, {'first_failure': report.first_failure,
                                 'ledger_size': len(report.ledger),
                                 'err_terms': len(report.err_terms)}


def _grr_stage(filename):
    outcome, expect, details = grr_outcome(filename)
    details.update({'file': os.path.basename(filename), 'outcome': outcome, 'expect': expect})
    passed = outcome == (expect or 'certified')
    yield ('grr {}'.format(os.path.basename(filename)), passed, details)


def _cone_stage(filename):
    name = 'cone {}'.format(os.path.basename(filename))
    try:
        cone, options = cones.parse_cone_file(filename)
    except ParserError as e:
        yield name, False, {'file': os.path.basename(filename), 'error': str(e)}
        return
    verdict = cones.check_cone(cone, even_level=options['even_level'])
    expect = options['expect'] or 'smooth-fixed'
    details = verdict.to_dict()
    details.update({'file': os.path.basename(filename), 'expect': expect})
    yield name, verdict.status == expect, details


def stages(g_max=DEFAULT_G_MAX, D_max=DEFAULT_D_MAX, config_dir=CONFIG_DIR, cone_dir=CONE_DIR):
    """The verify-all work list as (stage name, callable, args) in report order."""
    work = [('numbers', _numbers_stage, ())]
    for g in range(1, g_max + 1):
        work.append(('lemma21 g={}'.format(g), _lemma_stage, (g, min(2 * g + 2, D_max))))
    for g in range(1, g_max + 1):
        work.append(('cg g={}'.format(g), _cg_stage, (g, max(g, min(2 * g + 2, D_max)))))
    for g in range(1, min(g_max, LAMBDA_PRODUCT_GENUS) + 1):
        work.append(('lambda-product g={}'.format(g), _lambda_stage,
                     (g, min(LAMBDA_PRODUCT_DEGREE, D_max))))
    for g in range(1, min(g_max, HODGE_GENUS) + 1):
        work.append(('hodge g={}'.format(g), _hodge_stage, (g, min(2 * g + 2, D_max))))
    for filename in boundary.config_files(config_dir):
        work.append(('grr ' + os.path.basename(filename), _grr_stage, (filename,)))
    for filename in cones.cone_files(cone_dir):
        work.append(('cone ' + os.path.basename(filename), _cone_stage, (filename,)))
    return work


def _run_stage(item):
    stage, fn, args = item
    start = time.time()
    logger.debug('Starting %s', stage)
    checks = list(fn(*args))
    return stage, checks, time.time() - start


def verify_all(g_max=DEFAULT_G_MAX, D_max=DEFAULT_D_MAX, max_concurrency=None,
               config_dir=CONFIG_DIR, cone_dir=CONE_DIR):
    """
    Run every check of the package and collect the verdicts in one RunReport.

    :param g_max: largest genus for the lemma and identity checks.
    :param D_max: truncation cap.
    :param max_concurrency: number of worker threads, defaults to 1.5 * cpu_count.
    :param config_dir: directory of boundary configs to certify.
    :param cone_dir: directory of cone files to check.
    """
    check_limits(g_max, D_max)
    inputs = {
        'g_max': g_max,
        'D_max': D_max,
        'configs': [os.path.basename(f) for f in boundary.config_files(config_dir)],
        'cones': [os.path.basename(f) for f in cones.cone_files(cone_dir)],
    }
    report = RunReport('verify-all', inputs)
    work = stages(g_max, D_max, config_dir, cone_dir)
    with futures.ThreadPoolExecutor(max_concurrency or DEFAULT_MAX_CONCURRENCY) as executor:
        results = list(executor.map(_run_stage, work))
    for stage, checks, elapsed in results:
        report.timings[stage] = elapsed
        for name, passed, details in checks:
            report.add_check(name, passed, details)
        logger.info('%s: %d checks in %.2fs', stage, len(checks), elapsed)
    return report
