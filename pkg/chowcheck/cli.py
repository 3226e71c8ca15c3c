# This Source Code Form is subject to the terms of the Mozilla Public
# License, v. 2.0. If a copy of the MPL was not distributed with this
# file, You can obtain one at http://mozilla.org/MPL/2.0/.

import logging
import os

import click

from . import boundary, cones, exact, kclass, ledger, pipeline, weight_one
from .boundary import HypothesisError
from .cycles import parse_expr
from .report import RunReport, dumps, load_report, parse_report, save_report
from .shared_utils import ParserError, format_rat, split_list
from .store import DirectoryStore, StoreError

logger = logging.getLogger(__name__)

LOG_LEVELS = (logging.WARNING, logging.INFO, logging.DEBUG)

GENUS = click.IntRange(1, pipeline.MAX_GENUS)
DEGREE = click.IntRange(1, pipeline.MAX_DEGREE)


def _finish(ctx, report, text=None):
    """Echo the verdict, persist the report when an output directory is set, and exit 1
    if any check failed."""
    click.echo(text if text is not None else report.render_text())
    store = ctx.obj.get('store')
    if store is not None:
        save_report(store, report)
    if not report.passed:
        ctx.exit(1)


def _load_config(path):
    try:
        return boundary.load_config(path)
    except (ParserError, HypothesisError) as e:
        raise click.ClickException(str(e))


@click.group()
@click.option('-v', '--verbose', count=True, help='-v for progress, -vv for debugging.')
@click.option('--output-dir', envvar='CHOWCHECK_OUTPUT_DIR', type=click.Path(file_okay=False),
              default=None, help='Directory receiving <subcommand>.json reports.')
@click.pass_context
def cli(ctx, verbose, output_dir):
    """Exact checks of characteristic class identities and boundary cancellations."""
    logging.basicConfig(level=LOG_LEVELS[min(verbose, len(LOG_LEVELS) - 1)],
                        format='%(levelname)s %(name)s: %(message)s')
    ctx.ensure_object(dict)
    ctx.obj['store'] = DirectoryStore(output_dir) if output_dir else None


@cli.command()
@click.option('--bernoulli', 'bernoulli_indices', multiple=True, type=click.IntRange(0),
              help='Print B_n; may be repeated.')
@click.option('--euler', 'euler_indices', multiple=True, type=click.IntRange(0),
              help='Print E_n(0); may be repeated.')
@click.option('--bridge', type=click.IntRange(1), default=None,
              help='Cross-check both routes to E_{2n-1}(0) for n up to this bound.')
@click.pass_context
def numbers(ctx, bernoulli_indices, euler_indices, bridge):
    """Exact Bernoulli and Euler numbers."""
    if not (bernoulli_indices or euler_indices or bridge):
        raise click.UsageError('Nothing to compute: pass --bernoulli, --euler or --bridge')
    report = RunReport('numbers', {'bernoulli': list(bernoulli_indices),
                                   'euler': list(euler_indices), 'bridge': bridge})
    lines = []
    with report.timed('numbers'):
        for n in bernoulli_indices:
            value = format_rat(exact.bernoulli(n))
            lines.append(value)
            report.add_check('B_{}'.format(n), True, {'value': value})
        for n in euler_indices:
            value = format_rat(exact.euler_number(n))
            lines.append(value)
            report.add_check('E_{}(0)'.format(n), True, {'value': value})
        if bridge:
            mismatches = exact.bridge_mismatches(bridge)
            lines.append('bridge n<={}: {}'.format(bridge, 'ok' if not mismatches else
                                                   'mismatch at {}'.format(mismatches)))
            report.add_check('bridge n<={}'.format(bridge), not mismatches,
                             {'mismatches': mismatches})
    _finish(ctx, report, '\n'.join(lines))


@cli.command()
@click.option('--cg', 'cg', is_flag=True, help='todd(F^dual) ch(lambda_-1 F) = (-1)^g c_g(F).')
@click.option('--lambda-product', 'lambda_product', is_flag=True,
              help='sum ch(lambda_k H) t^k = prod (1 + e^a t)(1 + e^-a t).')
@click.option('--dual-sum', 'dual_sum', is_flag=True,
              help='ch(E + E^dual) keeps only twice the even part of ch(E).')
@click.option('-g', 'g', type=GENUS, required=True)
@click.option('-D', 'D', type=DEGREE, default=None, help='Truncation, 2g + 2 by default.')
@click.pass_context
def identities(ctx, cg, lambda_product, dual_sum, g, D):
    """Universal characteristic class identities."""
    if not (cg or lambda_product or dual_sum):
        raise click.UsageError('Pass at least one of --cg, --lambda-product, --dual-sum')
    report = RunReport('identities', {'cg': cg, 'lambda_product': lambda_product,
                                      'dual_sum': dual_sum, 'g': g, 'D': D})
    checks = []
    try:
        with report.timed('identities'):
            if cg:
                checks.append(kclass.verify_cg_identity(g, D))
            if lambda_product:
                checks.append(kclass.verify_lambda_product(g, D))
            if dual_sum:
                checks.append(kclass.verify_dual_sum(g, D))
    except ValueError as e:
        raise click.BadParameter(str(e))
    for check in checks:
        report.add_check('{} g={} D={}'.format(check.name, check.g, check.D), check.passed,
                         check.to_dict())
    _finish(ctx, report)


@cli.command()
@click.option('-g', 'g', type=GENUS, required=True)
@click.option('-D', 'D', type=DEGREE, default=None, help='Truncation, 2g + 2 by default.')
@click.option('--json', 'as_json', is_flag=True, help='Print the report as JSON.')
@click.pass_context
def lemma21(ctx, g, D, as_json):
    """Certify that the wedge conditions force ch(H) into degree 0."""
    report = RunReport('lemma21', {'g': g, 'D': D})
    try:
        with report.timed('lemma21'):
            result = weight_one.verify_lemma21(g, D)
    except ValueError as e:
        raise click.BadParameter(str(e))
    details = result.to_dict()
    report.add_check('lemma21 g={} D={}'.format(result.g, result.D), result.passed, details)
    if as_json:
        text = dumps(details)
    else:
        lines = ['g = {}, D = {}'.format(result.g, result.D)]
        for n, ratio in result.even_ratios:
            lines.append('  P_{} = {} * ch_{}(H)'.format(2 * n, format_rat(ratio), 2 * n))
        lines.append('certified' if result.passed else 'FAILED at ' + result.first_failure)
        text = '\n'.join(lines)
    _finish(ctx, report, text)


@cli.group()
def grr():
    """Boundary cancellations in the log-GRR formula."""


@grr.command()
@click.argument('config', type=click.Path(exists=True, dir_okay=False))
@click.option('-D', 'D', type=DEGREE, default=None)
@click.pass_context
def certify(ctx, config, D):
    """Certify a boundary config; exit 0 iff certified."""
    cfg = _load_config(config)
    report = RunReport('grr-certify', {'config': os.path.basename(config), 'D': D})
    try:
        with report.timed('certify'):
            result = ledger.theorem_grr_certify(cfg, D)
    except ValueError as e:
        raise click.BadParameter(str(e))
    report.add_check('grr {}'.format(cfg.name), result.passed, result.to_dict(cfg))
    _finish(ctx, report, '\n'.join(result.lines))


@grr.command()
@click.argument('config', type=click.Path(exists=True, dir_okay=False))
@click.option('--set', 'subset', required=True, help='Comma separated components, e.g. Y1,Y2.')
@click.pass_context
def delta(ctx, config, subset):
    """delta_I for a stratum I."""
    cfg = _load_config(config)
    names = split_list(subset)
    try:
        value = ledger.delta(names, cfg)
    except ValueError as e:
        raise click.BadParameter(str(e), param_hint='--set')
    report = RunReport('grr-delta', {'config': os.path.basename(config),
                                     'set': list(cfg.sort_y(names))})
    report.add_check('delta {}'.format(cfg.render_set(names)), True,
                     {'delta': value, 'residue_factors': value > 0})
    _finish(ctx, report, 'delta{} = {}'.format(cfg.render_set(names), value))


@grr.command()
@click.argument('config', type=click.Path(exists=True, dir_okay=False))
@click.option('--expr', 'text', required=True, help='e.g. "cg*Y1*Y1".')
@click.pass_context
def reduce(ctx, config, text):
    """Rewrite an expression to normal form and decide its pushforward."""
    cfg = _load_config(config)
    try:
        expr = parse_expr(text, cfg)
    except ParserError as e:
        raise click.ClickException(str(e))
    report = RunReport('grr-reduce', {'config': os.path.basename(config), 'expr': text})
    trace = []
    try:
        normal = ledger.reduce(expr, cfg, trace=trace)
    except ledger.RewriteError as e:
        raise click.ClickException('{}\n{}'.format(e, e.dump))
    lines = ['{} -> {}'.format(expr.render(), normal.render())]
    details = {'normal_form': normal.render(), 'steps': trace}
    qualifies = all(m.marker == 'cg' and m.meets(cfg.z_support) for m in expr.monomials())
    if qualifies:
        vanishes, certificate = ledger.pushforward_vanishes(expr, cfg)
        details['pushforward'] = certificate
        lines.append('pushforward vanishes' if vanishes else 'pushforward NOT shown to vanish')
        report.add_check('reduce', vanishes, details)
    else:
        report.add_check('reduce', True, details)
    _finish(ctx, report, '\n'.join(lines))


@cli.group()
def cone():
    """Cones in B(N) x N^dual under the involution."""


@cone.command('check')
@click.argument('path', type=click.Path(exists=True, dir_okay=False))
@click.option('--even-level/--odd-level', 'even_level', default=None,
              help='Level parity; the cone file decides when omitted (even by default).')
@click.option('--bound', type=click.IntRange(0), default=None, help='Search bound on |mu_k|.')
@click.pass_context
def check(ctx, path, even_level, bound):
    """Smoothness, invariance witness and fixed stratum of one cone."""
    try:
        parsed, options = cones.parse_cone_file(path)
    except ParserError as e:
        raise click.ClickException(str(e))
    if even_level is None:
        even_level = options['even_level']
    report = RunReport('cone-check', {'cone': os.path.basename(path),
                                      'even_level': even_level, 'bound': bound})
    with report.timed('cone'):
        verdict = cones.check_cone(parsed, even_level=even_level, bound=bound)
    lines = ['smooth: {}'.format('yes' if verdict.smooth else 'no')]
    if verdict.witness:
        lines.append('witness: j = {}, mu = {}'.format(list(verdict.witness.permutation),
                                                       list(verdict.witness.mu)))
    else:
        lines.append('witness: none found (bounded search)')
    if verdict.stratum:
        for name, ok in verdict.stratum.checks:
            lines.append('  [{}] {}'.format('ok' if ok else 'FAIL', name))
    lines.append('status: {}'.format(verdict.status))
    expect = options['expect'] or 'smooth-fixed'
    report.add_check('cone {}'.format(os.path.basename(path)), verdict.status == expect,
                     dict(verdict.to_dict(), expect=expect))
    _finish(ctx, report, '\n'.join(lines))


@cli.command('verify-all')
@click.option('--g-max', type=GENUS, default=pipeline.DEFAULT_G_MAX)
@click.option('--D-max', 'D_max', type=click.IntRange(2, pipeline.MAX_DEGREE),
              default=pipeline.DEFAULT_D_MAX)
@click.option('--max-concurrency', type=click.IntRange(1), default=None)
@click.option('--config-dir', type=click.Path(exists=True, file_okay=False),
              default=pipeline.CONFIG_DIR)
@click.option('--cone-dir', type=click.Path(exists=True, file_okay=False),
              default=pipeline.CONE_DIR)
@click.pass_context
def verify_all(ctx, g_max, D_max, max_concurrency, config_dir, cone_dir):
    """Run every check on the bundled corpus; exit 0 iff all pass."""
    report = pipeline.verify_all(g_max, D_max, max_concurrency, config_dir, cone_dir)
    text = report.render_text()
    if not report.passed:
        text += '\nfirst failure: {}'.format(report.first_failure)
    _finish(ctx, report, text)


@cli.command('report')
@click.option('--format', 'fmt', type=click.Choice(['text', 'json']), default='text')
@click.option('--input', 'source', type=click.File('r'), default='-')
@click.option('--saved', default=None, metavar='SUBCOMMAND',
              help='Read <SUBCOMMAND>.json from the output directory instead of --input.')
@click.option('--output', 'target', type=click.File('w'), default='-')
@click.pass_context
def report_command(ctx, fmt, source, saved, target):
    """Re-render a saved JSON report."""
    store = ctx.obj.get('store')
    if saved and store is None:
        raise click.UsageError('--saved needs --output-dir or CHOWCHECK_OUTPUT_DIR')
    try:
        parsed = load_report(store, saved) if saved else parse_report(source.read())
    except (ParserError, StoreError) as e:
        raise click.ClickException(str(e))
    text = parsed.to_json() if fmt == 'json' else parsed.render_text()
    target.write(text + '\n')


if __name__ == '__main__':
    cli()
