from dataclasses import replace
from fractions import Fraction

import click
from flask import current_app

from qball.decorators import cli_errors, numeric_lambda_with_numeric_q, run_requires, with_run_config
from qball.engine_cache import engines
from qball.exceptions import ConfigError
from qball.expand import expand
from qball.runconfig import emit_document, run_options
from qball.scalars import ScalarMode
from qball.serialization import kernel_series_document


def _specialize(series, run):
    """Numeric q turns the exact series into rationals (floats for non-integer λ)"""
    if run.q_is_formal:
        return series
    if isinstance(run.lam, Fraction) and not run.ordinary:
        q = float(run.q)
        return series.evaluate(ScalarMode.numeric_float(q, q ** (2 * float(run.lam))))
    return series.evaluate(ScalarMode.numeric_exact(run.q))


@expand.cli.command('expand')
@run_options
@click.option('--ordinary', 'ordinary', is_flag=True, default=False,
              help='Expand the ordinary Bergman kernel (λ = m+n).')
@cli_errors
@with_run_config
@run_requires(numeric_lambda_with_numeric_q)
def expand_command(run):
    """Expand the weighted Bergman kernel K_λ to degree D"""
    kernels = engines().kernels(run.shape, ScalarMode.exact_qu())

    if run.ordinary:
        if not run.lambda_is_formal and run.lam != run.m + run.n:
            current_app.logger.warning(f'--ordinary fixes λ = m+n = {run.m + run.n}; ignoring λ={run.lam}')
        series = kernels.ordinary_bergman_kernel(run.degree)
    elif run.lambda_is_formal or isinstance(run.lam, int):
        series = kernels.bergman_kernel(run.degree, None if run.lambda_is_formal else run.lam)
    elif run.q_is_formal:
        raise ConfigError(f'a non-integer λ={run.lam} needs a numeric --q')
    else:
        # u = q^{2λ} is substituted numerically by _specialize
        series = replace(kernels.bergman_kernel(run.degree), lam=run.lam)

    series = _specialize(series, run)

    emit_document(kernel_series_document(series, q=run.q, config=run.as_document()), run.out)
    current_app.logger.info(f'expand finished: shape {run.shape}, D={run.degree}')
