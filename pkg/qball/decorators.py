"""
Command decorators
Resolve the run config, enforce per-command requirements and map engine
errors onto exit codes
"""

from functools import wraps

import click
from flask import current_app

from qball.exceptions import ConfigError, IntegralError, QBallError
from qball.runconfig import resolve_run_config


def cli_errors(f):
    """Report QBallError on stderr and exit with its code"""
    @wraps(f)
    def decorated_function(*args, **kwargs):
        try:
            return f(*args, **kwargs)
        except QBallError as e:
            current_app.logger.error(f'{f.__name__} failed: {type(e).__name__}: {e}')
            click.echo(f'error: {e}', err=True)
            click.get_current_context().exit(e.exit_code)
    return decorated_function


def with_run_config(f):
    """Replace the raw option values by a resolved RunConfig"""
    @wraps(f)
    def decorated_function(**options):
        run = resolve_run_config(current_app.config, options)
        current_app.logger.info(f'Run config: {run.as_document()}')
        return f(run)
    return decorated_function


def numeric_q(run):
    if run.q_is_formal:
        raise ConfigError('this command needs a numeric --q such as 1/2')


def weighted_lambda(run):
    if run.lambda_is_formal:
        raise ConfigError('this command needs a numeric --lambda such as 3')
    bound = run.m + run.n - 1
    if run.lam <= bound:
        raise IntegralError(f'weighted integrals need λ > m+n-1 = {bound}, got λ={run.lam}')


def numeric_lambda_with_numeric_q(run):
    if not run.q_is_formal and run.lambda_is_formal and not run.ordinary:
        raise ConfigError('a numeric --q needs a numeric --lambda')


def run_requires(*checks):
    """
    Decorator that validates the resolved RunConfig
    Usage: @run_requires(numeric_q, weighted_lambda)
    """
    def decorator(f):
        @wraps(f)
        def decorated_function(run):
            for check in checks:
                check(run)
            return f(run)
        return decorated_function
    return decorator
