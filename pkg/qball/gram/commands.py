from flask import current_app

from qball.decorators import cli_errors, numeric_q, run_requires, weighted_lambda, with_run_config
from qball.engine_cache import engines
from qball.exceptions import StabilizationError
from qball.gram import gram
from qball.runconfig import emit_document, run_options
from qball.serialization import gram_document, norms_document


def _fock_space(run):
    return engines().fock(run.shape, run.numeric_mode())


def _params(run):
    return run.integral_params(current_app.config['MAX_TRUNCATION_DEGREE'])


@gram.cli.command('gram')
@run_options
@cli_errors
@with_run_config
@run_requires(weighted_lambda, numeric_q)
def gram_command(run):
    """Weighted Gram matrices ⟨z^E, z^E'⟩_λ for degrees 0..D"""
    space = _fock_space(run)
    params = _params(run)
    results = [space.gram_matrix(d, params) for d in range(run.degree + 1)]

    emit_document(gram_document(run.shape, results, run.lam, run.q, run.as_document()), run.out)

    unstable = [r.degree for r in results if not r.stabilized]
    if unstable:
        raise StabilizationError(f'Gram matrices of degree {unstable} did not stabilize '
                                 f'by degree {params.max_degree}')
    current_app.logger.info(f'gram finished: shape {run.shape}, degrees 0..{run.degree}')


@gram.cli.command('norms')
@run_options
@cli_errors
@with_run_config
@run_requires(weighted_lambda, numeric_q)
def norms_command(run):
    """Table of ‖z^E‖²_λ for all monomials of degree ≤ D"""
    space = _fock_space(run)
    params = _params(run)
    rows = space.norms(run.degree, params)

    emit_document(norms_document(run.shape, rows, run.lam, run.q, run.as_document()), run.out)

    if not all(stabilized for _, _, stabilized in rows):
        raise StabilizationError(f'norms did not stabilize by degree {params.max_degree}')
    current_app.logger.info(f'norms finished: {len(rows)} monomials')
