import click
from flask import current_app

from qball.decorators import cli_errors, with_run_config
from qball.engine_cache import engines
from qball.exceptions import VerificationError
from qball.runconfig import emit_document, run_options
from qball.serialization import verification_document
from qball.verify import verify
from qball.verify.suites import VerifyContext, run_suite


@verify.cli.command('verify')
@run_options
@click.option('--suite', 'suite', default=None,
              help='algebra, fock, kernels, crosscheck or all (default).')
@cli_errors
@with_run_config
def verify_command(run):
    """Run a verification suite and report every check"""
    suite = run.suite or 'all'
    context = VerifyContext(run, current_app.config, engines())
    checks = run_suite(suite, context)

    emit_document(verification_document(suite, checks, run.as_document()), run.out)

    failed = [c.name for c in checks if not c.passed]
    if failed:
        raise VerificationError(f'{len(failed)} of {len(checks)} checks failed: {", ".join(failed)}')
    current_app.logger.info(f'verify {suite}: all {len(checks)} checks passed')
