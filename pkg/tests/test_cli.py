import json
from fractions import Fraction

import pytest

from qball.exceptions import ConfigError, ShapeError
from qball.runconfig import RunConfig, load_config_file, resolve_run_config


def invoke_json(runner, args):
    result = runner.invoke(args=args)
    assert result.exit_code == 0, result.output
    return json.loads(result.stdout)


# run configuration ----------------------------------------------------------

def test_defaults_come_from_the_app_config(app):
    run = resolve_run_config(app.config, {})
    assert (run.m, run.n, run.degree) == (1, 1, 4)
    assert run.lambda_is_formal and run.q_is_formal
    assert run.tolerance == Fraction(1, 10 ** 12)


def test_flags_override_the_config_file(app, tmp_path):
    path = tmp_path / 'run.toml'
    path.write_text('m = 2\nn = 3\nlambda = "5"\nq = "1/3"\n')
    run = resolve_run_config(app.config, {'config_file': str(path), 'n': '2'})
    assert (run.m, run.n) == (2, 2)
    assert run.lam == 5
    assert run.q == Fraction(1, 3)


def test_config_file_rejects_unknown_keys(tmp_path):
    path = tmp_path / 'run.toml'
    path.write_text('rows = 2\n')
    with pytest.raises(ConfigError):
        load_config_file(str(path))


def test_missing_config_file(tmp_path):
    with pytest.raises(ConfigError):
        load_config_file(str(tmp_path / 'missing.toml'))


@pytest.mark.parametrize('settings', [
    {'q': 0.5},
    {'q': '3/2'},
    {'q': '0.5'},
    {'degree': '-1'},
    {'m': 'two'},
    {'tolerance': '0'},
    {'suite': 'everything'},
])
def test_invalid_settings(settings):
    base = {'m': 1, 'n': 1, 'degree': 2, 'lambda': 'formal', 'q': 'formal', 'tolerance': '1/1000'}
    base.update(settings)
    with pytest.raises(ConfigError):
        RunConfig.build(base, 16)


def test_shape_must_fit_the_ball():
    with pytest.raises(ShapeError):
        RunConfig.build({'m': 2, 'n': 1, 'degree': 1, 'tolerance': '1/1000'}, 16)


def test_resolved_config_document(app):
    run = resolve_run_config(app.config, {'lambda': '7/2', 'q': '1/2'})
    assert run.as_document() == {'m': 1, 'n': 1, 'degree': 4, 'lambda': '7/2', 'q': '1/2',
                                 'tolerance': '1/1000000000000', 'ordinary': False}


# expand -----------------------------------------------------------------------

def test_expand_disc_series(runner):
    document = invoke_json(runner, ['expand', '--m', '1', '--n', '1', '--degree', '4', '--lambda', 'formal'])
    assert document['config']['degree'] == 4
    assert [term['degree'] for term in document['terms']] == [0, 1, 2, 3, 4]
    assert document['terms'][1]['entries'][0]['coeff'] == '(1-l)/(1-q^2)'


def test_expand_with_formal_q_and_lambda_exits_cleanly(runner):
    result = runner.invoke(args=['expand', '--m', '1', '--n', '1', '--lambda', 'formal', '--q', 'formal'])
    assert result.exit_code == 0, result.output
    document = json.loads(result.stdout)
    assert document['q'] == document['lambda'] == 'formal'
    assert document['terms'][2]['entries'][0]['coeff'] != '0'


def test_expand_ordinary_kernel(runner):
    document = invoke_json(runner, ['expand', '--m', '1', '--n', '1', '--degree', '2', '--ordinary'])
    assert document['lambda'] == '2'
    assert document['terms'][1]['entries'][0]['coeff'] == '1+q^2'


def test_expand_at_integer_lambda_and_numeric_q(runner):
    document = invoke_json(runner, ['expand', '--degree', '1', '--lambda', '3', '--q', '1/2'])
    assert document['terms'][1]['entries'][0]['coeff'] == '21/16'


def test_expand_rejects_m_greater_than_n(runner):
    result = runner.invoke(args=['expand', '--m', '2', '--n', '1'])
    assert result.exit_code == 1
    assert 'error:' in result.output


def test_expand_numeric_q_needs_numeric_lambda(runner):
    result = runner.invoke(args=['expand', '--q', '1/2'])
    assert result.exit_code == 1


def test_output_is_deterministic_and_can_go_to_a_file(runner, tmp_path):
    args = ['expand', '--m', '1', '--n', '2', '--degree', '2']
    first = runner.invoke(args=args)
    out = tmp_path / 'kernel.json'
    second = runner.invoke(args=args + ['--out', str(out)])
    assert first.exit_code == second.exit_code == 0
    assert out.read_text() == first.stdout


def test_expand_reads_a_config_file(runner, tmp_path):
    path = tmp_path / 'run.toml'
    path.write_text('m = 1\nn = 2\ndegree = 1\n')
    document = invoke_json(runner, ['expand', '--config', str(path)])
    assert document['shape'] == [1, 2]
    assert document['D'] == 1


# gram and norms -----------------------------------------------------------------

def test_gram_disc(runner):
    document = invoke_json(runner, ['gram', '--m', '1', '--n', '1', '--q', '1/2', '--lambda', '3', '--degree', '1'])
    zero, one = document['grams']
    assert abs(Fraction(zero['matrix'][0][0]) - 1) < Fraction(1, 10 ** 10)
    assert abs(Fraction(one['matrix'][0][0]) - Fraction(16, 21)) < Fraction(1, 10 ** 10)
    assert one['stabilized'] is True
    assert one['basis'] == [[[1, 1, 1]]]


def test_gram_needs_lambda_above_m_plus_n_minus_one(runner):
    result = runner.invoke(args=['gram', '--lambda', '1', '--m', '1', '--n', '1', '--q', '1/2'])
    assert result.exit_code == 1


def test_gram_needs_numeric_q(runner):
    result = runner.invoke(args=['gram', '--lambda', '3'])
    assert result.exit_code == 1


def test_norms_table(runner):
    document = invoke_json(runner, ['norms', '--m', '1', '--n', '2', '--q', '1/2', '--lambda', '4', '--degree', '1'])
    assert [row['degree'] for row in document['norms']] == [0, 1, 1]
    assert document['norms'][0]['norm'] == pytest.approx(1.0)


# verify -----------------------------------------------------------------------

def test_verify_kernels(runner):
    document = invoke_json(runner, ['verify', '--suite', 'kernels', '--m', '2', '--n', '2', '--degree', '3'])
    assert document['passed'] is True
    assert {check['name'] for check in document['checks']} >= {
        'kernels.commutativity', 'kernels.telescoping', 'kernels.unit_collapse'}


def test_verify_crosscheck(runner):
    document = invoke_json(runner, ['verify', '--suite', 'crosscheck', '--m', '1', '--n', '2',
                                    '--lambda', '4', '--q', '1/2', '--degree', '2'])
    assert document['passed'] is True


def test_verify_algebra(runner):
    document = invoke_json(runner, ['verify', '--suite', 'algebra', '--m', '2', '--n', '2'])
    assert document['passed'] is True
    assert all(check['passed'] for check in document['checks'])


def test_verify_fock(runner):
    document = invoke_json(runner, ['verify', '--suite', 'fock', '--m', '1', '--n', '1', '--degree', '2'])
    assert document['passed'] is True


def test_verify_unknown_suite(runner):
    result = runner.invoke(args=['verify', '--suite', 'everything'])
    assert result.exit_code == 1
