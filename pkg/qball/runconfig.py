"""
Run configuration for the commands.

Precedence: command flags > key = value TOML file given with --config >
RUN_* defaults of the application config.
"""
import os
import sys
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path

import click
from flask import Config, current_app

from qball.algebra import Shape
from qball.exceptions import ConfigError, SerializationError
from qball.fock import IntegralParams
from qball.scalars import ScalarMode, format_scalar, parse_rational
from qball.serialization import dumps, label

if sys.version_info >= (3, 11):
    import tomllib
else:
    import tomli as tomllib

FIELDS = ('m', 'n', 'degree', 'lambda', 'q', 'tolerance', 'out', 'ordinary', 'suite')
SUITES = ('algebra', 'fock', 'kernels', 'crosscheck', 'all')
FORMAL = 'formal'


def _integer(value, name, minimum):
    try:
        if isinstance(value, bool) or isinstance(value, float):
            raise ValueError(value)
        number = int(str(value).strip())
    except (TypeError, ValueError):
        raise ConfigError(f'{name} must be an integer, got {value!r}') from None
    if number < minimum:
        raise ConfigError(f'{name} must be >= {minimum}, got {number}')
    return number


def _rational_or_formal(value, name):
    text = str(value).strip()
    if text == FORMAL:
        return FORMAL
    if isinstance(value, float):
        raise ConfigError(f'{name} must be an exact rational p/q, got {value!r}')
    try:
        return parse_rational(text)
    except SerializationError as e:
        raise ConfigError(f'{name}: {e}') from None


def _flag_value(value):
    if isinstance(value, bool):
        return value
    return str(value).lower() in ['true', 'on', '1', 'yes']


@dataclass(frozen=True)
class RunConfig:
    m: int
    n: int
    degree: int
    lam: object
    q: object
    tolerance: Fraction
    out: object = None
    ordinary: bool = False
    suite: object = None

    @classmethod
    def build(cls, settings, max_cells):
        m = _integer(settings.get('m'), 'm', 1)
        n = _integer(settings.get('n'), 'n', 1)
        Shape(m, n).require_ball().check_size(max_cells)
        degree = _integer(settings.get('degree'), 'degree', 0)
        lam = _rational_or_formal(settings.get('lambda', FORMAL), 'lambda')
        if isinstance(lam, Fraction) and lam.denominator == 1:
            lam = int(lam)
        q = _rational_or_formal(settings.get('q', FORMAL), 'q')
        if q != FORMAL and not 0 < q < 1:
            raise ConfigError(f'q must lie in (0, 1), got {format_scalar(q)}')
        tolerance = _rational_or_formal(settings.get('tolerance'), 'tolerance')
        if tolerance == FORMAL or tolerance <= 0:
            raise ConfigError(f'tolerance must be a positive rational, got {settings.get("tolerance")!r}')
        suite = settings.get('suite')
        if suite is not None and suite not in SUITES:
            raise ConfigError(f'unknown suite {suite!r}; choose one of {", ".join(SUITES)}')
        return cls(m, n, degree, lam, q, tolerance, settings.get('out') or None,
                   _flag_value(settings.get('ordinary', False)), suite)

    @property
    def shape(self):
        return Shape(self.m, self.n)

    @property
    def lambda_is_formal(self):
        return self.lam == FORMAL

    @property
    def q_is_formal(self):
        return self.q == FORMAL

    def numeric_mode(self):
        """Exact rationals, or floats when a numeric λ is not an integer"""
        if isinstance(self.lam, Fraction):
            return ScalarMode.numeric_float(self.q)
        return ScalarMode.numeric_exact(self.q)

    def integral_params(self, max_degree):
        return IntegralParams(lam=None if self.lambda_is_formal else self.lam,
                              max_degree=max_degree, tolerance=self.tolerance)

    def as_document(self):
        document = {
            'm': self.m,
            'n': self.n,
            'degree': self.degree,
            'lambda': label(self.lam),
            'q': label(self.q),
            'tolerance': format_scalar(self.tolerance),
            'ordinary': self.ordinary,
        }
        if self.suite is not None:
            document['suite'] = self.suite
        return document


def _toml_loader(handle):
    data = tomllib.load(handle)
    unknown = sorted(set(data) - set(FIELDS))
    if unknown:
        raise ConfigError(f'unknown config file keys: {", ".join(unknown)}')
    # flask.Config keeps upper case keys only
    return {f'RUN_{key.upper()}': value for key, value in data.items()}


def load_config_file(path):
    file_config = Config(os.getcwd())
    try:
        file_config.from_file(path, load=_toml_loader, text=False)
    except OSError as e:
        raise ConfigError(f'cannot read config file {path}: {e.strerror or e}') from None
    except tomllib.TOMLDecodeError as e:
        raise ConfigError(f'invalid config file {path}: {e}') from None
    return {key[len('RUN_'):].lower(): value for key, value in file_config.items()}


def resolve_run_config(app_config, options):
    """Merge defaults, config file and flags (None means not given)"""
    settings = {key: app_config.get(f'RUN_{key.upper()}') for key in FIELDS}
    settings['ordinary'] = settings['ordinary'] or False
    config_file = options.get('config_file')
    if config_file:
        settings.update(load_config_file(config_file))
    for key in FIELDS:
        value = options.get(key)
        if value is not None and value is not False:
            settings[key] = value
    return RunConfig.build(settings, app_config['MAX_CELLS'])


def run_options(f):
    """Flags shared by every command"""
    options = [
        click.option('--m', 'm', default=None, help='Row count m.'),
        click.option('--n', 'n', default=None, help='Column count n (m <= n).'),
        click.option('--degree', 'degree', default=None, help='Truncation degree D.'),
        click.option('--lambda', 'lambda', default=None, help='λ as p/q or "formal".'),
        click.option('--q', 'q', default=None, help='q as p/q in (0, 1) or "formal".'),
        click.option('--tolerance', 'tolerance', default=None, help='Stabilization tolerance as p/q.'),
        click.option('--out', 'out', default=None, help='Write JSON here instead of stdout.'),
        click.option('--config', 'config_file', default=None, help='TOML file of key = value defaults.'),
    ]
    for option in reversed(options):
        f = option(f)
    return f


def emit_document(document, out=None):
    data = dumps(document)
    if out:
        path = Path(out)
        if path.parent and not path.parent.exists():
            path.parent.mkdir(parents=True)
        path.write_bytes(data + b'\n')
        current_app.logger.info(f'Wrote {len(data)} bytes to {path}')
    else:
        click.echo(data.decode('utf-8'))
