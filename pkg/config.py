import os
import logging

from dotenv import load_dotenv

load_dotenv()


def _flag(name, default):
    return str(os.environ.get(name, default)).lower() in ['true', 'on', '1']


class Config:
    # Logging configuration (stdout carries JSON documents)
    LOG_LEVEL = os.environ.get('LOG_LEVEL') or 'INFO'
    LOG_TO_STDERR = _flag('LOG_TO_STDERR', True)
    LOG_TO_FILE = _flag('LOG_TO_FILE', False)
    LOG_FILE = os.environ.get('LOG_FILE') or 'logs/qball.log'

    # Engine limits
    MAX_CELLS = int(os.environ.get('MAX_CELLS') or 16)  # bound on m*n
    MAX_TRUNCATION_DEGREE = int(os.environ.get('MAX_TRUNCATION_DEGREE') or 80)

    # Run defaults, overridden by a --config file and then by flags
    RUN_M = int(os.environ.get('RUN_M') or 1)
    RUN_N = int(os.environ.get('RUN_N') or 1)
    RUN_DEGREE = int(os.environ.get('RUN_DEGREE') or 4)
    RUN_LAMBDA = os.environ.get('RUN_LAMBDA') or 'formal'
    RUN_Q = os.environ.get('RUN_Q') or 'formal'
    RUN_TOLERANCE = os.environ.get('RUN_TOLERANCE') or '1/1000000000000'
    RUN_OUT = os.environ.get('RUN_OUT')

    # Verification suites
    VERIFY_SEED = int(os.environ.get('VERIFY_SEED') or 20240611)
    VERIFY_CONFLUENCE_WORDS = int(os.environ.get('VERIFY_CONFLUENCE_WORDS') or 500)
    VERIFY_MAX_WORD_LENGTH = int(os.environ.get('VERIFY_MAX_WORD_LENGTH') or 8)
    VERIFY_STAR_PAIRS = int(os.environ.get('VERIFY_STAR_PAIRS') or 200)
    VERIFY_ADJOINT_SAMPLES = int(os.environ.get('VERIFY_ADJOINT_SAMPLES') or 200)
    VERIFY_FUZZ_Q = os.environ.get('VERIFY_FUZZ_Q') or '3/7'

    @classmethod
    def init_app(cls, app):
        pass


class DevelopmentConfig(Config):
    DEBUG = True
    LOG_LEVEL = 'DEBUG'


class ProductionConfig(Config):
    DEBUG = False
    LOG_TO_FILE = _flag('LOG_TO_FILE', True)

    @classmethod
    def init_app(cls, app):
        super().init_app(app)
        app.logger.setLevel(logging.INFO)
        app.logger.info('qball startup - Production Mode')


class TestingConfig(Config):
    TESTING = True
    LOG_LEVEL = 'WARNING'
    LOG_TO_FILE = False
    VERIFY_SEED = 7
    VERIFY_CONFLUENCE_WORDS = 60
    VERIFY_MAX_WORD_LENGTH = 6
    VERIFY_STAR_PAIRS = 30
    VERIFY_ADJOINT_SAMPLES = 30


config = {
    'development': DevelopmentConfig,
    'production': ProductionConfig,
    'testing': TestingConfig,
    'default': Config
}
