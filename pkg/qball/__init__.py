import os
import sys
import logging
from logging.handlers import RotatingFileHandler

from flask import Flask

from config import Config


def create_app(config_class=Config):
    app = Flask(__name__)
    app.config.from_object(config_class)

    configure_logging(app)
    config_class.init_app(app)

    # Engine cache keeps memo tables between commands
    from qball.engine_cache import init_engine_cache
    init_engine_cache(app)

    # Register blueprints (command groups only, no routes)
    from qball.expand import expand as expand_blueprint
    app.register_blueprint(expand_blueprint)

    from qball.gram import gram as gram_blueprint
    app.register_blueprint(gram_blueprint)

    from qball.verify import verify as verify_blueprint
    app.register_blueprint(verify_blueprint)

    return app


def configure_logging(app):
    """Send records to stderr and optionally a rotating file"""
    level = getattr(logging, str(app.config.get('LOG_LEVEL', 'INFO')).upper(), logging.INFO)
    formatter = logging.Formatter('%(asctime)s %(levelname)s: %(message)s [in %(pathname)s:%(lineno)d]')

    # create_app may run more than once per process (tests)
    for handler in list(app.logger.handlers):
        app.logger.removeHandler(handler)

    if app.config.get('LOG_TO_STDERR'):
        stream_handler = logging.StreamHandler(sys.stderr)
        stream_handler.setFormatter(formatter)
        stream_handler.setLevel(level)
        app.logger.addHandler(stream_handler)

    if app.config.get('LOG_TO_FILE'):
        log_file = app.config.get('LOG_FILE', 'logs/qball.log')
        log_dir = os.path.dirname(log_file)
        if log_dir and not os.path.exists(log_dir):
            os.makedirs(log_dir)
        file_handler = RotatingFileHandler(log_file, maxBytes=10240000, backupCount=10, encoding='utf-8')
        file_handler.setFormatter(formatter)
        file_handler.setLevel(level)
        app.logger.addHandler(file_handler)

    app.logger.setLevel(level)
    app.logger.debug(f'Logging configured at level {logging.getLevelName(level)}')
