from flask.cli import FlaskGroup

from qball import create_app
from config import config
import os


def main():
    """Create the app with the configuration named by QBALL_CONFIG"""
    config_name = os.getenv('QBALL_CONFIG') or 'default'
    app = create_app(config[config_name])
    return app


cli = FlaskGroup(create_app=main, add_default_commands=False)


if __name__ == '__main__':
    cli()
