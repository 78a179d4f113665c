from flask import Blueprint

verify = Blueprint('verify', __name__, cli_group=None)

from . import commands
