from flask import Blueprint

gram = Blueprint('gram', __name__, cli_group=None)

from . import commands
