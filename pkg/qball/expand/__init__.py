from flask import Blueprint

expand = Blueprint('expand', __name__, cli_group=None)

from . import commands
