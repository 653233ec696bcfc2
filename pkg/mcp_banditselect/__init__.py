# flake8: noqa: E402
# pylint: disable=wrong-import-position

"""Public package interface for the BanditSelect MCP library.

Besides the numerical library under :mod:`mcp_banditselect.core`, this module
exposes the FlowLLM application that serves the experiment tools. It sets the
:envvar:`FLOW_APP_NAME` environment variable so that FlowLLM associates
configuration and logging with this application.
"""

import os

os.environ["FLOW_APP_NAME"] = "BanditSelectMCP"

from . import core
from . import config

from .main import BanditSelectMcpApp

__all__ = [
    "core",
    "config",
    "BanditSelectMcpApp",
]

__version__ = "0.1.0"
