"""Python access to the spectral Euler-Poisson / Klein-Gordon toolkit."""

import json as _json

from ._epkg import *  # noqa: F401,F403
from ._epkg import normal_form_check as _normal_form_check

__version__ = "0.1.0"


def normal_form_report(**kwargs):
    """normal_form_check(...) parsed into a dict."""
    return _json.loads(_normal_form_check(**kwargs))
