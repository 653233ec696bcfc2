# flake8: noqa: F401

"""Numerical core of BanditSelect: regressors, aggregation, policies, environments and the harness."""

from . import tools
