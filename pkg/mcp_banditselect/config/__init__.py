"""Configuration helpers for the BanditSelect MCP package.

Service settings are loaded by :class:`ConfigParser`, built on FlowLLM's
``PydanticConfigParser``. Experiment presets live next to it in
``experiments.yaml`` and are read by the experiment harness.
"""

from .config_parser import ConfigParser

__all__ = [
    "ConfigParser",
]
