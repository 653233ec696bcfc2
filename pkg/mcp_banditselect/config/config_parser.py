"""FlowLLM configuration parser anchored to this package."""

from flowllm.core.utils import PydanticConfigParser


class ConfigParser(PydanticConfigParser):
    """Looks up ``default.yaml`` and friends next to this module."""

    current_file: str = __file__
