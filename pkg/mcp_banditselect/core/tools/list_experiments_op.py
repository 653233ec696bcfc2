"""Operation for listing the experiment presets.

The output has one line per preset:
    ```
    Available experiments (each line is "- <name>: <description>"):
    - <name_1>: <description_1>
    ...
    ```
"""

from loguru import logger

from flowllm.core.context import C
from flowllm.core.op import BaseAsyncToolOp
from flowllm.core.schema import ToolCall

from ..harness import load_presets


def format_presets(presets: dict) -> str:
    lines = ['Available experiments (each line is "- <name>: <description>"):']
    lines.extend(f"- {name}: {preset.get('description', '')}" for name, preset in presets.items())
    return "\n".join(lines)


@C.register_op()
class ListExperimentsOp(BaseAsyncToolOp):
    """List the names and descriptions of the experiment presets.

    Returns:
        str: The preset listing described in the module docstring.
    """

    def build_tool_call(self) -> ToolCall:
        """Build the tool call definition for list_experiments.

        Returns:
            ToolCall: The tool definition with name "list_experiments" and an
                empty input schema.
        """
        return ToolCall(
            **{
                "name": "list_experiments",
                "description": "List the available bandit model-selection experiments.",
                "input_schema": {},
            },
        )

    async def async_execute(self):
        """List the presets of ``config/experiments.yaml``.

        Returns:
            None: The listing is set via `self.set_output()`.

        Note:
            - Presets are listed in file order
        """
        logger.info("🔧 Tool called: list_experiments()")
        presets = load_presets()
        self.set_output(format_presets(presets))
        logger.info(f"✅ Listed {len(presets)} experiment presets")
