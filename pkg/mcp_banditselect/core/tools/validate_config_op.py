"""Operation for validating an experiment config file.

The file is parsed, merged with its preset and resolved exactly as the
``run`` command would do it. The tool answers with the resolved plan, one
``key: value`` per line, or with the reason the config was rejected.
"""

from loguru import logger

from flowllm.core.context import C
from flowllm.core.op import BaseAsyncToolOp
from flowllm.core.schema import ToolCall

from ..errors import ConfigError
from ..harness import load_experiment_config


@C.register_op()
class ValidateConfigOp(BaseAsyncToolOp):
    """Validate a flat YAML experiment config and report the resolved plan.

    The tool:
    1. Takes the path of a config file
    2. Parses it and checks it against the config schema
    3. Merges it with its preset and the defaults
    4. Answers with the resolved plan or with the error

    Returns:
        str: ``key: value`` lines of the resolved plan, or an error message
            starting with ``❌``.
    """

    def build_tool_call(self) -> ToolCall:
        """Build the tool call definition for validate_experiment_config.

        Returns:
            ToolCall: The tool definition with the following properties:
                - name: "validate_experiment_config"
                - description: What the tool checks
                - input_schema: A required "config_path" string
        """
        return ToolCall(
            **{
                "name": "validate_experiment_config",
                "description": "Check an experiment config file and show the settings it resolves to.",
                "input_schema": {
                    "config_path": {
                        "type": "string",
                        "description": "path of the YAML config file",
                        "required": True,
                    },
                },
            },
        )

    async def async_execute(self):
        """Execute the validation.

        The method:
        1. Extracts config_path from input_dict
        2. Loads and validates the file
        3. Resolves it into an experiment plan
        4. Sets the plan, one key per line, as the output

        Returns:
            None: The result is set via `self.set_output()`.

        Note:
            - A missing or unreadable file is reported like a schema error
            - Nothing is run; the resolved delta and algorithms are shown as
              the `run` command would use them
        """
        # Extract the config path from input parameters
        config_path = self.input_dict["config_path"]
        logger.info(f"🔧 Tool called: validate_experiment_config(config_path='{config_path}')")

        # Parse, validate and resolve against the presets
        try:
            plan = load_experiment_config(config_path).resolve()
        except (ConfigError, OSError) as e:
            content = f"❌ Invalid config {config_path}: {e}"
            logger.exception(content)
            self.set_output(content)
            return

        self.set_output("\n".join(f"{key}: {value}" for key, value in plan.to_dict().items()))
        logger.info(f"✅ Config {config_path} resolves to experiment={plan.experiment}")
