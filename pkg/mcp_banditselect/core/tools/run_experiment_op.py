"""Operation for running an experiment preset.

The run happens in a worker thread so the service loop stays responsive.
Artifacts (``regret.csv``, ``regret.svg``, ``manifest.yaml``) are written to
``{service_config.metadata["output_dir"]}/<experiment>``.
"""

import asyncio
from pathlib import Path

from loguru import logger

from flowllm.core.context import C
from flowllm.core.op import BaseAsyncToolOp
from flowllm.core.schema import ToolCall

from ..errors import ConfigError, ExperimentRuntimeError
from ..harness import ExperimentConfig, load_presets, run_and_write
from .list_experiments_op import format_presets


@C.register_op()
class RunExperimentOp(BaseAsyncToolOp):
    """Run a preset, optionally with a smaller horizon or fewer instances.

    Returns:
        str: Final mean and standard deviation of the cumulative regret per
            algorithm followed by the artifact directory, or an error message
            starting with ``❌``.
    """

    file_path: str = __file__

    def build_tool_call(self) -> ToolCall:
        """Build the tool call definition for run_experiment.

        The description is read from ``run_experiment_prompt.yaml`` and lists
        the presets, so a new preset shows up without touching this op.

        Returns:
            ToolCall: The tool definition with the following properties:
                - name: "run_experiment"
                - description: The prompt text with the preset listing
                - input_schema: A required "experiment" string plus optional
                    "horizon", "n_instances", "master_seed" and "algorithms"
        """
        return ToolCall(
            **{
                "name": "run_experiment",
                "description": self.get_prompt("tool_desc").format(experiments=format_presets(load_presets())),
                "input_schema": {
                    "experiment": {
                        "type": "string",
                        "description": "experiment preset name",
                        "required": True,
                    },
                    "horizon": {
                        "type": "integer",
                        "description": "number of rounds",
                        "required": False,
                    },
                    "n_instances": {
                        "type": "integer",
                        "description": "number of problem instances",
                        "required": False,
                    },
                    "master_seed": {
                        "type": "integer",
                        "description": "seed of instance 0",
                        "required": False,
                    },
                    "algorithms": {
                        "type": "string",
                        "description": "comma-separated algorithm labels",
                        "required": False,
                    },
                },
            },
        )

    async def async_execute(self):
        """Execute the experiment run.

        The method:
        1. Extracts the preset name and the optional overrides from input_dict
        2. Resolves them into an experiment plan
        3. Runs the plan in a worker thread and writes the artifacts
        4. Summarizes the final regret of every algorithm

        Returns:
            None: The result is set via `self.set_output()`.

        Note:
            - Configuration errors and too many failed instances are reported
              as a message instead of raised
            - The preset scales (`confidence_scale`, `alpha_scale`,
              `range_scale`) and oracle mode apply unchanged
        """
        # Extract the preset name and the artifact root
        experiment = self.input_dict["experiment"]
        output_dir = Path(C.service_config.metadata["output_dir"]).resolve()
        logger.info(f"🔧 Tool called: run_experiment(experiment='{experiment}') output_dir={output_dir}")

        # Resolve the overrides and run off the event loop
        try:
            plan = ExperimentConfig().override(
                experiment=experiment,
                horizon=self.input_dict.get("horizon"),
                n_instances=self.input_dict.get("n_instances"),
                master_seed=self.input_dict.get("master_seed"),
                algorithms=self.input_dict.get("algorithms"),
            ).resolve()
            outcome, paths = await asyncio.to_thread(run_and_write, plan, output_dir)
        except (ConfigError, ExperimentRuntimeError) as e:
            content = f"❌ Experiment '{experiment}' failed: {e}"
            logger.exception(content)
            self.set_output(content)
            return

        # One summary line per algorithm
        lines = []
        for algorithm in outcome.table.algorithms:
            mean, std, n = outcome.table.final(algorithm)
            lines.append(f"- {algorithm}: final cumulative regret {mean:.4f} ± {std:.4f} (n={n})")
        lines.append(f"failed instances: {len(outcome.failed_instances)}")
        lines.append(f"artifacts: {paths['csv'].parent}")
        self.set_output("\n".join(lines))
        logger.info(f"✅ Experiment {experiment} finished")
