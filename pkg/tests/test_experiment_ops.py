"""Simple integration check for the experiment tool operators."""

import sys
import asyncio

from mcp_banditselect import BanditSelectMcpApp
from mcp_banditselect.core.tools import ListExperimentsOp, RunExperimentOp, ValidateConfigOp


async def main(output_dir: str, config_path: str | None = None):
    """List the presets, optionally validate a config, then run a shortened preset."""
    async with BanditSelectMcpApp(
        f"metadata.output_dir={output_dir}",
    ):
        op = ListExperimentsOp()
        await op.async_call()
        print(op.output)

        if config_path:
            op = ValidateConfigOp()
            await op.async_call(config_path=config_path)
            print(op.output)

        op = RunExperimentOp()
        await op.async_call(experiment="fig1-topleft", horizon=50, n_instances=2)
        print(op.output)


if __name__ == "__main__":
    if len(sys.argv) not in (2, 3):
        print("Usage: test_experiment_ops.py [output directory] [config file]")
        sys.exit(1)
    asyncio.run(main(*sys.argv[1:]))
