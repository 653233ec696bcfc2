"""Entry point and application wrapper for the BanditSelect MCP service.

:class:`BanditSelectMcpApp` wires :class:`flowllm.core.application.Application`
to the package's configuration parser. The service exposes the experiment
harness as MCP tools; the command line is forwarded to FlowLLM unchanged, so
``metadata.output_dir=./results`` style overrides work as usual.
"""

import sys

from flowllm.core.application import Application

from .config import ConfigParser


class BanditSelectMcpApp(Application):
    """FlowLLM application preconfigured with the BanditSelect config parser.

    No model endpoints are needed: the tools only run local simulations.
    """

    def __init__(self, *args, config_path: str = None, **kwargs):
        super().__init__(
            *args,
            service_config=None,
            parser=ConfigParser,
            config_path=config_path,
            load_default_config=True,
            **kwargs,
        )


def main() -> None:
    """Run the BanditSelect MCP service with the command-line arguments."""
    with BanditSelectMcpApp(*sys.argv[1:]) as app:
        app.run_service()


if __name__ == "__main__":
    main()
