"""MCP tools exposing the experiment harness.

The classes imported here are registered as operations in the FlowLLM
runtime and are referenced through the flows in ``config/default.yaml``.
"""

from .list_experiments_op import ListExperimentsOp
from .run_experiment_op import RunExperimentOp
from .validate_config_op import ValidateConfigOp

__all__ = [
    "ListExperimentsOp",
    "RunExperimentOp",
    "ValidateConfigOp",
]
