"""Experiment configuration: flat YAML files, presets and the resolved plan.

A config file only needs the keys it changes; everything else falls back to
the preset named by ``experiment`` (``config/experiments.yaml``) and then to
:data:`DEFAULTS`. :meth:`ExperimentConfig.resolve` turns the merged values into
an :class:`ExperimentPlan`, the immutable object the runner works from.
"""

from dataclasses import asdict, dataclass
from pathlib import Path
from typing import Dict, List, Literal, Tuple

import yaml
from pydantic import BaseModel, ConfigDict, Field, ValidationError, field_validator

from ..envs.synth import BALL_LAYOUTS, default_delta
from ..errors import ConfigError

PRESETS_PATH = Path(__file__).resolve().parents[2] / "config" / "experiments.yaml"

EXPERIMENTS = ("fig1-topleft", "fig1-topright", "fig1-bottomleft", "fig1-bottomright", "custom")
FEATURE_VARIANT = "feature"
BALL_ALGORITHMS = ("ps-oful", "itl", "oracle", "regret-balancing")
FEATURE_ALGORITHMS = ("fs-scb", "oracle")
ALGORITHMS = tuple(sorted(set(BALL_ALGORITHMS) | set(FEATURE_ALGORITHMS)))

DEFAULTS: Dict[str, object] = {
    "horizon": 1000,
    "n_instances": 50,
    "master_seed": 0,
    "delta_rule": "one-over-T",
    "delta_value": None,
    "output_dir": "results",
    "n_workers": 1,
    "action_set": "finite",
    "n_actions": 50,
    "noise_sigma": 0.1,
    "noise_scale_is_variance": True,
    "eta": 2.0,
    "oracle_mode": "native",
    "confidence_scale": 1.0,
    "alpha_scale": 1.0,
    "range_scale": 1.0,
    "max_failure_fraction": 0.05,
}


@dataclass(frozen=True)
class ExperimentPlan:
    """Fully resolved experiment settings."""

    experiment: str
    description: str
    variant: str
    horizon: int
    n_instances: int
    master_seed: int
    delta: float
    algorithms: Tuple[str, ...]
    output_dir: str
    n_workers: int
    action_set: str
    n_actions: int
    noise_sigma: float
    noise_scale_is_variance: bool
    eta: float
    oracle_mode: str
    confidence_scale: float
    alpha_scale: float
    range_scale: float
    max_failure_fraction: float

    @property
    def is_feature_selection(self) -> bool:
        return self.variant == FEATURE_VARIANT

    def instance_seed(self, index: int) -> int:
        return self.master_seed + index

    def to_dict(self) -> dict:
        plan = asdict(self)
        plan["algorithms"] = list(self.algorithms)
        return plan


class ExperimentConfig(BaseModel):
    """User-facing experiment configuration; ``None`` means "not set here"."""

    model_config = ConfigDict(extra="forbid")

    experiment: Literal["fig1-topleft", "fig1-topright", "fig1-bottomleft", "fig1-bottomright", "custom"] = "custom"
    horizon: int | None = Field(default=None, ge=1)
    n_instances: int | None = Field(default=None, ge=1)
    master_seed: int | None = Field(default=None, ge=0)
    delta_rule: Literal["one-over-T", "fixed"] | None = None
    delta_value: float | None = None
    algorithms: List[str] | None = None
    output_dir: str | None = None
    n_workers: int | None = Field(default=None, ge=1)
    action_set: Literal["finite", "unit-ball"] | None = None
    n_actions: int | None = Field(default=None, ge=1)
    noise_sigma: float | None = Field(default=None, ge=0)
    noise_scale_is_variance: bool | None = None
    variant: Literal["overlapping", "disjoint", "balancing20", "feature"] | None = None
    eta: float | None = Field(default=None, gt=0)
    oracle_mode: Literal["native", "oful"] | None = None
    confidence_scale: float | None = Field(default=None, gt=0)
    alpha_scale: float | None = Field(default=None, gt=0)
    range_scale: float | None = Field(default=None, gt=0)
    max_failure_fraction: float | None = Field(default=None, ge=0, le=1)

    @field_validator("algorithms", mode="before")
    @classmethod
    def split_algorithms(cls, value):
        if isinstance(value, str):
            return [label.strip() for label in value.split(",") if label.strip()]
        return value

    def override(self, **updates) -> "ExperimentConfig":
        """Return a copy with every non-``None`` entry of ``updates`` applied."""
        merged = self.model_dump()
        merged.update({key: value for key, value in updates.items() if value is not None})
        return validate_config(merged)

    def resolve(self, presets: Dict[str, dict] | None = None) -> ExperimentPlan:
        """Merge defaults, the named preset and this config into a checked plan.

        Raises:
            ConfigError: On a missing variant, an unknown or incompatible
                algorithm, or an invalid fixed delta.
        """
        presets = load_presets() if presets is None else presets
        if self.experiment not in presets:
            raise ConfigError(f"no preset named {self.experiment!r}")
        preset = dict(presets[self.experiment])
        description = str(preset.pop("description", ""))

        values = dict(DEFAULTS)
        values.update(validate_config({"experiment": self.experiment, **preset}).model_dump(exclude_none=True))
        values.update(self.model_dump(exclude_none=True))

        variant = values.get("variant")
        if variant is None:
            raise ConfigError(f"experiment {self.experiment!r} needs a variant")
        algorithms = tuple(values.get("algorithms") or ())
        _check_algorithms(variant, algorithms)

        return ExperimentPlan(
            experiment=self.experiment,
            description=description,
            variant=variant,
            horizon=int(values["horizon"]),
            n_instances=int(values["n_instances"]),
            master_seed=int(values["master_seed"]),
            delta=_resolve_delta(values["delta_rule"], values["delta_value"], int(values["horizon"])),
            algorithms=algorithms,
            output_dir=str(values["output_dir"]),
            n_workers=int(values["n_workers"]),
            action_set=str(values["action_set"]),
            n_actions=int(values["n_actions"]),
            noise_sigma=float(values["noise_sigma"]),
            noise_scale_is_variance=bool(values["noise_scale_is_variance"]),
            eta=float(values["eta"]),
            oracle_mode=str(values["oracle_mode"]),
            confidence_scale=float(values["confidence_scale"]),
            alpha_scale=float(values["alpha_scale"]),
            range_scale=float(values["range_scale"]),
            max_failure_fraction=float(values["max_failure_fraction"]),
        )


def _check_algorithms(variant: str, algorithms: Tuple[str, ...]) -> None:
    if not algorithms:
        raise ConfigError("no algorithms configured")
    unknown = [label for label in algorithms if label not in ALGORITHMS]
    if unknown:
        raise ConfigError(f"unknown algorithm(s) {unknown}, expected a subset of {list(ALGORITHMS)}")
    if len(set(algorithms)) != len(algorithms):
        raise ConfigError(f"algorithm listed twice in {list(algorithms)}")
    allowed = FEATURE_ALGORITHMS if variant == FEATURE_VARIANT else BALL_ALGORITHMS
    misplaced = [label for label in algorithms if label not in allowed]
    if misplaced:
        raise ConfigError(f"algorithm(s) {misplaced} do not run on variant {variant!r}")
    if variant != FEATURE_VARIANT and variant not in BALL_LAYOUTS:
        raise ConfigError(f"unknown variant {variant!r}")


def _resolve_delta(rule: str, value: float | None, horizon: int) -> float:
    if rule == "one-over-T":
        return default_delta(horizon)
    if value is None:
        raise ConfigError("delta_rule 'fixed' needs delta_value")
    if not 0.0 < value <= 0.25:
        raise ConfigError(f"delta_value must lie in (0, 1/4], got {value}")
    return float(value)


def validate_config(data: dict) -> ExperimentConfig:
    try:
        return ExperimentConfig.model_validate(data)
    except ValidationError as e:
        raise ConfigError(str(e)) from e


def load_presets(path: str | Path | None = None) -> Dict[str, dict]:
    """Read the named experiment presets."""
    path = PRESETS_PATH if path is None else Path(path)
    with open(path, encoding="utf-8") as f:
        presets = yaml.safe_load(f) or {}
    if not isinstance(presets, dict):
        raise ConfigError(f"{path} must map preset names to settings")
    return presets


def load_experiment_config(path: str | Path) -> ExperimentConfig:
    """Parse a flat key-value YAML config file.

    Raises:
        ConfigError: If the file is not a mapping or fails validation.
        OSError: If the file cannot be read.
    """
    text = Path(path).read_text(encoding="utf-8")
    try:
        data = yaml.safe_load(text)
    except yaml.YAMLError as e:
        raise ConfigError(f"{path} is not valid YAML: {e}") from e
    if data is None:
        data = {}
    if not isinstance(data, dict):
        raise ConfigError(f"{path} must contain key-value pairs, got {type(data).__name__}")
    return validate_config(data)
