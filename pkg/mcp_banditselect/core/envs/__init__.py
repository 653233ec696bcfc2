"""Synthetic bandit environments."""

from .synth import (
    BALL_LAYOUTS,
    FEATURE_SELECTION,
    PARAM_SELECTION,
    EnvInstance,
    default_delta,
    draw_reward,
    gen_ball_env,
    gen_feature_env,
    noise_stream,
    policy_rng,
    sample_uniform_ball,
)

__all__ = [
    "BALL_LAYOUTS",
    "FEATURE_SELECTION",
    "PARAM_SELECTION",
    "EnvInstance",
    "default_delta",
    "draw_reward",
    "gen_ball_env",
    "gen_feature_env",
    "noise_stream",
    "policy_rng",
    "sample_uniform_ball",
]
