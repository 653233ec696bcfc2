"""Bandit policies sharing the propose/update protocol of :class:`BanditPolicy`."""

from .base import (
    BanditPolicy,
    Proposal,
    ball_optimistic_action,
    farthest_point,
    optimistic_index,
    optimistic_proposal,
    optimistic_scores,
)
from .fs_scb import FsScb, igw_distribution, sample_action
from .oful import Oful
from .ps_oful import PsOful
from .regret_balancing import RegretBalancer

__all__ = [
    "BanditPolicy",
    "Proposal",
    "ball_optimistic_action",
    "farthest_point",
    "optimistic_index",
    "optimistic_proposal",
    "optimistic_scores",
    "FsScb",
    "igw_distribution",
    "sample_action",
    "Oful",
    "PsOful",
    "RegretBalancer",
]
