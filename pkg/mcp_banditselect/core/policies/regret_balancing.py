"""Regret balancing over base bandit algorithms.

Each round one base acts. After every base has acted once, the chosen base is

    argmax_i  R_i / N_i + U(N_i) / N_i,

with ``N_i`` the number of rounds base ``i`` played, ``R_i`` the sum of the
rewards it observed and ``U`` a reference regret bound.
"""

import dataclasses
from typing import Callable, List, Sequence

import numpy as np

from ..errors import EmptyInputError, InvalidActionError
from .base import BanditPolicy, Proposal


class RegretBalancer(BanditPolicy):
    """Balancer state: pull counts and observed reward sums per base."""

    name = "regret-balancing"

    def __init__(self, bases: Sequence[BanditPolicy], reference_bound: Callable[[int], float], name: str | None = None):
        self.bases: List[BanditPolicy] = list(bases)
        self.reference_bound = reference_bound
        self.n_pulls = np.zeros(len(self.bases), dtype=int)
        self.cum_reward = np.zeros(len(self.bases))
        if name is not None:
            self.name = name

    @property
    def n_bases(self) -> int:
        return len(self.bases)

    def scores(self) -> np.ndarray:
        """Optimistic score of every base; requires ``N_i >= 1`` for all ``i``."""
        bonus = np.array([self.reference_bound(int(n)) for n in self.n_pulls])
        return (self.cum_reward + bonus) / self.n_pulls

    def select_base(self) -> int:
        if self.n_bases == 0:
            raise EmptyInputError("no base algorithms to balance")
        unpulled = np.flatnonzero(self.n_pulls == 0)
        if unpulled.size:
            return int(unpulled[0])
        return int(np.argmax(self.scores()))

    def update_base(self, i: int, reward: float, proposal: Proposal | None = None) -> "RegretBalancer":
        """Credit ``reward`` to base ``i`` and, given its proposal, let the base learn from it."""
        if not 0 <= i < self.n_bases:
            raise InvalidActionError(f"base {i} outside [0, {self.n_bases})")
        self.n_pulls[i] += 1
        self.cum_reward[i] += reward
        if proposal is not None:
            self.bases[i].update(proposal, reward)
        return self

    def propose(self, observation) -> Proposal:
        i = self.select_base()
        return dataclasses.replace(self.bases[i].propose(observation), base=i)

    def update(self, proposal: Proposal, reward: float) -> None:
        self.update_base(proposal.base, reward, proposal)
