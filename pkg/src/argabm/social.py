"""Collaborative networks and the two kinds of information exchange."""

from __future__ import annotations

import math
import random
from dataclasses import dataclass
from typing import Callable, Optional, Sequence

from .agent import Agent
from .knowledge import SubjectiveKnowledge
from .landscape import ConfigError

HOMOGENEOUS = "homogeneous"
HETEROGENEOUS = "heterogeneous"
UNIDIRECTIONAL = "unidirectional"
BIDIRECTIONAL = "bidirectional"

SendHook = Callable[[Agent, Agent, SubjectiveKnowledge], None]


@dataclass(frozen=True)
class CollaborativeNetwork:
    id: int
    members: tuple
    composition: str


@dataclass(frozen=True)
class SharingConfig:
    share_interval: int = 5
    share_probability: float = 0.0
    direction: str = UNIDIRECTIONAL
    network_size: int = 5

    def validate(self) -> None:
        if not 0.0 <= self.share_probability <= 1.0:
            raise ConfigError(f"share_probability must lie in [0, 1], got {self.share_probability}")
        if self.share_interval < 1:
            raise ConfigError(f"share_interval must be >= 1, got {self.share_interval}")
        if self.network_size < 1:
            raise ConfigError(f"network_size must be >= 1, got {self.network_size}")
        if self.direction not in (UNIDIRECTIONAL, BIDIRECTIONAL):
            raise ConfigError(f"unknown direction {self.direction!r}")


def build_networks(
    num_agents: int, num_theories: int, composition: str, network_size: int
) -> tuple[list[CollaborativeNetwork], list[int]]:
    """Partition agents ``0..n-1`` into consecutive networks and pick each
    agent's starting theory.

    Homogeneous networks sit on one theory each, assigned round-robin by
    network. Heterogeneous placement is round-robin over agents, so every
    network is mixed and theory populations differ by at most one.
    """
    if network_size < 1:
        raise ConfigError(f"network_size must be >= 1, got {network_size}")
    if num_agents < num_theories:
        raise ConfigError(f"need at least {num_theories} agents, got {num_agents}")
    if composition not in (HOMOGENEOUS, HETEROGENEOUS):
        raise ConfigError(f"unknown composition {composition!r}")
    count = math.ceil(num_agents / network_size)
    networks = [
        CollaborativeNetwork(
            i, tuple(range(i * network_size, min((i + 1) * network_size, num_agents))), composition
        )
        for i in range(count)
    ]
    if composition == HOMOGENEOUS:
        placement = [(i // network_size) % num_theories for i in range(num_agents)]
    else:
        placement = [i % num_theories for i in range(num_agents)]
    return networks, placement


def filter_shared(fragment: SubjectiveKnowledge, sender: Agent) -> SubjectiveKnowledge:
    """Biased senders withhold attacks on their own current theory."""
    if not sender.biased:
        return fragment
    own = sender.theory
    return SubjectiveKnowledge(
        fragment.degrees,
        [(s, t) for s, t in fragment.attacks if t.theory != own],
        fragment.discovery,
    )


def intra_network_share(network: CollaborativeNetwork, agents: Sequence[Agent]) -> None:
    """Every member ends up holding the union of all members' knowledge."""
    members = [agents[i] for i in network.members]
    if len(members) < 2:
        return
    pooled = SubjectiveKnowledge()
    for ag in members:
        pooled.update(ag.knowledge)
    for ag in members:
        ag.knowledge = pooled.copy()


def outgoing(sender: Agent) -> SubjectiveKnowledge:
    return filter_shared(sender.recent_buffer(sender.theory), sender)


def _deliver(sender, partner, fragment, received, on_send):
    partner.knowledge.update(fragment)
    sender.recent.clear()
    received.add(partner.id)
    if on_send is not None:
        on_send(sender, partner, fragment)


def inter_network_share(
    agents: Sequence[Agent],
    config: SharingConfig,
    rng: random.Random,
    order: Optional[Sequence[int]] = None,
    on_send: Optional[SendHook] = None,
) -> set[int]:
    """Each agent, with ``share_probability``, sends her filtered recent
    findings to one uniformly drawn agent of another network. Returns the ids
    of agents that received something; they are marked time-costed."""
    if len({ag.network_id for ag in agents}) < 2:
        return set()
    if order is None:
        order = range(len(agents))
    received: set[int] = set()
    for i in order:
        sender = agents[i]
        if not rng.random() < config.share_probability:
            continue
        pool = [ag for ag in agents if ag.network_id != sender.network_id]
        partner = rng.choice(pool)
        sent = outgoing(sender)
        back = outgoing(partner) if config.direction == BIDIRECTIONAL else None
        # an empty fragment carries no information and costs nothing
        if len(sent):
            _deliver(sender, partner, sent, received, on_send)
        if back is not None and len(back):
            _deliver(partner, sender, back, received, on_send)
    for i in received:
        agents[i].time_costed = True
    return received
