"""Per-round behaviour of a single scientist."""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from typing import NamedTuple, Optional

from .knowledge import ExplorationDegree, SubjectiveKnowledge, reveal, subjective_defensibility
from .landscape import MAX_DEGREE, Arg, ConfigError, Landscape

EXPLORE = "explore"
MOVE = "move"
STAY = "stay"


@dataclass(frozen=True)
class BehaviorConfig:
    move_probability: float = 0.5
    evaluation_interval: int = 5
    switch_threshold: float = 0.9
    rounds_per_degree: int = 5

    def validate(self) -> None:
        if not 0.0 <= self.move_probability <= 1.0:
            raise ConfigError(f"move_probability must lie in [0, 1], got {self.move_probability}")
        if not 0.0 < self.switch_threshold <= 1.0:
            raise ConfigError(f"switch_threshold must lie in (0, 1], got {self.switch_threshold}")
        if self.evaluation_interval < 1 or self.rounds_per_degree < 1:
            raise ConfigError("evaluation_interval and rounds_per_degree must be >= 1")


class Action(NamedTuple):
    kind: str
    target: Optional[Arg] = None


@dataclass(eq=False)
class Agent:
    id: int
    position: Arg
    knowledge: SubjectiveKnowledge = field(default_factory=SubjectiveKnowledge)
    network_id: int = 0
    biased: bool = False
    time_costed: bool = False
    # arguments touched by own exploration since the last inter-network send
    recent: set = field(default_factory=set)

    def __post_init__(self):
        self.knowledge.discover(self.position)

    @property
    def theory(self) -> int:
        return self.position.theory

    def recent_buffer(self, theory: Optional[int] = None) -> SubjectiveKnowledge:
        """What this agent found out since her last send, as a fragment of her
        knowledge (degrees plus all known edges at the touched arguments)."""
        return self.knowledge.fragment(sorted(self.recent), theory)

    def snapshot(self) -> tuple:
        k = self.knowledge
        return (
            self.id,
            self.position,
            self.time_costed,
            tuple(sorted(k.degrees.items())),
            tuple(sorted(k.attacks)),
            tuple(sorted(k.discovery)),
            tuple(sorted(self.recent)),
        )


def explore_step(agent: Agent, landscape: Landscape, behavior: BehaviorConfig) -> list:
    """One round of work on the current position. Returns the edges that
    became visible (empty unless the degree went up)."""
    pos = agent.position
    k = agent.knowledge
    d = k.degrees[pos]
    if d.value >= MAX_DEGREE:
        return []
    progress = d.progress + 1
    agent.recent.add(pos)
    if progress < behavior.rounds_per_degree:
        k.raise_degree(pos, ExplorationDegree(d.value, progress))
        return []
    value = d.value + 1
    k.raise_degree(pos, ExplorationDegree(value, 0))
    new = reveal(k, landscape, pos)
    for e in new:
        agent.recent.add(e.source)
        agent.recent.add(e.target)
    return new


def potential_defenders(agent: Agent, landscape: Landscape) -> list[Arg]:
    """Discovered children of the position carrying an objective (not yet
    known) attack on a known attacker of the position."""
    k = agent.knowledge
    a = agent.position
    attackers = k.attackers_of(a)
    if not attackers:
        return []
    out = []
    for child in k.children(a):
        for b in landscape.targets_of(child):
            if b in attackers and (child, b) not in k.attacks:
                out.append(child)
                break
    return out


def choose_action(
    agent: Agent, landscape: Landscape, behavior: BehaviorConfig, rng: random.Random
) -> Action:
    k = agent.knowledge
    pos = agent.position
    defenders = potential_defenders(agent, landscape)
    if defenders:
        return Action(MOVE, defenders[0])
    candidates = [c for c in k.children(pos) if not k.fully_explored(c)]
    if not k.fully_explored(pos):
        if candidates and rng.random() < behavior.move_probability:
            return Action(MOVE, rng.choice(candidates))
        return Action(EXPLORE)
    if candidates:
        return Action(MOVE, rng.choice(candidates))
    parent = k.parent(pos)
    if parent is not None and not k.fully_explored(parent):
        return Action(MOVE, parent)
    open_args = [a for a in k.discovered(pos.theory) if not k.fully_explored(a)]
    if open_args:
        return Action(MOVE, rng.choice(open_args))
    return Action(STAY)


def act(agent: Agent, landscape: Landscape, behavior: BehaviorConfig, rng: random.Random) -> Action:
    action = choose_action(agent, landscape, behavior, rng)
    if action.kind == EXPLORE:
        explore_step(agent, landscape, behavior)
    elif action.kind == MOVE:
        agent.position = action.target
    return action


def theory_scores(knowledge: SubjectiveKnowledge, num_theories: int) -> list[int]:
    return [subjective_defensibility(knowledge, t) for t in range(num_theories)]


def evaluate_and_switch(
    agent: Agent, num_theories: int, behavior: BehaviorConfig, rng: random.Random
) -> Optional[int]:
    """Switch to a best-scoring rival when the current theory falls below
    ``switch_threshold`` times the best score. Returns the new theory or None."""
    scores = theory_scores(agent.knowledge, num_theories)
    best = max(scores)
    current = agent.theory
    if not scores[current] < behavior.switch_threshold * best:
        return None
    target = rng.choice([t for t, s in enumerate(scores) if s == best and t != current])
    k = agent.knowledge
    open_args = [a for a in k.discovered(target) if not k.fully_explored(a)]
    if open_args:
        agent.position = rng.choice(open_args)
    else:
        agent.position = Arg(target, 0)
        k.discover(agent.position)
    return target
