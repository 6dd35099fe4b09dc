"""Round-based scheduler.

Each round runs the same fixed phases::

    1. clear time-cost flags
    2. every share_interval rounds: intra-network fusion, then inter-network sharing
    3. every evaluation_interval rounds: theory evaluation (skipped for costed agents)
    4. actions, in the round's shuffled agent order (costed and switching agents sit out)
    5. round counter += 1

One ``random.Random`` stream drives a run. It is consumed in order by
landscape generation, then per round by the agent shuffle, sharing draws,
evaluation tie-breaks and action choices.
"""

from __future__ import annotations

import json
import random
from dataclasses import asdict, dataclass, field, replace
from typing import IO, Callable, Optional

from .agent import Agent, BehaviorConfig, act, evaluate_and_switch
from .landscape import Arg, ConfigError, Landscape, LandscapeConfig, generate_landscape
from .social import (
    HETEROGENEOUS,
    HOMOGENEOUS,
    SendHook,
    SharingConfig,
    build_networks,
    inter_network_share,
    intra_network_share,
)


@dataclass(frozen=True)
class SimulationConfig:
    landscape: LandscapeConfig = field(default_factory=LandscapeConfig)
    behavior: BehaviorConfig = field(default_factory=BehaviorConfig)
    sharing: SharingConfig = field(default_factory=SharingConfig)
    num_agents: int = 10
    composition: str = HOMOGENEOUS
    biased: bool = False
    seed: int = 0
    max_rounds: int = 100_000

    def validate(self) -> None:
        self.landscape.validate()
        self.behavior.validate()
        self.sharing.validate()
        if self.num_agents < 1:
            raise ConfigError(f"num_agents must be >= 1, got {self.num_agents}")
        if self.max_rounds < 1:
            raise ConfigError(f"max_rounds must be >= 1, got {self.max_rounds}")
        if self.composition not in (HOMOGENEOUS, HETEROGENEOUS):
            raise ConfigError(f"unknown composition {self.composition!r}")

    def with_(self, **changes) -> "SimulationConfig":
        """Copy with top-level or dotted nested overrides, e.g.
        ``cfg.with_(num_agents=20, **{"sharing.share_probability": 0.5})``."""
        nested: dict[str, dict] = {}
        top = {}
        for key, value in changes.items():
            if "." in key:
                part, name = key.split(".", 1)
                nested.setdefault(part, {})[name] = value
            else:
                top[key] = value
        for part, sub in nested.items():
            top[part] = replace(getattr(self, part), **sub)
        return replace(self, **top)

    def to_dict(self) -> dict:
        return asdict(self)


@dataclass(frozen=True)
class RunResult:
    rounds: int
    success: bool
    agents_per_theory: tuple
    terminated_by_cap: bool
    best_theory: int

    def to_dict(self) -> dict:
        return {
            "rounds": self.rounds,
            "success": self.success,
            "agents_per_theory": {str(t): n for t, n in enumerate(self.agents_per_theory)},
            "terminated_by_cap": self.terminated_by_cap,
            "best_theory": self.best_theory,
        }


def score_success(counts, best_theory: int) -> bool:
    """No theory hosts more agents than the best one (ties count as success)."""
    return max(counts) == counts[best_theory]


class Simulation:
    """Mutable state of one run. ``trace`` receives one JSON object per line."""

    def __init__(
        self,
        config: SimulationConfig,
        landscape: Optional[Landscape] = None,
        trace: Optional[IO[str]] = None,
        on_send: Optional[SendHook] = None,
    ):
        config.validate()
        self.config = config
        self.rng = random.Random(config.seed)
        self.landscape = landscape if landscape is not None else generate_landscape(config.landscape, self.rng)
        self.networks, placement = build_networks(
            config.num_agents,
            self.landscape.num_theories,
            config.composition,
            config.sharing.network_size,
        )
        network_of = {i: net.id for net in self.networks for i in net.members}
        self.agents = [
            Agent(i, Arg(theory, 0), network_id=network_of[i], biased=config.biased)
            for i, theory in enumerate(placement)
        ]
        self.round = 0
        self.trace = trace
        self.on_send = on_send
        self.last_actions: dict[int, str] = {}
        self._sizes = [t.size for t in self.landscape.theories]

    def counts(self) -> list[int]:
        out = [0] * self.landscape.num_theories
        for ag in self.agents:
            out[ag.theory] += 1
        return out

    def _emit(self, **record) -> None:
        if self.trace is not None:
            self.trace.write(json.dumps(record, sort_keys=True) + "\n")

    def step(self) -> None:
        cfg = self.config
        agents = self.agents
        for ag in agents:
            ag.time_costed = False

        order = list(range(len(agents)))
        self.rng.shuffle(order)

        if self.round % cfg.sharing.share_interval == 0:
            for net in self.networks:
                intra_network_share(net, agents)
            inter_network_share(agents, cfg.sharing, self.rng, order, self.on_send)

        switched = set()
        if self.round % cfg.behavior.evaluation_interval == 0:
            for i in order:
                ag = agents[i]
                if ag.time_costed:
                    continue
                if evaluate_and_switch(ag, self.landscape.num_theories, cfg.behavior, self.rng) is not None:
                    switched.add(i)

        actions = {}
        for i in order:
            ag = agents[i]
            if ag.time_costed:
                actions[i] = "costed"
            elif i in switched:
                actions[i] = "switch"
            else:
                actions[i] = act(ag, self.landscape, cfg.behavior, self.rng).kind
            self._emit(
                round=self.round, agent=i, action=actions[i],
                position=str(ag.position), theory=ag.theory,
            )
        self.last_actions = actions
        self.round += 1
        self._emit(round=self.round - 1, counts=self.counts())

    def agent_done(self, ag: Agent) -> bool:
        return ag.knowledge.completed(ag.theory) >= self._sizes[ag.theory]

    def is_terminated(self) -> bool:
        if self.round >= self.config.max_rounds:
            return True
        return all(self.agent_done(ag) for ag in self.agents)

    def result(self) -> RunResult:
        counts = self.counts()
        capped = not all(self.agent_done(ag) for ag in self.agents)
        return RunResult(
            rounds=self.round,
            success=score_success(counts, self.landscape.best_theory),
            agents_per_theory=tuple(counts),
            terminated_by_cap=capped,
            best_theory=self.landscape.best_theory,
        )

    def run(self, observer: Optional[Callable[["Simulation"], None]] = None) -> RunResult:
        while not self.is_terminated():
            self.step()
            if observer is not None:
                observer(self)
        return self.result()


def run_simulation(config: SimulationConfig, **kwargs) -> RunResult:
    return Simulation(config, **kwargs).run()
