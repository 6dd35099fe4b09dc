"""Objective argumentative landscape: theory trees, cross-theory attacks and
per-endpoint visibility thresholds.

Arguments are addressed as ``Arg(theory, node)`` where ``node`` is the
breadth-first position inside the theory's tree, so the root is node 0 and
the children of node ``k`` are ``k*b + 1 .. k*b + b`` for branching ``b``.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from typing import Iterable, NamedTuple, Optional

MAX_DEGREE = 6
ATTACK = "attack"
DISCOVERY = "discovery"


class ConfigError(ValueError):
    pass


class GenerationError(RuntimeError):
    pass


class UnknownArgumentError(KeyError):
    pass


class Arg(NamedTuple):
    theory: int
    node: int

    def __str__(self) -> str:
        return f"{self.theory}:{self.node}"

    @classmethod
    def parse(cls, text: str) -> "Arg":
        theory, node = text.split(":")
        return cls(int(theory), int(node))


class Edge(NamedTuple):
    kind: str
    source: Arg
    target: Arg


def theory_size(depth: int, branching: int) -> int:
    if branching == 1:
        return depth + 1
    return (branching ** (depth + 1) - 1) // (branching - 1)


@dataclass(frozen=True)
class TheoryTree:
    theory_index: int
    depth: int
    branching: int
    discovery_edges: frozenset = field(init=False, repr=False)

    def __post_init__(self):
        edges = frozenset(
            (self.arg(self.parent_node(k)), self.arg(k)) for k in range(1, self.size)
        )
        object.__setattr__(self, "discovery_edges", edges)

    @property
    def size(self) -> int:
        return theory_size(self.depth, self.branching)

    @property
    def root(self) -> Arg:
        return Arg(self.theory_index, 0)

    def arg(self, node: int) -> Arg:
        return Arg(self.theory_index, node)

    def arguments(self) -> list[Arg]:
        return [Arg(self.theory_index, k) for k in range(self.size)]

    def parent_node(self, node: int) -> Optional[int]:
        if node == 0:
            return None
        return (node - 1) // self.branching

    def child_nodes(self, node: int) -> list[int]:
        first = node * self.branching + 1
        return [k for k in range(first, first + self.branching) if k < self.size]


@dataclass(frozen=True)
class LandscapeConfig:
    num_theories: int = 2
    depth: int = 3
    branching: int = 4
    attack_probability: float = 0.3
    seed: int = 0

    def validate(self) -> None:
        if self.num_theories < 2:
            raise ConfigError(f"num_theories must be >= 2, got {self.num_theories}")
        if self.depth < 0:
            raise ConfigError(f"depth must be >= 0, got {self.depth}")
        if self.branching < 1:
            raise ConfigError(f"branching must be >= 1, got {self.branching}")
        if not 0.0 <= self.attack_probability <= 1.0:
            raise ConfigError(
                f"attack_probability must lie in [0, 1], got {self.attack_probability}"
            )


class Landscape:
    """Immutable objective graph. Build with :func:`generate_landscape` or
    :meth:`Landscape.from_edges`."""

    def __init__(
        self,
        theories: list[TheoryTree],
        attacks: Iterable[tuple[Arg, Arg]],
        thresholds: dict[tuple[Arg, Edge], int],
        best_theory: int,
    ):
        self.theories = tuple(theories)
        self.attacks = frozenset(attacks)
        self.thresholds = dict(thresholds)
        self.best_theory = best_theory

        self._args = frozenset(a for t in self.theories for a in t.arguments())
        self._attackers: dict[Arg, tuple[Arg, ...]] = {}
        self._targets: dict[Arg, tuple[Arg, ...]] = {}
        for src, dst in sorted(self.attacks):
            self._attackers.setdefault(dst, ())
            self._attackers[dst] += (src,)
            self._targets.setdefault(src, ())
            self._targets[src] += (dst,)

        # (threshold, edge) pairs per endpoint, sorted so visibility is a prefix scan
        incident: dict[Arg, list[tuple[int, Edge]]] = {a: [] for a in self._args}
        for edge in self.edges():
            for end in (edge.source, edge.target):
                incident[end].append((self.thresholds[(end, edge)], edge))
        self._incident = {a: tuple(sorted(v)) for a, v in incident.items()}

    @classmethod
    def from_edges(
        cls,
        num_theories: int,
        depth: int,
        branching: int,
        attacks: Iterable[tuple[Arg, Arg]] = (),
        thresholds: Optional[dict[tuple[Arg, Edge], int]] = None,
        default_threshold: int = 1,
        best_theory: Optional[int] = None,
    ) -> "Landscape":
        """Hand-assemble a landscape, mostly for tests and golden files.

        Missing thresholds default to ``default_threshold``. When
        ``best_theory`` is omitted it is the theory with the highest full
        defensibility (lowest index on ties).
        """
        theories = [TheoryTree(i, depth, branching) for i in range(num_theories)]
        attacks = [(Arg(*s), Arg(*t)) for s, t in attacks]
        for s, t in attacks:
            if s.theory == t.theory:
                raise ConfigError(f"attack {s} -> {t} lies inside one theory")
        table = dict(thresholds or {})
        edges = [Edge(DISCOVERY, p, c) for t in theories for p, c in t.discovery_edges]
        edges += [Edge(ATTACK, s, t) for s, t in attacks]
        for e in edges:
            for end in (e.source, e.target):
                table.setdefault((end, e), default_threshold)
        land = cls(theories, attacks, table, best_theory if best_theory is not None else 0)
        if best_theory is None:
            scores = [full_defensibility(land, i) for i in range(num_theories)]
            land.best_theory = scores.index(max(scores))
        return land

    @property
    def num_theories(self) -> int:
        return len(self.theories)

    def __contains__(self, a) -> bool:
        return a in self._args

    def arguments(self, theory: Optional[int] = None) -> list[Arg]:
        if theory is None:
            return [a for t in self.theories for a in t.arguments()]
        return self.theories[theory].arguments()

    def edges(self) -> list[Edge]:
        out = [Edge(DISCOVERY, p, c) for t in self.theories for p, c in sorted(t.discovery_edges)]
        out += [Edge(ATTACK, s, t) for s, t in sorted(self.attacks)]
        return out

    def attackers_of(self, a: Arg) -> tuple[Arg, ...]:
        if a not in self._args:
            raise UnknownArgumentError(a)
        return self._attackers.get(a, ())

    def targets_of(self, a: Arg) -> tuple[Arg, ...]:
        return self._targets.get(a, ())

    def incident(self, a: Arg) -> tuple[tuple[int, Edge], ...]:
        """``(threshold at a, edge)`` pairs for every edge touching ``a``."""
        if a not in self._args:
            raise UnknownArgumentError(a)
        return self._incident[a]

    def parent(self, a: Arg) -> Optional[Arg]:
        p = self.theories[a.theory].parent_node(a.node)
        return None if p is None else Arg(a.theory, p)

    def children(self, a: Arg) -> list[Arg]:
        return [Arg(a.theory, k) for k in self.theories[a.theory].child_nodes(a.node)]

    def __eq__(self, other) -> bool:
        if not isinstance(other, Landscape):
            return NotImplemented
        return (
            self.theories == other.theories
            and self.attacks == other.attacks
            and self.thresholds == other.thresholds
            and self.best_theory == other.best_theory
        )

    def __repr__(self) -> str:
        t = self.theories[0]
        return (
            f"Landscape(theories={self.num_theories}, depth={t.depth}, "
            f"branching={t.branching}, attacks={len(self.attacks)}, best={self.best_theory})"
        )


def is_defended(graph, a: Arg) -> bool:
    """True iff every attacker of ``a`` in ``graph`` is itself attacked by an
    argument of ``a``'s theory. ``graph`` is a Landscape or a knowledge
    fragment; both expose ``attackers_of`` and membership."""
    if a not in graph:
        raise UnknownArgumentError(a)
    for b in graph.attackers_of(a):
        if not any(c.theory == a.theory for c in graph.attackers_of(b)):
            return False
    return True


def full_defensibility(landscape: Landscape, theory_index: int) -> int:
    return sum(is_defended(landscape, a) for a in landscape.arguments(theory_index))


def _defend_best(attacks: set, best: int, best_args: list[Arg], rng: random.Random) -> None:
    countered = {b for c, b in attacks if c.theory == best}
    for b, a in sorted(attacks):
        if a.theory == best and b not in countered:
            attacks.add((rng.choice(best_args), b))
            countered.add(b)


def sample_attacks(config: LandscapeConfig, rng: random.Random) -> set[tuple[Arg, Arg]]:
    """First generation stage: each argument, with ``attack_probability``, gets
    one attacker drawn uniformly from the other theories."""
    by_theory = [TheoryTree(i, config.depth, config.branching).arguments() for i in range(config.num_theories)]
    attacks = set()
    for i, own in enumerate(by_theory):
        others = [a for j, args in enumerate(by_theory) if j != i for a in args]
        for a in own:
            if rng.random() < config.attack_probability:
                attacks.add((rng.choice(others), a))
    return attacks


def generate_landscape(config: LandscapeConfig, rng: Optional[random.Random] = None) -> Landscape:
    """Random landscape whose ``best_theory`` is fully defended and strictly
    ahead of every rival in full-information defensibility.

    Without an explicit ``rng`` the stream is seeded from ``config.seed``.
    """
    config.validate()
    if rng is None:
        rng = random.Random(config.seed)
    m = config.num_theories
    theories = [TheoryTree(i, config.depth, config.branching) for i in range(m)]
    by_theory = [t.arguments() for t in theories]
    attacks = sample_attacks(config, rng)

    best = rng.randrange(m) if attacks else 0
    _defend_best(attacks, best, by_theory[best], rng)

    def scores():
        probe = Landscape.from_edges(m, config.depth, config.branching, attacks, best_theory=best)
        return [full_defensibility(probe, i) for i in range(m)]

    for _ in range(100):
        if not attacks:
            break  # empty relation: every theory ties and theory 0 is best by convention
        s = scores()
        tied = [i for i in range(m) if i != best and s[i] >= s[best]]
        if not tied:
            break
        for i in tied:
            # knock out a defended rival argument with an attacker its theory
            # does not answer
            probe = Landscape.from_edges(m, config.depth, config.branching, attacks, best_theory=best)
            defended = [a for a in by_theory[i] if is_defended(probe, a)]
            answered = {t for src, t in attacks if src.theory == i}
            free = [c for c in by_theory[best] if c not in answered]
            if not free:
                raise GenerationError(
                    f"theory {i} answers every argument of theory {best}; tie cannot be broken ({config})"
                )
            attacks.add((rng.choice(free), rng.choice(defended)))
    else:
        raise GenerationError(f"no strictly best theory after 100 resampling rounds ({config})")

    thresholds: dict[tuple[Arg, Edge], int] = {}
    edges = [Edge(DISCOVERY, p, c) for t in theories for p, c in sorted(t.discovery_edges)]
    edges += [Edge(ATTACK, s, t) for s, t in sorted(attacks)]
    for e in edges:
        thresholds[(e.source, e)] = rng.randint(1, MAX_DEGREE)
        thresholds[(e.target, e)] = rng.randint(1, MAX_DEGREE)
    return Landscape(theories, attacks, thresholds, best)


def check_invariants(landscape: Landscape) -> list[str]:
    """Structural problems with ``landscape``; empty when it is well formed."""
    problems = []
    for s, t in landscape.attacks:
        if s.theory == t.theory:
            problems.append(f"attack {s}->{t} inside theory {s.theory}")
        if s not in landscape or t not in landscape:
            problems.append(f"attack {s}->{t} has unknown endpoint")
    for tree in landscape.theories:
        args = tree.arguments()
        edges = tree.discovery_edges
        if len(edges) != len(args) - 1:
            problems.append(f"theory {tree.theory_index}: {len(edges)} edges for {len(args)} arguments")
        parents: dict[Arg, int] = {}
        for p, c in edges:
            if p.theory != tree.theory_index or c.theory != tree.theory_index:
                problems.append(f"discovery edge {p}->{c} leaves theory {tree.theory_index}")
            parents[c] = parents.get(c, 0) + 1
        if any(n != 1 for n in parents.values()) or tree.root in parents:
            problems.append(f"theory {tree.theory_index}: not every non-root has one parent")
        children: dict[Arg, list[Arg]] = {}
        for p, c in edges:
            children.setdefault(p, []).append(c)
        seen, frontier = {tree.root}, [tree.root]
        while frontier:
            nxt = []
            for a in frontier:
                for c in children.get(a, []):
                    if c not in seen:
                        seen.add(c)
                        nxt.append(c)
            frontier = nxt
        if seen != set(args):
            problems.append(f"theory {tree.theory_index}: root does not reach every argument")
    for e in landscape.edges():
        for end in (e.source, e.target):
            th = landscape.thresholds.get((end, e))
            if th is None or not 1 <= th <= MAX_DEGREE:
                problems.append(f"edge {e} lacks a valid threshold at {end}")
    scores = [full_defensibility(landscape, i) for i in range(landscape.num_theories)]
    best = landscape.best_theory
    if landscape.attacks and any(s >= scores[best] for i, s in enumerate(scores) if i != best):
        problems.append(f"best theory {best} not strictly best: {scores}")
    return problems


def dumps(landscape: Landscape) -> str:
    """Line-oriented text form. Edge lines carry ``[threshold@source,
    threshold@target]``."""
    t0 = landscape.theories[0]
    lines = [
        f"landscape theories={landscape.num_theories} depth={t0.depth} "
        f"branching={t0.branching} best={landscape.best_theory}"
    ]
    for t in landscape.theories:
        lines.append(f"theory {t.theory_index}: " + " ".join(str(a) for a in t.arguments()))
    for e in landscape.edges():
        ts = landscape.thresholds[(e.source, e)]
        tt = landscape.thresholds[(e.target, e)]
        lines.append(f"{e.kind} {e.source} -> {e.target} [{ts},{tt}]")
    return "\n".join(lines) + "\n"


def loads(text: str) -> Landscape:
    lines = [ln.strip() for ln in text.splitlines() if ln.strip()]
    header = dict(kv.split("=") for kv in lines[0].split()[1:])
    m, depth, branching = int(header["theories"]), int(header["depth"]), int(header["branching"])
    attacks, thresholds = [], {}
    for ln in lines[1:]:
        kind, rest = ln.split(" ", 1)
        if kind == "theory":
            continue
        pair, th = rest.rsplit(" ", 1)
        src, dst = (Arg.parse(x.strip()) for x in pair.split("->"))
        ts, tt = (int(x) for x in th.strip("[]").split(","))
        e = Edge(kind, src, dst)
        thresholds[(src, e)] = ts
        thresholds[(dst, e)] = tt
        if kind == ATTACK:
            attacks.append((src, dst))
    return Landscape.from_edges(
        m, depth, branching, attacks, thresholds, best_theory=int(header["best"])
    )
