"""An agent's subjective fragment of the landscape.

Absence from ``degrees`` means the argument is unknown; presence at degree 0
means discovered but not yet explored. Climbing from 0 to 6 takes
``6 * rounds_per_degree`` rounds of exploration.
"""

from __future__ import annotations

from typing import Iterable, NamedTuple, Optional

from .landscape import ATTACK, DISCOVERY, MAX_DEGREE, Arg, Edge, Landscape, UnknownArgumentError


class ExplorationDegree(NamedTuple):
    value: int = 0
    progress: int = 0


UNEXPLORED = ExplorationDegree(0, 0)


def _max_degree(a: ExplorationDegree, b: ExplorationDegree) -> ExplorationDegree:
    # tuple order: higher value wins, then higher progress
    return a if a >= b else b


class SubjectiveKnowledge:
    __slots__ = ("degrees", "attacks", "discovery", "_attackers", "_children", "_parent", "_complete")

    def __init__(
        self,
        degrees: Optional[dict[Arg, ExplorationDegree]] = None,
        attacks: Iterable[tuple[Arg, Arg]] = (),
        discovery: Iterable[tuple[Arg, Arg]] = (),
    ):
        self.degrees: dict[Arg, ExplorationDegree] = {}
        self.attacks: set[tuple[Arg, Arg]] = set()
        self.discovery: set[tuple[Arg, Arg]] = set()
        self._attackers: dict[Arg, set[Arg]] = {}
        self._children: dict[Arg, set[Arg]] = {}
        self._parent: dict[Arg, Arg] = {}
        self._complete: dict[int, int] = {}
        for a, d in (degrees or {}).items():
            self.raise_degree(a, ExplorationDegree(*d))
        for s, t in attacks:
            self.add_attack(s, t)
        for p, c in discovery:
            self.add_discovery(p, c)

    # -- queries -------------------------------------------------------

    def __contains__(self, a) -> bool:
        return a in self.degrees

    def __len__(self) -> int:
        return len(self.degrees)

    def __eq__(self, other) -> bool:
        if not isinstance(other, SubjectiveKnowledge):
            return NotImplemented
        return (
            self.degrees == other.degrees
            and self.attacks == other.attacks
            and self.discovery == other.discovery
        )

    def __repr__(self) -> str:
        return (
            f"SubjectiveKnowledge(args={len(self.degrees)}, attacks={len(self.attacks)}, "
            f"discovery={len(self.discovery)})"
        )

    def degree(self, a: Arg) -> int:
        d = self.degrees.get(a)
        return -1 if d is None else d.value

    def fully_explored(self, a: Arg) -> bool:
        d = self.degrees.get(a)
        return d is not None and d.value >= MAX_DEGREE

    def attackers_of(self, a: Arg) -> set[Arg]:
        return self._attackers.get(a, set())

    def children(self, a: Arg) -> list[Arg]:
        return sorted(self._children.get(a, ()))

    def parent(self, a: Arg) -> Optional[Arg]:
        return self._parent.get(a)

    def discovered(self, theory: int) -> list[Arg]:
        return sorted(a for a in self.degrees if a.theory == theory)

    def edge_known(self, e: Edge) -> bool:
        pair = (e.source, e.target)
        return pair in (self.attacks if e.kind == ATTACK else self.discovery)

    # -- mutation ------------------------------------------------------

    def discover(self, a: Arg) -> bool:
        if a in self.degrees:
            return False
        self.degrees[a] = UNEXPLORED
        return True

    def raise_degree(self, a: Arg, d: ExplorationDegree) -> None:
        cur = self.degrees.get(a)
        new = d if cur is None else _max_degree(cur, d)
        if new.value >= MAX_DEGREE and (cur is None or cur.value < MAX_DEGREE):
            self._complete[a.theory] = self._complete.get(a.theory, 0) + 1
        self.degrees[a] = new

    def completed(self, theory: int) -> int:
        """Number of arguments of ``theory`` explored to the maximum degree."""
        return self._complete.get(theory, 0)

    def add_attack(self, s: Arg, t: Arg) -> bool:
        if (s, t) in self.attacks:
            return False
        self.discover(s)
        self.discover(t)
        self.attacks.add((s, t))
        self._attackers.setdefault(t, set()).add(s)
        return True

    def add_discovery(self, p: Arg, c: Arg) -> bool:
        if (p, c) in self.discovery:
            return False
        self.discover(p)
        self.discover(c)
        self.discovery.add((p, c))
        self._children.setdefault(p, set()).add(c)
        self._parent[c] = p
        return True

    def add_edge(self, e: Edge) -> bool:
        if e.kind == ATTACK:
            return self.add_attack(e.source, e.target)
        return self.add_discovery(e.source, e.target)

    def update(self, other: "SubjectiveKnowledge") -> "SubjectiveKnowledge":
        """In-place merge of ``other`` into self; returns self."""
        mine = self.degrees
        for a, d in other.degrees.items():
            cur = mine.get(a)
            if cur is None or d > cur:
                self.raise_degree(a, d)
        for s, t in other.attacks - self.attacks:
            self.add_attack(s, t)
        for p, c in other.discovery - self.discovery:
            self.add_discovery(p, c)
        return self

    def copy(self) -> "SubjectiveKnowledge":
        new = SubjectiveKnowledge.__new__(SubjectiveKnowledge)
        new.degrees = dict(self.degrees)
        new.attacks = set(self.attacks)
        new.discovery = set(self.discovery)
        new._attackers = {k: set(v) for k, v in self._attackers.items()}
        new._children = {k: set(v) for k, v in self._children.items()}
        new._parent = dict(self._parent)
        new._complete = dict(self._complete)
        return new

    # -- derived fragments --------------------------------------------

    def fragment(self, args: Iterable[Arg], theory: Optional[int] = None) -> "SubjectiveKnowledge":
        """The slice of this knowledge about ``args``: their degrees plus every
        known edge touching them. With ``theory`` set, only arguments of that
        theory are taken; far endpoints in rival theories come along at
        degree 0."""
        out = SubjectiveKnowledge()
        picked = [a for a in args if a in self.degrees and (theory is None or a.theory == theory)]
        for a in picked:
            out.raise_degree(a, self.degrees[a])
        for a in picked:
            for b in self._attackers.get(a, ()):
                out.add_attack(b, a)
            p = self._parent.get(a)
            if p is not None:
                out.add_discovery(p, a)
            for c in self._children.get(a, ()):
                out.add_discovery(a, c)
        picked_set = set(picked)
        for s, t in self.attacks:
            if s in picked_set:
                out.add_attack(s, t)
        return out

    def dumps(self) -> str:
        lines = [f"knowledge args={len(self.degrees)}"]
        for a in sorted(self.degrees):
            d = self.degrees[a]
            lines.append(f"arg {a} degree={d.value} progress={d.progress}")
        for p, c in sorted(self.discovery):
            lines.append(f"{DISCOVERY} {p} -> {c}")
        for s, t in sorted(self.attacks):
            lines.append(f"{ATTACK} {s} -> {t}")
        return "\n".join(lines) + "\n"


def merge(into: SubjectiveKnowledge, other: SubjectiveKnowledge, landscape: Optional[Landscape] = None) -> SubjectiveKnowledge:
    """Union of two fragments as a new object: degree is the max (progress
    breaks ties), edge sets are unioned. With ``landscape`` given, foreign
    arguments are rejected."""
    if landscape is not None:
        for a in other.degrees:
            if a not in landscape:
                raise UnknownArgumentError(a)
        for s, t in other.attacks:
            if (s, t) not in landscape.attacks:
                raise UnknownArgumentError((s, t))
    return into.copy().update(other)


def full_knowledge(landscape: Landscape) -> SubjectiveKnowledge:
    k = SubjectiveKnowledge()
    for a in landscape.arguments():
        k.raise_degree(a, ExplorationDegree(MAX_DEGREE, 0))
    for e in landscape.edges():
        k.add_edge(e)
    return k


def visible_edges(knowledge: SubjectiveKnowledge, landscape: Landscape, a: Arg) -> set[Edge]:
    """Objective edges incident to ``a`` whose threshold at ``a`` is within the
    agent's current degree of ``a``. Read-only; exploration applies them."""
    if a not in knowledge:
        raise UnknownArgumentError(a)
    deg = knowledge.degree(a)
    out = set()
    for th, e in landscape.incident(a):
        if th > deg:
            break
        out.add(e)
    return out


def reveal(knowledge: SubjectiveKnowledge, landscape: Landscape, a: Arg) -> list[Edge]:
    """Add all edges visible from ``a`` to ``knowledge``; return the new ones."""
    return [e for e in sorted(visible_edges(knowledge, landscape, a)) if knowledge.add_edge(e)]


def subjective_defensibility(knowledge: SubjectiveKnowledge, theory_index: int) -> int:
    """Discovered arguments of the theory that are defended w.r.t. known
    attacks only."""
    count = 0
    attackers = knowledge._attackers
    for a in knowledge.degrees:
        if a.theory != theory_index:
            continue
        for b in attackers.get(a, ()):
            if not any(c.theory == theory_index for c in attackers.get(b, ())):
                break
        else:
            count += 1
    return count
