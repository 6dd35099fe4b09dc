"""Independent reference implementations used as test oracles.

These work on plain ``(theory, node)`` tuples and raw edge lists and share no
code with the package.
"""

import itertools

from hypothesis import strategies as st

from argabm.landscape import Arg, Landscape


def tree_size(depth, branching):
    return sum(branching**level for level in range(depth + 1))


def brute_defended(attacks, a):
    """Direct transcription of the defense condition over an edge list."""
    for b, target in attacks:
        if target != a:
            continue
        countered = False
        for c, victim in attacks:
            if victim == b and c[0] == a[0]:
                countered = True
        if not countered:
            return False
    return True


def brute_defensibility(attacks, args, theory):
    attacks = [(tuple(s), tuple(t)) for s, t in attacks]
    return sum(1 for a in args if a[0] == theory and brute_defended(attacks, tuple(a)))


def all_args(num_theories, depth, branching):
    n = tree_size(depth, branching)
    return [(t, k) for t in range(num_theories) for k in range(n)]


@st.composite
def small_landscapes(draw, max_args=30):
    """Hand-assembled landscapes with at most ``max_args`` arguments and an
    arbitrary cross-theory attack set."""
    m = draw(st.integers(2, 3))
    shapes = [
        (d, b)
        for d, b in itertools.product(range(0, 4), range(1, 4))
        if m * tree_size(d, b) <= max_args
    ]
    depth, branching = draw(st.sampled_from(shapes))
    args = all_args(m, depth, branching)
    pairs = [(s, t) for s in args for t in args if s[0] != t[0]]
    chosen = draw(st.lists(st.sampled_from(pairs), unique=True, max_size=min(len(pairs), 25)))
    thresholds = draw(st.integers(1, 6))
    land = Landscape.from_edges(
        m,
        depth,
        branching,
        attacks=[(Arg(*s), Arg(*t)) for s, t in chosen],
        default_threshold=thresholds,
    )
    return land, chosen, args


def audit_run(config):
    """Run ``config`` with full tracing and check per-round invariants.
    Returns ``(result, problems, trace_lines)``."""
    import io
    import json

    from argabm.engine import Simulation
    from argabm.landscape import check_invariants

    problems = []
    trace = io.StringIO()

    def on_send(sender, _partner, fragment):
        if sender.biased and any(t.theory == sender.theory for _, t in fragment.attacks):
            problems.append(f"biased agent {sender.id} leaked an attack on its theory")

    sim = Simulation(config, trace=trace, on_send=on_send)
    problems += check_invariants(sim.landscape)

    def state():
        return [
            (ag.position, dict(ag.knowledge.degrees), set(ag.knowledge.attacks), set(ag.knowledge.discovery))
            for ag in sim.agents
        ]

    prev = state()

    def observer(s):
        nonlocal prev
        now = state()
        r = s.round - 1
        if sum(s.counts()) != len(s.agents):
            problems.append(f"round {r}: counts {s.counts()} do not sum to {len(s.agents)}")
        for ag, (pos0, deg0, att0, disc0), (pos1, deg1, att1, disc1) in zip(s.agents, prev, now):
            if any(a not in deg1 or deg1[a] < d for a, d in deg0.items()):
                problems.append(f"round {r}: agent {ag.id} lost exploration")
            if not (att0 <= att1 and disc0 <= disc1):
                problems.append(f"round {r}: agent {ag.id} forgot edges")
            if not att1 <= sim.landscape.attacks:
                problems.append(f"round {r}: agent {ag.id} knows a non-existent attack")
            if pos1 not in deg1:
                problems.append(f"round {r}: agent {ag.id} stands on an undiscovered argument")
            action = s.last_actions[ag.id]
            if ag.time_costed and (action != "costed" or pos1 != pos0):
                problems.append(f"round {r}: time-costed agent {ag.id} acted ({action})")
            if pos1.theory != pos0.theory and action != "switch":
                problems.append(f"round {r}: agent {ag.id} changed theory without switching")
        prev = now

    result = sim.run(observer)
    lines = trace.getvalue().splitlines()
    acted = {}
    for line in lines:
        rec = json.loads(line)
        if "agent" in rec:
            key = (rec["round"], rec["agent"])
            if key in acted:
                problems.append(f"agent {rec['agent']} acted twice in round {rec['round']}")
            acted[key] = rec["action"]
        elif sum(rec["counts"]) != config.num_agents:
            problems.append(f"trace round {rec['round']}: bad counts {rec['counts']}")
    if sum(result.agents_per_theory) != config.num_agents:
        problems.append("final counts do not sum to the population")
    return result, problems, lines
