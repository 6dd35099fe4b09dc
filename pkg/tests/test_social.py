import random

import pytest
from hypothesis import given, strategies as st

from argabm.agent import Agent
from argabm.knowledge import ExplorationDegree, SubjectiveKnowledge
from argabm.landscape import Arg, ConfigError
from argabm.social import (
    BIDIRECTIONAL,
    HETEROGENEOUS,
    HOMOGENEOUS,
    CollaborativeNetwork,
    SharingConfig,
    build_networks,
    filter_shared,
    inter_network_share,
    intra_network_share,
)


# --- networks ----------------------------------------------------------

def test_ten_agents_homogeneous():
    nets, placement = build_networks(10, 2, HOMOGENEOUS, 5)
    assert [n.members for n in nets] == [(0, 1, 2, 3, 4), (5, 6, 7, 8, 9)]
    assert placement == [0] * 5 + [1] * 5


def test_ten_agents_heterogeneous():
    nets, placement = build_networks(10, 2, HETEROGENEOUS, 5)
    assert len(nets) == 2
    per_net = [sorted(placement[i] for i in n.members) for n in nets]
    assert per_net == [[0, 0, 0, 1, 1], [0, 0, 1, 1, 1]]


def test_hundred_agents_twenty_networks():
    nets, _ = build_networks(100, 2, HOMOGENEOUS, 5)
    assert len(nets) == 20
    assert all(len(n.members) == 5 for n in nets)


@pytest.mark.parametrize("args", [(10, 2, HOMOGENEOUS, 0), (1, 2, HOMOGENEOUS, 5), (10, 2, "mixed", 5)])
def test_build_networks_errors(args):
    with pytest.raises(ConfigError):
        build_networks(*args)


@given(st.integers(2, 120), st.integers(2, 3), st.sampled_from([HOMOGENEOUS, HETEROGENEOUS]), st.integers(1, 12))
def test_networks_partition_population(n, m, comp, size):
    if n < m:
        n = m
    nets, placement = build_networks(n, m, comp, size)
    members = [i for net in nets for i in net.members]
    assert sorted(members) == list(range(n))
    assert len(nets) == -(-n // size)
    assert len(placement) == n and set(placement) <= set(range(m))
    if comp == HOMOGENEOUS:
        for net in nets:
            assert len({placement[i] for i in net.members}) == 1
    else:
        counts = [placement.count(t) for t in range(m)]
        assert max(counts) - min(counts) <= 1


# --- intra-network fusion ---------------------------------------------

def _agents(*knowledges, nets=None):
    out = []
    for i, k in enumerate(knowledges):
        out.append(Agent(i, Arg(0, 0), k, network_id=(nets[i] if nets else 0)))
    return out


def test_intra_share_takes_max_degree():
    a = Arg(0, 4)
    agents = _agents(*(SubjectiveKnowledge({a: (d, 0)}) for d in (2, 4, 0)))
    intra_network_share(CollaborativeNetwork(0, (0, 1, 2), HOMOGENEOUS), agents)
    assert all(ag.knowledge.degrees[a] == (4, 0) for ag in agents)
    assert agents[0].knowledge == agents[1].knowledge == agents[2].knowledge
    assert agents[0].knowledge is not agents[1].knowledge


def test_intra_share_unions_disjoint_knowledge_without_cost():
    x = SubjectiveKnowledge({Arg(0, 1): (1, 0)})
    y = SubjectiveKnowledge(attacks=[(Arg(1, 2), Arg(0, 3))])
    agents = _agents(x, y)
    intra_network_share(CollaborativeNetwork(0, (0, 1), HOMOGENEOUS), agents)
    for ag in agents:
        assert Arg(0, 1) in ag.knowledge and (Arg(1, 2), Arg(0, 3)) in ag.knowledge.attacks
        assert not ag.time_costed


def test_singleton_network_unchanged():
    agents = _agents(SubjectiveKnowledge({Arg(0, 1): (1, 0)}))
    before = agents[0].snapshot()
    intra_network_share(CollaborativeNetwork(0, (0,), HOMOGENEOUS), agents)
    assert agents[0].snapshot() == before


# --- filter ------------------------------------------------------------

def _fragment():
    a, b, c, rival = Arg(0, 1), Arg(1, 0), Arg(0, 2), Arg(1, 3)
    return SubjectiveKnowledge({a: (2, 0), c: (1, 0)}, [(b, a), (c, rival)], [(Arg(0, 0), a)])


def test_reliable_sender_passes_everything():
    f = _fragment()
    assert filter_shared(f, Agent(0, Arg(0, 0))) is f


def test_biased_sender_withholds_incoming_attacks_only():
    f = _fragment()
    out = filter_shared(f, Agent(0, Arg(0, 0), biased=True))
    assert out.attacks == {(Arg(0, 2), Arg(1, 3))}
    assert out.discovery == f.discovery
    # the attacker itself is still passed on as an argument
    assert set(out.degrees) == set(f.degrees)


def test_bias_is_relative_to_current_theory():
    f = _fragment()
    out = filter_shared(f, Agent(0, Arg(1, 0), biased=True))
    assert out.attacks == {(Arg(1, 0), Arg(0, 1))}


# --- inter-network sharing --------------------------------------------

def _population(n_per=3, nets=2, biased=False):
    agents = []
    for i in range(n_per * nets):
        net = i // n_per
        ag = Agent(i, Arg(net % 2, 0), network_id=net, biased=biased)
        ag.knowledge.raise_degree(ag.position, ExplorationDegree(1, 0))
        ag.knowledge.add_attack(Arg(1 - net % 2, i), ag.position)
        ag.recent.add(ag.position)
        agents.append(ag)
    return agents


def test_zero_probability_moves_nothing():
    agents = _population()
    before = [ag.snapshot() for ag in agents]
    for seed in range(20):
        assert inter_network_share(agents, SharingConfig(share_probability=0.0), random.Random(seed)) == set()
    assert [ag.snapshot() for ag in agents] == before


def test_full_probability_unidirectional():
    agents = _population()
    sends = []
    received = inter_network_share(
        agents, SharingConfig(share_probability=1.0), random.Random(3),
        on_send=lambda s, r, f: sends.append((s.id, r.id)),
    )
    assert {s for s, _ in sends} == set(range(6))
    assert received == {r for _, r in sends}
    for ag in agents:
        assert ag.time_costed == (ag.id in received)
        assert not ag.recent
    for s, r in sends:
        assert agents[s].network_id != agents[r].network_id
        assert (Arg(1 - agents[s].theory, s), agents[s].position) in agents[r].knowledge.attacks


def test_bidirectional_exchange_costs_both_sides():
    agents = _population(n_per=1)
    received = inter_network_share(
        agents, SharingConfig(share_probability=1.0, direction=BIDIRECTIONAL), random.Random(0), order=[0]
    )
    assert received == {0, 1}
    assert all(ag.time_costed for ag in agents)
    assert (Arg(1, 0), Arg(0, 0)) in agents[1].knowledge.attacks
    assert (Arg(0, 1), Arg(1, 0)) in agents[0].knowledge.attacks


def test_single_network_is_a_no_op():
    agents = _population(n_per=4, nets=1)
    assert inter_network_share(agents, SharingConfig(share_probability=1.0), random.Random(0)) == set()
    assert not any(ag.time_costed for ag in agents)


def test_empty_buffer_costs_nothing():
    agents = _population()
    for ag in agents:
        ag.recent.clear()
    assert inter_network_share(agents, SharingConfig(share_probability=1.0), random.Random(0)) == set()


def test_buffer_restricted_to_current_theory():
    agents = _population(n_per=1)
    sender = agents[0]
    sender.recent.add(Arg(1, 5))
    sender.knowledge.raise_degree(Arg(1, 5), ExplorationDegree(3, 0))
    inter_network_share(agents, SharingConfig(share_probability=1.0), random.Random(0), order=[0])
    assert Arg(1, 5) not in agents[1].knowledge


@given(st.integers(0, 10_000))
def test_biased_sends_never_carry_attacks_on_own_theory(seed):
    agents = _population(n_per=3, nets=3, biased=True)
    def check(sender, _, fragment):
        assert all(t.theory != sender.theory for _, t in fragment.attacks)
    inter_network_share(agents, SharingConfig(share_probability=1.0), random.Random(seed), on_send=check)


@pytest.mark.parametrize(
    "cfg",
    [SharingConfig(share_probability=1.5), SharingConfig(share_interval=0),
     SharingConfig(network_size=0), SharingConfig(direction="sideways")],
)
def test_invalid_sharing_rejected(cfg):
    with pytest.raises(ConfigError):
        cfg.validate()
