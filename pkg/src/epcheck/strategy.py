"""Partial strategies for coalitions and the outcome graphs they induce."""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Dict, FrozenSet, Iterator, List, Optional

from .semantics import StateSpace, Transition


def action_belongs(label, coalition) -> bool:
    """Whether ``label`` is an action of the coalition (all participants in it)."""
    return label.agents <= frozenset(coalition)


@dataclass(frozen=True)
class PartialStrategy:
    coalition: FrozenSet[str]
    choice: tuple  # sorted (state, label) pairs

    @property
    def domain(self):
        return frozenset(s for s, _ in self.choice)

    def as_dict(self):
        return dict(self.choice)

    @classmethod
    def of(cls, coalition, choice: Dict):
        return cls(frozenset(coalition), tuple(sorted(choice.items(), key=lambda kv: kv[0])))


def enabled_coalition_actions(coalition, space: StateSpace, states=None):
    """For each state, the coalition actions enabled at some configuration in it.

    Returns an ordered dict ``state -> sorted labels``; states without any
    such action are left out.
    """
    allowed = None if states is None else set(states)
    out: Dict[str, set] = {}
    for e in space.edges:
        s = space.state_of(e.src)
        if allowed is not None and s not in allowed:
            continue
        if action_belongs(e.label, coalition):
            out.setdefault(s, set()).add(e.label)
    order = space.states()
    return {s: sorted(out[s], key=str) for s in order if s in out}


def enumerate_strategies(coalition, space: StateSpace, states=None) -> Iterator[PartialStrategy]:
    """Every partial strategy over ``states`` (default: all states of ``space``).

    Domains are produced by increasing size and then in state order; for a
    fixed domain the choices vary lexicographically.
    """
    options = enabled_coalition_actions(coalition, space, states)
    candidates = list(options)
    coalition = frozenset(coalition)
    for size in range(len(candidates) + 1):
        for domain in itertools.combinations(candidates, size):
            for picks in itertools.product(*(options[s] for s in domain)):
                yield PartialStrategy(coalition, tuple(zip(domain, picks)))


def count_strategies(coalition, space: StateSpace, states=None) -> int:
    n = 1
    for labels in enabled_coalition_actions(coalition, space, states).values():
        n *= 1 + len(labels)
    return n


@dataclass
class OutcomeGraph:
    base: StateSpace
    kept_edges: List[Transition]

    def __post_init__(self):
        self.out: Dict[int, List[int]] = {}
        for e in self.kept_edges:
            self.out.setdefault(e.src, []).append(e.dst)

    def successors(self, c):
        return self.out.get(c, [])

    def reachable(self, c):
        seen = {c}
        todo = [c]
        while todo:
            for d in self.successors(todo.pop()):
                if d not in seen:
                    seen.add(d)
                    todo.append(d)
        return seen


def keeps(label, state, choice, others) -> bool:
    if state in choice:
        return label == choice[state]
    return action_belongs(label, others)


def outcome_graph(space: StateSpace, strat: PartialStrategy, agents=None) -> OutcomeGraph:
    """Edges compatible with ``strat``.

    From a state in the domain only the chosen action survives; elsewhere
    only actions of the agents outside the coalition survive.
    """
    agents = frozenset(agents if agents is not None else space.agents)
    others = agents - strat.coalition
    choice = strat.as_dict()
    kept = [e for e in space.edges
            if keeps(e.label, space.state_of(e.src), choice, others)]
    return OutcomeGraph(space, kept)


def has_outcome(g: OutcomeGraph, c) -> bool:
    return bool(g.successors(c))
