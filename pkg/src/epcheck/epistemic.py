"""Indistinguishability relations derived from the epistemic map ``h``."""
from __future__ import annotations

from typing import Dict, FrozenSet, Iterable, Mapping, Tuple

from .semantics import StateSpace

EpistemicMap = Mapping[Tuple[str, str], str]


def indistinguishable(h: EpistemicMap, agent, s, s2) -> bool:
    return h[(agent, s)] == h[(agent, s2)]


def agent_class(h: EpistemicMap, agent, c, space: StateSpace) -> FrozenSet[int]:
    """Configurations ``agent`` cannot tell apart from configuration ``c``."""
    es = h[(agent, space.state_of(c))]
    return frozenset(i for i, cfg in enumerate(space.configs) if h[(agent, cfg.state)] == es)


def agent_partition(h: EpistemicMap, agent, space: StateSpace):
    """Equivalence classes of ``agent`` over the configurations of ``space``."""
    classes: Dict[str, list] = {}
    for i, cfg in enumerate(space.configs):
        classes.setdefault(h[(agent, cfg.state)], []).append(i)
    return [frozenset(v) for v in classes.values()]


def common_classes(h: EpistemicMap, coalition: Iterable[str], space: StateSpace):
    """Partition induced by the transitive closure of the union of relations.

    Returns a list mapping each configuration index to its class.
    """
    parent = list(range(len(space)))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for agent in sorted(coalition):
        first = {}
        for i, cfg in enumerate(space.configs):
            es = h[(agent, cfg.state)]
            j = first.setdefault(es, i)
            ri, rj = find(i), find(j)
            if ri != rj:
                parent[max(ri, rj)] = min(ri, rj)

    groups: Dict[int, set] = {}
    for i in range(len(space)):
        groups.setdefault(find(i), set()).add(i)
    by_root = {r: frozenset(g) for r, g in groups.items()}
    return [by_root[find(i)] for i in range(len(space))]


def common_reach(h: EpistemicMap, coalition, space: StateSpace) -> FrozenSet[Tuple[int, int]]:
    """Transitive closure of the union of the coalition's relations, as pairs."""
    if not coalition:
        raise ValueError("common_reach needs a non-empty coalition")
    classes = common_classes(h, coalition, space)
    return frozenset((i, j) for i, cls in enumerate(classes) for j in cls)
