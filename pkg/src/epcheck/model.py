"""Validated model definition produced by the parser."""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Dict, FrozenSet, Mapping, Optional, Tuple, Union

from .terms import LabeledProcess, Process

DERIVED = "derived"
EXPLICIT = "explicit"


class _AnyLabel:
    """K-edge wildcard matching every labeled action (``-*->``)."""

    def __repr__(self):
        return "ANY_LABEL"

    def __str__(self):
        return "*"


ANY_LABEL = _AnyLabel()


@dataclass
class ModelDef:
    agents: Tuple[str, ...]
    values: Tuple[str, ...]
    props: Tuple[str, ...]
    states: Tuple[str, ...]
    init_state: str
    equations: Dict[str, Process] = field(default_factory=dict)
    system: Optional[LabeledProcess] = None
    k_relation: Tuple[tuple, ...] = ()
    mode: str = DERIVED
    explicit_terms: Dict[str, LabeledProcess] = field(default_factory=dict)
    delta: Tuple[tuple, ...] = ()
    init_term: Union[str, LabeledProcess, None] = None
    h_map: Dict[Tuple[str, str], str] = field(default_factory=dict)
    labeling: Dict[str, FrozenSet[str]] = field(default_factory=dict)

    def __post_init__(self):
        self._k_index = None

    @property
    def explicit(self):
        return self.mode == EXPLICIT

    def k_edges_from(self, state) -> Mapping:
        """Map label -> targets for the K-edges leaving ``state``.

        The wildcard, if present, is stored under :data:`ANY_LABEL`.
        """
        if self._k_index is None:
            index = {}
            for s, label, t in self.k_relation:
                index.setdefault(s, {}).setdefault(label, []).append(t)
            self._k_index = index
        return self._k_index.get(state, {})

    def props_at(self, state) -> FrozenSet[str]:
        return self.labeling.get(state, frozenset())

    def h(self, agent, state) -> str:
        return self.h_map[(agent, state)]
