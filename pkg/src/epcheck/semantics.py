"""Operational semantics and reachable configuration graphs."""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from typing import Dict, List, Tuple, Union

from .errors import EPCError, LimitExceeded, UnfoldLimitExceeded
from .model import ANY_LABEL, ModelDef
from .terms import (
    TAU, AgentProc, Const, GroupPrefix, Input, LabeledProcess, MPar, MRestrict,
    Nil, Par, Prefix, Receive, Restrict, Send, Sum, SyncTau, Tau, Var, Visible,
    _rename, _const_free_names, label_channel, normal_form, substitute_value,
)


@dataclass(frozen=True)
class ExplorationLimits:
    max_configs: int = 100_000
    max_const_unfold_depth: int = 64

    def __post_init__(self):
        if self.max_configs <= 0 or self.max_const_unfold_depth <= 0:
            raise ValueError("exploration limits must be positive")


DEFAULT_LIMITS = ExplorationLimits()


@dataclass(frozen=True)
class Configuration:
    state: str
    term: Union[str, LabeledProcess]  # term name in explicit mode

    def __str__(self):
        return f"({self.state}, {self.term})"


@dataclass(frozen=True)
class Transition:
    src: int
    label: object
    dst: int


@dataclass
class StateSpace:
    configs: List[Configuration]
    edges: List[Transition]
    init: int = 0
    keys: List[str] = field(default_factory=list)
    agents: Tuple[str, ...] = ()

    def __post_init__(self):
        self.out = {i: [] for i in range(len(self.configs))}
        for e in self.edges:
            self.out[e.src].append(e)

    def __len__(self):
        return len(self.configs)

    def enabled(self, c):
        return {e.label for e in self.out[c]}

    def successors(self, c):
        return [e.dst for e in self.out[c]]

    def state_of(self, c):
        return self.configs[c].state

    def states(self):
        """Global states occurring in the space, in discovery order."""
        return list(dict.fromkeys(c.state for c in self.configs))

    def reachable(self, c):
        seen = {c}
        todo = [c]
        while todo:
            for d in self.successors(todo.pop()):
                if d not in seen:
                    seen.add(d)
                    todo.append(d)
        return seen

    def find(self, state, term=None):
        """Index of the first configuration with this state (and term name)."""
        for i, c in enumerate(self.configs):
            if c.state == state and (term is None or c.term == term or self.keys[i] == term):
                return i
        raise KeyError((state, term))


# -- process level ----------------------------------------------------------

def process_steps(p, values, equations, max_unfold=DEFAULT_LIMITS.max_const_unfold_depth):
    """All one-step transitions ``(label, successor)`` of process ``p``.

    Receives are instantiated with every declared value.  Labels are
    :class:`Send`, :class:`Input` or :data:`TAU`.
    """
    const_fn = _const_free_names(equations) if equations else {}
    return _steps(p, tuple(values), equations, max_unfold, 0, const_fn)


def _steps(p, values, equations, max_unfold, unfolds, const_fn):
    if isinstance(p, Nil):
        return set()
    if isinstance(p, Prefix):
        act = p.act
        if isinstance(act, Receive):
            return {(Input(act.channel, t), substitute_value(p.cont, act.binder, t))
                    for t in values}
        if isinstance(act, Send) and isinstance(act.payload, Var):
            raise EPCError(f"send of unbound variable {act.payload} in {p}")
        return {(act, p.cont)}
    if isinstance(p, Sum):
        return (_steps(p.left, values, equations, max_unfold, unfolds, const_fn)
                | _steps(p.right, values, equations, max_unfold, unfolds, const_fn))
    if isinstance(p, Par):
        left = _steps(p.left, values, equations, max_unfold, unfolds, const_fn)
        right = _steps(p.right, values, equations, max_unfold, unfolds, const_fn)
        out = {(a, Par(l2, p.right)) for a, l2 in left}
        out |= {(a, Par(p.left, r2)) for a, r2 in right}
        for a, l2 in left:
            for b, r2 in right:
                if _complementary(a, b):
                    out.add((TAU, Par(l2, r2)))
        return out
    if isinstance(p, Restrict):
        inner = _steps(p.body, values, equations, max_unfold, unfolds, const_fn)
        return {(a, Restrict(p.name, q)) for a, q in inner if label_channel(a) != p.name}
    if isinstance(p, Const):
        if unfolds >= max_unfold:
            raise UnfoldLimitExceeded(
                f"constant {p.name} still unguarded after {max_unfold} unfoldings")
        body = equations[p.name]
        if p.renaming:
            body = _rename(body, dict(p.renaming), const_fn)
        return _steps(body, values, equations, max_unfold, unfolds + 1, const_fn)
    if isinstance(p, GroupPrefix):
        raise EPCError("group sequencing '(P).Q' has no operational rule")
    raise TypeError(f"not a process: {p!r}")


def _complementary(a, b):
    return ((isinstance(a, Input) and isinstance(b, Send) or isinstance(a, Send) and isinstance(b, Input))
            and a.channel == b.channel
            and (a.value if isinstance(a, Input) else a.payload)
            == (b.value if isinstance(b, Input) else b.payload))


# -- labeled level ----------------------------------------------------------

def labeled_steps(m, values, equations, max_unfold=DEFAULT_LIMITS.max_const_unfold_depth):
    """All one-step transitions ``(labeled action, successor)`` of ``m``.

    A synchronisation between a sending agent ``j`` and a receiving agent
    ``i`` is labeled ``tau(j,i)``.
    """
    const_fn = _const_free_names(equations) if equations else {}
    return _lsteps(m, tuple(values), equations, max_unfold, const_fn)


def _lsteps(m, values, equations, max_unfold, const_fn):
    if isinstance(m, AgentProc):
        return {(Visible(a, m.agent), AgentProc(q, m.agent))
                for a, q in _steps(m.proc, values, equations, max_unfold, 0, const_fn)}
    if isinstance(m, MPar):
        left = _lsteps(m.left, values, equations, max_unfold, const_fn)
        right = _lsteps(m.right, values, equations, max_unfold, const_fn)
        out = {(a, MPar(l2, m.right)) for a, l2 in left}
        out |= {(a, MPar(m.left, r2)) for a, r2 in right}
        for a, l2 in left:
            for b, r2 in right:
                if not (isinstance(a, Visible) and isinstance(b, Visible)):
                    continue
                if _complementary(a.action, b.action):
                    sender, receiver = (a, b) if isinstance(a.action, Send) else (b, a)
                    out.add((SyncTau(sender.agent, receiver.agent), MPar(l2, r2)))
        return out
    if isinstance(m, MRestrict):
        inner = _lsteps(m.body, values, equations, max_unfold, const_fn)
        return {(a, MRestrict(m.name, n)) for a, n in inner
                if not (isinstance(a, Visible) and label_channel(a) == m.name)}
    raise TypeError(f"not a labeled process: {m!r}")


# -- configurations ---------------------------------------------------------

def term_steps(term, model: ModelDef, limits=DEFAULT_LIMITS):
    if model.explicit:
        return {(label, dst) for src, label, dst in model.delta if src == term}
    return labeled_steps(term, model.values, model.equations, limits.max_const_unfold_depth)


def config_steps(c: Configuration, model: ModelDef, limits=DEFAULT_LIMITS):
    """Product of the term's transitions with the K-edges leaving ``c.state``."""
    k_out = model.k_edges_from(c.state)
    if not k_out:
        return set()
    out = set()
    for label, term in term_steps(c.term, model, limits):
        targets = list(k_out.get(label, ())) + list(k_out.get(ANY_LABEL, ()))
        for s2 in targets:
            out.add((label, Configuration(s2, term)))
    return out


def explore(model: ModelDef, limits=DEFAULT_LIMITS) -> StateSpace:
    """Breadth-first closure of :func:`config_steps` from the initial configuration.

    Configurations are identified up to structural congruence of their
    terms.  Successors are visited in order of their printed labels, so
    indices are deterministic.
    """
    equations = model.equations

    def normalize(state, term):
        if model.explicit:
            return Configuration(state, term), term
        key, nf = normal_form(term, equations)
        return Configuration(state, nf), key

    c0, k0 = normalize(model.init_state, model.init_term)
    index = {(c0.state, k0): 0}
    configs, keys, edges = [c0], [k0], []
    queue = deque([0])
    while queue:
        i = queue.popleft()
        succ = []
        for label, c in config_steps(configs[i], model, limits):
            c, key = normalize(c.state, c.term)
            succ.append((str(label), c.state, key, label, c))
        succ.sort(key=lambda x: x[:3])
        seen_edges = set()
        for _, state, key, label, c in succ:
            j = index.get((state, key))
            if j is None:
                if len(configs) >= limits.max_configs:
                    raise LimitExceeded(limits.max_configs, f"{configs[i]} -{label}-> {c}")
                j = len(configs)
                index[(state, key)] = j
                configs.append(c)
                keys.append(key)
                queue.append(j)
            if (label, j) not in seen_edges:
                seen_edges.add((label, j))
                edges.append(Transition(i, label, j))
    return StateSpace(configs, edges, 0, keys, tuple(model.agents))


def dump_graph(space: StateSpace):
    """Text graph: ``N <index> <state> <term>`` and ``E <from> <label> <to>`` lines."""
    lines = [f"N {i} {c.state} {space.keys[i]}" for i, c in enumerate(space.configs)]
    lines += [f"E {e.src} {e.label} {e.dst}" for e in space.edges]
    return lines
