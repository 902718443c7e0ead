"""Term language: actions, processes, agent-labeled processes.

Channel names, variables and values live in separate syntactic classes.
A send payload is either a value (plain ``str``) or a :class:`Var` that is
bound by an enclosing receive.  All terms are frozen dataclasses and can be
shared freely.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Mapping, Optional, Union


@dataclass(frozen=True)
class Var:
    name: str

    def __str__(self):
        return self.name


Payload = Union[str, Var]


# -- actions ----------------------------------------------------------------

@dataclass(frozen=True)
class Send:
    channel: str
    payload: Payload

    def __str__(self):
        return f"'{self.channel}<{self.payload}>"


@dataclass(frozen=True)
class Receive:
    channel: str
    binder: str

    def __str__(self):
        return f"{self.channel}({self.binder})"


@dataclass(frozen=True)
class Input:
    """A receive instantiated with a concrete value, ``a<t>``.

    Only ever appears as a transition label, never inside a term.
    """
    channel: str
    value: str

    def __str__(self):
        return f"{self.channel}<{self.value}>"


@dataclass(frozen=True)
class Tau:
    def __str__(self):
        return "tau"


TAU = Tau()

Action = Union[Send, Receive, Tau]
StepLabel = Union[Send, Input, Tau]


# -- labeled actions --------------------------------------------------------

@dataclass(frozen=True)
class Visible:
    """An action ``{alpha}_i`` performed by a single agent."""
    action: StepLabel
    agent: str

    def __str__(self):
        return f"{self.action}@{self.agent}"

    @property
    def agents(self):
        return frozenset((self.agent,))


@dataclass(frozen=True)
class SyncTau:
    """A synchronisation ``{tau}_{i,j}``; ``first`` is the sending agent."""
    first: str
    second: str

    def __str__(self):
        return f"tau({self.first},{self.second})"

    @property
    def agents(self):
        return frozenset((self.first, self.second))


LabeledAction = Union[Visible, SyncTau]


def label_channel(label) -> Optional[str]:
    act = label.action if isinstance(label, Visible) else label
    if isinstance(act, (Send, Input, Receive)):
        return act.channel
    return None


# -- processes --------------------------------------------------------------

@dataclass(frozen=True)
class Nil:
    def __str__(self):
        return "0"


NIL = Nil()


@dataclass(frozen=True)
class Prefix:
    act: Action
    cont: "Process"

    def __str__(self):
        return f"{self.act}.{_wrap(self.cont)}"


@dataclass(frozen=True)
class Restrict:
    name: str
    body: "Process"

    def __str__(self):
        return f"new {self.name} in {_wrap(self.body)}"


@dataclass(frozen=True)
class Par:
    left: "Process"
    right: "Process"

    def __str__(self):
        return f"({self.left} | {self.right})"


@dataclass(frozen=True)
class Sum:
    left: "Process"
    right: "Process"

    def __str__(self):
        return f"({self.left} + {self.right})"


@dataclass(frozen=True)
class Const:
    """Reference to a process constant.

    ``renaming`` is a postfix name substitution applied to the constant's
    body when it is unfolded; it is how alpha-conversion of a restricted
    name reaches into a definition.
    """
    name: str
    renaming: tuple = ()

    def __str__(self):
        if not self.renaming:
            return self.name
        subs = ",".join(f"{new}/{old}" for old, new in self.renaming)
        return f"{self.name}{{{subs}}}"


@dataclass(frozen=True)
class GroupPrefix:
    """``(P | Q).C``: a parenthesised group used as a prefix.

    Has no operational rule; only accepted as inert data in explicit-mode
    models.
    """
    group: "Process"
    cont: "Process"

    def __str__(self):
        return f"({self.group}).{_wrap(self.cont)}"


Process = Union[Nil, Prefix, Restrict, Par, Sum, Const, GroupPrefix]


def _wrap(p):
    if isinstance(p, (Nil, Const, Prefix, Par, Sum)):
        return str(p)
    return f"({p})"


# -- labeled processes ------------------------------------------------------

@dataclass(frozen=True)
class AgentProc:
    proc: Process
    agent: str

    def __str__(self):
        return f"{{{self.proc}}}@{self.agent}"


@dataclass(frozen=True)
class MPar:
    left: "LabeledProcess"
    right: "LabeledProcess"

    def __str__(self):
        return f"({self.left} | {self.right})"


@dataclass(frozen=True)
class MRestrict:
    name: str
    body: "LabeledProcess"

    def __str__(self):
        return f"new {self.name} in ({self.body})"


LabeledProcess = Union[AgentProc, MPar, MRestrict]


def par_all(terms, nil=NIL):
    """Left-nested parallel composition of ``terms``."""
    terms = list(terms)
    if not terms:
        return nil
    out = terms[0]
    cls = MPar if isinstance(out, (AgentProc, MPar, MRestrict)) else Par
    for t in terms[1:]:
        out = cls(out, t)
    return out


def leaves(m):
    """Agent leaves of a labeled process, left to right."""
    if isinstance(m, AgentProc):
        yield m
    elif isinstance(m, MPar):
        yield from leaves(m.left)
        yield from leaves(m.right)
    elif isinstance(m, MRestrict):
        yield from leaves(m.body)


# -- names ------------------------------------------------------------------

def free_names(term, equations: Optional[Mapping[str, Process]] = None) -> frozenset:
    """Channel names of ``term`` not captured by a restriction.

    Receive binders bind variables, so they never remove a channel.  When
    ``equations`` is given, a constant contributes the free names of its
    definition (after its renaming); otherwise it contributes nothing.
    """
    const_fn = _const_free_names(equations) if equations else {}
    return frozenset(_fn(term, const_fn))


def _fn(t, const_fn):
    if isinstance(t, Nil):
        return set()
    if isinstance(t, Prefix):
        out = _fn(t.cont, const_fn)
        if isinstance(t.act, (Send, Receive)):
            out.add(t.act.channel)
        return out
    if isinstance(t, (Restrict, MRestrict)):
        return _fn(t.body, const_fn) - {t.name}
    if isinstance(t, (Par, Sum, MPar)):
        return _fn(t.left, const_fn) | _fn(t.right, const_fn)
    if isinstance(t, Const):
        ren = dict(t.renaming)
        return {ren.get(n, n) for n in const_fn.get(t.name, ())}
    if isinstance(t, GroupPrefix):
        return _fn(t.group, const_fn) | _fn(t.cont, const_fn)
    if isinstance(t, AgentProc):
        return _fn(t.proc, const_fn)
    raise TypeError(f"not a term: {t!r}")


def _const_free_names(equations):
    # least fixpoint over mutually recursive definitions
    fns = {name: set() for name in equations}
    changed = True
    while changed:
        changed = False
        for name, body in equations.items():
            new = _fn(body, fns)
            if new != fns[name]:
                fns[name] = new
                changed = True
    return fns


def rename_names(term, mapping: Mapping[str, str], equations=None):
    """Capture-free renaming of free channel names (``term sigma``).

    Callers must supply targets that are fresh for ``term``.
    """
    if not mapping:
        return term
    const_fn = _const_free_names(equations) if equations else None
    return _rename(term, dict(mapping), const_fn)


def _rename(t, m, const_fn):
    if not m or isinstance(t, Nil):
        return t
    if isinstance(t, Prefix):
        act = t.act
        if isinstance(act, Send) and act.channel in m:
            act = Send(m[act.channel], act.payload)
        elif isinstance(act, Receive) and act.channel in m:
            act = Receive(m[act.channel], act.binder)
        return Prefix(act, _rename(t.cont, m, const_fn))
    if isinstance(t, Restrict):
        inner = {k: v for k, v in m.items() if k != t.name}
        return Restrict(t.name, _rename(t.body, inner, const_fn))
    if isinstance(t, MRestrict):
        inner = {k: v for k, v in m.items() if k != t.name}
        return MRestrict(t.name, _rename(t.body, inner, const_fn))
    if isinstance(t, Par):
        return Par(_rename(t.left, m, const_fn), _rename(t.right, m, const_fn))
    if isinstance(t, Sum):
        return Sum(_rename(t.left, m, const_fn), _rename(t.right, m, const_fn))
    if isinstance(t, MPar):
        return MPar(_rename(t.left, m, const_fn), _rename(t.right, m, const_fn))
    if isinstance(t, AgentProc):
        return AgentProc(_rename(t.proc, m, const_fn), t.agent)
    if isinstance(t, GroupPrefix):
        return GroupPrefix(_rename(t.group, m, const_fn), _rename(t.cont, m, const_fn))
    if isinstance(t, Const):
        relevant = None if const_fn is None else const_fn.get(t.name, set())
        ren = dict(t.renaming)
        # compose: existing substitution first, then m
        out = {}
        for old, new in ren.items():
            out[old] = m.get(new, new)
        for old, new in m.items():
            # binder temporaries never occur in a user definition
            if old not in ren and old[0] not in "#~":
                out[old] = new
        if relevant is not None:
            out = {k: v for k, v in out.items() if k in relevant}
        out = tuple(sorted((k, v) for k, v in out.items() if k != v))
        return Const(t.name, out)
    raise TypeError(f"not a term: {t!r}")


# -- values -----------------------------------------------------------------

def substitute_value(p: Process, x: str, t: str) -> Process:
    """Replace free occurrences of variable ``x`` in ``p`` by value ``t``."""
    if isinstance(p, (Nil, Const)):
        return p
    if isinstance(p, Prefix):
        act = p.act
        if isinstance(act, Receive):
            if act.binder == x:
                return p
            return Prefix(act, substitute_value(p.cont, x, t))
        if isinstance(act, Send) and act.payload == Var(x):
            act = Send(act.channel, t)
        return Prefix(act, substitute_value(p.cont, x, t))
    if isinstance(p, Restrict):
        return Restrict(p.name, substitute_value(p.body, x, t))
    if isinstance(p, Par):
        return Par(substitute_value(p.left, x, t), substitute_value(p.right, x, t))
    if isinstance(p, Sum):
        return Sum(substitute_value(p.left, x, t), substitute_value(p.right, x, t))
    if isinstance(p, GroupPrefix):
        return GroupPrefix(substitute_value(p.group, x, t), substitute_value(p.cont, x, t))
    raise TypeError(f"not a process: {p!r}")


def free_vars(p) -> frozenset:
    if isinstance(p, (Nil, Const)):
        return frozenset()
    if isinstance(p, Prefix):
        inner = free_vars(p.cont)
        if isinstance(p.act, Receive):
            return inner - {p.act.binder}
        if isinstance(p.act, Send) and isinstance(p.act.payload, Var):
            return inner | {p.act.payload.name}
        return inner
    if isinstance(p, (Restrict, MRestrict)):
        return free_vars(p.body)
    if isinstance(p, (Par, Sum, MPar)):
        return free_vars(p.left) | free_vars(p.right)
    if isinstance(p, GroupPrefix):
        return free_vars(p.group) | free_vars(p.cont)
    if isinstance(p, AgentProc):
        return free_vars(p.proc)
    raise TypeError(f"not a term: {p!r}")


# -- structural congruence --------------------------------------------------
#
# Normal form: restrictions float to the top of every parallel block (scope
# extrusion after alpha-renaming apart), parallel components and summands are
# flattened, 0 units dropped, summands deduplicated, and components sorted by
# their printed form.  Bound names become ``~<depth>.<k>``; within one block
# the assignment of k is the permutation giving the least printed form.
# Receive binders become ``$<k>`` (de Bruijn style nesting level).

_MAX_PERMUTED = 6


@dataclass
class _Block:
    bound: list = field(default_factory=list)
    comps: list = field(default_factory=list)

    def is_nil(self):
        return not self.bound and not self.comps


class _Normalizer:
    def __init__(self, equations=None):
        self.equations = equations
        self.const_fn = _const_free_names(equations) if equations else None
        self._fresh = itertools.count()

    def fresh(self):
        return f"#{next(self._fresh)}"

    # phase 1: alpha-rename every binder apart and flatten into blocks

    def block(self, t) -> _Block:
        if isinstance(t, Nil):
            return _Block()
        if isinstance(t, (Restrict, MRestrict)):
            tmp = self.fresh()
            b = self.block(_rename(t.body, {t.name: tmp}, self.const_fn))
            b.bound.insert(0, tmp)
            return b
        if isinstance(t, (Par, MPar)):
            left, right = self.block(t.left), self.block(t.right)
            return _Block(left.bound + right.bound, left.comps + right.comps)
        if isinstance(t, Sum):
            summands = []
            seen = set()
            for s in _summands(t):
                sb = self.block(s)
                if sb.is_nil():
                    continue
                key = self.emit(sb, 0, {}, {})[0]
                if key in seen:
                    continue
                seen.add(key)
                summands.append((s, sb))
            if not summands:
                return _Block()
            if len(summands) == 1:
                return summands[0][1]
            return _Block([], [("sum", [sb for _, sb in summands])])
        if isinstance(t, Prefix):
            return _Block([], [("prefix", t.act, self.block(t.cont))])
        if isinstance(t, GroupPrefix):
            return _Block([], [("group", self.block(t.group), self.block(t.cont))])
        if isinstance(t, Const):
            return _Block([], [("const", t)])
        if isinstance(t, AgentProc):
            return _Block([], [("agent", t.agent, self.block(t.proc))])
        raise TypeError(f"not a term: {t!r}")

    # phase 2: assign canonical names, sort, print

    def emit(self, b: _Block, depth, names, vars_):
        """Return (printed form, term) for block ``b``."""
        best = None
        n = len(b.bound)
        orders = itertools.permutations(range(n)) if n <= _MAX_PERMUTED else [range(n)]
        for order in orders:
            env = dict(names)
            for k, idx in enumerate(order):
                env[b.bound[idx]] = f"~{depth}.{k}"
            comps = sorted((self.emit_comp(c, depth, env, vars_) for c in b.comps),
                           key=lambda pair: pair[0])
            labeled = any(c[0] == "agent" for c in b.comps)
            bound = [f"~{depth}.{k}" for k in range(n)]
            body_s = " | ".join(s for s, _ in comps) if comps else "0"
            s = f"(new {','.join(bound)})[{body_s}]" if bound else (
                f"[{body_s}]" if len(comps) > 1 else body_s)
            if best is None or s < best[0]:
                term = par_all([t for _, t in comps], nil=NIL)
                for name in reversed(bound):
                    term = (MRestrict if labeled else Restrict)(name, term)
                best = (s, term)
        return best

    def emit_comp(self, c, depth, names, vars_):
        kind = c[0]
        if kind == "prefix":
            act, cont = c[1], c[2]
            if isinstance(act, Send):
                payload = act.payload
                if isinstance(payload, Var):
                    payload = Var(vars_.get(payload.name, payload.name))
                act = Send(names.get(act.channel, act.channel), payload)
                inner_vars = vars_
            elif isinstance(act, Receive):
                level = vars_.get(None, 0)
                binder = f"${level}"
                inner_vars = {**vars_, act.binder: binder, None: level + 1}
                act = Receive(names.get(act.channel, act.channel), binder)
            else:
                inner_vars = vars_
            s, t = self.emit(cont, depth + 1, names, inner_vars)
            return f"{act}.{s}", Prefix(act, t)
        if kind == "sum":
            parts = sorted((self.emit(sb, depth + 1, names, vars_) for sb in c[1]),
                           key=lambda pair: pair[0])
            s = "(" + " + ".join(p for p, _ in parts) + ")"
            term = parts[0][1]
            for _, t in parts[1:]:
                term = Sum(term, t)
            return s, term
        if kind == "const":
            const = _rename(c[1], names, self.const_fn)
            return str(const), const
        if kind == "group":
            gs, gt = self.emit(c[1], depth + 1, names, vars_)
            cs, ct = self.emit(c[2], depth + 1, names, vars_)
            return f"({gs}).{cs}", GroupPrefix(gt, ct)
        if kind == "agent":
            s, t = self.emit(c[2], depth + 1, names, vars_)
            return f"{{{s}}}@{c[1]}", AgentProc(t, c[1])
        raise AssertionError(kind)


def _summands(t):
    if isinstance(t, Sum):
        yield from _summands(t.left)
        yield from _summands(t.right)
    else:
        yield t


def normal_form(term, equations=None):
    """Return ``(key, normalized term)`` for ``term`` under congruence."""
    norm = _Normalizer(equations)
    return norm.emit(norm.block(term), 0, {}, {})


def canonicalize(term, equations=None) -> str:
    """Canonical key: equal for exactly the structurally congruent terms."""
    return normal_form(term, equations)[0]


def congruent(m, n, equations=None) -> bool:
    return canonicalize(m, equations) == canonicalize(n, equations)
