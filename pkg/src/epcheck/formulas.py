"""Tree-shaped ATLE formulas.

Only the core connectives are represented; conjunction and implication are
desugared by the parser into negation and disjunction.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import FrozenSet, Union


@dataclass(frozen=True)
class Prop:
    name: str


@dataclass(frozen=True)
class Top:
    """The constant ``true``."""


@dataclass(frozen=True)
class Not:
    sub: "Formula"


@dataclass(frozen=True)
class Or:
    left: "Formula"
    right: "Formula"


@dataclass(frozen=True)
class Know:
    agent: str
    sub: "Formula"


@dataclass(frozen=True)
class Every:
    coalition: FrozenSet[str]
    sub: "Formula"


@dataclass(frozen=True)
class Dist:
    coalition: FrozenSet[str]
    sub: "Formula"


@dataclass(frozen=True)
class Common:
    coalition: FrozenSet[str]
    sub: "Formula"


@dataclass(frozen=True)
class CoalX:
    coalition: FrozenSet[str]
    sub: "Formula"


@dataclass(frozen=True)
class CoalG:
    coalition: FrozenSet[str]
    sub: "Formula"


@dataclass(frozen=True)
class CoalF:
    coalition: FrozenSet[str]
    sub: "Formula"


@dataclass(frozen=True)
class CoalU:
    coalition: FrozenSet[str]
    left: "Formula"
    right: "Formula"


Formula = Union[Prop, Top, Not, Or, Know, Every, Dist, Common, CoalX, CoalG, CoalF, CoalU]

GROUP_OPS = {Every: "E", Dist: "D", Common: "C"}
COALITION_OPS = (CoalX, CoalG, CoalF, CoalU)


def And(a, b):
    return Not(Or(Not(a), Not(b)))


def Implies(a, b):
    return Or(Not(a), b)


def subformulas(phi):
    """Immediate subformulas of ``phi``."""
    if isinstance(phi, (Prop, Top)):
        return ()
    if isinstance(phi, (Or, CoalU)):
        return (phi.left, phi.right)
    return (phi.sub,)


def depth(phi) -> int:
    return 1 + max((depth(s) for s in subformulas(phi)), default=0)


def _agents(coalition):
    return ",".join(sorted(coalition))


def pretty(phi) -> str:
    """Fully parenthesised concrete syntax accepted by the parser."""
    if isinstance(phi, Prop):
        return phi.name
    if isinstance(phi, Top):
        return "true"
    if isinstance(phi, Not):
        return f"!{_atom(phi.sub)}"
    if isinstance(phi, Or):
        return f"({pretty(phi.left)} \\/ {pretty(phi.right)})"
    if isinstance(phi, Know):
        return f"K{{{phi.agent}}}{_atom(phi.sub)}"
    for cls, sym in GROUP_OPS.items():
        if isinstance(phi, cls):
            return f"{sym}{{{_agents(phi.coalition)}}}{_atom(phi.sub)}"
    if isinstance(phi, CoalU):
        return f"<<{_agents(phi.coalition)}>>({pretty(phi.left)} U {pretty(phi.right)})"
    for cls, sym in ((CoalX, "X"), (CoalG, "G"), (CoalF, "F")):
        if isinstance(phi, cls):
            return f"<<{_agents(phi.coalition)}>>{sym}{_atom(phi.sub)}"
    raise TypeError(f"not a formula: {phi!r}")


def _atom(phi):
    s = pretty(phi)
    return s if isinstance(phi, Or) else f"({s})"
