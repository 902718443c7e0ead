"""Recursive ATLE evaluation over an explored configuration graph."""
from __future__ import annotations

import itertools
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Dict, Optional

from . import formulas as F
from .epistemic import agent_partition, common_classes
from .errors import FormulaError, StrategyLimitExceeded
from .model import ModelDef
from .scc import find_sccs, is_cyclic
from .semantics import StateSpace
from .strategy import PartialStrategy, action_belongs, enumerate_strategies


@dataclass
class Stats:
    configs: int = 0
    strategies_examined: int = 0
    scc_runs: int = 0

    def as_dict(self):
        return {"configs": self.configs, "strategies_examined": self.strategies_examined,
                "scc_runs": self.scc_runs}


@dataclass
class Verdict:
    value: bool
    witness: Optional[PartialStrategy] = None
    stats: Stats = field(default_factory=Stats)


class _Adjacency:
    def __init__(self, out):
        self.out = out

    def successors(self, v):
        return self.out.get(v, ())


class Checker:
    """Evaluates formulas at configurations of ``space``.

    Results are cached per ``(configuration, formula)`` unless ``memoize``
    is false.  ``max_strategies`` caps the strategies tried for a single
    coalition-operator evaluation.
    """

    def __init__(self, model: ModelDef, space: StateSpace, *, memoize=True,
                 max_strategies=None, jobs=1):
        self.model = model
        self.space = space
        self.memoize = memoize
        self.max_strategies = max_strategies
        self.jobs = max(1, jobs)
        self.labels: Dict[tuple, bool] = {}
        self.stats = Stats(configs=len(space))
        self._partitions = {}
        self._common = {}
        self._reach = {}
        self.agents = frozenset(model.agents)

    # -- dispatcher ---------------------------------------------------------

    def check(self, c, phi) -> bool:
        key = (c, phi)
        if self.memoize and key in self.labels:
            return self.labels[key]
        value = self._dispatch(c, phi)
        if self.memoize:
            self.labels[key] = value
        return value

    def _dispatch(self, c, phi):
        if isinstance(phi, F.Prop):
            return phi.name in self.model.props_at(self.space.state_of(c))
        if isinstance(phi, F.Top):
            return True
        if isinstance(phi, F.Not):
            return not self.check(c, phi.sub)
        if isinstance(phi, F.Or):
            return self.check(c, phi.left) or self.check(c, phi.right)
        if isinstance(phi, F.Know):
            return self.check_K(c, phi.sub, phi.agent)
        if isinstance(phi, F.Every):
            return self.check_E(c, phi.sub, phi.coalition)
        if isinstance(phi, F.Dist):
            return self.check_D(c, phi.sub, phi.coalition)
        if isinstance(phi, F.Common):
            return self.check_C(c, phi.sub, phi.coalition)
        if isinstance(phi, F.CoalX):
            return self.check_X(c, phi.sub, phi.coalition).value
        if isinstance(phi, F.CoalG):
            return self.check_G(c, phi.sub, phi.coalition).value
        if isinstance(phi, F.CoalF):
            return self.check_F(c, phi.sub, phi.coalition).value
        if isinstance(phi, F.CoalU):
            return self.check_U(c, phi.left, phi.right, phi.coalition).value
        raise FormulaError(f"unsupported formula node {phi!r}")

    def verdict(self, phi, c=None) -> Verdict:
        """Top-level evaluation; coalition operators report their witness."""
        c = self.space.init if c is None else c
        before = Stats(**self.stats.as_dict())
        if isinstance(phi, F.CoalU):
            v = self.check_U(c, phi.left, phi.right, phi.coalition)
        elif isinstance(phi, (F.CoalX, F.CoalG, F.CoalF)):
            fn = {F.CoalX: self.check_X, F.CoalG: self.check_G, F.CoalF: self.check_F}
            v = fn[type(phi)](c, phi.sub, phi.coalition)
        else:
            v = Verdict(self.check(c, phi))
        if self.memoize:
            self.labels[(c, phi)] = v.value
        v.stats = Stats(
            configs=len(self.space),
            strategies_examined=self.stats.strategies_examined - before.strategies_examined,
            scc_runs=self.stats.scc_runs - before.scc_runs,
        )
        return v

    # -- knowledge ----------------------------------------------------------

    def _class_of(self, agent, c):
        if agent not in self._partitions:
            part = {}
            for cls in agent_partition(self.model.h_map, agent, self.space):
                for i in cls:
                    part[i] = cls
            self._partitions[agent] = part
        return self._partitions[agent][c]

    def check_K(self, c, phi, agent) -> bool:
        return all(self.check(d, phi) for d in sorted(self._class_of(agent, c)))

    def check_E(self, c, phi, coalition) -> bool:
        return all(self.check_K(c, phi, i) for i in sorted(coalition))

    def check_D(self, c, phi, coalition) -> bool:
        return any(self.check_K(c, phi, i) for i in sorted(coalition))

    def check_C(self, c, phi, coalition) -> bool:
        key = frozenset(coalition)
        if key not in self._common:
            self._common[key] = common_classes(self.model.h_map, key, self.space)
        return all(self.check(d, phi) for d in sorted(self._common[key][c]))

    # -- strategic temporal operators --------------------------------------

    def _reachable(self, c):
        if c not in self._reach:
            self._reach[c] = self.space.reachable(c)
        return self._reach[c]

    def _truth(self, c, phi):
        return {d: self.check(d, phi) for d in sorted(self._reachable(c))}

    def _search(self, c, coalition, accept, label) -> Verdict:
        """Try strategies in order until ``accept(kept_out)`` holds."""
        reach = self._reachable(c)
        space = self.space
        states = {space.state_of(d) for d in reach}
        others = self.agents - frozenset(coalition)
        edges = [e for d in sorted(reach) for e in space.out[d]]
        strategies = enumerate_strategies(coalition, space, states)

        def evaluate(strat):
            choice = strat.as_dict()
            out = {}
            for e in edges:
                s = space.state_of(e.src)
                if (e.label == choice[s]) if s in choice else action_belongs(e.label, others):
                    out.setdefault(e.src, []).append(e.dst)
            return accept(out)

        batch = 1 if self.jobs == 1 else self.jobs * 8
        pool = ThreadPoolExecutor(self.jobs) if self.jobs > 1 else None
        tried = 0
        try:
            while True:
                chunk = list(itertools.islice(strategies, batch))
                if not chunk:
                    return Verdict(False)
                tried += len(chunk)
                self.stats.strategies_examined += len(chunk)
                if self.max_strategies is not None and tried > self.max_strategies:
                    raise StrategyLimitExceeded(self.max_strategies, label)
                results = list(pool.map(evaluate, chunk)) if pool else [evaluate(chunk[0])]
                for strat, ok in zip(chunk, results):
                    if ok:
                        return Verdict(True, strat)
        finally:
            if pool:
                pool.shutdown()

    def check_X(self, c, phi, coalition) -> Verdict:
        sat = self._truth(c, phi)

        def accept(out):
            succ = out.get(c)
            return bool(succ) and all(sat[d] for d in succ)

        return self._search(c, coalition, accept, F.pretty(F.CoalX(coalition, phi)))

    def check_G(self, c, phi, coalition) -> Verdict:
        sat = self._truth(c, phi)

        def accept(out):
            if not out.get(c):
                return False
            self.stats.scc_runs += 1
            for scc in find_sccs(_Adjacency(out), c):
                for v in scc:
                    # a dead end would end a path, so G needs a successor everywhere
                    if not sat[v] or not out.get(v):
                        return False
            return True

        return self._search(c, coalition, accept, F.pretty(F.CoalG(coalition, phi)))

    def check_F(self, c, phi, coalition) -> Verdict:
        return self._until(c, None, phi, coalition,
                           F.pretty(F.CoalF(coalition, phi)))

    def check_U(self, c, left, right, coalition) -> Verdict:
        return self._until(c, left, right, coalition,
                           F.pretty(F.CoalU(coalition, left, right)))

    def _until(self, c, left, right, coalition, label) -> Verdict:
        goal = self._truth(c, right)
        hold = self._truth(c, left) if left is not None else None

        def accept(out):
            if not out.get(c):
                return False
            if goal[c]:
                return True
            if hold is not None and not hold[c]:
                return False
            # region: configurations where left holds and right does not yet
            region = {c}
            todo = [c]
            region_out = {}
            while todo:
                v = todo.pop()
                succ = out.get(v)
                if not succ:
                    return False
                for w in succ:
                    if goal[w]:
                        continue
                    if hold is not None and not hold[w]:
                        return False
                    region_out.setdefault(v, []).append(w)
                    if w not in region:
                        region.add(w)
                        todo.append(w)
            adj = _Adjacency(region_out)
            self.stats.scc_runs += 1
            return not any(is_cyclic(scc, adj) for scc in find_sccs(adj, c))

        return self._search(c, coalition, accept, label)
