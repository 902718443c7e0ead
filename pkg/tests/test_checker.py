import random

import pytest
from hypothesis import given, settings, strategies as st

from epcheck import formulas as F
from epcheck.checker import Checker
from epcheck.errors import FormulaError, StrategyLimitExceeded
from epcheck.parser import parse_formula

import formgen
import modelgen
from oracles import BruteForce

AG = frozenset({"UAV0", "UAV1", "GCS"})
B = frozenset({"UAV0", "UAV1"})
p0, p1, q0, q1 = (F.Prop(n) for n in ("p0", "p1", "q0", "q1"))


@pytest.fixture(scope="module")
def ck(uav):
    model, space = uav
    return Checker(model, space), space


def at(space, state):
    return space.find(state)


def test_atomic_and_boolean(ck):
    c, sp = ck
    assert c.check(at(sp, "s1"), q0)
    assert c.check(at(sp, "s0"), F.Not(q0))
    assert c.check(at(sp, "s2"), F.Or(p0, p1))
    assert not c.check(at(sp, "s0"), F.Or(p0, p1))


def test_knowledge(ck):
    c, sp = ck
    assert c.check_K(at(sp, "s1"), q0, "UAV1")
    assert not c.check_K(at(sp, "s3"), p0, "UAV0")
    assert c.check_K(at(sp, "s0"), F.Top(), "GCS")


def test_everybody(ck):
    c, sp = ck
    assert not c.check_E(at(sp, "s4"), p0, AG)
    assert c.check_E(at(sp, "s1"), q0, AG)
    for s in ("s0", "s3"):
        assert c.check_E(at(sp, s), q0, {"UAV1"}) == c.check_K(at(sp, s), q0, "UAV1")


def test_distributed(ck):
    c, sp = ck
    assert c.check_D(at(sp, "s1"), q0, AG)
    assert not c.check_D(at(sp, "s0"), q0, AG)


def test_common(ck):
    c, sp = ck
    assert c.check_C(at(sp, "s0"), F.Implies(q1, q0), AG)
    assert not c.check_C(at(sp, "s0"), F.Not(q0), AG)
    assert all(c.check_C(i, F.Top(), AG) for i in range(len(sp)))


def test_next(ck):
    c, sp = ck
    s0 = at(sp, "s0")
    assert c.check_X(s0, F.Know("UAV0", F.Know("UAV1", q0)), AG).value
    assert not c.check_X(s0, F.Top(), B).value
    assert c.check_X(at(sp, "s1"), F.Or(p0, p1), AG).value


def test_globally(ck):
    c, sp = ck
    s0 = at(sp, "s0")
    assert c.check_G(s0, F.Common(AG, F.Implies(q1, q0)), AG).value
    assert not c.check_G(s0, q0, AG).value
    assert c.check_G(s0, F.Top(), AG).value


def test_eventually(ck):
    c, sp = ck
    s0 = at(sp, "s0")
    assert c.check_F(s0, F.Dist(AG, q0), AG).value
    assert not c.check_F(s0, F.Every(AG, p0), AG).value
    assert not c.check_F(s0, F.Dist(AG, q0), B).value


def test_until(ck):
    c, sp = ck
    s0 = at(sp, "s0")
    assert c.check_U(s0, p1, F.Not(q0), AG).value
    assert c.check_U(s0, F.Not(p0), p0, AG).value
    assert not c.check_U(s0, q0, p0, AG).value


def test_until_witness_picks_branch(ck):
    c, sp = ck
    v = c.check_U(at(sp, "s0"), F.Not(p0), p0, AG)
    assert str(v.witness.as_dict()["s1"]) == "tau(UAV1,GCS)"


def test_case_study_verdicts(uav):
    model, space = uav
    c = Checker(model, space)
    with open("models/uav_properties.atle", encoding="utf-8") as fh:
        texts = [t for t in (l.split("#")[0].strip() for l in fh) if t]
    verdicts = [c.verdict(parse_formula(t, model)) for t in texts]
    assert [v.value for v in verdicts] == [True, True, False, True, False]
    for v in verdicts:
        assert (v.witness is not None) == v.value


def test_witness_only_for_true_coalition_verdicts(uav):
    model, space = uav
    c = Checker(model, space)
    assert c.verdict(q0).witness is None
    assert c.verdict(F.CoalF(B, q0)).witness is None
    v = c.verdict(F.CoalX(AG, q0))
    assert v.value and v.witness.coalition == AG


def test_stats(uav):
    model, space = uav
    c = Checker(model, space)
    v = c.verdict(F.CoalF(B, F.Dist(AG, q0)))
    assert v.stats.configs == 5
    # every uav transition involves GCS, so B only has the empty strategy
    assert v.stats.strategies_examined == 1
    assert v.stats.scc_runs == 0
    v = c.verdict(F.CoalF(AG, F.Every(AG, p0)))
    assert not v.value and v.stats.strategies_examined == 2 ** 4 * 3
    again = c.verdict(F.CoalG(AG, F.Top()))
    assert again.stats.scc_runs >= 1


def test_strategy_limit(uav):
    model, space = uav
    c = Checker(model, space, max_strategies=3)
    with pytest.raises(StrategyLimitExceeded):
        c.verdict(F.CoalF(AG, F.Every(AG, p0)))
    assert Checker(model, space, max_strategies=3).verdict(F.CoalX(AG, q0)).value


def test_unknown_node(uav):
    with pytest.raises(FormulaError):
        Checker(*uav).check(0, object())


def test_jobs_agree(demo3):
    model, space = demo3
    phis = [F.CoalF(frozenset({"1", "2"}), F.Prop("sent_b")),
            F.CoalG(frozenset({"1", "2", "3"}), F.Not(F.Prop("done"))),
            F.CoalU(frozenset({"1"}), F.Top(), F.Prop("synced_d"))]
    for phi in phis:
        a = Checker(model, space).verdict(phi)
        b = Checker(model, space, jobs=4).verdict(phi)
        assert (a.value, a.witness) == (b.value, b.witness)


def test_demo3_coalition_can_force_output(demo3):
    model, space = demo3
    c = Checker(model, space)
    A = frozenset({"1", "2"})
    assert c.verdict(F.CoalF(A, F.Prop("sent_b"))).value
    # agent 3 alone moves nothing without agent 1
    assert not c.verdict(F.CoalF(frozenset({"3"}), F.Prop("synced_d"))).value


def _invariants(model, space, rng, n_formulas=4):
    c = Checker(model, space)
    plain = Checker(model, space, memoize=False)
    for _ in range(n_formulas):
        phi = formgen.formula(rng, model.props, model.agents, depth=3)
        A = frozenset(rng.sample(list(model.agents), rng.randint(1, len(model.agents))))
        i = rng.choice(list(model.agents))
        for x in range(len(space)):
            v = c.check(x, phi)
            assert c.check(x, F.Not(F.Not(phi))) == v
            assert plain.check(x, phi) == v
            if c.check_K(x, phi, i):
                assert v
            if c.check_C(x, phi, A):
                assert c.check_E(x, phi, A)
            if c.check_E(x, phi, A):
                assert c.check_D(x, phi, A)
            if c.check_G(x, phi, A).value:
                assert v and c.check_X(x, phi, A).value


def test_invariants_on_fixtures(uav, demo3):
    rng = random.Random(7)
    for model, space in (uav, demo3):
        _invariants(model, space, rng, n_formulas=10)


seeds = st.integers(min_value=0, max_value=2**32 - 1)


@settings(max_examples=25, deadline=None)
@given(seeds)
def test_invariants_random(seed):
    rng = random.Random(seed)
    _, model, space = modelgen.random_model(rng, max_configs=12)
    _invariants(model, space, rng, n_formulas=2)


@settings(max_examples=25, deadline=None)
@given(seeds)
def test_matches_brute_force(seed):
    rng = random.Random(seed)
    _, model, space = modelgen.random_model(rng, max_configs=12)
    bf, c = BruteForce(model, space), Checker(model, space)
    for _ in range(3):
        phi = formgen.formula(rng, model.props, model.agents, depth=3)
        assert [c.check(x, phi) for x in range(len(space))] == \
            [bf.holds(x, phi) for x in range(len(space))]
