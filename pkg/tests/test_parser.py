import random
import re

import pytest
from hypothesis import given, settings, strategies as st

from epcheck import formulas as F
from epcheck.errors import EPCSyntaxError, ValidationError
from epcheck.model import ANY_LABEL
from epcheck.parser import parse_formula, parse_label, parse_labeled, parse_model, read_formulas
from epcheck.terms import AgentProc, Const, Input, MPar, Send, SyncTau, Visible

from conftest import MODELS
import formgen


def _header_counts(path):
    text = path.read_text(encoding="utf-8")
    m = re.search(r"^# expect: (.*)$", text, re.M)
    return dict(kv.split("=") for kv in m.group(1).split())


@pytest.mark.parametrize("name", ["uav.epc", "demo3.epc", "demo3_all.epc"])
def test_fixture_counts_match_header(name):
    path = MODELS / name
    model = parse_model(path.read_text(encoding="utf-8"))
    want = _header_counts(path)
    assert len(model.agents) == int(want["agents"])
    assert len(model.states) == int(want["states"])
    assert len(model.props) == int(want["props"])
    assert len(model.k_relation) == int(want["K-edges"])


def test_uav_model(uav):
    model, _ = uav
    assert model.explicit
    assert set(model.agents) == {"UAV0", "UAV1", "GCS"}
    assert model.init_state == "s0" and model.init_term == "M0"
    assert ("s0", SyncTau("GCS", "UAV0"), "s1") in model.k_relation


def test_demo3_system_term(demo3):
    model, _ = demo3
    assert model.system == MPar(MPar(AgentProc(Const("P"), "1"), AgentProc(Const("Q"), "2")),
                                AgentProc(Const("R"), "3"))


@pytest.mark.parametrize("text, kind", [
    ("agents A;", "MissingSystem"),
    ("agents A; values v; states s; system = {0}@A;", "MissingInit"),
    ("values v; states s; init s; system = {0}@A;", "MissingAgents"),
    ("agents A; values v; states s; init s; system = {0}@B;", "UnknownAgent"),
    ("agents A; values v; states s; init s; system = {0}@A | {0}@A;", "DuplicateAgent"),
    ("agents A; values v; states s; init s; system = {0}@A; h A : s=e; T s : p;", "UnknownProp"),
    ("agents A, B; values v; states s; init s; system = {0}@A | {0}@B; h A : s=e;", "NonTotalH"),
    ("agents A; values v; states s; init s; def C = C + tau.0; system = {C}@A; h A : s=e;",
     "UnguardedRecursion"),
    ("agents A; values v; states s; init s; system = {('a<v>.0 | 0).0}@A; h A : s=e;",
     "GroupSequencing"),
    ("agents A; values v; states s; init s; system = {0}@A; K s -tau(A,B)-> s; h A : s=e;",
     "UnknownAgent"),
    ("agents A; values v; states s; init s; system = {0}@A; K s -tau@A-> t; h A : s=e;",
     "UnknownState"),
    ("agents A; values v; states s; init s; system = {D}@A; h A : s=e;", "UnknownConstant"),
])
def test_validation_errors(text, kind):
    with pytest.raises(ValidationError) as exc:
        parse_model(text)
    assert exc.value.kind == kind


def test_group_sequencing_allowed_in_explicit_mode():
    text = ("mode explicit; agents A; values v; states s; init s;"
            " M M0 = {('a<v>.0 | 0).0}@A; initM M0; h A : s=e;")
    assert parse_model(text).explicit


def test_syntax_error_position():
    with pytest.raises(EPCSyntaxError) as exc:
        parse_model("agents A;\nvalues v;\nstates s;\ninit = s;\n")
    assert (exc.value.line, exc.value.col) == (4, 6)
    assert exc.value.expected == "state"


def test_wildcard_k():
    model = parse_model("agents A; values v; states s; init s; system = {0}@A;"
                        " K s -*-> s; h A : s=e;")
    assert model.k_relation == (("s", ANY_LABEL, "s"),)


@pytest.mark.parametrize("text, label", [
    ("tau(GCS,UAV0)", SyncTau("GCS", "UAV0")),
    ("'b<t2>@2", Visible(Send("b", "t2"), "2")),
    ("a<t1>@1", Visible(Input("a", "t1"), "1")),
])
def test_parse_label(text, label):
    assert parse_label(text) == label
    assert parse_label(str(label)) == label


def test_first_case_study_formula(uav):
    model, _ = uav
    phi = parse_formula("<<UAV0,UAV1,GCS>> G ( C{UAV0,UAV1,GCS}( q1 -> q0 ) )", model)
    ag = frozenset({"UAV0", "UAV1", "GCS"})
    assert phi == F.CoalG(ag, F.Common(ag, F.Or(F.Not(F.Prop("q1")), F.Prop("q0"))))


def test_double_negation_kept(uav):
    assert parse_formula("!!p0", uav[0]) == F.Not(F.Not(F.Prop("p0")))


@pytest.mark.parametrize("text, kind", [
    ("K{UAV9} p0", "UnknownAgent"),
    ("zz", "UnknownProp"),
    ("E{} p0", "EmptyCoalition"),
    ("<<>>X p0", "EmptyCoalition"),
])
def test_formula_validation(uav, text, kind):
    with pytest.raises(ValidationError) as exc:
        parse_formula(text, uav[0])
    assert exc.value.kind == kind


def test_formula_syntax_error():
    with pytest.raises(EPCSyntaxError):
        parse_formula("p0 \\/")


def test_desugaring():
    assert parse_formula("a -> b") == parse_formula("!a \\/ b")
    assert parse_formula("a /\\ b") == F.And(F.Prop("a"), F.Prop("b"))
    assert parse_formula("a -> b -> c") == parse_formula("a -> (b -> c)")


def test_precedence():
    a, b, c = F.Prop("a"), F.Prop("b"), F.Prop("c")
    assert parse_formula("a \\/ b /\\ c") == F.Or(a, F.And(b, c))
    assert parse_formula("!a \\/ b") == F.Or(F.Not(a), b)
    assert parse_formula("K{1} a \\/ b") == F.Or(F.Know("1", a), b)
    assert parse_formula("<<1>>(a U b)") == F.CoalU(frozenset({"1"}), a, b)


def test_unicode_operators():
    assert parse_formula("¬a ∨ b") == parse_formula("!a \\/ b")
    assert parse_formula("⟨⟨1⟩⟩F a") == parse_formula("<<1>>F a")


def test_read_formulas_skips_comments_and_blanks():
    assert read_formulas("# heading\n\np0\n  q0 # tail\n") == ["p0", "q0"]


@settings(max_examples=300, deadline=None)
@given(st.integers(min_value=0, max_value=2**32 - 1))
def test_pretty_round_trip(seed):
    phi = formgen.formula(random.Random(seed), ("p", "q", "r"), ("1", "2", "A"), depth=4)
    assert parse_formula(F.pretty(phi)) == phi


def test_labeled_round_trip():
    m = parse_labeled("new c in ({'c<t>.0 + tau.0}@1 | {c(x).'d<x>.0}@2)")
    assert parse_labeled(str(m)) == m
