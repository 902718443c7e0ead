"""Parsers for the model language and for ATLE formulas.

Model files are sequences of ``;``-terminated statements with ``#`` line
comments.  See ``docs/grammar.ebnf`` for the complete grammar.
"""
from __future__ import annotations

import re
from dataclasses import dataclass

from . import formulas as F
from .errors import EPCSyntaxError, ValidationError
from .model import ANY_LABEL, DERIVED, EXPLICIT, ModelDef
from .terms import (
    NIL, TAU, AgentProc, Const, GroupPrefix, Input, MPar, MRestrict, Nil, Par,
    Prefix, Receive, Restrict, Send, Sum, SyncTau, Var, Visible, leaves,
)


@dataclass(frozen=True)
class Token:
    kind: str  # "id", "num", "sym" or "eof"
    text: str
    line: int
    col: int


_UNICODE = {"¬": "!", "∨": "\\/", "∧": "/\\", "→": "->", "⟨⟨": "<<", "⟩⟩": ">>"}
_SYMBOLS = ["->", "<<", ">>", "\\/", "/\\", "||", "&&", *_UNICODE,
            *"{}()<>,;:=|+.'@!&-*"]
_TOKEN_RE = re.compile(
    r"(?P<ws>[ \t\r]+)|(?P<nl>\n)|(?P<comment>#[^\n]*)"
    r"|(?P<id>[A-Za-z_][A-Za-z0-9_]*)|(?P<num>[0-9]+)"
    r"|(?P<sym>" + "|".join(re.escape(s) for s in _SYMBOLS) + ")"
)


def tokenize(text):
    tokens = []
    line, line_start, pos = 1, 0, 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        col = pos - line_start + 1
        if m is None:
            raise EPCSyntaxError(line, col, "a token", text[pos])
        kind = m.lastgroup
        if kind == "nl":
            line += 1
            line_start = m.end()
        elif kind in ("id", "num", "sym"):
            tok = m.group()
            tokens.append(Token(kind, _UNICODE.get(tok, tok), line, col))
        pos = m.end()
    tokens.append(Token("eof", "", line, pos - line_start + 1))
    return tokens


class _Stream:
    def __init__(self, text):
        self.tokens = tokenize(text)
        self.i = 0

    @property
    def tok(self):
        return self.tokens[self.i]

    def peek(self, k=1):
        return self.tokens[min(self.i + k, len(self.tokens) - 1)]

    def at(self, *texts):
        return self.tok.kind in ("sym", "id") and self.tok.text in texts

    def next(self):
        tok = self.tok
        if tok.kind != "eof":
            self.i += 1
        return tok

    def fail(self, expected):
        tok = self.tok
        raise EPCSyntaxError(tok.line, tok.col, expected,
                             tok.text if tok.kind != "eof" else "end of input")

    def expect(self, text):
        if not self.at(text):
            self.fail(repr(text))
        return self.next()

    def accept(self, text):
        if self.at(text):
            return self.next()
        return None

    def ident(self, what="identifier", numeric=False):
        if self.tok.kind == "id" or (numeric and self.tok.kind == "num"):
            return self.next().text
        self.fail(what)


# -- processes --------------------------------------------------------------

_KEYWORDS = {"new", "in", "tau"}


def _is_const(name):
    return name[0].isupper()


class _ProcessParser:
    """Shared process / labeled process / action-label productions."""

    def __init__(self, stream):
        self.s = stream
        self.binders = []
        self.group_prefixes = []  # positions of (P).Q occurrences

    def proc(self):
        left = self.sum_()
        while self.s.accept("|"):
            left = Par(left, self.sum_())
        return left

    def sum_(self):
        left = self.prefixed()
        while self.s.accept("+"):
            left = Sum(left, self.prefixed())
        return left

    def prefixed(self):
        s = self.s
        tok = s.tok
        if tok.kind == "num":
            if tok.text != "0":
                s.fail("process")
            s.next()
            return NIL
        if s.at("new"):
            s.next()
            name = s.ident("channel name")
            s.expect("in")
            return Restrict(name, self.proc())
        if s.at("("):
            s.next()
            group = self.proc()
            s.expect(")")
            if s.accept("."):
                self.group_prefixes.append(tok)
                return GroupPrefix(group, self.prefixed())
            return group
        if s.at("tau"):
            s.next()
            s.expect(".")
            return Prefix(TAU, self.prefixed())
        if s.accept("'"):
            channel = s.ident("channel name")
            s.expect("<")
            payload = self.payload()
            s.expect(">")
            s.expect(".")
            return Prefix(Send(channel, payload), self.prefixed())
        if tok.kind == "id" and tok.text not in _KEYWORDS:
            name = s.next().text
            if s.at("("):
                s.next()
                binder = s.ident("variable")
                s.expect(")")
                s.expect(".")
                self.binders.append(binder)
                try:
                    cont = self.prefixed()
                finally:
                    self.binders.pop()
                return Prefix(Receive(name, binder), cont)
            if _is_const(name):
                return Const(name)
            s.fail("'(' after channel name (constants are capitalised)")
        s.fail("process")

    def payload(self):
        name = self.s.ident("value or variable", numeric=True)
        if name in self.binders:
            return Var(name)
        return name

    def lproc(self):
        left = self.latom()
        while self.s.accept("|"):
            left = MPar(left, self.latom())
        return left

    def latom(self):
        s = self.s
        if s.accept("new"):
            name = s.ident("channel name")
            s.expect("in")
            return MRestrict(name, self.lproc())
        if s.accept("("):
            m = self.lproc()
            s.expect(")")
            return m
        if s.accept("{"):
            p = self.proc()
            s.expect("}")
            s.expect("@")
            return AgentProc(p, s.ident("agent", numeric=True))
        s.fail("labeled process")

    def label(self):
        s = self.s
        if s.at("tau"):
            s.next()
            if s.accept("@"):
                return Visible(TAU, s.ident("agent", numeric=True))
            s.expect("(")
            first = s.ident("agent", numeric=True)
            s.expect(",")
            second = s.ident("agent", numeric=True)
            s.expect(")")
            return SyncTau(first, second)
        send = s.accept("'") is not None
        channel = s.ident("action label")
        s.expect("<")
        value = s.ident("value", numeric=True)
        s.expect(">")
        s.expect("@")
        agent = s.ident("agent", numeric=True)
        return Visible(Send(channel, value) if send else Input(channel, value), agent)


def parse_label(text):
    """Parse a labeled action such as ``tau(GCS,UAV0)`` or ``'b<t2>@2``."""
    s = _Stream(text)
    label = _ProcessParser(s).label()
    if s.tok.kind != "eof":
        s.fail("end of label")
    return label


def parse_process(text):
    s = _Stream(text)
    p = _ProcessParser(s).proc()
    if s.tok.kind != "eof":
        s.fail("end of process")
    return p


def parse_labeled(text):
    s = _Stream(text)
    m = _ProcessParser(s).lproc()
    if s.tok.kind != "eof":
        s.fail("end of labeled process")
    return m


# -- models -----------------------------------------------------------------

def _id_list(s, what):
    out = []
    while not s.at(";"):
        out.append(s.ident(what, numeric=True))
        s.accept(",")
    return out


def parse_model(text) -> ModelDef:
    """Parse and validate a model description."""
    s = _Stream(text)
    pp = _ProcessParser(s)
    decl = {"agents": [], "values": [], "props": [], "states": []}
    equations, eq_pos = {}, {}
    explicit_terms, term_pos = {}, {}
    k_relation, delta, h_entries, labeling = [], [], [], {}
    system = init = init_m = mode = None
    pos = {}

    while s.tok.kind != "eof":
        head = s.tok
        kw = s.ident("statement keyword")
        if kw in decl:
            decl[kw].extend((name, head) for name in _id_list(s, kw[:-1]))
        elif kw == "def":
            name = s.ident("constant name")
            if not _is_const(name):
                raise EPCSyntaxError(head.line, head.col, "capitalised constant name", name)
            s.expect("=")
            if name in equations:
                raise ValidationError("DuplicateDefinition", name, head.line, head.col)
            equations[name] = pp.proc()
            eq_pos[name] = head
        elif kw == "system":
            s.expect("=")
            system = pp.lproc()
            pos["system"] = head
        elif kw == "init":
            init = s.ident("state", numeric=True)
            pos["init"] = head
        elif kw == "initM":
            init_m = s.ident("term name", numeric=True)
            pos["initM"] = head
        elif kw == "mode":
            mode = s.ident("'explicit' or 'derived'")
            if mode not in (EXPLICIT, DERIVED):
                raise EPCSyntaxError(head.line, head.col, "'explicit' or 'derived'", mode)
        elif kw in ("K", "delta"):
            src = s.ident("source", numeric=True)
            s.expect("-")
            label = ANY_LABEL if (kw == "K" and s.accept("*")) else pp.label()
            s.expect("->")
            dst = s.ident("target", numeric=True)
            (k_relation if kw == "K" else delta).append((src, label, dst, head))
        elif kw == "M":
            name = s.ident("term name", numeric=True)
            s.expect("=")
            if name in explicit_terms:
                raise ValidationError("DuplicateDefinition", name, head.line, head.col)
            explicit_terms[name] = pp.lproc()
            term_pos[name] = head
        elif kw == "h":
            agent = s.ident("agent", numeric=True)
            s.expect(":")
            while not s.at(";"):
                st = s.ident("state", numeric=True)
                s.expect("=")
                h_entries.append((agent, st, s.ident("epistemic state", numeric=True), head))
                s.accept(",")
        elif kw == "T":
            st = s.ident("state", numeric=True)
            s.expect(":")
            labeling.setdefault(st, (set(), head))[0].update(_id_list(s, "proposition"))
        else:
            raise EPCSyntaxError(head.line, head.col, "statement keyword", kw)
        s.expect(";")

    mode = mode or DERIVED
    v = _Validator(decl, mode)
    first = s.tokens[0]

    if mode == DERIVED and system is None:
        raise ValidationError("MissingSystem", "no 'system = ...' statement", first.line, first.col)
    if mode == EXPLICIT and init_m is None:
        raise ValidationError("MissingSystem", "explicit mode needs 'initM NAME'",
                              first.line, first.col)
    for kw in ("agents", "states", "values"):
        if not decl[kw]:
            raise ValidationError(f"Missing{kw.capitalize()}", f"no '{kw}' declared",
                                  first.line, first.col)
    if init is None:
        raise ValidationError("MissingInit", "no 'init STATE' statement", first.line, first.col)
    v.state(init, pos["init"])

    if mode == DERIVED:
        for tok in pp.group_prefixes:
            raise ValidationError("GroupSequencing",
                                  "'(P).Q' is only accepted in explicit mode", tok.line, tok.col)

    for name, body in equations.items():
        v.process(body, equations, eq_pos[name])
    v.check_guarded(equations, eq_pos)
    if system is not None:
        v.labeled(system, equations, pos["system"])
    for name, m in explicit_terms.items():
        v.labeled(m, equations, term_pos[name])

    k_out = []
    for src, label, dst, tok in k_relation:
        v.state(src, tok)
        v.state(dst, tok)
        if label is not ANY_LABEL:
            v.label(label, tok)
        k_out.append((src, label, dst))

    delta_out = []
    if mode == EXPLICIT:
        if init_m not in explicit_terms:
            tok = pos["initM"]
            raise ValidationError("UnknownTerm", init_m, tok.line, tok.col)
        for src, label, dst, tok in delta:
            for name in (src, dst):
                if name not in explicit_terms:
                    raise ValidationError("UnknownTerm", name, tok.line, tok.col)
            v.label(label, tok)
            delta_out.append((src, label, dst))
    elif delta or explicit_terms:
        tok = (delta[0][3] if delta else next(iter(term_pos.values())))
        raise ValidationError("ExplicitOnly", "'M'/'delta' need 'mode explicit'",
                              tok.line, tok.col)

    h_map = {}
    for agent, st, es, tok in h_entries:
        v.agent(agent, tok)
        v.state(st, tok)
        h_map[(agent, st)] = es
    missing = [(a, st) for a in v.agents for st in v.states if (a, st) not in h_map]
    if missing:
        a, st = missing[0]
        raise ValidationError("NonTotalH", f"h_{a}({st}) undefined",
                              first.line, first.col)

    label_map = {}
    for st, (props, tok) in labeling.items():
        v.state(st, tok)
        for p in props:
            if p not in v.props:
                raise ValidationError("UnknownProp", p, tok.line, tok.col)
        label_map[st] = frozenset(props)

    return ModelDef(
        agents=tuple(v.agents), values=tuple(v.values), props=tuple(v.props),
        states=tuple(v.states), init_state=init, equations=equations,
        system=system, k_relation=tuple(k_out), mode=mode,
        explicit_terms=explicit_terms, delta=tuple(delta_out),
        init_term=init_m if mode == EXPLICIT else system,
        h_map=h_map, labeling=label_map,
    )


class _Validator:
    def __init__(self, decl, mode):
        self.mode = mode
        for kw, entries in decl.items():
            seen = []
            for name, tok in entries:
                if name in seen:
                    raise ValidationError("DuplicateDeclaration", name, tok.line, tok.col)
                seen.append(name)
            setattr(self, kw, seen)

    def _check(self, kind, name, pool, tok):
        if name not in pool:
            raise ValidationError(kind, name, tok.line, tok.col)

    def state(self, name, tok):
        self._check("UnknownState", name, self.states, tok)

    def agent(self, name, tok):
        self._check("UnknownAgent", name, self.agents, tok)

    def value(self, name, tok):
        self._check("UnknownValue", name, self.values, tok)

    def label(self, label, tok):
        for a in sorted(label.agents):
            self.agent(a, tok)
        if isinstance(label, Visible) and isinstance(label.action, (Send, Input)):
            value = label.action.payload if isinstance(label.action, Send) else label.action.value
            self.value(value, tok)

    def process(self, p, equations, tok):
        if isinstance(p, Nil):
            return
        if isinstance(p, Prefix):
            act = p.act
            if isinstance(act, Send) and not isinstance(act.payload, Var):
                self.value(act.payload, tok)
            if isinstance(act, Receive) and act.binder in self.values:
                raise ValidationError("VariableValueClash", act.binder, tok.line, tok.col)
            self.process(p.cont, equations, tok)
        elif isinstance(p, Restrict):
            self.process(p.body, equations, tok)
        elif isinstance(p, (Par, Sum)):
            self.process(p.left, equations, tok)
            self.process(p.right, equations, tok)
        elif isinstance(p, GroupPrefix):
            self.process(p.group, equations, tok)
            self.process(p.cont, equations, tok)
        elif isinstance(p, Const):
            self._check("UnknownConstant", p.name, equations, tok)

    def labeled(self, m, equations, tok):
        seen = set()
        for leaf in leaves(m):
            self.agent(leaf.agent, tok)
            if leaf.agent in seen:
                raise ValidationError("DuplicateAgent", leaf.agent, tok.line, tok.col)
            seen.add(leaf.agent)
            self.process(leaf.proc, equations, tok)

    def check_guarded(self, equations, eq_pos):
        graph = {name: _unguarded_consts(body) for name, body in equations.items()}
        state = {}

        def visit(name, path):
            state[name] = "active"
            for nxt in sorted(graph.get(name, ())):
                if state.get(nxt) == "active":
                    cycle = path[path.index(nxt):] + [nxt]
                    tok = eq_pos[nxt]
                    raise ValidationError("UnguardedRecursion", " -> ".join(cycle),
                                          tok.line, tok.col)
                if nxt not in state:
                    visit(nxt, path + [nxt])
            state[name] = "done"

        for name in equations:
            if name not in state:
                visit(name, [name])


def _unguarded_consts(p):
    if isinstance(p, (Nil, Prefix)):
        return set()
    if isinstance(p, Restrict):
        return _unguarded_consts(p.body)
    if isinstance(p, (Par, Sum)):
        return _unguarded_consts(p.left) | _unguarded_consts(p.right)
    if isinstance(p, GroupPrefix):
        return _unguarded_consts(p.group)
    if isinstance(p, Const):
        return {p.name}
    raise TypeError(p)


# -- formulas ---------------------------------------------------------------

_FORMULA_KEYWORDS = {"true", "false", "U"}


class _FormulaParser:
    def __init__(self, text, model):
        self.s = _Stream(text)
        self.model = model

    def parse(self):
        phi = self.implication()
        if self.s.tok.kind != "eof":
            self.s.fail("end of formula")
        return phi

    def implication(self):
        left = self.disjunction()
        if self.s.accept("->"):
            return F.Implies(left, self.implication())
        return left

    def disjunction(self):
        left = self.conjunction()
        while self.s.at("\\/", "|", "||"):
            self.s.next()
            left = F.Or(left, self.conjunction())
        return left

    def conjunction(self):
        left = self.unary()
        while self.s.at("/\\", "&", "&&"):
            self.s.next()
            left = F.And(left, self.unary())
        return left

    def unary(self):
        s = self.s
        tok = s.tok
        if s.accept("!"):
            return F.Not(self.unary())
        if tok.kind == "id" and tok.text in ("K", "E", "D", "C") and s.peek().text == "{":
            s.next()
            group = self.agent_set("{", "}")
            if tok.text == "K":
                if len(group) != 1:
                    raise ValidationError("SingleAgentExpected", ",".join(sorted(group)),
                                          tok.line, tok.col)
                return F.Know(next(iter(group)), self.unary())
            cls = {"E": F.Every, "D": F.Dist, "C": F.Common}[tok.text]
            return cls(group, self.unary())
        if s.at("<<"):
            coalition = self.agent_set("<<", ">>")
            if s.accept("("):
                left = self.implication()
                if not s.at("U"):
                    s.fail("'U'")
                s.next()
                right = self.implication()
                s.expect(")")
                return F.CoalU(coalition, left, right)
            op = s.tok
            if op.kind == "id" and op.text in ("X", "G", "F"):
                s.next()
                cls = {"X": F.CoalX, "G": F.CoalG, "F": F.CoalF}[op.text]
                return cls(coalition, self.unary())
            s.fail("'X', 'G', 'F' or '('")
        return self.atom()

    def atom(self):
        s = self.s
        tok = s.tok
        if s.accept("("):
            phi = self.implication()
            s.expect(")")
            return phi
        if s.at("true"):
            s.next()
            return F.Top()
        if s.at("false"):
            s.next()
            return F.Not(F.Top())
        if tok.kind in ("id", "num") and tok.text not in _FORMULA_KEYWORDS:
            s.next()
            if self.model is not None and tok.text not in self.model.props:
                raise ValidationError("UnknownProp", tok.text, tok.line, tok.col)
            return F.Prop(tok.text)
        s.fail("formula")

    def agent_set(self, open_, close):
        s = self.s
        start = s.expect(open_)
        names = []
        while not s.at(close):
            tok = s.tok
            name = s.ident("agent", numeric=True)
            if self.model is not None and name not in self.model.agents:
                raise ValidationError("UnknownAgent", name, tok.line, tok.col)
            names.append(name)
            if not s.accept(","):
                break
        s.expect(close)
        if not names:
            raise ValidationError("EmptyCoalition", "", start.line, start.col)
        return frozenset(names)


def parse_formula(text, model=None):
    """Parse an ATLE formula; identifiers are checked against ``model``."""
    return _FormulaParser(text, model).parse()


def read_formulas(text):
    """Formulas from an ``.atle`` file: one per line, ``#`` comments."""
    out = []
    for raw in text.splitlines():
        line = raw.split("#", 1)[0].strip()
        if line:
            out.append(line)
    return out
