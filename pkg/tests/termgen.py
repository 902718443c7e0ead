"""Random process and labeled-process terms for property tests."""
from epcheck.terms import (
    NIL, TAU, AgentProc, MPar, MRestrict, Par, Prefix, Receive, Restrict, Send,
    Sum, Var,
)

CHANNELS = ("a", "b", "c")
VALUES = ("t1", "t2")
BINDERS = ("x", "y")


def process(rng, depth=3, bound=()):
    """A guarded process term; sends only use variables bound above them."""
    if depth <= 0:
        return NIL
    kind = rng.choice(("nil", "send", "recv", "tau", "new", "par", "par", "sum"))
    if kind == "nil":
        return NIL
    if kind == "send":
        payload = rng.choice(VALUES + tuple(Var(x) for x in bound))
        return Prefix(Send(rng.choice(CHANNELS), payload), process(rng, depth - 1, bound))
    if kind == "recv":
        x = rng.choice(BINDERS)
        return Prefix(Receive(rng.choice(CHANNELS), x),
                      process(rng, depth - 1, tuple(set(bound) | {x})))
    if kind == "tau":
        return Prefix(TAU, process(rng, depth - 1, bound))
    if kind == "new":
        return Restrict(rng.choice(CHANNELS), process(rng, depth - 1, bound))
    cls = Par if kind == "par" else Sum
    return cls(process(rng, depth - 1, bound), process(rng, depth - 1, bound))


def labeled(rng, agents=("1", "2", "3"), depth=3):
    """A labeled process with one leaf per agent, randomly nested."""
    parts = [AgentProc(process(rng, depth), a) for a in agents]
    while len(parts) > 1:
        i = rng.randrange(len(parts) - 1)
        m = MPar(parts[i], parts[i + 1])
        if rng.random() < 0.3:
            m = MRestrict(rng.choice(CHANNELS), m)
        parts[i:i + 2] = [m]
    return parts[0]


def _fresh(term):
    from epcheck.terms import free_names
    used = set(free_names(term)) | set(CHANNELS)
    k = 0
    while f"z{k}" in used:
        k += 1
    return f"z{k}"


def axiom_instances(rng):
    """Pairs of terms that the congruence axioms identify, built from random parts.

    Yields ``(axiom name, left, right)``.
    """
    from epcheck.terms import free_names, rename_names

    p, q, r = (process(rng) for _ in range(3))
    a, b = rng.sample(CHANNELS, 2)
    yield "par-comm", Par(p, q), Par(q, p)
    yield "par-unit", Par(p, NIL), p
    yield "par-assoc", Par(p, Par(q, r)), Par(Par(p, q), r)
    yield "sum-assoc", Sum(p, Sum(q, r)), Sum(Sum(p, q), r)
    yield "sum-unit", Sum(p, NIL), p
    yield "sum-comm", Sum(p, q), Sum(q, p)
    yield "res-swap", Restrict(a, Restrict(b, p)), Restrict(b, Restrict(a, p))
    if a not in free_names(p):
        yield "extrusion", Par(p, Restrict(a, q)), Restrict(a, Par(p, q))
    z = _fresh(p)
    yield "alpha", Restrict(a, p), Restrict(z, rename_names(p, {a: z}))

    m, n, o = (labeled(rng, (i,), depth=2) for i in ("1", "2", "3"))
    yield "mpar-comm", MPar(m, n), MPar(n, m)
    yield "mpar-assoc", MPar(m, MPar(n, o)), MPar(MPar(m, n), o)
    yield "mres-swap", MRestrict(a, MRestrict(b, MPar(m, n))), MRestrict(b, MRestrict(a, MPar(m, n)))
    if a not in free_names(m):
        yield "mextrusion", MPar(m, MRestrict(a, n)), MRestrict(a, MPar(m, n))
