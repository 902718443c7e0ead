"""Tarjan's strongly connected components, restricted to what a root reaches."""
from __future__ import annotations


def find_sccs(graph, root):
    """SCCs of the subgraph reachable from ``root``.

    ``graph`` needs a ``successors(v)`` method.  Components come out in
    Tarjan completion order, i.e. reverse topological order.  The DFS is
    iterative so deep graphs do not hit the recursion limit.
    """
    index = {}
    lowlink = {}
    on_stack = set()
    stack = []
    sccs = []
    counter = 0

    index[root] = lowlink[root] = counter
    counter += 1
    stack.append(root)
    on_stack.add(root)
    work = [(root, iter(graph.successors(root)))]
    while work:
        v, it = work[-1]
        advanced = False
        for w in it:
            if w not in index:
                index[w] = lowlink[w] = counter
                counter += 1
                stack.append(w)
                on_stack.add(w)
                work.append((w, iter(graph.successors(w))))
                advanced = True
                break
            if w in on_stack:
                lowlink[v] = min(lowlink[v], index[w])
        if advanced:
            continue
        work.pop()
        if work:
            parent = work[-1][0]
            lowlink[parent] = min(lowlink[parent], lowlink[v])
        if lowlink[v] == index[v]:
            scc = set()
            while True:
                w = stack.pop()
                on_stack.discard(w)
                scc.add(w)
                if w == v:
                    break
            sccs.append(frozenset(scc))
    return sccs


def is_cyclic(scc, graph):
    """A component carries a cycle if it has two vertices or a self-loop."""
    if len(scc) > 1:
        return True
    v = next(iter(scc))
    return v in graph.successors(v)
