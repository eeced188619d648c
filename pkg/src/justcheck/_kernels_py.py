"""Pure-Python graph kernels; reference implementation of ``_kernels.pyx``.

Both modules take flat integer sequences: ``src[i]``, ``tgt[i]``,
``label[i]`` and ``mask[i]`` describe transition ``i``; component sets are
bitmasks.
"""


def scc_labels(n, src, tgt, state_alive, edge_alive):
    """Strongly connected components of the live subgraph.

    Returns one label per state; dead states get -1.  Labels are numbered in
    order of completion (reverse topological order, Tarjan).
    """
    m = len(src)
    # CSR adjacency over live edges
    start = [0] * (n + 1)
    for e in range(m):
        if edge_alive[e] and state_alive[src[e]] and state_alive[tgt[e]]:
            start[src[e] + 1] += 1
    for v in range(n):
        start[v + 1] += start[v]
    fill = start[:]
    adj = [0] * start[n]
    for e in range(m):
        if edge_alive[e] and state_alive[src[e]] and state_alive[tgt[e]]:
            adj[fill[src[e]]] = tgt[e]
            fill[src[e]] += 1

    index = [-1] * n
    low = [0] * n
    on_stack = [False] * n
    comp = [-1] * n
    stack = []
    counter = 0
    ncomp = 0
    for root in range(n):
        if not state_alive[root] or index[root] != -1:
            continue
        work = [(root, start[root])]
        index[root] = low[root] = counter
        counter += 1
        stack.append(root)
        on_stack[root] = True
        while work:
            v, pos = work[-1]
            if pos < start[v + 1]:
                work[-1] = (v, pos + 1)
                w = adj[pos]
                if index[w] == -1:
                    index[w] = low[w] = counter
                    counter += 1
                    stack.append(w)
                    on_stack[w] = True
                    work.append((w, start[w]))
                elif on_stack[w] and index[w] < low[v]:
                    low[v] = index[w]
                continue
            work.pop()
            if work:
                u = work[-1][0]
                if low[v] < low[u]:
                    low[u] = low[v]
            if low[v] == index[v]:
                while True:
                    w = stack.pop()
                    on_stack[w] = False
                    comp[w] = ncomp
                    if w == v:
                        break
                ncomp += 1
    return comp


def noninterference_violations(n, src, tgt, label, mask):
    """Pairs ``(t, v)`` breaking the non-interference axiom.

    For every ``t, v`` leaving the same state with disjoint masks there must
    be a ``u`` leaving ``tgt[v]`` with the label and mask of ``t``.
    """
    m = len(src)
    offered = {(src[u], label[u], mask[u]) for u in range(m)}
    out = [[] for _ in range(n)]
    for e in range(m):
        out[src[e]].append(e)
    bad = []
    for s in range(n):
        for t in out[s]:
            for v in out[s]:
                if mask[t] & mask[v] == 0 and (tgt[v], label[t], mask[t]) not in offered:
                    bad.append((t, v))
    bad.sort()
    return bad
