import os
import subprocess
import sys

import pytest
from hypothesis import given, settings, strategies as st

from justcheck import kernels, _kernels_py

try:
    from justcheck import _kernels as compiled
except ImportError:
    compiled = None

needs_compiled = pytest.mark.skipif(compiled is None, reason="compiled extension not built")


@st.composite
def graphs(draw, max_n=12, max_m=40):
    n = draw(st.integers(1, max_n))
    m = draw(st.integers(0, max_m))
    src = draw(st.lists(st.integers(0, n - 1), min_size=m, max_size=m))
    tgt = draw(st.lists(st.integers(0, n - 1), min_size=m, max_size=m))
    label = draw(st.lists(st.integers(0, 3), min_size=m, max_size=m))
    mask = draw(st.lists(st.integers(1, 15), min_size=m, max_size=m))
    state_alive = draw(st.lists(st.booleans(), min_size=n, max_size=n))
    edge_alive = draw(st.lists(st.booleans(), min_size=m, max_size=m))
    return n, src, tgt, label, mask, [int(x) for x in state_alive], [int(x) for x in edge_alive]


def _partition(labels):
    groups = {}
    for s, lab in enumerate(labels):
        groups.setdefault(lab, set()).add(s)
    return {frozenset(g) for lab, g in groups.items() if lab != -1}, [lab == -1 for lab in labels]


def _reach(n, edges, s):
    seen, todo = {s}, [s]
    while todo:
        u = todo.pop()
        for a, b in edges:
            if a == u and b not in seen:
                seen.add(b)
                todo.append(b)
    return seen


@settings(max_examples=200, deadline=None)
@given(graphs())
def test_scc_matches_mutual_reachability(g):
    n, src, tgt, _, _, alive, ealive = g
    labels = kernels.scc_labels(n, src, tgt, alive, ealive, impl=_kernels_py)
    edges = [(a, b) for a, b, e in zip(src, tgt, ealive) if e and alive[a] and alive[b]]
    reach = [_reach(n, edges, s) for s in range(n)]
    for s in range(n):
        if not alive[s]:
            assert labels[s] == -1
            continue
        for t in range(n):
            if alive[t]:
                assert (labels[s] == labels[t]) == (t in reach[s] and s in reach[t])


@settings(max_examples=200, deadline=None)
@given(graphs())
def test_noninterference_matches_definition(g):
    n, src, tgt, label, mask, _, _ = g
    got = kernels.noninterference_violations(n, src, tgt, label, mask, impl=_kernels_py)
    want = []
    m = len(src)
    for i in range(m):
        for j in range(m):
            if i == j or src[i] != src[j] or mask[i] & mask[j]:
                continue
            if not any(src[k] == tgt[j] and label[k] == label[i] and mask[k] == mask[i] for k in range(m)):
                want.append((i, j))
    assert sorted(got) == want


@needs_compiled
@settings(max_examples=300, deadline=None)
@given(graphs())
def test_compiled_parity(g):
    n, src, tgt, label, mask, alive, ealive = g
    py = _partition(kernels.scc_labels(n, src, tgt, alive, ealive, impl=_kernels_py))
    cy = _partition(list(kernels.scc_labels(n, src, tgt, alive, ealive, impl=compiled)))
    assert py == cy
    assert sorted(kernels.noninterference_violations(n, src, tgt, label, mask, impl=_kernels_py)) == \
        sorted(kernels.noninterference_violations(n, src, tgt, label, mask, impl=compiled))


def test_wide_masks_fall_back():
    wide = 1 << 70
    got = kernels.noninterference_violations(2, [0, 0], [0, 1], [0, 1], [wide, 1])
    assert sorted(got) == [(0, 1)]


def test_pure_backend_env_switch():
    env = dict(os.environ, JUSTCHECK_PURE="1")
    out = subprocess.run([sys.executable, "-c", "from justcheck import kernels; print(kernels.BACKEND)"],
                         env=env, capture_output=True, text=True, check=True)
    assert out.stdout.strip() == "python"
