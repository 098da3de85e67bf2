"""Compiled inner loops for the samplers.

Everything here works on flat int64 arrays and a numpy ``Generator``
(PCG64) passed in from Python, so a given (seed, stream) reproduces the same
draws whether a map is sampled one at a time or inside a rejection loop.
"""

import numpy as np
from numba import njit


@njit(cache=True)
def dyck_word(rng, n):
    """Uniform Dyck word of semilength n (1 = up, 0 = down) via the cycle lemma."""
    L = 2 * n + 1
    steps = np.empty(L, np.int64)
    for i in range(L):
        steps[i] = 1 if i < n else -1
    for i in range(L - 1, 0, -1):
        j = rng.integers(0, i + 1)
        t = steps[i]
        steps[i] = steps[j]
        steps[j] = t
    s = 0
    best = 1
    k = 0
    for i in range(L):
        s += steps[i]
        if s < best:
            best = s
            k = i
    word = np.empty(2 * n, np.int64)
    for i in range(2 * n):
        word[i] = 1 if steps[(k + 1 + i) % L] == 1 else 0
    return word


@njit(cache=True)
def tree_corners(word):
    """Vertex visited at each contour corner, and each vertex's parent."""
    m = word.shape[0]
    n = m // 2
    corner_vertex = np.empty(m, np.int64)
    parent = np.full(n + 1, -1, np.int64)
    stack = np.empty(n + 1, np.int64)
    top = 0
    stack[0] = 0
    nxt = 1
    corner_vertex[0] = 0
    for i in range(m - 1):
        if word[i] == 1:
            parent[nxt] = stack[top]
            top += 1
            stack[top] = nxt
            nxt += 1
        else:
            top -= 1
        corner_vertex[i + 1] = stack[top]
    return corner_vertex, parent


@njit(cache=True)
def successors(corner_vertex, label):
    """First later corner (cyclically) whose label is one less; -1 if none."""
    m = corner_vertex.shape[0]
    succ = np.full(m, -1, np.int64)
    stack = np.empty(m, np.int64)
    top = 0
    for j in range(2 * m):
        c = j % m
        lab = label[corner_vertex[c]]
        while top > 0 and label[corner_vertex[stack[top - 1]]] == lab + 1:
            top -= 1
            succ[stack[top]] = c
        if j < m:
            stack[top] = c
            top += 1
    return succ


@njit(cache=True)
def closure(word, increments, eps):
    """Closure of a labeled plane tree into a rooted quadrangulation.

    ``increments[v - 1]`` is label(v) - label(parent(v)) for v = 1..n in
    preorder.  Arc ``i`` goes from corner ``i`` to its successor (or to the
    extra vertex); its darts are ``2i`` (at the corner) and ``2i + 1``.
    Returns (alpha, nu, root, vertex_of).
    """
    m = word.shape[0]
    n = m // 2
    corner_vertex, parent = tree_corners(word)
    label = np.zeros(n + 1, np.int64)
    for v in range(1, n + 1):
        label[v] = label[parent[v]] + increments[v - 1]
    succ = successors(corner_vertex, label)
    star = n + 1
    nd = 2 * m
    alpha = np.empty(nd, np.int64)
    vertex_of = np.empty(nd, np.int64)
    for i in range(m):
        alpha[2 * i] = 2 * i + 1
        alpha[2 * i + 1] = 2 * i
        vertex_of[2 * i] = corner_vertex[i]
        vertex_of[2 * i + 1] = star if succ[i] < 0 else corner_vertex[succ[i]]
    # incoming arcs per corner, by increasing source index
    count = np.zeros(m + 1, np.int64)
    for k in range(m):
        t = succ[k]
        count[(m if t < 0 else t)] += 1
    start = np.zeros(m + 2, np.int64)
    for c in range(m + 1):
        start[c + 1] = start[c] + count[c]
    fill = start[:m + 1].copy()
    src = np.empty(m, np.int64)
    for k in range(m):
        t = succ[k]
        t = m if t < 0 else t
        src[fill[t]] = k
        fill[t] += 1
    # counterclockwise order inside corner i: incoming arcs by decreasing
    # forward distance from i, then the outgoing arc
    seq = np.empty(nd, np.int64)
    vstart = np.zeros(n + 3, np.int64)
    vcount = np.zeros(n + 2, np.int64)
    for i in range(m):
        vcount[corner_vertex[i]] += 1 + count[i]
    vcount[star] = count[m]
    for v in range(n + 2):
        vstart[v + 1] = vstart[v] + vcount[v]
    vfill = vstart[:n + 2].copy()
    for i in range(m):
        v = corner_vertex[i]
        a, b = start[i], start[i + 1]
        split = a
        while split < b and src[split] < i:
            split += 1
        for t in range(split - 1, a - 1, -1):
            seq[vfill[v]] = 2 * src[t] + 1
            vfill[v] += 1
        for t in range(b - 1, split - 1, -1):
            seq[vfill[v]] = 2 * src[t] + 1
            vfill[v] += 1
        seq[vfill[v]] = 2 * i
        vfill[v] += 1
    a, b = start[m], start[m + 1]
    for t in range(b - 1, a - 1, -1):
        seq[vfill[star]] = 2 * src[t] + 1
        vfill[star] += 1
    nu = np.empty(nd, np.int64)
    for v in range(n + 2):
        a, b = vstart[v], vstart[v + 1]
        for t in range(a, b):
            nu[seq[t]] = seq[t + 1] if t + 1 < b else seq[a]
    root = 0 if eps > 0 else 1
    return alpha, nu, root, vertex_of


@njit(cache=True)
def draw_labeled_tree(rng, n):
    word = dyck_word(rng, n)
    inc = np.empty(n, np.int64)
    for i in range(n):
        inc[i] = rng.integers(0, 3) - 1
    eps = 1 if rng.integers(0, 2) == 1 else -1
    return word, inc, eps


@njit(cache=True)
def sample_quadrangulation(rng, n):
    word, inc, eps = draw_labeled_tree(rng, n)
    return closure(word, inc, eps)


@njit(cache=True)
def completion_table(n):
    """T[i, h]: number of ways to finish a Dyck word of length 2n from step i at height h."""
    m = 2 * n
    T = np.zeros((m + 1, n + 2), np.int64)
    T[m, 0] = 1
    for i in range(m - 1, -1, -1):
        for h in range(0, n + 1):
            v = 0
            if h + 1 <= n:
                v += T[i + 1, h + 1]
            if h >= 1:
                v += T[i + 1, h - 1]
            T[i, h] = v
    return T


@njit(cache=True)
def unrank_dyck(T, r, word):
    # lexicographic with down (0) before up (1)
    m = word.shape[0]
    h = 0
    for i in range(m):
        down = T[i + 1, h - 1] if h >= 1 else 0
        if r < down:
            word[i] = 0
            h -= 1
        else:
            r -= down
            word[i] = 1
            h += 1


@njit(cache=True)
def _arcs_are_simple(word, inc, stamp, tag, corner_vertex, parent, label, succ, stack):
    # arcs are the edges of the quadrangulation; it is simple iff no two arcs
    # join the same (ordered, since labels differ by one) vertex pair
    m = word.shape[0]
    n = m // 2
    # corners and parents
    top = 0
    stack[0] = 0
    nxt = 1
    corner_vertex[0] = 0
    for i in range(m - 1):
        if word[i] == 1:
            parent[nxt] = stack[top]
            top += 1
            stack[top] = nxt
            nxt += 1
        else:
            top -= 1
        corner_vertex[i + 1] = stack[top]
    label[0] = 0
    for v in range(1, n + 1):
        label[v] = label[parent[v]] + inc[v - 1]
    # successors
    for i in range(m):
        succ[i] = -1
    top = 0
    for j in range(2 * m):
        c = j % m
        lab = label[corner_vertex[c]]
        while top > 0 and label[corner_vertex[stack[top - 1]]] == lab + 1:
            top -= 1
            succ[stack[top]] = c
        if j < m:
            stack[top] = c
            top += 1
    w = n + 2
    for i in range(m):
        t = n + 1 if succ[i] < 0 else corner_vertex[succ[i]]
        key = corner_vertex[i] * w + t
        if stamp[key] == tag:
            return False
        stamp[key] = tag
    return True


@njit(cache=True)
def sample_simple_quadrangulation(rng, n, max_tries):
    """Rejection loop: quadrangulation whose dual is 3-edge-connected.

    Each try is one uniform draw of a rank in [0, Cat(n) * 3**n), decoded
    into a Dyck word and base-3 label increments (valid while that product
    fits in 63 bits, i.e. n <= 24).  Returns (alpha, nu, root, vertex_of,
    tries); tries is negated when the budget ran out.
    """
    m = 2 * n
    T = completion_table(n)
    cat = T[0, 0]
    p3 = 1
    for _ in range(n):
        p3 *= 3
    total = cat * p3
    w = n + 2
    stamp = np.zeros(w * w, np.int64)
    word = np.empty(m, np.int64)
    inc = np.empty(n, np.int64)
    corner_vertex = np.empty(m, np.int64)
    parent = np.empty(n + 1, np.int64)
    label = np.empty(n + 1, np.int64)
    succ = np.empty(m, np.int64)
    stack = np.empty(m + 1, np.int64)
    tries = 0
    while tries < max_tries:
        tries += 1
        r = rng.integers(0, total)
        unrank_dyck(T, r // p3, word)
        x = r % p3
        for i in range(n):
            inc[i] = x % 3 - 1
            x //= 3
        if _arcs_are_simple(word, inc, stamp, tries, corner_vertex, parent, label, succ, stack):
            eps = 1 if rng.integers(0, 2) == 1 else -1
            alpha, nu, root, vertex_of = closure(word, inc, eps)
            return alpha, nu, root, vertex_of, tries
    empty = np.empty(0, np.int64)
    return empty, empty, 0, empty, -tries


@njit(cache=True)
def face_permutation(alpha, nu):
    phi = np.empty_like(alpha)
    for d in range(alpha.shape[0]):
        phi[d] = nu[alpha[d]]
    return phi


@njit(cache=True)
def signature(alpha, nu, root):
    n = alpha.shape[0]
    label = np.full(n, -1, np.int64)
    order = np.empty(n, np.int64)
    order[0] = root
    label[root] = 0
    size = 1
    i = 0
    while i < size:
        d = order[i]
        i += 1
        e = alpha[d]
        if label[e] < 0:
            label[e] = size
            order[size] = e
            size += 1
        e = nu[d]
        if label[e] < 0:
            label[e] = size
            order[size] = e
            size += 1
    sig = np.empty(2 * n, np.int64)
    for k in range(n):
        d = order[k]
        sig[2 * k] = label[alpha[d]]
        sig[2 * k + 1] = label[nu[d]]
    return sig
