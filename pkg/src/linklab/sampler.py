"""Uniform random rooted maps and link diagrams.

Pipeline: uniform plane tree (cycle lemma) -> i.i.d. label increments in
{-1, 0, +1} -> closure into a rooted quadrangulation with an extra pointed
vertex -> forget the pointing -> dual 4-valent map.  Each rooted
quadrangulation with ``n`` faces has ``n + 2`` pointings and two choices of
``epsilon``, which is why the trees with labels and sign are
``2 * 3**n * Catalan(n) = (n + 2) * |Q(n)|`` in number and the output is
uniform.

Randomness comes from :class:`RandomStream`, a PCG64 generator keyed by
``(seed, stream_id)`` through numpy's ``SeedSequence`` spawn keys.
"""

from dataclasses import dataclass, field

import numpy as np

from . import _kernels
from .cmap import RootedMap, dual, is_four_valent
from .errors import EmptyTreeError, FeasibilityError, RejectionBudgetError

__all__ = [
    "RandomStream",
    "LabeledTree",
    "sample_plane_tree",
    "sample_labeled_tree",
    "closure",
    "sample_quadrangulation",
    "sample_four_valent",
    "sample_sq",
    "assign_crossings",
    "sq_face_degrees",
    "SQ_CAP",
    "DEFAULT_MAX_TRIES",
]

SQ_CAP = 16
DEFAULT_MAX_TRIES = 10**9


@dataclass
class RandomStream:
    """Seeded PCG64 stream; ``stream_id`` selects an independent substream."""

    seed: int = 0
    stream_id: int = 0
    generator: np.random.Generator = field(init=False, repr=False)

    def __post_init__(self):
        ss = np.random.SeedSequence(int(self.seed), spawn_key=(int(self.stream_id),))
        self.generator = np.random.Generator(np.random.PCG64(ss))

    def spawn(self, stream_id):
        return RandomStream(self.seed, stream_id)

    def bits(self, size):
        return self.generator.integers(0, 2, size=size)


def _as_stream(rng):
    if isinstance(rng, RandomStream):
        return rng
    if rng is None:
        return RandomStream(0, 0)
    if isinstance(rng, (int, np.integer)):
        return RandomStream(int(rng), 0)
    raise TypeError(f"expected a RandomStream or an integer seed, got {type(rng).__name__}")


@dataclass(frozen=True)
class LabeledTree:
    """Plane tree as a Dyck word plus vertex labels (preorder, root label 0)."""

    contour: tuple
    labels: tuple
    epsilon: int = 1

    def __post_init__(self):
        h = 0
        for s in self.contour:
            if s not in (0, 1):
                raise ValueError("contour steps must be 0 (down) or 1 (up)")
            h += 1 if s else -1
            if h < 0:
                raise ValueError("contour is not a Dyck word")
        if h != 0:
            raise ValueError("contour is not balanced")
        n = len(self.contour) // 2
        if len(self.labels) != n + 1 or (self.labels and self.labels[0] != 0):
            raise ValueError("need one label per vertex with the root labeled 0")
        if self.epsilon not in (1, -1):
            raise ValueError("epsilon must be +1 or -1")
        parents = self.parents()
        for v in range(1, n + 1):
            if abs(self.labels[v] - self.labels[parents[v]]) > 1:
                raise ValueError("adjacent labels differ by more than one")

    @property
    def n_edges(self):
        return len(self.contour) // 2

    def parents(self):
        word = np.asarray(self.contour, dtype=np.int64)
        if word.size == 0:
            return [-1]
        _, parent = _kernels.tree_corners(word)
        return parent.tolist()

    def increments(self):
        p = self.parents()
        return [self.labels[v] - self.labels[p[v]] for v in range(1, len(self.labels))]

    def parenthesized(self):
        return "".join("(" if s else ")" for s in self.contour)


def sample_plane_tree(n, rng=None):
    """Uniform plane tree with ``n`` edges (all labels zero)."""
    if n < 1:
        raise EmptyTreeError("a plane tree needs at least one edge")
    s = _as_stream(rng)
    word = _kernels.dyck_word(s.generator, n)
    return LabeledTree(tuple(word.tolist()), (0,) * (n + 1), 1)


def sample_labeled_tree(n, rng=None):
    if n < 1:
        raise EmptyTreeError("a plane tree needs at least one edge")
    s = _as_stream(rng)
    word, inc, eps = _kernels.draw_labeled_tree(s.generator, n)
    _, parent = _kernels.tree_corners(word)
    labels = [0] * (n + 1)
    for v in range(1, n + 1):
        labels[v] = labels[parent[v]] + int(inc[v - 1])
    return LabeledTree(tuple(word.tolist()), tuple(labels), int(eps))


def closure(tree):
    """Rooted quadrangulation obtained by closing a labeled tree.

    Each corner is joined to the next corner in contour order whose label is
    one smaller, or to an extra vertex when there is none.  The root is the
    arc leaving the root corner, reversed when ``epsilon == -1``.
    """
    word = np.asarray(tree.contour, dtype=np.int64)
    inc = np.asarray(tree.increments(), dtype=np.int64)
    alpha, nu, root, _ = _kernels.closure(word, inc, tree.epsilon)
    return RootedMap._trusted(alpha.tolist(), nu.tolist(), int(root))


def sample_quadrangulation(n, rng=None):
    """Uniform rooted quadrangulation with ``n`` faces, in time linear in n."""
    if n < 1:
        raise EmptyTreeError("a quadrangulation needs at least one face")
    s = _as_stream(rng)
    alpha, nu, root, _ = _kernels.sample_quadrangulation(s.generator, n)
    return RootedMap._trusted(alpha.tolist(), nu.tolist(), int(root))


def sample_four_valent(n, rng=None):
    """Uniform rooted 4-valent planar map with ``n`` vertices."""
    return dual(sample_quadrangulation(n, rng))


def sample_sq(n, rng=None, max_tries=DEFAULT_MAX_TRIES, cap=SQ_CAP, return_tries=False):
    """Uniform rooted 3-edge-connected 4-valent map with ``n`` vertices.

    Rejection from :func:`sample_four_valent`: the dual quadrangulation is
    kept when it has no multiple edge, which is the planar-dual form of "no
    edge cut of size <= 2".  The acceptance rate decays like (9/16)**n.
    """
    if n < 2:
        raise ValueError("SQ(n) is defined for n >= 2")
    if n > 24 or (cap is not None and n > cap):
        raise FeasibilityError(
            f"SQ({n}) by rejection is beyond the feasibility cap {cap}")
    s = _as_stream(rng)
    alpha, nu, root, _, tries = _kernels.sample_simple_quadrangulation(s.generator, n, max_tries)
    if tries < 0:
        raise RejectionBudgetError(
            f"no 3-edge-connected map in {-tries} tries at n={n}", attempts=-tries, accepted=0)
    m = dual(RootedMap._trusted(alpha.tolist(), nu.tolist(), int(root)))
    return (m, int(tries)) if return_tries else m


def sq_face_degrees(n, count, rng=None, max_tries=DEFAULT_MAX_TRIES, cap=SQ_CAP):
    """Face-degree histograms of ``count`` uniform SQ(n) maps, without building them.

    Faces of the 4-valent map are the vertices of the sampled quadrangulation,
    so row ``i`` holds, at index ``k``, the number of k-gons of sample ``i``.
    Returns ``(histograms, total_tries)``.
    """
    if n < 2:
        raise ValueError("SQ(n) is defined for n >= 2")
    if n > 24 or (cap is not None and n > cap):
        raise FeasibilityError(
            f"SQ({n}) by rejection is beyond the feasibility cap {cap}")
    s = _as_stream(rng)
    out = np.zeros((count, 4 * n + 1), np.int64)
    total = 0
    for i in range(count):
        _, _, _, vertex_of, tries = _kernels.sample_simple_quadrangulation(s.generator, n, max_tries)
        if tries < 0:
            raise RejectionBudgetError(
                f"no 3-edge-connected map in {-tries} tries at n={n}", attempts=total - tries,
                accepted=i)
        total += tries
        deg = np.bincount(vertex_of)
        out[i] = np.bincount(deg, minlength=4 * n + 1)[:4 * n + 1]
    return out, total


def _alternating_bits(m):
    # bit b at vertex v: the strand through (least dart d, nu^2 d) is over iff b == 1
    vo = m.vertex_of
    cyc = m.vertex_cycles
    least = [min(c) for c in cyc]

    def pair0(d):
        x = least[vo[d]]
        return d == x or d == m.nu[m.nu[x]]

    # over(d) = (pair0(d) == bit[v]); each edge needs exactly one over end
    bits = [-1] * len(cyc)
    r = m.root
    bits[vo[r]] = 1 if pair0(r) else 0
    stack = [vo[r]]
    while stack:
        v = stack.pop()
        for d in cyc[v]:
            e = m.alpha[d]
            w = vo[e]
            over_d = pair0(d) == (bits[v] == 1)
            want = not over_d
            b = 1 if pair0(e) == want else 0
            if bits[w] < 0:
                bits[w] = b
                stack.append(w)
            elif bits[w] != b:
                raise AssertionError("no alternating assignment; map is not planar 4-valent")
    return bits


def assign_crossings(m, mode="uniform", rng=None):
    """Turn a 4-valent map into a link diagram.

    ``uniform`` flips an independent fair coin per vertex; ``alternating``
    gives the unique alternating diagram whose root dart leaves over.
    """
    from .diagram import LinkDiagram

    if not is_four_valent(m):
        raise ValueError("crossings need a 4-valent map")
    if mode == "alternating":
        bits = _alternating_bits(m)
    elif mode == "uniform":
        bits = _as_stream(rng).bits(m.n_vertices).tolist()
    else:
        raise ValueError(f"unknown crossing mode {mode!r}")
    return LinkDiagram(m, tuple(int(b) for b in bits))
