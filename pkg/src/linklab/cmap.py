"""Rooted combinatorial planar maps stored as dart permutations.

A map on ``2E`` darts is a pair of permutations: ``alpha`` (the edge
involution) and ``nu`` (counterclockwise rotation around each vertex),
plus a root dart.  Faces are the cycles of ``phi = nu o alpha`` (cross the
edge, then rotate), which with counterclockwise rotations traces the face
lying to the right of each dart.  The root face is the face containing the
root dart.
"""

import json
from collections import deque
from dataclasses import dataclass
from functools import cached_property

from .errors import InvalidMapError, SizeLimitError

__all__ = [
    "RootedMap",
    "CanonicalForm",
    "from_rotations",
    "faces",
    "root_face",
    "dual",
    "medial",
    "quadrangulation_to_map",
    "canonical_form",
    "canonical_signature",
    "rooting_signatures",
    "is_isomorphic",
    "is_asymmetric",
    "automorphism_count",
    "edge_connectivity_at_least_3",
    "is_nonseparable",
    "is_quadrangulation",
    "is_four_valent",
    "enumerate_all",
    "enumerate_rooted_degree_maps",
    "enumerate_sq",
    "to_json",
    "from_json",
    "DEFAULT_ENUMERATION_CAP",
]

DEFAULT_ENUMERATION_CAP = 5


def _cycles(perm):
    n = len(perm)
    seen = [False] * n
    out = []
    for start in range(n):
        if seen[start]:
            continue
        cyc = []
        x = start
        while not seen[x]:
            seen[x] = True
            cyc.append(x)
            x = perm[x]
        out.append(tuple(cyc))
    return out


def _cycle_index(cycles, n):
    index = [0] * n
    for i, cyc in enumerate(cycles):
        for x in cyc:
            index[x] = i
    return index


def check_permutations(alpha, nu, root):
    """Raise InvalidMapError unless (alpha, nu, root) is a connected genus-0 map."""
    n = len(alpha)
    if n == 0 or n % 2:
        raise InvalidMapError(f"need a positive even number of darts, got {n}")
    if len(nu) != n:
        raise InvalidMapError("alpha and nu have different lengths")
    if sorted(nu) != list(range(n)):
        raise InvalidMapError("nu is not a permutation")
    for d in range(n):
        a = alpha[d]
        if not 0 <= a < n or a == d or alpha[a] != d:
            raise InvalidMapError(f"alpha is not a fixed-point-free involution at dart {d}")
    if not 0 <= root < n:
        raise InvalidMapError(f"root {root} out of range")
    seen = [False] * n
    seen[0] = True
    stack = [0]
    reached = 1
    while stack:
        d = stack.pop()
        for e in (alpha[d], nu[d]):
            if not seen[e]:
                seen[e] = True
                reached += 1
                stack.append(e)
    if reached != n:
        raise InvalidMapError("map is not connected")
    phi = [nu[alpha[d]] for d in range(n)]
    chi = len(_cycles(nu)) - n // 2 + len(_cycles(phi))
    if chi != 2:
        raise InvalidMapError(f"map is not planar (Euler characteristic {chi})")


@dataclass(frozen=True)
class RootedMap:
    """A rooted planar map.

    ``alpha[d]`` is the other half of the edge of dart ``d``; ``nu[d]`` is
    the next dart counterclockwise around the tail vertex of ``d``.
    Construction validates every invariant (involution, transitivity,
    Euler characteristic 2).
    """

    alpha: tuple
    nu: tuple
    root: int = 0

    def __post_init__(self):
        alpha = tuple(int(x) for x in self.alpha)
        nu = tuple(int(x) for x in self.nu)
        object.__setattr__(self, "alpha", alpha)
        object.__setattr__(self, "nu", nu)
        object.__setattr__(self, "root", int(self.root))
        check_permutations(alpha, nu, self.root)

    @classmethod
    def _trusted(cls, alpha, nu, root=0):
        # skips validation; callers guarantee the invariants
        m = object.__new__(cls)
        object.__setattr__(m, "alpha", tuple(alpha))
        object.__setattr__(m, "nu", tuple(nu))
        object.__setattr__(m, "root", root)
        return m

    @property
    def n_darts(self):
        return len(self.alpha)

    @property
    def n_edges(self):
        return len(self.alpha) // 2

    @cached_property
    def phi(self):
        a, nu = self.alpha, self.nu
        return tuple(nu[a[d]] for d in range(len(a)))

    @cached_property
    def nu_inv(self):
        inv = [0] * len(self.nu)
        for d, e in enumerate(self.nu):
            inv[e] = d
        return tuple(inv)

    @cached_property
    def vertex_cycles(self):
        return _cycles(self.nu)

    @cached_property
    def face_cycles(self):
        return _cycles(self.phi)

    @cached_property
    def vertex_of(self):
        return tuple(_cycle_index(self.vertex_cycles, self.n_darts))

    @cached_property
    def face_of(self):
        return tuple(_cycle_index(self.face_cycles, self.n_darts))

    @property
    def n_vertices(self):
        return len(self.vertex_cycles)

    @property
    def n_faces(self):
        return len(self.face_cycles)

    def degrees(self):
        return [len(c) for c in self.vertex_cycles]

    def face_degrees(self):
        return [len(c) for c in self.face_cycles]

    def reroot(self, dart):
        if not 0 <= dart < self.n_darts:
            raise InvalidMapError(f"root {dart} out of range")
        return RootedMap._trusted(self.alpha, self.nu, dart)

    def relabel(self, sigma):
        """Return the same map with dart ``d`` renamed ``sigma[d]``."""
        n = self.n_darts
        alpha = [0] * n
        nu = [0] * n
        for d in range(n):
            alpha[sigma[d]] = sigma[self.alpha[d]]
            nu[sigma[d]] = sigma[self.nu[d]]
        return RootedMap._trusted(alpha, nu, sigma[self.root])

    def __repr__(self):
        return (f"RootedMap(V={self.n_vertices}, E={self.n_edges}, "
                f"F={self.n_faces}, root={self.root})")


def from_rotations(rotations, root=(0, 0)):
    """Build a map from per-vertex lists of edge labels in counterclockwise order.

    Every label must occur exactly twice.  ``root`` is ``(vertex, slot)``.
    This is the same information a PD code carries, without crossing data.
    """
    alpha_of = {}
    nu = []
    starts = []
    d = 0
    for labels in rotations:
        if not labels:
            raise InvalidMapError("empty rotation")
        starts.append(d)
        k = len(labels)
        for i, lab in enumerate(labels):
            nu.append(d + (i + 1) % k)
            alpha_of.setdefault(lab, []).append(d + i)
        d += k
    alpha = [0] * d
    for lab, ds in alpha_of.items():
        if len(ds) != 2:
            raise InvalidMapError(f"edge label {lab!r} occurs {len(ds)} times")
        a, b = ds
        alpha[a], alpha[b] = b, a
    v, slot = root
    return RootedMap(alpha, nu, starts[v] + slot)


def faces(m):
    """Face cycles of ``m``; the root face comes first and starts at the root."""
    out = []
    rf = m.face_of[m.root]
    for i, cyc in enumerate(m.face_cycles):
        if i == rf:
            k = cyc.index(m.root)
            out.insert(0, cyc[k:] + cyc[:k])
        else:
            out.append(cyc)
    return out


def root_face(m):
    return faces(m)[0]


def dual(m):
    """Planar dual on the same darts: vertices become faces and vice versa.

    The dual rotation is ``phi``; its face permutation is then ``nu`` again,
    so ``dual(dual(m)) == m`` exactly (not just up to isomorphism).
    """
    return RootedMap._trusted(m.alpha, m.phi, m.root)


def medial(m):
    """Medial map: one 4-valent vertex per edge of ``m``, one edge per corner.

    Dart ``d`` of ``m`` yields medial darts ``2d`` (heading into the corner
    counterclockwise after ``d``) and ``2d + 1`` (the corner before ``d``).
    The medial root heads the same way as the original root and has the
    original root face on its right.
    """
    n = m.n_darts
    alpha = [0] * (2 * n)
    nu = [0] * (2 * n)
    for d in range(n):
        e = m.alpha[d]
        a, b = 2 * d, 2 * d + 1
        nu[a] = b
        nu[b] = 2 * e
        nxt = 2 * m.nu[d] + 1
        alpha[a] = nxt
        alpha[nxt] = a
    return RootedMap._trusted(alpha, nu, 2 * m.alpha[m.root])


def quadrangulation_to_map(q):
    """Tutte's opening of a rooted quadrangulation into a general map.

    The root vertex of ``q`` is colored black; black vertices become the
    vertices of the result and each quadrangle becomes the edge joining its
    two black corners.  Rooted quadrangulations with ``n`` faces correspond
    one to one with rooted maps with ``n`` edges.
    """
    if not is_quadrangulation(q):
        raise InvalidMapError("not a quadrangulation")
    n = q.n_darts
    color = [-1] * q.n_vertices
    vo = q.vertex_of
    color[vo[q.root]] = 0
    queue = deque([vo[q.root]])
    while queue:
        v = queue.popleft()
        for d in q.vertex_cycles[v]:
            w = vo[q.alpha[d]]
            if color[w] < 0:
                color[w] = 1 - color[v]
                queue.append(w)
            elif color[w] == color[v]:
                raise InvalidMapError("quadrangulation is not bipartite")
    black = [d for d in range(n) if color[vo[d]] == 0]
    new = {d: i for i, d in enumerate(black)}
    phi = q.phi
    alpha = [new[phi[phi[d]]] for d in black]
    nu = [new[q.nu[d]] for d in black]
    return RootedMap(alpha, nu, new[q.root])


@dataclass(frozen=True)
class CanonicalForm:
    labels: tuple
    signature: tuple

    def __eq__(self, other):
        return isinstance(other, CanonicalForm) and self.signature == other.signature

    def __hash__(self):
        return hash(self.signature)


def _bfs_labels(alpha, nu, root):
    n = len(alpha)
    label = [-1] * n
    order = [root]
    label[root] = 0
    i = 0
    while i < len(order):
        d = order[i]
        i += 1
        for e in (alpha[d], nu[d]):
            if label[e] < 0:
                label[e] = len(order)
                order.append(e)
    return label, order


def canonical_signature(m, root=None):
    alpha, nu = m.alpha, m.nu
    label, order = _bfs_labels(alpha, nu, m.root if root is None else root)
    sig = []
    for d in order:
        sig.append(label[alpha[d]])
        sig.append(label[nu[d]])
    return tuple(sig)


def canonical_form(m):
    """Breadth-first relabeling from the root (edge partner first, then rotation).

    A rooted map has no nontrivial automorphism fixing the root, so this
    labeling is canonical: two rooted maps are isomorphic exactly when their
    signatures agree.
    """
    label, order = _bfs_labels(m.alpha, m.nu, m.root)
    sig = []
    for d in order:
        sig.append(label[m.alpha[d]])
        sig.append(label[m.nu[d]])
    return CanonicalForm(tuple(label), tuple(sig))


def is_isomorphic(m1, m2):
    return m1.n_darts == m2.n_darts and canonical_signature(m1) == canonical_signature(m2)


def rooting_signatures(m):
    return [canonical_signature(m, d) for d in range(m.n_darts)]


def automorphism_count(m):
    """Order of the orientation-preserving automorphism group of the unrooted map."""
    sigs = rooting_signatures(m)
    base = sigs[m.root]
    return sum(1 for s in sigs if s == base)


def is_asymmetric(m):
    """True when every re-rooting of ``m`` gives a different rooted map."""
    return len(set(rooting_signatures(m))) == m.n_darts


def is_four_valent(m):
    return all(len(c) == 4 for c in m.vertex_cycles)


def is_quadrangulation(m):
    return all(len(c) == 4 for c in m.face_cycles)


def edge_connectivity_at_least_3(m):
    """True iff no set of at most two edges disconnects ``m``.

    Minimal edge cuts of a planar map are the simple cycles of its dual, so
    a cut of size <= 2 exists exactly when some edge has the same face on
    both sides or two edges separate the same pair of faces.
    """
    fo = m.face_of
    pairs = set()
    for d in range(m.n_darts):
        e = m.alpha[d]
        if d > e:
            continue
        f, g = fo[d], fo[e]
        if f == g:
            return False
        key = (f, g) if f < g else (g, f)
        if key in pairs:
            return False
        pairs.add(key)
    return True


def is_nonseparable(m):
    """No loop and no cut vertex (the single-edge maps count as nonseparable)."""
    if m.n_edges == 1:
        return True
    vo = m.vertex_of
    edges = [(d, m.alpha[d]) for d in range(m.n_darts) if d < m.alpha[d]]
    for d, e in edges:
        if vo[d] == vo[e]:
            return False
    for v in range(m.n_vertices):
        parent = list(range(len(edges)))

        def find(x):
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        seen_at = {}
        for i, (d, e) in enumerate(edges):
            for w in (vo[d], vo[e]):
                if w == v:
                    continue
                if w in seen_at:
                    a, b = find(i), find(seen_at[w])
                    parent[a] = b
                else:
                    seen_at[w] = i
        if len({find(i) for i in range(len(edges))}) > 1:
            return False
    return True


def _generate_alphas(n_vertices, root_degree, loopless):
    """Yield each rooted map with the given degree profile exactly once.

    Darts are labeled canonically: vertex 0 is the root vertex with the root
    at dart 0, and the smallest unmatched dart is always matched next, either
    to another dart on the same partial face (keeps genus 0) or to slot 0 of
    a fresh 4-valent vertex.
    """
    total = root_degree + 4 * (n_vertices - 1)
    nu = [0] * total
    owner = [0] * total
    for d in range(root_degree):
        nu[d] = (d + 1) % root_degree
    for v in range(1, n_vertices):
        s = root_degree + 4 * (v - 1)
        for i in range(4):
            nu[s + i] = s + (i + 1) % 4
            owner[s + i] = v
    alpha = [-1] * total

    def rec(nv, end, d):
        while d < end and alpha[d] >= 0:
            d += 1
        if d == end:
            if nv == n_vertices:
                yield tuple(alpha), tuple(nu)
            return
        x = nu[d]
        while x != d:
            if alpha[x] < 0 and not (loopless and owner[x] == owner[d]):
                alpha[d], alpha[x] = x, d
                yield from rec(nv, end, d + 1)
                alpha[d] = alpha[x] = -1
            a = alpha[x]
            x = nu[x if a < 0 else a]
        if nv < n_vertices:
            s = end
            alpha[d], alpha[s] = s, d
            yield from rec(nv + 1, end + 4, d + 1)
            alpha[d] = alpha[s] = -1

    yield from rec(1, root_degree, 0)


def enumerate_rooted_degree_maps(n_vertices, root_degree=4, loopless=False):
    """All rooted planar maps with a root vertex of ``root_degree`` and
    ``n_vertices - 1`` further vertices of degree 4."""
    for alpha, nu in _generate_alphas(n_vertices, root_degree, loopless):
        yield RootedMap._trusted(alpha, nu, 0)


def enumerate_all(n, four_valent=True, cap=DEFAULT_ENUMERATION_CAP):
    """Exhaustive list of rooted planar maps.

    With ``four_valent`` the maps have ``n`` vertices of degree 4; otherwise
    they are general maps with ``n`` edges (obtained from the quadrangulations
    with ``n`` faces by Tutte's opening).
    """
    if n < 1:
        raise ValueError("n must be positive")
    if cap is not None and n > cap:
        raise SizeLimitError(f"n={n} exceeds enumeration cap {cap}")
    maps = list(enumerate_rooted_degree_maps(n))
    if four_valent:
        return maps
    return [quadrangulation_to_map(dual(m)) for m in maps]


def enumerate_sq(n):
    """All rooted 3-edge-connected 4-valent maps with ``n`` vertices.

    Loops are pruned during generation (a loop always sits in a cut of size
    two), which keeps n = 8 at a few seconds.
    """
    if n < 2:
        raise ValueError("SQ(n) needs n >= 2")
    return [m for m in enumerate_rooted_degree_maps(n, loopless=True)
            if edge_connectivity_at_least_3(m)]


def to_json(m, **extra):
    doc = {"n_darts": m.n_darts, "alpha": list(m.alpha), "nu": list(m.nu), "root": m.root}
    doc.update(extra)
    return json.dumps(doc, separators=(",", ":"))


def from_json(text):
    doc = json.loads(text) if isinstance(text, str) else text
    m = RootedMap(doc["alpha"], doc["nu"], doc["root"])
    if doc.get("n_darts", m.n_darts) != m.n_darts:
        raise InvalidMapError("n_darts does not match the permutation length")
    return m
