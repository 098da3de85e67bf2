"""Tangle shadows as quadrangulations with a self-avoiding boundary.

A tangle with ``n`` crossings and ``2p`` endpoints is stored on the
quadrangulation side: its ``n`` crossings are the quadrilateral faces and
its outside is one boundary face of degree ``2p``.  The root is a boundary
dart with the boundary face on its right.

Crossing bits live on the interior faces, listed by least dart.  For a face
with least dart ``d`` the bit is 1 when the strand through ``{d, phi^2 d}``
passes over, which is the same convention :class:`LinkDiagram` uses at a
vertex once the map is dualized.
"""

import json
from dataclasses import dataclass

from .cmap import RootedMap, canonical_signature, dual, enumerate_rooted_degree_maps
from .errors import InvalidMapError, TangleValidationError

__all__ = [
    "BoundedQuadrangulation",
    "validate",
    "first_violation",
    "check",
    "embeds_at_root",
    "embedding",
    "embeds_with_crossings",
    "rooting_count",
    "glue",
    "cut",
    "reroot_on_boundary",
    "canonical_boundary_root",
    "enumerate_bounded",
    "minimal_square",
    "single_edge",
    "split_face",
    "grid_2x2",
    "figure10_example",
    "open_edge",
    "forbidden_tangle_library",
    "to_json",
    "from_json",
]


@dataclass(frozen=True)
class BoundedQuadrangulation:
    map: RootedMap
    boundary_face: int
    crossing_bits: tuple = None

    @property
    def root(self):
        return self.map.root

    def boundary_cycle(self):
        """Boundary darts in face order, starting at the root when it lies on the boundary."""
        m = self.map
        cyc = m.face_cycles[m.face_of[self.boundary_face]]
        if m.root in cyc:
            k = cyc.index(m.root)
            cyc = cyc[k:] + cyc[:k]
        return list(cyc)

    @property
    def perimeter(self):
        return len(self.boundary_cycle())

    @property
    def p(self):
        return self.perimeter // 2

    @property
    def area(self):
        return self.map.n_faces - 1

    def interior_faces(self):
        bf = self.map.face_of[self.boundary_face]
        return [c for i, c in enumerate(self.map.face_cycles) if i != bf]

    def with_bits(self, bits):
        return BoundedQuadrangulation(self.map, self.boundary_face,
                                      None if bits is None else tuple(int(b) for b in bits))

    def shadow_signature(self):
        return canonical_signature(self.map)


def _as_map(q):
    return q.shadow if hasattr(q, "shadow") else q


def first_violation(k):
    """Name of the first broken invariant, or None."""
    m = k.map
    n = m.n_darts
    if not 0 <= k.boundary_face < n:
        return "boundary-face"
    bf = m.face_of[k.boundary_face]
    cyc = m.face_cycles[bf]
    if min(cyc) != k.boundary_face:
        return "boundary-face"
    for i, c in enumerate(m.face_cycles):
        if i != bf and len(c) != 4:
            return "faces-degree-4"
    if len(cyc) % 2:
        return "even-perimeter"
    vs = [m.vertex_of[d] for d in cyc]
    if len(set(vs)) != len(vs):
        return "self-avoiding"
    if m.face_of[m.root] != bf:
        return "root-on-boundary"
    if k.crossing_bits is not None:
        if len(k.crossing_bits) != m.n_faces - 1 or any(b not in (0, 1) for b in k.crossing_bits):
            return "crossing-bits"
    return None


def validate(k):
    return first_violation(k) is None


def check(k):
    v = first_violation(k)
    if v is not None:
        raise TangleValidationError(v, f"bounded quadrangulation violates {v!r}")
    return k


def embedding(k, q, root=None):
    """Dart map realizing ``k`` around the root of quadrangulation ``q``, or None.

    The map sends the root of ``k`` to the root of ``q`` (or to ``root``),
    commutes with ``alpha`` everywhere and with ``phi`` on every interior
    face of ``k``, and must be injective on darts and on vertices.  Those
    conditions make the image of the boundary a simple cycle of ``q`` with
    ``k`` filling one side of it.
    """
    km = k.map
    q = _as_map(q)
    bf = km.face_of[k.boundary_face]
    kf, kphi, ka = km.face_of, km.phi, km.alpha
    qphi, qa = q.phi, q.alpha
    f = {km.root: q.root if root is None else root}
    stack = [km.root]

    def put(x, y):
        if x in f:
            return f[x] == y
        f[x] = y
        stack.append(x)
        return True

    while stack:
        x = stack.pop()
        y = f[x]
        if not put(ka[x], qa[y]):
            return None
        if kf[x] != bf and not put(kphi[x], qphi[y]):
            return None
    if len(f) != km.n_darts or len(set(f.values())) != len(f):
        return None
    kv, qv = km.vertex_of, q.vertex_of
    vmap = {}
    for x, y in f.items():
        w = vmap.setdefault(kv[x], qv[y])
        if w != qv[y]:
            return None
    if len(set(vmap.values())) != len(vmap):
        return None
    return f


def embeds_at_root(k, q, root=None):
    return embedding(k, q, root) is not None


def _bits_match(t, f, diagram):
    bits = t.crossing_bits or ()
    if len(bits) != t.area:
        raise TangleValidationError("crossing-bits", "tangle needs one crossing bit per face")
    for face, b in zip(t.interior_faces(), bits):
        if diagram.is_over(f[min(face)]) != (b == 1):
            return False
    return True


def embeds_with_crossings(t, l, root=None):
    """Shadow embedding at the root of ``l`` plus agreement of every crossing."""
    q = dual(l.shadow)
    f = embedding(t, q, root)
    return f is not None and _bits_match(t, f, l)


def rooting_count(t, l):
    """Number of the 4c rootings of ``l`` around which ``t`` embeds."""
    q = dual(l.shadow)
    hits = 0
    for r in range(q.n_darts):
        f = embedding(t, q, r)
        if f is not None and _bits_match(t, f, l):
            hits += 1
    return hits


def glue(k, o):
    """Glue the complement ``o`` onto the boundary of ``k``; rooted at k's root.

    ``o`` is a bounded quadrangulation with the same perimeter whose root
    dart is identified with ``alpha(root of k)``, so both boundaries are
    walked in opposite directions from the root edge.
    """
    km, om = k.map, o.map
    b = k.boundary_cycle()
    c = o.boundary_cycle()
    P = len(b)
    if len(c) != P:
        raise ValueError("boundary lengths differ")
    if b[0] != km.root or c[0] != om.root:
        raise ValueError("both roots must lie on their boundaries")
    nk = km.n_darts
    g = {}
    for i in range(P):
        ci = c[i]
        bj = b[(-i) % P]
        g[ci] = km.alpha[bj]
        g[om.alpha[ci]] = bj
    nxt = nk
    for y in range(om.n_darts):
        if y not in g:
            g[y] = nxt
            nxt += 1
    alpha = list(km.alpha) + [0] * (nxt - nk)
    nu = list(km.nu) + [0] * (nxt - nk)
    for y in range(om.n_darts):
        gy = g[y]
        if gy >= nk:
            alpha[gy] = g[om.alpha[y]]
            nu[gy] = g[om.nu[y]]
    for j in range(P):
        x = km.alpha[b[j]]
        nu[x] = g[om.nu[c[(-j) % P]]]
    return RootedMap(alpha, nu, km.root)


def cut(q, k):
    """Complement of ``k`` inside ``q`` (around the root), as a bounded quadrangulation."""
    q = _as_map(q)
    f = embedding(k, q)
    if f is None:
        raise ValueError("tangle does not embed at the root")
    km = k.map
    if k.area == 0:
        # cutting along one edge doubles it into a digon
        r, e = q.root, q.alpha[q.root]
        u, w = q.n_darts, q.n_darts + 1
        alpha = list(q.alpha) + [w, u]
        nu = list(q.nu) + [q.nu[r], e]
        nu[r] = u
        nu[q.nu_inv[e]] = w
        m = RootedMap(alpha, nu, e)
        return BoundedQuadrangulation(m, min(m.face_cycles[m.face_of[e]]))
    boundary_edge = set()
    for d in k.boundary_cycle():
        boundary_edge.add(d)
        boundary_edge.add(km.alpha[d])
    drop = {f[x] for x in range(km.n_darts) if x not in boundary_edge}
    keep = [d for d in range(q.n_darts) if d not in drop]
    new = {d: i for i, d in enumerate(keep)}
    alpha = [new[q.alpha[d]] for d in keep]
    nu = []
    for d in keep:
        z = q.nu[d]
        while z in drop:
            z = q.nu[z]
        nu.append(new[z])
    root = new[q.alpha[q.root]]
    m = RootedMap(alpha, nu, root)
    bf = min(m.face_cycles[m.face_of[root]])
    return BoundedQuadrangulation(m, bf)


def reroot_on_boundary(k, steps):
    cyc = k.boundary_cycle()
    return BoundedQuadrangulation(k.map.reroot(cyc[steps % len(cyc)]), k.boundary_face,
                                  k.crossing_bits)


def canonical_boundary_root(k):
    """Reroot at the boundary dart whose rooted signature is smallest."""
    best = min(k.boundary_cycle(), key=lambda d: canonical_signature(k.map, d))
    return BoundedQuadrangulation(k.map.reroot(best), k.boundary_face, k.crossing_bits)


def enumerate_bounded(n, p):
    """All rooted quadrangulations with ``n`` inner faces and a self-avoiding
    boundary of length ``2p``, each exactly once."""
    out = []
    for m in enumerate_rooted_degree_maps(n + 1, 2 * p):
        q = dual(m)
        k = BoundedQuadrangulation(q, 0)
        if first_violation(k) is None:
            out.append(k)
    return out


def single_edge():
    return BoundedQuadrangulation(RootedMap((1, 0), (0, 1), 0), 0)


def minimal_square(bit=None):
    """One quadrilateral with perimeter 4: the shadow of a single crossing."""
    k = enumerate_bounded(1, 2)[0]
    return k if bit is None else k.with_bits((bit,))


def split_face(k, dart):
    """Add a vertex inside the interior face right of ``dart``, joined to two opposite corners.

    Area grows by one; the boundary is untouched.
    """
    m = k.map
    if m.face_of[dart] == m.face_of[k.boundary_face]:
        raise ValueError("dart must lie on an interior face")
    n = m.n_darts
    d0 = dart
    d2 = m.phi[m.phi[d0]]
    s1, x1, s2, x2 = n, n + 1, n + 2, n + 3
    alpha = list(m.alpha) + [x1, s1, x2, s2]
    nu = list(m.nu) + [0, 0, 0, 0]
    for s, d in ((s1, d0), (s2, d2)):
        prev = m.nu_inv[d]
        nu[prev] = s
        nu[s] = d
    nu[x1], nu[x2] = x2, x1
    out = BoundedQuadrangulation(RootedMap(alpha, nu, m.root), k.boundary_face)
    return check(out)


def grid_2x2():
    """Four squares in a 2x2 block; area 4, perimeter 8."""
    # vertices (i, j), i = column, j = row; edges listed counterclockwise from east
    idx = {(i, j): 3 * j + i for j in range(3) for i in range(3)}
    rot = []
    for j in range(3):
        for i in range(3):
            labs = []
            for di, dj in ((1, 0), (0, 1), (-1, 0), (0, -1)):
                a, b = (i, j), (i + di, j + dj)
                if b in idx:
                    labs.append(tuple(sorted((idx[a], idx[b]))))
            rot.append(labs)
    from .cmap import from_rotations

    m = from_rotations(rot, root=(0, 0))
    # root at the corner (0,0) heading east: outer face on its right
    bf = min(m.face_cycles[m.face_of[m.root]])
    return check(BoundedQuadrangulation(m, bf))


def figure10_example():
    """A bounded quadrangulation with area 13 and perimeter 8 (2x2 block with nine splits)."""
    k = grid_2x2()
    while k.area < 13:
        faces = k.interior_faces()
        # split the face with the smallest least-dart each time, alternating diagonals
        d = min(faces[k.area % len(faces)])
        if k.area % 2:
            d = k.map.phi[d]
        k = split_face(k, d)
    return k


def open_edge(diagram, dart=None):
    """Cut one edge of a link diagram open: a tangle with two endpoints.

    A degree-2 vertex is inserted on the edge of ``dart`` (the root by
    default); after dualizing it becomes the boundary face of perimeter 2.
    """
    m = diagram.shadow
    x = m.root if dart is None else dart
    y = m.alpha[x]
    n = m.n_darts
    o1, o2 = n, n + 1
    alpha = list(m.alpha) + [x, y]
    alpha[x], alpha[y] = o1, o2
    nu = list(m.nu) + [o2, o1]
    mm = RootedMap(alpha, nu, o1)
    k = BoundedQuadrangulation(dual(mm), o1, tuple(diagram.over_bits))
    return check(k)


def forbidden_tangle_library():
    """Local pictures that force a satellite, summand or extra component.

    * ``hopf_clasp``: a small loop linked once around a strand;
    * ``split_loop``: the same picture with one crossing changed, so the
      loop is split off;
    * ``trefoil_arc`` and ``figure_eight_arc``: a strand with a knotted
      summand tied in it.
    """
    from .diagram import alternating, hopf, pretzel_shadow, torus_2n

    clasp = open_edge(hopf())
    split = clasp.with_bits((1 - clasp.crossing_bits[0],) + clasp.crossing_bits[1:])
    trefoil = open_edge(torus_2n(3))
    fig8 = open_edge(alternating(pretzel_shadow([2, 1, 1])))
    return {
        "hopf_clasp": clasp,
        "split_loop": split,
        "trefoil_arc": trefoil,
        "figure_eight_arc": fig8,
    }


def to_json(k, **extra):
    m = k.map
    doc = {"n_darts": m.n_darts, "alpha": list(m.alpha), "nu": list(m.nu), "root": m.root,
           "boundary_face": k.boundary_face,
           "crossing_bits": None if k.crossing_bits is None else list(k.crossing_bits)}
    doc.update(extra)
    return json.dumps(doc, separators=(",", ":"))


def from_json(text):
    doc = json.loads(text) if isinstance(text, str) else text
    try:
        m = RootedMap(doc["alpha"], doc["nu"], doc["root"])
    except InvalidMapError as e:
        raise TangleValidationError("map", str(e)) from None
    bits = doc.get("crossing_bits")
    return BoundedQuadrangulation(m, int(doc["boundary_face"]),
                                  None if bits is None else tuple(int(b) for b in bits))
