"""Link diagrams on 4-valent planar maps and the invariants read off them.

A crossing bit ``b`` at vertex ``v`` says which of the two opposite dart
pairs at ``v`` is the over-strand: with ``d`` the least dart at ``v``, the
pair ``{d, nu^2 d}`` is over iff ``b == 1``.
"""

import json
import re
from dataclasses import dataclass
from functools import lru_cache

from . import census
from .cmap import (RootedMap, canonical_signature, edge_connectivity_at_least_3,
                   from_rotations, is_four_valent, _bfs_labels)
from .errors import ClassificationError, InvalidMapError, PDFormatError

__all__ = [
    "LinkDiagram",
    "FaceTypeVector",
    "face_type",
    "twist_number",
    "is_torus_2n",
    "is_alternating",
    "component_count",
    "strand_cycles",
    "classify",
    "volume_bounds",
    "export_pd",
    "parse_pd",
    "diagram_signature",
    "pretzel_shadow",
    "torus_2n_shadow",
    "torus_2n",
    "hopf",
    "figure_eight_knot",
    "figure2_diagram",
    "alternating",
    "to_json",
    "from_json",
    "PRIME_ALTERNATING",
    "TORUS_2N",
    "GENERAL",
]

PRIME_ALTERNATING = "prime_alternating_candidate"
TORUS_2N = "torus_2n"
GENERAL = "general"


@dataclass(frozen=True)
class LinkDiagram:
    shadow: RootedMap
    over_bits: tuple

    def __post_init__(self):
        object.__setattr__(self, "over_bits", tuple(int(b) for b in self.over_bits))
        if not is_four_valent(self.shadow):
            raise InvalidMapError("a link diagram needs a 4-valent shadow")
        if len(self.over_bits) != self.shadow.n_vertices:
            raise InvalidMapError("need exactly one crossing bit per vertex")
        if any(b not in (0, 1) for b in self.over_bits):
            raise InvalidMapError("crossing bits must be 0 or 1")

    @property
    def n_crossings(self):
        return self.shadow.n_vertices

    def is_over(self, d):
        """Whether dart ``d`` belongs to the over-strand at its crossing."""
        m = self.shadow
        v = m.vertex_of[d]
        x = min(m.vertex_cycles[v])
        in_pair0 = d == x or d == m.nu[m.nu[x]]
        return in_pair0 == (self.over_bits[v] == 1)

    def reroot(self, d):
        return LinkDiagram(self.shadow.reroot(d), self.over_bits)

    def flip(self, v):
        bits = list(self.over_bits)
        bits[v] ^= 1
        return LinkDiagram(self.shadow, tuple(bits))


@dataclass(frozen=True)
class FaceTypeVector:
    """``counts[i]`` is the number of faces of degree ``i`` (index 0 unused)."""

    counts: tuple

    def __getitem__(self, i):
        return self.counts[i] if 0 <= i < len(self.counts) else 0

    @property
    def n(self):
        return sum(i * c for i, c in enumerate(self.counts)) // 4

    def as_list(self, start=2, stop=None):
        stop = 3 * self.n if stop is None else stop
        return [self[i] for i in range(start, stop + 1)]

    def sort_key(self):
        return tuple(self.counts[2:])


def face_type(d):
    m = d.shadow if isinstance(d, LinkDiagram) else d
    n = m.n_vertices
    counts = [0] * (4 * n + 1)
    for k in m.face_degrees():
        counts[k] += 1
    ft = FaceTypeVector(tuple(counts))
    assert sum(counts) == n + 2 and sum(i * c for i, c in enumerate(counts)) == 4 * n
    return ft


def pretzel_shadow(columns):
    """Shadow of a pretzel diagram: vertical twist columns joined in a ring.

    Crossing slots are NE, NW, SW, SE (counterclockwise).  Within a column,
    SW and SE of one crossing meet NW and NE of the next; the top of column
    ``i`` joins the top of column ``i + 1`` and likewise at the bottom.  The
    root is the NE dart of the first crossing.
    """
    if not columns or any(k < 1 for k in columns):
        raise ValueError("need at least one column with at least one crossing")
    rot = []
    first = []
    for k in columns:
        first.append(len(rot))
        for _ in range(k):
            rot.append([None] * 4)
    label = 0

    def join(v, i, w, j):
        nonlocal label
        rot[v][i] = label
        rot[w][j] = label
        label += 1

    NE, NW, SW, SE = 0, 1, 2, 3
    c = len(columns)
    for ci, k in enumerate(columns):
        for j in range(k - 1):
            v = first[ci] + j
            join(v, SW, v + 1, NW)
            join(v, SE, v + 1, NE)
    for ci, k in enumerate(columns):
        nxt = (ci + 1) % c
        top, bot = first[ci], first[ci] + k - 1
        join(top, NE, first[nxt], NW)
        join(bot, SE, first[nxt] + columns[nxt] - 1, SW)
    return from_rotations(rot, root=(0, NE))


def torus_2n_shadow(n):
    """Standard T(2, n) shadow: a closed 2-braid, n crossings and n bigons."""
    return pretzel_shadow([1] * n)


@lru_cache(maxsize=None)
def _torus_signatures(n):
    m = torus_2n_shadow(n)
    return frozenset(canonical_signature(m, r) for r in range(m.n_darts))


def is_torus_2n(d):
    """True iff the shadow is a rooting of the standard T(2, n) shadow.

    This is a statement about the shadow; classification into the torus
    class is only meaningful for alternating crossings.
    """
    m = d.shadow if isinstance(d, LinkDiagram) else d
    if not is_four_valent(m):
        return False
    return canonical_signature(m) in _torus_signatures(m.n_vertices)


def is_alternating(d):
    m = d.shadow
    return all(d.is_over(x) != d.is_over(m.alpha[x]) for x in range(m.n_darts))


def twist_number(d):
    """Crossings minus bigons, or 1 for the standard T(2, n) diagram.

    Only defined on 3-edge-connected shadows, where twist regions are
    exactly the maximal bigon chains.
    """
    if is_torus_2n(d):
        return 1
    if not edge_connectivity_at_least_3(d.shadow):
        raise ClassificationError("twist number needs a 3-edge-connected shadow")
    return d.n_crossings - face_type(d)[2]


def strand_cycles(m):
    """Cycles of x -> nu^2(alpha x): walk along an edge, then straight on."""
    n = m.n_darts
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
            y = m.alpha[x]
            x = m.nu[m.nu[y]]
        out.append(cyc)
    return out


def component_count(d):
    m = d.shadow if isinstance(d, LinkDiagram) else d
    return len(strand_cycles(m)) // 2


def classify(d):
    if is_torus_2n(d):
        return TORUS_2N
    if edge_connectivity_at_least_3(d.shadow) and is_alternating(d):
        return PRIME_ALTERNATING
    return GENERAL


def volume_bounds(d):
    kind = classify(d)
    if kind == GENERAL:
        raise ClassificationError("volume bounds need a prime alternating or T(2,n) diagram")
    if kind == TORUS_2N:
        return census.VolumeBounds(0.0, 0.0)
    return census.volume_bounds_from_twist(twist_number(d), d.n_crossings)


def alternating(m):
    from .sampler import assign_crossings

    return assign_crossings(m, "alternating")


def torus_2n(n):
    return alternating(torus_2n_shadow(n))


def hopf():
    return torus_2n(2)


def figure_eight_knot():
    return alternating(pretzel_shadow([2, 1, 1]))


def figure2_diagram():
    """Alternating 7-crossing diagram with three twist regions of 3, 2 and 2 crossings."""
    return alternating(pretzel_shadow([3, 2, 2]))


def diagram_signature(d):
    """Rooted-isomorphism invariant of a diagram (shadow plus crossing data)."""
    m = d.shadow
    label, order = _bfs_labels(m.alpha, m.nu, m.root)
    sig = list(canonical_signature(m))
    seen = set()
    for x in order:
        v = m.vertex_of[x]
        if v in seen:
            continue
        seen.add(v)
        sig.append(int(d.is_over(x)))
    return tuple(sig)


def _oriented_components(m):
    # each link component appears as two strand cycles, one per direction
    cycles = strand_cycles(m)
    where = {}
    for i, c in enumerate(cycles):
        for x in c:
            where[x] = i
    used = set()
    chosen = []
    starts = [m.root] + list(range(m.n_darts))
    for x in starts:
        i = where[x]
        if i in used:
            continue
        j = where[m.alpha[x]]
        used.update((i, j))
        c = cycles[i]
        k = c.index(x)
        chosen.append(c[k:] + c[:k])
    return chosen


def export_pd(d):
    """PD code: one ``X[a,b,c,d]`` per crossing, counterclockwise from the incoming under-strand.

    Edges are numbered 1, 2, ... along the oriented components, starting
    with the root dart's component at the root.
    """
    m = d.shadow
    edge_label = [0] * m.n_darts
    outgoing = [False] * m.n_darts
    k = 1
    for comp in _oriented_components(m):
        for x in comp:
            edge_label[x] = edge_label[m.alpha[x]] = k
            outgoing[x] = True
            k += 1
    parts = []
    for cyc in m.vertex_cycles:
        start = None
        for y in cyc:
            if not outgoing[y] and not d.is_over(y):
                start = y
                break
        labs = []
        y = start
        for _ in range(4):
            labs.append(edge_label[y])
            y = m.nu[y]
        parts.append("X[" + ",".join(map(str, labs)) + "]")
    return "PD[" + ", ".join(parts) + "]"


_X = re.compile(r"X\[\s*(-?\d+)\s*,\s*(-?\d+)\s*,\s*(-?\d+)\s*,\s*(-?\d+)\s*\]")


def _parse_crossings(text):
    if isinstance(text, (list, tuple)):
        xs = [tuple(int(a) for a in x) for x in text]
    else:
        s = text.strip()
        if not (s.startswith("PD[") and s.endswith("]")):
            raise PDFormatError("expected PD[X[...], ...]")
        body = s[3:-1]
        xs = [tuple(int(a) for a in g) for g in _X.findall(body)]
        leftover = _X.sub("", body).replace(",", "").strip()
        if leftover:
            raise PDFormatError(f"unexpected text in PD code: {leftover[:30]!r}")
    if not xs or any(len(x) != 4 for x in xs):
        raise PDFormatError("every crossing needs exactly four labels")
    return xs


def parse_pd(text):
    """Inverse of :func:`export_pd` (also accepts a list of 4-tuples).

    Positions 0 and 2 of each crossing are the under-strand.  The root is
    the outgoing end of edge 1 (the least label).
    """
    xs = _parse_crossings(text)
    n = 4 * len(xs)
    occ = {}
    for k, x in enumerate(xs):
        for i, lab in enumerate(x):
            occ.setdefault(lab, []).append(4 * k + i)
    alpha = [0] * n
    for lab, ds in occ.items():
        if len(ds) != 2:
            raise PDFormatError(f"label {lab} occurs {len(ds)} times")
        a, b = ds
        alpha[a], alpha[b] = b, a
    nu = [4 * (d // 4) + (d % 4 + 1) % 4 for d in range(n)]
    try:
        m = RootedMap(alpha, nu, 0)
    except InvalidMapError as e:
        raise PDFormatError(f"PD code does not describe a planar diagram: {e}") from None

    def lab(d):
        return xs[d // 4][d % 4]

    # orientation: position 2 leaves a crossing along the under-strand
    outgoing = [None] * n

    def orient(x):
        # x outgoing; propagate along its strand cycle
        while outgoing[x] is None:
            outgoing[x] = True
            outgoing[alpha[x]] = False
            y = alpha[x]
            x = nu[nu[y]]

    for k in range(len(xs)):
        if outgoing[4 * k + 2] is None:
            orient(4 * k + 2)
    for d in range(n):
        if outgoing[d] is None:
            # strand passes over everywhere; orient by increasing labels
            e = nu[nu[d]]
            a, b = lab(d), lab(e)
            # d arrives on edge a, e leaves on edge a + 1 (or wraps around)
            orient(e if b == a + 1 or (a > b + 1) else d)
    root = min((d for d in range(n) if outgoing[d]), key=lambda d: (lab(d), d))
    m = RootedMap._trusted(m.alpha, m.nu, root)
    return LinkDiagram(m, (0,) * len(xs))


def to_json(d, **extra):
    m = d.shadow
    doc = {"n_darts": m.n_darts, "alpha": list(m.alpha), "nu": list(m.nu),
           "root": m.root, "crossings": list(d.over_bits)}
    doc.update(extra)
    return json.dumps(doc, separators=(",", ":"))


def from_json(text):
    doc = json.loads(text) if isinstance(text, str) else text
    m = RootedMap(doc["alpha"], doc["nu"], doc["root"])
    if "crossings" not in doc:
        raise InvalidMapError("diagram JSON needs a crossings array")
    return LinkDiagram(m, tuple(doc["crossings"]))
