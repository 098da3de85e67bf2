import itertools
import json

import pytest
from hypothesis import given, settings, strategies as st

from linklab import cmap
from linklab.cmap import RootedMap
from linklab.errors import InvalidMapError, SizeLimitError


def _components(n_vertices, edges):
    parent = list(range(n_vertices))

    def find(x):
        while parent[x] != x:
            x = parent[x]
        return x

    for a, b in edges:
        parent[find(a)] = find(b)
    return len({find(v) for v in range(n_vertices)})


def brute_force_3ec(m):
    """Oracle: delete every set of one or two edges and test connectivity."""
    vo = m.vertex_of
    edges = [(vo[d], vo[m.alpha[d]]) for d in range(m.n_darts) if d < m.alpha[d]]
    for k in (1, 2):
        for cut in itertools.combinations(range(len(edges)), k):
            rest = [e for i, e in enumerate(edges) if i not in cut]
            if _components(m.n_vertices, rest) > 1:
                return False
    return True


def figure_eight_shadow():
    from linklab.diagram import figure_eight_knot
    return figure_eight_knot().shadow


@pytest.fixture(scope="module")
def q4():
    return cmap.enumerate_all(4)


def test_rejects_non_involution():
    with pytest.raises(InvalidMapError):
        RootedMap((1, 2, 0), (0, 1, 2), 0)


def test_rejects_disconnected():
    with pytest.raises(InvalidMapError):
        RootedMap((1, 0, 3, 2), (0, 1, 2, 3), 0)


def test_rejects_nonplanar():
    # one vertex, two interleaved loops: a torus map
    with pytest.raises(InvalidMapError):
        RootedMap((2, 3, 0, 1), (1, 2, 3, 0), 0)


def test_root_out_of_range():
    with pytest.raises(InvalidMapError):
        RootedMap((1, 0), (0, 1), 5)


def test_single_edge_counts():
    m = RootedMap((1, 0), (0, 1), 0)
    assert (m.n_vertices, m.n_edges, m.n_faces) == (2, 1, 1)


def test_euler_on_enumeration(q4):
    for m in q4:
        assert m.n_vertices - m.n_edges + m.n_faces == 2
        assert cmap.is_four_valent(m)


def test_dual_is_involution(q4):
    for m in q4[:100]:
        d = cmap.dual(m)
        assert cmap.is_quadrangulation(d)
        assert cmap.dual(d) == m


def test_root_face_contains_root(q4):
    for m in q4[:50]:
        rf = cmap.root_face(m)
        assert rf[0] == m.root
        assert m.face_of[m.root] == m.face_of[rf[-1]]


def test_faces_partition_darts(q4):
    for m in q4[:50]:
        darts = sorted(d for f in cmap.faces(m) for d in f)
        assert darts == list(range(m.n_darts))


def test_from_rotations_figure_eight():
    m = figure_eight_shadow()
    assert m.degrees() == [4, 4, 4, 4]
    assert sorted(m.face_degrees()) == [2, 2, 3, 3, 3, 3]


def test_from_rotations_theta():
    # theta graph: two vertices joined by three edges
    m = cmap.from_rotations([[0, 1, 2], [2, 1, 0]])
    assert (m.n_vertices, m.n_edges, m.n_faces) == (2, 3, 3)


def test_medial_is_four_valent():
    for m in cmap.enumerate_all(3, four_valent=False):
        med = cmap.medial(m)
        assert cmap.is_four_valent(med)
        assert med.n_vertices == m.n_edges
        assert med.n_faces == m.n_vertices + m.n_faces


def test_medial_of_nonseparable_is_3ec():
    # medial bijection: nonseparable maps give 3-edge-connected 4-valent maps
    for m in cmap.enumerate_all(4, four_valent=False):
        if m.n_edges > 1 and cmap.is_nonseparable(m):
            assert cmap.edge_connectivity_at_least_3(cmap.medial(m))


def test_tutte_opening_bijection():
    # Q(n) rooted quadrangulations <-> rooted maps with n edges, 2, 9, 54
    for n, expected in [(1, 2), (2, 9), (3, 54)]:
        maps = cmap.enumerate_all(n, four_valent=False)
        assert len({cmap.canonical_signature(m) for m in maps}) == expected
        assert all(m.n_edges == n for m in maps)


@pytest.mark.parametrize("n,expected", [(1, 2), (2, 9), (3, 54), (4, 378)])
def test_enumeration_counts(n, expected):
    maps = cmap.enumerate_all(n)
    assert len(maps) == expected
    assert len({cmap.canonical_signature(m) for m in maps}) == expected


def test_enumeration_cap():
    with pytest.raises(SizeLimitError):
        cmap.enumerate_all(6)


@pytest.mark.parametrize("n,expected", [(2, 1), (3, 2), (4, 6), (5, 22)])
def test_sq_enumeration(n, expected):
    assert len(cmap.enumerate_sq(n)) == expected


def test_three_edge_connectivity_matches_brute_force():
    for n in (2, 3, 4):
        for m in cmap.enumerate_all(n):
            assert cmap.edge_connectivity_at_least_3(m) == brute_force_3ec(m)


def test_canonical_form_invariant_under_relabel(q4):
    import random
    rnd = random.Random(4)
    for m in q4[::17]:
        sigma = list(range(m.n_darts))
        rnd.shuffle(sigma)
        assert cmap.canonical_form(m.relabel(sigma)) == cmap.canonical_form(m)
        assert cmap.is_isomorphic(m, m.relabel(sigma))


def test_rerooting_changes_rooted_class():
    m = figure_eight_shadow()
    sigs = set(cmap.rooting_signatures(m))
    assert len(sigs) * cmap.automorphism_count(m) == m.n_darts


def test_asymmetric_flag():
    m = figure_eight_shadow()
    assert not cmap.is_asymmetric(m)
    asym = [x for x in cmap.enumerate_all(4) if cmap.is_asymmetric(x)]
    assert asym and all(cmap.automorphism_count(x) == 1 for x in asym)


def test_json_round_trip(q4):
    m = q4[123]
    text = cmap.to_json(m)
    assert json.loads(text)["n_darts"] == 16
    assert cmap.from_json(text) == m


def test_json_rejects_bad_length():
    with pytest.raises(InvalidMapError):
        cmap.from_json('{"n_darts": 4, "alpha": [1, 0], "nu": [0, 1], "root": 0}')


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 377), st.integers(0, 15))
def test_property_reroot_and_dual(i, r):
    m = cmap.enumerate_all(4)[i].reroot(r)
    d = cmap.dual(m)
    assert d.n_vertices == m.n_faces and d.n_faces == m.n_vertices
    assert cmap.dual(d) == m
    assert cmap.canonical_signature(m) == cmap.canonical_signature(m.reroot(r))
