import itertools
import math
from collections import Counter

import numpy as np
import pytest
from scipy import stats as sps

from linklab import cmap, census, diagram as dg
from linklab.errors import EmptyTreeError, FeasibilityError, RejectionBudgetError
from linklab.sampler import (LabeledTree, RandomStream, assign_crossings, closure,
                             sample_four_valent, sample_labeled_tree, sample_plane_tree,
                             sample_quadrangulation, sample_sq, sq_face_degrees)


def dyck_words(n):
    for ups in itertools.combinations(range(2 * n), n):
        word = [0] * (2 * n)
        for i in ups:
            word[i] = 1
        h = 0
        ok = True
        for s in word:
            h += 1 if s else -1
            if h < 0:
                ok = False
                break
        if ok:
            yield tuple(word)


def all_labeled_trees(n):
    for word in dyck_words(n):
        parents = LabeledTree(word, (0,) * (n + 1)).parents()
        for inc in itertools.product((-1, 0, 1), repeat=n):
            labels = [0] * (n + 1)
            for v in range(1, n + 1):
                labels[v] = labels[parents[v]] + inc[v - 1]
            for eps in (1, -1):
                yield LabeledTree(word, tuple(labels), eps)


@pytest.mark.parametrize("n", [1, 2, 3])
def test_closure_is_n_plus_2_to_one(n):
    # every rooted quadrangulation has n + 2 pointings, each hit exactly once
    counts = Counter(cmap.canonical_signature(closure(t)) for t in all_labeled_trees(n))
    assert len(counts) == census.count_q(n)
    assert set(counts.values()) == {n + 2}


def test_closure_outputs_are_quadrangulations():
    s = RandomStream(11)
    for n in (1, 5, 40, 200):
        q = closure(sample_labeled_tree(n, s))
        assert cmap.is_quadrangulation(q)
        assert (q.n_faces, q.n_vertices) == (n, n + 2)


def test_labeled_tree_validation():
    with pytest.raises(ValueError):
        LabeledTree((1, 0), (0, 2))
    with pytest.raises(ValueError):
        LabeledTree((0, 1), (0, 0))
    with pytest.raises(ValueError):
        LabeledTree((1, 0), (0, 1), epsilon=0)


def test_labeled_tree_parenthesized():
    t = LabeledTree((1, 1, 0, 0, 1, 0), (0, 1, 0, -1))
    assert t.parenthesized() == "(())()"
    assert t.parents() == [-1, 0, 1, 0]
    assert t.increments() == [1, -1, -1]


def test_empty_tree():
    with pytest.raises(EmptyTreeError):
        sample_plane_tree(0)
    with pytest.raises(EmptyTreeError):
        sample_quadrangulation(0)


def test_plane_tree_uniform_small():
    s = RandomStream(5)
    counts = Counter(sample_plane_tree(3, s).contour for _ in range(5000))
    assert len(counts) == 5
    assert sps.chisquare(list(counts.values())).pvalue > 1e-3


def test_determinism_and_streams():
    a = [cmap.canonical_signature(sample_quadrangulation(20, RandomStream(3, 1)))]
    b = [cmap.canonical_signature(sample_quadrangulation(20, RandomStream(3, 1)))]
    c = [cmap.canonical_signature(sample_quadrangulation(20, RandomStream(3, 2)))]
    assert a == b
    assert a != c


def test_integer_seed_accepted():
    assert sample_quadrangulation(6, 9) == sample_quadrangulation(6, RandomStream(9))
    with pytest.raises(TypeError):
        sample_quadrangulation(6, "seed")


def test_quadrangulation_uniform_q2():
    s = RandomStream(21)
    sigs = {cmap.canonical_signature(cmap.dual(m)) for m in cmap.enumerate_all(2)}
    counts = Counter(cmap.canonical_signature(sample_quadrangulation(2, s)) for _ in range(9000))
    assert set(counts) == sigs
    assert sps.chisquare(list(counts.values())).pvalue > 1e-3


def test_four_valent_sampler():
    m = sample_four_valent(30, RandomStream(2))
    assert cmap.is_four_valent(m) and m.n_vertices == 30


def test_sq_outputs_are_3ec():
    s = RandomStream(8)
    for n in (2, 3, 6, 9):
        m = sample_sq(n, s)
        assert cmap.is_four_valent(m) and m.n_vertices == n
        assert cmap.edge_connectivity_at_least_3(m)


def test_sq_feasibility_cap():
    with pytest.raises(FeasibilityError):
        sample_sq(20)
    with pytest.raises(ValueError):
        sample_sq(1)


def test_sq_budget_error_reports_attempts():
    with pytest.raises(RejectionBudgetError) as info:
        sample_sq(14, RandomStream(1), max_tries=3)
    assert info.value.attempts == 3
    assert info.value.accepted == 0


@pytest.mark.parametrize("n", [8, 10])
def test_acceptance_rate_matches_census(n):
    # tries per accepted sample is geometric with mean |Q(n)| / |SQ(n)|
    s = RandomStream(40 + n)
    k = 150
    total = sum(sample_sq(n, s, return_tries=True)[1] for _ in range(k))
    p = census.count_sq(n) / census.count_q(n)
    mean, sd = 1 / p, math.sqrt(1 - p) / p / math.sqrt(k)
    assert abs(total / k - mean) < 3 * sd


def test_sq_face_degrees_rows():
    hist, tries = sq_face_degrees(6, 50, RandomStream(4))
    assert hist.shape == (50, 25)
    assert (hist.sum(axis=1) == 8).all()  # F = n + 2
    assert ((np.arange(25) * hist).sum(axis=1) == 24).all()  # sum of degrees = 4n
    assert tries >= 50


def test_alternating_assignment():
    s = RandomStream(13)
    for _ in range(20):
        d = assign_crossings(sample_four_valent(12, s), "alternating")
        assert dg.is_alternating(d)
        assert d.is_over(d.shadow.root)


def test_uniform_assignment_bits():
    d = assign_crossings(sample_four_valent(400, RandomStream(6)), "uniform", RandomStream(7))
    assert 150 < sum(d.over_bits) < 250


def test_assign_crossings_rejects_non_four_valent():
    with pytest.raises(ValueError):
        assign_crossings(cmap.from_rotations([[0, 1, 2], [2, 1, 0]]))
