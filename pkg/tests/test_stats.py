import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from scipy import stats as sps

from linklab.stats import MomentAccumulator, normalized_histogram, summarize


def test_matches_scipy():
    x = np.random.default_rng(1).gamma(2.0, size=5000)
    s = summarize(x)
    assert s.count == 5000
    assert s.mean == pytest.approx(x.mean(), rel=1e-12)
    assert s.variance == pytest.approx(x.var(ddof=1), rel=1e-12)
    assert s.skewness == pytest.approx(sps.skew(x, bias=True), rel=1e-10)
    assert s.m4 == pytest.approx(sps.kurtosis(x, fisher=False, bias=True), rel=1e-10)
    z = (x - x.mean()) / x.std()
    assert s.m5 == pytest.approx(np.mean(z**5), rel=1e-10)
    assert (s.min, s.max) == (x.min(), x.max())


def test_closed_form_bernoulli_skewness():
    # Bernoulli(1/4) repeated exactly: g1 = (1 - 2p) / sqrt(p (1 - p))
    x = [1, 0, 0, 0] * 250
    p = 0.25
    assert summarize(x).skewness == pytest.approx((1 - 2 * p) / np.sqrt(p * (1 - p)), abs=1e-12)


def test_constant_has_zero_variance():
    s = summarize([3.5] * 100)
    assert s.variance == 0 and s.skewness == 0
    assert s.std == 0


def test_empty_and_singleton():
    assert summarize([]).count == 0
    s = summarize([2.0])
    assert s.variance == 0 and s.sem() == float("inf")


@settings(max_examples=50, deadline=None)
@given(st.lists(st.floats(-1e3, 1e3), min_size=2, max_size=60), st.integers(0, 60))
def test_merge_equals_single_pass(values, cut):
    cut = min(cut, len(values))
    a = MomentAccumulator().extend(values[:cut])
    b = MomentAccumulator().extend(values[cut:])
    whole = summarize(values)
    merged = a.merge(b).summary()
    assert merged.count == whole.count
    assert merged.mean == pytest.approx(whole.mean, abs=1e-9)
    assert merged.variance == pytest.approx(whole.variance, rel=1e-7, abs=1e-7)


def test_merge_is_order_independent():
    rng = np.random.default_rng(5)
    parts = [rng.normal(size=k) for k in (10, 200, 33)]
    accs = [MomentAccumulator().extend(p) for p in parts]
    ab = MomentAccumulator().merge(accs[0]).merge(accs[1]).merge(accs[2]).summary()
    ba = MomentAccumulator().merge(accs[2]).merge(accs[0]).merge(accs[1]).summary()
    for f in ("mean", "variance", "skewness", "m4", "m5"):
        assert getattr(ab, f) == pytest.approx(getattr(ba, f), rel=1e-12, abs=1e-14)


def test_normalized_histogram():
    x = np.random.default_rng(2).normal(5, 3, size=10000)
    edges, dens = normalized_histogram(x, 30)
    assert len(edges) == 31
    assert float(np.sum(dens * np.diff(edges))) == pytest.approx(1.0)
    assert abs(edges[0] + edges[-1]) < 2
