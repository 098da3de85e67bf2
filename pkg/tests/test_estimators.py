import numpy as np
import pytest
from sklearn.base import clone
from sklearn.pipeline import make_pipeline

from linklab import diagram as dg
from linklab.estimators import DiagramFeatures, DiagramSampler, FaceTypeTransformer, MomentSummary


@pytest.mark.parametrize("cls", ["q4v", "sq", "alternating", "uniform"])
def test_sampler_classes(cls):
    ds = DiagramSampler(n=7, diagram_class=cls, seed=3).fit().sample(5)
    assert len(ds) == 5 and all(d.n_crossings == 7 for d in ds)
    if cls != "uniform":
        assert all(dg.is_alternating(d) for d in ds)


def test_sampler_deterministic_and_clonable():
    a = DiagramSampler(n=6, seed=11)
    b = clone(a)
    sa = [dg.diagram_signature(d) for d in a.fit().sample(4)]
    sb = [dg.diagram_signature(d) for d in b.fit().sample(4)]
    assert sa == sb
    assert b.get_params()["n"] == 6


def test_sampler_rejects_unknown_class():
    with pytest.raises(ValueError):
        DiagramSampler(diagram_class="nope").fit()


def test_face_type_transformer():
    ds = DiagramSampler(n=6, seed=1).fit().sample(10)
    X = FaceTypeTransformer().fit_transform(ds)
    assert X.shape == (10, 17)
    assert (X.sum(axis=1) == 8).all()


def test_features_pipeline():
    ds = [dg.torus_2n(5), dg.figure2_diagram(), dg.figure_eight_knot().flip(0)]
    X = DiagramFeatures().fit_transform(ds)
    assert X.shape == (3, 6)
    assert X[0, 2] == 1 and X[0, 4] == 0 and X[0, 5] == 0
    assert X[1, 2] == 3
    assert np.isnan(X[2, 4])


def test_moment_summary_partial_fit():
    rng = np.random.default_rng(0)
    x = rng.normal(size=1000)
    full = MomentSummary().fit(x).summary_
    part = MomentSummary().partial_fit(x[:400]).partial_fit(x[400:]).summary_
    assert part.mean == pytest.approx(full.mean)
    assert part.skewness == pytest.approx(full.skewness)


def test_pipeline_of_features_and_summary():
    ds = DiagramSampler(n=8, seed=2).fit().sample(20)
    pipe = make_pipeline(DiagramFeatures())
    bigons = pipe.fit_transform(ds)[:, 1]
    assert MomentSummary().fit(bigons).summary_.count == 20
