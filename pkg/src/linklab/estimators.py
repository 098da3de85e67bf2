"""scikit-learn style wrappers around the samplers and diagram statistics.

These let the experiment pieces sit inside ordinary sklearn pipelines:
``DiagramSampler`` produces diagrams, ``DiagramFeatures`` turns diagrams
into a numeric matrix, and ``MomentSummary`` accumulates moments with
``partial_fit`` across batches.
"""

import numpy as np
from sklearn.base import BaseEstimator, TransformerMixin

from . import diagram as dg
from .cmap import edge_connectivity_at_least_3
from .errors import ClassificationError
from .sampler import RandomStream, assign_crossings, sample_four_valent, sample_sq
from .stats import MomentAccumulator

__all__ = ["DiagramSampler", "FaceTypeTransformer", "DiagramFeatures", "MomentSummary",
           "DIAGRAM_CLASSES"]

DIAGRAM_CLASSES = ("q4v", "sq", "alternating", "uniform")


class DiagramSampler(BaseEstimator):
    """Draws link diagrams of one class.

    ``q4v`` gives uniform 4-valent maps with alternating crossings;
    ``sq`` and ``alternating`` give alternating diagrams on uniform SQ(n)
    shadows; ``uniform`` flips a fair coin per crossing on a uniform
    4-valent shadow.
    """

    def __init__(self, n=10, diagram_class="alternating", seed=0, stream_id=0, max_tries=10**9):
        self.n = n
        self.diagram_class = diagram_class
        self.seed = seed
        self.stream_id = stream_id
        self.max_tries = max_tries

    def fit(self, X=None, y=None):
        if self.diagram_class not in DIAGRAM_CLASSES:
            raise ValueError(f"unknown diagram class {self.diagram_class!r}")
        self.stream_ = RandomStream(self.seed, self.stream_id)
        return self

    def sample(self, count):
        if not hasattr(self, "stream_"):
            self.fit()
        s = self.stream_
        out = []
        for _ in range(count):
            if self.diagram_class in ("sq", "alternating"):
                m = sample_sq(self.n, s, self.max_tries)
                out.append(assign_crossings(m, "alternating"))
            elif self.diagram_class == "q4v":
                out.append(assign_crossings(sample_four_valent(self.n, s), "alternating"))
            else:
                m = sample_four_valent(self.n, s)
                out.append(assign_crossings(m, "uniform", s))
        return out


class FaceTypeTransformer(BaseEstimator, TransformerMixin):
    """Diagrams -> rows (F_2, F_3, ..., F_max)."""

    def __init__(self, max_degree=None):
        self.max_degree = max_degree

    def fit(self, X, y=None):
        if self.max_degree is not None:
            self.max_degree_ = self.max_degree
        else:
            self.max_degree_ = max(3 * d.n_crossings for d in X)
        return self

    def transform(self, X):
        rows = [dg.face_type(d).as_list(2, self.max_degree_) for d in X]
        return np.asarray(rows, dtype=np.int64)


class DiagramFeatures(BaseEstimator, TransformerMixin):
    """Diagrams -> (crossings, bigons, twist, components, lower, upper).

    Twist and bounds are NaN where they are not defined (shadow not
    3-edge-connected, or crossings not alternating).
    """

    columns = ("n", "bigons", "twist", "components", "lower_bound", "upper_bound")

    def fit(self, X, y=None):
        return self

    def transform(self, X):
        rows = []
        for d in X:
            ft = dg.face_type(d)
            twist = lo = hi = np.nan
            if dg.is_torus_2n(d) or edge_connectivity_at_least_3(d.shadow):
                twist = dg.twist_number(d)
            try:
                b = dg.volume_bounds(d)
                lo, hi = b.lower, b.upper
            except ClassificationError:
                pass
            rows.append((d.n_crossings, ft[2], twist, dg.component_count(d), lo, hi))
        return np.asarray(rows, dtype=float)


class MomentSummary(BaseEstimator):
    """Mean, variance, skewness and standardized 4th/5th moments of a 1-D sample."""

    def fit(self, X, y=None):
        self.acc_ = MomentAccumulator()
        return self.partial_fit(X)

    def partial_fit(self, X, y=None):
        if not hasattr(self, "acc_"):
            self.acc_ = MomentAccumulator()
        self.acc_.extend(np.ravel(np.asarray(X, dtype=float)))
        self.summary_ = self.acc_.summary()
        return self
