import math

import numpy as np
import pytest
from sklearn.base import clone
from sklearn.exceptions import NotFittedError

from steiner_soddy.chain import Regime
from steiner_soddy.estimators import ConicFitter, LocusClassifier, PorismSweepTransformer
from steiner_soddy.geom import ConicKind
from steiner_soddy.loci import LocusKind

ELLIPSE_PTS = np.column_stack([2 * np.cos(np.linspace(0, 6, 40)), np.sin(np.linspace(0, 6, 40))])


def test_conic_fitter():
    est = ConicFitter().fit(ELLIPSE_PTS)
    assert est.kind_ == ConicKind.ELLIPSE and est.residual_ < 1e-10
    assert est.transform(ELLIPSE_PTS).shape == (40, 1)
    assert est.score(ELLIPSE_PTS) > -1e-10
    assert est.score(ELLIPSE_PTS + 0.1) < -1e-3


def test_classifier():
    pts = np.column_stack([np.linspace(-1, 1, 50), np.full(50, 2.0)])
    assert LocusClassifier().fit_predict(pts) == LocusKind.SEGMENT
    assert LocusClassifier().fit(ELLIPSE_PTS).kind_ == LocusKind.CONIC


def test_params_and_clone():
    est = PorismSweepTransformer(n=4, x0=0.2)
    copy = clone(est)
    assert copy.get_params() == est.get_params() and copy is not est
    copy.set_params(lam=0.5)
    assert copy.lam == 0.5 and est.lam == 1


def test_not_fitted():
    with pytest.raises(NotFittedError):
        PorismSweepTransformer().transform(np.zeros((2, 1)))


def test_transform_shape_and_names():
    est = PorismSweepTransformer(n=4, x0=0.2).fit(None)
    X = est.transform(np.linspace(0.01, 1.0, 7).reshape(-1, 1))
    assert X.shape == (7, est.n_features_out_) == (7, 4 * 4 + 3 + 3)
    assert len(est.get_feature_names_out()) == X.shape[1]
    assert est.regime_ == Regime.ELLIPSE


def test_tau_feature_symmetric():
    est = PorismSweepTransformer(n=3, x0=0.0).fit(None)
    names = list(est.get_feature_names_out())
    X = est.transform(np.array([[0.1], [0.9]]))
    assert np.allclose(X[:, names.index("S1")], math.sqrt(3), atol=1e-12)
