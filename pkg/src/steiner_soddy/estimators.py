"""scikit-learn style wrappers around the fitting and sweep layers.

The geometry has no training data in the usual sense. The wrappers give the
point-set fits and the phase sweep the familiar ``fit``/``transform``
surface so they slot into pipelines and ``get_params``/``set_params``
tooling.
"""

import numpy as np
from sklearn.base import BaseEstimator, TransformerMixin
from sklearn.utils.validation import check_array, check_is_fitted

from .chain import PorismConfig, chain_at, classify_regime
from .geom import GeometryError, Point, conic_from_points
from .invariants import half_tangents
from .loci import classify_locus
from .tolerances import DEFAULT, Tolerances


def _points(X):
    X = check_array(X, dtype=float)
    if X.shape[1] != 2:
        raise ValueError(f"expected points of shape (n, 2), got {X.shape}")
    return [Point(float(x), float(y)) for x, y in X]


class ConicFitter(BaseEstimator):
    """Least-squares conic through 2-D points.

    Parameters
    ----------
    tol : float
        Relative tolerance of the type classification.

    Attributes
    ----------
    coef_ : ndarray of shape (6,)
        Unit-norm ``A, B, C, D, E, F`` of ``A x^2 + B xy + C y^2 + D x + E y + F``.
    kind_ : str
        ``Ellipse``, ``Circle``, ``Parabola`` or ``Hyperbola``.
    residual_ : float
        Normalized fit residual.
    """

    def __init__(self, tol=DEFAULT.classification):
        self.tol = tol

    def fit(self, X, y=None):
        conic = conic_from_points(_points(X), tol=self.tol)
        self.conic_ = conic
        self.coef_ = np.asarray(conic.coef)
        self.kind_ = conic.kind.value
        self.residual_ = float(conic.residual)
        return self

    def transform(self, X):
        """Algebraic residual of each point on the fitted conic."""
        check_is_fitted(self, "coef_")
        return np.asarray(self.conic_.evaluate(check_array(X, dtype=float)), dtype=float).reshape(-1, 1)

    def score(self, X, y=None):
        """Negative largest absolute residual (higher is better)."""
        return -float(np.max(np.abs(self.transform(X))))


class LocusClassifier(BaseEstimator):
    """Stationary / Segment / Circle / Conic / Other classification of a point set.

    Parameters
    ----------
    tolerances : Tolerances or None
        Thresholds of the cascade; ``None`` uses the default profile.

    Attributes
    ----------
    kind_ : str
    params_ : dict
    fit_residual_ : float
    """

    def __init__(self, tolerances=None):
        self.tolerances = tolerances

    def fit(self, X, y=None):
        tol = self.tolerances if isinstance(self.tolerances, Tolerances) else DEFAULT
        res = classify_locus(_points(X), tol)
        self.result_ = res
        self.kind_ = res.kind.value
        self.params_ = dict(res.params)
        self.fit_residual_ = float(res.fit_residual)
        return self

    def fit_predict(self, X, y=None):
        return self.fit(X).kind_


class PorismSweepTransformer(TransformerMixin, BaseEstimator):
    """Map phases to per-phase features of one porism configuration.

    Each input row is a phase ``t``. Output columns: vertex coordinates,
    contact coordinates, caustic ``Ix, Iy, r``, then the signed half-tangent
    power sums for ``k = 1 .. n-1`` (the first is ``tau``). Phases where
    the chain degenerates give a row of ``nan``.
    """

    def __init__(self, n=3, r=1.0, x0=0.1, lam=1.0):
        self.n = n
        self.r = r
        self.x0 = x0
        self.lam = lam

    def fit(self, X=None, y=None):
        self.config_ = PorismConfig(self.n, self.r, self.x0, self.lam)
        self.regime_ = classify_regime(self.config_).value
        self.n_features_out_ = 4 * self.config_.n + 3 + (self.config_.n - 1)
        return self

    def get_feature_names_out(self, input_features=None):
        check_is_fitted(self, "config_")
        n = self.config_.n
        names = [f"{a}{i}" for i in range(n) for a in ("x", "y")]
        names += [f"p{a}{i}" for i in range(n) for a in ("x", "y")]
        names += ["Ix", "Iy", "r"] + [f"S{k}" for k in range(1, n)]
        return np.asarray(names, dtype=object)

    def transform(self, X):
        check_is_fitted(self, "config_")
        X = check_array(X, dtype=float)
        if X.shape[1] != 1:
            raise ValueError("expected a single column of phases")
        cfg = self.config_
        out = np.full((X.shape[0], self.n_features_out_), np.nan)
        for row, t in enumerate(X[:, 0]):
            try:
                ch = chain_at(cfg, float(t))
                h = half_tangents(cfg, float(t), ch)
            except GeometryError:
                continue
            feats = [c for p in ch.centers for c in p] + [c for p in ch.contacts for c in p]
            feats += [ch.caustic.center.x, ch.caustic.center.y, ch.caustic.radius]
            feats += [float(np.sum(h ** k)) for k in range(1, cfg.n)]
            out[row] = feats
        return out
