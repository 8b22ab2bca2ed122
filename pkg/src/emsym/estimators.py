"""scikit-learn style front ends.

The estimators follow the usual conventions: constructor arguments are
stored untouched, ``fit`` validates them and sets attributes with a trailing
underscore, and ``get_params``/``set_params``/``clone`` work as usual.
"""

from __future__ import annotations

import numpy as np
from sklearn.base import BaseEstimator, TransformerMixin
from sklearn.utils.validation import check_is_fitted

from . import _validation as v
from .audit import classify
from .matching import MATCH_TOL, match_basis
from .optimal import DegenerateGenerator, canonicalize1D
from .verify import DEFAULT_TOL


class SymmetryDetector(TransformerMixin, BaseEstimator):
    """Detect the point-symmetry algebra of each field.

    ``transform`` gives one row per field: dimension, Noether dimension and
    log10 of the singular-value gap. ``predict`` returns the best catalog
    label or an empty string.
    """

    def __init__(self, n_points: int = 40, tol: float = DEFAULT_TOL, seed: int = 0, match: bool = True):
        self.n_points = n_points
        self.tol = tol
        self.seed = seed
        self.match = match

    def _check_params(self):
        v.check_int("n_points", self.n_points, minimum=8)
        v.check_positive("tol", self.tol)
        v.check_int("seed", self.seed)

    def fit(self, X, y=None):
        self._check_params()
        fields = v.check_fields(X)
        self.reports_ = [classify(f, self.tol, self.seed, self.n_points, self.match) for f in fields]
        self._fitted_ids = [id(f) for f in fields]
        self.n_fields_ = len(fields)
        return self

    def _reports(self, X):
        check_is_fitted(self, "reports_")
        fields = v.check_fields(X)
        if [id(f) for f in fields] == self._fitted_ids:
            return self.reports_  # same objects as in fit; FieldSpecs are immutable
        return [classify(f, self.tol, self.seed, self.n_points, self.match) for f in fields]

    def transform(self, X):
        out = []
        for r in self._reports(X):
            gap = r.detection.gap_ratio
            out.append([r.dimension, r.detection.noether_dimension,
                        np.log10(gap) if np.isfinite(gap) and gap > 0 else np.inf])
        return np.array(out, dtype=float)

    def predict(self, X):
        return np.array([(r.match or {}).get("best") or "" for r in self._reports(X)], dtype=object)

    @property
    def bases_(self) -> list:
        check_is_fitted(self, "reports_")
        return [r.detection.echelon for r in self.reports_]


class Canonicalizer1D(TransformerMixin, BaseEstimator):
    """Map one-dimensional generators to their optimal-system representatives.

    ``transform`` returns the representative coefficients (n, 9) and
    ``predict`` the row index (0 for degenerate input).
    """

    def __init__(self, tol: float = 1e-12, remove_gauge: bool = False):
        self.tol = tol
        self.remove_gauge = remove_gauge

    def fit(self, X=None, y=None):
        v.check_positive("tol", self.tol)
        self.fitted_ = True
        return self

    def canonical_classes(self, X) -> list:
        """CanonicalClass1D per generator, None where degenerate."""
        check_is_fitted(self, "fitted_")
        out = []
        for g in v.check_generators(X):
            try:
                cc = canonicalize1D(g, self.tol, self.remove_gauge)
            except DegenerateGenerator:
                cc = None
            out.append(None if cc is None or cc.degenerate else cc)
        return out

    def transform(self, X):
        rows = []
        for cc in self.canonical_classes(X):
            rows.append([np.nan] * 9 if cc is None else [float(c) for c in cc.representative.c])
        return np.array(rows)

    def predict(self, X):
        return np.array([0 if cc is None else cc.class_id for cc in self.canonical_classes(X)], dtype=int)


class TableMatcher(BaseEstimator):
    """Match detected bases (rows of c1..c8) against the catalog tables."""

    def __init__(self, family: str = "sym", tol: float = MATCH_TOL, seed: int = 0):
        self.family = family
        self.tol = tol
        self.seed = seed

    def fit(self, X=None, y=None):
        v.check_choice("family", self.family, ("sym", "noe"))
        v.check_positive("tol", self.tol)
        v.check_int("seed", self.seed)
        self.fitted_ = True
        return self

    def match(self, X) -> list:
        check_is_fitted(self, "fitted_")
        return [match_basis(b, self.family, self.tol, self.seed) for b in v.check_bases(X)]

    def predict(self, X):
        return np.array([m.best.label if m.best else "" for m in self.match(X)], dtype=object)


__all__ = ["Canonicalizer1D", "SymmetryDetector", "TableMatcher"]
