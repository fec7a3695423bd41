"""scikit-learn style wrapper around the discriminant pipeline.

``fit`` takes the configuration matrix; ``transform`` and ``predict`` take
a batch of weight vectors (one per row) in the coordinates of its columns.
"""

import numpy as np
from sklearn.base import BaseEstimator, TransformerMixin
from sklearn.utils.validation import check_is_fitted

from .config import check_configuration
from .exceptions import DimensionMismatch, GenericityFailure
from .fan import membership, tropical_discriminant
from .initial import DEFAULT_BUDGET, ChainEngine, degree


def _as_weight_rows(W, n):
    arr = np.asarray(W, dtype=object)
    if arr.ndim == 1:
        arr = arr.reshape(1, -1)
    if arr.ndim != 2:
        raise DimensionMismatch("weights must be a 2-d array with one vector per row")
    if arr.shape[1] != n:
        raise DimensionMismatch(f"weight vectors have {arr.shape[1]} entries, expected {n}")
    rows = []
    for row in arr:
        out = []
        for x in row:
            if isinstance(x, (float, np.floating)):
                if not float(x).is_integer():
                    raise ValueError("non-integral float weights are ambiguous; pass Fractions")
                x = int(x)
            out.append(x)
        rows.append(tuple(out))
    return rows


class TropicalDiscriminant(BaseEstimator, TransformerMixin):
    """Tropical discriminant of an integer configuration.

    Parameters
    ----------
    max_flats : int or None
        Cap on the size of the lattice of flats.
    seed : int
        Seed for the random weights used by the degree computation.
    budget : int
        Redraws allowed when a random weight turns out non-generic.
    on_nongeneric : {"raise", "zero"}
        What ``transform`` does with a non-generic row: raise
        :class:`GenericityFailure` or return a zero row.

    Attributes set by ``fit``: ``config_``, ``codim_``, ``degree_``,
    ``fan_`` and ``n_features_in_`` (the number of columns of ``A``).
    """

    def __init__(self, max_flats=None, seed=0, budget=DEFAULT_BUDGET, on_nongeneric="raise"):
        self.max_flats = max_flats
        self.seed = seed
        self.budget = budget
        self.on_nongeneric = on_nongeneric

    def fit(self, A, y=None):
        if self.on_nongeneric not in ("raise", "zero"):
            raise ValueError(f"on_nongeneric must be 'raise' or 'zero', got {self.on_nongeneric!r}")
        matrix = np.asarray(A)
        if matrix.ndim != 2:
            raise DimensionMismatch("A must be a 2-d integer matrix")
        if not np.issubdtype(matrix.dtype, np.integer):
            if not np.all(np.equal(np.mod(matrix.astype(float), 1), 0)):
                raise ValueError("A must have integer entries")
        self.config_ = check_configuration(tuple(tuple(int(x) for x in row) for row in matrix))
        self.engine_ = ChainEngine(self.config_, max_flats=self.max_flats)
        self.codim_ = self.engine_.codim
        self.degree_ = degree(self.config_, seed=self.seed, budget=self.budget, engine=self.engine_)
        self.fan_ = tropical_discriminant(
            self.config_, lattice=self.engine_.lattice, codim=self.codim_
        )
        self.n_features_in_ = self.config_.n
        return self

    def initial_cycles(self, W):
        check_is_fitted(self, "engine_")
        return [self.engine_.cycle(w) for w in _as_weight_rows(W, self.n_features_in_)]

    def transform(self, W):
        """Row ``i`` holds ``sum_{tau ni j} mult(tau)`` for the initial cycle
        at ``W[i]``; for hypersurfaces that is the exponent vector of the
        extreme monomial."""
        check_is_fitted(self, "engine_")
        n = self.n_features_in_
        out = np.zeros((0, n), dtype=np.int64)
        rows = []
        for w in _as_weight_rows(W, n):
            try:
                rows.append(self.engine_.cycle(w).incidence_weights(n))
            except GenericityFailure:
                if self.on_nongeneric == "raise":
                    raise
                rows.append((0,) * n)
        if rows:
            out = np.array(rows, dtype=np.int64)
        return out

    def predict(self, W):
        """Membership of each weight vector in the tropical discriminant."""
        check_is_fitted(self, "fan_")
        return np.array(
            [membership(self.fan_, w) for w in _as_weight_rows(W, self.n_features_in_)],
            dtype=bool,
        )
