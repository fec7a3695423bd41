"""Point configurations and input validation helpers."""

from dataclasses import dataclass
from functools import cached_property
from fractions import Fraction

from .exactlin import (
    as_int_matrix,
    integer_kernel,
    rank,
    saturation_index,
    solve,
    transpose,
)
from .exceptions import DimensionMismatch, InvalidConfiguration, PyramidInput


@dataclass(frozen=True)
class Configuration:
    """An integer ``d x n`` matrix ``A`` read as the point set of its columns.

    Construction does not validate; call :meth:`validate` (or use
    :func:`check_configuration`) before handing it to routines that rely on
    the standing hypotheses.
    """

    matrix: tuple

    def __post_init__(self):
        object.__setattr__(self, "matrix", as_int_matrix(self.matrix))
        if not self.matrix or not self.matrix[0]:
            raise DimensionMismatch("configuration matrix must be non-empty")

    @property
    def d(self):
        return len(self.matrix)

    @property
    def n(self):
        return len(self.matrix[0])

    @property
    def columns(self):
        return transpose(self.matrix)

    @cached_property
    def gale(self):
        """Saturated Gale dual ``B`` (``n x (n-d)``), HNF-canonical."""
        return integer_kernel(self.matrix)

    @cached_property
    def flags(self):
        A = self.matrix
        full_rank = rank(A) == self.d
        spans = full_rank and saturation_index(A) == 1
        homogeneous = solve(transpose(A), (1,) * self.n) is not None
        B = self.gale
        loops = [i for i, row in enumerate(B) if not any(row)]
        return {
            "full_rank": full_rank,
            "spans_lattice": spans,
            "homogeneous": homogeneous,
            "non_pyramid": full_rank and not loops,
        }

    def validate(self):
        """Raise :class:`InvalidConfiguration` unless every flag holds."""
        f = self.flags
        if not f["full_rank"]:
            raise InvalidConfiguration("rank", "rows of A are linearly dependent")
        if not f["spans_lattice"]:
            raise InvalidConfiguration("lattice", "columns of A do not span Z^d")
        if not f["homogeneous"]:
            raise InvalidConfiguration("homogeneity", "(1,...,1) is not in the row span of A")
        if not f["non_pyramid"]:
            raise PyramidInput()
        return self

    @property
    def is_valid(self):
        return all(self.flags.values())

    def rowspace_coordinates(self, v):
        """Rational ``y`` with ``A^t y = v`` or ``None``."""
        return solve(transpose(self.matrix), tuple(v))


def check_configuration(A, validate=True):
    """Coerce ``A`` to a :class:`Configuration` and optionally validate it."""
    cfg = A if isinstance(A, Configuration) else Configuration(A)
    if validate:
        cfg.validate()
    return cfg


def check_weight(w, n):
    """Coerce a weight vector to a tuple of exact rationals of length ``n``."""
    out = []
    for x in w:
        if not isinstance(x, Fraction):
            x = Fraction(x) if isinstance(x, float) else Fraction(int(x))
        out.append(x)
    if len(out) != n:
        raise DimensionMismatch(f"weight vector of length {len(out)}, expected {n}")
    return tuple(int(x) if x.denominator == 1 else x for x in out)


def check_weights(W, n):
    """Coerce a single vector or a 2-d collection of weight vectors."""
    W = list(W)
    if W and not hasattr(W[0], "__len__"):
        return [check_weight(W, n)]
    return [check_weight(w, n) for w in W]
