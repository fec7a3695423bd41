"""Cayley configurations, regular and mixed subdivisions, resultant degrees.

Subdivisions are computed by brute force over maximal-rank column subsets:
for every basis ``S`` the unique functional ``y`` with ``y . a_j = w_j`` on
``S`` is formed and kept when ``y . a_k <= w_k`` everywhere (a lower facet
of the lifted configuration).  The per-basis data is cached per matrix so
repeated liftings of one configuration cost a few array operations.
"""

from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from itertools import combinations
from math import factorial

import numpy as np

from .config import Configuration, check_configuration, check_weight
from .exactlin import as_int_matrix, det_abs, rank
from .exceptions import Defective, GenericityFailure, NotEssential, TooFewBlocks
from .initial import (
    DEFAULT_BUDGET,
    ChainEngine,
    _small_adj,
    _small_det,
    integral_weight,
    sample_weight,
)

_INT64_SAFE = 2**62


@dataclass(frozen=True)
class CayleyConfig:
    """Point sets ``A_1, ..., A_m`` in ``Z^r``.

    Column ``j`` of the Cayley matrix (0-based) is point ``labels[j][1]``
    of block ``labels[j][0]``; user-facing labels are 1-based.
    """

    r: int
    blocks: tuple

    def __post_init__(self):
        blocks = tuple(tuple(tuple(int(x) for x in p) for p in blk) for blk in self.blocks)
        if not blocks:
            raise ValueError("a Cayley configuration needs at least one block")
        for i, blk in enumerate(blocks):
            if not blk:
                raise ValueError(f"block {i + 1} is empty")
            if any(len(p) != self.r for p in blk):
                raise ValueError(f"block {i + 1} has points outside Z^{self.r}")
        object.__setattr__(self, "blocks", blocks)

    @classmethod
    def from_dict(cls, data):
        return cls(int(data["r"]), tuple(tuple(tuple(p) for p in blk) for blk in data["blocks"]))

    def to_dict(self):
        return {"r": self.r, "blocks": [[list(p) for p in blk] for blk in self.blocks]}

    @property
    def m(self):
        return len(self.blocks)

    @property
    def n(self):
        return sum(len(b) for b in self.blocks)

    @property
    def labels(self):
        return [(i, k) for i, blk in enumerate(self.blocks) for k in range(len(blk))]

    @property
    def block_of(self):
        return [i for i, blk in enumerate(self.blocks) for _ in blk]

    def point(self, j):
        i, k = self.labels[j]
        return self.blocks[i][k]

    def matrix(self):
        rows = []
        for i in range(self.m):
            rows.append(tuple(int(b == i) for b in self.block_of))
        pts = [p for blk in self.blocks for p in blk]
        for t in range(self.r):
            rows.append(tuple(p[t] for p in pts))
        return tuple(rows)

    def subfamily(self, indices):
        return CayleyConfig(self.r, tuple(self.blocks[i] for i in indices))


def cayley_matrix(cfg, validate=True):
    """The ``(m + r) x n`` Cayley matrix as a :class:`Configuration`."""
    return check_configuration(cfg.matrix(), validate=validate)


def _affine_dim(points):
    points = list(points)
    if len(points) <= 1:
        return 0
    p0 = points[0]
    return rank([tuple(a - b for a, b in zip(p, p0)) for p in points[1:]])


def _minkowski_dim(blocks):
    diffs = []
    for blk in blocks:
        diffs.extend(tuple(a - b for a, b in zip(p, blk[0])) for p in blk[1:])
    return rank(diffs) if diffs else 0


def is_essential(cfg):
    """Every sub-family of at most ``r`` blocks has Minkowski dimension at
    least its size."""
    for k in range(1, min(cfg.r, cfg.m) + 1):
        for I in combinations(range(cfg.m), k):
            if _minkowski_dim([cfg.blocks[i] for i in I]) < k:
                return False
    return True


# --------------------------------------------------------------------------
# regular subdivisions


@dataclass
class Subdivision:
    """Cells of ``Pi_w`` as frozensets of 0-based column indices."""

    matrix: tuple
    w: tuple
    cells: tuple

    @property
    def is_triangulation(self):
        d = len(self.matrix)
        return all(len(c) == d for c in self.cells)

    def labels(self):
        return [sorted(j + 1 for j in c) for c in self.cells]

    def volumes(self):
        """Normalized volume of each cell in the lattice ``Z^d``."""
        return [cell_volume(self.matrix, c) for c in self.cells]

    def key(self):
        return frozenset(self.cells)

    def to_dict(self):
        return {"w": [str(x) for x in self.w], "cells": self.labels()}


def _row_basis(A):
    rows = []
    for row in A:
        if rank(rows + [row]) > len(rows):
            rows.append(row)
    return tuple(rows)


@lru_cache(maxsize=256)
def _basis_data(A):
    """Bases ``S``, ``sign(det A_S)``, ``|det A_S|`` and ``adj(A_S) A``."""
    d, n = len(A), len(A[0])
    subsets = list(combinations(range(n), d))
    M = np.array(A, dtype=object)
    stack = np.stack([M[:, list(S)] for S in subsets])
    dets = _small_det(stack)
    keep = [i for i, v in enumerate(dets) if v != 0]
    subsets = [subsets[i] for i in keep]
    stack, dets = stack[keep], dets[keep]
    coef = np.einsum("sij,jk->sik", _small_adj(stack), M)
    bound = max((abs(int(x)) for x in coef.flat), default=0)
    return (
        np.array(subsets, dtype=np.int64).reshape(len(subsets), d),
        np.array([1 if v > 0 else -1 for v in dets], dtype=np.int64),
        np.array([abs(int(v)) for v in dets], dtype=object),
        coef,
        bound,
    )


def regular_subdivision(A, w):
    """Cells of the regular subdivision of the columns of ``A`` induced by
    the lifting ``w`` (lower faces of the lifted point set)."""
    A = as_int_matrix(A.matrix if isinstance(A, Configuration) else A)
    A = _row_basis(A)
    n = len(A[0])
    w = integral_weight(check_weight(w, n))
    subsets, sign, absdet, coef, bound = _basis_data(A)
    if not len(subsets):
        return Subdivision(A, w, ())
    wmax = max((abs(x) for x in w), default=0)
    safe = (len(A) + 1) * (bound + 1) * (wmax + 1) * (max(absdet) + 1) < _INT64_SAFE
    dtype = np.int64 if safe else object
    W = np.array(w, dtype=dtype)
    C = coef.astype(dtype)
    vals = np.einsum("sj,sjk->sk", W[subsets], C) * sign.astype(dtype)[:, None]
    rhs = absdet.astype(dtype)[:, None] * W[None, :]
    ok = np.all(vals <= rhs, axis=1)
    tight = vals[ok] == rhs[ok]
    cells = sorted({frozenset(np.flatnonzero(row).tolist()) for row in tight}, key=sorted)
    return Subdivision(A, w, tuple(cells))


def _generic_triangulation(A, rng, attempts=64):
    n = len(A[0])
    for _ in range(attempts):
        sub = regular_subdivision(A, sample_weight(rng, n))
        if sub.is_triangulation:
            return sub
    raise GenericityFailure(None, "no generic lifting found")


def cell_volume(A, cell):
    """Normalized volume ``|det|``-sum of a full-dimensional cell."""
    A = _row_basis(as_int_matrix(A))
    cols = sorted(cell)
    sub = tuple(tuple(row[j] for j in cols) for row in A)
    d = len(A)
    if len(cols) == d:
        return det_abs(sub)
    if rank(sub) < d:
        return 0
    tri = _generic_triangulation(sub, np.random.default_rng(len(cols)))
    return sum(det_abs(tuple(tuple(row[j] for j in sorted(c)) for row in sub)) for c in tri.cells)


def normalized_volume(points):
    """``r! vol`` of the convex hull of lattice points in ``Z^r`` (0 when
    not full-dimensional)."""
    pts = sorted({tuple(int(x) for x in p) for p in points})
    r = len(pts[0])
    if r == 0:
        return 1
    if _affine_dim(pts) < r:
        return 0
    if r == 1:
        return pts[-1][0] - pts[0][0]
    hom = tuple([(1,) * len(pts)] + [tuple(p[t] for p in pts) for t in range(r)])
    return cell_volume(hom, range(len(pts)))


def minkowski_sum(*blocks):
    out = {tuple(0 for _ in blocks[0][0])}
    for blk in blocks:
        out = {tuple(a + b for a, b in zip(p, q)) for p in out for q in blk}
    return sorted(out)


# --------------------------------------------------------------------------
# mixed subdivisions


@dataclass
class MixedCell:
    """A cell ``F_1 + ... + F_m`` of a mixed subdivision.

    ``summands`` hold 1-based Cayley labels per block.  ``volume`` is the
    Euclidean volume, ``normalized_volume`` is ``r!`` times it.  A cell is
    *mixed* when its summands are points and segments whose dimensions add
    up to ``r``, and *fully mixed* when no summand is a point.
    """

    summands: tuple
    dims: tuple
    normalized_volume: int
    r: int
    cayley_cell: frozenset = field(repr=False, default=frozenset())

    @property
    def volume(self):
        return Fraction(self.normalized_volume, factorial(self.r))

    @property
    def mixed(self):
        return sum(self.dims) == self.r and all(k <= 1 for k in self.dims)

    @property
    def fully_mixed(self):
        return all(k >= 1 for k in self.dims)

    def mixed_for(self, subset):
        """Mixed with respect to ``subset``: segments exactly there."""
        subset = set(subset)
        return all((k == 1) == (i in subset) for i, k in enumerate(self.dims)) and (
            len(subset) == self.r
        )

    def to_dict(self):
        return {
            "summands": [list(s) for s in self.summands],
            "dims": list(self.dims),
            "volume": str(self.volume),
            "normalized_volume": self.normalized_volume,
            "mixed": self.mixed,
            "fully_mixed": self.fully_mixed,
        }


def mixed_cells_of(cfg, sub):
    block_of = cfg.block_of
    out = []
    for cell in sub.cells:
        parts = [[] for _ in range(cfg.m)]
        for j in sorted(cell):
            parts[block_of[j]].append(j)
        pts = [[cfg.point(j) for j in p] for p in parts]
        out.append(
            MixedCell(
                summands=tuple(tuple(j + 1 for j in p) for p in parts),
                dims=tuple(_affine_dim(p) for p in pts),
                normalized_volume=normalized_volume(minkowski_sum(*pts)),
                r=cfg.r,
                cayley_cell=cell,
            )
        )
    return out


def mixed_subdivision(cfg, w):
    """Mixed cells of the subdivision of ``A_1 + ... + A_m`` induced by
    lifting the Cayley configuration with ``w``."""
    sub = regular_subdivision(cfg.matrix(), w)
    return mixed_cells_of(cfg, sub)


def total_volume(cfg):
    """Normalized volume of the Minkowski sum of all blocks."""
    return normalized_volume(minkowski_sum(*cfg.blocks))


def mixed_volume(blocks, r, seed=0, budget=DEFAULT_BUDGET):
    """Mixed volume of ``r`` point sets in ``Z^r`` as the total Euclidean
    volume of the all-segment cells of a generic mixed subdivision."""
    blocks = tuple(blocks)
    if len(blocks) != r:
        raise ValueError(f"mixed volume needs {r} blocks, got {len(blocks)}")
    if _minkowski_dim(blocks) < r or any(len(b) < 2 for b in blocks):
        return 0
    cfg = CayleyConfig(r, blocks)
    rng = np.random.default_rng(seed)
    for _ in range(budget):
        sub = regular_subdivision(cfg.matrix(), sample_weight(rng, cfg.n))
        if not sub.is_triangulation:
            continue
        cells = mixed_cells_of(cfg, sub)
        total = sum(c.volume for c in cells if c.mixed_for(range(r)))
        return int(total)
    raise GenericityFailure(None, "no generic lifting found for the mixed volume")


def resultant_degree(cfg, seed=0):
    """Sum of the mixed volumes over all ``r``-element sub-families."""
    if cfg.m < cfg.r + 1:
        raise TooFewBlocks(f"{cfg.m} blocks in dimension {cfg.r}; need at least {cfg.r + 1}")
    if not is_essential(cfg):
        raise NotEssential("the block family is not essential")
    return sum(
        mixed_volume([cfg.blocks[i] for i in I], cfg.r, seed=seed)
        for I in combinations(range(cfg.m), cfg.r)
    )


def membership_via_mixed(cfg, w):
    """Whether the mixed subdivision induced by ``w`` has a fully mixed
    maximal cell."""
    if not is_essential(cfg):
        raise NotEssential("the block family is not essential")
    return any(c.fully_mixed for c in mixed_subdivision(cfg, w))


# --------------------------------------------------------------------------
# Delta-equivalence


@dataclass
class DeltaClasses:
    """Generic weights grouped by the extreme monomial they select."""

    classes: dict
    samples: int
    failures: int

    @property
    def count(self):
        return len(self.classes)

    def to_dict(self):
        return {
            "observed_classes": self.count,
            "samples": self.samples,
            "failures": self.failures,
            "classes": [
                {
                    "exp": list(exp),
                    "hits": info["hits"],
                    "witness_w": [str(x) for x in info["w"]],
                    "triangulation": info["triangulation"],
                }
                for exp, info in sorted(self.classes.items())
            ],
        }


def delta_equivalence_classes(A, samples=10_000, seed=0, engine=None):
    """Sample generic weights and group them by initial monomial; each class
    keeps its first witness weight and the triangulation it induces."""
    engine = engine or ChainEngine(A)
    if engine.codim != 1:
        raise Defective(engine.codim)
    rng = np.random.default_rng(seed)
    classes = {}
    failures = 0
    for _ in range(samples):
        w = sample_weight(rng, engine.n)
        try:
            exp = engine.cycle(w).exponent_vector(engine.n)
        except GenericityFailure:
            failures += 1
            continue
        info = classes.get(exp)
        if info is None:
            sub = regular_subdivision(engine.config.matrix, w)
            classes[exp] = {"hits": 1, "w": w, "triangulation": sub.labels()}
        else:
            info["hits"] += 1
    return DeltaClasses(classes, samples, failures)


def count_regular_triangulations(A, samples=10_000, seed=0):
    """Distinct triangulations met by ``samples`` random liftings (a lower
    bound on the number of regular triangulations)."""
    A = as_int_matrix(A.matrix if isinstance(A, Configuration) else A)
    rng = np.random.default_rng(seed)
    seen = set()
    for _ in range(samples):
        sub = regular_subdivision(A, sample_weight(rng, len(A[0])))
        if sub.is_triangulation:
            seen.add(sub.key())
    return seen
