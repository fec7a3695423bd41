"""Newton polytopes of discriminants from extreme monomials.

Extreme monomials come from initial monomials at random weights; small
polytopes are summarised by brute-force facet enumeration and the full
polynomial is recovered by interpolation on the Horn parametrization.
"""

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations, product
from math import gcd, lcm

import numpy as np

from .config import check_configuration
from .exactlin import integer_kernel, rank, rref, solve
from .exceptions import Defective, DimensionTooLarge, GenericityFailure, KernelNotOneDimensional
from .initial import DEFAULT_BUDGET, ChainEngine, initial_cycle_of_fan, sample_weight

MAX_HULL_DIM = 4
MAX_HULL_POINTS = 200
MAX_LATTICE_POINTS = 500


@dataclass
class MonomialSet:
    """Distinct exponent vectors with the weights that produced them."""

    witnesses: dict = field(default_factory=dict)
    attempts: int = 0
    failures: int = 0

    def add(self, exp, w):
        self.witnesses.setdefault(tuple(exp), []).append(tuple(w))

    @property
    def monomials(self):
        return sorted(self.witnesses)

    def __len__(self):
        return len(self.witnesses)

    def __contains__(self, exp):
        return tuple(exp) in self.witnesses

    def to_list(self):
        return [
            {"exp": list(e), "witness_w": [str(x) for x in self.witnesses[e][0]]}
            for e in self.monomials
        ]


def sample_extreme_monomials(A, samples=200, seed=0, weights=(), engine=None, budget=DEFAULT_BUDGET):
    """Initial monomials of the discriminant at ``samples`` random weights
    (integer entries in ``[0, 10^6]``) plus any explicit ``weights``.

    Non-generic draws are redrawn, at most ``budget`` times in a row.
    """
    engine = engine or ChainEngine(A)
    if engine.codim != 1:
        raise Defective(engine.codim)
    out = MonomialSet()
    for w in weights:
        out.attempts += 1
        out.add(engine.cycle(w).exponent_vector(engine.n), w)
    rng = np.random.default_rng(seed)
    for _ in range(samples):
        for _attempt in range(budget):
            w = sample_weight(rng, engine.n)
            out.attempts += 1
            try:
                cyc = engine.cycle(w)
            except GenericityFailure:
                out.failures += 1
                continue
            out.add(cyc.exponent_vector(engine.n), w)
            break
        else:
            raise GenericityFailure(w, "budget exhausted")
    return out


def sample_fan_monomials(fan, samples=200, seed=0, budget=DEFAULT_BUDGET):
    """Same as :func:`sample_extreme_monomials` for a weighted tropical
    hypersurface given directly as a fan."""
    if fan.ambient - fan.dim != 1:
        raise Defective(fan.ambient - fan.dim)
    out = MonomialSet()
    rng = np.random.default_rng(seed)
    for _ in range(samples):
        for _attempt in range(budget):
            w = sample_weight(rng, fan.ambient)
            out.attempts += 1
            try:
                cyc = initial_cycle_of_fan(fan, w, 1)
            except GenericityFailure:
                out.failures += 1
                continue
            out.add(cyc.exponent_vector(fan.ambient), w)
            break
        else:
            raise GenericityFailure(w, "budget exhausted")
    return out


# --------------------------------------------------------------------------
# convex hulls


@dataclass
class PolytopeSummary:
    """Exact combinatorics of ``conv(points)``.

    ``facets`` are inequalities ``normal . x <= offset`` valid on the
    affine hull, which is ``{x : eq . x = rhs}`` for ``(eq, rhs)`` in
    ``equations``.
    """

    dim: int
    fvector: tuple
    vertices: tuple
    facets: list
    equations: list
    faces: dict

    def contains(self, x):
        x = tuple(x)
        return all(_dot(e, x) == r for e, r in self.equations) and all(
            _dot(a, x) <= b for a, b in self.facets
        )


def _dot(a, b):
    return sum(x * y for x, y in zip(a, b))


def _affine_rank(points):
    if len(points) <= 1:
        return 0
    p0 = points[0]
    return rank([tuple(a - b for a, b in zip(p, p0)) for p in points[1:]])


def hull_summary(points):
    """f-vector, vertices and facet inequalities of a small lattice polytope."""
    pts = sorted({tuple(int(x) for x in p) for p in points})
    if not pts:
        raise ValueError("empty point set")
    if len(pts) > MAX_HULL_POINTS:
        raise DimensionTooLarge(f"{len(pts)} points exceed the limit of {MAX_HULL_POINTS}")
    n = len(pts[0])
    p0 = pts[0]
    diffs = [tuple(a - b for a, b in zip(p, p0)) for p in pts[1:]]
    r = rank(diffs) if diffs else 0
    if r > MAX_HULL_DIM:
        raise DimensionTooLarge(f"affine dimension {r} exceeds {MAX_HULL_DIM}")
    # equations of the affine hull
    normals = integer_kernel(diffs, ncols=n) if diffs else tuple(
        tuple(int(i == j) for j in range(n)) for i in range(n)
    )
    equations = []
    if normals and normals[0]:
        for col in zip(*normals):
            equations.append((tuple(col), _dot(col, p0)))
    if r == 0:
        return PolytopeSummary(0, (1,), tuple(pts), [], equations, {0: [frozenset([0])]})
    # facets: hyperplanes through r affinely independent points with all
    # points on one side, found inside the affine hull
    eq_rows = [e for e, _ in equations]
    facets = {}
    for combo in combinations(range(len(pts)), r):
        base = pts[combo[0]]
        spans = [tuple(a - b for a, b in zip(pts[i], base)) for i in combo[1:]]
        if spans and rank(spans) < r - 1:
            continue
        K = integer_kernel(spans + eq_rows, ncols=n) if spans or eq_rows else None
        if K is None or not K or not K[0] or len(K[0]) != 1:
            continue
        a = tuple(row[0] for row in K)
        vals = [_dot(a, p) for p in pts]
        b = _dot(a, base)
        if all(v <= b for v in vals):
            pass
        elif all(v >= b for v in vals):
            a, b = tuple(-x for x in a), -b
        else:
            continue
        on = frozenset(i for i, p in enumerate(pts) if _dot(a, p) == b)
        if _affine_rank([pts[i] for i in on]) == r - 1 and on not in facets:
            facets[on] = (a, b)
    # face lattice by intersecting facets
    faces = {r - 1: list(facets)}
    everything = set(facets)
    frontier = set(facets)
    while frontier:
        new = set()
        for F in frontier:
            for G in facets:
                H = F & G
                if H and H not in everything:
                    new.add(H)
        everything |= new
        frontier = new
    by_dim = {}
    for F in everything:
        by_dim.setdefault(_affine_rank([pts[i] for i in sorted(F)]), set()).add(F)
    faces = {k: sorted(v, key=sorted) for k, v in by_dim.items()}
    fvec = tuple(len(faces.get(k, ())) for k in range(r))
    verts = tuple(pts[next(iter(F))] for F in faces.get(0, ()))
    return PolytopeSummary(r, fvec, tuple(sorted(verts)), list(facets.values()), equations, faces)


def lattice_points(summary, limit=MAX_LATTICE_POINTS):
    """All integer points of the polytope, by scanning a bounding box of
    ``dim`` free coordinates and solving for the rest."""
    verts = summary.vertices
    n = len(verts[0])
    p0 = verts[0]
    diffs = [tuple(a - b for a, b in zip(v, p0)) for v in verts[1:]]
    if not diffs or summary.dim == 0:
        return [p0]
    # free coordinates: pivot columns of the direction space
    _, piv = rref(diffs)
    free = list(piv)
    lo = [min(v[i] for v in verts) for i in free]
    hi = [max(v[i] for v in verts) for i in free]
    box = 1
    for a, b in zip(lo, hi):
        box *= b - a + 1
    if box > 50 * limit * max(1, summary.dim) ** 2:
        raise DimensionTooLarge(f"bounding box of {box} points is too large")
    # x = p0 + D^t y with the free coordinates fixed
    basis = [tuple(row) for row in diffs]
    basis_sel = [[b[i] for b in basis] for i in free]
    out = []
    for coords in product(*(range(a, b + 1) for a, b in zip(lo, hi))):
        target = [c - p0[i] for c, i in zip(coords, free)]
        y = solve(basis_sel, target)
        if y is None:
            continue
        x = [p0[j] + sum(y[t] * basis[t][j] for t in range(len(basis))) for j in range(n)]
        if any(Fraction(v).denominator != 1 for v in x):
            continue
        x = tuple(int(v) for v in x)
        if summary.contains(x):
            out.append(x)
            if len(out) > limit:
                raise DimensionTooLarge(f"more than {limit} lattice points")
    return sorted(out)


# --------------------------------------------------------------------------
# coefficient recovery


def horn_point(A, rng, kernel=None):
    """A point ``(u_i t^{a_i})`` of the dual variety with ``u`` a random
    kernel vector without zero entries and ``t`` small odd integers."""
    cfg = check_configuration(A)
    B = kernel or cfg.gale
    n, d = cfg.n, cfg.d
    k = len(B[0])
    while True:
        coef = [int(x) for x in rng.integers(-9, 10, size=k)]
        u = [sum(B[i][j] * coef[j] for j in range(k)) for i in range(n)]
        if all(u):
            break
    t = [int(2 * rng.integers(1, 5) + 1) * (1 if rng.integers(0, 2) else -1) for _ in range(d)]
    x = []
    for i in range(n):
        val = Fraction(u[i])
        for j in range(d):
            val *= Fraction(t[j]) ** cfg.matrix[j][i]
        x.append(val)
    return tuple(x)


def _evaluate(points, x):
    row = []
    for e in points:
        val = Fraction(1)
        for xi, ei in zip(x, e):
            if ei:
                val *= xi**ei
        row.append(val)
    return row


def _kernel(rows, ncols):
    R, piv = rref(rows)
    free = [j for j in range(ncols) if j not in piv]
    basis = []
    for f in free:
        v = [Fraction(0)] * ncols
        v[f] = Fraction(1)
        for r, p in enumerate(piv):
            v[p] = -R[r][f]
        basis.append(v)
    return basis


def recover_discriminant(A, newton_vertices, seed=0, attempts=3, extra_samples=10):
    """Coefficients of the discriminant on the lattice points of its
    Newton polytope, as ``{exponent: Fraction}`` with coprime integer
    values and a positive leading coefficient (lex-smallest exponent)."""
    cfg = check_configuration(A)
    summary = hull_summary(newton_vertices)
    pts = lattice_points(summary)
    if len(pts) == 1:
        return {pts[0]: Fraction(1)}
    rng = np.random.default_rng(seed)
    dim = None
    for _ in range(attempts):
        rows = [
            _evaluate(pts, horn_point(cfg, rng)) for _ in range(len(pts) + extra_samples)
        ]
        K = _kernel(rows, len(pts))
        dim = len(K)
        if dim == 1:
            v = K[0]
            den = lcm(*(x.denominator for x in v))
            ints = [int(x * den) for x in v]
            g = 0
            for x in ints:
                g = gcd(g, x)
            ints = [x // g for x in ints]
            lead = next(x for x in ints if x)
            if lead < 0:
                ints = [-x for x in ints]
            return {p: Fraction(c) for p, c in zip(pts, ints) if c}
    raise KernelNotOneDimensional(dim)


def vanishes_on_horn(A, coefficients, samples=20, seed=12345):
    """Check that a polynomial vanishes at fresh points of the dual variety."""
    rng = np.random.default_rng(seed)
    exps = list(coefficients)
    for _ in range(samples):
        x = horn_point(A, rng)
        vals = _evaluate(exps, x)
        if sum(c * v for c, v in zip(coefficients.values(), vals)) != 0:
            return False
    return True


def newton_report(A, samples=200, seed=0, weights=()):
    """Everything the ``newton`` subcommand prints, as plain data."""
    mons = sample_extreme_monomials(A, samples, seed, weights)
    exps = mons.monomials
    degree = sum(exps[0]) if exps else 0
    out = {"degree": degree, "monomials": mons.to_list()}
    try:
        out["fvector"] = list(hull_summary(exps).fvector)
    except DimensionTooLarge:
        out["fvector"] = None
    return out
