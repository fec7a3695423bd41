"""Tropical varieties stored as weighted cone collections.

A :class:`WeightedFan` is a common lineality space plus a list of cones,
each given by integer generators and a positive intrinsic multiplicity.
Cones are kept as a covering family: images of cones under a linear map
may overlap and are never refined into a common subdivision, except by
:func:`fan_graph` which builds the 1-skeleton picture of small fans.
"""

import json
from functools import cmp_to_key
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations

from .config import check_configuration
from .exactlin import (
    as_int_matrix,
    cone_contains,
    from_columns,
    identity,
    integer_kernel,
    left_kernel,
    matvec,
    primitive,
    rank,
    saturation,
    saturation_index,
    solve,
    transpose,
)
from .exceptions import DimensionMismatch
from .matroid import FlatLattice, chain_vectors, incidence

FAN_SCHEMA_VERSION = 1


@dataclass(frozen=True)
class Cone:
    rays: tuple
    mult: int = 1


@dataclass
class WeightedFan:
    """Cones ``R_{>=0}{rays} + span(lineality)`` with multiplicities."""

    ambient: int
    lineality: tuple = ()
    cones: list = field(default_factory=list)
    # False when cones merely cover the support and overlapping cones
    # describe the same points (dimension-dropping images)
    additive: bool = True

    def __post_init__(self):
        lin = [tuple(int(x) for x in v) for v in self.lineality if any(v)]
        if lin:
            lin = list(zip(*saturation(from_columns(lin, self.ambient))))
        self.lineality = tuple(lin)
        self.cones = [
            c if isinstance(c, Cone) else Cone(tuple(tuple(r) for r in c[0]), int(c[1]))
            for c in self.cones
        ]
        for c in self.cones:
            if c.mult < 1:
                raise ValueError("multiplicities must be positive")
            if any(len(r) != self.ambient for r in c.rays):
                raise DimensionMismatch("ray length differs from ambient dimension")

    def cone_dim(self, cone):
        gens = list(cone.rays) + list(self.lineality)
        return rank(gens) if gens else 0

    @property
    def lineality_dim(self):
        return len(self.lineality)

    @property
    def dim(self):
        # cached against the cone count; fans are built once and not edited
        cached = self.__dict__.get("_dim")
        if cached is None or cached[0] != len(self.cones):
            top = max((self.cone_dim(c) for c in self.cones), default=self.lineality_dim)
            cached = (len(self.cones), top)
            self.__dict__["_dim"] = cached
        return cached[1]

    def is_pure(self):
        dims = {self.cone_dim(c) for c in self.cones}
        return len(dims) <= 1

    def maximal(self):
        """The fan restricted to cones of top dimension."""
        top = self.dim
        return WeightedFan(
            self.ambient,
            self.lineality,
            [c for c in self.cones if self.cone_dim(c) == top],
            self.additive,
        )

    def contains(self, w):
        return membership(self, w)

    # -- export -----------------------------------------------------------

    def to_dict(self):
        return {
            "schema": FAN_SCHEMA_VERSION,
            "ambient": self.ambient,
            "lineality": [list(v) for v in self.lineality],
            "cones": [{"rays": [list(r) for r in c.rays], "mult": c.mult} for c in self.cones],
            "additive": self.additive,
        }

    def to_json(self, **kw):
        return json.dumps(self.to_dict(), **kw)

    @classmethod
    def from_dict(cls, data):
        # also accept the output of the ``fan`` subcommand
        if "fan" in data and "cones" not in data:
            data = data["fan"]
        return cls(
            int(data["ambient"]),
            tuple(tuple(v) for v in data.get("lineality", ())),
            [Cone(tuple(tuple(r) for r in c["rays"]), int(c.get("mult", 1))) for c in data["cones"]],
            bool(data.get("additive", True)),
        )

    @classmethod
    def from_json(cls, text):
        return cls.from_dict(json.loads(text))


# --------------------------------------------------------------------------
# constructions


def bergman_fan(U, structure="flag", max_flats=None):
    """Tropicalization of the column span of ``U`` (a tropical linear space).

    ``structure`` selects the fan structure on the same support:
    ``"flag"`` (one unimodular cone per maximal chain of flats, built per
    connected component), ``"nested"`` (maximal nested sets) or
    ``"bergman"`` (the coarsest structure, cones grouped by ``M_w``).
    All intrinsic multiplicities are 1.
    """
    U = as_int_matrix(U)
    r = len(U)
    kw = {} if max_flats is None else {"max_flats": max_flats}
    if structure == "flag":
        top = FlatLattice(U, **kw)
        comps = top.components()
        lineality = [incidence(C, r) for C in comps]
        factor_chains = []
        for C in comps:
            idx = sorted(C)
            sub = FlatLattice([U[i] for i in idx], **kw)
            lifted = []
            for chain in sub.maximal_chains():
                lifted.append([incidence({idx[i] for i in F}, r) for F in chain])
            factor_chains.append(lifted)
        cones = [[]]
        for options in factor_chains:
            cones = [acc + ch for acc in cones for ch in options]
        return WeightedFan(r, tuple(lineality), [Cone(tuple(map(tuple, c)), 1) for c in cones])
    lat = FlatLattice(U, **kw)
    lineality = [incidence(C, r) for C in lat.components()]
    if structure == "nested":
        cones = [chain_vectors(S, r) for S in lat.maximal_nested_sets()]
    elif structure == "bergman":
        cones = []
        for group in lat.bergman_cones():
            gens = []
            for chain in group:
                for v in chain_vectors(chain, r):
                    if v not in gens:
                        gens.append(v)
            cones.append(gens)
    else:
        raise ValueError(f"unknown fan structure {structure!r}")
    return WeightedFan(r, tuple(lineality), [Cone(tuple(c), 1) for c in cones])


def co_bergman_fan(A, structure="bergman", max_flats=None):
    """Bergman fan of the Gale dual of ``A`` (the co-Bergman fan)."""
    cfg = check_configuration(A)
    return bergman_fan(cfg.gale, structure=structure, max_flats=max_flats)


def hypersurface_cones(A, fan=None):
    """Cones of the co-Bergman fan whose sum with the row space of ``A``
    has dimension ``n - 1``; these are the ones whose image is a facet of
    the tropical discriminant."""
    cfg = check_configuration(A)
    fan = fan or co_bergman_fan(cfg)
    rows = list(cfg.matrix)
    return [c for c in fan.cones if rank(list(c.rays) + rows) == cfg.n - 1]


def lineality_degree(fan, V):
    """Order of the finite group by which the torus of the lineality
    space of ``fan`` acts trivially after the monomial map ``V``.

    Every point of the image is reached that many times along one torus
    orbit, so the raw lattice indices of a pushforward count it that often.
    """
    if not fan.lineality:
        return 1
    s = len(V)
    img = [matvec(V, v) for v in fan.lineality]
    img = [v for v in img if any(v)]
    return saturation_index(from_columns(img, s)) if img else 1


def pushforward(fan, V, keep_all=False, map_degree=None):
    """Image of a fan under the integer linear map ``V`` (``s x r``).

    Each image cone gets the lattice index ``[R sigma ∩ Z^s : V(R sigma'
    ∩ Z^r)]`` divided by ``map_degree`` (by default
    :func:`lineality_degree`, the number of times the monomial map covers
    a generic image point along the lineality torus).  Cones whose image
    has less than the largest image dimension are dropped unless
    ``keep_all``.
    """
    V = as_int_matrix(V)
    if not V or len(V[0]) != fan.ambient:
        raise DimensionMismatch("V must have as many columns as the fan's ambient dimension")
    s = len(V)
    if map_degree is None:
        map_degree = lineality_degree(fan, V)
    lin_img = [matvec(V, v) for v in fan.lineality]
    lin_img = [v for v in lin_img if any(v)]
    out = []
    for cone in fan.cones:
        rays = tuple(matvec(V, r) for r in cone.rays)
        src = list(cone.rays) + list(fan.lineality)
        src_lat = saturation(from_columns(src, fan.ambient)) if src else ()
        if src_lat and src_lat[0]:
            img = [matvec(V, col) for col in zip(*src_lat)]
            img = [v for v in img if any(v)]
        else:
            img = []
        dim = rank(img) if img else 0
        index = cone.mult * (saturation_index(from_columns(img, s)) if img else 1)
        out.append((dim, rays, index))
    top = max((d for d, _, _ in out), default=0)
    cones = []
    for dim, rays, index in out:
        if not keep_all and dim != top:
            continue
        if index % map_degree:
            raise ValueError(
                f"lattice index {index} is not divisible by the map degree {map_degree}"
            )
        cones.append(Cone(rays, index // map_degree))
    return WeightedFan(s, tuple(lin_img), cones, fan.additive)


def chain_rank(A, chain):
    """Rank of ``(A^t, sigma_1, ..., sigma_k)``."""
    A = A.matrix if hasattr(A, "matrix") else as_int_matrix(A)
    return rank([tuple(row) for row in A] + chain_vectors(chain, len(A[0])))


def max_chain_rank(A, chains):
    return max(chain_rank(A, ch) for ch in chains)


def tropical_discriminant(A, lattice=None, codim=None, max_flats=None):
    """Co-Bergman fan plus the row space of ``A``.

    Cones are ``R_{>=0} sigma + rowspace(A)`` for proper chains ``sigma`` of
    ``n-d-c`` flats with ``rank(A^t, sigma) = n - c``; for non-defective
    ``A`` (``c = 1``) these are exactly the maximal chains. The intrinsic
    multiplicity of each cone is the index of the lattice generated by
    ``A`` and ``sigma`` in its saturation.
    """
    cfg = check_configuration(A)
    kw = {} if max_flats is None else {"max_flats": max_flats}
    lat = lattice or FlatLattice(cfg.gale, **kw)
    n, d = cfg.n, cfg.d
    if codim is None:
        codim = n - max_chain_rank(cfg.matrix, lat.maximal_chains())
    k = n - d - codim
    cones = []
    for chain in lat.chains_of_length(k):
        vecs = chain_vectors(chain, n)
        gens = [tuple(r) for r in cfg.matrix] + vecs
        if rank(gens) != n - codim:
            continue
        mult = saturation_index(from_columns(gens, n))
        cones.append(Cone(tuple(vecs), mult))
    return WeightedFan(n, cfg.matrix, cones, additive=codim == 1)


def discriminant_via_pushforward(A, max_flats=None):
    """The same support assembled as ``V · B(U)`` with
    ``U = blockdiag(B, I_d)`` and ``V = (I_n | A^t)``."""
    cfg = check_configuration(A)
    n, d = cfg.n, cfg.d
    B = cfg.gale
    k = len(B[0])
    U = [tuple(B[i]) + (0,) * d for i in range(n)]
    U += [(0,) * k + tuple(int(i == j) for j in range(d)) for i in range(d)]
    V = [tuple(int(i == j) for j in range(n)) + tuple(cfg.matrix[a][i] for a in range(d)) for i in range(n)]
    return pushforward(bergman_fan(U, max_flats=max_flats), V)


def reduced_discriminant(A, max_flats=None):
    """Image of the co-Bergman fan under ``B^t`` (reduced dual variety)."""
    cfg = check_configuration(A)
    return pushforward(bergman_fan(cfg.gale, max_flats=max_flats), transpose(cfg.gale))


def membership(fan, w):
    """Is ``w`` in the (closed) support of the fan?"""
    w = tuple(w)
    if len(w) != fan.ambient:
        raise DimensionMismatch("weight vector length differs from ambient dimension")
    from .initial import _fan_shooter, integral_weight

    c = fan.ambient - fan.dim
    shooter, fast, slow, _ = _fan_shooter(fan, c)
    if shooter is not None and len(shooter):
        P, G, wv = shooter._arrays(integral_weight(w))
        inside = ((P @ wv) == 0).all(axis=1) & ((G @ wv) >= 0).all(axis=1)
        if inside.any():
            return True
    return any(cone_contains(fan.cones[i].rays, fan.lineality, w) for i in slow)


# --------------------------------------------------------------------------
# 1-skeleton picture of fans that are 2-dimensional modulo lineality


def _cross(a, b):
    return a[0] * b[1] - a[1] * b[0]


def _half(v):
    return 0 if (v[1] > 0 or (v[1] == 0 and v[0] > 0)) else 1


def _sort_angular(vs):
    def cmp(a, b):
        ha, hb = _half(a), _half(b)
        if ha != hb:
            return ha - hb
        c = _cross(a, b)
        return -1 if c > 0 else (1 if c < 0 else 0)

    return sorted(vs, key=cmp_to_key(cmp))


def _sectors_2d(vecs):
    """Pointed sectors ``(a, b)`` (counter-clockwise extremes) covering the
    planar cone generated by ``vecs``.  A pointed cone gives one sector; a
    half-plane or the whole plane is cut along the generators."""
    dirs = []
    for v in vecs:
        p = primitive(v)
        if any(p) and p not in dirs:
            dirs.append(p)
    dirs = _sort_angular(dirs)
    k = len(dirs)
    if k < 2:
        return []
    for i in range(k):
        a, b = dirs[i], dirs[(i + 1) % k]
        if _cross(a, b) < 0:
            return [(b, a)]
    if k == 2:
        return []  # two opposite rays: a line
    return [
        (dirs[i], dirs[(i + 1) % k])
        for i in range(k)
        if _cross(dirs[i], dirs[(i + 1) % k]) > 0
    ]


def fan_graph(fan, refine_crossings=True):
    """Vertices and edges of a fan that is 2-dimensional modulo lineality.

    Maximal cones become edges between their extreme rays; crossing points
    of image cones become extra vertices; a vertex met by exactly two
    coplanar edges is dissolved. Rays are returned as primitive integer
    vectors in coordinates of ``R^n / lineality``.
    """
    fan = fan.maximal()
    if fan.dim - fan.lineality_dim != 2:
        raise ValueError("fan_graph needs a fan of dimension 2 modulo lineality")
    n = fan.ambient
    P = left_kernel(from_columns(list(fan.lineality), n)) if fan.lineality else identity(n)

    def proj(v):
        return matvec(P, v)

    # sectors as pairs of quotient vectors (a, b) with a, b extreme rays
    sectors = []
    for cone in fan.cones:
        gens = [proj(r) for r in cone.rays]
        gens = [g for g in gens if any(g)]
        basis = []
        for g in gens:
            if rank(basis + [g]) > len(basis):
                basis.append(g)
        if len(basis) != 2:
            continue
        M = from_columns(basis, len(P))
        coords = [solve(M, g) for g in gens]
        secs = _sectors_2d([(c[0], c[1]) for c in coords])
        for a, b in secs:
            va = primitive(tuple(a[0] * x + a[1] * y for x, y in zip(basis[0], basis[1])))
            vb = primitive(tuple(b[0] * x + b[1] * y for x, y in zip(basis[0], basis[1])))
            sectors.append((va, vb))

    rays = []
    for a, b in sectors:
        for v in (a, b):
            if v not in rays:
                rays.append(v)

    def interior_coords(sec, v):
        a, b = sec
        sol = solve(from_columns([a, b], len(a)), v)
        return sol

    if refine_crossings:
        for s1, s2 in combinations(sectors, 2):
            M = from_columns([s1[0], s1[1], tuple(-x for x in s2[0]), tuple(-x for x in s2[1])], len(s1[0]))
            K = integer_kernel(M)
            if not K or len(K[0]) != 1:
                continue
            al, be, ga, de = (row[0] for row in K)
            if all(x > 0 for x in (al, be, ga, de)) or all(x < 0 for x in (al, be, ga, de)):
                sgn = 1 if al > 0 else -1
                v = primitive(tuple(sgn * (al * x + be * y) for x, y in zip(s1[0], s1[1])))
                if v not in rays:
                    rays.append(v)

    edges = set()
    for sec in sectors:
        inside = []
        for v in rays:
            if v in sec:
                continue
            c = interior_coords(sec, v)
            if c is not None and c[0] > 0 and c[1] > 0:
                inside.append((Fraction(c[1], 1) / (c[0] + c[1]), v))
        pts = [sec[0]] + [v for _, v in sorted(inside)] + [sec[1]]
        for u, v in zip(pts, pts[1:]):
            edges.add(frozenset((u, v)))

    # dissolve valence-2 vertices whose two edges span one plane
    changed = True
    while changed:
        changed = False
        incident = {}
        for e in edges:
            for v in e:
                incident.setdefault(v, []).append(e)
        for v, es in incident.items():
            if len(es) != 2:
                continue
            (u,) = es[0] - {v}
            (x,) = es[1] - {v}
            if u == x or rank([u, v, x]) != 2:
                continue
            c = solve(from_columns([u, x], len(u)), v)
            if c is None or not (c[0] > 0 and c[1] > 0):
                continue
            edges -= set(es)
            edges.add(frozenset((u, x)))
            changed = True
            break
    vertices = sorted({v for e in edges for v in e})
    return vertices, sorted(tuple(sorted(e)) for e in edges)
