"""Initial cycles, codimension and degree of dual varieties of toric varieties.

Two independent engines compute the same :class:`InitialCycle`:

* :class:`ChainEngine` sums ``|det(A^t, sigma, e_tau)|`` over chains of
  flats whose cone condition holds.  The condition is decided by solving
  the square system ``w = A^t a + sum b_j sigma_j - sum g_k e_tau_k`` and
  reading signs; a zero coordinate means ``w`` lies on a wall.
* :func:`initial_cycle_of_fan` shoots the cones ``w + R_{>0} e_tau``
  into an arbitrary weighted fan and adds up lattice multiplicities.
"""

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from math import factorial, gcd, lcm

import numpy as np

from .config import check_configuration, check_weight
from .exactlin import (
    as_int_matrix,
    cone_contains,
    det_abs,
    from_columns,
    left_kernel,
    lp_feasible,
    matvec,
    rank,
    saturation,
    solve,
    strict_cone_meets_subspace,
    transpose,
)
from .exceptions import Defective, GenericityFailure, NonPureFan
from .fan import chain_rank
from .matroid import FlatLattice, chain_vectors

DEFAULT_BUDGET = 32
WEIGHT_RANGE = 10**6
_INT64_SAFE = 2**62


@dataclass
class InitialCycle:
    """Multiplicities of the coordinate primes ``<x_i : i in tau>``.

    Keys are sorted tuples of 1-based column labels of length ``codim``.
    """

    codim: int
    entries: dict
    w: tuple = ()

    @property
    def degree(self):
        return sum(self.entries.values())

    def exponent_vector(self, n):
        if self.codim != 1:
            raise Defective(self.codim)
        u = [0] * n
        for (i,), m in self.entries.items():
            u[i - 1] = m
        return tuple(u)

    def incidence_weights(self, n):
        """``u_i = sum of mult over tau containing i``; the exponent vector
        when ``codim == 1``."""
        u = [0] * n
        for tau, m in self.entries.items():
            for i in tau:
                u[i - 1] += m
        return tuple(u)

    def __eq__(self, other):
        if isinstance(other, InitialCycle):
            return self.codim == other.codim and self.entries == other.entries
        if isinstance(other, dict):
            return self.entries == other
        return NotImplemented

    def to_dict(self):
        return {
            "codim": self.codim,
            "w": [str(x) for x in self.w],
            "entries": [{"tau": list(t), "mult": m} for t, m in sorted(self.entries.items())],
        }


@dataclass
class GenericityReport:
    attempts: int = 0
    failures: list = field(default_factory=list)

    def record(self, exc):
        self.failures.append((exc.w, exc.reason))


def integral_weight(w):
    """Positive rescaling of a rational vector to an integer vector."""
    den = lcm(*(Fraction(x).denominator for x in w)) if len(w) else 1
    return tuple(int(Fraction(x) * den) for x in w)


# --------------------------------------------------------------------------
# codimension


def codimension(A, lattice=None, return_defective=False, max_flats=None):
    """``c = n - max rank(A^t, sigma)`` over maximal chains ``sigma``."""
    cfg = check_configuration(A)
    kw = {} if max_flats is None else {"max_flats": max_flats}
    lat = lattice or FlatLattice(cfg.gale, **kw)
    best = max(chain_rank(cfg.matrix, ch) for ch in lat.maximal_chains())
    c = cfg.n - best
    return (c, c > 1) if return_defective else c


# --------------------------------------------------------------------------
# chain engine


def _small_det(M):
    """Determinants of a stack ``(S, k, k)`` of small integer matrices."""
    k = M.shape[1]
    if k == 0:
        return np.ones(M.shape[0], dtype=M.dtype)
    return _minors(M, list(range(k)))[(1 << k) - 1]


def _minors(M, rows):
    """Maximal minors of ``M[:, rows, :]`` for a stack of matrices.

    Returns ``{column bitmask: determinants}`` for every set of
    ``len(rows)`` columns, by Laplace expansion along successive rows.
    """
    ncols = M.shape[2]
    level = {0: np.ones(M.shape[0], dtype=M.dtype)}
    for t, r in enumerate(rows):
        nxt = {}
        for mask, val in level.items():
            for j in range(ncols):
                if mask >> j & 1:
                    continue
                new = mask | (1 << j)
                pos = bin(new & ((1 << j) - 1)).count("1")
                term = M[:, r, j] * val
                if (t + pos) % 2:
                    term = -term
                nxt[new] = nxt[new] + term if new in nxt else term
        level = nxt
    return level


def _small_adj(M):
    """Adjugates of a stack of small square integer matrices."""
    S, k, _ = M.shape
    adj = np.empty_like(M)
    if k == 1:
        adj[:, 0, 0] = 1
        return adj
    full = (1 << k) - 1
    for i in range(k):
        minors = _minors(M, [r for r in range(k) if r != i])
        for j in range(k):
            val = minors[full ^ (1 << j)]
            adj[:, j, i] = val if (i + j) % 2 == 0 else -val
    return adj


def _row_gcd_reduce(X):
    """Divide every row of a stack of integer matrices by its content."""
    g = np.zeros(X.shape[:2], dtype=object)
    for idx in np.ndindex(*X.shape[:2]):
        acc = 0
        for v in X[idx]:
            acc = gcd(acc, int(v))
        g[idx] = acc or 1
    return X // g[:, :, None]


def _fit_dtype(X):
    big = max((abs(int(v)) for v in X.flat), default=0)
    return X.astype(np.int64) if big < 2**31 else X


class RayShooter:
    """Batched sign tests for ``w + R_{>0}{e_tau}`` against simplicial cones.

    The cones live in ``R^q`` after an integer projection ``Q`` (``q x n``)
    that kills a common lineality space; cone ``s`` is ``R_{>0}`` of the
    ``k`` columns of ``gens[s]`` (shape ``(S, q, k)``, rank ``k``) and
    ``c = q - k``.  For each cone we keep an integer left kernel ``P`` of
    the generators (lifted to ``c x n``) and an integer left inverse ``G``
    with ``G gens = g I`` (lifted to ``k x n``), both row-reduced.  The
    system ``Q w = gens beta + Q e_tau z`` is then solved with ``c x c``
    adjugates: the ray meets the open cone iff ``beta > 0`` and ``z < 0``.
    Cones of lower rank are dropped; ``index`` maps kept cones back.
    """

    def __init__(self, gens, Q, c):
        gens = np.asarray(gens, dtype=object)
        self.Q = np.asarray(Q, dtype=object)
        q, n = self.Q.shape
        S = gens.shape[0]
        k = q - c
        self.c, self.k, self.n = c, k, n
        self.taus = list(combinations(range(n), c))
        # per cone, k rows of the generator matrix with a nonzero minor
        chosen = np.full(S, -1)
        dets = np.zeros(S, dtype=object)
        row_sets = list(combinations(range(q), k))
        full = (1 << k) - 1
        for ri, R in enumerate(row_sets):
            todo = chosen < 0
            if not todo.any():
                break
            val = _minors(gens, list(R))[full] if k else np.ones(S, dtype=object)
            ok = todo & (val != 0)
            chosen[ok] = ri
            dets[ok] = val[ok]
        self.index = np.flatnonzero(chosen >= 0)
        gens, chosen, dets = gens[self.index], chosen[self.index], dets[self.index]
        S = len(self.index)
        Pt = np.zeros((S, c, q), dtype=object)
        Gt = np.zeros((S, k, q), dtype=object)
        for ri in set(chosen.tolist()):
            sel = np.flatnonzero(chosen == ri)
            R = list(row_sets[ri])
            MR = gens[sel][:, R, :]
            adj = _small_adj(MR) if k else np.zeros((len(sel), 0, 0), dtype=object)
            D = dets[sel]
            sgn = np.where(D > 0, 1, -1).astype(object)
            G = np.zeros((len(sel), k, q), dtype=object)
            G[:, :, R] = adj * sgn[:, None, None]
            Gt[sel] = G
            P = np.zeros((len(sel), c, q), dtype=object)
            for t, j in enumerate(i for i in range(q) if i not in R):
                P[:, t, j] = D
                if k:
                    P[:, t, R] = -np.einsum("sa,sab->sb", gens[sel][:, j, :], adj)
            Pt[sel] = P
        self.gens = gens
        self._P = _fit_dtype(_row_gcd_reduce(np.einsum("sca,an->scn", Pt, self.Q)))
        self._G = _fit_dtype(_row_gcd_reduce(np.einsum("ska,an->skn", Gt, self.Q)))
        self._coef_bound = max(
            [abs(int(v)) for v in self._P.flat] + [abs(int(v)) for v in self._G.flat] + [1]
        )

    def __len__(self):
        return len(self.index)

    def _arrays(self, w):
        c = self.c
        bound = self._coef_bound ** (c + 1) * max(abs(x) for x in w) * self.n
        bound *= factorial(c + 1) * (self.n + 1)
        if bound < _INT64_SAFE:
            return self._P.astype(np.int64), self._G.astype(np.int64), np.array(w, dtype=np.int64)
        return self._P.astype(object), self._G.astype(object), np.array(w, dtype=object)

    def scan(self, w):
        """Yield ``(tau, hits, walls, points)`` for every ``tau``.

        ``w`` must be an integer vector.  ``hits`` and ``walls`` are arrays
        of kept-cone positions; ``points[s]`` is the exact vector ``z`` of
        hit ``s`` (so the intersection point is ``w - z e_tau``).
        """
        k = self.k
        if not len(self):
            return
        P, G, wv = self._arrays(w)
        Pw = P @ wv
        Gw = G @ wv
        for tau in self.taus:
            idx = list(tau)
            Pt = P[:, :, idx]
            D = _small_det(Pt)
            ok = D != 0
            if not ok.any():
                continue
            sgn = np.where(D > 0, 1, -1)
            zD = np.einsum("sij,sj->si", _small_adj(Pt), Pw)  # z * D
            bD = D[:, None] * Gw - np.einsum("sij,sj->si", G[:, :, idx], zD)
            bs = bD * sgn[:, None]
            zs = zD * sgn[:, None]
            if k:
                beta_pos = (bs > 0).all(axis=1)
                beta_nonneg = (bs >= 0).all(axis=1)
            else:
                beta_pos = beta_nonneg = np.ones(len(D), dtype=bool)
            hit = ok & beta_pos & (zs < 0).all(axis=1)
            wall = ok & beta_nonneg & (zs <= 0).all(axis=1) & ~hit
            hits = np.flatnonzero(hit)
            points = {
                int(s): tuple(Fraction(int(v), int(D[s])) for v in zD[s]) for s in hits
            }
            yield tau, hits, np.flatnonzero(wall), points


class ChainEngine:
    """Precomputed per-chain data for fast initial cycles.

    Everything is pushed to ``R^(n-d)`` by the Gale dual: modulo the row
    space of ``A`` the cone condition reads ``B^t w = (B^t sigma) beta +
    (B^t e_tau) z`` with ``beta > 0`` and ``z < 0`` (see :class:`RayShooter`).
    Multiplicities ``|det(A^t, sigma, e_tau)|`` equal
    ``|det(B^t sigma, B^t e_tau)|`` and are taken only for hits.
    """

    def __init__(self, A, lattice=None, codim=None, max_flats=None):
        self.config = cfg = check_configuration(A)
        kw = {} if max_flats is None else {"max_flats": max_flats}
        self.lattice = lattice or FlatLattice(cfg.gale, **kw)
        self.n, self.d = cfg.n, cfg.d
        self.codim = codim if codim is not None else codimension(cfg, self.lattice)
        n, c = self.n, self.codim
        m = n - self.d
        k = self.chain_length = m - c
        Bt = np.array(transpose(cfg.gale), dtype=object).reshape(m, n)
        self._Bt = Bt
        candidates = self.lattice.chains_of_length(k)
        X = np.zeros((len(candidates), n, k), dtype=object)
        for s, chain in enumerate(candidates):
            for j, F in enumerate(chain):
                for i in F:
                    X[s, i, j] = 1
        gens = np.einsum("ab,sbj->saj", Bt, X)
        self.shooter = RayShooter(gens, Bt, c)
        self.chains = [candidates[s] for s in self.shooter.index]
        self.taus = self.shooter.taus

    def multiplicity(self, s, tau):
        """``|det(A^t, sigma, e_tau)|`` for chain index ``s``."""
        M = self.shooter.gens[s]
        cols = [tuple(int(v) for v in M[:, j]) for j in range(self.chain_length)]
        cols += [tuple(int(v) for v in self._Bt[:, i]) for i in tau]
        return det_abs(from_columns(cols, self.n - self.d))

    def cycle(self, w, strict=True):
        """Initial cycle at ``w``; raises :class:`GenericityFailure` when
        ``w`` lies on a wall (only if ``strict``).

        For ``c > 1`` one intersection point is usually reached through
        several chains (the cones ``R_{>=0} sigma + rowspace`` overlap once
        their generators become dependent modulo the row space); each
        point is counted once.
        """
        w = check_weight(w, self.n)
        c = self.codim
        entries = {}
        for tau, hits, walls, points in self.shooter.scan(integral_weight(w)):
            if strict and len(walls):
                s = int(walls[0])
                raise GenericityFailure(
                    w,
                    "boundary intersection",
                    {"chain": _labels(self.chains[s]), "tau": [i + 1 for i in tau]},
                )
            if c == 1:
                total = sum(self.multiplicity(int(s), tau) for s in hits)
            else:
                seen = {}
                for s in hits:
                    if points[int(s)] not in seen:
                        seen[points[int(s)]] = self.multiplicity(int(s), tau)
                total = sum(seen.values())
            if total:
                entries[tuple(i + 1 for i in tau)] = total
        return InitialCycle(c, entries, w)

    def cycle_lp(self, w, strict=True):
        """Reference route: decide every (chain, tau) pair with the exact
        LP and take determinants with Bareiss elimination."""
        return _initial_cycle_lp(self.config, self.lattice, self.codim, w, strict)


def _labels(chain):
    return [sorted(i + 1 for i in F) for F in chain]


def _initial_cycle_lp(cfg, lat, c, w, strict=True):
    w = check_weight(w, cfg.n)
    n, d = cfg.n, cfg.d
    rows = [tuple(r) for r in cfg.matrix]
    N = left_kernel(from_columns(rows, n))
    Nw = matvec(N, w)
    entries = {}
    seen = {}
    for chain in lat.chains_of_length(n - d - c):
        sig = chain_vectors(chain, n)
        if rank(rows + sig) != n - c:
            continue
        for tau in combinations(range(n), c):
            es = [tuple(int(i == t) for i in range(n)) for t in tau]
            D = det_abs(from_columns(rows + sig + es, n))
            if D == 0:
                continue
            gens = sig + [tuple(-x for x in e) for e in es] + [tuple(-x for x in w)]
            if strict_cone_meets_subspace(gens, from_columns(rows, n)):
                key = tuple(t + 1 for t in tau)
                if c > 1:
                    point = solve(from_columns(rows + sig + es, n), w)[-c:]
                    if point in seen.setdefault(key, set()):
                        continue
                    seen[key].add(point)
                entries[key] = entries.get(key, 0) + D
            elif strict:
                # closed version with the coefficient of w pinned to 1
                E = [
                    [matvec([r], v)[0] for v in sig + [tuple(-x for x in e) for e in es]]
                    for r in N
                ]
                if lp_feasible(E, Nw) is not None:
                    raise GenericityFailure(w, "boundary intersection")
    return InitialCycle(c, entries, w)


def initial_cycle(A, w, engine=None, method="fast", strict=True):
    """Initial cycle of the dual variety at weight ``w``."""
    engine = engine or ChainEngine(A)
    if method == "lp":
        return engine.cycle_lp(w, strict)
    return engine.cycle(w, strict)


def initial_monomial(A, w, engine=None):
    """Exponent vector of the initial form of the discriminant at ``w``."""
    engine = engine or ChainEngine(A)
    if engine.codim != 1:
        raise Defective(engine.codim)
    return engine.cycle(w).exponent_vector(engine.n)


def sample_weight(rng, n):
    return tuple(int(x) for x in rng.integers(0, WEIGHT_RANGE + 1, size=n))


def generic_cycle(compute, n, rng, budget=DEFAULT_BUDGET, report=None):
    """Draw weights until ``compute(w)`` succeeds; returns the cycle."""
    report = report if report is not None else GenericityReport()
    last = None
    for _ in range(budget):
        w = sample_weight(rng, n)
        report.attempts += 1
        try:
            return compute(w)
        except GenericityFailure as exc:
            report.record(exc)
            last = exc
    raise last or GenericityFailure((), "budget exhausted", report)


def degree(A, seed=0, budget=DEFAULT_BUDGET, engine=None, report=None):
    """Degree of the dual variety, confirmed at two independent weights."""
    engine = engine or ChainEngine(A)
    rng = np.random.default_rng(seed)
    first = generic_cycle(engine.cycle, engine.n, rng, budget, report)
    second = generic_cycle(engine.cycle, engine.n, rng, budget, report)
    if first.degree != second.degree:
        raise RuntimeError(
            f"degree differs between weights {first.w} and {second.w}: "
            f"{first.degree} vs {second.degree}"
        )
    return first.degree


# --------------------------------------------------------------------------
# generic ray shooting into a weighted fan


def _cone_data(fan, cone):
    lin = list(fan.lineality)
    gens = list(cone.rays) + lin
    sat = saturation(from_columns(gens, fan.ambient)) if gens else ()
    basis = list(zip(*sat)) if sat and sat[0] else []
    simplicial = rank(gens) == len(gens) if gens else True
    return basis, simplicial


def _fan_shooter(fan, c):
    """Batched shooter over the cones that are simplicial modulo the
    lineality space; cached on the fan object."""
    cache = fan.__dict__.setdefault("_shooters", {})
    if c in cache:
        return cache[c]
    n = fan.ambient
    lin = list(fan.lineality)
    Q = left_kernel(from_columns(lin, n)) if lin else tuple(
        tuple(int(i == j) for j in range(n)) for i in range(n)
    )
    q = len(Q)
    k = q - c
    pos = [i for i, cone in enumerate(fan.cones) if len(cone.rays) == k]
    Qa = np.array(Q, dtype=object).reshape(q, n)
    gens = np.zeros((len(pos), q, k), dtype=object)
    for s, i in enumerate(pos):
        for j, r in enumerate(fan.cones[i].rays):
            gens[s, :, j] = Qa @ np.array(r, dtype=object)
    shooter = RayShooter(gens, Qa, c) if k >= 0 else None
    fast = [pos[s] for s in shooter.index] if shooter else []
    cache[c] = (shooter, fast, [i for i in range(len(fan.cones)) if i not in set(fast)], {})
    return cache[c]


def _lattice_multiplicity(fan, i, tau, bases):
    if i not in bases:
        bases[i] = _cone_data(fan, fan.cones[i])[0]
    n = fan.ambient
    es = [tuple(int(r == t) for r in range(n)) for t in tau]
    return det_abs(from_columns(bases[i] + es, n))


def initial_cycle_of_fan(fan, w, c, strict=True, method="fast"):
    """Intersect ``w + R_{>0}{e_tau}`` with every maximal cone of ``fan``.

    Each transversal intersection point in a cone's relative interior
    contributes ``mult(cone) * |det(e_tau | lattice basis of span(cone))|``.
    Contributions add up over overlapping cones unless the fan is marked
    non-additive, in which case each intersection point counts once.

    ``method="fast"`` runs cones that are simplicial modulo the lineality
    space through :class:`RayShooter`; ``"exact"`` solves every
    (cone, tau) system separately with rational arithmetic.
    """
    n = fan.ambient
    w = check_weight(w, n)
    dims = {fan.cone_dim(cn) for cn in fan.cones}
    if len(dims) > 1:
        raise NonPureFan(f"cone dimensions {sorted(dims)}")
    if dims and dims != {n - c}:
        raise NonPureFan(f"fan has dimension {dims.pop()}, expected {n - c}")
    entries = {}
    seen = {}

    def add(tau, t, amount):
        key = tuple(i + 1 for i in tau)
        if not fan.additive:
            if t in seen.setdefault(key, set()):
                return
            seen[key].add(t)
        entries[key] = entries.get(key, 0) + amount

    if method == "fast":
        shooter, fast, rest, bases = _fan_shooter(fan, c)
        if shooter is not None and len(shooter):
            for tau, hits, walls, points in shooter.scan(integral_weight(w)):
                if strict and len(walls):
                    raise GenericityFailure(w, "boundary intersection")
                for s in hits:
                    i = fast[int(s)]
                    t = tuple(-v for v in points[int(s)])
                    add(tau, t, fan.cones[i].mult * _lattice_multiplicity(fan, i, tau, bases))
    elif method == "exact":
        rest = range(len(fan.cones))
    else:
        raise ValueError(f"unknown method {method!r}")
    lin = list(fan.lineality)
    for i in rest:
        cone = fan.cones[i]
        basis, simplicial = _cone_data(fan, cone)
        rays = list(cone.rays)
        for tau in combinations(range(n), c):
            es = [tuple(int(r == t) for r in range(n)) for t in tau]
            M = from_columns(basis + es, n)
            D = det_abs(M)
            if D == 0:
                if strict and _nontransversal_hit(rays, lin, es, w):
                    raise GenericityFailure(w, "non-transversal")
                continue
            # w = sum x_b basis_b - sum t e_tau  with t > 0
            x = solve(M, w)
            t = tuple(-v for v in x[len(basis) :])
            point = tuple(
                sum(x[j] * basis[j][r] for j in range(len(basis))) for r in range(n)
            )
            if simplicial:
                coords = solve(from_columns(rays + lin, n), point)
                lam = coords[: len(rays)]
                inside = all(v > 0 for v in lam)
                closed = all(v >= 0 for v in lam)
            else:
                closed = cone_contains(rays, lin, point)
                inside = closed and (
                    not rays
                    or strict_cone_meets_subspace(
                        rays + [tuple(-v for v in point)], from_columns(lin, n)
                    )
                )
            if closed and all(v >= 0 for v in t) and not (inside and all(v > 0 for v in t)):
                if strict:
                    raise GenericityFailure(w, "boundary intersection")
                continue
            if inside and all(v > 0 for v in t):
                add(tau, t, cone.mult * D)
    return InitialCycle(c, entries, w)


def _nontransversal_hit(rays, lin, es, w):
    n = len(w)
    span = rays + lin + es
    if rank(span + [tuple(w)]) > rank(span):
        return False
    # w + R_{>=0} e_tau meets the closed cone
    gens = rays + lin + [tuple(-x for x in v) for v in lin] + [tuple(-x for x in e) for e in es]
    E = from_columns(gens, n)
    return lp_feasible(E, w) is not None


def degree_of_fan(fan, c, seed=0, budget=DEFAULT_BUDGET, report=None, method="fast"):
    rng = np.random.default_rng(seed)

    def compute(w):
        return initial_cycle_of_fan(fan, w, c, method=method)

    first = generic_cycle(compute, fan.ambient, rng, budget, report)
    second = generic_cycle(compute, fan.ambient, rng, budget, report)
    if first.degree != second.degree:
        raise RuntimeError(
            f"degree differs between weights {first.w} and {second.w}: "
            f"{first.degree} vs {second.degree}"
        )
    return first.degree


def toric_fan(A):
    """The row space of ``A`` as a one-cone fan (the toric variety itself)."""
    from .fan import WeightedFan

    A = as_int_matrix(A)
    return WeightedFan(len(A[0]), A, [((), 1)])
