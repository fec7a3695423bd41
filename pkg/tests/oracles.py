"""Independent reference implementations used only by the tests.

They are deliberately naive: sympy ranks instead of the package's own
elimination, Fourier-Motzkin instead of simplex, subset enumeration
instead of closure search.
"""

from fractions import Fraction
from itertools import combinations, permutations

import numpy as np
import sympy
from sympy.combinatorics import Permutation


def sym_rank(rows):
    if not rows:
        return 0
    return sympy.Matrix(rows).rank()


def fm_feasible(E, b):
    """``E x = b, x >= 0`` by Fourier-Motzkin elimination."""
    m = len(E)
    n = len(E[0]) if m else 0
    ineq = []  # (a, c) meaning a.x <= c
    for i in range(m):
        a = [Fraction(x) for x in E[i]]
        ineq.append((a, Fraction(b[i])))
        ineq.append(([-x for x in a], -Fraction(b[i])))
    for j in range(n):
        ineq.append(([Fraction(-int(k == j)) for k in range(n)], Fraction(0)))
    return fm_inequalities_feasible(ineq, n)


def fm_inequalities_feasible(ineq, n):
    """Feasibility of ``a.x <= c`` for ``(a, c)`` in ``ineq``, ``x`` free."""
    ineq = [([Fraction(x) for x in a], Fraction(c)) for a, c in ineq]
    for j in range(n):
        pos, neg, zero = [], [], []
        for a, c in ineq:
            (pos if a[j] > 0 else neg if a[j] < 0 else zero).append((a, c))
        new = list(zero)
        for ap, cp in pos:
            for an, cn in neg:
                lp, ln = -an[j], ap[j]
                a = [lp * x + ln * y for x, y in zip(ap, an)]
                new.append((a, lp * cp + ln * cn))
        # drop duplicates to keep the blow-up in check
        seen, ineq = set(), []
        for a, c in new:
            key = (tuple(a), c)
            if key not in seen:
                seen.add(key)
                ineq.append((a, c))
    return all(c >= 0 for _, c in ineq)


def is_vertex(points, p):
    """``p`` is a vertex of ``conv(points)`` iff some functional separates
    it strictly from the other points: ``a.(q - p) <= -1`` for all ``q``."""
    others = [q for q in points if tuple(q) != tuple(p)]
    if not others:
        return True
    rows = [([x - y for x, y in zip(q, p)], -1) for q in others]
    return fm_inequalities_feasible(rows, len(p))


def brute_force_flats(U):
    """All flats of the row matroid of ``U`` by checking every subset."""
    r = len(U)
    rk = {}

    def rank_of(S):
        if S not in rk:
            rk[S] = sym_rank([list(U[i]) for i in sorted(S)])
        return rk[S]

    flats = []
    for k in range(r + 1):
        for S in combinations(range(r), k):
            S = frozenset(S)
            base = rank_of(S)
            if all(rank_of(S | {e}) > base for e in range(r) if e not in S):
                flats.append(S)
    return flats


def brute_force_connected(U, S):
    """Connectivity of the restriction to ``S``: no proper split
    ``S = S1 + S2`` with ``rank S = rank S1 + rank S2``."""
    S = sorted(S)
    total = sym_rank([list(U[i]) for i in S])
    for k in range(1, len(S)):
        for part in combinations(S, k):
            if S[0] not in part:
                continue
            rest = [i for i in S if i not in part]
            if sym_rank([list(U[i]) for i in part]) + sym_rank([list(U[i]) for i in rest]) == total:
                return False
    return True


def symmetric_det_half():
    """``det(X)/2`` for the symmetric 3x3 matrix with diagonal
    ``2 x1, 2 x3, 2 x6`` and off-diagonal ``x2, x4, x5`` (the Veronese
    labelling), as ``{exponent vector: coefficient}``."""
    x = sympy.symbols("x1:7")
    X = sympy.Matrix(
        [[2 * x[0], x[1], x[3]], [x[1], 2 * x[2], x[4]], [x[3], x[4], 2 * x[5]]]
    )
    # permutation expansion, independent of sympy's det routine
    total = 0
    for perm in permutations(range(3)):
        sign = Permutation(list(perm)).signature()
        term = sign
        for i in range(3):
            term *= X[i, perm[i]]
        total += term
    poly = sympy.Poly(sympy.expand(total / 2), *x)
    return {tuple(m): Fraction(int(c)) for m, c in poly.terms()}


def random_configuration(rng, n_max=8, d_range=(2, 4), entry=3):
    """A random valid configuration (first row all ones), or None."""
    from tropdisc.config import Configuration

    d = int(rng.integers(d_range[0], d_range[1] + 1))
    n = int(rng.integers(d + 2, n_max + 1))
    body = rng.integers(0, entry + 1, size=(d - 1, n))
    A = tuple([(1,) * n] + [tuple(int(x) for x in row) for row in body])
    cfg = Configuration(A)
    return A if cfg.is_valid else None


def random_unimodular(rng, d):
    """Product of random elementary integer matrices fixing the first row
    up to adding multiples of it elsewhere."""
    U = np.eye(d, dtype=object)
    for _ in range(2 * d):
        i, j = rng.choice(d, size=2, replace=False)
        U[i] = U[i] + int(rng.integers(-2, 3)) * U[j]
    return tuple(tuple(int(x) for x in row) for row in U)
