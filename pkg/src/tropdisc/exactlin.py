"""Exact integer and rational linear algebra.

Matrices are plain row-major sequences of Python ints (or Fractions where
stated); every routine returns tuples of tuples so results are hashable and
immutable. Nothing here touches floating point.
"""

from fractions import Fraction
from math import gcd

from sympy import ZZ
from sympy.polys.matrices import DomainMatrix
from sympy.polys.matrices.normalforms import invariant_factors

from .exceptions import DimensionMismatch, NotSquare, RankDeficient, SpanMismatch

__all__ = [
    "as_int_matrix",
    "transpose",
    "matmul",
    "matvec",
    "identity",
    "rank",
    "det",
    "det_abs",
    "row_hnf",
    "integer_kernel",
    "integer_kernel_basis",
    "left_kernel",
    "saturation",
    "smith_invariants",
    "saturation_index",
    "lattice_index",
    "rref",
    "solve",
    "in_span",
    "primitive",
    "strict_cone_meets_subspace",
    "cone_meets_subspace",
    "cone_contains",
    "lp_feasible",
]


def as_int_matrix(M, ncols=None):
    """Return ``M`` as a tuple of integer row tuples, checking shape."""
    rows = tuple(tuple(int(x) for x in row) for row in M)
    if rows:
        width = len(rows[0])
        if any(len(r) != width for r in rows):
            raise DimensionMismatch("ragged matrix")
        if ncols is not None and width != ncols:
            raise DimensionMismatch(f"expected {ncols} columns, got {width}")
    for row in M:
        for x in row:
            if isinstance(x, Fraction) and x.denominator != 1:
                raise ValueError("integer matrix expected")
    return rows


def transpose(M, nrows_if_empty=0):
    if not M:
        return tuple(() for _ in range(nrows_if_empty))
    return tuple(zip(*M))


def identity(k):
    return tuple(tuple(int(i == j) for j in range(k)) for i in range(k))


def matmul(X, Y):
    cols = list(zip(*Y)) if Y else []
    return tuple(tuple(sum(a * b for a, b in zip(row, col)) for col in cols) for row in X)


def matvec(X, v):
    return tuple(sum(a * b for a, b in zip(row, v)) for row in X)


def columns(M, ncols=None):
    """Columns of ``M`` as tuples."""
    if not M:
        return tuple(() for _ in range(ncols or 0))
    return tuple(zip(*M))


def hstack(*blocks):
    """Concatenate matrices with the same number of rows left to right."""
    nonempty = [b for b in blocks if b and b[0]]
    if not nonempty:
        return tuple(blocks[0]) if blocks else ()
    height = len(nonempty[0])
    if any(len(b) != height for b in nonempty):
        raise DimensionMismatch("row counts differ")
    return tuple(sum((tuple(b[i]) for b in nonempty), ()) for i in range(height))


def from_columns(cols, nrows):
    if not cols:
        return tuple(() for _ in range(nrows))
    return tuple(zip(*cols))


# --------------------------------------------------------------------------
# fraction-free elimination


def _bareiss(M):
    """Fraction-free forward elimination; returns (rank, signed determinant
    of the leading pivot block, number of row swaps)."""
    A = [list(r) for r in M]
    m = len(A)
    n = len(A[0]) if m else 0
    prev = 1
    r = 0
    swaps = 0
    for c in range(n):
        if r == m:
            break
        piv = next((i for i in range(r, m) if A[i][c] != 0), None)
        if piv is None:
            continue
        if piv != r:
            A[r], A[piv] = A[piv], A[r]
            swaps += 1
        p = A[r][c]
        for i in range(r + 1, m):
            a_ic = A[i][c]
            row_i = A[i]
            row_r = A[r]
            for j in range(c + 1, n):
                row_i[j] = (p * row_i[j] - a_ic * row_r[j]) // prev
            row_i[c] = 0
        prev = p
        r += 1
    return r, prev, swaps


def rank(M):
    """Exact rank over the rationals."""
    if not M or not M[0]:
        return 0
    if any(isinstance(x, Fraction) for row in M for x in row):
        return len(rref(M)[1])
    return _bareiss(M)[0]


def det(M):
    n = len(M)
    if any(len(r) != n for r in M):
        raise NotSquare(f"{n} x {len(M[0]) if M else 0} matrix is not square")
    if n == 0:
        return 1
    r, last, swaps = _bareiss(M)
    if r < n:
        return 0
    return -last if swaps % 2 else last


def det_abs(M):
    """Absolute determinant via Bareiss elimination."""
    return abs(det(M))


# --------------------------------------------------------------------------
# Hermite reduction and integer kernels


def _column_reduce(A):
    """Unimodular column reduction.

    Returns ``(H, U, r)`` where ``A U = H``, ``U`` is unimodular and the last
    ``n - r`` columns of ``H`` vanish, ``r = rank(A)``.
    """
    m = len(A)
    n = len(A[0]) if m else 0
    H = [list(row) for row in A]
    U = [[int(i == j) for j in range(n)] for i in range(n)]

    def col_op(dst, src, q):
        # column dst -= q * column src
        for row in H:
            row[dst] -= q * row[src]
        for row in U:
            row[dst] -= q * row[src]

    def col_swap(a, b):
        for row in H:
            row[a], row[b] = row[b], row[a]
        for row in U:
            row[a], row[b] = row[b], row[a]

    p = 0
    for i in range(m):
        if p == n:
            break
        while True:
            nz = [j for j in range(p, n) if H[i][j] != 0]
            if not nz:
                break
            j0 = min(nz, key=lambda j: abs(H[i][j]))
            if j0 != p:
                col_swap(p, j0)
            done = True
            for j in range(p + 1, n):
                if H[i][j]:
                    col_op(j, p, H[i][j] // H[i][p])
                    if H[i][j]:
                        done = False
            if done:
                break
        if H[i][p] != 0:
            p += 1
    return H, U, p


def row_hnf(M):
    """Row-style Hermite normal form with zero rows removed.

    Pivots are positive and entries above each pivot are reduced into
    ``[0, pivot)``.
    """
    HT, _, r = _column_reduce(transpose(M)) if M and M[0] else ([], [], 0)
    if r == 0:
        return ()
    H = [list(row) for row in transpose(HT)][:r]
    # H is echelon: pivot of row k sits strictly right of pivot of row k-1
    pivots = []
    for k, row in enumerate(H):
        c = next(j for j, x in enumerate(row) if x != 0)
        if row[c] < 0:
            H[k] = [-x for x in row]
        pivots.append(c)
    for k, c in enumerate(pivots):
        p = H[k][c]
        for i in range(k):
            q = H[i][c] // p
            if q:
                H[i] = [a - q * b for a, b in zip(H[i], H[k])]
    return tuple(tuple(row) for row in H)


def integer_kernel(M, ncols=None):
    """Saturated integer basis of the right kernel of ``M``, as columns.

    Works for any integer matrix; the basis is canonicalized by the row
    Hermite normal form of its transpose.
    """
    M = as_int_matrix(M)
    n = len(M[0]) if M else ncols
    if n is None:
        raise ValueError("cannot infer column count of an empty matrix")
    if not M:
        return identity(n)
    _, U, r = _column_reduce(M)
    kernel_rows = [tuple(U[i][j] for i in range(n)) for j in range(r, n)]
    if not kernel_rows:
        return tuple(() for _ in range(n))
    return transpose(row_hnf(kernel_rows))


def integer_kernel_basis(A):
    """Gale dual: an ``n x (n-d)`` integer matrix whose columns generate
    ``ker(A) ∩ Z^n``. ``A`` must have full row rank."""
    A = as_int_matrix(A)
    d = len(A)
    if rank(A) < d:
        raise RankDeficient(f"matrix of rank {rank(A)} < {d} rows")
    return integer_kernel(A)


def left_kernel(M, nrows=None):
    """Integer rows ``p`` (saturated basis) with ``p M = 0``."""
    M = as_int_matrix(M)
    if not M:
        return ()
    if not M[0]:
        return identity(len(M))
    K = integer_kernel(transpose(M))
    return transpose(K, 0) if K and K[0] else ()


def saturation(M, nrows=None):
    """Columns forming a basis of ``span(M) ∩ Z^n`` for integer ``M``."""
    M = as_int_matrix(M)
    n = len(M) if M else nrows
    if not M or not M[0] or rank(M) == 0:
        return tuple(() for _ in range(n))
    P = left_kernel(M)
    if not P:
        return identity(n)
    return integer_kernel(P)


def smith_invariants(M):
    """Nonzero invariant factors of an integer matrix."""
    M = as_int_matrix(M)
    if not M or not M[0]:
        return ()
    dm = DomainMatrix([[ZZ(x) for x in row] for row in M], (len(M), len(M[0])), ZZ)
    return tuple(int(f) for f in invariant_factors(dm) if f != 0)


def saturation_index(M):
    """Index of the lattice generated by the columns of ``M`` inside its
    saturation (product of the nonzero invariant factors)."""
    out = 1
    for f in smith_invariants(M):
        out *= f
    return out


def lattice_index(sub, sup):
    """Index ``[L(sup) : L(sub)]`` of column lattices.

    Both matrices must span the same rational subspace and ``L(sub)`` must
    lie inside ``L(sup)``.
    """
    sub = as_int_matrix(sub)
    sup = as_int_matrix(sup)
    if len(sub) != len(sup):
        raise DimensionMismatch("ambient dimensions differ")
    r_sub, r_sup = rank(sub), rank(sup)
    if r_sub != r_sup or rank(hstack(sub, sup)) != r_sup:
        raise SpanMismatch("column spans differ")
    if r_sup == 0:
        return 1
    # containment: every column of sub is an integer combination of sup
    hnf = row_hnf(transpose(sup))
    for col in columns(sub):
        if not _in_row_lattice(hnf, col):
            raise SpanMismatch("sub lattice is not contained in sup lattice")
    a, b = saturation_index(sub), saturation_index(sup)
    return a // b


def _in_row_lattice(hnf, v):
    """Membership of integer vector ``v`` in the row lattice of an HNF."""
    v = list(v)
    for row in hnf:
        c = next(j for j, x in enumerate(row) if x != 0)
        if v[c] % row[c]:
            return False
        q = v[c] // row[c]
        if q:
            v = [a - q * b for a, b in zip(v, row)]
    return not any(v)


# --------------------------------------------------------------------------
# rational elimination


def rref(M):
    """Reduced row echelon form over Q; returns (rows, pivot columns)."""
    A = [[Fraction(x) for x in row] for row in M]
    m = len(A)
    n = len(A[0]) if m else 0
    pivots = []
    r = 0
    for c in range(n):
        piv = next((i for i in range(r, m) if A[i][c] != 0), None)
        if piv is None:
            continue
        A[r], A[piv] = A[piv], A[r]
        p = A[r][c]
        A[r] = [x / p for x in A[r]]
        for i in range(m):
            if i != r and A[i][c] != 0:
                f = A[i][c]
                A[i] = [a - f * b for a, b in zip(A[i], A[r])]
        pivots.append(c)
        r += 1
        if r == m:
            break
    return A, tuple(pivots)


def solve(M, b):
    """One rational solution ``x`` of ``M x = b`` or ``None``."""
    m = len(M)
    n = len(M[0]) if m else 0
    aug = [list(row) + [bi] for row, bi in zip(M, b)]
    R, piv = rref(aug)
    if n in piv:
        return None
    x = [Fraction(0)] * n
    for k, c in enumerate(piv):
        x[c] = R[k][n]
    return tuple(x)


def in_span(cols, v):
    """Is ``v`` a rational combination of the given column vectors?"""
    if not cols:
        return not any(v)
    return solve(from_columns(cols, len(v)), v) is not None


def primitive(v):
    """Scale a rational vector to the primitive integer vector on its ray."""
    fr = [Fraction(x) for x in v]
    den = 1
    for x in fr:
        den = den * x.denominator // gcd(den, x.denominator)
    ints = [int(x * den) for x in fr]
    g = 0
    for x in ints:
        g = gcd(g, x)
    if g == 0:
        return tuple(ints)
    return tuple(x // g for x in ints)


# --------------------------------------------------------------------------
# exact LP feasibility (phase one simplex, Bland's rule)


def lp_feasible(E, b):
    """Decide whether ``E x = b, x >= 0`` has a rational solution.

    Dense phase-one simplex over ``Fraction`` with Bland's anti-cycling
    rule. Returns a feasible ``x`` (tuple of Fractions) or ``None``.
    """
    m = len(E)
    n = len(E[0]) if m else 0
    if m == 0:
        return tuple(Fraction(0) for _ in range(n))
    # tableau rows: [E | I | b] with b >= 0
    T = []
    for i in range(m):
        row = [Fraction(x) for x in E[i]]
        rhs = Fraction(b[i])
        if rhs < 0:
            row = [-x for x in row]
            rhs = -rhs
        T.append(row + [Fraction(int(i == k)) for k in range(m)] + [rhs])
    basis = list(range(n, n + m))
    width = n + m
    # phase-one objective: minimise sum of artificials -> reduced costs
    cost = [Fraction(0)] * (width + 1)
    for row in T:
        for j in range(width + 1):
            cost[j] -= row[j]
    for k in range(m):
        cost[n + k] = Fraction(0)
    while True:
        enter = next((j for j in range(width) if cost[j] < 0), None)
        if enter is None:
            break
        best = None
        for i in range(m):
            a = T[i][enter]
            if a > 0:
                ratio = T[i][width] / a
                key = (ratio, basis[i])
                if best is None or key < best[0]:
                    best = (key, i)
        if best is None:  # unbounded phase one cannot happen; guard anyway
            break
        i = best[1]
        piv = T[i][enter]
        T[i] = [x / piv for x in T[i]]
        for k in range(m):
            if k != i and T[k][enter] != 0:
                f = T[k][enter]
                T[k] = [a - f * c for a, c in zip(T[k], T[i])]
        if cost[enter] != 0:
            f = cost[enter]
            cost = [a - f * c for a, c in zip(cost, T[i])]
        basis[i] = enter
    if -cost[width] != 0:
        return None
    x = [Fraction(0)] * width
    for i, j in enumerate(basis):
        x[j] = T[i][width]
    return tuple(x[:n])


def _quotient_map(subspace, n):
    """Integer rows whose common kernel is the column span of ``subspace``."""
    if not subspace or not subspace[0] or rank(subspace) == 0:
        return identity(n)
    return left_kernel(subspace)


def strict_cone_meets_subspace(gens, subspace):
    """Does ``R_{>0}{gens}`` meet the column span of ``subspace``?

    Decided as feasibility of ``sum lam_j g_j in span(subspace)`` with every
    ``lam_j >= 1``, which is equivalent because the cone is homogeneous.
    """
    return cone_meets_subspace(gens, subspace, strict=True)


def cone_meets_subspace(gens, subspace, strict=True):
    """Open (``strict``) or closed cone against a linear subspace.

    The closed variant asks for ``lam >= 0`` not all zero (normalized to
    ``sum lam = 1``).
    """
    gens = [tuple(g) for g in gens]
    if not gens:
        raise DimensionMismatch("empty generator list")
    n = len(gens[0])
    if any(len(g) != n for g in gens):
        raise DimensionMismatch("generators of different lengths")
    if subspace and subspace[0] and len(subspace) != n:
        raise DimensionMismatch("subspace ambient dimension differs")
    N = _quotient_map(subspace, n)
    if not N:
        return True
    images = [matvec(N, g) for g in gens]
    k = len(gens)
    E = [[images[j][i] for j in range(k)] for i in range(len(N))]
    if strict:
        # lam = 1 + x, x >= 0
        rhs = [-sum(images[j][i] for j in range(k)) for i in range(len(N))]
        return lp_feasible(E, rhs) is not None
    E.append([1] * k)
    return lp_feasible(E, [0] * len(N) + [1]) is not None


def cone_contains(gens, lineality, point):
    """Is ``point`` in ``R_{>=0}{gens} + span(lineality)`` (closed cone)?

    ``gens`` and ``lineality`` are lists of vectors.
    """
    point = tuple(point)
    n = len(point)
    lineality = [tuple(v) for v in lineality if any(v)]
    N = _quotient_map(from_columns(lineality, n), n) if lineality else identity(n)
    if not N:
        return True
    target = matvec(N, point)
    if not gens:
        return not any(target)
    images = [matvec(N, g) for g in gens]
    E = [[img[i] for img in images] for i in range(len(N))]
    return lp_feasible(E, target) is not None
