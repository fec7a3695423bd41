"""Lattices of flats of vector configurations.

The matroid is always the one given by the *rows* of an integer matrix
``U`` (for A-discriminants, the rows of a Gale dual ``B``).  A flat is a
zero set ``{i : u_i = 0}`` of a vector ``u`` in the column space of ``U``;
flats are stored as frozensets of 0-based indices.
"""

from functools import cached_property
from itertools import combinations

from .exactlin import as_int_matrix, integer_kernel, rank, solve, transpose
from .exceptions import LatticeTooLarge, PyramidInput

DEFAULT_MAX_FLATS = 100_000


def incidence(flat, n):
    """0/1 incidence vector ``e_X`` of a flat."""
    return tuple(int(i in flat) for i in range(n))


def chain_vectors(chain, n):
    return [incidence(X, n) for X in chain]


def closure(vectors, S):
    """Common zero set of ``{u in im(U) : u_i = 0 for i in S}``.

    That is the set of rows of ``U`` annihilated by the integer kernel of
    the rows indexed by ``S``; the whole ground set when that kernel is 0.
    """
    S = sorted(S)
    k = len(vectors[0]) if vectors else 0
    if k == 0:
        return frozenset(range(len(vectors)))
    K = integer_kernel([vectors[i] for i in S]) if S else integer_kernel([], ncols=k)
    if not K or not K[0]:
        return frozenset(range(len(vectors)))
    Kc = transpose(K)
    return frozenset(
        i
        for i, row in enumerate(vectors)
        if all(sum(a * b for a, b in zip(row, col)) == 0 for col in Kc)
    )


def _flat_key(flat):
    return (len(flat), tuple(sorted(flat)))


class FlatLattice:
    """Geometric lattice of flats of the row matroid of ``U``.

    Flats are discovered breadth-first from the bottom by closing
    ``F ∪ {e}`` for every flat ``F`` and element ``e``; this visits every
    flat and records the cover relations on the way.

    Parameters
    ----------
    vectors : integer matrix
        The ``r x k`` matrix whose rows are the matroid elements.
    max_flats : int
        Refuse lattices with more flats than this.
    allow_loops : bool
        When false (the default) a nonempty bottom flat raises
        :class:`PyramidInput`.
    """

    def __init__(self, vectors, max_flats=DEFAULT_MAX_FLATS, allow_loops=False):
        self.vectors = as_int_matrix(vectors)
        self.ground_size = len(self.vectors)
        self.max_flats = max_flats
        self.rank = rank(self.vectors) if self.vectors and self.vectors[0] else 0
        bottom = self.closure(())
        if bottom and not allow_loops:
            raise PyramidInput(f"elements {sorted(i + 1 for i in bottom)} are loops")
        self.bottom = bottom
        self.top = frozenset(range(self.ground_size))
        self._build()

    # -- closure and rank -------------------------------------------------

    def rank_of(self, S):
        S = sorted(S)
        if not S or not self.vectors[0]:
            return 0
        return rank([self.vectors[i] for i in S])

    def closure(self, S):
        return closure(self.vectors, S)

    def _build(self):
        ranks = {self.bottom: 0}
        covers = {}
        level = [self.bottom]
        count = 1
        while level:
            nxt = {}
            for F in level:
                ups = set()
                rest = [e for e in range(self.ground_size) if e not in F]
                seen = set()
                for e in rest:
                    if e in seen:
                        continue
                    G = self.closure(F | {e})
                    seen |= G
                    ups.add(G)
                covers[F] = sorted(ups, key=_flat_key)
                for G in ups:
                    if G not in ranks and G not in nxt:
                        nxt[G] = ranks[F] + 1
                        count += 1
                        if count > self.max_flats:
                            raise LatticeTooLarge(
                                f"more than {self.max_flats} flats; raise max_flats"
                            )
            ranks.update(nxt)
            level = sorted(nxt, key=_flat_key)
        self.flat_rank = ranks
        self.covers = covers
        self.flats = tuple(sorted(ranks, key=lambda F: (ranks[F], sorted(F))))
        self._index = {F: i for i, F in enumerate(self.flats)}

    # -- basic queries ----------------------------------------------------

    def __len__(self):
        return len(self.flats)

    def __contains__(self, S):
        return frozenset(S) in self.flat_rank

    @property
    def proper_flats(self):
        return tuple(F for F in self.flats if F != self.bottom and F != self.top)

    def join(self, *flats):
        return self.closure(frozenset().union(*flats))

    def interval(self, X):
        """Flats below ``X`` (the lower interval ``[0, X]``)."""
        return [F for F in self.flats if F <= X]

    # -- chains -----------------------------------------------------------

    def maximal_chains(self):
        """All proper maximal chains, lexicographic in flat order."""
        out = []
        target = self.rank - 1

        def walk(F, acc):
            if len(acc) == target:
                out.append(tuple(acc))
                return
            for G in self.covers.get(F, ()):
                if G == self.top:
                    continue
                acc.append(G)
                walk(G, acc)
                acc.pop()

        if target <= 0:
            return [()]
        walk(self.bottom, [])
        return out

    @cached_property
    def _above(self):
        proper = self.proper_flats
        return {F: [G for G in proper if F < G] for F in proper}

    def chains_of_length(self, k):
        """All chains of ``k`` proper flats, strictly increasing."""
        if k < 0 or k > max(self.rank - 1, 0):
            raise ValueError(f"chain length {k} out of range 0..{self.rank - 1}")
        if k == 0:
            return [()]
        out = []
        above = self._above

        def walk(acc, candidates):
            if len(acc) == k:
                out.append(tuple(acc))
                return
            for G in candidates:
                if self.flat_rank[G] > self.rank - 1 - (k - len(acc) - 1):
                    continue
                acc.append(G)
                walk(acc, above[G])
                acc.pop()

        walk([], list(self.proper_flats))
        return out

    # -- connectivity, irreducibles, nested sets --------------------------

    def components(self, S=None):
        """Connected components of the restriction to ``S``."""
        S = sorted(self.top if S is None else S)
        basis = []
        for i in S:
            if self.rank_of(basis + [i]) > len(basis):
                basis.append(i)
        parent = {i: i for i in S}

        def find(x):
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        if basis:
            Bt = transpose([self.vectors[b] for b in basis])
            for e in S:
                if e in basis:
                    continue
                coeffs = solve(Bt, self.vectors[e])
                for b, c in zip(basis, coeffs):
                    if c != 0:
                        parent[find(e)] = find(b)
        groups = {}
        for i in S:
            groups.setdefault(find(i), set()).add(i)
        return sorted((frozenset(g) for g in groups.values()), key=lambda g: min(g))

    def is_connected(self, S=None):
        return len(self.components(S)) <= 1

    @cached_property
    def irreducible_flats(self):
        """Flats with directly indecomposable lower interval, plus the top."""
        out = [F for F in self.flats if F and F != self.bottom and self.is_connected(F)]
        if self.top not in out:
            out.append(self.top)
        return tuple(sorted(out, key=lambda F: self._index[F]))

    def is_nested(self, S):
        """Nested-set test against the irreducible flats (top included)."""
        irr = set(self.irreducible_flats)
        S = list(S)
        for t in range(2, len(S) + 1):
            for sub in combinations(S, t):
                if any(a < b or b < a for a, b in combinations(sub, 2)):
                    continue
                if self.join(*sub) in irr:
                    return False
        return True

    def maximal_nested_sets(self):
        """Inclusion-maximal nested sets of proper irreducible flats.

        The top flat belongs to every maximal nested set and is left out of
        the returned tuples, so each has ``rank - 1`` elements.
        """
        cand = [F for F in self.irreducible_flats if F != self.top]
        irr = set(self.irreducible_flats)
        found = []

        def compatible(acc, X):
            others = [Y for Y in acc if not (X < Y or Y < X)]
            for t in range(1, len(others) + 1):
                for sub in combinations(others, t):
                    if any(a < b or b < a for a, b in combinations(sub, 2)):
                        continue
                    if self.join(X, *sub) in irr:
                        return False
            return True

        def walk(start, acc):
            extended = False
            for j in range(len(cand)):
                X = cand[j]
                if X in acc or not compatible(acc, X):
                    continue
                extended = True
                if j >= start:
                    acc.append(X)
                    walk(j + 1, acc)
                    acc.pop()
            if not extended:
                found.append(tuple(sorted(acc, key=lambda F: self._index[F])))

        walk(0, [])
        return sorted(set(found), key=lambda s: [self._index[F] for F in s])

    def nested_set_of_chain(self, chain):
        """The nested set whose cone contains the flag cone of ``chain``:
        the connected components of all chain members."""
        out = set()
        for F in chain:
            out.update(self.components(F))
        out.discard(self.top)
        return tuple(sorted(out, key=lambda F: self._index.get(F, len(self.flats))))

    # -- bases and Bergman fan --------------------------------------------

    @cached_property
    def bases(self):
        r = self.rank
        return tuple(
            b for b in combinations(range(self.ground_size), r) if self.rank_of(b) == r
        )

    def max_weight_bases(self, w):
        best = None
        out = []
        for b in self.bases:
            s = sum(w[i] for i in b)
            if best is None or s > best:
                best, out = s, [b]
            elif s == best:
                out.append(b)
        return frozenset(out)

    def bergman_membership(self, w):
        """True iff the max-weight matroid ``M_w`` has no loop.

        Greedy: element ``i`` lies in some max-weight basis iff the greedy
        basis that is forced to start with ``i`` attains the optimum.
        """
        if len(w) != self.ground_size:
            raise ValueError("weight vector length differs from ground set size")
        order = sorted(range(self.ground_size), key=lambda i: (-w[i], i))

        def greedy(first=None):
            chosen = [] if first is None else [first]
            for i in order:
                if i == first:
                    continue
                if self.rank_of(chosen + [i]) > len(chosen):
                    chosen.append(i)
                    if len(chosen) == self.rank:
                        break
            return sum(w[i] for i in chosen), len(chosen)

        best, _ = greedy()
        for i in range(self.ground_size):
            val, size = greedy(i)
            if size < self.rank or val != best:
                return False
        return True

    def bergman_cones(self):
        """Group maximal chains into the cones of the (coarsest) Bergman fan.

        Two flag cones belong to the same Bergman cone when relative
        interior points induce the same max-weight matroid ``M_w``.
        Returns a list of lists of chains.
        """
        groups = {}
        for chain in self.maximal_chains():
            w = [0] * self.ground_size
            for F in chain:
                for i in F:
                    w[i] += 1
            groups.setdefault(self.max_weight_bases(w), []).append(chain)
        return list(groups.values())


def build_lattice(kernel_basis, max_flats=DEFAULT_MAX_FLATS):
    """Lattice of flats of ``L(A)`` from a Gale dual ``B`` of ``A``."""
    return FlatLattice(kernel_basis, max_flats=max_flats)


def flat_closure(kernel_basis, S):
    return closure(as_int_matrix(kernel_basis), S)
