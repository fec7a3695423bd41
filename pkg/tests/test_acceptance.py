"""Acceptance suite: one test per numbered criterion.

Each test prints a single ``criterion N ...: PASS|FAIL`` line (also when
pytest captures output) listing any failed checks and the wall time.
Run on its own with ``pytest tests/test_acceptance.py -v``.
"""

import sys
import time
from itertools import combinations

import numpy as np
import pytest

from oracles import fm_feasible, random_configuration, random_unimodular, symmetric_det_half
from tropdisc import cayley as cayley_module
from tropdisc import catalog, exactlin
from tropdisc import initial as initial_module
from tropdisc.cayley import (
    CayleyConfig,
    delta_equivalence_classes,
    is_essential,
    membership_via_mixed,
    mixed_subdivision,
    resultant_degree,
    total_volume,
)
from tropdisc.config import check_configuration
from tropdisc.exactlin import matmul, row_hnf, transpose
from tropdisc.exceptions import GenericityFailure
from tropdisc.fan import (
    bergman_fan,
    co_bergman_fan,
    fan_graph,
    hypersurface_cones,
    membership,
    pushforward,
    tropical_discriminant,
)
from tropdisc.initial import (
    ChainEngine,
    codimension,
    degree,
    degree_of_fan,
    initial_cycle_of_fan,
    initial_monomial,
    sample_weight,
)
from tropdisc.newton import (
    hull_summary,
    recover_discriminant,
    sample_extreme_monomials,
    sample_fan_monomials,
)

MIXED_KNOWN = [
    ((446, 773, 680, 37, 925, 963, 765, 380), (28, 0, 0, 35, 35, 0, 0, 28)),
    ((439, 464, 454, 360, 303, 279, 591, 583), (34, 0, 0, 29, 2, 39, 0, 22)),
    ((801, 447, 685, 447, 765, 775, 358, 498), (2, 39, 0, 22, 22, 0, 39, 2)),
]
K4_MONOMIALS = {(1, 0, 0, 0, 0, 3), (0, 1, 0, 0, 1, 2), (0, 0, 1, 0, 2, 1), (0, 0, 0, 1, 3, 0)}
VERONESE_GALE_ROWS = [[1, -2, 1, 0, 0, 0], [1, -1, 0, -1, 1, 0], [1, 0, 0, -2, 0, 1]]
THREE_QUADRICS_W0 = (670, 927, 1184, 525, 1140, 1755, 647, 1411, 2175)
THREE_QUADRICS_W = (670038, 927046, 1184099, 525080, 1140098, 1755037, 647068, 1411095, 2175065)
THREE_QUADRICS_CYCLE = {(3, 6): 2, (3, 7): 2, (4, 7): 2}
THREE_QUADRICS_CELLS = {
    ((1, 2, 3), (4,), (7,)),
    ((3,), (4, 5, 6), (7,)),
    ((3,), (6,), (7, 8, 9)),
}


class Criterion:
    def __init__(self, capsys, number, title, limit):
        self.capsys = capsys
        self.number = number
        self.title = title
        self.limit = limit
        self.failed = []

    def check(self, label, ok):
        if not ok:
            self.failed.append(label)
        return ok

    def __enter__(self):
        self.start = time.perf_counter()
        return self

    def __exit__(self, kind, exc, tb):
        elapsed = time.perf_counter() - self.start
        if kind is not None:
            self.failed.append(f"raised {kind.__name__}: {exc}")
        if elapsed > self.limit:
            self.failed.append(f"took {elapsed:.1f} s, limit {self.limit} s")
        status = "FAIL" if self.failed else "PASS"
        detail = f" [{'; '.join(self.failed)}]" if self.failed else ""
        with self.capsys.disabled():
            print(f"\ncriterion {self.number} ({self.title}): {status} in {elapsed:.1f} s{detail}")
        if kind is None:
            assert not self.failed, "; ".join(self.failed)
        return False


def test_criterion_1_mixed_discriminant(capsys):
    with Criterion(capsys, 1, "mixed discriminant", 300) as c:
        A = catalog.MIXED_DISCRIMINANT
        engine = ChainEngine(A)
        for w, exp in MIXED_KNOWN:
            c.check(f"initial monomial at {w}", initial_monomial(A, w, engine=engine) == exp)
        c.check("degree 126", degree(A, engine=engine) == 126)
        coarse = co_bergman_fan(A)
        c.check("57 co-Bergman cones", len(coarse.cones) == 57)
        c.check("48 map to codimension one", len(hypersurface_cones(A, coarse)) == 48)


def test_criterion_2_cubic_and_linear(capsys):
    with Criterion(capsys, 2, "cubic and linear form", 30) as c:
        A = catalog.CUBIC_LINEAR
        mons = sample_extreme_monomials(A, samples=200, seed=0)
        c.check("four sampled monomials", set(mons.monomials) == K4_MONOMIALS)
        coeffs = recover_discriminant(A, mons.monomials)
        values = [coeffs.get(e) for e in sorted(K4_MONOMIALS, reverse=True)]
        c.check("coefficients +-(1,-1,1,-1)", values in ([1, -1, 1, -1], [-1, 1, -1, 1]))
        c.check("no other terms", set(coeffs) == K4_MONOMIALS)
        deg = degree(A)
        c.check("degree 4", deg == 4)
        c.check("resultant degree 4", resultant_degree(CayleyConfig(*catalog.CUBIC_LINEAR_BLOCKS)) == deg)


def _is_prism(V, E):
    degrees = {v: sum(v in e for e in E) for v in V}
    triangles = [
        t for t in combinations(V, 3) if all(tuple(sorted(p)) in E for p in combinations(t, 2))
    ]
    return (len(V), len(E)) == (6, 9) and set(degrees.values()) == {3} and len(triangles) == 2


def test_criterion_3_veronese(capsys):
    with Criterion(capsys, 3, "symmetric 3x3 matrices", 60) as c:
        A = catalog.VERONESE
        engine = ChainEngine(A)
        c.check("codimension 1", engine.codim == 1)
        c.check("degree 3", degree(A, engine=engine) == 3)
        mons = sample_extreme_monomials(A, samples=200, seed=0, engine=engine)
        c.check("five extreme monomials", set(mons.monomials) == set(symmetric_det_half()))
        c.check("f-vector (5,9,6)", hull_summary(mons.monomials).fvector == (5, 9, 6))
        V, E = fan_graph(tropical_discriminant(A, lattice=engine.lattice))
        c.check("prism graph", _is_prism(V, E))
        Bt = transpose(check_configuration(A).gale)
        c.check("Gale lattice", row_hnf(Bt) == row_hnf(VERONESE_GALE_ROWS))
        classes = delta_equivalence_classes(A, samples=10_000, seed=0, engine=engine)
        c.check("five classes", classes.count == 5)


def _is_k33(V, E):
    colour = {}
    adj = {v: [] for v in V}
    for a, b in E:
        adj[a].append(b)
        adj[b].append(a)
    for start in V:
        if start in colour:
            continue
        colour[start] = 0
        stack = [start]
        while stack:
            v = stack.pop()
            for u in adj[v]:
                if u not in colour:
                    colour[u] = 1 - colour[v]
                    stack.append(u)
                elif colour[u] == colour[v]:
                    return False
    return (len(V), len(E)) == (6, 9) and all(len(adj[v]) == 3 for v in V)


def test_criterion_4_pushforward_example(capsys):
    with Criterion(capsys, 4, "pushforward of a Bergman fan", 60) as c:
        source = bergman_fan(catalog.UV_U)
        image = pushforward(source, catalog.UV_V)
        c.check("degree 28", degree_of_fan(image, 1) == 28)
        mons = sample_fan_monomials(image, samples=200, seed=0)
        c.check("f-vector (6,11,7)", hull_summary(mons.monomials).fvector == (6, 11, 7))
        c.check("Bergman complex K_{3,3}", _is_k33(*fan_graph(source)))


def test_criterion_5_three_quadrics(capsys):
    with Criterion(capsys, 5, "three quadrics", 60) as c:
        cfg = CayleyConfig(*catalog.THREE_QUADRICS)
        A = cfg.matrix()
        engine = ChainEngine(A)
        c.check("codimension 2", engine.codim == 2)
        c.check("degree 6", degree(A, engine=engine) == 6)
        c.check("seeded initial cycle", engine.cycle(THREE_QUADRICS_W) == THREE_QUADRICS_CYCLE)
        cells = [m for m in mixed_subdivision(cfg, THREE_QUADRICS_W0) if m.mixed]
        c.check("three mixed cells", {m.summands for m in cells} == THREE_QUADRICS_CELLS)
        c.check("each of volume 2", all(m.volume == 2 for m in cells))
        c.check("resultant degree 6", resultant_degree(cfg) == 6)


def test_criterion_6_four_triangles(capsys):
    with Criterion(capsys, 6, "four triangles", 120) as c:
        cfg = CayleyConfig(*catalog.FOUR_TRIANGLES)
        A = cfg.matrix()
        engine = ChainEngine(A)
        c.check("codimension 2", engine.codim == 2)
        c.check("resultant degree 12", resultant_degree(cfg) == 12)
        fan = tropical_discriminant(A, lattice=engine.lattice, codim=engine.codim)
        c.check("degree from the fan 12", degree_of_fan(fan, 2) == 12)
        c.check("degree from chains 12", degree(A, engine=engine) == 12)


def test_criterion_7_nonessential(capsys):
    with Criterion(capsys, 7, "non-essential family", 10) as c:
        cfg = CayleyConfig(*catalog.NONESSENTIAL)
        c.check("not essential", not is_essential(cfg))
        c.check("codimension 3", codimension(cfg.matrix()) == 3)


# --------------------------------------------------------------------------
# criterion 8: property suites


def _generic_weights(engine, rng, count):
    out = []
    while len(out) < count:
        w = sample_weight(rng, engine.n)
        try:
            out.append((w, engine.cycle(w)))
        except GenericityFailure:
            continue
    return out


def _property_examples():
    return {
        "veronese": catalog.VERONESE,
        "cubic_linear": catalog.CUBIC_LINEAR,
        "mixed": catalog.MIXED_DISCRIMINANT,
        "three_quadrics": CayleyConfig(*catalog.THREE_QUADRICS).matrix(),
        "four_triangles": CayleyConfig(*catalog.FOUR_TRIANGLES).matrix(),
        "nonessential": CayleyConfig(*catalog.NONESSENTIAL).matrix(),
    }


def _equivariance_failures(count=20, seed=2024):
    rng = np.random.default_rng(seed)
    configs = []
    while len(configs) < count:
        A = random_configuration(rng)
        if A is not None:
            configs.append(A)
    bad = []
    for A in configs:
        n, d = len(A[0]), len(A)
        engine = ChainEngine(A)
        U = random_unimodular(rng, d)
        engine_u = ChainEngine(matmul(U, A))
        perm = [int(x) for x in rng.permutation(n)]
        engine_p = ChainEngine(tuple(tuple(row[perm[j]] for j in range(n)) for row in A))
        inverse = {old + 1: new + 1 for new, old in enumerate(perm)}
        ok = engine.codim == engine_u.codim == engine_p.codim
        for w, cyc in _generic_weights(engine, rng, 3):
            moved = {tuple(sorted(inverse[i] for i in t)): m for t, m in cyc.entries.items()}
            ok &= engine_u.cycle(w) == cyc
            ok &= engine_p.cycle(tuple(w[perm[j]] for j in range(n))) == moved
        if not ok:
            bad.append(A)
    return bad


def test_criterion_8_properties(capsys, monkeypatch):
    lp_queries = []
    subdivisions = []

    real_lp = exactlin.lp_feasible

    def recording_lp(E, b):
        x = real_lp(E, b)
        if E and len(E[0]) <= 64:
            lp_queries.append((tuple(map(tuple, E)), tuple(b), x is not None))
        return x

    real_cells = cayley_module.mixed_cells_of

    def checked_cells(cfg, sub):
        cells = real_cells(cfg, sub)
        subdivisions.append(sum(m.normalized_volume for m in cells) == total_volume(cfg))
        return cells

    monkeypatch.setattr(cayley_module, "mixed_cells_of", checked_cells)

    with Criterion(capsys, 8, "property suites", 600) as c:
        rng = np.random.default_rng(8)
        examples = _property_examples()
        samples = {}
        for name, A in examples.items():
            engine = ChainEngine(A)
            samples[name] = (engine, _generic_weights(engine, rng, 10))
            c.check(f"(a) degree invariance on {name}", len({cyc.degree for _, cyc in samples[name][1]}) == 1)

        c.check("(b) equivariance on 20 random configurations", not _equivariance_failures())

        for name, (engine, pairs) in samples.items():
            fan = tropical_discriminant(engine.config, lattice=engine.lattice, codim=engine.codim)
            agree = all(initial_cycle_of_fan(fan, w, engine.codim) == cyc for w, cyc in pairs)
            c.check(f"(c) chain and fan engines agree on {name}", agree)

        for name in ("three_quadrics", "cubic_linear", "four_triangles"):
            block = {
                "three_quadrics": catalog.THREE_QUADRICS,
                "cubic_linear": catalog.CUBIC_LINEAR_BLOCKS,
                "four_triangles": catalog.FOUR_TRIANGLES,
            }[name]
            cfg = CayleyConfig(*block)
            engine = samples[name][0]
            fan = tropical_discriminant(engine.config, lattice=engine.lattice, codim=engine.codim)
            ok = all(
                membership_via_mixed(cfg, w) == membership(fan, w)
                for w in (sample_weight(rng, cfg.n) for _ in range(100))
            )
            c.check(f"(d) mixed-cell membership on {name}", ok)

        # (e): every exact LP query made on n <= 6 inputs, checked by elimination
        monkeypatch.setattr(exactlin, "lp_feasible", recording_lp)
        monkeypatch.setattr(initial_module, "lp_feasible", recording_lp)
        for name in ("veronese", "cubic_linear"):
            engine, pairs = samples[name]
            fan = tropical_discriminant(engine.config, lattice=engine.lattice)
            for w, cyc in pairs:
                c.check(f"(e) LP route on {name}", engine.cycle_lp(w) == cyc)
                c.check(
                    f"(e) exact fan route on {name}",
                    initial_cycle_of_fan(fan, w, 1, method="exact") == cyc,
                )
        monkeypatch.setattr(exactlin, "lp_feasible", real_lp)
        monkeypatch.setattr(initial_module, "lp_feasible", real_lp)
        c.check("(e) LP queries recorded", len(lp_queries) > 0)
        mismatched = [q for q in lp_queries if fm_feasible(q[0], q[1]) != q[2]]
        c.check(f"(e) LP vs elimination on {len(lp_queries)} queries", not mismatched)

        c.check("(f) subdivisions computed", len(subdivisions) > 0)
        c.check(f"(f) volume conservation on {len(subdivisions)} subdivisions", all(subdivisions))


if __name__ == "__main__":
    sys.exit(pytest.main([__file__, "-v"]))
