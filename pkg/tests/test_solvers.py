"""Exact solver tests.

Every optimiser is checked against the exponential brute-force oracles in
oracles.py on random small graphs, then against pinned hand-verified values,
structural identities between the invariants, and the failure paths (caps,
timeouts, bad witnesses).
"""

from fractions import Fraction
from itertools import combinations

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.optimize import linprog

from boxchrom.colouring import Colouring, Mode, check_bfold, check_clustered, check_improper
from boxchrom.graphs import (
    Graph,
    bowtie_graph,
    complete_graph,
    cycle_graph,
    empty_graph,
    lexicographic_product,
    matching_graph,
    path_graph,
    petersen_graph,
    strong_product,
)
from boxchrom.smallgraphs import random_connected_graph
from boxchrom.solvers import (
    SolverCapError,
    alpha_d,
    chromatic_bfold,
    chromatic_clustered,
    chromatic_improper,
    clique_number,
    fractional_chromatic,
)
from oracles import (
    brute_alpha_d,
    brute_chromatic_clustered,
    brute_chromatic_improper,
    brute_clique,
    graphs,
)


class TestChromaticImproper:
    @given(graphs(max_n=6), st.integers(min_value=0, max_value=2))
    @settings(max_examples=60, deadline=None)
    def test_matches_brute_force(self, g, d):
        res = chromatic_improper(g, d)
        assert res.status == "optimal"
        assert res.value == brute_chromatic_improper(g, d)
        if g.n:
            assert check_improper(g, res.witness, d) is None
            assert res.witness.num_colours == res.value

    def test_pinned_values(self):
        assert chromatic_improper(bowtie_graph(), 1).value == 2
        assert chromatic_improper(petersen_graph(), 0).value == 3
        assert chromatic_improper(complete_graph(18), 2).value == 6
        assert chromatic_improper(cycle_graph(5), 1).value == 2

    def test_lower_bound_certificate(self):
        res = chromatic_improper(complete_graph(6), 0)
        assert res.value == 6
        assert res.lower_bound == 6 and res.lower_bound_source == "clique"

    def test_rejects_negative_d(self):
        with pytest.raises(ValueError):
            chromatic_improper(path_graph(2), -1)

    def test_cap(self):
        with pytest.raises(SolverCapError):
            chromatic_improper(matching_graph(25), 0)

    def test_empty_graph(self):
        res = chromatic_improper(Graph(0, ()), 0)
        assert res.value == 0

    def test_upper_witness_must_be_feasible(self):
        g = complete_graph(3)
        with pytest.raises(ValueError):
            chromatic_improper(g, 0, upper_witness=Colouring((1, 1, 2)))

    def test_upper_witness_accepted(self):
        g = cycle_graph(5)
        res = chromatic_improper(g, 0, upper_witness=Colouring((1, 2, 1, 2, 3)))
        assert res.value == 3

    def test_timeout_reports_bounds(self):
        g = random_connected_graph(20, 0.6, 11)
        res = chromatic_improper(g, 2, timeout=1e-4)
        assert res.status == "timeout"
        assert res.value is None and res.witness is None
        assert res.lower_bound >= 1 and res.upper_bound <= g.n


class TestChromaticClustered:
    @given(graphs(max_n=6), st.integers(min_value=1, max_value=3))
    @settings(max_examples=60, deadline=None)
    def test_matches_brute_force(self, g, t):
        res = chromatic_clustered(g, t)
        assert res.status == "optimal"
        assert res.value == brute_chromatic_clustered(g, t)
        if g.n:
            assert check_clustered(g, res.witness, t) is None

    def test_pinned_values(self):
        assert chromatic_clustered(petersen_graph(), 3).value == 2
        assert chromatic_clustered(cycle_graph(5), 1).value == 3
        prod = strong_product(cycle_graph(5), complete_graph(2))
        assert chromatic_clustered(prod, 2).value == 3

    def test_t_one_is_proper(self):
        for seed in range(6):
            g = random_connected_graph(7, 0.5, seed)
            assert chromatic_clustered(g, 1).value == chromatic_improper(g, 0).value

    @given(graphs(max_n=9, connected=True), st.integers(1, 3), st.integers(0, 2))
    @settings(max_examples=30, deadline=None)
    def test_monotone_in_t(self, g, t, extra):
        # allowing larger components can only reduce the palette
        lo = chromatic_clustered(g, t).value
        hi = chromatic_clustered(g, t + extra).value
        assert hi <= lo

    def test_rejects_t_zero(self):
        with pytest.raises(ValueError):
            chromatic_clustered(path_graph(2), 0)


class TestAlphaAndClique:
    @given(graphs(max_n=7), st.integers(min_value=0, max_value=2))
    @settings(max_examples=60, deadline=None)
    def test_alpha_matches_brute_force(self, g, d):
        res = alpha_d(g, d)
        assert res.value == brute_alpha_d(g, d)
        if res.value:
            chosen = set(res.witness)
            assert all(
                sum(1 for u in g.neighbours(v) if u in chosen) <= d for v in chosen
            )

    @given(graphs(max_n=8))
    @settings(max_examples=60, deadline=None)
    def test_clique_matches_brute_force(self, g):
        res = clique_number(g)
        assert res.value == brute_clique(g)

    def test_pinned(self):
        assert alpha_d(bowtie_graph(), 1).value == 4
        assert alpha_d(petersen_graph(), 0).value == 4
        assert clique_number(petersen_graph()).value == 2
        assert clique_number(bowtie_graph()).value == 3

    def test_cap(self):
        with pytest.raises(SolverCapError):
            alpha_d(matching_graph(25), 0)
        with pytest.raises(SolverCapError):
            clique_number(matching_graph(25))


class TestBFold:
    def test_pinned_improper_fold(self):
        # 1-improper 2-fold palette of C4 needs 4 colours, not 3
        res = chromatic_bfold(cycle_graph(4), 2, Mode.improper(1))
        assert res.value == 4
        assert check_bfold(cycle_graph(4), res.witness, 2, Mode.improper(1)) is None

    def test_fold_one_reduces_to_ordinary(self):
        for seed in range(5):
            g = random_connected_graph(6, 0.5, seed)
            assert chromatic_bfold(g, 1, Mode.proper()).value == \
                chromatic_improper(g, 0).value

    @pytest.mark.parametrize("b", [2, 3])
    def test_fold_equals_product_chromatic(self, b):
        # a b-fold proper palette of G is a proper colouring of the product
        for g in (path_graph(4), cycle_graph(5), bowtie_graph()):
            prod = strong_product(g, complete_graph(b))
            assert chromatic_bfold(g, b, Mode.proper()).value == \
                chromatic_improper(prod, 0).value

    @pytest.mark.parametrize("b,t", [(1, 2), (2, 2), (2, 3)])
    def test_clustered_fold_identity(self, b, t):
        # the clustered product palette collapses back to the base fold number
        for g in (path_graph(3), cycle_graph(5), bowtie_graph()):
            prod = strong_product(g, complete_graph(t))
            assert chromatic_bfold(prod, b, Mode.clustered(t)).value == \
                chromatic_bfold(g, b, Mode.proper()).value

    def test_rejects_bad_b(self):
        with pytest.raises(ValueError):
            chromatic_bfold(path_graph(2), 0, Mode.proper())


def independent_maximal_sets(g, mode):
    """Enumerate maximal admissible sets from first principles (test oracle)."""

    def admissible(subset):
        if mode.kind in ("proper", "improper"):
            d = 0 if mode.kind == "proper" else mode.param
            return all(
                sum(1 for u in g.neighbours(v) if u in subset) <= d for v in subset
            )
        seen, limit = set(), mode.param
        for start in subset:
            if start in seen:
                continue
            stack, comp = [start], set()
            while stack:
                v = stack.pop()
                if v in comp:
                    continue
                comp.add(v)
                stack.extend(u for u in g.neighbours(v) if u in subset)
            seen |= comp
            if len(comp) > limit:
                return False
        return True

    sets = []
    for size in range(1, g.n + 1):
        for subset in combinations(range(g.n), size):
            s = set(subset)
            if admissible(s) and not any(
                admissible(s | {v}) for v in range(g.n) if v not in s
            ):
                sets.append(s)
    return sets


def lp_cover_value(g, sets):
    cols = len(sets)
    a = np.zeros((g.n, cols))
    for j, s in enumerate(sets):
        for v in s:
            a[v, j] = 1.0
    res = linprog(np.ones(cols), A_ub=-a, b_ub=-np.ones(g.n), method="highs")
    assert res.success
    return res.fun


class TestFractional:
    def test_exact_pins(self):
        assert fractional_chromatic(cycle_graph(5)).value == Fraction(5, 2)
        assert fractional_chromatic(petersen_graph()).value == Fraction(5, 2)
        assert fractional_chromatic(complete_graph(4)).value == 4

    @given(graphs(min_n=1, max_n=6))
    @settings(max_examples=25, deadline=None)
    def test_proper_matches_scipy(self, g):
        if g.n == 0:
            return
        res = fractional_chromatic(g)
        oracle = lp_cover_value(g, independent_maximal_sets(g, Mode.proper()))
        assert abs(float(res.value) - oracle) < 1e-6

    @given(graphs(min_n=2, max_n=6), st.sampled_from([Mode.improper(1), Mode.clustered(2)]))
    @settings(max_examples=20, deadline=None)
    def test_relaxed_modes_match_scipy(self, g, mode):
        res = fractional_chromatic(g, mode)
        oracle = lp_cover_value(g, independent_maximal_sets(g, mode))
        assert abs(float(res.value) - oracle) < 1e-6

    def test_witness_is_fractional_cover(self):
        res = fractional_chromatic(cycle_graph(7))
        cover = {v: 0.0 for v in range(7)}
        total = 0.0
        for vertices, weight in res.witness:
            assert weight > 0
            total += weight
            for v in vertices:
                cover[v] += weight
        assert all(w >= 1 - 1e-6 for w in cover.values())
        assert abs(total - float(res.value)) < 1e-6

    def test_cap(self):
        with pytest.raises(SolverCapError):
            fractional_chromatic(matching_graph(9))


class TestOrderings:
    @given(graphs(max_n=9), st.integers(0, 2), st.integers(0, 2))
    @settings(max_examples=30, deadline=None)
    def test_improper_monotone_in_d(self, g, d, extra):
        assert chromatic_improper(g, d + extra).value <= chromatic_improper(g, d).value

    @given(graphs(max_n=8, connected=True), st.integers(1, 3))
    @settings(max_examples=30, deadline=None)
    def test_clustered_dominates_improper(self, g, t):
        # components of size <= t force monochromatic degree <= t - 1
        assert chromatic_clustered(g, t).value >= chromatic_improper(g, t - 1).value

    @given(graphs(min_n=2, max_n=5, connected=True), st.integers(1, 2))
    @settings(max_examples=15, deadline=None)
    def test_product_sandwich(self, g, d):
        # chi(G) = clustered palette of the blown-up product, which dominates
        # the improper one, which dominates the fold average, which dominates
        # the fractional relaxation
        prod = strong_product(g, complete_graph(d + 1))
        chi = chromatic_improper(g, 0).value
        clus = chromatic_clustered(prod, d + 1).value
        impr = chromatic_improper(prod, d).value
        fold = chromatic_bfold(g, d + 1, Mode.proper()).value
        frac = float(fractional_chromatic(g).value)
        assert chi == clus
        assert clus >= impr
        assert impr >= fold / (d + 1) - 1e-9
        assert fold / (d + 1) >= frac - 1e-9

    @pytest.mark.parametrize("inner,k", [(empty_graph(2), 2), (path_graph(3), 3)])
    def test_lexicographic_blowup_identity(self, inner, k):
        # clustered palettes only see the inner factor's size once t >= k
        for seed in range(4):
            g = random_connected_graph(5, 0.5, seed)
            lex = lexicographic_product(g, inner)
            prod = strong_product(g, complete_graph(k))
            for t in (k, k + 1):
                assert chromatic_clustered(lex, t).value == \
                    chromatic_clustered(prod, t).value
