"""Descent pipeline tests.

A hand-built cyclic instance exercises one surgery step in detail; the rest
drives solver witnesses through the full descent on exhaustive and random
inputs, replaying every trace to confirm the recorded rewrites reproduce the
output exactly.
"""

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from boxchrom.colouring import Colouring, check_clustered, colour_multiset, lift_colouring
from boxchrom.graphs import complete_graph, cycle_graph, path_graph, strong_product
from boxchrom.smallgraphs import connected_graphs, random_connected_graph
from boxchrom.solvers import chromatic_clustered, chromatic_improper
from boxchrom.transfer import (
    TransferInvariantError,
    build_incidence,
    descend,
    eliminate_cycles,
    find_small_component,
    incidence_is_acyclic,
    replay_trace,
)

# On C4 x K2, palettes (1,2),(1,2),(3,3),(4,4) chain components 1 and 2
# through two base vertices each: the incidence contains a 4-cycle.
CYCLIC_C4 = Colouring((1, 2, 1, 2, 3, 3, 4, 4))


class TestIncidence:
    def test_structure_of_cyclic_instance(self):
        g = cycle_graph(4)
        inc = build_incidence(g, CYCLIC_C4, 2)
        assert inc.n_base == 4
        covers = sorted((c.colour, c.cover) for c in inc.components)
        assert covers == [(1, (0, 1)), (2, (0, 1)), (3, (2,)), (4, (3,))]
        assert not incidence_is_acyclic(g, CYCLIC_C4, 2)

    def test_lifted_colourings_are_acyclic(self):
        # one component per colour, and distinct colours per base vertex
        g = cycle_graph(5)
        lifted = lift_colouring(Colouring((1, 2, 1, 2, 3)), 2)
        assert incidence_is_acyclic(g, lifted, 2)

    def test_size_mismatch_rejected(self):
        with pytest.raises(ValueError):
            build_incidence(cycle_graph(4), Colouring((1, 2)), 2)

    def test_bad_t_rejected(self):
        with pytest.raises(ValueError):
            build_incidence(cycle_graph(4), CYCLIC_C4, 0)


class TestEliminateCycles:
    def test_single_surgery_on_c4(self):
        g = cycle_graph(4)
        out, steps = eliminate_cycles(g, CYCLIC_C4, 2, cluster_cap=4)
        assert len(steps) == 1
        step = steps[0]
        assert step.transfer_count == 1
        assert sorted(step.base_vertices) == [0, 1]
        assert sorted(step.colours) == [1, 2]
        assert incidence_is_acyclic(g, out, 2)
        # global colour usage is conserved by the cyclic shift
        assert sorted(out.colours) == sorted(CYCLIC_C4.colours)
        # each vertex keeps a sub-multiset of its original fibre palette
        for v in range(4):
            before = colour_multiset(CYCLIC_C4, 2, v)
            after = colour_multiset(out, 2, v)
            assert set(after) <= set(before)

    def test_acyclic_input_is_untouched(self):
        g = cycle_graph(5)
        lifted = lift_colouring(Colouring((1, 2, 1, 2, 3)), 2)
        out, steps = eliminate_cycles(g, lifted, 2, cluster_cap=2)
        assert steps == ()
        assert out.colours == lifted.colours

    def test_rejects_overfull_clusters(self):
        # all-ones on C4 x K2 is one component of 8 > cap
        g = cycle_graph(4)
        with pytest.raises(ValueError):
            eliminate_cycles(g, Colouring((1,) * 8), 2, cluster_cap=4)


class TestFindSmallComponent:
    def test_requires_acyclic(self):
        with pytest.raises(TransferInvariantError):
            find_small_component(cycle_graph(4), CYCLIC_C4, 2, 1)

    def test_finds_cover_after_elimination(self):
        g = cycle_graph(4)
        out, _ = eliminate_cycles(g, CYCLIC_C4, 2, cluster_cap=4)
        comp = find_small_component(g, out, 2, 2)
        assert len(comp.cover) <= 2


class TestDescend:
    def test_cyclic_instance_descends_to_proper(self):
        g = cycle_graph(4)
        res = descend(g, CYCLIC_C4, 2, 1)
        assert check_clustered(g, res.colouring, 1) is None
        # every base colour was present on the original fibre
        for v in range(4):
            assert res.colouring.colours[v] in colour_multiset(CYCLIC_C4, 2, v)

    def test_lifted_witness_descends_to_itself(self):
        base = Colouring((1, 2, 1, 2, 3))
        res = descend(cycle_graph(5), lift_colouring(base, 3), 3, 1)
        assert res.colouring.colours == base.colours

    @pytest.mark.parametrize("t", [2, 3])
    def test_exhaustive_small_graphs(self, t, connected_catalogue):
        for n in range(2, 6):
            for g in connected_catalogue[n]:
                prod = strong_product(g, complete_graph(t))
                solved = chromatic_clustered(prod, t)
                res = descend(g, solved.witness, t, 1)
                assert check_clustered(g, res.colouring, 1) is None
                assert res.colouring.num_colours <= solved.value

    @given(
        st.integers(min_value=2, max_value=7),
        st.integers(min_value=0, max_value=400),
        st.sampled_from([(2, 1), (2, 2), (3, 1), (3, 2)]),
    )
    @settings(max_examples=40, deadline=None)
    def test_random_graphs_descend(self, n, seed, params):
        t, ell = params
        g = random_connected_graph(n, 0.45, seed)
        prod = strong_product(g, complete_graph(t))
        solved = chromatic_clustered(prod, ell * t)
        res = descend(g, solved.witness, t, ell)
        assert check_clustered(g, res.colouring, ell) is None
        assert res.colouring.num_colours <= solved.value

    def test_descended_palette_within_fibres(self):
        g = random_connected_graph(6, 0.5, 17)
        prod = strong_product(g, complete_graph(2))
        solved = chromatic_clustered(prod, 2)
        res = descend(g, solved.witness, 2, 1)
        for v in range(g.n):
            assert res.colouring.colours[v] in colour_multiset(solved.witness, 2, v)

    def test_rejects_non_clustered_input(self):
        g = cycle_graph(4)
        with pytest.raises(ValueError):
            descend(g, Colouring((1,) * 8), 2, 1)


class TestReplay:
    def test_replay_reproduces_output(self):
        for seed in range(8):
            g = random_connected_graph(6, 0.5, seed)
            prod = strong_product(g, complete_graph(2))
            solved = chromatic_clustered(prod, 2)
            res = descend(g, solved.witness, 2, 1)
            replayed = replay_trace(g, solved.witness, 2, res.trace)
            assert replayed.colours == res.colouring.colours

    def test_replay_of_cyclic_instance(self):
        g = cycle_graph(4)
        res = descend(g, CYCLIC_C4, 2, 1)
        replayed = replay_trace(g, CYCLIC_C4, 2, res.trace)
        assert replayed.colours == res.colouring.colours

    def test_replay_rejects_foreign_start(self):
        g = cycle_graph(4)
        res = descend(g, CYCLIC_C4, 2, 1)
        # permuted colour names break the recorded old-value checks
        other = Colouring((4, 3, 4, 3, 2, 2, 1, 1))
        with pytest.raises(TransferInvariantError):
            replay_trace(g, other, 2, res.trace)

    def test_trace_serialises(self):
        g = cycle_graph(4)
        res = descend(g, CYCLIC_C4, 2, 1)
        payload = res.trace.to_json()
        assert payload["t"] == 2 and payload["ell"] == 1
        assert payload["rounds"], "descent must record at least one round"
        first = payload["rounds"][0]
        assert "pick" in first and "eliminations" in first
