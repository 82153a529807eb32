"""Equality diagnostics for the spectral chromatic bound.

Covers partitions and their degree tables, the Perron-weighted quotient
matrix (row-sum identity plus Cauchy interlacing against the host spectrum),
the full diagnosis on colourings known to meet the bound, and lifting tight
proper colourings through clique blow-ups.
"""

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from boxchrom.colouring import Colouring
from boxchrom.graphs import (
    bowtie_graph,
    complete_bipartite,
    complete_graph,
    cycle_graph,
    disjoint_union,
    empty_graph,
    line_graph,
    path_graph,
    petersen_graph,
    strong_product,
)
from boxchrom.hoffman import (
    Partition,
    class_degree_table,
    diagnose_hoffman,
    is_equitable,
    is_weight_regular,
    lift_tight_colouring,
    quotient_matrix,
    weighted_class_degrees,
)
from boxchrom.solvers import chromatic_improper
from boxchrom.spectra import perron_vector, spectrum
from oracles import graphs

# the two triangle 2-factors of K5 read off its line graph's edge order
LINE_K5_CLASSES = Colouring((1, 2, 2, 1, 1, 2, 2, 1, 2, 1))


def coordinate_halves(block: int, copies: int) -> Colouring:
    """Colour lifted fibres by the parity of their base position."""
    return Colouring(tuple(1 + (v // block) % 2 for v in range(block * copies)))


class TestPartition:
    def test_from_colouring_orders_by_colour(self):
        p = Partition.from_colouring(Colouring((2, 1, 2, 3)))
        assert p.parts == ((1,), (0, 2), (3,))
        assert p.part_of() == [1, 0, 1, 2]
        assert p.num_parts == 3

    def test_validation(self):
        with pytest.raises(ValueError):
            Partition(2, ((0,),))  # missing vertex
        with pytest.raises(ValueError):
            Partition(2, ((0, 1), (1,)))  # overlap
        with pytest.raises(ValueError):
            Partition(2, ((1, 0),))  # unsorted
        with pytest.raises(ValueError):
            Partition(2, ((0, 1), ()))  # empty part
        with pytest.raises(ValueError):
            Partition(2, ((0, 1, 2),))  # out of range


class TestDegreeTables:
    def test_bowtie_hub_partition_is_equitable(self):
        g = bowtie_graph()
        p = Partition(5, ((0, 1, 2, 3), (4,)))
        table = class_degree_table(g, p)
        assert table.tolist() == [[1, 1], [1, 1], [1, 1], [1, 1], [4, 0]]
        assert is_equitable(g, p)

    def test_path_mixed_part_not_equitable(self):
        p = Partition(3, ((0, 1), (2,)))
        assert not is_equitable(path_graph(3), p)

    def test_path_end_middle_weighted_degrees(self):
        # Perron weights of P3 are (1, sqrt(2), 1)/2; the middle vertex sees
        # weighted degree 2/sqrt(2) = sqrt(2) towards the end part
        g = path_graph(3)
        p = Partition(3, ((0, 2), (1,)))
        table = weighted_class_degrees(g, p)
        assert abs(table[1][0] - math.sqrt(2)) < 1e-9
        assert table[1][1] == 0.0
        assert is_weight_regular(g, p)
        assert is_equitable(g, p)

    @given(graphs(min_n=2, max_n=8, connected=True))
    @settings(max_examples=30, deadline=None)
    def test_equitable_implies_weight_regular_on_regular(self, g):
        # constant Perron weights make the two notions coincide
        if len(set(g.degree_sequence())) != 1 or g.edge_count == 0:
            return
        p = Partition(g.n, (tuple(range(0, g.n, 2)), tuple(range(1, g.n, 2))))
        if is_equitable(g, p):
            assert is_weight_regular(g, p)


@st.composite
def graph_with_partition(draw):
    g = draw(graphs(min_n=2, max_n=8, connected=True))
    labels = draw(
        st.lists(st.integers(0, 2), min_size=g.n, max_size=g.n)
    )
    by_label: dict[int, list[int]] = {}
    for v, lab in enumerate(labels):
        by_label.setdefault(lab, []).append(v)
    parts = tuple(tuple(by_label[lab]) for lab in sorted(by_label))
    return g, Partition(g.n, parts)


class TestQuotientMatrix:
    def test_hoffman_colouring_quotient_shape(self):
        # tight classes produce dI + (d - lam_n)(J - I); here d=2, lam_n=-2
        g = line_graph(complete_graph(5))
        q = quotient_matrix(g, Partition.from_colouring(LINE_K5_CLASSES))
        assert np.allclose(q, [[2.0, 4.0], [4.0, 2.0]], atol=1e-9)

    @given(graph_with_partition())
    @settings(max_examples=40, deadline=None)
    def test_row_sums_and_interlacing(self, gp):
        g, p = gp
        if g.edge_count == 0:
            return
        q = quotient_matrix(g, p)
        lam1 = spectrum(g).largest
        assert np.allclose(q.sum(axis=1), lam1, atol=1e-7 * (1 + abs(lam1)))
        # symmetrise by part norms: similar matrix, so same eigenvalues,
        # and Cauchy interlacing against the host graph applies
        w = perron_vector(g)
        norms = np.array([
            math.sqrt(sum(w[v] ** 2 for v in part)) for part in p.parts
        ])
        b = q * norms[:, None] / norms[None, :]
        beta = np.sort(np.linalg.eigvalsh((b + b.T) / 2))[::-1]
        host = spectrum(g).values
        m, n = len(beta), g.n
        for i in range(m):
            assert host[i] >= beta[i] - 1e-7
            assert beta[i] >= host[n - m + i] - 1e-7

    def test_disconnected_rejected(self):
        g = disjoint_union(complete_graph(2), complete_graph(2))
        with pytest.raises(ValueError):
            quotient_matrix(g, Partition(4, ((0, 1), (2, 3))))


class TestDiagnoseHoffman:
    def test_line_k5_two_factorisation_is_tight(self):
        g = line_graph(complete_graph(5))
        diag = diagnose_hoffman(g, 2, LINE_K5_CLASSES, check_uniqueness=True)
        assert diag.is_tight
        assert abs(diag.bound - 2.0) < 1e-9
        assert diag.smallest_multiplicity >= 1
        assert diag.multiplicity_sufficient
        assert diag.classes_d_regular
        assert diag.weight_regular
        assert diag.equitable and diag.cross_degrees_match
        assert diag.all_equality_conditions()
        # K5 has several triangle 2-factorisations, so no uniqueness claim
        assert diag.unique_colouring is False

    def test_product_with_bipartite_fibres_is_tight(self):
        # the spectral bound evaluates to exactly 2 here and both halves of
        # the vertex set realise it
        g = strong_product(cycle_graph(4), complete_bipartite(2, 2))
        c = coordinate_halves(4, 4)
        diag = diagnose_hoffman(g, 2, c)
        assert abs(diag.bound - 2.0) < 1e-9
        assert diag.is_tight
        assert diag.all_equality_conditions()
        assert chromatic_improper(g, 2).value == 2

    def test_odd_cycle_not_tight(self):
        diag = diagnose_hoffman(cycle_graph(5), 0, Colouring((1, 2, 1, 2, 3)))
        assert not diag.is_tight
        assert diag.num_classes == 3 and diag.bound < 3

    def test_irregular_graph_skips_equitable_conditions(self):
        diag = diagnose_hoffman(bowtie_graph(), 1, Colouring((1, 2, 2, 2, 1)))
        assert diag.equitable is None and diag.cross_degrees_match is None

    def test_rejects_invalid_colouring(self):
        with pytest.raises(ValueError):
            diagnose_hoffman(complete_graph(3), 0, Colouring((1, 1, 2)))

    def test_rejects_disconnected_and_edgeless(self):
        g = disjoint_union(complete_graph(2), complete_graph(2))
        with pytest.raises(ValueError):
            diagnose_hoffman(g, 0, Colouring((1, 2, 1, 2)))
        with pytest.raises(ValueError):
            diagnose_hoffman(empty_graph(1), 0, Colouring((1,)))

    def test_uniqueness_cap(self):
        g = strong_product(cycle_graph(4), complete_bipartite(2, 2))
        with pytest.raises(ValueError):
            diagnose_hoffman(g, 2, coordinate_halves(4, 4), check_uniqueness=True)

    def test_unique_case_sharpens_multiplicity(self):
        # K4 has one proper 4-colouring up to names: multiplicity is exactly 3
        diag = diagnose_hoffman(
            complete_graph(4), 0, Colouring((1, 2, 3, 4)), check_uniqueness=True
        )
        assert diag.unique_colouring is True
        assert diag.multiplicity_exact is True


class TestLift:
    @pytest.mark.parametrize("d", [1, 2])
    def test_triangle_lifts_tight(self, d):
        lift = lift_tight_colouring(complete_graph(3), Colouring((1, 2, 3)), d)
        assert lift.base_classes == 3
        assert abs(lift.product_bound - lift.base_bound) < 1e-9
        assert lift.product_diagnosis.is_tight
        assert lift.product_diagnosis.classes_d_regular
        payload = lift.to_json()
        assert payload["d"] == d and len(payload["lifted"]) == 3 * (d + 1)

    def test_bipartite_lifts_tight(self):
        lift = lift_tight_colouring(complete_bipartite(2, 2), Colouring((1, 1, 2, 2)), 1)
        assert lift.product_diagnosis.is_tight

    def test_refuses_non_tight_base(self):
        # chi(C5) = 3 strictly above the spectral bound
        with pytest.raises(ValueError):
            lift_tight_colouring(cycle_graph(5), Colouring((1, 2, 1, 2, 3)), 1)

    def test_refuses_d_zero(self):
        with pytest.raises(ValueError):
            lift_tight_colouring(complete_graph(3), Colouring((1, 2, 3)), 0)
