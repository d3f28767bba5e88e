from fractions import Fraction
from math import comb

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from subdivlab.bigraph import (
    Bigraph,
    common_neighborhood,
    light_edge_claim_check,
    nprime_neighborhood,
    pair_weight,
    top_k_by_degree,
    total_weight,
)
from subdivlab.errors import InputError

from helpers import naive_common_neighborhood, naive_nprime, random_bigraph, rng_for


C6 = Bigraph.from_edges(3, 3, [(0, 0), (0, 2), (1, 0), (1, 1), (2, 1), (2, 2)])


def small_graphs(count: int, seed: int = 1):
    rng = rng_for(seed)
    return [random_bigraph(rng) for _ in range(count)]


class TestConstruction:
    def test_rejects_duplicate_edges(self):
        with pytest.raises(InputError):
            Bigraph.from_edges(2, 2, [(0, 0), (0, 0)])

    def test_rejects_out_of_range(self):
        with pytest.raises(InputError):
            Bigraph.from_edges(2, 2, [(0, 5)])

    def test_edge_count_is_row_sum(self):
        g = Bigraph.from_edges(3, 4, [(0, 1), (0, 2), (2, 3)])
        assert g.edge_count == 3
        assert g.left_degrees == (2, 0, 1)
        assert g.right_degrees == (0, 1, 1, 1)

    def test_json_round_trip(self):
        g = Bigraph.from_edges(3, 4, [(2, 3), (0, 2), (0, 1)])
        assert Bigraph.from_json_dict(g.to_json_dict()) == g
        assert g.to_json_dict()["edges"] == [[0, 1], [0, 2], [2, 3]]

    def test_induced_subgraph_relabels(self):
        g = Bigraph.from_edges(3, 3, [(0, 0), (1, 1), (2, 2), (2, 0)])
        sub = g.induced_subgraph([0, 2], [0, 2])
        assert sub == Bigraph.from_edges(2, 2, [(0, 0), (1, 1), (1, 0)])

    def test_transpose_involution(self):
        g = Bigraph.from_edges(3, 2, [(0, 0), (1, 1), (2, 0)])
        assert g.transpose().transpose() == g


class TestCommonNeighborhood:
    def test_complete_graph(self):
        assert common_neighborhood(Bigraph.complete(2, 3), {0, 1}) == {0, 1, 2}

    def test_intersection(self):
        g = Bigraph.from_edges(2, 3, [(0, 0), (0, 1), (1, 1), (1, 2)])
        assert common_neighborhood(g, {0, 1}) == {1}

    def test_empty_graph(self):
        assert common_neighborhood(Bigraph.empty(3, 3), {0}) == set()

    def test_invalid_index(self):
        with pytest.raises(InputError):
            common_neighborhood(Bigraph.empty(3, 3), {7})

    def test_empty_set_rejected(self):
        with pytest.raises(InputError):
            common_neighborhood(Bigraph.empty(3, 3), set())

    def test_matches_naive_on_random_corpus(self):
        # intersection identity on the full randomized corpus
        rng = rng_for(20)
        for _ in range(10_000):
            g = random_bigraph(rng)
            size = int(rng.integers(1, min(3, g.left_count) + 1))
            subset = list(rng.choice(g.left_count, size=size, replace=False))
            assert common_neighborhood(g, subset) == naive_common_neighborhood(g, subset)


class TestPairWeight:
    def test_light(self):
        rep = pair_weight(Bigraph.complete(2, 2), 0, 1, 2, 2)
        assert (rep.weight, rep.threshold, rep.weight_class) == (2, 6, "light")

    def test_heavy(self):
        rep = pair_weight(Bigraph.complete(2, 7), 0, 1, 2, 2)
        assert rep.weight == 7 and rep.weight_class == "heavy"

    def test_zero(self):
        rep = pair_weight(Bigraph.empty(2, 2), 0, 1, 1, 1)
        assert rep.weight == 0 and rep.weight_class == "zero"

    def test_same_vertex_rejected(self):
        with pytest.raises(InputError):
            pair_weight(Bigraph.complete(2, 2), 1, 1, 1, 1)

    def test_classes_partition(self):
        rng = rng_for(3)
        for _ in range(200):
            g = random_bigraph(rng)
            if g.left_count < 2:
                continue
            rep = pair_weight(g, 0, 1, 2, 3)
            if rep.weight == 0:
                assert rep.weight_class == "zero"
            elif rep.weight < comb(5, 2):
                assert rep.weight_class == "light"
            else:
                assert rep.weight_class == "heavy"


class TestTotalWeight:
    def test_complete_2x2(self):
        rep = total_weight(Bigraph.complete(2, 2))
        assert rep.w_u == 2
        assert rep.jensen_lower == Fraction(16, 8)
        assert rep.jensen_holds is True

    def test_empty(self):
        rep = total_weight(Bigraph.empty(2, 2))
        assert rep.w_u == 0 and rep.jensen_lower == 0

    def test_complete_3x3(self):
        rep = total_weight(Bigraph.complete(3, 3))
        assert rep.w_u == 9
        assert rep.jensen_lower == Fraction(81, 12)

    def test_zero_right_rejected(self):
        with pytest.raises(InputError):
            total_weight(Bigraph.empty(2, 0))

    def test_double_counting_identity_and_jensen(self):
        # W(U) == sum_v C(deg v, 2), and the e^2/(4n) bound whenever e >= 2n
        rng = rng_for(4)
        for _ in range(2000):
            g = random_bigraph(rng)
            if g.right_count == 0:
                continue
            rep = total_weight(g)
            assert rep.w_u == sum(comb(d, 2) for d in g.right_degrees)
            if rep.jensen_applicable:
                assert rep.jensen_holds


class TestLightEdgeClaim:
    def test_complete_2x2_hypothesis_fails(self):
        rep = light_edge_claim_check(Bigraph.complete(2, 2), 2, 2)
        assert rep.w_u == 2
        assert not rep.hypothesis_met  # 2 < 8 * 25 * 2

    def test_empty_graph(self):
        rep = light_edge_claim_check(Bigraph.empty(3, 3), 1, 1)
        assert rep.w_u == 0 and rep.light_count == 0 and not rep.hypothesis_met

    def test_complete_8x4(self):
        rep = light_edge_claim_check(Bigraph.complete(8, 4), 1, 1)
        assert rep.w_u == 28 * 4 == 112
        assert not rep.hypothesis_met  # 112 < 8 * 9 * 4 = 288

    def test_claim_asserted_when_applicable_with_vacuity_report(self):
        # The claim binds only on copy-free hosts meeting the weight
        # hypothesis; at this scale the hypothesis is essentially
        # unreachable (W(U) <= C(6,2) n = 15n < 72n), so vacuous instances
        # are counted and reported rather than hidden.
        from subdivlab.patterns import SubdividedPattern, find_embedding

        rng = rng_for(6)
        vacuous = 0
        asserted = 0
        for _ in range(2000):
            g = random_bigraph(rng)
            rep = light_edge_claim_check(g, 1, 1)
            if not rep.hypothesis_met:
                vacuous += 1
                continue
            if find_embedding(g, SubdividedPattern((1, 1))) is None:
                assert rep.claim_holds
                asserted += 1
        print(f"light-edge claim: {asserted} asserted, {vacuous} vacuous "
              f"(hypothesis unmet) of 2000 instances")
        assert vacuous + asserted <= 2000


class TestNprime:
    def test_complete_3x3(self):
        assert nprime_neighborhood(Bigraph.complete(3, 3), [0, 1]) == {2}

    def test_single_right_vertex(self):
        g = Bigraph.from_edges(2, 1, [(0, 0), (1, 0)])
        assert nprime_neighborhood(g, [0]) == {1}

    def test_empty(self):
        assert nprime_neighborhood(Bigraph.empty(4, 4), [0, 1]) == set()

    def test_duplicates_rejected(self):
        with pytest.raises(InputError):
            nprime_neighborhood(Bigraph.complete(3, 3), [1, 1])

    def test_matches_exhaustive_enumeration(self):
        rng = rng_for(5)
        for _ in range(400):
            g = random_bigraph(rng)
            if g.left_count < 2:
                continue
            size = int(rng.integers(1, min(3, g.left_count) + 1))
            us = list(rng.choice(g.left_count, size=size, replace=False))
            assert nprime_neighborhood(g, us) == naive_nprime(g, us)


class TestTopK:
    def test_basic(self):
        g = Bigraph.from_edges(3, 3, [(0, 0), (0, 1), (0, 2), (1, 0), (2, 0), (2, 1)])
        assert top_k_by_degree(g, "left", 2) == [0, 2]

    def test_tie_break_by_index(self):
        g = Bigraph.from_edges(3, 3, [(0, 0), (0, 1), (1, 0), (1, 1), (2, 0), (2, 1)])
        assert top_k_by_degree(g, "left", 1) == [0]

    def test_k_zero(self):
        assert top_k_by_degree(Bigraph.complete(3, 3), "left", 0) == []

    def test_k_out_of_range(self):
        with pytest.raises(InputError):
            top_k_by_degree(Bigraph.complete(3, 3), "left", 4)

    def test_restriction(self):
        g = Bigraph.from_edges(3, 3, [(0, 0), (0, 1), (0, 2), (1, 0), (2, 0), (2, 1)])
        assert top_k_by_degree(g, "left", 1, restricted_to=[1, 2]) == [2]


@settings(max_examples=120, deadline=None)
@given(st.integers(0, 5), st.integers(1, 6), st.lists(st.tuples(st.integers(0, 4), st.integers(0, 5))))
def test_from_edges_never_breaks_invariants(m, n, raw_edges):
    edges = {(u, v) for u, v in raw_edges if u < m and v < n}
    g = Bigraph.from_edges(m, n, sorted(edges))
    assert g.edge_count == len(edges)
    for row in g.adjacency:
        assert list(row) == sorted(set(row))
