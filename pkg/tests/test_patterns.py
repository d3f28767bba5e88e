import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from subdivlab.bigraph import Bigraph
from subdivlab.errors import BudgetExceededError, CapacityError, InputError
from subdivlab.patterns import (
    Embedding,
    SubdividedPattern,
    contains_biclique,
    count_embeddings,
    find_embedding,
    iter_embeddings,
    pattern_instantiate,
    validate_embedding,
)

from helpers import random_bigraph, rng_for


C6 = Bigraph.from_edges(3, 3, [(0, 0), (0, 2), (1, 0), (1, 1), (2, 1), (2, 2)])


class TestPattern:
    def test_sizes(self):
        p = SubdividedPattern((2, 3))
        assert p.left_size == 5 and p.right_size == 6

    def test_invalid(self):
        with pytest.raises(InputError):
            SubdividedPattern(())
        with pytest.raises(InputError):
            SubdividedPattern((2, 0))

    def test_json_round_trip(self):
        p = SubdividedPattern((2, 2, 2))
        assert SubdividedPattern.from_json_dict(p.to_json_dict()) == p


class TestInstantiate:
    def test_path_of_length_two(self):
        g = pattern_instantiate(SubdividedPattern((1, 1)))
        assert g == Bigraph.from_edges(2, 1, [(0, 0), (1, 0)])

    def test_k22_subdivision(self):
        g = pattern_instantiate(SubdividedPattern((2, 2)))
        assert (g.left_count, g.right_count) == (4, 4)
        assert g.right_degrees == (2, 2, 2, 2)
        assert g.left_degrees == (2, 2, 2, 2)

    def test_hypergraph_pattern(self):
        g = pattern_instantiate(SubdividedPattern((2, 2, 2)))
        assert (g.left_count, g.right_count) == (6, 8)
        assert all(d == 3 for d in g.right_degrees)

    def test_capacity(self):
        with pytest.raises(CapacityError):
            pattern_instantiate(SubdividedPattern((100, 100)), capacity=50)


class TestFindEmbedding:
    def test_pattern_in_itself(self):
        p = SubdividedPattern((2, 2))
        host = pattern_instantiate(p)
        emb = find_embedding(host, p)
        assert emb is not None
        validate_embedding(host, p, emb)

    def test_complete_host(self):
        emb = find_embedding(Bigraph.complete(4, 4), SubdividedPattern((2, 2)))
        assert emb is not None

    def test_c6_has_no_k22_subdivision(self):
        assert find_embedding(C6, SubdividedPattern((2, 2))) is None

    def test_budget_error_is_distinct_from_absence(self):
        host = Bigraph.complete(8, 12)
        with pytest.raises(BudgetExceededError):
            find_embedding(host, SubdividedPattern((3, 3)), node_budget=3)

    def test_found_embeddings_validate(self):
        rng = rng_for(11)
        found = 0
        for _ in range(400):
            host = random_bigraph(rng)
            for parts in [(1, 1), (1, 2), (2, 2)]:
                p = SubdividedPattern(parts)
                emb = find_embedding(host, p)
                if emb is not None:
                    validate_embedding(host, p, emb)
                    found += 1
        assert found > 50

    def test_deterministic(self):
        rng = rng_for(12)
        for _ in range(50):
            host = random_bigraph(rng)
            p = SubdividedPattern((1, 2))
            assert find_embedding(host, p) == find_embedding(host, p)


class TestCountEmbeddings:
    def test_path_host(self):
        host = pattern_instantiate(SubdividedPattern((1, 1)))
        assert count_embeddings(host, SubdividedPattern((1, 1))) == 2

    def test_empty_host(self):
        assert count_embeddings(Bigraph.empty(3, 3), SubdividedPattern((1, 1))) == 0

    def test_complete_2x1(self):
        assert count_embeddings(Bigraph.complete(2, 1), SubdividedPattern((1, 1))) == 2

    def test_limit_clamps(self):
        host = Bigraph.complete(4, 4)
        assert count_embeddings(host, SubdividedPattern((1, 1)), limit=1) == 1

    def test_agrees_with_find_on_random_corpus(self):
        # module-size slice of the acceptance oracle run
        rng = rng_for(13)
        patterns = [SubdividedPattern(p) for p in [(1, 1), (1, 2), (2, 2), (2, 3)]]
        for _ in range(800):
            host = random_bigraph(rng)
            for p in patterns:
                present = find_embedding(host, p) is not None
                assert present == (count_embeddings(host, p, limit=1) == 1)


class TestIterEmbeddings:
    def test_enumerates_both_orders(self):
        host = pattern_instantiate(SubdividedPattern((1, 1)))
        embs = list(iter_embeddings(host, SubdividedPattern((1, 1))))
        assert len(embs) == 2

    def test_canonical_parts_dedupes(self):
        host = pattern_instantiate(SubdividedPattern((1, 1)))
        embs = list(iter_embeddings(host, SubdividedPattern((1, 1)), canonical_parts=True))
        assert len(embs) == 2  # the two lefts sit in different parts

        host2 = Bigraph.complete(2, 2)
        p2 = SubdividedPattern((2,))
        assert len(list(iter_embeddings(host2, p2))) == 4
        assert len(list(iter_embeddings(host2, p2, canonical_parts=True))) == 2

    def test_full_enumeration_matches_count(self):
        rng = rng_for(14)
        for _ in range(150):
            host = random_bigraph(rng, max_left=5, max_right=6)
            for parts in [(1, 1), (1, 2), (2, 2)]:
                p = SubdividedPattern(parts)
                embs = list(iter_embeddings(host, p))
                assert len(embs) == count_embeddings(host, p)
                assert len(set(embs)) == len(embs)


class TestHypergraphPatterns:
    """Three-part patterns: subdivisions of complete 3-partite 3-uniform
    hypergraphs, with tuples as subdivision vertices."""

    def test_pattern_embeds_in_itself(self):
        p = SubdividedPattern((2, 2, 2))
        host = pattern_instantiate(p)
        emb = find_embedding(host, p)
        assert emb is not None
        validate_embedding(host, p, emb)

    def test_tuple_adjacency(self):
        p = SubdividedPattern((2, 1, 2))
        host = pattern_instantiate(p)
        # right vertex for tuple (j1, j2, j3) is adjacent to left (i, j_i)
        assert host.right_count == 4
        for w, nbrs in enumerate(p.right_neighbor_lists):
            assert set(host.right_neighbors(w)) == set(nbrs)

    def test_oracle_agreement_on_random_hosts(self):
        rng = rng_for(16)
        p = SubdividedPattern((1, 1, 2))
        for _ in range(300):
            host = random_bigraph(rng)
            present = find_embedding(host, p) is not None
            assert present == (count_embeddings(host, p, limit=1) == 1)

    def test_absent_when_right_degrees_too_small(self):
        # every subdivision vertex needs degree 3 in a 3-part pattern
        host = Bigraph.from_edges(4, 4, [(0, 0), (1, 0), (2, 1), (3, 1)])
        assert find_embedding(host, SubdividedPattern((1, 1, 1))) is None


class TestContainsBiclique:
    def test_complete(self):
        assert contains_biclique(Bigraph.complete(2, 3), 2, 3)

    def test_c6(self):
        assert not contains_biclique(C6, 2, 2)

    def test_empty(self):
        assert not contains_biclique(Bigraph.empty(3, 3), 1, 1)


class TestMonotonicity:
    def test_adding_edges_preserves_embedding(self):
        rng = rng_for(15)
        tested = 0
        for _ in range(500):
            host = random_bigraph(rng)
            p = SubdividedPattern((1, 2))
            if find_embedding(host, p) is None:
                continue
            missing = [(u, v) for u in range(host.left_count)
                       for v in range(host.right_count) if v not in host.adjacency[u]]
            if not missing:
                continue
            extra = missing[int(rng.integers(0, len(missing)))]
            bigger = Bigraph.from_edges(host.left_count, host.right_count,
                                        list(host.edges()) + [extra])
            assert find_embedding(bigger, p) is not None
            tested += 1
        assert tested > 30

    @settings(max_examples=60, deadline=None)
    @given(st.integers(1, 3), st.integers(1, 3), st.integers(1, 3), st.integers(1, 3))
    def test_pattern_containment_is_monotone(self, s, t, ds, dt):
        big = pattern_instantiate(SubdividedPattern((s + ds, t + dt)))
        small = SubdividedPattern((s, t))
        assert find_embedding(big, small) is not None


def test_validate_rejects_bad_maps():
    p = SubdividedPattern((1, 1))
    host = pattern_instantiate(p)
    with pytest.raises(InputError):
        validate_embedding(host, p, Embedding((0, 0), (0,)))
    with pytest.raises(InputError):
        validate_embedding(Bigraph.empty(2, 1), p, Embedding((0, 1), (0,)))
