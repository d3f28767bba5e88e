"""Shared generators for randomized test corpora.

Everything is seeded through numpy's PCG64 so test runs are reproducible.
"""

from __future__ import annotations

import numpy as np

from subdivlab.bigraph import Bigraph


def rng_for(seed: int) -> np.random.Generator:
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence(seed)))


def random_bigraph(rng: np.random.Generator, max_left: int = 6, max_right: int = 8) -> Bigraph:
    """Random host with uniformly chosen sizes and edge density."""
    m = int(rng.integers(1, max_left + 1))
    n = int(rng.integers(1, max_right + 1))
    density = float(rng.uniform(0.05, 0.95))
    cells = rng.random((m, n)) < density
    edges = [(u, v) for u in range(m) for v in range(n) if cells[u, v]]
    return Bigraph.from_edges(m, n, edges)


def naive_common_neighborhood(graph: Bigraph, left_set) -> set[int]:
    """Literal set intersection of neighbor lists (test oracle)."""
    members = list(left_set)
    result = set(graph.adjacency[members[0]])
    for u in members[1:]:
        result &= set(graph.adjacency[u])
    return result


def regularize_corpus() -> list[tuple[Bigraph, int, int]]:
    """100 deterministic inputs satisfying the regularization preconditions.

    Mix of complete hosts (the m x ceil(m^(3/2)) family), flat random
    graphs (phase 1 stops immediately), and skewed graphs whose top right
    vertices carry most edges (phase 1 recurses at least once).
    """
    from math import ceil, isqrt

    corpus: list[tuple[Bigraph, int, int]] = []
    for m in (16, 32, 64):
        n = ceil(m ** 1.5)
        corpus.append((Bigraph.complete(m, n), 2, 1))

    rng = rng_for(777)
    # Flat random graphs. With s=3 the phase-2 cap allows four shrink rounds,
    # so the left side needs headroom to avoid flooring down to a singleton.
    while len(corpus) < 73:
        s = int(rng.integers(2, 4))
        m = int(rng.integers(18, 34)) if s == 3 else int(rng.integers(8, 33))
        n_min = next(n for n in range(1, 10_000) if n**s >= m ** (2 * s - 1))
        n = max(64, n_min + int(rng.integers(0, 32)))
        delta = int(rng.integers(1, 3))
        target = delta * n + int(rng.integers(0, 2 * n))
        target = min(target, m * n)
        if target < delta * n:
            continue
        cells = rng.choice(m * n, size=target, replace=False)
        edges = [(int(c) // n, int(c) % n) for c in cells]
        corpus.append((Bigraph.from_edges(m, n, edges), s, delta))

    # Skewed graphs: heavy block of ~n/16 right vertices adjacent to every
    # left vertex, the rest sparse, so the half rule keeps recursing.
    while len(corpus) < 100:
        s = 2
        m = int(rng.integers(45, 65))
        n = int(rng.integers(512, 1025))
        if n**s < m ** (2 * s - 1):
            continue
        heavy = n // 16
        edges = [(u, v) for v in range(heavy) for u in range(m)]
        light_cols = range(heavy, n)
        for v in light_cols:
            edges.append((int(rng.integers(0, m)), v))
        corpus.append((Bigraph.from_edges(m, n, edges), s, 1))
    return corpus


def random_config(rng: np.random.Generator, plant_grid_s: int | None = None):
    """Random rational point-line configuration (<= 12 lines, <= 30 points).

    With ``plant_grid_s`` two line families of that size with distinct slopes
    are planted along with all their intersection points, so a grid is
    guaranteed; otherwise lines pass through random point pairs and grids
    arise only by coincidence.
    """
    from fractions import Fraction

    from subdivlab.incidence import RLine, RPoint, intersect_rlines

    def rand_coord() -> Fraction:
        return Fraction(int(rng.integers(-6, 7)), int(rng.integers(1, 3)))

    lines: list[RLine] = []
    points: list[RPoint] = []

    def add_line(line: RLine) -> None:
        if line not in lines and len(lines) < 12:
            lines.append(line)

    def add_point(p: RPoint) -> None:
        if p not in points and len(points) < 30:
            points.append(p)

    if plant_grid_s is not None:
        s = plant_grid_s
        m1, m2 = Fraction(0), Fraction(1, 1)
        inter1 = rng.choice(20, size=s, replace=False)
        inter2 = rng.choice(20, size=s, replace=False)
        fam1 = [RLine(-m1, 1, Fraction(int(c) - 10, 2)) for c in inter1]
        fam2 = [RLine(-m2, 1, Fraction(int(c) - 10, 2)) for c in inter2]
        for line in fam1 + fam2:
            add_line(line)
        for l1 in fam1:
            for l2 in fam2:
                p = intersect_rlines(l1, l2)
                assert p is not None
                add_point(p)

    n_extra_pts = int(rng.integers(2, 8))
    for _ in range(n_extra_pts):
        add_point(RPoint(rand_coord(), rand_coord()))
    n_extra_lines = int(rng.integers(2, 7))
    for _ in range(n_extra_lines):
        if len(points) >= 2:
            i, j = rng.choice(len(points), size=2, replace=False)
            if points[int(i)] != points[int(j)]:
                try:
                    add_line(RLine.through(points[int(i)], points[int(j)]))
                    continue
                except Exception:
                    pass
        add_line(RLine(1, rand_coord(), rand_coord()))
    return points, lines


def naive_nprime(graph: Bigraph, u_list) -> set[int]:
    """Exhaustive tuple enumeration of distinct representatives (test oracle)."""
    from itertools import permutations

    s = len(u_list)
    result = set()
    for x in range(graph.left_count):
        if x in u_list:
            continue
        cands = [sorted(naive_common_neighborhood(graph, [u, x])) for u in u_list]
        found = False
        pool = sorted(set().union(*[set(c) for c in cands])) if cands else []
        for combo in permutations(pool, s):
            if all(combo[i] in cands[i] for i in range(s)):
                found = True
                break
        if found:
            result.add(x)
    return result
