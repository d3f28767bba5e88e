"""Bipartite matching helpers (Hopcroft-Karp style augmentation).

Left vertices carry candidate sets of right vertices, given either as
iterables or as integer bitmasks over the right side.
"""

from __future__ import annotations

from collections import deque


def maximum_matching(candidates: list[list[int]], n_right: int) -> tuple[int, list[int], list[int]]:
    """Maximum matching between ``len(candidates)`` left slots and ``n_right`` rights.

    Returns ``(size, match_left, match_right)`` where ``match_left[i]`` is the
    right vertex matched to left slot ``i`` (or -1), and vice versa.
    """
    n_left = len(candidates)
    match_left = [-1] * n_left
    match_right = [-1] * n_right

    # Repeated BFS/DFS phases over shortest augmenting paths.
    INF = float("inf")
    while True:
        dist = [INF] * n_left
        queue = deque()
        for u in range(n_left):
            if match_left[u] == -1:
                dist[u] = 0
                queue.append(u)
        found_free = False
        while queue:
            u = queue.popleft()
            for v in candidates[u]:
                w = match_right[v]
                if w == -1:
                    found_free = True
                elif dist[w] is INF:
                    dist[w] = dist[u] + 1
                    queue.append(w)
        if not found_free:
            break

        def try_augment(u: int) -> bool:
            for v in candidates[u]:
                w = match_right[v]
                if w == -1 or (dist[w] == dist[u] + 1 and try_augment(w)):
                    match_left[u] = v
                    match_right[v] = u
                    return True
            dist[u] = INF
            return False

        for u in range(n_left):
            if match_left[u] == -1:
                try_augment(u)

    size = sum(1 for v in match_left if v != -1)
    return size, match_left, match_right


def has_perfect_left_matching(candidates: list[list[int]], n_right: int) -> bool:
    """True iff every left slot can be matched to a distinct right vertex."""
    size, _, _ = maximum_matching(candidates, n_right)
    return size == len(candidates)


def iter_bits(mask: int):
    """Yield the set bit positions of ``mask`` in increasing order."""
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low
