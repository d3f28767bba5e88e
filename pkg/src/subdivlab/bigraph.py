"""Sided bipartite graphs and the weighted-pair primitives built on them.

A :class:`Bigraph` has a left part U and a right part V; every derived
quantity is a pure function of the (immutable) adjacency, so instances can be
shared freely across threads and parallel sweeps.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from math import comb

from ._matching import maximum_matching
from .errors import InputError

Side = str  # "left" | "right"


@dataclass(frozen=True)
class Bigraph:
    """Bipartite graph with left part U (size ``left_count``) and right part V.

    ``adjacency[u]`` is the strictly increasing tuple of right-vertex indices
    adjacent to left vertex ``u``. Duplicate edges are rejected.
    """

    left_count: int
    right_count: int
    adjacency: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        if self.left_count < 0 or self.right_count < 0:
            raise InputError("vertex counts must be nonnegative")
        if len(self.adjacency) != self.left_count:
            raise InputError("adjacency must have one row per left vertex")
        for u, row in enumerate(self.adjacency):
            for i, v in enumerate(row):
                if not (0 <= v < self.right_count):
                    raise InputError(f"right index {v} out of range in row {u}")
                if i > 0 and row[i - 1] >= v:
                    raise InputError(f"row {u} must be strictly increasing")

    # ------------------------------------------------------------------ #
    # constructors

    @classmethod
    def from_edges(cls, left_count: int, right_count: int, edges) -> "Bigraph":
        rows: list[list[int]] = [[] for _ in range(left_count)]
        seen = set()
        for u, v in edges:
            if not (0 <= u < left_count):
                raise InputError(f"left index {u} out of range")
            if not (0 <= v < right_count):
                raise InputError(f"right index {v} out of range")
            if (u, v) in seen:
                raise InputError(f"duplicate edge ({u}, {v})")
            seen.add((u, v))
            rows[u].append(v)
        return cls(left_count, right_count, tuple(tuple(sorted(r)) for r in rows))

    @classmethod
    def complete(cls, left_count: int, right_count: int) -> "Bigraph":
        row = tuple(range(right_count))
        return cls(left_count, right_count, tuple(row for _ in range(left_count)))

    @classmethod
    def empty(cls, left_count: int, right_count: int) -> "Bigraph":
        return cls(left_count, right_count, tuple(() for _ in range(left_count)))

    # ------------------------------------------------------------------ #
    # basic accessors

    @cached_property
    def edge_count(self) -> int:
        return sum(len(row) for row in self.adjacency)

    @cached_property
    def left_degrees(self) -> tuple[int, ...]:
        return tuple(len(row) for row in self.adjacency)

    @cached_property
    def right_degrees(self) -> tuple[int, ...]:
        deg = [0] * self.right_count
        for row in self.adjacency:
            for v in row:
                deg[v] += 1
        return tuple(deg)

    @cached_property
    def right_adjacency(self) -> tuple[tuple[int, ...], ...]:
        rows: list[list[int]] = [[] for _ in range(self.right_count)]
        for u, row in enumerate(self.adjacency):
            for v in row:
                rows[v].append(u)
        return tuple(tuple(r) for r in rows)

    @cached_property
    def neighbor_masks(self) -> tuple[int, ...]:
        """Per left vertex, the bitmask of its right neighbors."""
        masks = []
        for row in self.adjacency:
            m = 0
            for v in row:
                m |= 1 << v
            masks.append(m)
        return tuple(masks)

    @cached_property
    def right_neighbor_masks(self) -> tuple[int, ...]:
        """Per right vertex, the bitmask of its left neighbors."""
        masks = [0] * self.right_count
        for u, row in enumerate(self.adjacency):
            for v in row:
                masks[v] |= 1 << u
        return tuple(masks)

    def neighbors(self, u: int) -> tuple[int, ...]:
        self._check_vertex("left", u)
        return self.adjacency[u]

    def right_neighbors(self, v: int) -> tuple[int, ...]:
        self._check_vertex("right", v)
        return self.right_adjacency[v]

    def degree(self, side: Side, index: int) -> int:
        self._check_vertex(side, index)
        if side == "left":
            return len(self.adjacency[index])
        return self.right_degrees[index]

    def max_degree(self, side: Side) -> int:
        degs = self.left_degrees if side == "left" else self.right_degrees
        return max(degs, default=0)

    def edges(self):
        for u, row in enumerate(self.adjacency):
            for v in row:
                yield (u, v)

    def _check_vertex(self, side: Side, index: int) -> None:
        bound = self.left_count if side == "left" else self.right_count
        if side not in ("left", "right"):
            raise InputError(f"unknown side {side!r}")
        if not (0 <= index < bound):
            raise InputError(f"{side} vertex {index} out of range")

    # ------------------------------------------------------------------ #
    # derived graphs

    def induced_subgraph(self, left_subset, right_subset) -> "Bigraph":
        """Subgraph induced on the given vertex subsets, relabeled in sorted order."""
        left_sorted = sorted(set(left_subset))
        right_sorted = sorted(set(right_subset))
        for u in left_sorted:
            self._check_vertex("left", u)
        for v in right_sorted:
            self._check_vertex("right", v)
        right_pos = {v: i for i, v in enumerate(right_sorted)}
        rows = []
        for u in left_sorted:
            rows.append(tuple(right_pos[v] for v in self.adjacency[u] if v in right_pos))
        return Bigraph(len(left_sorted), len(right_sorted), tuple(rows))

    def transpose(self) -> "Bigraph":
        """The same graph with the two sides swapped."""
        return Bigraph(self.right_count, self.left_count, self.right_adjacency)

    # ------------------------------------------------------------------ #
    # serialization: {"left": m, "right": n, "edges": [[u, v], ...]}

    def to_json_dict(self) -> dict:
        return {
            "left": self.left_count,
            "right": self.right_count,
            "edges": [[u, v] for u, v in sorted(self.edges())],
        }

    @classmethod
    def from_json_dict(cls, data: dict) -> "Bigraph":
        try:
            left = data["left"]
            right = data["right"]
            edges = [(int(u), int(v)) for u, v in data["edges"]]
        except (KeyError, TypeError, ValueError) as exc:
            raise InputError(f"malformed bigraph JSON: {exc}") from exc
        return cls.from_edges(int(left), int(right), edges)


# ---------------------------------------------------------------------- #
# weighted-pair primitives


@dataclass(frozen=True)
class PairWeightReport:
    """Common-neighborhood weight of one unordered left pair, classified
    against the light/heavy threshold binomial(s+t, 2)."""

    pair: tuple[int, int]
    weight: int
    threshold: int
    weight_class: str  # "zero" | "light" | "heavy"


@dataclass(frozen=True)
class TotalWeightReport:
    """Total pair weight W(U) and its convexity lower bound e^2/(4n).

    The lower bound is provable only from e >= 2n (the chained inequality
    n*C(e/n,2) >= e^2/(4n) needs e/n >= 2); ``jensen_holds`` is None when the
    edge count is below that threshold.
    """

    w_u: int
    jensen_lower: Fraction
    jensen_applicable: bool
    jensen_holds: bool | None


@dataclass(frozen=True)
class LightEdgeReport:
    """Light-edge count against the required fraction W(U)/(4(s+t+1)^3).

    The claim is only meaningful when the host is subdivision-copy-free and
    ``hypothesis_met`` is True; callers track vacuous instances themselves.
    """

    hypothesis_met: bool
    light_count: int
    required: Fraction
    claim_holds: bool
    w_u: int


def common_neighborhood(graph: Bigraph, left_set) -> set[int]:
    """Right vertices adjacent to every member of ``left_set`` (nonempty)."""
    members = list(left_set)
    if not members:
        raise InputError("left_set must be nonempty")
    mask = -1
    for u in members:
        graph._check_vertex("left", u)
        mask &= graph.neighbor_masks[u]
    out = set()
    while mask:
        low = mask & -mask
        out.add(low.bit_length() - 1)
        mask ^= low
    return out


def _classify(weight: int, threshold: int) -> str:
    if weight == 0:
        return "zero"
    if weight < threshold:
        return "light"
    return "heavy"


def pair_weight(graph: Bigraph, u: int, v: int, s: int, t: int) -> PairWeightReport:
    """Weight W(u,v) = |N({u,v})| with light/heavy classification."""
    if u == v:
        raise InputError("pair must consist of two distinct left vertices")
    if s < 1 or t < 1:
        raise InputError("s and t must be >= 1")
    graph._check_vertex("left", u)
    graph._check_vertex("left", v)
    weight = (graph.neighbor_masks[u] & graph.neighbor_masks[v]).bit_count()
    threshold = comb(s + t, 2)
    return PairWeightReport(
        pair=(min(u, v), max(u, v)),
        weight=weight,
        threshold=threshold,
        weight_class=_classify(weight, threshold),
    )


def total_weight(graph: Bigraph) -> TotalWeightReport:
    """W(U) = sum of W(u,v) over unordered left pairs, plus the e^2/(4n) bound."""
    n = graph.right_count
    if n == 0:
        raise InputError("right part must be nonempty")
    masks = graph.neighbor_masks
    m = graph.left_count
    w_u = 0
    for i in range(m):
        mi = masks[i]
        for j in range(i + 1, m):
            w_u += (mi & masks[j]).bit_count()
    e = graph.edge_count
    jensen_lower = Fraction(e * e, 4 * n)
    applicable = e >= 2 * n
    holds = (w_u >= jensen_lower) if applicable else None
    return TotalWeightReport(w_u, jensen_lower, applicable, holds)


def light_edge_claim_check(graph: Bigraph, s: int, t: int) -> LightEdgeReport:
    """Check the light-edge abundance claim for threshold parameters (s, t).

    ``hypothesis_met`` is W(U) >= 8(s+t+1)^2 * n; ``required`` is
    W(U)/(4(s+t+1)^3). At desk scales the hypothesis is rarely satisfiable,
    so callers should count and report vacuously-passing instances.
    """
    if s < 1 or t < 1:
        raise InputError("s and t must be >= 1")
    threshold = comb(s + t, 2)
    masks = graph.neighbor_masks
    m = graph.left_count
    w_u = 0
    light = 0
    for i in range(m):
        mi = masks[i]
        for j in range(i + 1, m):
            w = (mi & masks[j]).bit_count()
            w_u += w
            if 1 <= w < threshold:
                light += 1
    hypothesis_met = w_u >= 8 * (s + t + 1) ** 2 * graph.right_count
    required = Fraction(w_u, 4 * (s + t + 1) ** 3)
    return LightEdgeReport(
        hypothesis_met=hypothesis_met,
        light_count=light,
        required=required,
        claim_holds=light >= required,
        w_u=w_u,
    )


def nprime_neighborhood(graph: Bigraph, u_list) -> set[int]:
    """Left vertices x admitting distinct v_i in N(u_i) & N(x) for each u_i.

    Membership is a system-of-distinct-representatives condition, decided by
    maximum bipartite matching between the slots i and candidate rights.
    """
    us = list(u_list)
    if len(set(us)) != len(us):
        raise InputError("u_list must not contain duplicates")
    if not us:
        raise InputError("u_list must be nonempty")
    for u in us:
        graph._check_vertex("left", u)
    u_masks = [graph.neighbor_masks[u] for u in us]
    excluded = set(us)
    result = set()
    for x in range(graph.left_count):
        if x in excluded:
            continue
        x_mask = graph.neighbor_masks[x]
        cand_masks = [m & x_mask for m in u_masks]
        if any(c == 0 for c in cand_masks):
            continue
        candidates = []
        for c in cand_masks:
            row = []
            while c:
                low = c & -c
                row.append(low.bit_length() - 1)
                c ^= low
            candidates.append(row)
        size, _, _ = maximum_matching(candidates, graph.right_count)
        if size == len(us):
            result.add(x)
    return result


def top_k_by_degree(graph: Bigraph, side: Side, k: int, restricted_to=None) -> list[int]:
    """The k vertices of largest degree, ties broken by ascending index."""
    if side not in ("left", "right"):
        raise InputError(f"unknown side {side!r}")
    if restricted_to is None:
        pool = list(range(graph.left_count if side == "left" else graph.right_count))
    else:
        pool = sorted(set(restricted_to))
        for v in pool:
            graph._check_vertex(side, v)
    if not (0 <= k <= len(pool)):
        raise InputError(f"k={k} out of range for pool of size {len(pool)}")
    degs = graph.left_degrees if side == "left" else graph.right_degrees
    pool.sort(key=lambda v: (-degs[v], v))
    return pool[:k]
