"""Sided subdivision patterns and exact copy detection.

A pattern with part sizes [s_1, ..., s_r] has one left vertex per (part,
slot) and one right vertex per tuple in the product of the parts; the tuple
(j_1, ..., j_r) is adjacent to exactly the r left vertices (i, j_i). With two
parts [s, t] this is the complete bipartite graph on s+t vertices with every
edge subdivided once, subdivision vertices on the right.

A copy in a host is a sided embedding: both vertex maps injective, pattern
lefts into host lefts, and every pattern edge mapped to a host edge. The
production search (``find_embedding``) backtracks over left placements with
degree filtering and an incrementally maintained right-side matching; the
exhaustive enumerator (``count_embeddings``) is kept deliberately simple and
serves as the independent oracle.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import cached_property
from math import prod

from .bigraph import Bigraph
from .errors import BudgetExceededError, CapacityError, InputError

DEFAULT_NODE_BUDGET = 10_000_000
DEFAULT_RIGHT_CAPACITY = 1_000_000


@dataclass(frozen=True)
class SubdividedPattern:
    """Part sizes [s_1, ..., s_r]; r=2 gives the subdivided complete bipartite
    graph, equal parts give the subdivided complete r-partite hypergraph."""

    part_sizes: tuple[int, ...]

    def __post_init__(self):
        sizes = tuple(int(s) for s in self.part_sizes)
        object.__setattr__(self, "part_sizes", sizes)
        if len(sizes) < 1:
            raise InputError("pattern needs at least one part")
        if any(s < 1 for s in sizes):
            raise InputError("part sizes must be positive")

    @property
    def order(self) -> int:
        return len(self.part_sizes)

    @cached_property
    def left_size(self) -> int:
        return sum(self.part_sizes)

    @cached_property
    def right_size(self) -> int:
        return prod(self.part_sizes)

    @cached_property
    def part_offsets(self) -> tuple[int, ...]:
        offs = []
        acc = 0
        for s in self.part_sizes:
            offs.append(acc)
            acc += s
        return tuple(offs)

    def left_vertex(self, part: int, slot: int) -> int:
        return self.part_offsets[part] + slot

    def part_of(self, left_index: int) -> int:
        for i in range(self.order - 1, -1, -1):
            if left_index >= self.part_offsets[i]:
                return i
        raise InputError(f"left index {left_index} out of range")

    @cached_property
    def right_tuples(self) -> tuple[tuple[int, ...], ...]:
        return tuple(itertools.product(*(range(s) for s in self.part_sizes)))

    @cached_property
    def right_neighbor_lists(self) -> tuple[tuple[int, ...], ...]:
        """For each right vertex, its r pattern-left neighbors."""
        out = []
        for tup in self.right_tuples:
            out.append(tuple(self.part_offsets[i] + j for i, j in enumerate(tup)))
        return tuple(out)

    @cached_property
    def left_neighbor_lists(self) -> tuple[tuple[int, ...], ...]:
        rows: list[list[int]] = [[] for _ in range(self.left_size)]
        for w, nbrs in enumerate(self.right_neighbor_lists):
            for x in nbrs:
                rows[x].append(w)
        return tuple(tuple(r) for r in rows)

    def left_degree(self, left_index: int) -> int:
        part = self.part_of(left_index)
        return prod(s for i, s in enumerate(self.part_sizes) if i != part)

    def to_json_dict(self) -> dict:
        return {"parts": list(self.part_sizes)}

    @classmethod
    def from_json_dict(cls, data: dict) -> "SubdividedPattern":
        try:
            return cls(tuple(int(s) for s in data["parts"]))
        except (KeyError, TypeError, ValueError) as exc:
            raise InputError(f"malformed pattern JSON: {exc}") from exc


@dataclass(frozen=True)
class Embedding:
    """Injective sided maps from pattern lefts/rights into host lefts/rights."""

    left_map: tuple[int, ...]
    right_map: tuple[int, ...]

    def to_json_dict(self) -> dict:
        return {"left_map": list(self.left_map), "right_map": list(self.right_map)}

    @classmethod
    def from_json_dict(cls, data: dict) -> "Embedding":
        try:
            return cls(tuple(int(x) for x in data["left_map"]),
                       tuple(int(x) for x in data["right_map"]))
        except (KeyError, TypeError, ValueError) as exc:
            raise InputError(f"malformed embedding JSON: {exc}") from exc


def pattern_instantiate(pattern: SubdividedPattern,
                        capacity: int = DEFAULT_RIGHT_CAPACITY) -> Bigraph:
    """Build the pattern itself as a Bigraph (lefts part by part, rights in
    lexicographic tuple order)."""
    if pattern.right_size > capacity:
        raise CapacityError(
            f"pattern right side {pattern.right_size} exceeds capacity {capacity}")
    edges = []
    for w, nbrs in enumerate(pattern.right_neighbor_lists):
        for x in nbrs:
            edges.append((x, w))
    return Bigraph.from_edges(pattern.left_size, pattern.right_size, edges)


def validate_embedding(host: Bigraph, pattern: SubdividedPattern, emb: Embedding) -> None:
    """Raise InputError unless ``emb`` is a valid sided copy of ``pattern``."""
    if len(emb.left_map) != pattern.left_size or len(emb.right_map) != pattern.right_size:
        raise InputError("embedding has wrong arity for this pattern")
    if len(set(emb.left_map)) != len(emb.left_map):
        raise InputError("left map is not injective")
    if len(set(emb.right_map)) != len(emb.right_map):
        raise InputError("right map is not injective")
    for u in emb.left_map:
        host._check_vertex("left", u)
    for v in emb.right_map:
        host._check_vertex("right", v)
    masks = host.neighbor_masks
    for w, nbrs in enumerate(pattern.right_neighbor_lists):
        hv = emb.right_map[w]
        for x in nbrs:
            if not (masks[emb.left_map[x]] >> hv) & 1:
                raise InputError(
                    f"pattern edge ({x}, {w}) not present between host "
                    f"{emb.left_map[x]} and {hv}")


class _Budget:
    __slots__ = ("remaining", "limit")

    def __init__(self, limit: int):
        self.limit = limit
        self.remaining = limit

    def spend(self) -> None:
        self.remaining -= 1
        if self.remaining < 0:
            raise BudgetExceededError(
                f"search budget of {self.limit} nodes exhausted", nodes=self.limit)


class _EmbeddingSearch:
    """Backtracking over pattern-left placements with SDR-feasibility pruning.

    A complete matching of all pattern rights into host rights (respecting the
    current candidate masks) is maintained incrementally; when a placement
    shrinks a candidate set below its matched vertex, re-augmentation is
    attempted and the branch is cut if it fails. Candidate masks only ever
    shrink along a branch, so the pruning is sound and the search complete.
    """

    def __init__(self, host: Bigraph, pattern: SubdividedPattern,
                 node_budget: int, canonical_parts: bool = False):
        self.host = host
        self.pattern = pattern
        self.budget = _Budget(node_budget)
        self.canonical_parts = canonical_parts
        # Round-robin over parts, smallest part first (its vertices have the
        # largest pattern degree). Lefts in different parts always share a
        # subdivision vertex, so from the second placement on every vertex is
        # constrained by an assigned one, which is what lets sparse hosts
        # prune early. Within a part the order is ascending, as
        # canonical-parts mode requires.
        part_order = sorted(range(pattern.order),
                            key=lambda i: (pattern.part_sizes[i], i))
        order: list[int] = []
        for slot in range(max(pattern.part_sizes)):
            for part in part_order:
                if slot < pattern.part_sizes[part]:
                    order.append(pattern.left_vertex(part, slot))
        self.order = order
        self.pat_degree = [pattern.left_degree(x) for x in range(pattern.left_size)]
        self.full_mask = (1 << host.right_count) - 1
        self.assign: list[int] = [-1] * pattern.left_size
        self.used_hosts: set[int] = set()
        self.cand: list[int] = [self.full_mask] * pattern.right_size
        self.match_of_w: list[int] = [-1] * pattern.right_size
        self.match_of_right: dict[int, int] = {}

    # -- matching maintenance ------------------------------------------- #

    def _augment(self, w: int, visited: set[int]) -> bool:
        mask = self.cand[w]
        while mask:
            low = mask & -mask
            v = low.bit_length() - 1
            mask ^= low
            if v in visited:
                continue
            visited.add(v)
            owner = self.match_of_right.get(v, -1)
            if owner == -1 or self._augment(owner, visited):
                self.match_of_w[w] = v
                self.match_of_right[v] = w
                return True
        return False

    def _init_matching(self) -> bool:
        if self.host.right_count < self.pattern.right_size:
            return False
        for w in range(self.pattern.right_size):
            if not self._augment(w, set()):
                return False
        return True

    # -- placement ------------------------------------------------------ #

    def _try_place(self, x: int, host_left: int):
        """Apply the placement; returns an undo token or None if infeasible."""
        mask = self.host.neighbor_masks[host_left]
        touched: list[tuple[int, int]] = []
        rematch: list[int] = []
        for w in self.pattern.left_neighbor_lists[x]:
            new = self.cand[w] & mask
            if new == 0:
                self._undo_cands(touched)
                return None
            touched.append((w, self.cand[w]))
            self.cand[w] = new
            if self.match_of_w[w] != -1 and not (new >> self.match_of_w[w]) & 1:
                rematch.append(w)
        saved_match = None
        if rematch:
            saved_match = (list(self.match_of_w), dict(self.match_of_right))
            for w in rematch:
                v = self.match_of_w[w]
                self.match_of_w[w] = -1
                del self.match_of_right[v]
            for w in rematch:
                if not self._augment(w, set()):
                    self.match_of_w, self.match_of_right = saved_match
                    self._undo_cands(touched)
                    return None
        self.assign[x] = host_left
        self.used_hosts.add(host_left)
        return (x, host_left, touched, saved_match)

    def _undo_cands(self, touched) -> None:
        for w, old in reversed(touched):
            self.cand[w] = old

    def _undo_place(self, token) -> None:
        x, host_left, touched, saved_match = token
        self.assign[x] = -1
        self.used_hosts.discard(host_left)
        self._undo_cands(touched)
        # The matching may have been re-augmented along shrunken candidate
        # sets; those sets are restored, so the matching is still valid.

    def _candidates_for(self, x: int):
        deg_needed = self.pat_degree[x]
        lo = 0
        if self.canonical_parts:
            part = self.pattern.part_of(x)
            off = self.pattern.part_offsets[part]
            if x > off and self.assign[x - 1] != -1:
                lo = self.assign[x - 1] + 1
        w_list = self.pattern.left_neighbor_lists[x]
        # Enumerate from the tightest constrained subdivision vertex: any
        # valid image of x must be adjacent to an image of w, which lies in
        # cand[w]. Falls back to a full scan when nothing is constrained yet.
        best_w = None
        best_bits = None
        for w in w_list:
            c = self.cand[w]
            if c == self.full_mask:
                continue
            bits = c.bit_count()
            if best_bits is None or bits < best_bits:
                best_w, best_bits = w, bits
        if best_w is None:
            pool = range(lo, self.host.left_count)
        else:
            seen = set()
            c = self.cand[best_w]
            while c:
                low = c & -c
                c ^= low
                seen.update(self.host.right_adjacency[low.bit_length() - 1])
            pool = sorted(v for v in seen if v >= lo)
        for host_left in pool:
            if host_left in self.used_hosts:
                continue
            if self.host.left_degrees[host_left] < deg_needed:
                continue
            mask = self.host.neighbor_masks[host_left]
            if all(self.cand[w] & mask for w in w_list):
                yield host_left

    # -- drivers -------------------------------------------------------- #

    def find(self) -> Embedding | None:
        if self.pattern.left_size > self.host.left_count:
            return None
        if not self._init_matching():
            return None
        return self._find_rec(0)

    def _find_rec(self, depth: int) -> Embedding | None:
        if depth == len(self.order):
            return Embedding(tuple(self.assign), tuple(self.match_of_w))
        x = self.order[depth]
        for host_left in self._candidates_for(x):
            self.budget.spend()
            token = self._try_place(x, host_left)
            if token is None:
                continue
            found = self._find_rec(depth + 1)
            if found is not None:
                return found
            self._undo_place(token)
        return None

    def iter_all(self):
        """Yield every embedding (all right variants per left placement)."""
        if self.pattern.left_size > self.host.left_count:
            return
        if not self._init_matching():
            return
        yield from self._iter_rec(0)

    def _iter_rec(self, depth: int):
        if depth == len(self.order):
            yield from self._iter_right_maps(0, [-1] * self.pattern.right_size, 0)
            return
        x = self.order[depth]
        for host_left in self._candidates_for(x):
            self.budget.spend()
            token = self._try_place(x, host_left)
            if token is None:
                continue
            yield from self._iter_rec(depth + 1)
            self._undo_place(token)

    def _iter_right_maps(self, w: int, right_map: list[int], used_mask: int):
        if w == self.pattern.right_size:
            yield Embedding(tuple(self.assign), tuple(right_map))
            return
        mask = self.cand[w] & ~used_mask
        while mask:
            low = mask & -mask
            v = low.bit_length() - 1
            mask ^= low
            self.budget.spend()
            right_map[w] = v
            yield from self._iter_right_maps(w + 1, right_map, used_mask | low)
        right_map[w] = -1


def find_embedding(host: Bigraph, pattern: SubdividedPattern,
                   node_budget: int = DEFAULT_NODE_BUDGET) -> Embedding | None:
    """Some sided copy of ``pattern`` in ``host``, or None if none exists.

    The search is complete: a None return (as opposed to a
    BudgetExceededError) proves absence. Sequential and deterministic; the
    returned embedding only depends on the inputs.
    """
    return _EmbeddingSearch(host, pattern, node_budget).find()


def iter_embeddings(host: Bigraph, pattern: SubdividedPattern,
                    node_budget: int = DEFAULT_NODE_BUDGET,
                    canonical_parts: bool = False):
    """Yield embeddings; with ``canonical_parts`` host images are forced
    ascending within each pattern part, deduplicating part symmetries."""
    yield from _EmbeddingSearch(host, pattern, node_budget,
                                canonical_parts=canonical_parts).iter_all()


def count_embeddings(host: Bigraph, pattern: SubdividedPattern,
                     node_budget: int = DEFAULT_NODE_BUDGET,
                     limit: int | None = None) -> int:
    """Exact number of embeddings (ordered map pairs) by plain enumeration.

    This is the independent oracle for ``find_embedding``: pattern lefts are
    tried in index order against every host left, with no degree filtering
    and no matching machinery; the only cut is an empty candidate
    intersection, which admits no completion. With ``limit`` the enumeration
    stops early once that many embeddings were seen (the result is then
    ``min(count, limit)``), which preserves zero/nonzero answers.
    """
    L = pattern.left_size
    if L > host.left_count or pattern.right_size > host.right_count:
        return 0
    budget = _Budget(node_budget)
    full = (1 << host.right_count) - 1
    masks = host.neighbor_masks
    left_nbrs = pattern.left_neighbor_lists
    cand = [full] * pattern.right_size
    assign = [-1] * L
    used = [False] * host.left_count

    def count_right(w: int, used_mask: int) -> int:
        if w == pattern.right_size:
            return 1
        total = 0
        mask = cand[w] & ~used_mask
        while mask:
            low = mask & -mask
            mask ^= low
            budget.spend()
            total += count_right(w + 1, used_mask | low)
            if limit is not None and total >= limit:
                return total
        return total

    def rec(x: int, found: int) -> int:
        if x == L:
            return found + count_right(0, 0)
        for host_left in range(host.left_count):
            if used[host_left]:
                continue
            budget.spend()
            hmask = masks[host_left]
            touched = []
            ok = True
            for w in left_nbrs[x]:
                new = cand[w] & hmask
                if new == 0:
                    ok = False
                    break
                touched.append((w, cand[w]))
                cand[w] = new
            if ok:
                assign[x] = host_left
                used[host_left] = True
                found = rec(x + 1, found)
                used[host_left] = False
                assign[x] = -1
            for w, old in reversed(touched):
                cand[w] = old
            if limit is not None and found >= limit:
                return found
        return found

    total = rec(0, 0)
    return total if limit is None else min(total, limit)


def contains_biclique(host: Bigraph, s: int, t: int) -> bool:
    """True iff some s left vertices have at least t common right neighbors."""
    if s < 1 or t < 1:
        raise InputError("s and t must be >= 1")
    if s > host.left_count:
        return False
    masks = host.neighbor_masks

    def rec(start: int, chosen: int, mask: int) -> bool:
        if mask.bit_count() < t:
            return False
        if chosen == s:
            return True
        for u in range(start, host.left_count - (s - chosen) + 1):
            if rec(u + 1, chosen + 1, mask & masks[u]):
                return True
        return False

    return rec(0, 0, (1 << host.right_count) - 1)
