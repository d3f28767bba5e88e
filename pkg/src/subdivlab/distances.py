"""Distinct-distance machinery: local condition checking, distance energy,
the lift of planar point pairs to R^4 points and quadrics, and the witness
extraction that turns a subdivision copy in the lifted system into a small
point set with few distinct distances.

Distances are compared as exact squared rationals throughout (equality of
nonnegative reals is equality of their squares, and radicals never appear).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from itertools import combinations
from math import comb

import numpy as np

from .bigraph import Bigraph
from .errors import (
    BudgetExceededError,
    InputError,
    InvariantViolation,
    StructuralError,
)
from .incidence import RPoint
from .jsonio import format_rational
from .patterns import DEFAULT_NODE_BUDGET, Embedding, SubdividedPattern, find_embedding

ORIENT_QUADRICS_LEFT = "quadrics-left"
ORIENT_POINTS_LEFT = "points-left"


@dataclass(frozen=True)
class PlanarPointSet:
    """Distinct points with exact rational coordinates."""

    points: tuple[RPoint, ...]

    def __post_init__(self):
        pts = tuple(self.points)
        object.__setattr__(self, "points", pts)
        if len(set(pts)) != len(pts):
            raise InputError("points must be distinct")

    @classmethod
    def from_coords(cls, coords) -> "PlanarPointSet":
        return cls(tuple(RPoint(Fraction(x), Fraction(y)) for x, y in coords))

    @classmethod
    def integer_grid(cls, width: int, height: int) -> "PlanarPointSet":
        return cls.from_coords((x, y) for x in range(width) for y in range(height))

    def __len__(self) -> int:
        return len(self.points)

    @cached_property
    def squared_distances(self) -> tuple[tuple[Fraction, ...], ...]:
        pts = self.points
        n = len(pts)
        rows = []
        for i in range(n):
            row = []
            for j in range(n):
                dx = pts[i].x - pts[j].x
                dy = pts[i].y - pts[j].y
                row.append(dx * dx + dy * dy)
            rows.append(tuple(row))
        return tuple(rows)

    @cached_property
    def distance_ids(self) -> tuple[tuple[int, ...], ...]:
        """Squared distances as dense integer ids (0 is always d^2 = 0)."""
        ids: dict[Fraction, int] = {Fraction(0): 0}
        rows = []
        for row in self.squared_distances:
            out = []
            for d in row:
                if d not in ids:
                    ids[d] = len(ids)
                out.append(ids[d])
            rows.append(tuple(out))
        return tuple(rows)

    def to_json_dict(self) -> dict:
        return {"points": [[format_rational(p.x), format_rational(p.y)]
                           for p in self.points]}


def distinct_distance_count(point_set: PlanarPointSet) -> int:
    """Number of distinct (squared) distances over unordered pairs."""
    if len(point_set) < 1:
        raise InputError("point set must be nonempty")
    d2 = point_set.squared_distances
    return len({d2[i][j] for i, j in combinations(range(len(point_set)), 2)})


def _distinct_among(point_set: PlanarPointSet, indices) -> int:
    d2 = point_set.squared_distances
    return len({d2[i][j] for i, j in combinations(sorted(indices), 2)})


@dataclass(frozen=True)
class LocalConditionReport:
    holds: bool
    violating_subset: tuple[int, ...] | None


def check_local_condition(point_set: PlanarPointSet, p: int, q: int,
                          subset_budget: int = 2_000_000) -> LocalConditionReport:
    """Does every p-subset determine at least q distinct distances?

    Brute force over all p-subsets, guarded by a budget on their number.
    """
    n = len(point_set)
    if p > n:
        raise InputError("p cannot exceed the number of points")
    if p < 1:
        raise InputError("p must be >= 1")
    if q <= 0:
        return LocalConditionReport(holds=True, violating_subset=None)
    if comb(n, p) > subset_budget:
        raise BudgetExceededError(
            f"{comb(n, p)} subsets exceed the budget {subset_budget}")
    for subset in combinations(range(n), p):
        if _distinct_among(point_set, subset) < q:
            return LocalConditionReport(holds=False, violating_subset=subset)
    return LocalConditionReport(holds=True, violating_subset=None)


@dataclass(frozen=True)
class DistanceClass:
    squared_distance: Fraction
    ordered_pair_count: int


@dataclass(frozen=True)
class EnergyReport:
    """Distance classes over ordered pairs and the energy sum of squares."""

    classes: tuple[DistanceClass, ...]
    energy: int


def energy(point_set: PlanarPointSet) -> EnergyReport:
    if len(point_set) < 1:
        raise InputError("point set must be nonempty")
    d2 = point_set.squared_distances
    n = len(point_set)
    counts: dict[Fraction, int] = {}
    for i in range(n):
        for j in range(n):
            if i != j:
                counts[d2[i][j]] = counts.get(d2[i][j], 0) + 1
    classes = tuple(DistanceClass(d, c) for d, c in sorted(counts.items()))
    return EnergyReport(classes=classes, energy=sum(c * c for c in counts.values()))


def energy_bruteforce(point_set: PlanarPointSet) -> int:
    """Independent quadruple count: (a,b,c,d) with |ac| = |bd| > 0."""
    ids = point_set.distance_ids
    n = len(point_set)
    total = 0
    for a in range(n):
        ida = ids[a]
        for c in range(n):
            if a == c:
                continue
            k = ida[c]
            for b in range(n):
                idb = ids[b]
                for d in range(n):
                    if b != d and idb[d] == k:
                        total += 1
    return total


def q_formula(p: int, s: int) -> int:
    """C(p,2) - p + 3*floor(p/(2s)) + 2s + 2."""
    if p < 1 or s < 1:
        raise InputError("p and s must be >= 1")
    return comb(p, 2) - p + 3 * (p // (2 * s)) + 2 * s + 2


# ---------------------------------------------------------------------- #
# the lift


@dataclass(frozen=True)
class LiftedSystem:
    """Equitable split of all ordered point pairs into lifted R^4 points
    (first part) and quadrics (second part), with their incidence graph.

    The graph has QUADRICS on the left and LIFTED POINTS on the right; the
    edge between Q_(c,d) and v_(a,b) exists exactly when |ac| = |bd|, which
    is then necessarily positive with a != c and b != d.
    """

    point_set: PlanarPointSet
    p1_pairs: tuple[tuple[int, int], ...]
    p2_pairs: tuple[tuple[int, int], ...]
    graph: Bigraph
    seed: int | None

    def lifted_point_coords(self, right_index: int):
        a, b = self.p1_pairs[right_index]
        pa, pb = self.point_set.points[a], self.point_set.points[b]
        return (pa.x, pa.y, pb.x, pb.y)

    def point_pair(self, right_index: int) -> tuple[int, int]:
        return self.p1_pairs[right_index]

    def quadric_pair(self, left_index: int) -> tuple[int, int]:
        return self.p2_pairs[left_index]


def _build_lifted(point_set: PlanarPointSet, p1, p2, seed) -> LiftedSystem:
    n = len(point_set)
    ids = np.array(point_set.distance_ids, dtype=np.int64)
    a1 = np.array([a for a, _ in p1], dtype=np.intp)
    b1 = np.array([b for _, b in p1], dtype=np.intp)
    c2 = np.array([c for c, _ in p2], dtype=np.intp)
    d2m = np.array([d for _, d in p2], dtype=np.intp)
    # incidence[i, j]: lifted point i on quadric j  <=>  |a_i c_j| = |b_i d_j|
    inc = ids[a1][:, c2] == ids[b1][:, d2m]
    edges = []
    pts = point_set.points
    for i, j in zip(*np.nonzero(inc)):
        i, j = int(i), int(j)
        a, b = p1[i]
        c, d = p2[j]
        # Exact re-check straight from coordinates (quadric equation form),
        # plus the forced distinctness of both pair slots.
        lhs = (pts[a].x - pts[c].x) ** 2 + (pts[a].y - pts[c].y) ** 2
        rhs = (pts[b].x - pts[d].x) ** 2 + (pts[b].y - pts[d].y) ** 2
        if lhs != rhs:
            raise InvariantViolation("lift incidence failed exact distance check")
        if a == c or b == d:
            raise InvariantViolation("lift incidence with a degenerate pair slot")
        edges.append((j, i))  # quadrics left, lifted points right
    graph = Bigraph.from_edges(len(p2), len(p1), edges)
    return LiftedSystem(point_set=point_set, p1_pairs=tuple(p1),
                        p2_pairs=tuple(p2), graph=graph, seed=seed)


def lift_from_partition(point_set: PlanarPointSet, p1_pairs, p2_pairs) -> LiftedSystem:
    """Build the lifted system from an explicit equitable pair partition."""
    n = len(point_set)
    p1 = [tuple(x) for x in p1_pairs]
    p2 = [tuple(x) for x in p2_pairs]
    all_pairs = {(i, j) for i in range(n) for j in range(n)}
    if set(p1) | set(p2) != all_pairs or set(p1) & set(p2):
        raise InputError("partition must split all ordered pairs")
    if abs(len(p1) - len(p2)) > 1:
        raise InputError("partition must be equitable")
    return _build_lifted(point_set, sorted(p1), sorted(p2), seed=None)


def lift(point_set: PlanarPointSet, seed: int) -> LiftedSystem:
    """Uniformly random equitable partition of all n^2 ordered pairs
    (diagonal included) under the seeded generator, then the lifted system."""
    n = len(point_set)
    if n < 2:
        raise InputError("need at least two points to lift")
    pairs = [(i, j) for i in range(n) for j in range(n)]
    rng = np.random.Generator(np.random.PCG64(np.random.SeedSequence(seed)))
    perm = rng.permutation(len(pairs))
    half = len(pairs) // 2
    size1 = half
    if len(pairs) % 2 == 1 and int(rng.integers(2)) == 1:
        size1 = half + 1
    chosen = perm[:size1]
    chosen_set = set(int(k) for k in chosen)
    p1 = sorted(pairs[k] for k in chosen_set)
    p2 = sorted(pairs[k] for k in range(len(pairs)) if k not in chosen_set)
    return _build_lifted(point_set, p1, p2, seed=seed)


# ---------------------------------------------------------------------- #
# witness extraction


@dataclass(frozen=True)
class LabelRecord:
    pair: tuple[int, int]
    label: tuple[int, int]


@dataclass(frozen=True)
class RoundRecord:
    index: int
    points_added: int
    labels_added: tuple[LabelRecord, ...]
    complete: bool

    @property
    def ell(self) -> int:
        return len(self.labels_added)


@dataclass(frozen=True)
class WitnessTrace:
    s_points: tuple[int, ...]
    t_prime: tuple[tuple[int, int], ...]  # the pair carried by each chosen T' vertex
    rounds: tuple[RoundRecord, ...]
    a_points: tuple[int, ...]
    padded: tuple[int, ...]
    distinct_count: int
    x: int
    y: int
    z: int

    def total_labels(self) -> int:
        return sum(r.ell for r in self.rounds)

    def to_json_dict(self) -> dict:
        return {
            "s_points": list(self.s_points),
            "t_prime": [list(p) for p in self.t_prime],
            "rounds": [
                {"i": r.index, "p_i": r.points_added,
                 "ell_i": r.ell, "complete": r.complete,
                 "labels_added": [[list(l.pair), list(l.label)]
                                  for l in r.labels_added]}
                for r in self.rounds
            ],
            "A": list(self.a_points),
            "padded": list(self.padded),
            "distinct": self.distinct_count,
            "x": self.x, "y": self.y, "z": self.z,
        }

    @classmethod
    def from_json_dict(cls, data: dict) -> "WitnessTrace":
        try:
            rounds = tuple(
                RoundRecord(
                    index=r["i"], points_added=r["p_i"], complete=bool(r["complete"]),
                    labels_added=tuple(
                        LabelRecord(tuple(pair), tuple(label))
                        for pair, label in r["labels_added"]),
                )
                for r in data["rounds"]
            )
            return cls(
                s_points=tuple(data["s_points"]),
                t_prime=tuple(tuple(p) for p in data["t_prime"]),
                rounds=rounds,
                a_points=tuple(data["A"]),
                padded=tuple(data["padded"]),
                distinct_count=int(data["distinct"]),
                x=int(data["x"]), y=int(data["y"]), z=int(data["z"]),
            )
        except (KeyError, TypeError, ValueError) as exc:
            raise InputError(f"malformed witness trace JSON: {exc}") from exc


def _pair_key(i: int, j: int) -> tuple[int, int]:
    return (i, j) if i <= j else (j, i)


def extract_witness(system: LiftedSystem, emb: Embedding, p: int, s: int,
                    orientation: str = ORIENT_QUADRICS_LEFT) -> WitnessTrace:
    """Run the round-based edge-processing procedure on a sided [s, t] copy.

    ``orientation`` states which way the embedding was found: pattern lefts
    into quadrics (the lifted graph as stored) or into lifted points (its
    transpose). Processing is identical either way because every edge joins
    one lifted point v_(a,b) and one quadric Q_(c,d); the labeled pairs are
    always {a,c} and {b,d}.
    """
    if orientation not in (ORIENT_QUADRICS_LEFT, ORIENT_POINTS_LEFT):
        raise InputError(f"unknown orientation {orientation!r}")
    if s < 1 or p < 1:
        raise InputError("p and s must be >= 1")
    t = len(emb.left_map) - s
    if t < 1:
        raise InputError("embedding is too small for the requested s")
    if len(emb.right_map) != s * t:
        raise InputError("embedding arity does not match an [s, t] pattern")

    if orientation == ORIENT_QUADRICS_LEFT:
        left_pair = system.quadric_pair
        right_pair = system.point_pair

        def edge_pairs(left_vertex, right_vertex):
            return right_pair(right_vertex), left_pair(left_vertex)
    else:
        left_pair = system.point_pair
        right_pair = system.quadric_pair

        def edge_pairs(left_vertex, right_vertex):
            return left_pair(left_vertex), right_pair(right_vertex)

    d2 = system.point_set.squared_distances

    # S points
    s_points: set[int] = set()
    for k in range(s):
        a, b = left_pair(emb.left_map[k])
        s_points.update((a, b))

    # T' selection: greedy in the embedding's T-vertex enumeration order.
    t_prime: list[int] = []  # pattern T slots (0-based)
    t_prime_pairs: list[tuple[int, int]] = []
    seen = set(s_points)
    for tau in range(t):
        a, b = left_pair(emb.left_map[s + tau])
        if not {a, b} <= seen:
            t_prime.append(tau)
            t_prime_pairs.append((a, b))
            seen.update((a, b))
            if len(t_prime) > p:
                break
    if len(t_prime) <= p:
        raise StructuralError(
            f"T' selection stalled at {len(t_prime)} <= p = {p}; "
            f"t = {t} was expected to be large enough")

    # Rounds.
    a_set: set[int] = set(s_points)
    labels: dict[tuple[int, int], tuple[int, int]] = {}
    rounds: list[RoundRecord] = []
    terminated = False
    for round_no, tau in enumerate(t_prime, start=1):
        p_i = 0
        round_labels: list[LabelRecord] = []
        complete = True
        for j in range(s):
            w_index = j * t + tau  # right tuple (j, tau) in lexicographic order
            w_host = emb.right_map[w_index]
            for left_slot in (j, s + tau):
                left_host = emb.left_map[left_slot]
                (a, b), (c, d) = edge_pairs(left_host, w_host)
                new_points = {a, b, c, d} - a_set
                if len(a_set) + len(new_points) > p:
                    terminated = True
                    complete = False
                    break
                a_set.update(new_points)
                p_i += len(new_points)
                ac = _pair_key(a, c)
                bd = _pair_key(b, d)
                if d2[ac[0]][ac[1]] != d2[bd[0]][bd[1]]:
                    raise InvariantViolation("processed edge without equal distances")
                produced: LabelRecord | None = None
                if ac not in labels and bd not in labels:
                    if ac != bd:
                        labels[ac] = bd
                        produced = LabelRecord(ac, bd)
                elif ac not in labels and bd in labels and labels[bd] != ac:
                    labels[ac] = labels[bd]
                    produced = LabelRecord(ac, labels[bd])
                elif bd not in labels and ac in labels and labels[ac] != bd:
                    labels[bd] = labels[ac]
                    produced = LabelRecord(bd, labels[ac])
                if produced is not None:
                    round_labels.append(produced)
            if terminated:
                break
        ell_i = len(round_labels)
        if p_i > 2 * s + 2:
            raise InvariantViolation(f"round {round_no} added {p_i} > 2s+2 points")
        if complete and ell_i <= 2 * s - 2 and p_i > ell_i:
            raise InvariantViolation(
                f"bookkeeping claim failed in round {round_no}: "
                f"ell_i = {ell_i}, p_i = {p_i}")
        rounds.append(RoundRecord(round_no, p_i, tuple(round_labels), complete))
        if terminated:
            break

    # Pad to exactly p points with lowest-index unused points.
    padded: list[int] = []
    for idx in range(len(system.point_set)):
        if len(a_set) >= p:
            break
        if idx not in a_set:
            a_set.add(idx)
            padded.append(idx)
    if len(a_set) != p:
        raise StructuralError("could not assemble a p-point witness")

    # Labeled pairs carry the distance of their (ultimately unlabeled) label.
    for pair, label in labels.items():
        if d2[pair[0]][pair[1]] != d2[label[0]][label[1]]:
            raise InvariantViolation("label with mismatched distance")

    x = sum(1 for r in rounds if r.points_added == 2 * s)
    y = sum(1 for r in rounds if r.points_added == 2 * s + 1)
    z = sum(1 for r in rounds if r.points_added == 2 * s + 2)
    if x + y + z > p // (2 * s):
        raise InvariantViolation("x + y + z exceeded floor(p / 2s)")

    a_sorted = tuple(sorted(a_set))
    distinct = _distinct_among(system.point_set, a_sorted)
    total_labels = sum(r.ell for r in rounds)
    if distinct > comb(p, 2) - total_labels:
        raise InvariantViolation(
            "distinct distances exceeded C(p,2) minus the labeled-pair count")

    return WitnessTrace(
        s_points=tuple(sorted(s_points)),
        t_prime=tuple(t_prime_pairs),
        rounds=tuple(rounds),
        a_points=a_sorted,
        padded=tuple(padded),
        distinct_count=distinct,
        x=x, y=y, z=z,
    )


# ---------------------------------------------------------------------- #
# end-to-end violation search


@dataclass(frozen=True)
class ViolationWitness:
    a_points: tuple[int, ...]
    distinct: int
    q: int
    orientation: str
    trace: WitnessTrace

    def to_json_dict(self, point_set: PlanarPointSet) -> dict:
        return {
            "A": [[format_rational(point_set.points[i].x),
                   format_rational(point_set.points[i].y)] for i in self.a_points],
            "distinct": self.distinct,
            "q": self.q,
            "orientation": self.orientation,
            "trace": self.trace.to_json_dict(),
        }


def find_violation(point_set: PlanarPointSet, p: int, s: int, seed: int,
                   node_budget: int = DEFAULT_NODE_BUDGET) -> ViolationWitness | None:
    """Lift the point set and hunt for a sided [s, (2s+p)^2 + 1] copy; if one
    exists, extract a p-point witness violating the (p, q) local condition.

    Both orientations of the lifted bipartite graph are searched (the
    subdivision vertices may land on either side). None means no copy exists
    in either orientation; a budget error is raised, not returned.
    """
    if p < 1 or s < 1:
        raise InputError("p and s must be >= 1")
    if p > len(point_set):
        raise InputError("p cannot exceed the number of points")
    system = lift(point_set, seed)
    t = (2 * s + p) ** 2 + 1
    pattern = SubdividedPattern((s, t))
    q = q_formula(p, s)

    emb = None
    orientation = ORIENT_QUADRICS_LEFT
    if pattern.left_size <= system.graph.left_count and \
            pattern.right_size <= system.graph.right_count:
        emb = find_embedding(system.graph, pattern, node_budget=node_budget)
    if emb is None:
        orientation = ORIENT_POINTS_LEFT
        transposed = system.graph.transpose()
        if pattern.left_size <= transposed.left_count and \
                pattern.right_size <= transposed.right_count:
            emb = find_embedding(transposed, pattern, node_budget=node_budget)
        else:
            emb = None
    if emb is None:
        return None

    trace = extract_witness(system, emb, p, s, orientation=orientation)
    if trace.distinct_count >= q:
        raise InvariantViolation(
            f"extracted witness has {trace.distinct_count} >= q = {q} distances")
    return ViolationWitness(a_points=trace.a_points, distinct=trace.distinct_count,
                            q=q, orientation=orientation, trace=trace)
