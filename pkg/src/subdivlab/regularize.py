"""Two-phase regularization of a sparse bipartite host with a verifiable
certificate.

Phase 1 repeatedly keeps the top 1/16 of right vertices by degree while they
carry at least half the edges, shrinking the left side by 16^(s/(2s-1)) each
round. When the top slice goes light, the remaining 15/16 of the right side
is carved off together with the highest-degree (15/16)^(s/(2s-1)) fraction of
left vertices. Phase 2 then repeatedly keeps the top |U|^(1-1/s) left
vertices by degree, stopping either by the same half rule or after
ceil(s*ln s) iterations.

All fractional set sizes use floors decided by exact integer arithmetic; a
floor that would empty (or fail to shrink) a prescribed set raises
DegenerateInputError. "Largest degrees" selections break ties by ascending
vertex index, so traces are bit-reproducible.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from ._exact import floor_root_scaled
from .bigraph import Bigraph
from .errors import DegenerateInputError, InputError, InvariantViolation
from .jsonio import format_rational, parse_rational

TERMINATION_HALF_RULE = "half-rule"
TERMINATION_ITERATION_CAP = "iteration-cap"


@dataclass(frozen=True)
class Phase1Round:
    i: int
    left_size: int
    right_size: int
    edge_count: int


@dataclass(frozen=True)
class Phase2Round:
    i: int
    left_size: int
    edge_count: int


@dataclass(frozen=True)
class CarveInfo:
    v_tilde_size: int
    u_prime_size: int
    edge_count: int
    max_right_degree: int  # Delta_{G'}(V~), for re-checking the degree bound


@dataclass(frozen=True)
class ReductionTrace:
    phase1_rounds: tuple[Phase1Round, ...]
    ell: int
    carve: CarveInfo
    phase2_rounds: tuple[Phase2Round, ...]
    termination: str

    def to_json_dict(self) -> dict:
        return {
            "phase1_rounds": [
                {"i": r.i, "left": r.left_size, "right": r.right_size, "edges": r.edge_count}
                for r in self.phase1_rounds
            ],
            "ell": self.ell,
            "carve": {
                "v_tilde": self.carve.v_tilde_size,
                "u_prime": self.carve.u_prime_size,
                "edges": self.carve.edge_count,
                "max_right_degree": self.carve.max_right_degree,
            },
            "phase2_rounds": [
                {"i": r.i, "left": r.left_size, "edges": r.edge_count}
                for r in self.phase2_rounds
            ],
            "termination": self.termination,
        }

    @classmethod
    def from_json_dict(cls, data: dict) -> "ReductionTrace":
        try:
            return cls(
                phase1_rounds=tuple(
                    Phase1Round(r["i"], r["left"], r["right"], r["edges"])
                    for r in data["phase1_rounds"]
                ),
                ell=int(data["ell"]),
                carve=CarveInfo(
                    data["carve"]["v_tilde"], data["carve"]["u_prime"],
                    data["carve"]["edges"], data["carve"]["max_right_degree"]
                ),
                phase2_rounds=tuple(
                    Phase2Round(r["i"], r["left"], r["edges"]) for r in data["phase2_rounds"]
                ),
                termination=str(data["termination"]),
            )
        except (KeyError, TypeError, ValueError) as exc:
            raise InputError(f"malformed trace JSON: {exc}") from exc


@dataclass(frozen=True)
class AchievedConstants:
    c_i: bool
    c_ii: Fraction
    c_iii: Fraction
    c_iv: Fraction
    c_size: Fraction


@dataclass(frozen=True)
class ReductionCertificate:
    """The reduced subgraph plus the constants it achieves.

    c_ii and c_iii are exact rationals; c_iv comes from a float bisection of
    the monotone map c -> c * delta^c (stored as the exact dyadic value of the
    resulting double), and c_size is log|U~| / log|U| at double precision.
    """

    subgraph: Bigraph
    s: int
    delta: Fraction
    achieved: AchievedConstants

    def to_json_dict(self) -> dict:
        return {
            "subgraph": self.subgraph.to_json_dict(),
            "s": self.s,
            "delta": format_rational(self.delta),
            "achieved": {
                "c_i": self.achieved.c_i,
                "c_ii": format_rational(self.achieved.c_ii),
                "c_iii": format_rational(self.achieved.c_iii),
                "c_iv": format_rational(self.achieved.c_iv),
                "c_size": format_rational(self.achieved.c_size),
            },
        }

    @classmethod
    def from_json_dict(cls, data: dict) -> "ReductionCertificate":
        try:
            ach = data["achieved"]
            return cls(
                subgraph=Bigraph.from_json_dict(data["subgraph"]),
                s=int(data["s"]),
                delta=parse_rational(data["delta"]),
                achieved=AchievedConstants(
                    c_i=bool(ach["c_i"]),
                    c_ii=parse_rational(ach["c_ii"]),
                    c_iii=parse_rational(ach["c_iii"]),
                    c_iv=parse_rational(ach["c_iv"]),
                    c_size=parse_rational(ach["c_size"]),
                ),
            )
        except (KeyError, TypeError, ValueError) as exc:
            raise InputError(f"malformed certificate JSON: {exc}") from exc


@dataclass(frozen=True)
class ConditionCheck:
    name: str
    passed: bool
    stored: object
    recomputed: object


@dataclass(frozen=True)
class ConditionReport:
    checks: tuple[ConditionCheck, ...]

    @property
    def all_pass(self) -> bool:
        return all(c.passed for c in self.checks)


def _degrees_within(graph: Bigraph, side: str, vertices: list[int], mask_other: int) -> dict[int, int]:
    """Degrees of ``vertices`` restricted to the opposite-side mask."""
    masks = graph.neighbor_masks if side == "left" else graph.right_neighbor_masks
    return {v: (masks[v] & mask_other).bit_count() for v in vertices}


def _top_by_degree(vertices: list[int], degrees: dict[int, int], k: int) -> list[int]:
    return sorted(vertices, key=lambda v: (-degrees[v], v))[:k]


def _to_mask(indices) -> int:
    m = 0
    for i in indices:
        m |= 1 << i
    return m


def _iteration_cap(s: int) -> int:
    # natural log: the exponent calculation (1-1/s)^(s ln s) <= 1/s uses ln
    return math.ceil(s * math.log(s))


def _bisect_c_iv(delta: Fraction, uu: int, max_deg_u: int, ee: int, s: int) -> Fraction:
    """Largest c with c * delta^c * |U~| * Delta(U~)^(1-1/s) <= |E~|.

    delta >= 1 makes the left side strictly increasing in c, so bisection
    applies. Evaluated in floats; the returned Fraction is the exact value of
    the final double, reproducible by rerunning the same procedure.
    """
    if ee <= 0 or uu <= 0:
        return Fraction(0)
    d = float(delta)
    rhs = float(ee)
    base = uu * max_deg_u ** (1.0 - 1.0 / s)

    def ok(c: float) -> bool:
        return c * d**c * base <= rhs

    hi = 1.0
    grow = 0
    while ok(hi) and grow < 200:
        hi *= 2.0
        grow += 1
    lo = 0.0
    for _ in range(80):
        mid = (lo + hi) / 2.0
        if ok(mid):
            lo = mid
        else:
            hi = mid
    return Fraction(lo)


def _achieved_constants(subgraph: Bigraph, s: int, delta: Fraction,
                        original_left: int) -> AchievedConstants:
    uu = subgraph.left_count
    vv = subgraph.right_count
    ee = subgraph.edge_count
    c_i = vv**s >= uu ** (2 * s - 1)
    c_ii = Fraction(ee) / (delta * vv) if vv else Fraction(0)
    max_deg_v = subgraph.max_degree("right")
    c_iii = Fraction(ee, vv * max_deg_v) if max_deg_v else Fraction(0)
    c_iv = _bisect_c_iv(delta, uu, subgraph.max_degree("left"), ee, s)
    if original_left > 1 and uu >= 1:
        c_size = Fraction(math.log(uu) / math.log(original_left))
    else:
        c_size = Fraction(0)
    return AchievedConstants(c_i, c_ii, c_iii, c_iv, c_size)


def reduce(graph: Bigraph, s: int, delta) -> tuple[ReductionTrace, ReductionCertificate]:
    """Run both procedures and certify the achieved constants.

    Preconditions: s >= 2, delta >= 1, |V| >= |U|^(2-1/s) and |E| >= delta|V|
    (checked exactly).
    """
    if s < 2:
        raise InputError("s must be >= 2")
    delta = Fraction(delta)
    if delta < 1:
        raise InputError("delta must be >= 1")
    m0, n0 = graph.left_count, graph.right_count
    if n0**s < m0 ** (2 * s - 1):
        raise InputError("requires |V| >= |U|^(2-1/s)")
    if graph.edge_count < delta * n0:
        raise InputError("requires |E| >= delta * |V|")

    u_cur = list(range(m0))
    v_cur = list(range(n0))
    u_mask = _to_mask(u_cur)
    v_mask = _to_mask(v_cur)

    def edges_between(umask: int, vmask: int) -> int:
        return sum((graph.neighbor_masks[u] & vmask).bit_count()
                   for u in range(m0) if (umask >> u) & 1)

    # ---- phase 1 ----------------------------------------------------- #
    phase1: list[Phase1Round] = []
    e_cur = edges_between(u_mask, v_mask)
    while True:
        i = len(phase1)
        phase1.append(Phase1Round(i, len(u_cur), len(v_cur), e_cur))
        k = len(v_cur) // 16
        if k == 0:
            raise DegenerateInputError(
                f"phase-1 floor emptied the top right slice (|V_{i}| = {len(v_cur)})")
        right_degs = _degrees_within(graph, "right", v_cur, u_mask)
        v_top = _top_by_degree(v_cur, right_degs, k)
        adj = sum(right_degs[v] for v in v_top)
        if 2 * adj < e_cur:
            v_next = v_top  # kept for the carve below
            break
        u_size = floor_root_scaled(2 * s - 1, 16**s, len(u_cur) ** (2 * s - 1))
        if u_size == 0:
            raise DegenerateInputError(
                f"phase-1 floor emptied the left side (|U_{i}| = {len(u_cur)})")
        v_top_mask = _to_mask(v_top)
        left_degs = _degrees_within(graph, "left", u_cur, v_top_mask)
        u_cur = sorted(_top_by_degree(u_cur, left_degs, u_size))
        v_cur = sorted(v_top)
        u_mask = _to_mask(u_cur)
        v_mask = v_top_mask
        e_cur = edges_between(u_mask, v_mask)
    ell = len(phase1) - 1

    # ---- carve ------------------------------------------------------- #
    v_tilde = sorted(set(v_cur) - set(v_next))
    v_tilde_mask = _to_mask(v_tilde)
    u_prime_size = floor_root_scaled(2 * s - 1, 16**s, 15**s * len(u_cur) ** (2 * s - 1))
    if u_prime_size == 0:
        raise DegenerateInputError("carve floor emptied U'")
    left_degs = _degrees_within(graph, "left", u_cur, v_tilde_mask)
    u_prime = sorted(_top_by_degree(u_cur, left_degs, u_prime_size))
    u_prime_mask = _to_mask(u_prime)
    e_prime = edges_between(u_prime_mask, v_tilde_mask)

    # Carve-time degree bound, checked exactly at power 2s-1:
    #   Delta_{G'}(V~) <= 30 * (16/15)^(s/(2s-1)) * |E'| / |V~|
    max_deg_vt = max(
        ((graph.right_neighbor_masks[v] & u_prime_mask).bit_count() for v in v_tilde),
        default=0,
    )
    carve = CarveInfo(len(v_tilde), len(u_prime), e_prime, max_deg_vt)
    lhs = max_deg_vt ** (2 * s - 1) * len(v_tilde) ** (2 * s - 1) * 15**s
    rhs = 30 ** (2 * s - 1) * 16**s * e_prime ** (2 * s - 1)
    if lhs > rhs:
        raise InvariantViolation(
            f"carve degree bound failed: Delta(V~)={max_deg_vt}, |E'|={e_prime}, "
            f"|V~|={len(v_tilde)}")

    # ---- phase 2 ----------------------------------------------------- #
    phase2: list[Phase2Round] = []
    u2 = u_prime
    u2_mask = u_prime_mask
    e2 = e_prime
    cap = _iteration_cap(s)
    termination = TERMINATION_ITERATION_CAP
    u_tilde: list[int] = []
    for i in range(cap):
        phase2.append(Phase2Round(i, len(u2), e2))
        size_next = floor_root_scaled(s, 1, len(u2) ** (s - 1))
        if size_next == len(u2):
            raise DegenerateInputError(
                f"phase-2 floor does not shrink U' (|U'_{i}| = {len(u2)})")
        left_degs = _degrees_within(graph, "left", u2, v_tilde_mask)
        u_top = _top_by_degree(u2, left_degs, size_next)
        adj = sum(left_degs[u] for u in u_top)
        if 2 * adj < e2:
            u_tilde = sorted(set(u2) - set(u_top))
            termination = TERMINATION_HALF_RULE
            break
        u2 = sorted(u_top)
        u2_mask = _to_mask(u2)
        e2 = adj
    else:
        phase2.append(Phase2Round(cap, len(u2), e2))
        u_tilde = u2
        termination = TERMINATION_ITERATION_CAP

    subgraph = graph.induced_subgraph(u_tilde, v_tilde)
    uu, vv, ee = subgraph.left_count, subgraph.right_count, subgraph.edge_count

    if termination == TERMINATION_HALF_RULE:
        # Delta(U~) <= 2|E~| / |U~|^(1-1/s), exactly at power s
        max_deg_ut = subgraph.max_degree("left")
        if max_deg_ut**s * uu ** (s - 1) > 2**s * ee**s:
            raise InvariantViolation("half-rule degree bound on U~ failed")
    else:
        # |U~| <= |V~|^(1/s)
        if uu**s > vv:
            raise InvariantViolation("iteration-cap size bound |U~| <= |V~|^(1/s) failed")

    trace = ReductionTrace(tuple(phase1), ell, carve, tuple(phase2), termination)
    cert = ReductionCertificate(subgraph, s, delta,
                                _achieved_constants(subgraph, s, delta, m0))
    return trace, cert


def verify_conditions(cert: ReductionCertificate) -> ConditionReport:
    """Recompute all four conditions from the stored subgraph alone.

    Conditions II-IV pass when the recomputed constant is positive and equals
    the stored one exactly (so a tampered subgraph is flagged); condition I is
    the size inequality itself.
    """
    fresh = _achieved_constants(cert.subgraph, cert.s, cert.delta, original_left=0)
    stored = cert.achieved
    checks = [
        ConditionCheck("I", fresh.c_i and stored.c_i == fresh.c_i, stored.c_i, fresh.c_i),
        ConditionCheck("II", fresh.c_ii > 0 and stored.c_ii == fresh.c_ii,
                       stored.c_ii, fresh.c_ii),
        ConditionCheck("III", fresh.c_iii > 0 and stored.c_iii == fresh.c_iii,
                       stored.c_iii, fresh.c_iii),
        ConditionCheck("IV", fresh.c_iv > 0 and stored.c_iv == fresh.c_iv,
                       stored.c_iv, fresh.c_iv),
    ]
    return ConditionReport(tuple(checks))
