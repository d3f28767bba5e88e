"""Lower-bound constructions and extremal certificates.

The probabilistic construction samples an m-by-n bipartite graph with edge
probability p solved from the expected-copy constraint, enumerates the
subdivision copies it contains, and deletes the lowest-index left vertex of
each copy; the result is copy-free whenever the enumeration completed within
budget. RNG identity is fixed for reproducibility: numpy PCG64 seeded through
SeedSequence, per-trial streams derived with spawn keys, and edges drawn as
one row-major uniform block.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from math import comb
from itertools import combinations

import numpy as np

from ._exact import floor_power
from .bigraph import Bigraph
from .errors import BudgetExceededError, InputError, InvariantViolation
from .jsonio import format_rational
from .patterns import (
    DEFAULT_NODE_BUDGET,
    SubdividedPattern,
    find_embedding,
    iter_embeddings,
)


@dataclass(frozen=True)
class ConstructionReport:
    m: int
    n: int
    s: int
    t: int
    p: Fraction
    edges_before: int
    copies_found: int
    deleted_left: int
    edges_after: int
    seed: int
    certified: bool

    def to_json_dict(self) -> dict:
        return {
            "m": self.m, "n": self.n, "s": self.s, "t": self.t,
            "p": format_rational(self.p),
            "edges_before": self.edges_before,
            "copies_found": self.copies_found,
            "deleted_left": self.deleted_left,
            "edges_after": self.edges_after,
            "seed": self.seed,
            "certified": self.certified,
        }


@dataclass(frozen=True)
class KstCertificate:
    """Double-counting inequality sum_v C(deg v, s) <= (t-1) * C(|U|, s).

    Holds whenever the graph has no sided complete bipartite K_{s,t}; a
    violation therefore certifies the presence of one.
    """

    lhs: int
    rhs: int
    holds: bool


@dataclass(frozen=True)
class ExtremalResult:
    lower: int
    upper: int

    @property
    def exact(self) -> bool:
        return self.lower == self.upper

    @property
    def value(self) -> int:
        if not self.exact:
            raise InputError("extremal search returned a bracket, not an exact value")
        return self.lower


@dataclass(frozen=True)
class ScanRow:
    m: int
    n: int
    s: int
    t: int
    exponent: Fraction
    trial: int
    seed: int
    p: Fraction
    edges_before: int
    copies: int
    edges_after: int
    ratio: Fraction


@dataclass(frozen=True)
class ScanSummary:
    m: int
    n: int
    mean_ratio: Fraction


@dataclass(frozen=True)
class ScanResult:
    rows: tuple[ScanRow, ...]
    summary: tuple[ScanSummary, ...]


def edge_probability(m: int, n: int, s: int, t: int, epsilon: Fraction) -> float:
    """p = (epsilon * m^(1-s-t) * n^(-st))^(1/(2st-1)), clamped to (0, 1]."""
    log_p = (math.log(float(epsilon)) + (1 - s - t) * math.log(m)
             - s * t * math.log(n)) / (2 * s * t - 1)
    return min(1.0, math.exp(log_p))


def random_lower_bound_graph(m: int, n: int, s: int, t: int,
                             epsilon=Fraction(1), seed: int = 0,
                             node_budget: int = DEFAULT_NODE_BUDGET,
                             ) -> tuple[Bigraph, ConstructionReport]:
    """Sample, enumerate copies, delete one left endpoint per copy.

    Deterministic given (parameters, seed). ``certified`` is False when the
    copy enumeration or the final verification ran out of budget.
    """
    if m < 1 or n < 1:
        raise InputError("m and n must be >= 1")
    if not (1 <= s <= t):
        raise InputError("requires 1 <= s <= t")
    epsilon = Fraction(epsilon)
    if epsilon <= 0:
        raise InputError("epsilon must be positive")
    if n ** (s * t) > m ** (2 * s * t - s - t):
        raise InputError("requires n <= m^(2 - 1/s - 1/t)")

    p = edge_probability(m, n, s, t, epsilon)
    rng = np.random.Generator(np.random.PCG64(np.random.SeedSequence(seed)))
    draws = rng.random(m * n)
    cells = np.nonzero(draws < p)[0]
    edges = [(int(c) // n, int(c) % n) for c in cells]
    sampled = Bigraph.from_edges(m, n, edges)

    pattern = SubdividedPattern((s, t))
    doomed: set[int] = set()
    copies = 0
    enumeration_complete = True
    try:
        for emb in iter_embeddings(sampled, pattern, node_budget=node_budget,
                                   canonical_parts=True):
            copies += 1
            doomed.add(min(emb.left_map))
    except BudgetExceededError:
        enumeration_complete = False

    kept_edges = [(u, v) for u, v in sampled.edges() if u not in doomed]
    final = Bigraph.from_edges(m, n, kept_edges)

    certified = enumeration_complete
    if certified:
        try:
            leftover = find_embedding(final, pattern, node_budget=node_budget)
        except BudgetExceededError:
            certified = False
        else:
            if leftover is not None:
                raise InvariantViolation(
                    "complete enumeration left a copy after deletion")

    report = ConstructionReport(
        m=m, n=n, s=s, t=t, p=Fraction(p),
        edges_before=sampled.edge_count,
        copies_found=copies,
        deleted_left=len(doomed),
        edges_after=final.edge_count,
        seed=seed,
        certified=certified,
    )
    return final, report


def kst_certificate(graph: Bigraph, s: int, t: int) -> KstCertificate:
    if s < 1 or t < 1:
        raise InputError("s and t must be >= 1")
    lhs = sum(comb(d, s) for d in graph.right_degrees)
    rhs = (t - 1) * comb(graph.left_count, s)
    return KstCertificate(lhs=lhs, rhs=rhs, holds=lhs <= rhs)


def brute_extremal(m: int, n: int, pattern: SubdividedPattern,
                   graph_budget: int | None = None) -> ExtremalResult:
    """Maximum edges of an m-by-n host containing no copy of ``pattern``.

    Containment is monotone under adding edges, so the copies of the pattern
    inside the complete m-by-n host (as minimal edge sets) determine freeness
    of every subgraph: a graph is copy-free iff it covers none of them. The
    scan walks edge counts downward and returns at the first free subset.
    Above m*n = 20 a graph budget is required, and exhausting it yields a
    bracket instead of an exact value.
    """
    if m < 1 or n < 1:
        raise InputError("m and n must be >= 1")
    if m * n > 20 and graph_budget is None:
        raise InputError("m*n > 20 requires an explicit graph budget")

    complete = Bigraph.complete(m, n)
    copy_masks: set[int] = set()
    for emb in iter_embeddings(complete, pattern, canonical_parts=True):
        mask = 0
        for w, nbrs in enumerate(pattern.right_neighbor_lists):
            hv = emb.right_map[w]
            for x in nbrs:
                mask |= 1 << (emb.left_map[x] * n + hv)
        copy_masks.add(mask)
    copies = sorted(copy_masks)
    if not copies:
        return ExtremalResult(lower=m * n, upper=m * n)

    cells = list(range(m * n))
    examined = 0
    for k in range(m * n, -1, -1):
        for chosen in combinations(cells, k):
            examined += 1
            if graph_budget is not None and examined > graph_budget:
                return ExtremalResult(lower=0, upper=k)
            g = 0
            for c in chosen:
                g |= 1 << c
            if all(g & c != c for c in copies):
                return ExtremalResult(lower=k, upper=k)
    return ExtremalResult(lower=0, upper=0)


def trial_seed(base_seed: int, m_index: int, trial: int) -> int:
    """Derived per-trial stream: SeedSequence(base, spawn_key=(m_index, trial))."""
    ss = np.random.SeedSequence(entropy=base_seed, spawn_key=(m_index, trial))
    return int(ss.generate_state(1, dtype=np.uint64)[0])


def threshold_scan(s: int, t: int, exponent, m_list, trials: int, seed: int,
                   epsilon=Fraction(1), node_budget: int = DEFAULT_NODE_BUDGET,
                   workers: int = 1) -> ScanResult:
    """Monte-Carlo probe of the linear-threshold regime: for each m, build
    n = floor(m^exponent) and report per-trial edge/|V| ratios.

    Trials are independent (each owns its derived RNG stream) and may run on
    ``workers`` threads; rows are sorted by (m, trial) before aggregation, so
    the result does not depend on scheduling.
    """
    exponent = Fraction(exponent)
    if trials < 0:
        raise InputError("trials must be >= 0")
    if s < 1 or t < 1 or s > t:
        raise InputError("requires 1 <= s <= t")
    bound = Fraction(2) - Fraction(1, s) - Fraction(1, t)
    if exponent >= bound:
        raise InputError(f"exponent must be < 2 - 1/s - 1/t = {bound}")
    if exponent < 0:
        raise InputError("exponent must be nonnegative")
    m_list = list(m_list)
    if any(m < 1 for m in m_list):
        raise InputError("every m must be >= 1")

    jobs = []
    for mi, m in enumerate(m_list):
        n = floor_power(m, exponent)
        for trial in range(trials):
            jobs.append((m, n, mi, trial))

    def run(job) -> ScanRow:
        m, n, mi, trial = job
        tseed = trial_seed(seed, mi, trial)
        _, rep = random_lower_bound_graph(
            m, n, s, t, epsilon=epsilon, seed=tseed, node_budget=node_budget)
        return ScanRow(m=m, n=n, s=s, t=t, exponent=exponent, trial=trial,
                       seed=tseed, p=rep.p, edges_before=rep.edges_before,
                       copies=rep.copies_found, edges_after=rep.edges_after,
                       ratio=Fraction(rep.edges_after, n))

    if workers > 1 and len(jobs) > 1:
        from concurrent.futures import ThreadPoolExecutor

        with ThreadPoolExecutor(max_workers=workers) as pool:
            rows = list(pool.map(run, jobs))
    else:
        rows = [run(job) for job in jobs]
    rows.sort(key=lambda r: (r.m, r.trial))

    summaries: list[ScanSummary] = []
    for mi, m in enumerate(m_list):
        ratios = [r.ratio for r in rows if r.m == m]
        if ratios:
            summaries.append(ScanSummary(m=m, n=floor_power(m, exponent),
                                         mean_ratio=sum(ratios) / len(ratios)))
    return ScanResult(rows=tuple(rows), summary=tuple(summaries))
