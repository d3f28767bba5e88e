"""Exact-rational point-line incidence geometry over the real and complex
planes, grid/triangle detection through the subdivision-pattern duality, and
the exponent calculators for the incidence bounds.

Everything geometric is exact: incidence is an equality predicate on
Fractions (or Gaussian rationals), lines are kept in a canonical
normalization so equality is decidable, and the calculators work in
Fraction arithmetic end to end.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from itertools import combinations

from .bigraph import Bigraph
from .errors import DomainError, InputError, InvariantViolation
from .jsonio import format_rational, parse_rational
from .patterns import DEFAULT_NODE_BUDGET, SubdividedPattern, find_embedding


# ---------------------------------------------------------------------- #
# real plane


@dataclass(frozen=True)
class RPoint:
    x: Fraction
    y: Fraction

    def __post_init__(self):
        object.__setattr__(self, "x", Fraction(self.x))
        object.__setattr__(self, "y", Fraction(self.y))


@dataclass(frozen=True)
class RLine:
    """Line a*x + b*y = c with the first nonzero of (a, b) scaled to 1."""

    a: Fraction
    b: Fraction
    c: Fraction

    def __post_init__(self):
        a, b, c = Fraction(self.a), Fraction(self.b), Fraction(self.c)
        if a != 0:
            b, c, a = b / a, c / a, Fraction(1)
        elif b != 0:
            c, b = c / b, Fraction(1)
        else:
            raise InputError("line requires (a, b) != (0, 0)")
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "b", b)
        object.__setattr__(self, "c", c)

    @classmethod
    def through(cls, p: RPoint, q: RPoint) -> "RLine":
        if p == q:
            raise InputError("two distinct points are needed to span a line")
        dx, dy = q.x - p.x, q.y - p.y
        return cls(dy, -dx, dy * p.x - dx * p.y)

    def contains(self, p: RPoint) -> bool:
        return self.a * p.x + self.b * p.y == self.c


def intersect_rlines(l1: RLine, l2: RLine) -> RPoint | None:
    """The unique common point, or None for parallel or equal lines."""
    det = l1.a * l2.b - l2.a * l1.b
    if det == 0:
        return None
    x = (l1.c * l2.b - l2.c * l1.b) / det
    y = (l1.a * l2.c - l2.a * l1.c) / det
    return RPoint(x, y)


# ---------------------------------------------------------------------- #
# complex plane (Gaussian-rational coordinates)


@dataclass(frozen=True)
class GaussianRational:
    re: Fraction
    im: Fraction

    def __post_init__(self):
        object.__setattr__(self, "re", Fraction(self.re))
        object.__setattr__(self, "im", Fraction(self.im))

    def __add__(self, other: "GaussianRational") -> "GaussianRational":
        return GaussianRational(self.re + other.re, self.im + other.im)

    def __sub__(self, other: "GaussianRational") -> "GaussianRational":
        return GaussianRational(self.re - other.re, self.im - other.im)

    def __mul__(self, other: "GaussianRational") -> "GaussianRational":
        return GaussianRational(self.re * other.re - self.im * other.im,
                                self.re * other.im + self.im * other.re)

    def __truediv__(self, other: "GaussianRational") -> "GaussianRational":
        norm = other.re * other.re + other.im * other.im
        if norm == 0:
            raise ZeroDivisionError("division by zero Gaussian rational")
        re = (self.re * other.re + self.im * other.im) / norm
        im = (self.im * other.re - self.re * other.im) / norm
        return GaussianRational(re, im)

    def is_zero(self) -> bool:
        return self.re == 0 and self.im == 0

    @classmethod
    def of(cls, re, im=0) -> "GaussianRational":
        return cls(Fraction(re), Fraction(im))


GR_ZERO = GaussianRational.of(0)
GR_ONE = GaussianRational.of(1)


@dataclass(frozen=True)
class CPoint:
    z: GaussianRational
    w: GaussianRational


@dataclass(frozen=True)
class CLine:
    """Line a*z + b*w + c = 0 with the first nonzero of (a, b) scaled to 1."""

    a: GaussianRational
    b: GaussianRational
    c: GaussianRational

    def __post_init__(self):
        a, b, c = self.a, self.b, self.c
        if not a.is_zero():
            b, c, a = b / a, c / a, GR_ONE
        elif not b.is_zero():
            c, b = c / b, GR_ONE
        else:
            raise InputError("complex line requires (a, b) != (0, 0)")
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "b", b)
        object.__setattr__(self, "c", c)

    def contains(self, p: CPoint) -> bool:
        return (self.a * p.z + self.b * p.w + self.c).is_zero()


def intersect_clines(l1: CLine, l2: CLine) -> CPoint | None:
    det = l1.a * l2.b - l2.a * l1.b
    if det.is_zero():
        return None
    # Solve a1 z + b1 w = -c1, a2 z + b2 w = -c2.
    z = (l1.b * l2.c - l2.b * l1.c) / det
    w = (l2.a * l1.c - l1.a * l2.c) / det
    return CPoint(z, w)


# ---------------------------------------------------------------------- #
# incidence graphs and grid / triangle detection


def incidence_graph(points, lines, validate: bool = True) -> Bigraph:
    """Bipartite incidence graph with LINES on the left, POINTS on the right.

    This orientation makes an s-by-s grid literally a sided [s, s] pattern
    copy (subdivision vertices on the right). Duplicate canonical lines or
    duplicate points are input errors; with ``validate`` the at-most-one
    common point property of distinct lines is asserted on the result.
    """
    points = list(points)
    lines = list(lines)
    if len(set(points)) != len(points):
        raise InputError("duplicate point in configuration")
    if len(set(lines)) != len(lines):
        raise InputError("duplicate line in configuration (canonical forms equal)")
    edges = []
    for i, line in enumerate(lines):
        for j, p in enumerate(points):
            if line.contains(p):
                edges.append((i, j))
    graph = Bigraph.from_edges(len(lines), len(points), edges)
    if validate:
        masks = graph.neighbor_masks
        for i, j in combinations(range(len(lines)), 2):
            if (masks[i] & masks[j]).bit_count() > 1:
                raise InvariantViolation(
                    f"distinct lines {i} and {j} share two or more points")
    return graph


@dataclass(frozen=True)
class GridWitness:
    """s lines L1, s lines L2, and the s*s array of their intersection
    points, all indices into the input configuration."""

    lines1: tuple[int, ...]
    lines2: tuple[int, ...]
    point_grid: tuple[tuple[int, ...], ...]

    def to_json_dict(self) -> dict:
        return {
            "lines1": list(self.lines1),
            "lines2": list(self.lines2),
            "points": [list(row) for row in self.point_grid],
        }


def verify_grid_witness(points, lines, witness: GridWitness, s: int) -> None:
    """Geometric re-verification; raises InvariantViolation on any defect."""
    all_lines = list(witness.lines1) + list(witness.lines2)
    if len(set(all_lines)) != 2 * s:
        raise InvariantViolation("grid witness reuses a line")
    flat = [p for row in witness.point_grid for p in row]
    if len(set(flat)) != s * s:
        raise InvariantViolation("grid witness reuses a point")
    for i in range(s):
        for j in range(s):
            p = points[witness.point_grid[i][j]]
            if not lines[witness.lines1[i]].contains(p):
                raise InvariantViolation(f"grid point ({i},{j}) misses its L1 line")
            if not lines[witness.lines2[j]].contains(p):
                raise InvariantViolation(f"grid point ({i},{j}) misses its L2 line")


def detect_grid(points, lines, s: int,
                node_budget: int = DEFAULT_NODE_BUDGET) -> GridWitness | None:
    """Find an s-by-s grid sub-configuration, or None.

    Exactly the sided [s, s] pattern search on the incidence graph; the
    witness is reconstructed from the embedding and re-verified
    geometrically. Distinct lines meet at most once, so the embedded
    subdivision vertex really is the intersection point of its line pair.
    """
    if s < 1:
        raise InputError("s must be >= 1")
    points = list(points)
    lines = list(lines)
    graph = incidence_graph(points, lines)
    pattern = SubdividedPattern((s, s))
    emb = find_embedding(graph, pattern, node_budget=node_budget)
    if emb is None:
        return None
    lines1 = tuple(emb.left_map[i] for i in range(s))
    lines2 = tuple(emb.left_map[s + i] for i in range(s))
    grid = [[0] * s for _ in range(s)]
    for w, tup in enumerate(pattern.right_tuples):
        i, j = tup
        grid[i][j] = emb.right_map[w]
    witness = GridWitness(lines1, lines2, tuple(tuple(row) for row in grid))
    verify_grid_witness(points, lines, witness, s)
    return witness


@dataclass(frozen=True)
class TriangleWitness:
    """Three pairwise non-parallel lines whose three distinct pairwise
    intersection points all belong to the configuration. ``points[k]`` is
    the intersection of the k-th line pair in (0,1), (0,2), (1,2) order."""

    lines: tuple[int, int, int]
    points: tuple[int, int, int]

    def to_json_dict(self) -> dict:
        return {"lines": list(self.lines), "points": list(self.points)}


def detect_triangle(points, lines) -> TriangleWitness | None:
    points = list(points)
    lines = list(lines)
    complex_mode = bool(lines) and isinstance(lines[0], CLine)
    intersect = intersect_clines if complex_mode else intersect_rlines
    index_of = {p: i for i, p in enumerate(points)}
    for a, b, c in combinations(range(len(lines)), 3):
        corners = []
        ok = True
        for i, j in ((a, b), (a, c), (b, c)):
            p = intersect(lines[i], lines[j])
            if p is None or p not in index_of:
                ok = False
                break
            corners.append(index_of[p])
        if ok and len(set(corners)) == 3:
            return TriangleWitness((a, b, c), tuple(corners))
    return None


# ---------------------------------------------------------------------- #
# complex lines as 2-flats in R^4


@dataclass(frozen=True)
class Flat2InR4:
    """Real 2-flat given as the solution set of two affine equations
    ``matrix @ (x1,x2,x3,x4) = rhs`` with a rank-2 matrix."""

    matrix: tuple[tuple[Fraction, Fraction, Fraction, Fraction], ...]
    rhs: tuple[Fraction, Fraction]


def complex_line_to_flat(line: CLine) -> Flat2InR4:
    """Split a*z + b*w + c = 0 into real and imaginary parts, with
    z = x1 + i*x2 and w = x3 + i*x4."""
    a, b, c = line.a, line.b, line.c
    row_re = (a.re, -a.im, b.re, -b.im)
    row_im = (a.im, a.re, b.im, b.re)
    return Flat2InR4(matrix=(row_re, row_im), rhs=(-c.re, -c.im))


def _eliminate(rows: list[list[Fraction]]) -> tuple[int, bool]:
    """Gaussian elimination on augmented rows; returns (rank of coefficient
    part, consistent)."""
    n_rows = len(rows)
    n_cols = len(rows[0]) - 1
    rank = 0
    for col in range(n_cols):
        pivot = next((r for r in range(rank, n_rows) if rows[r][col] != 0), None)
        if pivot is None:
            continue
        rows[rank], rows[pivot] = rows[pivot], rows[rank]
        pv = rows[rank][col]
        rows[rank] = [x / pv for x in rows[rank]]
        for r in range(n_rows):
            if r != rank and rows[r][col] != 0:
                factor = rows[r][col]
                rows[r] = [x - factor * y for x, y in zip(rows[r], rows[rank])]
        rank += 1
    consistent = all(
        not (all(x == 0 for x in row[:-1]) and row[-1] != 0) for row in rows)
    return rank, consistent


def flats_intersect_at_most_once(f1: Flat2InR4, f2: Flat2InR4) -> bool:
    rows = [list(row) + [r] for row, r in zip(f1.matrix, f1.rhs)]
    rows += [list(row) + [r] for row, r in zip(f2.matrix, f2.rhs)]
    rank, consistent = _eliminate(rows)
    if rank == 4:
        return True  # unique solution
    return not consistent  # rank-deficient: empty is fine, a line/plane is not


def pairwise_flat_check(flats) -> bool:
    """True iff every pair of flats meets in at most one point."""
    flats = list(flats)
    return all(flats_intersect_at_most_once(f1, f2)
               for f1, f2 in combinations(flats, 2))


def flat_intersection_point(f1: Flat2InR4, f2: Flat2InR4):
    """The unique common point of two flats, or None if not unique/existent."""
    rows = [list(row) + [r] for row, r in zip(f1.matrix, f1.rhs)]
    rows += [list(row) + [r] for row, r in zip(f2.matrix, f2.rhs)]
    rank, consistent = _eliminate(rows)
    if rank != 4 or not consistent:
        return None
    sol = [Fraction(0)] * 4
    for row in rows:
        lead = next((c for c in range(4) if row[c] != 0), None)
        if lead is not None:
            sol[lead] = row[4]
    return tuple(sol)


# ---------------------------------------------------------------------- #
# exponent calculators (exact rational arithmetic)


def threshold2incidence_exponents(d: int, sigma) -> tuple[Fraction, Fraction]:
    """((d-1)*sigma/(d*sigma - 1), d*(sigma-1)/(d*sigma - 1))."""
    sigma = Fraction(sigma)
    if d < 1:
        raise DomainError("d must be >= 1")
    if sigma <= 1:
        raise DomainError("sigma must be > 1")
    denom = d * sigma - 1
    if denom == 0:
        raise DomainError("d * sigma = 1 is outside the formula's domain")
    return ((d - 1) * sigma / denom, d * (sigma - 1) / denom)


def grid2flat_exponents(s: int) -> tuple[Fraction, Fraction]:
    """((2s-1)/(3s-2), (2s-2)/(3s-2))."""
    if s < 1:
        raise DomainError("s must be >= 1")
    return (Fraction(2 * s - 1, 3 * s - 2), Fraction(2 * s - 2, 3 * s - 2))


def grid_total_exponent(s: int) -> Fraction:
    """4/3 - 1/(9s - 6)."""
    if s < 1:
        raise DomainError("s must be >= 1")
    return Fraction(4, 3) - Fraction(1, 9 * s - 6)


def distance_energy_exponents(s: int) -> tuple[Fraction, Fraction]:
    """(energy upper exponent 20/7 - 18/(7(7s-4)),
    distance lower exponent 8/7 + 18/(7(7s-4)))."""
    if s < 1:
        raise DomainError("s must be >= 1")
    shift = Fraction(18, 7 * (7 * s - 4))
    return (Fraction(20, 7) - shift, Fraction(8, 7) + shift)


def valid_range(m: int, s: int) -> tuple[float, float]:
    """The [m^(1/2), m^(2-1/s)] window as floats, for display only."""
    if m < 1 or s < 1:
        raise DomainError("m and s must be >= 1")
    return (m**0.5, m ** (2 - 1 / s))


def valid_range_contains(m: int, n: int, s: int) -> bool:
    """Exact test m^(1/2) <= n <= m^(2-1/s)."""
    if m < 1 or n < 0 or s < 1:
        raise DomainError("m, s must be >= 1 and n >= 0")
    return n * n >= m and n**s <= m ** (2 * s - 1)


# ---------------------------------------------------------------------- #
# configuration JSON
#
# {"points": [["x", "y"], ...], "lines": [["a", "b", "c"], ...]} with every
# value either a "num/den" string (real config) or {"re": "p/q", "im": "p/q"}
# (complex config).


def _parse_value(v):
    if isinstance(v, dict):
        return GaussianRational(parse_rational(v.get("re", "0")),
                                parse_rational(v.get("im", "0")))
    return parse_rational(v)


def _format_value(v):
    if isinstance(v, GaussianRational):
        return {"re": format_rational(v.re), "im": format_rational(v.im)}
    return format_rational(v)


def config_from_json_dict(data: dict):
    """Parse a configuration; returns (points, lines), real or complex."""
    try:
        raw_points = data["points"]
        raw_lines = data["lines"]
    except (KeyError, TypeError) as exc:
        raise InputError(f"malformed configuration JSON: {exc}") from exc
    complex_mode = any(
        isinstance(v, dict)
        for entry in list(raw_points) + list(raw_lines) for v in entry)
    points, lines = [], []
    for entry in raw_points:
        if len(entry) != 2:
            raise InputError("each point needs exactly two coordinates")
        vals = [_parse_value(v) for v in entry]
        if complex_mode:
            vals = [v if isinstance(v, GaussianRational) else GaussianRational.of(v)
                    for v in vals]
            points.append(CPoint(*vals))
        else:
            points.append(RPoint(*vals))
    for entry in raw_lines:
        if len(entry) != 3:
            raise InputError("each line needs exactly three coefficients")
        vals = [_parse_value(v) for v in entry]
        if complex_mode:
            vals = [v if isinstance(v, GaussianRational) else GaussianRational.of(v)
                    for v in vals]
            lines.append(CLine(*vals))
        else:
            lines.append(RLine(*vals))
    return points, lines


def config_to_json_dict(points, lines) -> dict:
    out_points = []
    for p in points:
        if isinstance(p, CPoint):
            out_points.append([_format_value(p.z), _format_value(p.w)])
        else:
            out_points.append([_format_value(p.x), _format_value(p.y)])
    out_lines = [[_format_value(l.a), _format_value(l.b), _format_value(l.c)]
                 for l in lines]
    return {"points": out_points, "lines": out_lines}
