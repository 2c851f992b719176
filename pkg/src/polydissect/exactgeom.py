"""Exact rational arithmetic, linear algebra and the two geometric predicates.

Everything here works on :class:`fractions.Fraction` (aliased ``Rat``) or on
plain Python integers; nothing is ever rounded.
"""

from __future__ import annotations

import itertools
import math
from fractions import Fraction
from typing import Iterable, Sequence

Rat = Fraction


class StructuralError(ValueError):
    """Raised for malformed inputs (non-square matrices, wrong arities...)."""


def rat(value) -> Fraction:
    """Coerce ``value`` (int, Fraction, ``"p/q"`` string) to a Fraction.

    Floats are refused: a float literal such as ``0.1`` is not the rational
    number the user meant.
    """
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        return parse_rat(value)
    raise TypeError(f"refusing to convert {type(value).__name__} to an exact rational")


def parse_rat(text: str) -> Fraction:
    text = text.strip()
    if not text:
        raise ValueError("empty rational literal")
    num, sep, den = text.partition("/")
    try:
        if sep:
            return Fraction(int(num), int(den))
        return Fraction(int(num))
    except (ValueError, ZeroDivisionError) as exc:
        raise ValueError(f"bad rational literal {text!r}") from exc


def format_rat(value: Fraction) -> str:
    value = Fraction(value)
    if value.denominator == 1:
        return str(value.numerator)
    return f"{value.numerator}/{value.denominator}"


# ---------------------------------------------------------------------------
# linear algebra

def _check_square(matrix: Sequence[Sequence]) -> int:
    n = len(matrix)
    for row in matrix:
        if len(row) != n:
            raise StructuralError("matrix is not square")
    return n


def int_det(matrix: Sequence[Sequence[int]]) -> int:
    """Determinant of an integer matrix by fraction-free Bareiss elimination."""
    n = _check_square(matrix)
    if n == 0:
        return 1
    if n == 1:
        return matrix[0][0]
    if n == 2:
        return matrix[0][0] * matrix[1][1] - matrix[0][1] * matrix[1][0]
    if n == 3:
        (a, b, c), (d, e, f), (g, h, i) = matrix
        return a * (e * i - f * h) - b * (d * i - f * g) + c * (d * h - e * g)
    m = [list(row) for row in matrix]
    sign = 1
    prev = 1
    for k in range(n - 1):
        if m[k][k] == 0:
            for r in range(k + 1, n):
                if m[r][k] != 0:
                    m[k], m[r] = m[r], m[k]
                    sign = -sign
                    break
            else:
                return 0
        pivot = m[k][k]
        rowk = m[k]
        for i in range(k + 1, n):
            rowi = m[i]
            mik = rowi[k]
            for j in range(k + 1, n):
                rowi[j] = (pivot * rowi[j] - mik * rowk[j]) // prev
        prev = pivot
    return sign * m[n - 1][n - 1]


def det(matrix: Sequence[Sequence]) -> Fraction:
    """Exact determinant of a square matrix of rationals.

    Rows are scaled to integers and reduced with Bareiss elimination so
    intermediate values stay polynomially bounded.
    """
    n = _check_square(matrix)
    scale = 1
    rows = []
    for row in matrix:
        row = [Fraction(x) for x in row]
        den = math.lcm(*(x.denominator for x in row)) if row else 1
        scale *= den
        rows.append([int(x * den) for x in row])
    if n == 0:
        return Fraction(1)
    return Fraction(int_det(rows), scale)


def solve(matrix: Sequence[Sequence], rhs: Sequence) -> list[Fraction] | None:
    """Solve a square linear system exactly; ``None`` if singular."""
    n = _check_square(matrix)
    if len(rhs) != n:
        raise StructuralError("right-hand side has wrong length")
    a = [[Fraction(x) for x in row] + [Fraction(b)] for row, b in zip(matrix, rhs)]
    for col in range(n):
        piv = next((r for r in range(col, n) if a[r][col] != 0), None)
        if piv is None:
            return None
        a[col], a[piv] = a[piv], a[col]
        p = a[col][col]
        prow = a[col]
        for r in range(n):
            if r != col and a[r][col] != 0:
                f = a[r][col] / p
                row = a[r]
                for c in range(col, n + 1):
                    row[c] -= f * prow[c]
    return [a[i][n] / a[i][i] for i in range(n)]


def rank(matrix: Sequence[Sequence]) -> int:
    return len(_row_echelon([list(map(Fraction, row)) for row in matrix])[1])


def _row_echelon(a: list[list[Fraction]]) -> tuple[list[list[Fraction]], list[int]]:
    """Reduced row echelon form in place; returns (matrix, pivot columns)."""
    if not a:
        return a, []
    rows, cols = len(a), len(a[0])
    pivots = []
    r = 0
    for c in range(cols):
        piv = next((i for i in range(r, rows) if a[i][c] != 0), None)
        if piv is None:
            continue
        a[r], a[piv] = a[piv], a[r]
        p = a[r][c]
        a[r] = [x / p for x in a[r]]
        for i in range(rows):
            if i != r and a[i][c] != 0:
                f = a[i][c]
                a[i] = [x - f * y for x, y in zip(a[i], a[r])]
        pivots.append(c)
        r += 1
        if r == rows:
            break
    return a, pivots


def nullspace(matrix: Sequence[Sequence]) -> list[list[Fraction]]:
    """Basis of the right nullspace of ``matrix`` (rows x cols)."""
    if not matrix:
        return []
    cols = len(matrix[0])
    a, pivots = _row_echelon([list(map(Fraction, row)) for row in matrix])
    free = [c for c in range(cols) if c not in pivots]
    basis = []
    for f in free:
        vec = [Fraction(0)] * cols
        vec[f] = Fraction(1)
        for i, pc in enumerate(pivots):
            vec[pc] = -a[i][f]
        basis.append(vec)
    return basis


def primitive(vec: Sequence) -> tuple[int, ...]:
    """Scale a rational vector to the primitive integer vector in its direction."""
    vec = [Fraction(x) for x in vec]
    den = math.lcm(*(x.denominator for x in vec)) if vec else 1
    ints = [int(x * den) for x in vec]
    g = math.gcd(*ints)
    if g == 0:
        return tuple(ints)
    return tuple(x // g for x in ints)


# ---------------------------------------------------------------------------
# homogeneous integer coordinates

def homogeneous(point: Sequence[Fraction]) -> tuple[int, ...]:
    """Integer homogeneous coordinates ``(W*x_1, ..., W*x_d, W)`` with W > 0.

    Scaling a row of an orientation determinant by a positive number keeps
    its sign, so predicates can run on these integers directly.
    """
    den = math.lcm(*(Fraction(x).denominator for x in point)) if point else 1
    return tuple(int(Fraction(x) * den) for x in point) + (den,)


def orientation(hpoints: Sequence[Sequence[int]]) -> int:
    """Sign of the determinant of d+1 homogeneous integer points."""
    v = int_det(hpoints)
    return (v > 0) - (v < 0)


def hyperplane_through(hpoints: Sequence[Sequence[int]]) -> tuple[int, ...]:
    """Integer functional h with h . x_h = det([hpoints; x_h]) for all x.

    ``hpoints`` are d homogeneous points in R^d (d+1 coordinates each).
    The functional is identically zero when the points are affinely dependent.
    """
    k = len(hpoints)
    n = k + 1
    coeffs = []
    for j in range(n):
        minor = [[row[c] for c in range(n) if c != j] for row in hpoints]
        # expansion along the last row of [hpoints; x]
        coeffs.append((-1) ** (k + j) * int_det(minor))
    return tuple(coeffs)


def dot(u: Sequence[int], v: Sequence[int]) -> int:
    return sum(a * b for a, b in zip(u, v))


def simplex_volume_points(points: Sequence[Sequence[Fraction]]) -> Fraction:
    """Volume of the simplex spanned by d+1 points of R^d."""
    d = len(points) - 1
    if any(len(p) != d for p in points):
        raise StructuralError(f"need {d + 1} points of dimension {d}")
    rows = [list(p) + [1] for p in points]
    return abs(det(rows)) / math.factorial(d)


# ---------------------------------------------------------------------------
# halfspace systems and the strict common point test

Halfspace = tuple  # (normal tuple of Fraction, offset Fraction): normal.x + offset >= 0


def simplex_halfspaces(points: Sequence[Sequence[Fraction]]) -> list[Halfspace]:
    """The d+1 facet inequalities of a full-dimensional simplex.

    Each inequality is normalised so that the opposite vertex has slack 1;
    the barycenter then has slack 1/(d+1) everywhere.
    """
    d = len(points) - 1
    pts = [[Fraction(x) for x in p] for p in points]
    if any(len(p) != d for p in pts):
        raise StructuralError("simplex has wrong number of points for its dimension")
    out = []
    for i in range(d + 1):
        facet = [pts[j] for j in range(d + 1) if j != i]
        # solve for (normal, offset) with normal.f + offset = 0 on the facet
        # and normal.p_i + offset = 1
        rows = [list(f) + [Fraction(1)] for f in facet] + [list(pts[i]) + [Fraction(1)]]
        rhs = [Fraction(0)] * d + [Fraction(1)]
        sol = solve(rows, rhs)
        if sol is None:
            raise StructuralError("degenerate simplex has no halfspace description")
        out.append((tuple(sol[:d]), sol[d]))
    return out


def strict_common_point(
    system_a: Sequence[Halfspace], system_b: Sequence[Halfspace]
) -> tuple[bool, tuple[Fraction, ...] | None, Fraction]:
    """Decide whether two halfspace systems have a common strictly feasible point.

    Solves ``max t  s.t.  a_i . x + b_i >= t`` exactly by enumerating the
    vertices of the (pointed) feasible region in (x, t).  Returns
    ``(feasible, witness, optimum)``; ``witness`` maximises the minimum slack
    and is only returned when the optimum is positive.
    """
    cons = list(system_a) + list(system_b)
    if not cons:
        raise StructuralError("empty systems")
    d = len(cons[0][0])
    if any(len(n) != d for n, _ in cons):
        raise StructuralError("inconsistent dimensions between systems")
    best_t = None
    best_x = None
    for subset in itertools.combinations(range(len(cons)), d + 1):
        rows = [list(cons[i][0]) + [Fraction(-1)] for i in subset]
        rhs = [-cons[i][1] for i in subset]
        sol = solve(rows, rhs)
        if sol is None:
            continue
        x, t = sol[:d], sol[d]
        if best_t is not None and t <= best_t:
            continue
        if all(sum(a * xi for a, xi in zip(n, x)) + b >= t for n, b in cons):
            best_t, best_x = t, tuple(x)
    if best_t is None:
        raise StructuralError("feasible region has no vertex; systems are not simplices")
    if best_t > 0:
        return True, best_x, best_t
    return False, None, best_t


def halfspace_intersection_vertices(
    cons: Sequence[Halfspace],
) -> list[tuple[Fraction, ...]]:
    """All vertices of {x : n.x + b >= 0} by brute force over d-subsets."""
    d = len(cons[0][0])
    verts = set()
    for subset in itertools.combinations(range(len(cons)), d):
        sol = solve([list(cons[i][0]) for i in subset], [-cons[i][1] for i in subset])
        if sol is None:
            continue
        if all(sum(a * xi for a, xi in zip(n, sol)) + b >= 0 for n, b in cons):
            verts.add(tuple(sol))
    return sorted(verts)


def affine_dimension(points: Iterable[Sequence[Fraction]]) -> int:
    pts = [list(map(Fraction, p)) for p in points]
    if not pts:
        return -1
    base = pts[0]
    return rank([[a - b for a, b in zip(p, base)] for p in pts[1:]]) if len(pts) > 1 else 0
