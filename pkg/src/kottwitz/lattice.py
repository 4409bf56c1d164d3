"""Exact integer and rational linear algebra.

Everything here works over Python ints and :class:`fractions.Fraction`;
no floating point is used anywhere.  Sizes are tiny (rank <= 12), so the
algorithms favour clarity over asymptotics.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Optional, Sequence, Tuple

RatVector = Tuple[Fraction, ...]
IntVector = Tuple[int, ...]


def ratvec(xs: Iterable) -> RatVector:
    return tuple(Fraction(x) for x in xs)


def dot(x: Sequence, y: Sequence):
    return sum((a * b for a, b in zip(x, y)), 0)


def vadd(x: Sequence, y: Sequence) -> tuple:
    return tuple(a + b for a, b in zip(x, y))


def vsub(x: Sequence, y: Sequence) -> tuple:
    return tuple(a - b for a, b in zip(x, y))


def vscale(c, x: Sequence) -> tuple:
    return tuple(c * a for a in x)


def is_zero(x: Sequence) -> bool:
    return all(a == 0 for a in x)


def format_rational(q: Fraction) -> str:
    q = Fraction(q)
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


def format_vector(v: Sequence) -> str:
    return "(" + ",".join(format_rational(a) for a in v) + ")"


# ---------------------------------------------------------------------------
# Integer matrices and Smith normal form
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class IntMatrix:
    rows: int
    cols: int
    entries: Tuple[int, ...]

    def __post_init__(self):
        if len(self.entries) != self.rows * self.cols:
            raise ValueError(
                f"IntMatrix {self.rows}x{self.cols} needs {self.rows * self.cols} entries, "
                f"got {len(self.entries)}"
            )

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence[int]], cols: Optional[int] = None) -> "IntMatrix":
        rows = [tuple(int(a) for a in r) for r in rows]
        if cols is None:
            cols = len(rows[0]) if rows else 0
        return cls(len(rows), cols, tuple(a for r in rows for a in r))

    @classmethod
    def from_columns(cls, columns: Sequence[Sequence[int]], rows: int) -> "IntMatrix":
        return cls.from_rows(
            [[int(c[i]) for c in columns] for i in range(rows)], cols=len(columns)
        )

    @classmethod
    def identity(cls, n: int) -> "IntMatrix":
        return cls.from_rows([[int(i == j) for j in range(n)] for i in range(n)], cols=n)

    @classmethod
    def zeros(cls, rows: int, cols: int) -> "IntMatrix":
        return cls(rows, cols, (0,) * (rows * cols))

    def __getitem__(self, ij: Tuple[int, int]) -> int:
        i, j = ij
        return self.entries[i * self.cols + j]

    def row(self, i: int) -> IntVector:
        return self.entries[i * self.cols:(i + 1) * self.cols]

    def to_rows(self) -> list:
        return [list(self.row(i)) for i in range(self.rows)]

    @property
    def T(self) -> "IntMatrix":
        return IntMatrix.from_rows(
            [[self[i, j] for i in range(self.rows)] for j in range(self.cols)], cols=self.rows
        )

    def __matmul__(self, other: "IntMatrix") -> "IntMatrix":
        if self.cols != other.rows:
            raise ValueError("dimension mismatch")
        cols = [[other[k, j] for k in range(other.rows)] for j in range(other.cols)]
        return IntMatrix.from_rows(
            [[dot(self.row(i), c) for c in cols] for i in range(self.rows)], cols=other.cols
        )

    def apply(self, v: Sequence) -> tuple:
        return tuple(dot(self.row(i), v) for i in range(self.rows))

    def is_diagonal(self) -> bool:
        return all(self[i, j] == 0 for i in range(self.rows) for j in range(self.cols) if i != j)


def det(m: IntMatrix) -> int:
    """Exact determinant by fraction-free (Bareiss) elimination."""
    if m.rows != m.cols:
        raise ValueError("determinant of a non-square matrix")
    n = m.rows
    a = m.to_rows()
    sign, prev = 1, 1
    for k in range(n - 1):
        if a[k][k] == 0:
            swap = next((i for i in range(k + 1, n) if a[i][k] != 0), None)
            if swap is None:
                return 0
            a[k], a[swap] = a[swap], a[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
        prev = a[k][k]
    return sign * a[n - 1][n - 1] if n else 1


def smith_decompose(m: IntMatrix) -> Tuple[IntMatrix, IntMatrix, IntMatrix]:
    """Return ``(d, u, v)`` with ``u @ m @ v == d`` in Smith normal form.

    ``u`` and ``v`` are unimodular, ``d`` is diagonal with nonnegative entries
    and ``d[i,i]`` divides ``d[i+1,i+1]`` (zeros last).
    """
    r, c = m.rows, m.cols
    a = m.to_rows()
    u = IntMatrix.identity(r).to_rows()
    v = IntMatrix.identity(c).to_rows()

    def swap_rows(i, j):
        a[i], a[j] = a[j], a[i]
        u[i], u[j] = u[j], u[i]

    def swap_cols(i, j):
        for row in a:
            row[i], row[j] = row[j], row[i]
        for row in v:
            row[i], row[j] = row[j], row[i]

    def add_row(src, dst, k):  # row[dst] += k * row[src]
        a[dst] = [x + k * y for x, y in zip(a[dst], a[src])]
        u[dst] = [x + k * y for x, y in zip(u[dst], u[src])]

    def add_col(src, dst, k):  # col[dst] += k * col[src]
        for row in a:
            row[dst] += k * row[src]
        for row in v:
            row[dst] += k * row[src]

    for t in range(min(r, c)):
        while True:
            nonzero = [(abs(a[i][j]), i, j) for i in range(t, r) for j in range(t, c) if a[i][j]]
            if not nonzero:
                break
            _, pi, pj = min(nonzero)
            swap_rows(t, pi)
            swap_cols(t, pj)
            clean = True
            for i in range(t + 1, r):
                q = a[i][t] // a[t][t]
                if q:
                    add_row(t, i, -q)
                if a[i][t]:
                    clean = False
            for j in range(t + 1, c):
                q = a[t][j] // a[t][t]
                if q:
                    add_col(t, j, -q)
                if a[t][j]:
                    clean = False
            if not clean:
                continue
            # pivot must divide the whole remaining block
            bad = next(
                (i for i in range(t + 1, r) for j in range(t + 1, c) if a[i][j] % a[t][t]),
                None,
            )
            if bad is None:
                break
            add_row(bad, t, 1)
        if a[t][t] < 0:
            a[t] = [-x for x in a[t]]
            u[t] = [-x for x in u[t]]

    return (
        IntMatrix.from_rows(a, cols=c),
        IntMatrix.from_rows(u, cols=r),
        IntMatrix.from_rows(v, cols=c),
    )


def _row_hermite(rows: list) -> list:
    """Row-style Hermite normal form of a full-rank set of integer rows."""
    rows = [list(r) for r in rows]
    n = len(rows[0]) if rows else 0
    out_row = 0
    for col in range(n):
        if out_row >= len(rows):
            break
        while True:
            cand = [(abs(rows[i][col]), i) for i in range(out_row, len(rows)) if rows[i][col]]
            if not cand:
                break
            _, p = min(cand)
            rows[out_row], rows[p] = rows[p], rows[out_row]
            done = True
            for i in range(out_row + 1, len(rows)):
                q = rows[i][col] // rows[out_row][col]
                rows[i] = [x - q * y for x, y in zip(rows[i], rows[out_row])]
                if rows[i][col]:
                    done = False
            if done:
                break
        if out_row < len(rows) and rows[out_row][col]:
            if rows[out_row][col] < 0:
                rows[out_row] = [-x for x in rows[out_row]]
            for i in range(out_row):
                q = rows[i][col] // rows[out_row][col]
                rows[i] = [x - q * y for x, y in zip(rows[i], rows[out_row])]
            out_row += 1
    return rows


# ---------------------------------------------------------------------------
# Finite(ly generated) abelian groups
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class FinAbGroup:
    """A quotient ``Z^n / relations`` presented as ``Z/d_1 + ... + Z/d_k``.

    ``invariant_factors`` lists the nontrivial factors, 0 encoding a copy of
    Z.  ``projection`` maps ambient lattice coordinates to factor coordinates.
    """

    invariant_factors: Tuple[int, ...]
    projection: IntMatrix

    @property
    def ambient_rank(self) -> int:
        return self.projection.cols

    @property
    def free_rank(self) -> int:
        return sum(1 for d in self.invariant_factors if d == 0)

    @property
    def torsion(self) -> Tuple[int, ...]:
        return tuple(d for d in self.invariant_factors if d)

    def is_trivial(self) -> bool:
        return not self.invariant_factors

    def reduce(self, coords: Sequence[int]) -> IntVector:
        return tuple(x % d if d else x for x, d in zip(coords, self.invariant_factors))

    def project(self, v: Sequence[int]) -> IntVector:
        return self.reduce(self.projection.apply(v))

    def add(self, x: Sequence[int], y: Sequence[int]) -> IntVector:
        return self.reduce(vadd(x, y))

    def neg(self, x: Sequence[int]) -> IntVector:
        return self.reduce(tuple(-a for a in x))

    def zero(self) -> IntVector:
        return (0,) * len(self.invariant_factors)

    def __str__(self) -> str:
        if self.is_trivial():
            return "0"
        return " + ".join("Z" if d == 0 else f"Z/{d}" for d in self.invariant_factors)


def coinvariants(rank: int, relation_generators: Sequence[Sequence[int]]) -> FinAbGroup:
    """The quotient of ``Z^rank`` by the span of ``relation_generators``."""
    for g in relation_generators:
        if len(g) != rank:
            raise ValueError(f"relation {tuple(g)} does not have length {rank}")
    gens = [tuple(int(a) for a in g) for g in relation_generators if any(g)]
    if not gens:
        d_diag, u = [], IntMatrix.identity(rank)
    else:
        d, u, _ = smith_decompose(IntMatrix.from_columns(gens, rank))
        d_diag = [d[i, i] for i in range(min(d.rows, d.cols))]
    factors = d_diag + [0] * (rank - len(d_diag))
    torsion_rows = [(f, u.row(i)) for i, f in enumerate(factors) if f > 1]
    free_rows = [u.row(i) for i, f in enumerate(factors) if f == 0]
    if free_rows:
        free_rows = _row_hermite(free_rows)
    invariants = tuple(f for f, _ in torsion_rows) + (0,) * len(free_rows)
    proj_rows = [r for _, r in torsion_rows] + [tuple(r) for r in free_rows]
    projection = IntMatrix.from_rows(proj_rows, cols=rank) if proj_rows else IntMatrix.zeros(0, rank)
    return FinAbGroup(invariants, projection)


# ---------------------------------------------------------------------------
# Rational linear algebra
# ---------------------------------------------------------------------------


def rref(rows: Sequence[Sequence], ncols: Optional[int] = None):
    """Reduced row echelon form over Q; returns ``(rows, pivot_columns)``."""
    m = [[Fraction(x) for x in r] for r in rows]
    if ncols is None:
        ncols = len(m[0]) if m else 0
    pivots = []
    r = 0
    for c in range(ncols):
        p = next((i for i in range(r, len(m)) if m[i][c] != 0), None)
        if p is None:
            continue
        m[r], m[p] = m[p], m[r]
        inv = 1 / m[r][c]
        m[r] = [x * inv for x in m[r]]
        for i in range(len(m)):
            if i != r and m[i][c] != 0:
                f = m[i][c]
                m[i] = [x - f * y for x, y in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
        if r == len(m):
            break
    return m, pivots


def rank_of(vectors: Sequence[Sequence]) -> int:
    if not vectors:
        return 0
    return len(rref(vectors)[1])


def solve(a: Sequence[Sequence], b: Sequence) -> RatVector:
    """Solve the square nonsingular system ``a x = b`` exactly."""
    n = len(a)
    aug = [list(a[i]) + [b[i]] for i in range(n)]
    m, piv = rref(aug, ncols=n)
    if piv != list(range(n)):
        raise ZeroDivisionError("singular system")
    return tuple(m[i][n] for i in range(n))


def inverse(a: Sequence[Sequence]) -> list:
    n = len(a)
    aug = [list(a[i]) + [int(i == j) for j in range(n)] for i in range(n)]
    m, piv = rref(aug, ncols=n)
    if piv != list(range(n)):
        raise ZeroDivisionError("singular matrix")
    return [row[n:] for row in m]


def nullspace(rows: Sequence[Sequence], ncols: int) -> list:
    """A basis of ``{x : rows @ x = 0}``."""
    if not rows:
        return [tuple(Fraction(int(i == j)) for j in range(ncols)) for i in range(ncols)]
    m, piv = rref(rows, ncols)
    free = [c for c in range(ncols) if c not in piv]
    basis = []
    for f in free:
        x = [Fraction(0)] * ncols
        x[f] = Fraction(1)
        for i, p in enumerate(piv):
            x[p] = -m[i][f]
        basis.append(tuple(x))
    return basis


def express_in_span(vectors: Sequence[Sequence], x: Sequence) -> Optional[RatVector]:
    """Coefficients ``c`` with ``sum c_i vectors[i] == x``, or None if x is outside the span.

    When the vectors are dependent an arbitrary particular solution is returned.
    """
    k = len(vectors)
    dim = len(x)
    if k == 0:
        return () if is_zero(x) else None
    aug = [[vectors[j][i] for j in range(k)] + [x[i]] for i in range(dim)]
    m, piv = rref(aug, ncols=k + 1)
    if k in piv:
        return None
    c = [Fraction(0)] * k
    for i, p in enumerate(piv):
        c[p] = m[i][k]
    return tuple(c)


def in_span(vectors: Sequence[Sequence], x: Sequence) -> bool:
    return express_in_span(vectors, x) is not None


# ---------------------------------------------------------------------------
# Rational cone membership
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ConeVerdict:
    """Outcome of :func:`in_rational_cone`.

    On membership ``coefficients`` are nonnegative with
    ``sum coefficients[i] * generators[i] == x``.  Otherwise ``separator`` is
    a functional ``f`` with ``f . g >= 0`` on every generator and
    ``f . x < 0``; ``outside_span`` says whether ``f`` even kills every
    generator (x leaves the linear span).
    """

    member: bool
    coefficients: Optional[RatVector] = None
    separator: Optional[RatVector] = None
    outside_span: bool = False

    def __bool__(self) -> bool:
        return self.member


def _fm_eliminate(ineqs, nvars):
    """Fourier-Motzkin elimination with multiplier tracking.

    Each inequality is ``(a, b, mult)`` meaning ``a . t + b >= 0``, obtained as
    the combination ``mult`` of the original constraints.  Returns the stages
    (for back substitution) and the final variable-free inequalities.
    """
    stages = []
    current = ineqs
    for k in range(nvars - 1, -1, -1):
        pos = [q for q in current if q[0][k] > 0]
        neg = [q for q in current if q[0][k] < 0]
        rest = [q for q in current if q[0][k] == 0]
        stages.append((k, pos, neg))
        combined = {}
        for ap, bp, mp in pos:
            for an, bn, mn in neg:
                lp, ln = -an[k], ap[k]
                a = tuple(lp * x + ln * y for x, y in zip(ap, an))
                b = lp * bp + ln * bn
                mult = tuple(lp * x + ln * y for x, y in zip(mp, mn))
                key = _normalized_key(a, b)
                if key not in combined:
                    combined[key] = (a, b, mult)
        current = rest + list(combined.values())
    return stages, current


def _normalized_key(a, b):
    scale = next((abs(x) for x in a if x != 0), None) or abs(b) or 1
    return tuple(x / scale for x in a) + (b / scale,)


def in_rational_cone(x: Sequence, generators: Sequence[Sequence]) -> ConeVerdict:
    """Decide whether ``x`` is a nonnegative rational combination of ``generators``.

    Equalities are removed by Gaussian elimination first; the remaining
    sign constraints on the kernel parameters go through Fourier-Motzkin.
    """
    dim = len(x)
    for g in generators:
        if len(g) != dim:
            raise ValueError("dimension mismatch between x and generators")
    x = ratvec(x)
    gens = [ratvec(g) for g in generators]
    k = len(gens)

    particular = express_in_span(gens, x)
    if particular is None:
        # a left-kernel vector of the generator matrix that does not kill x
        left = nullspace(gens, dim)
        f = next(y for y in left if dot(y, x) != 0)
        if dot(f, x) > 0:
            f = tuple(-a for a in f)
        return ConeVerdict(False, separator=f, outside_span=True)

    kernel = nullspace([[g[i] for g in gens] for i in range(dim)], k)
    nv = len(kernel)
    # constraint i: particular_i + sum_j kernel[j][i] t_j >= 0
    ineqs = [
        (
            tuple(kernel[j][i] for j in range(nv)),
            particular[i],
            tuple(Fraction(int(i == l)) for l in range(k)),
        )
        for i in range(k)
    ]
    stages, final = _fm_eliminate(ineqs, nv)
    bad = next((q for q in final if q[1] < 0), None)
    if bad is not None:
        u = bad[2]  # u >= 0, u . kernel == 0, u . particular < 0
        f = _solve_transpose(gens, u, dim)
        return ConeVerdict(False, separator=f)

    t = [Fraction(0)] * nv
    for k_var, pos, neg in reversed(stages):
        def bound(q):
            a, b, _ = q
            return -(b + sum(a[j] * t[j] for j in range(nv) if j != k_var)) / a[k_var]

        lo = max((bound(q) for q in pos), default=None)
        hi = min((bound(q) for q in neg), default=None)
        if lo is not None:
            t[k_var] = lo
        elif hi is not None:
            t[k_var] = hi
        else:
            t[k_var] = Fraction(0)
    lam = tuple(particular[i] + sum(kernel[j][i] * t[j] for j in range(nv)) for i in range(k))
    return ConeVerdict(True, coefficients=lam)


def _solve_transpose(gens, u, dim):
    """Find f with ``gens[i] . f == u[i]`` for all i (consistent by construction)."""
    rows = [list(g) + [u[i]] for i, g in enumerate(gens)]
    m, piv = rref(rows, ncols=dim + 1)
    if dim in piv:
        raise ArithmeticError("inconsistent Farkas system")
    f = [Fraction(0)] * dim
    for i, p in enumerate(piv):
        f[p] = m[i][dim]
    return tuple(f)
