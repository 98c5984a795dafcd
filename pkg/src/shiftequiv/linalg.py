"""Exact integer and rational matrix arithmetic.

Everything here works on Python ``int`` and :class:`fractions.Fraction`
entries, so results never overflow or round.  Matrices are small and dense
(tens of rows at most), so the algorithms are the textbook ones: Gaussian
elimination over Q, gcd elimination for the Smith form, LLL for short lattice
bases, and Fourier-Motzkin / Bland-rule simplex for the one feasibility
question the rest of the package needs.
"""
from __future__ import annotations

import numbers
from fractions import Fraction
from functools import reduce
from math import gcd
from typing import Iterable, NamedTuple, Sequence

from .exceptions import ShapeError

__all__ = [
    "Matrix",
    "SmithForm",
    "smith_normal_form",
    "integer_kernel",
    "integer_solve",
    "lll_reduce",
    "rref",
    "rank",
    "row_space_basis",
    "rational_solve",
    "rational_kernel",
    "inverse",
    "det",
    "nonneg_feasible",
    "primitive",
]


def _exact(x):
    if isinstance(x, bool):
        raise TypeError("boolean matrix entries are not allowed")
    if isinstance(x, int):
        return x
    if isinstance(x, Fraction):
        return x.numerator if x.denominator == 1 else x
    if isinstance(x, numbers.Integral):
        return int(x)
    if isinstance(x, numbers.Rational):
        return _exact(Fraction(x.numerator, x.denominator))
    raise TypeError(f"exact entries required, got {type(x).__name__}")


class Matrix:
    """Immutable dense matrix with ``int`` / ``Fraction`` entries.

    Fractions with denominator one are stored as ``int``, so an integer
    matrix never carries ``Fraction`` objects and ``is_integral`` is cheap.

    >>> A = Matrix([[1, 1], [1, 0]])
    >>> (A @ A).tolist()
    [[2, 1], [1, 1]]
    """

    __slots__ = ("_rows", "shape")

    def __init__(self, rows: Iterable[Iterable]):
        if isinstance(rows, Matrix):
            self._rows, self.shape = rows._rows, rows.shape
            return
        data = tuple(tuple(_exact(x) for x in row) for row in rows)
        if not data or not data[0]:
            raise ShapeError("a matrix needs at least one row and one column")
        ncols = len(data[0])
        if any(len(r) != ncols for r in data):
            raise ShapeError("ragged rows")
        self._rows = data
        self.shape = (len(data), ncols)

    @classmethod
    def _wrap(cls, rows):
        # rows are already tuples of normalised entries
        obj = object.__new__(Matrix)
        obj._rows = rows
        obj.shape = (len(rows), len(rows[0]))
        return obj

    @classmethod
    def identity(cls, n: int) -> Matrix:
        return cls._wrap(tuple(tuple(int(i == j) for j in range(n)) for i in range(n)))

    @classmethod
    def zeros(cls, rows: int, cols: int) -> Matrix:
        return cls._wrap(tuple((0,) * cols for _ in range(rows)))

    @classmethod
    def column(cls, v: Sequence) -> Matrix:
        return cls([x] for x in v)

    @classmethod
    def from_flat(cls, rows: int, cols: int, entries: Sequence) -> Matrix:
        if len(entries) != rows * cols:
            raise ShapeError(f"{len(entries)} entries cannot fill {rows}x{cols}")
        return cls(entries[i * cols:(i + 1) * cols] for i in range(rows))

    @property
    def rows(self) -> tuple:
        return self._rows

    @property
    def nrows(self) -> int:
        return self.shape[0]

    @property
    def ncols(self) -> int:
        return self.shape[1]

    def row(self, i: int) -> tuple:
        return self._rows[i]

    def col(self, j: int) -> tuple:
        return tuple(r[j] for r in self._rows)

    def __getitem__(self, ij):
        i, j = ij
        return self._rows[i][j]

    def __iter__(self):
        return iter(self._rows)

    def tolist(self) -> list:
        return [list(r) for r in self._rows]

    def flatten(self) -> tuple:
        return tuple(x for r in self._rows for x in r)

    @property
    def T(self) -> Matrix:
        return Matrix._wrap(tuple(zip(*self._rows)))

    def __eq__(self, other):
        if not isinstance(other, Matrix):
            return NotImplemented
        return self._rows == other._rows

    def __hash__(self):
        return hash(self._rows)

    def __repr__(self):
        return f"Matrix({self.tolist()!r})"

    def __matmul__(self, other: Matrix) -> Matrix:
        if not isinstance(other, Matrix):
            return NotImplemented
        if self.ncols != other.nrows:
            raise ShapeError(f"cannot multiply {self.shape} by {other.shape}")
        cols = tuple(zip(*other._rows))
        return Matrix._wrap(tuple(
            tuple(_exact(sum(a * b for a, b in zip(r, c))) for c in cols)
            for r in self._rows
        ))

    def _elementwise(self, other, op):
        if self.shape != other.shape:
            raise ShapeError(f"shape mismatch {self.shape} vs {other.shape}")
        return Matrix._wrap(tuple(
            tuple(_exact(op(a, b)) for a, b in zip(r, s))
            for r, s in zip(self._rows, other._rows)
        ))

    def __add__(self, other):
        if not isinstance(other, Matrix):
            return NotImplemented
        return self._elementwise(other, lambda a, b: a + b)

    def __sub__(self, other):
        if not isinstance(other, Matrix):
            return NotImplemented
        return self._elementwise(other, lambda a, b: a - b)

    def __neg__(self):
        return Matrix._wrap(tuple(tuple(-a for a in r) for r in self._rows))

    def scale(self, c) -> Matrix:
        return Matrix(tuple(c * a for a in r) for r in self._rows)

    def __pow__(self, k: int) -> Matrix:
        if self.nrows != self.ncols:
            raise ShapeError("only square matrices have powers")
        if k < 0:
            return inverse(self) ** (-k)
        result, base = Matrix.identity(self.nrows), self
        while k:
            if k & 1:
                result = result @ base
            k >>= 1
            if k:
                base = base @ base
        return result

    def mul_vec(self, v: Sequence) -> tuple:
        """Column-vector product ``self @ v``."""
        if len(v) != self.ncols:
            raise ShapeError(f"vector of length {len(v)} for {self.shape} matrix")
        return tuple(_exact(sum(a * b for a, b in zip(r, v))) for r in self._rows)

    def vec_mul(self, v: Sequence) -> tuple:
        """Row-vector product ``v @ self``."""
        if len(v) != self.nrows:
            raise ShapeError(f"vector of length {len(v)} for {self.shape} matrix")
        return tuple(
            _exact(sum(a * b for a, b in zip(v, c))) for c in zip(*self._rows)
        )

    def hstack(self, other: Matrix) -> Matrix:
        if self.nrows != other.nrows:
            raise ShapeError("row counts differ")
        return Matrix._wrap(tuple(r + s for r, s in zip(self._rows, other._rows)))

    def vstack(self, other: Matrix) -> Matrix:
        if self.ncols != other.ncols:
            raise ShapeError("column counts differ")
        return Matrix._wrap(self._rows + other._rows)

    def is_square(self) -> bool:
        return self.nrows == self.ncols

    def is_integral(self) -> bool:
        return all(isinstance(x, int) for r in self._rows for x in r)

    def is_nonnegative(self) -> bool:
        return all(x >= 0 for r in self._rows for x in r)

    def is_zero(self) -> bool:
        return all(x == 0 for r in self._rows for x in r)


def _as_matrix(A) -> Matrix:
    return A if isinstance(A, Matrix) else Matrix(A)


def primitive(v: Sequence) -> tuple:
    """Scale a nonzero rational vector to the primitive integer vector on its ray."""
    v = [Fraction(x) for x in v]
    den = reduce(lambda a, b: a * b // gcd(a, b), (x.denominator for x in v), 1)
    ints = [int(x * den) for x in v]
    g = reduce(gcd, ints, 0)
    if g == 0:
        return tuple(ints)
    return tuple(x // g for x in ints)


def _sign_normalise(v):
    for x in v:
        if x:
            return tuple(v) if x > 0 else tuple(-y for y in v)
    return tuple(v)


# --------------------------------------------------------------------------
# integer lattices

class SmithForm(NamedTuple):
    """``U @ A @ V == D`` with ``U``, ``V`` unimodular and ``D`` diagonal."""

    U: Matrix
    D: Matrix
    V: Matrix

    @property
    def invariants(self) -> tuple:
        n = min(self.D.shape)
        return tuple(self.D[i, i] for i in range(n))

    @property
    def rank(self) -> int:
        return sum(1 for d in self.invariants if d)


def smith_normal_form(A) -> SmithForm:
    """Smith normal form by gcd elimination.

    The pivot is always the entry of least absolute value in the remaining
    block, which keeps intermediate entries small.

    >>> smith_normal_form(Matrix([[2, 4], [6, 8]])).invariants
    (2, 4)
    """
    A = _as_matrix(A)
    if not A.is_integral():
        raise ValueError("Smith form needs an integer matrix")
    m, n = A.shape
    D = [list(r) for r in A.rows]
    U = [[int(i == j) for j in range(m)] for i in range(m)]
    V = [[int(i == j) for j in range(n)] for i in range(n)]

    def add_row(dst, src, c):
        D[dst] = [a + c * b for a, b in zip(D[dst], D[src])]
        U[dst] = [a + c * b for a, b in zip(U[dst], U[src])]

    def add_col(dst, src, c):
        for row in D:
            row[dst] += c * row[src]
        for row in V:
            row[dst] += c * row[src]

    def swap_rows(i, j):
        D[i], D[j] = D[j], D[i]
        U[i], U[j] = U[j], U[i]

    def swap_cols(i, j):
        for row in D:
            row[i], row[j] = row[j], row[i]
        for row in V:
            row[i], row[j] = row[j], row[i]

    for t in range(min(m, n)):
        while True:
            best = None
            for i in range(t, m):
                for j in range(t, n):
                    x = D[i][j]
                    if x and (best is None or abs(x) < abs(D[best[0]][best[1]])):
                        best = (i, j)
            if best is None:
                break
            swap_rows(t, best[0])
            swap_cols(t, best[1])
            p = D[t][t]
            for i in range(t + 1, m):
                if D[i][t]:
                    add_row(i, t, -(D[i][t] // p))
            for j in range(t + 1, n):
                if D[t][j]:
                    add_col(j, t, -(D[t][j] // p))
            if any(D[i][t] for i in range(t + 1, m)) or any(D[t][j] for j in range(t + 1, n)):
                continue  # a smaller remainder exists; re-pivot
            bad = next(
                (i for i in range(t + 1, m) for j in range(t + 1, n) if D[i][j] % p),
                None,
            )
            if bad is None:
                break
            add_row(t, bad, 1)
        if D[t][t] < 0:
            D[t] = [-x for x in D[t]]
            U[t] = [-x for x in U[t]]
    return SmithForm(Matrix(U), Matrix(D), Matrix(V))


def lll_reduce(vectors: Sequence[Sequence[int]], delta=Fraction(3, 4)) -> list:
    """LLL-reduce a list of linearly independent integer vectors.

    The returned vectors span the same lattice.
    """
    b = [list(v) for v in vectors]
    k = len(b)
    if k <= 1:
        return [tuple(v) for v in b]

    def dot(u, v):
        return sum(x * y for x, y in zip(u, v))

    def gram_schmidt():
        star, mu, norms = [], [[Fraction(0)] * k for _ in range(k)], []
        for i in range(k):
            v = [Fraction(x) for x in b[i]]
            for j in range(i):
                mu[i][j] = dot(b[i], star[j]) / norms[j]
                v = [x - mu[i][j] * y for x, y in zip(v, star[j])]
            star.append(v)
            norms.append(dot(v, v))
        return mu, norms

    mu, norms = gram_schmidt()
    i = 1
    while i < k:
        for j in range(i - 1, -1, -1):
            q = round(mu[i][j])
            if q:
                b[i] = [x - q * y for x, y in zip(b[i], b[j])]
                for t in range(j):
                    mu[i][t] -= q * mu[j][t]
                mu[i][j] -= q
        if norms[i] >= (delta - mu[i][i - 1] ** 2) * norms[i - 1]:
            i += 1
        else:
            b[i], b[i - 1] = b[i - 1], b[i]
            mu, norms = gram_schmidt()
            i = max(i - 1, 1)
    return [tuple(v) for v in b]


def integer_kernel(A, reduce_basis: bool = True) -> list:
    """Z-basis of ``{x in Z^n : A x = 0}`` as a list of integer tuples.

    With ``reduce_basis`` the basis is LLL-reduced and each vector's first
    nonzero entry is made positive.
    """
    A = _as_matrix(A)
    snf = smith_normal_form(A)
    r = snf.rank
    basis = [snf.V.col(j) for j in range(r, A.ncols)]
    if reduce_basis:
        basis = [_sign_normalise(v) for v in lll_reduce(basis)]
    return basis


def integer_solve(A, b: Sequence[int], reduce_basis: bool = True):
    """Integer solutions of ``A x = b``.

    Returns ``None`` when there is no integer solution, otherwise a pair
    ``(x, kernel)`` with ``x`` one integer solution and ``kernel`` a Z-basis
    of the homogeneous solutions.
    """
    A = _as_matrix(A)
    if len(b) != A.nrows:
        raise ShapeError(f"right-hand side of length {len(b)} for {A.shape} system")
    U, D, V = snf = smith_normal_form(A)
    r = snf.rank
    c = U.mul_vec(b)
    if any(c[i] for i in range(r, A.nrows)):
        return None
    y = [0] * A.ncols
    for i in range(r):
        q, rem = divmod(c[i], D[i, i])
        if rem:
            return None
        y[i] = q
    x = V.mul_vec(y)
    kernel = [V.col(j) for j in range(r, A.ncols)]
    if reduce_basis:
        kernel = [_sign_normalise(v) for v in lll_reduce(kernel)]
    return x, kernel


# --------------------------------------------------------------------------
# rational elimination

def _rref_rows(rows, ncols):
    M = [[Fraction(x) for x in r] for r in rows]
    pivots = []
    r = 0
    for c in range(ncols):
        p = next((i for i in range(r, len(M)) if M[i][c] != 0), None)
        if p is None:
            continue
        M[r], M[p] = M[p], M[r]
        pv = M[r][c]
        M[r] = [x / pv for x in M[r]]
        for i in range(len(M)):
            if i != r and M[i][c] != 0:
                f = M[i][c]
                M[i] = [x - f * y for x, y in zip(M[i], M[r])]
        pivots.append(c)
        r += 1
        if r == len(M):
            break
    return M, pivots


def rref(A) -> tuple:
    """Reduced row echelon form over Q and the pivot columns."""
    A = _as_matrix(A)
    M, pivots = _rref_rows(A.rows, A.ncols)
    return Matrix(M), tuple(pivots)


def rank(A) -> int:
    return len(rref(A)[1])


def row_space_basis(A) -> list:
    """Rows of the reduced echelon form: a canonical basis of the row space."""
    R, pivots = rref(A)
    return [R.row(i) for i in range(len(pivots))]


def rational_solve(A, b):
    """Solve ``A x = b`` over Q.

    ``b`` may be a sequence or a one-column matrix.  Returns ``None`` when the
    system is inconsistent, otherwise ``(x, kernel)`` where ``x`` is the
    particular solution with free variables set to zero and ``kernel`` is the
    standard basis of the homogeneous solutions.

    >>> rational_solve(Matrix([[1, 1], [1, -1]]), [2, 0])
    ((1, 1), [])
    """
    A = _as_matrix(A)
    if isinstance(b, Matrix):
        if b.ncols != 1:
            raise ShapeError("right-hand side must be a single column")
        b = b.col(0)
    if len(b) != A.nrows:
        raise ShapeError(f"right-hand side of length {len(b)} for {A.shape} system")
    n = A.ncols
    M, pivots = _rref_rows((r + (x,) for r, x in zip(A.rows, b)), n + 1)
    if pivots and pivots[-1] == n:
        return None
    x = [Fraction(0)] * n
    for i, p in enumerate(pivots):
        x[p] = M[i][n]
    free = [j for j in range(n) if j not in pivots]
    kernel = []
    for f in free:
        v = [Fraction(0)] * n
        v[f] = Fraction(1)
        for i, p in enumerate(pivots):
            v[p] = -M[i][f]
        kernel.append(tuple(_exact(t) for t in v))
    return tuple(_exact(t) for t in x), kernel


def rational_kernel(A) -> list:
    return rational_solve(A, [0] * _as_matrix(A).nrows)[1]


def inverse(A) -> Matrix:
    A = _as_matrix(A)
    n = A.nrows
    if not A.is_square():
        raise ShapeError("only square matrices are invertible")
    aug = [r + tuple(int(i == j) for j in range(n)) for i, r in enumerate(A.rows)]
    M, pivots = _rref_rows(aug, n)
    if len(pivots) < n:
        raise ZeroDivisionError("matrix is singular")
    return Matrix(r[n:] for r in M)


def det(A):
    A = _as_matrix(A)
    if not A.is_square():
        raise ShapeError("determinant of a non-square matrix")
    M = [[Fraction(x) for x in r] for r in A.rows]
    n = len(M)
    result = Fraction(1)
    for c in range(n):
        p = next((i for i in range(c, n) if M[i][c] != 0), None)
        if p is None:
            return 0
        if p != c:
            M[c], M[p] = M[p], M[c]
            result = -result
        result *= M[c][c]
        for i in range(c + 1, n):
            if M[i][c] != 0:
                f = M[i][c] / M[c][c]
                M[i] = [x - f * y for x, y in zip(M[i], M[c])]
    return _exact(result)


# --------------------------------------------------------------------------
# nonnegative vectors in a rational span

FOURIER_MOTZKIN_MAX_DIM = 12


def nonneg_feasible(basis: Sequence[Sequence], method: str = "auto"):
    """Find a nonzero entrywise-nonnegative vector in the span of ``basis``.

    Returns the primitive integer vector found, or ``None`` when the span
    meets the nonnegative orthant only at the origin.  ``method`` is
    ``"fm"`` (Fourier-Motzkin), ``"simplex"`` or ``"auto"``, which picks
    Fourier-Motzkin for ambient dimension at most 12.  Both are exact.

    >>> nonneg_feasible([(1, -1)]) is None
    True
    >>> nonneg_feasible([(1, 1)])
    (1, 1)
    """
    basis = [tuple(Fraction(x) for x in v) for v in basis]
    if not basis:
        return None
    n = len(basis[0])
    if any(len(v) != n for v in basis):
        raise ShapeError("basis vectors have different lengths")
    if method == "auto":
        method = "fm" if n <= FOURIER_MOTZKIN_MAX_DIM else "simplex"
    if method == "fm":
        x = _fm_nonneg(basis, n)
    elif method == "simplex":
        x = _simplex_nonneg(basis, n)
    else:
        raise ValueError(f"unknown method {method!r}")
    return None if x is None else primitive(x)


def _normalise_constraint(coeffs, const):
    # scale a >= constraint so the first nonzero coefficient has |value| 1
    lead = next((abs(a) for a in coeffs if a != 0), None)
    if lead is None:
        return tuple(coeffs), const
    return tuple(a / lead for a in coeffs), const / lead


def _fm_nonneg(basis, n):
    d = len(basis)
    # constraints: sum_j a_j c_j + const >= 0
    cons = {_normalise_constraint(tuple(basis[j][i] for j in range(d)), Fraction(0))
            for i in range(n)}
    cons.add(_normalise_constraint(
        tuple(sum(basis[j]) for j in range(d)), Fraction(-1)))
    stages = []
    for var in range(d - 1, -1, -1):
        pos = [c for c in cons if c[0][var] > 0]
        neg = [c for c in cons if c[0][var] < 0]
        new = {c for c in cons if c[0][var] == 0}
        for pa, pc in pos:
            for na, nc in neg:
                s, t = -na[var], pa[var]
                coeffs = tuple(s * x + t * y for x, y in zip(pa, na))
                new.add(_normalise_constraint(coeffs, s * pc + t * nc))
        stages.append((var, pos, neg))
        cons = set()
        for coeffs, const in new:
            if all(a == 0 for a in coeffs):
                if const < 0:
                    return None
            else:
                cons.add((coeffs, const))
    values = [Fraction(0)] * d
    for var, pos, neg in reversed(stages):
        def rest(c):
            return sum(a * values[j] for j, a in enumerate(c[0]) if j != var) + c[1]
        lo = max((-rest(c) / c[0][var] for c in pos), default=None)
        hi = min((rest(c) / -c[0][var] for c in neg), default=None)
        if lo is not None and hi is not None and lo > hi:
            raise AssertionError("Fourier-Motzkin back-substitution failed")
        if (lo is None or lo <= 0) and (hi is None or hi >= 0):
            values[var] = Fraction(0)
        elif lo is not None and lo > 0:
            values[var] = lo
        else:
            values[var] = hi
    return [sum(values[j] * basis[j][i] for j in range(d)) for i in range(n)]


def _simplex_nonneg(basis, n):
    # maximise sum(y) subject to y in span, 0 <= y <= 1, via y + s = 1
    annihilator = rational_kernel(Matrix(basis)) if len(basis) < n else []
    rows, rhs = [], []
    for z in annihilator:
        rows.append(list(z) + [0] * n)
        rhs.append(0)
    for i in range(n):
        row = [0] * (2 * n)
        row[i] = row[n + i] = 1
        rows.append(row)
        rhs.append(1)
    objective = [1] * n + [0] * n
    value, x = _simplex_max(objective, rows, rhs)
    return x[:n] if value > 0 else None


def _simplex_max(c, A, b):
    """Maximise ``c.x`` subject to ``A x = b``, ``x >= 0`` with ``b >= 0``.

    Two-phase tableau simplex with Bland's rule over Q.  Returns
    ``(value, x)``, or ``None`` when infeasible.  Unbounded problems raise.
    """
    m, n = len(A), len(c)
    T = [[Fraction(x) for x in A[i]] + [Fraction(int(k == i)) for k in range(m)]
         + [Fraction(b[i])] for i in range(m)]
    basis = [n + i for i in range(m)]

    def pivot(r, j):
        pv = T[r][j]
        T[r] = [x / pv for x in T[r]]
        for i in range(len(T)):
            if i != r and T[i][j] != 0:
                f = T[i][j]
                T[i] = [x - f * y for x, y in zip(T[i], T[r])]
        basis[r] = j

    def run(obj, ncols):
        while True:
            entering = None
            for j in range(ncols):
                if j in basis:
                    continue
                z = obj[j] - sum(obj[basis[r]] * T[r][j] for r in range(len(T)))
                if z > 0:
                    entering = j
                    break
            if entering is None:
                return
            best = None
            for r in range(len(T)):
                if T[r][entering] > 0:
                    ratio = T[r][-1] / T[r][entering]
                    key = (ratio, basis[r])
                    if best is None or key < best[0]:
                        best = (key, r)
            if best is None:
                raise ArithmeticError("linear program is unbounded")
            pivot(best[1], entering)

    phase1 = [Fraction(0)] * n + [Fraction(-1)] * m
    run(phase1, n + m)
    if any(T[r][-1] != 0 for r in range(len(T)) if basis[r] >= n):
        return None
    keep = []
    for r in range(len(T)):
        if basis[r] >= n:
            j = next((j for j in range(n) if T[r][j] != 0), None)
            if j is None:
                continue  # redundant equality
            pivot(r, j)
        keep.append(r)
    T = [T[r][:n] + [T[r][-1]] for r in keep]
    basis = [basis[r] for r in keep]
    obj = [Fraction(x) for x in c]
    run(obj, n)
    x = [Fraction(0)] * n
    for r, j in enumerate(basis):
        x[j] = T[r][-1]
    return sum(a * v for a, v in zip(obj, x)), x
