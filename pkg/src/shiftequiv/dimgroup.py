"""Dimension data of an essential nonnegative integer matrix.

Two equivalent pictures are implemented:

* the direct-limit group ``G_A``: classes ``[v, k]`` with ``v`` an integer
  vector and ``k >= 0``, where ``(v, k) ~ (w, l)`` when
  ``(A^t)^(m-k) v == (A^t)^(m-l) w`` for some ``m``;
* Krieger's triple: the eventual image ``Delta_A`` of row vectors ``v`` in
  ``Q^n A^n`` with ``v A^l`` integral for some ``l``, acted on by ``v -> vA``.

``psi`` maps the second picture onto the first.  All arithmetic is exact.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd
from functools import reduce
from typing import Sequence, Union

from .exceptions import (
    MatrixMismatchError,
    NotEssentialError,
    NotIntertwinerError,
    ShapeError,
)
from .linalg import Matrix, inverse, rational_solve, rref

__all__ = [
    "EssentialMatrix",
    "DimClass",
    "InCone",
    "Unknown",
    "EventualImageSpace",
    "DeltaElement",
    "as_essential",
    "equal",
    "add",
    "x_action",
    "in_positive_cone",
    "order_unit",
    "zero_class",
    "generator_class",
    "eventual_image",
    "delta_membership",
    "delta_shift",
    "psi",
    "delta_order_unit",
    "apply_R_delta",
    "apply_Rt_G",
    "check_intertwiner",
]


class EssentialMatrix(Matrix):
    """Square nonnegative integer matrix with no zero row.

    These are the adjacency matrices of finite graphs in which every vertex
    emits at least one edge.
    """

    __slots__ = ()

    def __init__(self, rows):
        super().__init__(rows)
        if not self.is_square():
            raise NotEssentialError(f"matrix of shape {self.shape} is not square")
        if not self.is_integral() or not self.is_nonnegative():
            raise NotEssentialError("entries must be nonnegative integers")
        for i, r in enumerate(self.rows):
            if not any(r):
                raise NotEssentialError(f"row {i} is zero (vertex {i} is a sink)")

    @property
    def size(self) -> int:
        return self.nrows

    def __repr__(self):
        return f"EssentialMatrix({self.tolist()!r})"


def as_essential(A) -> EssentialMatrix:
    return A if isinstance(A, EssentialMatrix) else EssentialMatrix(A)


def _power_apply(M: Matrix, v, p: int):
    for _ in range(p):
        v = M.mul_vec(v)
    return v


# --------------------------------------------------------------------------
# the direct-limit picture

@dataclass(frozen=True, eq=False)
class DimClass:
    """The class ``[v, k]`` in ``G_A``.

    ``==`` is the quotient relation, so classes are deliberately unhashable.
    """

    v: tuple
    k: int
    matrix: EssentialMatrix = field(repr=False)

    def __post_init__(self):
        object.__setattr__(self, "matrix", as_essential(self.matrix))
        v = tuple(self.v)
        if len(v) != self.matrix.size:
            raise ShapeError(f"vector of length {len(v)} for a size-{self.matrix.size} matrix")
        if not all(isinstance(x, int) and not isinstance(x, bool) for x in v):
            v = tuple(int(x) for x in v)
        if self.k < 0:
            raise ValueError("the level k must be a natural number")
        object.__setattr__(self, "v", v)

    def __eq__(self, other):
        if not isinstance(other, DimClass):
            return NotImplemented
        return equal(self, other)

    __hash__ = None

    def __add__(self, other):
        return add(self, other)

    def __neg__(self):
        return DimClass(tuple(-x for x in self.v), self.k, self.matrix)

    def __sub__(self, other):
        return add(self, -other)


def _same_matrix(a: DimClass, b: DimClass) -> None:
    if a.matrix != b.matrix:
        raise MatrixMismatchError("classes belong to different dimension groups")


def equal(a: DimClass, b: DimClass) -> bool:
    """Decide ``[a.v, a.k] == [b.v, b.k]`` in ``G_A``.

    The kernels of the powers of ``A^t`` stop growing by the ``|A|``-th power,
    so it is enough to test whether ``(A^t)^|A|`` kills the difference of the
    two representatives brought to a common level.
    """
    _same_matrix(a, b)
    At = a.matrix.T
    top = max(a.k, b.k)
    d = tuple(
        x - y for x, y in zip(_power_apply(At, a.v, top - a.k), _power_apply(At, b.v, top - b.k))
    )
    return not any(_power_apply(At, d, a.matrix.size))


def add(a: DimClass, b: DimClass) -> DimClass:
    """``[v,k] + [w,k'] = [(A^t)^k' v + (A^t)^k w, k + k']``."""
    _same_matrix(a, b)
    At = a.matrix.T
    v = _power_apply(At, a.v, b.k)
    w = _power_apply(At, b.v, a.k)
    return DimClass(tuple(x + y for x, y in zip(v, w)), a.k + b.k, a.matrix)


def x_action(a: DimClass, power: int) -> DimClass:
    """Act by ``x^power``: ``x [v,k] = [A^t v, k]`` and ``x^-1 [v,k] = [v, k+1]``."""
    if power >= 0:
        return DimClass(_power_apply(a.matrix.T, a.v, power), a.k, a.matrix)
    return DimClass(a.v, a.k - power, a.matrix)


def zero_class(A) -> DimClass:
    A = as_essential(A)
    return DimClass((0,) * A.size, 0, A)


def order_unit(A) -> DimClass:
    """The order unit ``[(1, ..., 1), 0]``."""
    A = as_essential(A)
    return DimClass((1,) * A.size, 0, A)


def generator_class(A, i: int) -> DimClass:
    """``[e_i, 0]``."""
    A = as_essential(A)
    return DimClass(tuple(int(j == i) for j in range(A.size)), 0, A)


@dataclass(frozen=True)
class InCone:
    """``(A^t)^power v`` is entrywise nonnegative."""

    power: int
    verdict = "in_cone"


@dataclass(frozen=True)
class Unknown:
    """No nonnegative representative was found up to ``bound`` applications of ``A^t``."""

    bound: int
    verdict = "unknown"


def in_positive_cone(a: DimClass, max_power: int | None = None) -> Union[InCone, Unknown]:
    """Bounded search for a nonnegative representative of ``a``.

    Returns ``InCone(j)`` for the least ``j <= max_power`` with
    ``(A^t)^j v >= 0``, else ``Unknown(max_power)``.  This only semi-decides
    membership in the positive cone.  ``max_power`` defaults to ``50 |A|``.
    """
    if max_power is None:
        max_power = 50 * a.matrix.size
    if max_power < 0:
        raise ValueError("max_power must be nonnegative")
    At = a.matrix.T
    v = a.v
    for j in range(max_power + 1):
        if all(x >= 0 for x in v):
            return InCone(j)
        if j < max_power:
            v = At.mul_vec(v)
    return Unknown(max_power)


# --------------------------------------------------------------------------
# Krieger's dimension triple

@dataclass(frozen=True)
class EventualImageSpace:
    """Rational eventual image ``Q^n A^n`` of an essential matrix.

    ``basis`` holds the nonzero rows of the reduced echelon form of ``A^n``;
    ``pivots`` their pivot columns; ``stabilization_power`` the least
    ``k >= 1`` with ``rank A^k == rank A^(k+1)``.
    """

    matrix: EssentialMatrix
    basis: tuple
    pivots: tuple
    stabilization_power: int

    @property
    def dim(self) -> int:
        return len(self.basis)

    def coords(self, v: Sequence):
        """Coordinates of ``v`` in ``basis``, or ``None`` if ``v`` is outside the span."""
        if len(v) != self.matrix.size:
            raise ShapeError(f"vector of length {len(v)} for a size-{self.matrix.size} matrix")
        c = tuple(Fraction(v[p]) for p in self.pivots)
        if self.combine(c) != tuple(Fraction(x) for x in v):
            return None
        return c

    def combine(self, c: Sequence) -> tuple:
        n = self.matrix.size
        return tuple(sum((ci * b[j] for ci, b in zip(c, self.basis)), Fraction(0)) for j in range(n))

    def contains(self, v: Sequence) -> bool:
        return self.coords(v) is not None

    def restricted_action(self) -> Matrix:
        """Matrix ``C`` of ``v -> vA`` on the span: ``basis @ A == C @ basis``."""
        return Matrix(self.coords(self.matrix.vec_mul(b)) for b in self.basis)

    def act(self, v: Sequence, power: int) -> tuple:
        """``v A^power`` inside the span; negative powers use the inverse of ``A`` there."""
        if power >= 0:
            for _ in range(power):
                v = self.matrix.vec_mul(v)
            return tuple(v)
        c = self.coords(v)
        if c is None:
            raise ValueError("vector is not in the eventual image")
        Cinv = inverse(self.restricted_action())
        for _ in range(-power):
            c = Cinv.vec_mul(c)
        return tuple(Matrix([self.combine(c)]).row(0))


def eventual_image(A) -> EventualImageSpace:
    """The rational eventual image of ``A`` (row vectors)."""
    A = as_essential(A)
    n = A.size
    ranks = []
    P = A
    for _ in range(n + 1):
        ranks.append(len(rref(P)[1]))
        P = P @ A
    stab = next(k for k in range(1, n + 1) if ranks[k - 1] == ranks[k])
    R, pivots = rref(A ** n)
    basis = tuple(R.row(i) for i in range(len(pivots)))
    return EventualImageSpace(A, basis, pivots, stab)


@dataclass(frozen=True)
class DeltaElement:
    """An element ``v`` of ``Delta_A`` with the least ``l`` making ``v A^l`` integral."""

    v: tuple
    l: int
    matrix: EssentialMatrix = field(repr=False)


def _lcm_denominator(v) -> int:
    return reduce(lambda a, b: a * b // gcd(a, b), (Fraction(x).denominator for x in v), 1)


def delta_membership(v: Sequence, A, space: EventualImageSpace | None = None):
    """Return ``v`` as a :class:`DeltaElement`, or ``None`` if ``v`` is not in ``Delta_A``.

    ``v`` must lie in the rational eventual image, and some ``v A^l`` must be
    integral.  If ``v`` has denominator ``q`` the search for ``l`` stops at
    ``|A| * q.bit_length()``: past that bound no power can clear ``q``, so
    ``None`` is a definite answer, not a timeout.
    """
    A = as_essential(A)
    space = space or eventual_image(A)
    if space.coords(v) is None:
        return None
    v = tuple(Matrix([v]).row(0))
    cap = A.size * _lcm_denominator(v).bit_length()
    w = v
    for l in range(cap + 1):
        if all(isinstance(x, int) for x in w):
            return DeltaElement(v, l, A)
        w = A.vec_mul(w)
    return None


def delta_shift(d: DeltaElement, power: int) -> DeltaElement:
    """The automorphism ``v -> vA`` applied ``power`` times (negative allowed)."""
    space = eventual_image(d.matrix)
    result = delta_membership(space.act(d.v, power), d.matrix, space)
    assert result is not None
    return result


def psi(d: DeltaElement) -> DimClass:
    """``v -> [(A^t)^l v^t, l]`` from ``Delta_A`` to ``G_A``."""
    At = d.matrix.T
    vec = d.v
    for _ in range(d.l):
        vec = At.mul_vec(vec)
    return DimClass(vec, d.l, d.matrix)


def delta_order_unit(A) -> DeltaElement:
    """The unique ``u`` in the eventual image with ``u A^n == (1, ..., 1) A^n``."""
    A = as_essential(A)
    n = A.size
    space = eventual_image(A)
    An = A ** n
    images = Matrix([An.T.mul_vec(b) for b in space.basis])  # rows: b A^n
    target = An.vec_mul((1,) * n)
    sol = rational_solve(images.T, target)
    assert sol is not None and not sol[1], "A^n is injective on its eventual image"
    u = space.combine(sol[0])
    d = delta_membership(u, A, space)
    assert d is not None
    return d


def check_intertwiner(A: Matrix, R: Matrix, B: Matrix) -> None:
    """Raise :class:`NotIntertwinerError` unless ``A @ R == R @ B``."""
    if R.shape != (A.nrows, B.nrows):
        raise ShapeError(f"R has shape {R.shape}, expected {(A.nrows, B.nrows)}")
    residual = A @ R - R @ B
    if not residual.is_zero():
        raise NotIntertwinerError(residual)


def apply_R_delta(d: DeltaElement, R, B) -> DeltaElement:
    """``v -> vR`` from ``Delta_A`` to ``Delta_B``; requires ``AR == RB``."""
    R, B = Matrix(R), as_essential(B)
    check_intertwiner(d.matrix, R, B)
    result = delta_membership(R.vec_mul(d.v), B)
    assert result is not None
    return result


def apply_Rt_G(a: DimClass, R, B) -> DimClass:
    """``[v, k] -> [R^t v, k]`` from ``G_A`` to ``G_B``; requires ``AR == RB``."""
    R, B = Matrix(R), as_essential(B)
    check_intertwiner(a.matrix, R, B)
    return DimClass(R.T.mul_vec(a.v), a.k, B)
