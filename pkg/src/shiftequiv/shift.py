"""Shift equivalence: verification, bounded search, and the matrix <-> K-theory dictionary.

A shift equivalence of lag ``m`` between essential matrices ``A`` and ``B``
is a pair of nonnegative integer matrices ``R`` (``|A| x |B|``) and ``S``
(``|B| x |A|``) with::

    A^m = RS,   AR = RB,   B^m = SR,   BS = SA.

Any nonnegative ``R`` with ``AR = RB`` induces an order-preserving module map
``G_A -> G_B``; conversely every such map comes from some ``R`` up to a shift
(:func:`lift_hom_to_matrix`).
"""
from __future__ import annotations

import itertools
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Iterator, Sequence

from .dimgroup import (
    DimClass,
    EssentialMatrix,
    as_essential,
    check_intertwiner,
    generator_class,
)
from .exceptions import NotAHomomorphismError, ShapeError
from .linalg import Matrix, integer_kernel, integer_solve
from .report import Check, Report, relation

__all__ = [
    "SEWitness",
    "RelaxedSEWitness",
    "SSEStep",
    "GradedHomSpec",
    "LiftResult",
    "verify_se",
    "verify_relaxed_se",
    "verify_sse_chain",
    "verify_unital",
    "solve_intertwiners",
    "intertwiner_coordinates",
    "iter_se",
    "search_se",
    "compose_se",
    "sse_to_se",
    "lift_hom_to_matrix",
    "matrix_to_hom",
]


@dataclass(frozen=True)
class SEWitness:
    A: EssentialMatrix
    B: EssentialMatrix
    R: Matrix
    S: Matrix
    m: int

    def __post_init__(self):
        object.__setattr__(self, "A", as_essential(self.A))
        object.__setattr__(self, "B", as_essential(self.B))
        object.__setattr__(self, "R", Matrix(self.R))
        object.__setattr__(self, "S", Matrix(self.S))

    def verify(self) -> Report:
        return verify_se(self)


@dataclass(frozen=True)
class RelaxedSEWitness:
    """``A^m = RS``, ``AR = RB``, ``B^k = TR`` with integral ``R``, ``S``, ``T``."""

    A: EssentialMatrix
    B: EssentialMatrix
    R: Matrix
    S: Matrix
    T: Matrix
    m: int
    k: int

    def __post_init__(self):
        for name in ("A", "B"):
            object.__setattr__(self, name, as_essential(getattr(self, name)))
        for name in ("R", "S", "T"):
            object.__setattr__(self, name, Matrix(getattr(self, name)))


@dataclass(frozen=True)
class SSEStep:
    """Elementary strong shift equivalence ``A = RS``, ``SR = B``."""

    A: EssentialMatrix
    B: EssentialMatrix
    R: Matrix
    S: Matrix

    def __post_init__(self):
        object.__setattr__(self, "A", as_essential(self.A))
        object.__setattr__(self, "B", as_essential(self.B))
        object.__setattr__(self, "R", Matrix(self.R))
        object.__setattr__(self, "S", Matrix(self.S))


def _require_shape(name, M, shape):
    if M.shape != shape:
        raise ShapeError(f"{name} has shape {M.shape}, expected {shape}")


def verify_se(w: SEWitness) -> Report:
    """Check the four shift-equivalence relations and nonnegativity of ``R``, ``S``."""
    a, b = w.A.size, w.B.size
    _require_shape("R", w.R, (a, b))
    _require_shape("S", w.S, (b, a))
    if w.m < 1:
        raise ValueError("the lag must be positive")
    return Report((
        relation("A^m = RS", w.A ** w.m, w.R @ w.S),
        relation("AR = RB", w.A @ w.R, w.R @ w.B),
        relation("B^m = SR", w.B ** w.m, w.S @ w.R),
        relation("BS = SA", w.B @ w.S, w.S @ w.A),
        Check("R >= 0", w.R.is_integral() and w.R.is_nonnegative()),
        Check("S >= 0", w.S.is_integral() and w.S.is_nonnegative()),
    ))


def verify_relaxed_se(w: RelaxedSEWitness) -> Report:
    a, b = w.A.size, w.B.size
    _require_shape("R", w.R, (a, b))
    _require_shape("S", w.S, (b, a))
    _require_shape("T", w.T, (b, a))
    if w.m < 1 or w.k < 1:
        raise ValueError("lags must be positive")
    return Report((
        relation("A^m = RS", w.A ** w.m, w.R @ w.S),
        relation("AR = RB", w.A @ w.R, w.R @ w.B),
        relation("B^k = TR", w.B ** w.k, w.T @ w.R),
        Check("R, S, T integral", all(M.is_integral() for M in (w.R, w.S, w.T))),
    ))


def verify_sse_chain(steps: Sequence[SSEStep]) -> bool:
    """True iff every step satisfies ``A = RS`` and ``SR = B`` with nonnegative factors.

    Raises :class:`ValueError` when step ``i``'s ``B`` is not step ``i+1``'s ``A``.
    An empty chain is trivially valid.
    """
    for prev, nxt in zip(steps, steps[1:]):
        if prev.B != nxt.A:
            raise ValueError("steps do not chain: B of one step differs from A of the next")
    for st in steps:
        if st.R.shape != (st.A.size, st.B.size) or st.S.shape != (st.B.size, st.A.size):
            return False
        if not (st.R.is_nonnegative() and st.S.is_nonnegative()):
            return False
        if st.R @ st.S != st.A or st.S @ st.R != st.B:
            return False
    return True


def sse_to_se(steps: Sequence[SSEStep]) -> SEWitness:
    """Compose a chain of elementary steps into one shift equivalence of lag ``len(steps)``."""
    if not steps:
        raise ValueError("empty chain")
    w = SEWitness(steps[0].A, steps[0].B, steps[0].R, steps[0].S, 1)
    for st in steps[1:]:
        w = compose_se(w, SEWitness(st.A, st.B, st.R, st.S, 1))
    return w


def compose_se(first: SEWitness, second: SEWitness) -> SEWitness:
    """``(R1 R2, S2 S1, m1 + m2)`` witnesses ``A ~ C`` from ``A ~ B`` and ``B ~ C``."""
    if first.B != second.A:
        raise ValueError("witnesses do not compose")
    return SEWitness(first.A, second.B, first.R @ second.R, second.S @ first.S,
                     first.m + second.m)


def verify_unital(R, A, B) -> bool:
    """Does ``R`` send the order unit of ``G_A`` to the order unit of ``G_B``?

    That is, ``(B^t)^l (R^t 1 - 1) = 0`` for some ``l``; testing ``l = |B|``
    decides it.
    """
    A, B, R = as_essential(A), as_essential(B), Matrix(R)
    check_intertwiner(A, R, B)
    d = tuple(x - 1 for x in R.T.mul_vec((1,) * A.size))
    Bt = B.T
    for _ in range(B.size):
        d = Bt.mul_vec(d)
    return not any(d)


# --------------------------------------------------------------------------
# intertwiners and search

def _sylvester_operator(A: Matrix, B: Matrix) -> Matrix:
    # row-major vec(X) -> vec(AX - XB) for X of shape |A| x |B|
    p, q = A.nrows, B.nrows
    L = [[0] * (p * q) for _ in range(p * q)]
    for i in range(p):
        for j in range(q):
            row = L[i * q + j]
            for k in range(p):
                row[k * q + j] += A[i, k]
            for k in range(q):
                row[i * q + k] -= B[k, j]
    return Matrix(L)


def solve_intertwiners(A, B) -> list:
    """LLL-reduced Z-basis of the lattice ``{R integral : AR = RB}``."""
    A, B = Matrix(A), Matrix(B)
    if not (A.is_square() and B.is_square()):
        raise ShapeError("A and B must be square")
    kernel = integer_kernel(_sylvester_operator(A, B))
    return [Matrix.from_flat(A.nrows, B.nrows, v) for v in kernel]


def intertwiner_coordinates(R, basis: Sequence[Matrix]):
    """Integer coordinates of ``R`` in an intertwiner basis, or ``None``."""
    R = Matrix(R)
    if not basis:
        return () if R.is_zero() else None
    M = Matrix(zip(*(b.flatten() for b in basis)))
    sol = integer_solve(M, R.flatten())
    return None if sol is None else tuple(sol[0])


def _nonneg_combinations(basis, bound):
    """Yield ``(coeffs, R)`` with ``R = sum c_i basis_i >= 0`` in lex order of ``coeffs``.

    Coefficients range over ``[-bound, bound]``; branches that can no longer
    reach a nonnegative matrix are pruned.
    """
    if not basis:
        return
    shape = basis[0].shape
    vecs = [b.flatten() for b in basis]
    n, d = len(vecs[0]), len(vecs)
    slack = [[0] * n for _ in range(d + 1)]
    for i in range(d - 1, -1, -1):
        slack[i] = [s + bound * abs(x) for s, x in zip(slack[i + 1], vecs[i])]
    values = list(range(-bound, bound + 1))
    coeffs = [0] * d

    def rec(i, partial):
        if i == d:
            yield tuple(coeffs), Matrix.from_flat(shape[0], shape[1], partial)
            return
        for c in values:
            nxt = [p + c * x for p, x in zip(partial, vecs[i])]
            if all(p + s >= 0 for p, s in zip(nxt, slack[i + 1])):
                coeffs[i] = c
                yield from rec(i + 1, nxt)

    yield from rec(0, [0] * n)


def _solve_S(R, S_basis, Am, Bm, bound):
    """Nonnegative ``S`` in the ``B -> A`` intertwiner lattice with ``RS = A^m``, ``SR = B^m``."""
    if not S_basis:
        return
    cols = [(R @ T).flatten() + (T @ R).flatten() for T in S_basis]
    M = Matrix(zip(*cols))
    sol = integer_solve(M, Am.flatten() + Bm.flatten())
    if sol is None:
        return
    x, kernel = sol
    shape = S_basis[0].shape
    flats = [T.flatten() for T in S_basis]
    if not kernel:
        steps = [()]
    else:
        steps = itertools.product(range(-bound, bound + 1), repeat=len(kernel))
    for t in steps:
        d = [xi + sum(tj * kv[i] for tj, kv in zip(t, kernel)) for i, xi in enumerate(x)]
        flat = [sum(dj * f[e] for dj, f in zip(d, flats)) for e in range(len(flats[0]))]
        if all(v >= 0 for v in flat):
            yield t, Matrix.from_flat(shape[0], shape[1], flat)


def _iter_keyed(A, B, m_min, m_max, coeff_bound):
    R_basis = solve_intertwiners(A, B)
    S_basis = solve_intertwiners(B, A)
    for m in range(m_min, m_max + 1):
        Am, Bm = A ** m, B ** m
        for coeffs, R in _nonneg_combinations(R_basis, coeff_bound):
            if R.is_zero():
                continue
            for s_key, S in _solve_S(R, S_basis, Am, Bm, coeff_bound):
                yield (m, coeffs, s_key), SEWitness(A, B, R, S, m)


def iter_se(A, B, m_max: int, coeff_bound: int, m_min: int = 1) -> Iterator[SEWitness]:
    """Every shift equivalence found within the bounds, in lex order of ``(m, coefficients)``.

    ``R`` runs over nonnegative elements of the intertwiner lattice whose
    coordinates in the reduced basis from :func:`solve_intertwiners` lie in
    ``[-coeff_bound, coeff_bound]``.  For each ``R`` the remaining relations
    are linear in ``S``; ``S`` is solved for exactly in the ``B -> A``
    intertwiner lattice and kept when nonnegative.
    """
    if m_max < 1 or coeff_bound < 1:
        raise ValueError("bounds must be at least 1")
    A, B = as_essential(A), as_essential(B)
    for _, w in _iter_keyed(A, B, m_min, m_max, coeff_bound):
        yield w


@lru_cache(maxsize=8)
def _worker_S_basis(A_rows, B_rows):
    return solve_intertwiners(Matrix(B_rows), Matrix(A_rows))


def _solve_batch(A_rows, B_rows, m, coeff_bound, batch):
    # runs in a worker process: first R of the batch admitting an S
    A, B = Matrix(A_rows), Matrix(B_rows)
    S_basis = _worker_S_basis(A_rows, B_rows)
    Am, Bm = A ** m, B ** m
    for coeffs, R_rows in batch:
        R = Matrix(R_rows)
        for _, S in _solve_S(R, S_basis, Am, Bm, coeff_bound):
            return R_rows, S.rows
    return None


def _batched(iterable, size):
    it = iter(iterable)
    while chunk := list(itertools.islice(it, size)):
        yield chunk


def search_se(A, B, m_max: int, coeff_bound: int, jobs: int = 1,
              batch_size: int = 64) -> SEWitness | None:
    """First shift equivalence in the order of :func:`iter_se`, or ``None``.

    With ``jobs > 1`` the lex-ordered stream of candidate ``R`` is cut into
    contiguous batches that worker processes solve for ``S``.  Batches are
    consumed in order and the first batch with a hit decides, so the result
    is identical to the sequential one.
    """
    if m_max < 1 or coeff_bound < 1:
        raise ValueError("bounds must be at least 1")
    A, B = as_essential(A), as_essential(B)
    if jobs <= 1:
        return next(iter_se(A, B, m_max, coeff_bound), None)
    R_basis = solve_intertwiners(A, B)
    A_rows, B_rows = A.rows, B.rows
    with ProcessPoolExecutor(max_workers=jobs) as pool:
        for m in range(1, m_max + 1):
            candidates = (
                (c, R.rows) for c, R in _nonneg_combinations(R_basis, coeff_bound)
                if not R.is_zero()
            )
            batches = _batched(candidates, batch_size)
            while True:
                window = list(itertools.islice(batches, jobs))
                if not window:
                    break
                futures = [pool.submit(_solve_batch, A_rows, B_rows, m, coeff_bound, b)
                           for b in window]
                for f in futures:
                    hit = f.result()
                    if hit is not None:
                        for g in futures:
                            g.cancel()
                        return SEWitness(A, B, hit[0], hit[1], m)
    return None


# --------------------------------------------------------------------------
# matrices <-> order-preserving module maps

@dataclass(frozen=True)
class GradedHomSpec:
    """A module map ``G_A -> G_B`` given by the images of the generators ``[e_i, 0]``.

    ``images[i]`` is a class ``[v_i, l_i]`` over ``B`` with ``v_i >= 0``.
    """

    A: EssentialMatrix
    B: EssentialMatrix
    images: tuple

    def __post_init__(self):
        A, B = as_essential(self.A), as_essential(self.B)
        object.__setattr__(self, "A", A)
        object.__setattr__(self, "B", B)
        images = tuple(
            img if isinstance(img, DimClass) else DimClass(img[0], img[1], B)
            for img in self.images
        )
        if len(images) != A.size:
            raise ShapeError(f"{len(images)} generator images for a size-{A.size} source")
        for i, img in enumerate(images):
            if img.matrix != B:
                raise ShapeError(f"image {i} is not a class over B")
            if any(x < 0 for x in img.v):
                raise ValueError(f"image {i} needs a nonnegative representative")
        object.__setattr__(self, "images", images)

    def __call__(self, a: DimClass) -> DimClass:
        """Extend additively: ``[v, k] -> sum_i v_i x^-k images[i]``."""
        result = DimClass((0,) * self.B.size, a.k, self.B)
        for c, img in zip(a.v, self.images):
            result = result + DimClass(tuple(c * x for x in img.v), img.k + a.k, self.B)
        return result


@dataclass(frozen=True)
class LiftResult:
    """A nonnegative intertwiner ``R`` and shift ``r`` realising a module map.

    The map is ``[v, k] -> [R^t v, k + r]``, which is ``x^-r`` applied to the
    map induced by ``R``.
    """

    R: Matrix
    shift: int
    A: EssentialMatrix = field(repr=False)
    B: EssentialMatrix = field(repr=False)

    def __call__(self, a: DimClass) -> DimClass:
        return DimClass(self.R.T.mul_vec(a.v), a.k + self.shift, self.B)


def matrix_to_hom(R, A, B) -> GradedHomSpec:
    """The map ``[v, k] -> [R^t v, k]`` as generator images."""
    A, B, R = as_essential(A), as_essential(B), Matrix(R)
    check_intertwiner(A, R, B)
    if not (R.is_integral() and R.is_nonnegative()):
        raise ValueError("R must be a nonnegative integer matrix")
    return GradedHomSpec(A, B, tuple(DimClass(R.row(i), 0, B) for i in range(A.size)))


def lift_hom_to_matrix(spec: GradedHomSpec) -> LiftResult:
    """Recover a nonnegative intertwiner from generator images.

    With ``[v_i, l_i]`` the image of ``[e_i, 0]``, put ``s = sum l_j`` and
    stack the columns ``(B^t)^(s - l_i) v_i`` into ``R'^t``.  The map is a
    module homomorphism exactly when some ``(B^t)^l`` equalises
    ``R'^t A^t`` and ``B^t R'^t``; kernels of powers of ``B^t`` stabilise by
    ``l = |B|``, so only ``l <= |B|`` is tried.  The least such ``l`` gives
    ``R^t = (B^t)^l R'^t`` and shift ``r = s + l``.

    Raises
    ------
    NotAHomomorphismError
        If no ``l <= |B|`` works, i.e. the images are not compatible with the
        ``x``-action.
    """
    A, B = spec.A, spec.B
    Bt = B.T
    levels = [img.k for img in spec.images]
    s = sum(levels)
    cols = []
    for img, li in zip(spec.images, levels):
        v = img.v
        for _ in range(s - li):
            v = Bt.mul_vec(v)
        cols.append(v)
    Rp = Matrix(cols)  # row i is column i of R'^t
    D = Rp.T @ A.T - Bt @ Rp.T
    for ell in range(B.size + 1):
        if D.is_zero():
            R = Rp @ (B ** ell)
            return LiftResult(R, s + ell, A, B)
        D = Bt @ D
    raise NotAHomomorphismError(
        "generator images are not compatible with the x-action"
    )


def generator_images(lift: LiftResult) -> list:
    return [lift(generator_class(lift.A, i)) for i in range(lift.A.size)]
