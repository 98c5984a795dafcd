"""Directed graphs, the Cuntz splice and graded K-theory of Leavitt path algebras.

For a finite graph ``E`` without sinks, graded K_0 of ``L_k(E)`` is the
dimension group of the adjacency matrix, with the vertex projections
``[v L_k(E)]`` mapped to ``[e_v, 0]``.  A unital graded homomorphism
``L_k(E) -> L_k(F)`` yields a nonzero nonnegative ``R`` with ``AR = RB``, so
an empty nonnegative cone of intertwiners rules such homomorphisms out.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence, Union

from .dimgroup import EssentialMatrix, as_essential, generator_class, order_unit
from .exceptions import MatrixMismatchError, ParseError, ShapeError, SinkError
from .linalg import Matrix, nonneg_feasible
from .shift import solve_intertwiners

__all__ = [
    "DirectedGraph",
    "NoUnitalHom",
    "InconclusiveWithCandidate",
    "ZModClass",
    "Equal",
    "NotEqualWithinBound",
    "adjacency",
    "graph_from_matrix",
    "cuntz_splice",
    "unital_hom_obstruction",
    "k0gr_generators",
    "zmod_equal",
    "zmod_intertwiner_check",
    "parse_graph",
    "format_graph",
]


@dataclass(frozen=True)
class DirectedGraph:
    """Vertices ``0..n-1`` (with display labels) and a list of ``(source, target)`` edges."""

    vertices: tuple
    edges: tuple

    def __post_init__(self):
        object.__setattr__(self, "vertices", tuple(self.vertices))
        edges = tuple((int(s), int(t)) for s, t in self.edges)
        n = len(self.vertices)
        for s, t in edges:
            if not (0 <= s < n and 0 <= t < n):
                raise ValueError(f"edge ({s}, {t}) uses an unknown vertex")
        object.__setattr__(self, "edges", edges)

    @property
    def size(self) -> int:
        return len(self.vertices)


def adjacency(g: DirectedGraph) -> EssentialMatrix:
    """``A[v, w]`` = number of edges ``v -> w``; raises :class:`SinkError` on a sink."""
    n = g.size
    rows = [[0] * n for _ in range(n)]
    for s, t in g.edges:
        rows[s][t] += 1
    for v, row in enumerate(rows):
        if not any(row):
            raise SinkError(g.vertices[v])
    return EssentialMatrix(rows)


def graph_from_matrix(A) -> DirectedGraph:
    """Graph with ``A[v, w]`` parallel edges from ``v`` to ``w``."""
    A = Matrix(A)
    if not (A.is_square() and A.is_integral() and A.is_nonnegative()):
        raise ValueError("adjacency must be a square nonnegative integer matrix")
    edges = [(v, w) for v in range(A.nrows) for w in range(A.ncols) for _ in range(A[v, w])]
    return DirectedGraph(tuple(range(A.nrows)), tuple(edges))


def cuntz_splice(A, at_vertex: int) -> EssentialMatrix:
    """Attach the two-vertex Cuntz splice at a vertex carrying a loop.

    The new vertices ``v1 = n`` and ``v2 = n + 1`` get edges
    ``v <-> v1``, ``v1 <-> v2`` and a loop at each.

    >>> cuntz_splice([[2]], 0).tolist()
    [[2, 1, 0], [1, 1, 1], [0, 1, 1]]
    """
    A = as_essential(A)
    n = A.size
    if not 0 <= at_vertex < n:
        raise IndexError(f"vertex {at_vertex} out of range")
    if A[at_vertex, at_vertex] < 1:
        raise ValueError(f"vertex {at_vertex} has no loop")
    rows = [list(r) + [0, 0] for r in A.rows] + [[0] * (n + 2) for _ in range(2)]
    v, v1, v2 = at_vertex, n, n + 1
    for i, j in ((v, v1), (v1, v), (v1, v1), (v1, v2), (v2, v1), (v2, v2)):
        rows[i][j] = 1
    return EssentialMatrix(rows)


@dataclass(frozen=True)
class NoUnitalHom:
    """The only nonnegative intertwiner is zero, so no unital graded homomorphism exists."""

    intertwiner_basis: tuple = field(default=(), repr=False)
    verdict = "NoUnitalHom"


@dataclass(frozen=True)
class InconclusiveWithCandidate:
    """A nonzero nonnegative intertwiner exists; this does not prove a homomorphism does."""

    R: Matrix
    intertwiner_basis: tuple = field(default=(), repr=False)
    verdict = "InconclusiveWithCandidate"


def unital_hom_obstruction(A, B) -> Union[NoUnitalHom, InconclusiveWithCandidate]:
    """Look for a nonzero nonnegative ``R`` with ``AR = RB``.

    Works over the rational span of the intertwiner lattice: a nonnegative
    rational solution scales to an integral one.

    >>> unital_hom_obstruction([[2]], cuntz_splice([[2]], 0)).verdict
    'NoUnitalHom'
    """
    A, B = as_essential(A), as_essential(B)
    basis = tuple(solve_intertwiners(A, B))
    x = nonneg_feasible([b.flatten() for b in basis]) if basis else None
    if x is None:
        return NoUnitalHom(basis)
    return InconclusiveWithCandidate(Matrix.from_flat(A.size, B.size, x), basis)


def k0gr_generators(g: DirectedGraph) -> list:
    """Vertex classes ``[e_v, 0]``; their sum is the order unit."""
    A = adjacency(g)
    return [generator_class(A, v) for v in range(A.size)]


# --------------------------------------------------------------------------
# Z/mZ-graded variant

@dataclass(frozen=True)
class ZModClass:
    """Pair ``(v, k mod m)`` under ``(v,k) ~ (w,l)`` iff ``(A^t)^p v = (A^t)^q w`` with ``p + k = q + l mod m``."""

    v: tuple
    k: int
    modulus: int
    matrix: EssentialMatrix = field(repr=False)

    def __post_init__(self):
        if self.modulus < 1:
            raise ValueError("modulus must be positive")
        A = as_essential(self.matrix)
        object.__setattr__(self, "matrix", A)
        object.__setattr__(self, "v", tuple(int(x) for x in self.v))
        object.__setattr__(self, "k", self.k % self.modulus)
        if len(self.v) != A.size:
            raise ShapeError("vector length does not match the matrix")


@dataclass(frozen=True)
class Equal:
    p: int
    q: int
    verdict = "Equal"


@dataclass(frozen=True)
class NotEqualWithinBound:
    bound: int
    verdict = "NotEqualWithinBound"


def zmod_equal(a: ZModClass, b: ZModClass, bound: int | None = None):
    """Search ``p, q <= bound`` (default ``2(|A| + m)``) ordered by ``(p + q, p)``.

    A miss is only evidence: no bound making the search complete is known.
    """
    if a.modulus != b.modulus:
        raise ValueError("classes have different moduli")
    if a.matrix != b.matrix:
        raise MatrixMismatchError("classes are over different matrices")
    m, At = a.modulus, a.matrix.T
    if bound is None:
        bound = 2 * (a.matrix.size + m)
    pa, pb = [a.v], [b.v]
    for _ in range(bound):
        pa.append(At.mul_vec(pa[-1]))
        pb.append(At.mul_vec(pb[-1]))
    for s in range(2 * bound + 1):
        for p in range(max(0, s - bound), min(s, bound) + 1):
            q = s - p
            if (p + a.k - q - b.k) % m == 0 and pa[p] == pb[q]:
                return Equal(p, q)
    return NotEqualWithinBound(bound)


def zmod_intertwiner_check(R, A, B, m: int, k: int) -> bool:
    """Exact test of ``A R B^(k m) = B R``.

    Both sides only type-check when ``A`` and ``B`` have the same size.
    """
    A, B, R = as_essential(A), as_essential(B), Matrix(R)
    if A.size != B.size or R.shape != (A.size, B.size):
        raise ShapeError("A R B^(km) = B R needs square R with |A| = |B|")
    if k < 0 or m < 1:
        raise ValueError("need k >= 0 and m >= 1")
    return A @ R @ B ** (k * m) == B @ R


def zmod_intertwiner_search(R, A, B, m: int, bound: int | None = None):
    """Least ``k <= bound`` with ``A R B^(k m) = B R``, or ``None``.

    No bound on ``k`` is known, so ``None`` only means none was found.  The
    default bound is ``2(|A| + m)``.
    """
    bound = 2 * (Matrix(A).nrows + m) if bound is None else bound
    return next((k for k in range(bound + 1) if zmod_intertwiner_check(R, A, B, m, k)), None)


# --------------------------------------------------------------------------
# text formats

def parse_graph(text: str) -> DirectedGraph:
    """Read ``vertices N`` + ``edge s t`` lines, or ``matrix N`` + N rows.

    Blank lines and ``#`` comments are ignored.
    """
    lines = [ln.split("#", 1)[0].split() for ln in text.splitlines()]
    lines = [ln for ln in lines if ln]
    if not lines:
        raise ParseError("empty graph description")
    head = lines[0]
    try:
        if head[0] == "vertices" and len(head) == 2:
            n = int(head[1])
            edges = []
            for ln in lines[1:]:
                if ln[0] != "edge" or len(ln) != 3:
                    raise ParseError(f"expected 'edge <src> <dst>', got {' '.join(ln)!r}")
                edges.append((int(ln[1]), int(ln[2])))
            return DirectedGraph(tuple(range(n)), tuple(edges))
        if head[0] == "matrix" and len(head) == 2:
            n = int(head[1])
            rows = [[int(x) for x in ln] for ln in lines[1:]]
            if len(rows) != n or any(len(r) != n for r in rows):
                raise ParseError(f"expected {n} rows of {n} integers")
            if any(x < 0 for r in rows for x in r):
                raise ParseError("negative edge count")
            return graph_from_matrix(rows)
    except ParseError:
        raise
    except ValueError as exc:
        raise ParseError(str(exc)) from exc
    raise ParseError(f"unrecognised header {' '.join(head)!r}")


def format_graph(g: DirectedGraph) -> str:
    lines = [f"vertices {g.size}"] + [f"edge {s} {t}" for s, t in g.edges]
    return "\n".join(lines) + "\n"
