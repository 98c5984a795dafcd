"""Based bimodules over vertex sets and the module form of shift equivalence.

An :class:`EdgeSet` between vertex sets ``V`` and ``W`` is the combinatorial
shadow of the ``kV``-``kW`` bimodule spanned by its edges; the edge
``(v, w, i)`` is the ``i``-th of the ``M[v, w]`` edges from ``v`` to ``w``.
Tensor products over the middle vertex algebra are spanned by composable
edge sequences, so a :class:`BasedBimodule` is simply a composable tuple of
edge sets with paths as its basis.

Convention: iterated tensor products are always flattened.  ``(X (x) Y) (x) Z``
and ``X (x) (Y (x) Z)`` are the *same* object, basis elements are paths, and
every rebracketing isomorphism (in particular the map moving the last tensor
factor to the right, used in the associator diagrams) is the identity.
Within a ``(v, w)`` block paths are ordered lexicographically by their edge
sequence.

Bimodule maps are stored blockwise as exact rational matrices acting on
coordinate columns; the ground field is Q throughout.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from typing import Mapping, Sequence

from .dimgroup import DimClass, as_essential, check_intertwiner, x_action
from .exceptions import ShapeError
from .linalg import Matrix, det, inverse
from .report import Check, Report, relation
from .shift import verify_unital

__all__ = [
    "EdgeSet",
    "BasedBimodule",
    "BimoduleMap",
    "ModuleSEData",
    "K0Action",
    "as_bimodule",
    "tensor",
    "tensor_power",
    "tensor_map",
    "identity_map",
    "lex_pairing",
    "permutation_map",
    "build_sigma",
    "bridging_K0_action",
    "lex_module_se",
    "relabel_module_se",
    "verify_module_se",
    "verify_aligned",
    "verify_unitally_aligned",
]


@dataclass(frozen=True)
class EdgeSet:
    """Finite set of edges from ``source_vertices`` to ``target_vertices``.

    ``matrix[v, w]`` counts the edges ``v -> w``; it is the nonnegative
    integer matrix that the edge set encodes.
    """

    source_vertices: tuple
    target_vertices: tuple
    matrix: Matrix

    def __post_init__(self):
        M = Matrix(self.matrix)
        object.__setattr__(self, "matrix", M)
        object.__setattr__(self, "source_vertices", tuple(self.source_vertices))
        object.__setattr__(self, "target_vertices", tuple(self.target_vertices))
        if M.shape != (len(self.source_vertices), len(self.target_vertices)):
            raise ShapeError(f"matrix shape {M.shape} does not match the vertex sets")
        if not (M.is_integral() and M.is_nonnegative()):
            raise ValueError("edge counts must be nonnegative integers")

    @classmethod
    def from_matrix(cls, M, source=None, target=None) -> EdgeSet:
        M = Matrix(M)
        source = tuple(range(M.nrows)) if source is None else source
        target = tuple(range(M.ncols)) if target is None else target
        return cls(source, target, M)

    def edges(self) -> list:
        return [
            (v, w, i)
            for v in range(self.matrix.nrows)
            for w in range(self.matrix.ncols)
            for i in range(self.matrix[v, w])
        ]


@dataclass(frozen=True)
class BasedBimodule:
    """Flattened tensor product of composable edge sets; the basis is paths."""

    factors: tuple

    def __post_init__(self):
        factors = tuple(self.factors)
        if not factors:
            raise ValueError("a based bimodule needs at least one factor")
        for a, b in zip(factors, factors[1:]):
            if a.target_vertices != b.source_vertices:
                raise ShapeError("factors are not composable: vertex sets differ")
        object.__setattr__(self, "factors", factors)

    @property
    def source_vertices(self) -> tuple:
        return self.factors[0].source_vertices

    @property
    def target_vertices(self) -> tuple:
        return self.factors[-1].target_vertices

    @property
    def length(self) -> int:
        return len(self.factors)

    @cached_property
    def _blocks(self) -> dict:
        blocks: dict = {}
        out = [
            [[(v, w, i) for w in range(f.matrix.ncols) for i in range(f.matrix[v, w])]
             for v in range(f.matrix.nrows)]
            for f in self.factors
        ]

        def extend(path, depth):
            if depth == len(self.factors):
                blocks.setdefault((path[0][0], path[-1][1]), []).append(tuple(path))
                return
            for e in out[depth][path[-1][1]]:
                path.append(e)
                extend(path, depth + 1)
                path.pop()

        for v in range(len(self.source_vertices)):
            for e in out[0][v]:
                extend([e], 1)
        return blocks

    @cached_property
    def _index(self) -> dict:
        return {key: {p: i for i, p in enumerate(paths)} for key, paths in self._blocks.items()}

    def block(self, v: int, w: int) -> list:
        """Basis paths from vertex ``v`` to vertex ``w`` in lex order."""
        return self._blocks.get((v, w), [])

    def dim(self, v: int, w: int) -> int:
        return len(self.block(v, w))

    def index(self, v: int, w: int, path) -> int:
        return self._index[(v, w)][path]

    def block_keys(self) -> list:
        return sorted(self._blocks)

    def count_matrix(self) -> Matrix:
        """Block dimensions, i.e. the product of the factor matrices."""
        M = self.factors[0].matrix
        for f in self.factors[1:]:
            M = M @ f.matrix
        return M

    def label(self, v: int, w: int) -> str:
        return f"({self.source_vertices[v]}, {self.target_vertices[w]})"


def as_bimodule(X) -> BasedBimodule:
    if isinstance(X, BasedBimodule):
        return X
    if isinstance(X, EdgeSet):
        return BasedBimodule((X,))
    raise TypeError(f"expected an EdgeSet or BasedBimodule, got {type(X).__name__}")


def tensor(M, N) -> BasedBimodule:
    """``M (x) N`` over the shared middle vertex set."""
    M, N = as_bimodule(M), as_bimodule(N)
    if M.target_vertices != N.source_vertices:
        raise ShapeError("tensor product needs M's target vertices to be N's source vertices")
    return BasedBimodule(M.factors + N.factors)


def tensor_power(E: EdgeSet, m: int) -> BasedBimodule:
    if m < 1:
        raise ValueError("tensor power must be positive")
    return BasedBimodule((E,) * m)


@dataclass(frozen=True)
class BimoduleMap:
    """Bimodule map given by one rational matrix per ``(v, w)`` block.

    ``blocks[(v, w)]`` has shape ``(codomain.dim(v, w), domain.dim(v, w))``
    and acts on coordinate columns.  Blocks exist exactly where the domain
    block is nonzero.
    """

    domain: BasedBimodule
    codomain: BasedBimodule
    blocks: Mapping = field(compare=True)

    def __post_init__(self):
        dom, cod = as_bimodule(self.domain), as_bimodule(self.codomain)
        object.__setattr__(self, "domain", dom)
        object.__setattr__(self, "codomain", cod)
        if (dom.source_vertices, dom.target_vertices) != (cod.source_vertices, cod.target_vertices):
            raise ShapeError("domain and codomain live over different vertex sets")
        blocks = {k: Matrix(b) for k, b in dict(self.blocks).items()}
        if set(blocks) != set(dom.block_keys()):
            raise ShapeError("blocks must be given exactly for the nonzero domain blocks")
        for (v, w), b in blocks.items():
            expected = (cod.dim(v, w), dom.dim(v, w))
            if b.shape != expected:
                raise ShapeError(f"block {dom.label(v, w)} has shape {b.shape}, expected {expected}")
        object.__setattr__(self, "blocks", blocks)

    __hash__ = None

    def failing_block(self):
        """First block (in key order) that is not square and invertible, or ``None``."""
        for key in sorted(set(self.domain.block_keys()) | set(self.codomain.block_keys())):
            if self.domain.dim(*key) != self.codomain.dim(*key):
                return key
            b = self.blocks[key]
            if det(b) == 0:
                return key
        return None

    def is_isomorphism(self) -> bool:
        return self.failing_block() is None

    def compose(self, other: BimoduleMap) -> BimoduleMap:
        """``self o other``."""
        if other.codomain != self.domain:
            raise ShapeError("cannot compose: codomain and domain differ")
        return BimoduleMap(other.domain, self.codomain,
                           {k: self.blocks[k] @ b for k, b in other.blocks.items()})

    __matmul__ = compose

    def inverse(self) -> BimoduleMap:
        key = self.failing_block()
        if key is not None:
            raise ValueError(f"block {self.domain.label(*key)} is not invertible")
        return BimoduleMap(self.codomain, self.domain,
                           {k: inverse(b) for k, b in self.blocks.items()})


def identity_map(M) -> BimoduleMap:
    M = as_bimodule(M)
    return BimoduleMap(M, M, {k: Matrix.identity(M.dim(*k)) for k in M.block_keys()})


def permutation_map(domain, codomain, perms: Mapping) -> BimoduleMap:
    """Basis bijection: domain element ``i`` of block ``k`` goes to codomain element ``perms[k][i]``."""
    domain, codomain = as_bimodule(domain), as_bimodule(codomain)
    blocks = {}
    for key in domain.block_keys():
        n = domain.dim(*key)
        perm = list(perms[key])
        if sorted(perm) != list(range(n)) or codomain.dim(*key) != n:
            raise ShapeError(f"block {domain.label(*key)} has no valid permutation")
        blocks[key] = Matrix([[int(perm[j] == i) for j in range(n)] for i in range(n)])
    return BimoduleMap(domain, codomain, blocks)


def lex_pairing(domain, codomain, pairing: Mapping | None = None) -> BimoduleMap:
    """Match the lex-ordered bases of equal-dimensional blocks.

    ``pairing`` overrides the bijection for selected blocks (see
    :func:`permutation_map` for the format).
    """
    domain, codomain = as_bimodule(domain), as_bimodule(codomain)
    if domain.count_matrix() != codomain.count_matrix():
        raise ShapeError("block dimensions differ, no basis pairing exists")
    pairing = dict(pairing or {})
    perms = {k: pairing.get(k, range(domain.dim(*k))) for k in domain.block_keys()}
    return permutation_map(domain, codomain, perms)


def tensor_map(f: BimoduleMap, g: BimoduleMap) -> BimoduleMap:
    """``f (x) g`` on the flattened path bases."""
    dom = tensor(f.domain, g.domain)
    cod = tensor(f.codomain, g.codomain)
    split_dom, split_cod = f.domain.length, f.codomain.length
    blocks = {}
    for (v, w) in dom.block_keys():
        rows = [[0] * dom.dim(v, w) for _ in range(cod.dim(v, w))]
        for col, path in enumerate(dom.block(v, w)):
            p, q = path[:split_dom], path[split_dom:]
            u = p[-1][1]
            fb, gb = f.blocks[(v, u)], g.blocks[(u, w)]
            ip, iq = f.domain.index(v, u, p), g.domain.index(u, w, q)
            f_cod, g_cod = f.codomain.block(v, u), g.codomain.block(u, w)
            for i1, p2 in enumerate(f_cod):
                a = fb[i1, ip]
                if not a:
                    continue
                for i2, q2 in enumerate(g_cod):
                    b = gb[i2, iq]
                    if b:
                        rows[cod.index(v, w, p2 + q2)][col] += a * b
        blocks[(v, w)] = Matrix(rows)
    return BimoduleMap(dom, cod, blocks)


def build_sigma(A, R_edges: EdgeSet, B, pairing: Mapping | None = None) -> BimoduleMap:
    """Specified conjugacy ``kE (x) kR -> kR (x) kF`` from ``AR = RB``.

    Both sides have ``(AR)[v, w] = (RB)[v, w]`` basis paths in block
    ``(v, w)``; by default the k-th path on the left goes to the k-th on the
    right.  Any bijection is admissible, so ``pairing`` may override it.
    """
    A, B = as_essential(A), as_essential(B)
    check_intertwiner(A, R_edges.matrix, B)
    E = EdgeSet(R_edges.source_vertices, R_edges.source_vertices, A)
    F = EdgeSet(R_edges.target_vertices, R_edges.target_vertices, B)
    return lex_pairing(tensor(E, R_edges), tensor(R_edges, F), pairing)


@dataclass(frozen=True)
class K0Action:
    """Action of the bridging bimodule of ``R`` on graded K_0 generators.

    The generator ``[v L(E)(n)]`` goes to ``sum_w R[v, w] [w L(F)(n)]``.
    """

    R: Matrix
    A: Matrix = field(repr=False)
    B: Matrix = field(repr=False)

    def terms(self, v: int) -> dict:
        """Multiplicity of each target generator in the image of generator ``v``."""
        return {w: c for w, c in enumerate(self.R.row(v)) if c}

    def __call__(self, v: int, shift: int = 0) -> DimClass:
        """Image of generator ``v`` shifted by ``shift``, as a class in ``G_B``."""
        vec = [0] * self.B.nrows
        for w, c in self.terms(v).items():
            vec[w] += c
        return x_action(DimClass(tuple(vec), 0, self.B), shift)


def bridging_K0_action(R, A, B) -> K0Action:
    A, B, R = as_essential(A), as_essential(B), Matrix(R)
    check_intertwiner(A, R, B)
    return K0Action(R, A, B)


# --------------------------------------------------------------------------
# module shift equivalence

@dataclass(frozen=True)
class ModuleSEData:
    """Edge sets ``G: E^0 -> F^0``, ``H: F^0 -> E^0``, lag ``m`` and the four isomorphisms.

    ``omega_E: kG (x) kH -> (kE)^m``, ``omega_F: kH (x) kG -> (kF)^m``,
    ``sigma_G: kE (x) kG -> kG (x) kF``, ``sigma_H: kF (x) kH -> kH (x) kE``.
    """

    E: EdgeSet
    F: EdgeSet
    G: EdgeSet
    H: EdgeSet
    m: int
    omega_E: BimoduleMap
    omega_F: BimoduleMap
    sigma_G: BimoduleMap
    sigma_H: BimoduleMap

    __hash__ = None


def lex_module_se(A, B, R, S, m: int = 1, *, sigma_G_pairing=None, sigma_H_pairing=None,
                  omega_E_pairing=None, omega_F_pairing=None) -> ModuleSEData:
    """Module shift-equivalence data for ``(R, S, m)`` built from lex pairings.

    Needs the counting relations ``RS = A^m``, ``SR = B^m``, ``AR = RB`` and
    ``BS = SA``.  The optional pairings override single blocks.
    """
    A, B = as_essential(A), as_essential(B)
    E = EdgeSet.from_matrix(A)
    F = EdgeSet.from_matrix(B)
    G = EdgeSet(E.source_vertices, F.source_vertices, Matrix(R))
    H = EdgeSet(F.source_vertices, E.source_vertices, Matrix(S))
    return ModuleSEData(
        E, F, G, H, m,
        omega_E=lex_pairing(tensor(G, H), tensor_power(E, m), omega_E_pairing),
        omega_F=lex_pairing(tensor(H, G), tensor_power(F, m), omega_F_pairing),
        sigma_G=lex_pairing(tensor(E, G), tensor(G, F), sigma_G_pairing),
        sigma_H=lex_pairing(tensor(F, H), tensor(H, E), sigma_H_pairing),
    )


def relabel_module_se(data: ModuleSEData, tau_G: BimoduleMap, tau_H: BimoduleMap) -> ModuleSEData:
    """Transport the data along automorphisms ``tau_G`` of ``kG`` and ``tau_H`` of ``kH``."""
    idE, idF = identity_map(data.E), identity_map(data.F)
    iG, iH = tau_G.inverse(), tau_H.inverse()
    return ModuleSEData(
        data.E, data.F, data.G, data.H, data.m,
        omega_E=data.omega_E @ tensor_map(iG, iH),
        omega_F=data.omega_F @ tensor_map(iH, iG),
        sigma_G=tensor_map(tau_G, idF) @ data.sigma_G @ tensor_map(idE, iG),
        sigma_H=tensor_map(tau_H, idE) @ data.sigma_H @ tensor_map(idF, iH),
    )


def _iso_check(name, f: BimoduleMap, domain, codomain) -> Check:
    if f.domain != domain or f.codomain != codomain:
        return Check(name, False, detail="domain or codomain is not the expected bimodule")
    key = f.failing_block()
    if key is not None:
        return Check(name, False, detail=f"block {domain.label(*key)} is not invertible")
    return Check(name, True)


def verify_module_se(data: ModuleSEData) -> Report:
    """Check block dimensions and invertibility of the four structure maps.

    The counting relations ``GH = A^m``, ``HG = B^m``, ``AG = GB`` and
    ``BH = HA`` are reported first; when one fails the map checks are
    reported as skipped.
    """
    E, F, G, H, m = data.E, data.F, data.G, data.H, data.m
    A, B = E.matrix, F.matrix
    counting = (
        relation("GH = A^m", G.matrix @ H.matrix, A ** m),
        relation("HG = B^m", H.matrix @ G.matrix, B ** m),
        relation("AG = GB", A @ G.matrix, G.matrix @ B),
        relation("BH = HA", B @ H.matrix, H.matrix @ A),
    )
    names = ("omega_E", "omega_F", "sigma_G", "sigma_H")
    if not all(c.ok for c in counting):
        return Report(counting + tuple(Check(n, False, detail="skipped") for n in names))
    maps = (
        _iso_check("omega_E", data.omega_E, tensor(G, H), tensor_power(E, m)),
        _iso_check("omega_F", data.omega_F, tensor(H, G), tensor_power(F, m)),
        _iso_check("sigma_G", data.sigma_G, tensor(E, G), tensor(G, F)),
        _iso_check("sigma_H", data.sigma_H, tensor(F, H), tensor(H, E)),
    )
    return Report(counting + maps)


def _compare(name, top: BimoduleMap, bottom: BimoduleMap) -> Check:
    for key in top.domain.block_keys():
        t, b = top.blocks[key], bottom.blocks[key]
        if t != b:
            return Check(name, False, residual=t - b,
                         detail=f"block {top.domain.label(*key)} differs")
    return Check(name, True)


def verify_aligned(data: ModuleSEData) -> Report:
    """Module shift equivalence plus both associator diagrams.

    For the E-side diagram the two composites
    ``(omega_E (x) id)(id (x) sigma_H)(sigma_G (x) id)`` and
    ``nu (id (x) omega_E)`` are compared block by block; the F-side is the
    mirror image.  With flattened path bases ``nu`` is the identity.
    """
    base = verify_module_se(data)
    if not base.ok:
        return base + Report((Check("associator E", False, detail="skipped"),
                              Check("associator F", False, detail="skipped")))
    E, F, G, H = data.E, data.F, data.G, data.H
    idE, idF, idG, idH = (identity_map(X) for X in (E, F, G, H))
    top_E = tensor_map(data.omega_E, idE) @ tensor_map(idG, data.sigma_H) @ tensor_map(data.sigma_G, idH)
    bottom_E = tensor_map(idE, data.omega_E)
    top_F = tensor_map(data.omega_F, idF) @ tensor_map(idH, data.sigma_G) @ tensor_map(data.sigma_H, idG)
    bottom_F = tensor_map(idF, data.omega_F)
    # nu is the identity on flattened bases, so it is not composed explicitly
    return base + Report((_compare("associator E", top_E, bottom_E),
                          _compare("associator F", top_F, bottom_F)))


def verify_unitally_aligned(R, S, data: ModuleSEData) -> Report:
    """Aligned module shift equivalence on the edge sets of ``R`` and ``S``, one of them unital."""
    R, S = Matrix(R), Matrix(S)
    A, B = data.E.matrix, data.F.matrix
    checks = [
        Check("G is the edge set of R", data.G.matrix == R),
        Check("H is the edge set of S", data.H.matrix == S),
    ]
    aligned = verify_aligned(data)
    unital_R = _unital_or_false(R, A, B)
    unital_S = _unital_or_false(S, B, A)
    detail = "R is unital" if unital_R else ("S is unital" if unital_S else "neither R nor S is unital")
    return Report(tuple(checks)) + aligned + Report((Check("unital", unital_R or unital_S, detail=detail),))


def _unital_or_false(R, A, B) -> bool:
    if R.shape != (A.nrows, B.nrows) or A @ R != R @ B:
        return False
    return verify_unital(R, A, B)
