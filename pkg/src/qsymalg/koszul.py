"""Quadratic duality, the Koszul complex of a quadratic algebra and Tor.

Chain spaces are stored in ambient coordinates: a vector of
K_i (x) A_{n-i} is a dict keyed by (word of length i, normal word).
"""
from __future__ import annotations

from dataclasses import dataclass, field

from .exactalg import ONE, SparseMatrix, kernel_basis, rank, row_reduce
from .freeword import FreeElement, GradedSubspace, ideal_component, span_reduce, words_of_degree
from .quadratic import QuadraticAlgebra, SpecError, _acc, graded_dim, normal_words

__all__ = [
    "DualAlgebra",
    "KoszulComplexSlice",
    "GradedModule",
    "dual_algebra",
    "hilbert_identity_check",
    "koszul_space",
    "koszul_slice",
    "homology_dims",
    "koszul_report",
    "tor_dims",
    "free_module",
    "trivial_module",
    "cyclic_quotient",
]


@dataclass
class DualAlgebra:
    algebra: QuadraticAlgebra
    source: QuadraticAlgebra
    pairing: str = "plain"

    def graded_dim(self, n):
        return graded_dim(self.algebra, n)


def dual_algebra(A: QuadraticAlgebra) -> DualAlgebra:
    """A^! with relations I^perp under (a(x)b)(u(x)v) = a(u) b(v)."""
    d = A.ngens
    words = words_of_degree(d, 2)
    col = {w: j for j, w in enumerate(words)}
    ent = {}
    for i, r in enumerate(A.relations.basis):
        for w, c in r.terms.items():
            ent[(i, col[w])] = c
    M = SparseMatrix(A.relations.dim, len(words), ent)
    perp = [FreeElement({words[j]: c for j, c in enumerate(v) if not c.is_zero()}) for v in kernel_basis(M)]
    names = [f"{g}*" for g in A.names]
    dual = QuadraticAlgebra(names, perp, name=f"dual({A.name})")
    return DualAlgebra(dual, A)


@dataclass
class HilbertCheck:
    holds: bool
    coefficients: list
    dims: list
    dual_dims: list
    failing_degree: int | None = None

    def to_dict(self):
        return {
            "holds": self.holds,
            "coefficients": self.coefficients,
            "dims": self.dims,
            "dual_dims": self.dual_dims,
            "failing_degree": self.failing_degree,
        }


def hilbert_identity_check(A, N, dual=None) -> HilbertCheck:
    """Coefficients of h_A(z) h_{A^!}(-z) through z^N."""
    dual = dual or dual_algebra(A)
    h = [graded_dim(A, i) for i in range(N + 1)]
    h_dual = [dual.graded_dim(i) for i in range(N + 1)]
    coeffs = [sum(h[i] * h_dual[m - i] * (-1) ** (m - i) for i in range(m + 1)) for m in range(N + 1)]
    bad = [m for m, c in enumerate(coeffs) if c != (1 if m == 0 else 0)]
    return HilbertCheck(not bad, coeffs, h, h_dual, bad[0] if bad else None)


def koszul_space(A, i, dual=None) -> GradedSubspace:
    """K_i = intersection of V^a (x) I (x) V^b inside V^(x)i, i.e. (A^!_i)^*."""
    d = A.ngens
    if i == 0:
        return GradedSubspace(d, 0, [FreeElement.one()])
    if i == 1:
        return GradedSubspace(d, 1, [FreeElement.word((g,)) for g in range(d)])
    if i == 2:
        return A.relations
    dual = dual or dual_algebra(A)
    perp = ideal_component(dual.algebra.relations, i)
    words = words_of_degree(d, i)
    col = {w: j for j, w in enumerate(words)}
    ent = {}
    for r, b in enumerate(perp.basis):
        for w, c in b.terms.items():
            ent[(r, col[w])] = c
    M = SparseMatrix(perp.dim, len(words), ent)
    basis = [FreeElement({words[j]: c for j, c in enumerate(v) if not c.is_zero()}) for v in kernel_basis(M)]
    return span_reduce(basis, i, d)


def _koszul_spaces(A, top, dual):
    out = []
    for i in range(top + 1):
        K = koszul_space(A, i, dual)
        if K.dim == 0:
            break
        out.append(K)
    return out


@dataclass
class KoszulComplexSlice:
    n: int
    side: str
    chain_dims: list
    ranks: list  # ranks[i] = rank of delta_i : C_i -> C_{i-1}; ranks[0] = 0
    square_zero: bool
    differentials: list = field(default_factory=list, repr=False)


def _apply(rw, vec, side):
    """Ambient Koszul differential on {(word, normal word): coeff}."""
    out = {}
    for (w, m), c in vec.items():
        if side == "right":
            prod = rw._nf_word((w[-1],) + m)
            rest = w[:-1]
            for m2, c2 in prod.items():
                _acc(out, (rest, m2), c * c2)
        else:
            prod = rw._nf_word(m + (w[0],))
            rest = w[1:]
            for m2, c2 in prod.items():
                _acc(out, (rest, m2), c * c2)
    return out


def koszul_slice(A: QuadraticAlgebra, n: int, side="right", order=None, dual=None) -> KoszulComplexSlice:
    """Internal degree n part of K (x) A (side='right') or A (x) K (side='left')."""
    if side not in ("right", "left"):
        raise ValueError("side must be 'right' or 'left'")
    dual = dual or dual_algebra(A)
    rw = A.rewriter(order)
    spaces = _koszul_spaces(A, n, dual)
    chain_dims, images, ranks = [], [], [0]
    square_zero = True
    for i, K in enumerate(spaces):
        monos = normal_words(A, n - i, order)
        chain_dims.append(K.dim * len(monos))
        if i == 0:
            continue
        imgs = []
        for k in K.basis:
            for m in monos:
                imgs.append(_apply(rw, {(w, m): c for w, c in k.terms.items()}, side))
        # delta_{i-1} o delta_i on every basis vector
        if i >= 2:
            for v in imgs:
                if _apply(rw, v, side):
                    square_zero = False
                    break
        ranks.append(rank(imgs))
        images.append(imgs)
    return KoszulComplexSlice(n, side, chain_dims, ranks, square_zero, images)


def homology_dims(slice_: KoszulComplexSlice):
    out = []
    r = slice_.ranks + [0]
    for i, c in enumerate(slice_.chain_dims):
        out.append(c - r[i] - r[i + 1])
    return out


def koszul_report(A, degrees, side="right", order=None):
    dual = dual_algebra(A)
    rows = []
    for n in degrees:
        s = koszul_slice(A, n, side, order, dual)
        h = homology_dims(s)
        expected = [1] if n == 0 else [0] * len(h)
        rows.append({
            "n": n,
            "chain_dims": s.chain_dims,
            "homology_dims": h,
            "square_zero": s.square_zero,
            "pass": s.square_zero and h[: len(expected)] == expected and not any(h[len(expected):]),
        })
    return rows


# ---------------------------------------------------------------------------
# graded modules and Tor
# ---------------------------------------------------------------------------

class GradedModule:
    """Left A-module given by generators of fixed degrees and relation rows.

    A relation row is a list with one element of A per generator; the
    submodule generated by all rows is quotiented out.
    """

    def __init__(self, A, gen_degrees, rows=(), order=None, name="M"):
        self.A = A
        self.gen_degrees = list(gen_degrees)
        self.order = order
        self.name = name
        rw = A.rewriter(order)
        self.rows = []
        for k, row in enumerate(rows):
            if len(row) != len(self.gen_degrees):
                raise SpecError(f"relation row {k} has wrong length")
            row = [rw.normal_form(x) for x in row]
            degs = set()
            for j, x in enumerate(row):
                for w in x.terms:
                    degs.add(len(w) + self.gen_degrees[j])
            if len(degs) > 1:
                raise SpecError(f"relation row {k} is not homogeneous")
            if degs:
                self.rows.append((degs.pop(), row))
        self._pieces = {}

    def _piece(self, n):
        """(reduced relation rows keyed by pivot, quotient basis) in degree n."""
        hit = self._pieces.get(n)
        if hit is not None:
            return hit
        rw = self.A.rewriter(self.order)
        rels = []
        for deg, row in self.rows:
            if deg > n:
                continue
            for a in normal_words(self.A, n - deg, self.order):
                vec = {}
                for j, x in enumerate(row):
                    for w, c in x.terms.items():
                        for m, c2 in rw._nf_word(a + w).items():
                            _acc(vec, (j, m), c * c2)
                if vec:
                    rels.append(vec)
        basis, pivots = row_reduce(rels)
        piv = dict(zip(pivots, basis))
        free = [
            (j, m)
            for j, g in enumerate(self.gen_degrees)
            if n >= g
            for m in normal_words(self.A, n - g, self.order)
        ]
        quot = [c for c in free if c not in piv]
        self._pieces[n] = (piv, quot)
        return piv, quot

    def dim(self, n):
        return len(self._piece(n)[1])

    def reduce(self, vec, n):
        piv, _ = self._piece(n)
        vec = dict(vec)
        for p, row in piv.items():
            c = vec.get(p)
            if c is None:
                continue
            for k, v in row.items():
                _acc(vec, k, -c * v)
        return vec

    def act(self, g, vec, n):
        """Generator g acting on a degree-n vector, reduced in degree n+1."""
        rw = self.A.rewriter(self.order)
        out = {}
        for (j, m), c in vec.items():
            for m2, c2 in rw._nf_word((g,) + m).items():
                _acc(out, (j, m2), c * c2)
        return self.reduce(out, n + 1)


def free_module(A, order=None):
    return GradedModule(A, [0], [], order, name="A")


def trivial_module(A, order=None):
    rows = [[FreeElement.word((g,))] for g in range(A.ngens)]
    return GradedModule(A, [0], rows, order, name="k")


def cyclic_quotient(A, x: FreeElement, order=None):
    """A / A x for a homogeneous element x."""
    return GradedModule(A, [0], [[x]], order, name="A/Ax")


def tor_dims(A, M: GradedModule, i: int, n: int, dual=None) -> int:
    """dim Tor^A_i(k, M) in internal degree n, via K (x) M."""
    if i < 0 or n < 0:
        return 0
    dual = dual or dual_algebra(A)

    def space(j):
        return koszul_space(A, j, dual) if j >= 0 else None

    def chain_dim(j):
        if j < 0 or j > n:
            return 0
        K = space(j)
        return K.dim * M.dim(n - j)

    def diff_rank(j):
        # rank of K_j (x) M_{n-j} -> K_{j-1} (x) M_{n-j+1}
        if j <= 0 or j > n:
            return 0
        K = space(j)
        if K.dim == 0:
            return 0
        _, quot = M._piece(n - j)
        imgs = []
        for k in K.basis:
            for e in quot:
                out = {}
                for w, c in k.terms.items():
                    for key, c2 in M.act(w[-1], {e: ONE}, n - j).items():
                        _acc(out, (w[:-1], key), c * c2)
                imgs.append(out)
        return rank(imgs)

    c = chain_dim(i)
    if c == 0:
        return 0
    return c - diff_rank(i) - diff_rank(i + 1)
