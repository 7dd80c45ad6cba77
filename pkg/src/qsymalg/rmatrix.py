"""Braiding operators on V(x)V, the relation spaces they cut out,
braided tensor products S_q(V^m) and a syntactic Noetherian certificate."""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field

from .exactalg import ONE, ZERO, SparseMatrix, q_power, rank, row_reduce
from .freeword import FreeElement, GradedSubspace, span_reduce
from .quadratic import FilteredAlgebra, QuadraticAlgebra, SpecError, _int_args, parse_preset
from .uqact import SO4_SIGNS, HopfActionSpec, action_preset, direct_sum, sl2xsl2_natural, sln_natural, so4_natural

__all__ = [
    "RMatrixOp",
    "BraidedPresentation",
    "BKResult",
    "build_rhat_sln",
    "build_rhat_sl2xsl2",
    "build_rhat_so4",
    "rmatrix_from_spec",
    "rmatrix_preset",
    "flip",
    "braid_identity",
    "commutes_with_action",
    "char_poly_factor",
    "relations_from_rhat",
    "quantum_symmetric_algebra",
    "pair_action",
    "braided_product",
    "sq_power",
    "bk_form_check",
    "bk_search",
]


def _idx(n, a, b):
    return a * n + b


def flip(n, m=None) -> SparseMatrix:
    """v_b (x) w_a -> w_a (x) v_b from V_B(x)V_A (dims m, n) to V_A(x)V_B."""
    m = n if m is None else m
    return SparseMatrix(n * m, n * m, {(a * m + b, b * n + a): ONE for a in range(n) for b in range(m)})


def braid_identity(R: SparseMatrix, n) -> bool:
    I = SparseMatrix.identity(n)
    R12 = R.kron(I)
    R23 = I.kron(R)
    return R12 @ R23 @ R12 == R23 @ R12 @ R23


def pair_action(sx: HopfActionSpec, sy: HopfActionSpec, gen) -> SparseMatrix:
    """A generator on V_X (x) V_Y through the coproduct."""
    kind, i = gen
    Ix = SparseMatrix.identity(sx.dim)
    Iy = SparseMatrix.identity(sy.dim)
    if kind == "e":
        return sx.E[i].kron(sy.K[i]) + Ix.kron(sy.E[i])
    if kind == "f":
        return sx.F[i].kron(Iy) + sx.Kinv[i].kron(sy.F[i])
    if kind == "k":
        return sx.K[i].kron(sy.K[i])
    raise SpecError(f"unknown generator {gen!r}")


def commutes_with_action(R: SparseMatrix, spec: HopfActionSpec, spec_b=None) -> bool:
    """R : V_B(x)V_A -> V_A(x)V_B intertwines; spec_b defaults to spec."""
    sb = spec if spec_b is None else spec_b
    for gen in spec.generators():
        if not (R @ pair_action(sb, spec, gen) == pair_action(spec, sb, gen) @ R):
            return False
    return True


def _candidate_exponents(R):
    hi = 0
    for v in R.entries.values():
        hi = max(hi, v.num.degree(), v.den.degree())
    return range(-hi - 1, hi + 2)


def char_poly_factor(R: SparseMatrix) -> dict:
    """{(sign, m): multiplicity} with sign in '+-' for eigenvalues sign*q^m."""
    N = R.rows
    out = {}
    found = 0
    I = SparseMatrix.identity(N)
    for m in _candidate_exponents(R):
        for sign in (1, -1):
            lam = q_power(m) * sign
            M = R - I.scale(lam)
            P = M
            for _ in range(N - 1):
                P = P @ M
                if P.is_zero():
                    break
            mult = N - rank(P)
            if mult:
                out[("+" if sign == 1 else "-", m)] = mult
                found += mult
    if found != N:
        raise ValueError("not of quantum-symmetric type: eigenvalues are not all +-q^m")
    return out


@dataclass
class RMatrixOp:
    matrix: SparseMatrix
    n: int
    source: str
    spec: HopfActionSpec | None = None
    factorization: dict = field(default_factory=dict)
    checks: dict = field(default_factory=dict)

    @property
    def eigenvalues(self):
        return {f"{'-' if s == '-' else ''}q^{m}": k for (s, m), k in sorted(self.factorization.items())}

    def verify(self):
        self.checks = {
            "invertible": rank(self.matrix) == self.matrix.rows,
            "braid": braid_identity(self.matrix, self.n),
            "equivariant": True if self.spec is None else commutes_with_action(self.matrix, self.spec),
        }
        self.factorization = char_poly_factor(self.matrix)
        return self

    @property
    def ok(self):
        return all(self.checks.values())


def build_rhat_sln(n) -> RMatrixOp:
    """Type A braiding on the natural module: eigenvalues q and -q^-1."""
    if n < 2:
        raise SpecError("rhat-sln needs n >= 2")
    q = q_power(1)
    ent = {}
    for i in range(n):
        ent[(_idx(n, i, i), _idx(n, i, i))] = q
        for j in range(i + 1, n):
            ent[(_idx(n, j, i), _idx(n, i, j))] = ONE
            ent[(_idx(n, i, j), _idx(n, j, i))] = ONE
            ent[(_idx(n, j, i), _idx(n, j, i))] = q - q_power(-1)
    return RMatrixOp(SparseMatrix(n * n, n * n, ent), n, f"rhat-sln({n})", sln_natural(n)).verify()


def _tensor_braiding(R1, n1, R2, n2):
    """(R1 on first factors) (x) (R2 on second factors) for V = V1 (x) V2."""
    n = n1 * n2
    c1, c2 = R1.col_dicts(), R2.col_dicts()
    ent = {}
    for a in range(n1):
        for b in range(n2):
            for c in range(n1):
                for d in range(n2):
                    col = (a * n2 + b) * n + (c * n2 + d)
                    for r1, v1 in c1[a * n1 + c].items():
                        for r2, v2 in c2[b * n2 + d].items():
                            a2, c3 = divmod(r1, n1)
                            b2, d2 = divmod(r2, n2)
                            row = (a2 * n2 + b2) * n + (c3 * n2 + d2)
                            ent[(row, col)] = ent.get((row, col), ZERO) + v1 * v2
    return SparseMatrix(n * n, n * n, ent)


def build_rhat_sl2xsl2() -> RMatrixOp:
    """Braiding of V1 (x) V1 for U_q(sl2) (x) U_q(sl2), the 4-dimensional so_4 module."""
    R = build_rhat_sln(2).matrix
    M = _tensor_braiding(R, 2, R, 2)
    return RMatrixOp(M, 4, "rhat-sl2xsl2", sl2xsl2_natural()).verify()


def build_rhat_so4() -> RMatrixOp:
    """rhat-sl2xsl2 in the basis of so4-natural."""
    D = SparseMatrix(4, 4, {(i, i): ONE if s > 0 else -ONE for i, s in enumerate(SO4_SIGNS)})
    DD = D.kron(D)
    M = DD @ build_rhat_sl2xsl2().matrix @ DD
    return RMatrixOp(M, 4, "rhat-so4", so4_natural()).verify()


def rmatrix_preset(text) -> RMatrixOp:
    name, args = parse_preset(text)
    if name == "rhat-sln":
        (n,) = _int_args(name, args, 1)
        return build_rhat_sln(n)
    if name == "rhat-sl2xsl2":
        return build_rhat_sl2xsl2()
    if name == "rhat-so4":
        return build_rhat_so4()
    raise SpecError(f"unknown R-matrix preset {text!r}")


def rmatrix_from_spec(spec, action=None) -> RMatrixOp:
    """{"dimension": n, "entries": [[row, col, coeff], ...]} on V(x)V; invariants enforced."""
    from .uqact import _matrix_from_spec

    if not isinstance(spec, dict):
        raise SpecError("R-matrix spec must be an object")
    if "preset" in spec:
        return rmatrix_preset(spec["preset"])
    try:
        n = int(spec["dimension"])
    except (KeyError, TypeError, ValueError) as exc:
        raise SpecError("dimension: expected an integer") from exc
    M = _matrix_from_spec(spec.get("entries"), n * n, "entries")
    if action is None and "action" in spec:
        action = action_preset(spec["action"])
    op = RMatrixOp(M, n, spec.get("name", "custom"), action)
    op.checks = {
        "invertible": rank(M) == M.rows,
        "braid": braid_identity(M, n),
        "equivariant": True if action is None else commutes_with_action(M, action),
    }
    if not op.ok:
        failed = [k for k, v in op.checks.items() if not v]
        raise SpecError(f"R-matrix fails: {', '.join(failed)}")
    try:
        op.factorization = char_poly_factor(M)
    except ValueError as exc:
        raise SpecError(str(exc)) from exc
    return op


def relations_from_rhat(R: RMatrixOp) -> GradedSubspace:
    """Image of prod over positive eigenvalues q^c of (R - q^c), inside V(x)V."""
    fac = R.factorization or char_poly_factor(R.matrix)
    n = R.n
    N = n * n
    I = SparseMatrix.identity(N)
    P = I
    for (s, m) in sorted(fac):
        if s == "+":
            P = P @ (R.matrix - I.scale(q_power(m)))
    words = [(a, b) for a in range(n) for b in range(n)]
    cols = P.col_dicts()
    vecs = [FreeElement({words[r]: c for r, c in col.items()}) for col in cols if col]
    return span_reduce(vecs, 2, n)


def quantum_symmetric_algebra(R: RMatrixOp, names=None, name=None) -> QuadraticAlgebra:
    names = names or ([f"x{i + 1}" for i in range(R.n)] if R.n != 2 else ["x", "y"])
    weights = R.spec.weights() if R.spec is not None else None
    return QuadraticAlgebra(names, relations_from_rhat(R), weights=weights, name=name or f"S_q({R.source})")


# ---------------------------------------------------------------------------
# braided tensor products
# ---------------------------------------------------------------------------

@dataclass
class BraidedPresentation:
    algebra: QuadraticAlgebra
    blocks: list  # generator index lists, one per factor
    cross_relations: list
    spec: HopfActionSpec | None = None

    def leading_words_ok(self):
        """Each cross relation has exactly one word X_{jb} X_{ia} with block j > block i."""
        owner = {g: k for k, blk in enumerate(self.blocks) for g in blk}
        for r in self.cross_relations:
            lead = [w for w in r.terms if owner[w[0]] > owner[w[1]]]
            if len(lead) != 1:
                return False
        return True


def _block_braiding(psi, nA, nB, p, r):
    """Direct sum of psi: V_B^{+r} (x) V_A^{+p} -> V_A^{+p} (x) V_B^{+r}."""
    NA, NB = nA * p, nB * r
    cols = psi.col_dicts()
    ent = {}
    for beta in range(r):
        for b in range(nB):
            for alpha in range(p):
                for a in range(nA):
                    col = (beta * nB + b) * NA + (alpha * nA + a)
                    for row, v in cols[b * nA + a].items():
                        c, d = divmod(row, nB)
                        ent[((alpha * nA + c) * NB + (beta * nB + d), col)] = v
    return SparseMatrix(NA * NB, NA * NB, ent)


def braided_product(A, B, psi: SparseMatrix, spec_a=None, spec_b=None, names=None, check=True) -> BraidedPresentation:
    """A (x) B with b a = sum psi(b (x) a) for generators; psi: V_B(x)V_A -> V_A(x)V_B."""
    A_alg = A.algebra if isinstance(A, BraidedPresentation) else A
    B_alg = B.algebra if isinstance(B, BraidedPresentation) else B
    nA, nB = A_alg.ngens, B_alg.ngens
    if psi.rows != nA * nB or psi.cols != nA * nB:
        raise SpecError("braiding has the wrong size")
    if check and spec_a is not None:
        if not commutes_with_action(psi, spec_a, spec_b):
            raise SpecError("braiding does not intertwine the actions")
    if names is None:
        names = list(A_alg.names) + list(B_alg.names)
        if len(set(names)) != len(names):
            names = [f"{g}_1" for g in A_alg.names] + [f"{g}_2" for g in B_alg.names]
    rels = list(A_alg.relations.basis)
    for r in B_alg.relations.basis:
        rels.append(FreeElement({tuple(g + nA for g in w): c for w, c in r.terms.items()}))
    cols = psi.col_dicts()
    cross = []
    for b in range(nB):
        for a in range(nA):
            terms = {(nA + b, a): ONE}
            for row, v in cols[b * nA + a].items():
                c, d = divmod(row, nB)
                w = (c, nA + d)
                terms[w] = terms.get(w, ZERO) - v
            cross.append(FreeElement(terms))
    alg = QuadraticAlgebra(names, rels + cross, name=f"{A_alg.name}#{B_alg.name}")
    blocks_a = A.blocks if isinstance(A, BraidedPresentation) else [list(range(nA))]
    blocks_b = B.blocks if isinstance(B, BraidedPresentation) else [list(range(nB))]
    blocks = blocks_a + [[g + nA for g in blk] for blk in blocks_b]
    spec = None
    if spec_a is not None:
        spec = direct_sum([spec_a, spec_b or spec_a])
    return BraidedPresentation(alg, blocks, cross, spec)


def sq_power(R: RMatrixOp, m, via="direct") -> BraidedPresentation:
    """S_q(V^m) = S_q(V)^{(x)m} with every pair of factors braided by R.

    ``via`` is 'direct' (all blocks at once), 'left' ((S(x)S)(x)S...) or
    'right' (S(x)(S(x)(S...))); all three give the same presentation.
    """
    if m < 1:
        raise ValueError("m must be positive")
    base = quantum_symmetric_algebra(R)
    n = R.n
    names = [f"x{k + 1}{a + 1}" if n < 10 and m < 10 else f"x_{k + 1}_{a + 1}" for k in range(m) for a in range(n)]
    if m == 1:
        alg = QuadraticAlgebra(names, base.relations.basis, weights=base.weights, name=base.name)
        return BraidedPresentation(alg, [list(range(n))], [], R.spec)
    if via == "direct":
        pres = _sq_direct(R, base, m, names)
    elif via == "left":
        pres = BraidedPresentation(base, [list(range(n))], [], R.spec)
        for k in range(1, m):
            psi = _block_braiding(R.matrix, n, n, k, 1)
            pres = braided_product(pres, base, psi, check=False, names=names[: (k + 1) * n])
    elif via == "right":
        pres = BraidedPresentation(base, [list(range(n))], [], R.spec)
        for k in range(1, m):
            psi = _block_braiding(R.matrix, n, n, 1, k)
            pres = braided_product(base, pres, psi, check=False, names=names[: (k + 1) * n])
    else:
        raise ValueError("via must be 'direct', 'left' or 'right'")
    w = None if base.weights is None else base.weights * m
    alg = QuadraticAlgebra(names, pres.algebra.relations, weights=w, name=f"sq-power({R.source},{m})")
    spec = direct_sum([R.spec] * m) if R.spec is not None else None
    return BraidedPresentation(alg, pres.blocks, pres.cross_relations, spec)


def _sq_direct(R, base, m, names):
    n = R.n
    rels = []
    for k in range(m):
        for r in base.relations.basis:
            rels.append(FreeElement({tuple(g + k * n for g in w): c for w, c in r.terms.items()}))
    cols = R.matrix.col_dicts()
    cross = []
    for i in range(m):
        for j in range(i + 1, m):
            for b in range(n):
                for a in range(n):
                    terms = {(j * n + b, i * n + a): ONE}
                    for row, v in cols[b * n + a].items():
                        c, d = divmod(row, n)
                        w = (i * n + c, j * n + d)
                        terms[w] = terms.get(w, ZERO) - v
                    cross.append(FreeElement(terms))
    alg = QuadraticAlgebra(names, rels + cross)
    return BraidedPresentation(alg, [list(range(k * n, (k + 1) * n)) for k in range(m)], cross)


# ---------------------------------------------------------------------------
# Noetherian certificate
# ---------------------------------------------------------------------------

@dataclass
class BKResult:
    status: str  # "certified" or "inconclusive"
    order: tuple
    reason: str | None = None
    pair: tuple | None = None
    certificates: dict = field(default_factory=dict)

    @property
    def certified(self):
        return self.status == "certified"

    def to_dict(self, names):
        return {
            "status": self.status,
            "order": [names[g] for g in self.order],
            "reason": self.reason,
            "failing_pair": None if self.pair is None else [names[g] for g in self.pair],
            "certificates": {
                f"{names[a]}{names[b]}": r.format(names) for (a, b), r in sorted(self.certificates.items())
            },
        }


def bk_form_check(A, order=None) -> BKResult:
    """Look for relations u_j u_i = c u_i u_j + sum over s < i of (u_s u_t, u_t u_s) terms.

    Success certifies that A is Noetherian; failure is only "inconclusive".
    """
    if isinstance(A, BraidedPresentation):
        A = A.algebra
    order = A.resolve_order(order) if order is not None else tuple(range(A.ngens))
    if isinstance(A, FilteredAlgebra):
        if not A.is_homogeneous():
            return BKResult("inconclusive", order, "inhomogeneous relation")
        A = QuadraticAlgebra(A.names, A.relations)
    rows = [r.terms for r in A.relations.basis]
    certs = {}
    for i, j in itertools.combinations(range(A.ngens), 2):
        ui, uj = order[i], order[j]
        good = {(uj, ui), (ui, uj)}
        for s in order[:i]:
            for t in range(A.ngens):
                good.add((s, t))
                good.add((t, s))
        lead, other = (uj, ui), (ui, uj)

        def key(w, good=good, lead=lead, other=other):
            if w not in good:
                return (0, w)
            if w == lead:
                return (1, 0, w)
            if w == other:
                return (1, 2, w)
            return (1, 1, w)

        basis, pivots = row_reduce(rows, key=key)
        # rows pivoting on a good word avoid every bad word
        inside = [(r, p) for r, p in zip(basis, pivots) if p in good]
        r0 = next((r for r, p in inside if p == lead), None)
        if r0 is None:
            return BKResult("inconclusive", order, "no relation with the required leading word",
                            (uj, ui), certs)
        cert = dict(r0)
        if other not in cert:
            helper = next((r for r, p in inside if p != lead and other in r), None)
            if helper is None:
                return BKResult("inconclusive", order, "leading pair has no commutation term",
                                (uj, ui), certs)
            for w, c in helper.items():
                cert[w] = cert.get(w, ZERO) + c
        certs[(uj, ui)] = FreeElement(cert)
    return BKResult("certified", order, certificates=certs)


def bk_search(A, limit=None):
    """First generator order giving a certificate, or the last inconclusive result."""
    alg = A.algebra if isinstance(A, BraidedPresentation) else A
    last = None
    for k, perm in enumerate(itertools.permutations(range(alg.ngens))):
        if limit is not None and k >= limit:
            break
        last = bk_form_check(alg, perm)
        if last.certified:
            return last
    return last
