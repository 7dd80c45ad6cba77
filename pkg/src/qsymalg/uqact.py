"""Actions of U_q(g) (products of U_q(sl_n) blocks) on V, tensor powers and
graded pieces of quadratic algebras.

Hopf structure, fixed throughout:
    D(e) = e(x)k + 1(x)e,  D(f) = f(x)1 + k^-1(x)f,  D(k) = k(x)k
    S(e) = -e k^-1,  S(f) = -k f,  S(k) = k^-1
"""
from __future__ import annotations

import random
from dataclasses import dataclass
from functools import lru_cache
from math import prod

from .exactalg import ONE, ZERO, SparseMatrix, kernel_basis, parse_scalar, q_power, rank, row_reduce, signed_q_power
from .freeword import FreeElement, GradedSubspace, span_reduce, words_of_degree
from .quadratic import SpecError, _acc, _int_args, normal_words, parse_preset

__all__ = [
    "CONVENTION",
    "HopfActionSpec",
    "Rep",
    "sl2_natural",
    "sln_natural",
    "sl2xsl2_natural",
    "so4_natural",
    "conjugate_action",
    "trivial_action",
    "direct_sum",
    "action_preset",
    "action_from_spec",
    "action_to_spec",
    "matrix_inverse",
    "act_on_tensor",
    "act_element",
    "tensor_rep",
    "component_rep",
    "check_uq_relations",
    "check_antipode",
    "check_relations_submodule",
    "module_algebra_check",
    "invariants_of_degree",
    "decompose_semisimple",
    "weyl_dimension",
    "irreducible_character",
    "hom_action",
    "is_hom_invariant",
]

CONVENTION = {
    "coproduct": "D(e_i)=e_i(x)k_i+1(x)e_i; D(f_i)=f_i(x)1+k_i^-1(x)f_i; D(k_i)=k_i(x)k_i",
    "counit": "eps(e_i)=eps(f_i)=0; eps(k_i)=1",
    "antipode": "S(e_i)=-e_i k_i^-1; S(f_i)=-k_i f_i; S(k_i)=k_i^-1",
    "relations": "k_i e_j k_i^-1=q^(a_ij) e_j; k_i f_j k_i^-1=q^(-a_ij) f_j; [e_i,f_j]=delta_ij (k_i-k_i^-1)/(q-q^-1)",
    "q_integer": "[n]=(q^n-q^-n)/(q-q^-1)",
}


def matrix_inverse(M: SparseMatrix) -> SparseMatrix:
    if M.rows != M.cols:
        raise ValueError("inverse of a non-square matrix")
    n = M.rows
    rows = []
    for i, r in enumerate(M.row_dicts()):
        d = {(0, j): c for j, c in r.items()}
        d[(1, i)] = ONE
        rows.append(d)
    basis, pivots = row_reduce(rows, key=lambda c: c)
    if len(pivots) != n or any(p[0] != 0 for p in pivots):
        raise ValueError("matrix is not invertible")
    ent = {}
    for row, p in zip(basis, pivots):
        for (side, j), c in row.items():
            if side == 1:
                ent[(p[1], j)] = c
    return SparseMatrix(n, n, ent)


def _cartan_from_blocks(blocks):
    r = sum(b - 1 for b in blocks)
    C = [[0] * r for _ in range(r)]
    off = 0
    for b in blocks:
        for i in range(b - 1):
            C[off + i][off + i] = 2
            if i + 1 < b - 1:
                C[off + i][off + i + 1] = C[off + i + 1][off + i] = -1
        off += b - 1
    return C


class HopfActionSpec:
    """Matrices E_i, F_i, K_i on V for a product of U_q(sl_n) blocks."""

    def __init__(self, E, F, K, blocks, name="custom", cartan=None):
        self.E = list(E)
        self.F = list(F)
        self.K = list(K)
        self.blocks = list(blocks)
        self.name = name
        self.rank = len(self.E)
        if not (len(self.F) == len(self.K) == self.rank):
            raise SpecError("E, F, K lists must have equal length")
        if sum(b - 1 for b in self.blocks) != self.rank:
            raise SpecError("block sizes do not match the number of simple roots")
        self.cartan = cartan if cartan is not None else _cartan_from_blocks(self.blocks)
        self.dim = self.E[0].rows if self.E else (self.K[0].rows if self.K else 0)
        for M in self.E + self.F + self.K:
            if M.rows != self.dim or M.cols != self.dim:
                raise SpecError("all matrices must be dim x dim")
        try:
            self.Kinv = [matrix_inverse(k) for k in self.K]
        except ValueError as exc:
            raise SpecError("K matrices must be invertible") from exc
        self._cols = {}

    def matrix(self, kind, i):
        return {"e": self.E, "f": self.F, "k": self.K, "kinv": self.Kinv}[kind][i]

    def generators(self):
        return [(kind, i) for i in range(self.rank) for kind in ("e", "f", "k")]

    def cols(self, kind, i):
        key = (kind, i)
        if key not in self._cols:
            self._cols[key] = self.matrix(kind, i).col_dicts()
        return self._cols[key]

    def weights(self):
        """Weights of the basis vectors, if every K_i is diagonal in q-powers."""
        out = []
        for v in range(self.dim):
            w = []
            for k in self.K:
                col = k.col_dicts()[v]
                if set(col) - {v} or v not in col:
                    return None
                sp = signed_q_power(col[v])
                if sp is None or sp[0] != 1:
                    return None
                w.append(sp[1])
            out.append(tuple(w))
        return out

    def __repr__(self):
        return f"HopfActionSpec({self.name!r}, dim={self.dim}, blocks={self.blocks})"


def _gen_name(g):
    kind, i = g
    return f"{kind}{i + 1}"


def _parse_gen(g):
    if isinstance(g, tuple):
        return g
    s = str(g)
    for kind in ("kinv", "e", "f", "k"):
        if s.startswith(kind) and s[len(kind):].isdigit():
            return (kind, int(s[len(kind):]) - 1)
    raise SpecError(f"unknown generator {g!r}")


# ---------------------------------------------------------------------------
# presets
# ---------------------------------------------------------------------------

def sln_natural(n):
    if n < 2:
        raise SpecError("sl_n needs n >= 2")
    E, F, K = [], [], []
    for i in range(n - 1):
        E.append(SparseMatrix(n, n, {(i, i + 1): ONE}))
        F.append(SparseMatrix(n, n, {(i + 1, i): ONE}))
        K.append(SparseMatrix(n, n, {(j, j): q_power((j == i) - (j == i + 1)) for j in range(n)}))
    return HopfActionSpec(E, F, K, [n], name="sl2-natural" if n == 2 else f"sln-natural({n})")


def sl2_natural():
    return sln_natural(2)


def sl2xsl2_natural():
    """V1 (x) V1 for U_q(sl2) (x) U_q(sl2), basis v_a (x) v_b in lex order."""
    base = sl2_natural()
    one = SparseMatrix.identity(2)
    E = [base.E[0].kron(one), one.kron(base.E[0])]
    F = [base.F[0].kron(one), one.kron(base.F[0])]
    K = [base.K[0].kron(one), one.kron(base.K[0])]
    return HopfActionSpec(E, F, K, [2, 2], name="sl2xsl2-natural")


def conjugate_action(spec, D, Dinv=None, name=None):
    """The same module in the basis given by the columns of D."""
    Dinv = Dinv or matrix_inverse(D)
    conj = lambda M: Dinv @ M @ D  # noqa: E731
    return HopfActionSpec([conj(m) for m in spec.E], [conj(m) for m in spec.F], [conj(m) for m in spec.K],
                          spec.blocks, name=name or spec.name, cartan=spec.cartan)


SO4_SIGNS = (1, 1, -1, 1)


def so4_natural():
    """sl2xsl2-natural with the third basis vector negated; matches the so-even(2) preset."""
    D = SparseMatrix(4, 4, {(i, i): ONE if s > 0 else -ONE for i, s in enumerate(SO4_SIGNS)})
    return conjugate_action(sl2xsl2_natural(), D, D, name="so4-natural")


def trivial_action(d, blocks=(2,)):
    r = sum(b - 1 for b in blocks)
    Z = SparseMatrix(d, d)
    return HopfActionSpec([Z] * r, [Z] * r, [SparseMatrix.identity(d)] * r, blocks, name=f"trivial({d})")


def _block_diag(mats):
    n = sum(m.rows for m in mats)
    ent, off = {}, 0
    for m in mats:
        for (i, j), c in m.entries.items():
            ent[(off + i, off + j)] = c
        off += m.rows
    return SparseMatrix(n, n, ent)


def direct_sum(specs, name=None):
    """Same algebra acting on V_1 (+) ... (+) V_m (block diagonal)."""
    specs = list(specs)
    first = specs[0]
    for s in specs[1:]:
        if s.blocks != first.blocks:
            raise SpecError("direct sum of actions of different algebras")
    E = [_block_diag([s.E[i] for s in specs]) for i in range(first.rank)]
    F = [_block_diag([s.F[i] for s in specs]) for i in range(first.rank)]
    K = [_block_diag([s.K[i] for s in specs]) for i in range(first.rank)]
    return HopfActionSpec(E, F, K, first.blocks, name=name or "+".join(s.name for s in specs), cartan=first.cartan)


def action_preset(text):
    """sl2-natural, sln-natural(n), sl2xsl2-natural, so4-natural, sln-columns(m,n), trivial(d)."""
    name, args = parse_preset(text)
    if name == "sl2-natural":
        return sl2_natural()
    if name == "sln-natural":
        (n,) = _int_args(name, args, 1)
        return sln_natural(n)
    if name == "sl2xsl2-natural":
        return sl2xsl2_natural()
    if name == "so4-natural":
        return so4_natural()
    if name == "sln-columns":
        m, n = _int_args(name, args, 2)
        return direct_sum([sln_natural(n)] * m, name=f"sln-columns({m},{n})")
    if name == "trivial":
        (d,) = _int_args(name, args, 1)
        return trivial_action(d)
    raise SpecError(f"unknown action preset {text!r}")


def _matrix_from_spec(obj, dim, where):
    if not isinstance(obj, list):
        raise SpecError(f"{where}: expected a list of [row, col, coefficient] entries")
    ent = {}
    for k, e in enumerate(obj):
        try:
            i, j, c = e
            ent[(int(i), int(j))] = parse_scalar(c)
        except (TypeError, ValueError, ZeroDivisionError) as exc:
            raise SpecError(f"{where}[{k}]: bad entry {e!r}") from exc
    try:
        return SparseMatrix(dim, dim, ent)
    except (IndexError, ValueError) as exc:
        raise SpecError(f"{where}: {exc}") from exc


def action_from_spec(spec):
    """{"dimension": d, "blocks": [2], "E": [...], "F": [...], "K": [...]}, sparse entries."""
    if not isinstance(spec, dict):
        raise SpecError("action spec must be an object")
    if "preset" in spec:
        return action_preset(spec["preset"])
    try:
        dim = int(spec["dimension"])
    except (KeyError, TypeError, ValueError) as exc:
        raise SpecError("dimension: expected an integer") from exc
    blocks = spec.get("blocks", [2])
    mats = {}
    for key in ("E", "F", "K"):
        raw = spec.get(key)
        if not isinstance(raw, list):
            raise SpecError(f"{key}: expected a list of matrices")
        mats[key] = [_matrix_from_spec(m, dim, f"{key}[{i}]") for i, m in enumerate(raw)]
    return HopfActionSpec(mats["E"], mats["F"], mats["K"], blocks, name=spec.get("name", "custom"))


def action_to_spec(spec: HopfActionSpec):
    def enc(M):
        return [[i, j, str(c)] for (i, j), c in sorted(M.entries.items())]

    return {
        "name": spec.name,
        "dimension": spec.dim,
        "blocks": spec.blocks,
        "E": [enc(m) for m in spec.E],
        "F": [enc(m) for m in spec.F],
        "K": [enc(m) for m in spec.K],
    }


# ---------------------------------------------------------------------------
# tensor powers
# ---------------------------------------------------------------------------

def _position_maps(kind, i, n):
    """Which letter map sits at each tensor slot, summand by summand."""
    if kind == "e":
        return [["id"] * j + ["e"] + ["k"] * (n - j - 1) for j in range(n)]
    if kind == "f":
        return [["kinv"] * j + ["f"] + ["id"] * (n - j - 1) for j in range(n)]
    if kind in ("k", "kinv"):
        return [[kind] * n]
    raise SpecError(f"unknown generator kind {kind!r}")


def _expand(word, maps, spec, i):
    res = {(): ONE}
    for g, m in zip(word, maps):
        if m == "id":
            res = {w + (g,): c for w, c in res.items()}
            continue
        col = spec.cols(m, i)[g]
        if not col:
            return {}
        new = {}
        for w, c in res.items():
            for h, c2 in col.items():
                _acc(new, w + (h,), c * c2)
        res = new
    return res


def act_element(spec, gen, x: FreeElement) -> FreeElement:
    """Generator acting on an element of T(V) through the iterated coproduct."""
    kind, i = _parse_gen(gen)
    out = {}
    for w, c in x.terms.items():
        for maps in _position_maps(kind, i, len(w)):
            for w2, c2 in _expand(w, maps, spec, i).items():
                _acc(out, w2, c * c2)
    return FreeElement(out)


def act_on_tensor(spec, gen, n) -> SparseMatrix:
    """Matrix of a generator on V^(x)n, words indexed lexicographically."""
    kind, i = _parse_gen(gen)
    d = spec.dim
    if n == 0:
        val = ONE if kind in ("k", "kinv") else ZERO
        return SparseMatrix(1, 1, {(0, 0): val})
    one = SparseMatrix.identity(d)
    mats = {"id": one, "e": spec.E[i], "f": spec.F[i], "k": spec.K[i], "kinv": spec.Kinv[i]}
    total = None
    for maps in _position_maps(kind, i, n):
        term = mats[maps[0]]
        for m in maps[1:]:
            term = term.kron(mats[m])
        total = term if total is None else total + term
    return total


@dataclass
class Rep:
    """Finite-dimensional representation given by generator matrices."""

    E: list
    F: list
    K: list
    Kinv: list
    basis: list | None = None

    @property
    def dim(self):
        return self.K[0].rows if self.K else 0

    def matrix(self, kind, i):
        return {"e": self.E, "f": self.F, "k": self.K, "kinv": self.Kinv}[kind][i]

    def weights(self):
        """Weights of the basis vectors, or None unless every K_i is diagonal in q-powers."""
        if any(i != j for k in self.K for (i, j) in k.entries):
            return None
        out = []
        for v in range(self.dim):
            w = []
            for k in self.K:
                sp = signed_q_power(k[v, v])
                if sp is None or sp[0] != 1:
                    return None
                w.append(sp[1])
            out.append(tuple(w))
        return out


def tensor_rep(spec, n) -> Rep:
    r = range(spec.rank)
    return Rep(
        [act_on_tensor(spec, ("e", i), n) for i in r],
        [act_on_tensor(spec, ("f", i), n) for i in r],
        [act_on_tensor(spec, ("k", i), n) for i in r],
        [act_on_tensor(spec, ("kinv", i), n) for i in r],
        words_of_degree(spec.dim, n),
    )


def _component_matrix(A, spec, gen, n, order, monos, index):
    rw = A.rewriter(order)
    ent = {}
    for j, m in enumerate(monos):
        img = act_element(spec, gen, FreeElement.word(m))
        for w, c in rw.normal_form(img).terms.items():
            ent[(index[w], j)] = c
    return SparseMatrix(len(monos), len(monos), ent)


def component_rep(A, spec, n, order=None) -> Rep:
    """The action on A_n in the basis of normal words."""
    if spec.dim != A.ngens:
        raise SpecError("action dimension differs from the number of generators")
    monos = normal_words(A, n, order)
    index = {m: j for j, m in enumerate(monos)}
    mats = {k: [_component_matrix(A, spec, (k, i), n, order, monos, index) for i in range(spec.rank)]
            for k in ("e", "f", "k", "kinv")}
    return Rep(mats["e"], mats["f"], mats["k"], mats["kinv"], monos)


# ---------------------------------------------------------------------------
# checks
# ---------------------------------------------------------------------------

def check_uq_relations(spec, rep: Rep):
    """Defining relations (without Serre) as exact matrix identities; returns failures."""
    bad = []
    qq = q_power(1) - q_power(-1)
    for i in range(spec.rank):
        Ki, Kinv = rep.K[i], rep.Kinv[i]
        if not (Ki @ Kinv == SparseMatrix.identity(rep.dim)):
            bad.append(f"k{i + 1} k{i + 1}^-1 != 1")
        for j in range(spec.rank):
            a = spec.cartan[i][j]
            if not (Ki @ rep.E[j] @ Kinv == rep.E[j].scale(q_power(a))):
                bad.append(f"k{i + 1} e{j + 1} k{i + 1}^-1")
            if not (Ki @ rep.F[j] @ Kinv == rep.F[j].scale(q_power(-a))):
                bad.append(f"k{i + 1} f{j + 1} k{i + 1}^-1")
            comm = rep.E[i] @ rep.F[j] - rep.F[j] @ rep.E[i]
            rhs = (Ki - Kinv).scale(qq.inverse()) if i == j else SparseMatrix(rep.dim, rep.dim)
            if not (comm == rhs):
                bad.append(f"[e{i + 1}, f{j + 1}]")
            if not (Ki @ rep.K[j] == rep.K[j] @ Ki):
                bad.append(f"k{i + 1} k{j + 1} != k{j + 1} k{i + 1}")
    return bad


def check_antipode(spec):
    """sum S(x1) x2 = eps(x) = sum x1 S(x2) on V for every generator."""
    bad = []
    I = SparseMatrix.identity(spec.dim)
    Z = SparseMatrix(spec.dim, spec.dim)
    for i in range(spec.rank):
        E, F, K, Ki = spec.E[i], spec.F[i], spec.K[i], spec.Kinv[i]
        SE = (E @ Ki).scale(-ONE)
        SF = (K @ F).scale(-ONE)
        if not (SE @ K + E == Z and E @ Ki + SE == Z):
            bad.append(f"e{i + 1}")
        if not (SF + K @ F == Z and F + Ki @ SF == Z):
            bad.append(f"f{i + 1}")
        if not (Ki @ K == I and K @ Ki == I):
            bad.append(f"k{i + 1}")
    return bad


@dataclass
class CheckResult:
    passed: bool
    generator: str | None = None
    detail: str | None = None

    def to_dict(self):
        return {"pass": self.passed, "generator": self.generator, "detail": self.detail}


def check_relations_submodule(A, spec) -> CheckResult:
    if spec.dim != A.ngens:
        raise SpecError("action dimension differs from the number of generators")
    for gen in spec.generators():
        for r in A.relations.basis:
            img = act_element(spec, gen, r)
            if not A.relations.contains(img):
                return CheckResult(False, _gen_name(gen), A.format(r))
    return CheckResult(True)


def _coproduct_terms(gen):
    kind, i = gen
    if kind == "e":
        return [(("e", i), ("k", i)), (None, ("e", i))]
    if kind == "f":
        return [(("f", i), None), (("kinv", i), ("f", i))]
    return [((kind, i), (kind, i))]


def _act_opt(spec, gen, x):
    return x if gen is None else act_element(spec, gen, x)


def _random_element(rng, A, n, order, terms=3):
    monos = normal_words(A, n, order)
    out = FreeElement()
    for _ in range(min(terms, len(monos))):
        out = out + FreeElement.word(rng.choice(monos), rng.randint(-3, 3) or 1)
    return out


def module_algebra_check(A, spec, N, order=None, samples=4, seed=0) -> CheckResult:
    """The action descends to A and obeys x(ab) = sum (x1 a)(x2 b) there.

    Descent is checked on every basis vector of <I>_n, n <= N; the product
    law on seeded random normal-form pairs of total degree <= N.
    """
    sub = check_relations_submodule(A, spec)
    if not sub.passed:
        return CheckResult(False, sub.generator, "relation space is not a submodule: " + sub.detail)
    rw = A.rewriter(order)
    for n in range(2, N + 1):
        for u in A.ideal(n).basis:
            for gen in spec.generators():
                if not rw.normal_form(act_element(spec, gen, u)).is_zero():
                    return CheckResult(False, _gen_name(gen), f"action does not preserve <I> in degree {n}")
    rng = random.Random(seed)
    for total in range(1, N + 1):
        for _ in range(samples):
            da = rng.randint(0, total)
            a = _random_element(rng, A, da, order)
            b = _random_element(rng, A, total - da, order)
            ab = rw.normal_form(a * b)
            for gen in spec.generators():
                lhs = rw.normal_form(act_element(spec, gen, ab))
                rhs = FreeElement()
                for g1, g2 in _coproduct_terms(gen):
                    rhs = rhs + _act_opt(spec, g1, a) * _act_opt(spec, g2, b)
                if lhs != rw.normal_form(rhs):
                    return CheckResult(False, _gen_name(gen), f"product law fails in degree {total}")
    return CheckResult(True)


def invariants_of_degree(A, spec, n, order=None) -> GradedSubspace:
    """Joint kernel of e_i, f_i and k_i - 1 on A_n, as normal-form elements."""
    rep = component_rep(A, spec, n, order)
    monos = rep.basis
    blocks = []
    for i in range(spec.rank):
        blocks += [rep.E[i], rep.F[i], rep.K[i] - SparseMatrix.identity(len(monos))]
    ent = {}
    off = 0
    for M in blocks:
        for (r, c), v in M.entries.items():
            ent[(off + r, c)] = v
        off += M.rows
    M = SparseMatrix(off, len(monos), ent)
    vecs = [FreeElement({monos[j]: c for j, c in enumerate(v) if not c.is_zero()}) for v in kernel_basis(M)]
    return span_reduce(vecs, n, A.ngens, order)


# ---------------------------------------------------------------------------
# characters and decomposition
# ---------------------------------------------------------------------------

def _split_weight(blocks, lam):
    out, off = [], 0
    for b in blocks:
        out.append(tuple(lam[off:off + b - 1]))
        off += b - 1
    return out


def _sl_dim(n, lab):
    num = den = 1
    for i in range(n):
        for j in range(i + 1, n):
            num *= sum(lab[i:j]) + (j - i)
            den *= j - i
    return num // den


def weyl_dimension(blocks, lam):
    """Dimension of the irreducible module with highest weight lam (Dynkin labels)."""
    if any(x < 0 for x in lam):
        raise ValueError("highest weight must be dominant")
    return prod(_sl_dim(b, w) for b, w in zip(blocks, _split_weight(blocks, lam)))


@lru_cache(maxsize=None)
def _sl_character(n, lab):
    """Weight multiplicities of the sl_n irreducible via semistandard tableaux."""
    shape = [sum(lab[k:]) for k in range(n - 1)]
    cells = [(r, c) for r, length in enumerate(shape) for c in range(length)]
    counts = {}
    fill = {}

    def rec(idx):
        if idx == len(cells):
            mu = [0] * n
            for v in fill.values():
                mu[v] += 1
            wt = tuple(mu[i] - mu[i + 1] for i in range(n - 1))
            counts[wt] = counts.get(wt, 0) + 1
            return
        r, c = cells[idx]
        lo = 0
        if c > 0:
            lo = fill[(r, c - 1)]
        if r > 0:
            lo = max(lo, fill[(r - 1, c)] + 1)
        for v in range(lo, n):
            fill[(r, c)] = v
            rec(idx + 1)
        fill.pop((r, c), None)

    rec(0)
    return counts


def irreducible_character(blocks, lam):
    """{weight: multiplicity} for the irreducible module of highest weight lam."""
    parts = _split_weight(blocks, lam)
    char = {(): 1}
    for b, w in zip(blocks, parts):
        ch = _sl_character(b, tuple(w))
        char = {k1 + k2: m1 * m2 for k1, m1 in char.items() for k2, m2 in ch.items()}
    return char


@dataclass
class Decomposition:
    multiplicities: dict
    dim: int
    character: dict
    dims_match: bool
    character_match: bool

    @property
    def ok(self):
        return self.dims_match and self.character_match


def decompose_semisimple(spec_or_blocks, rep: Rep) -> Decomposition:
    blocks = spec_or_blocks.blocks if isinstance(spec_or_blocks, HopfActionSpec) else list(spec_or_blocks)
    if rep.dim == 0:
        return Decomposition({}, 0, {}, True, True)
    weights = rep.weights()
    if weights is None:
        raise SpecError("not type (1,...,1): K does not act diagonally by q-powers")
    char = {}
    by_weight = {}
    for v, w in enumerate(weights):
        char[w] = char.get(w, 0) + 1
        by_weight.setdefault(w, []).append(v)
    mult = {}
    for w, cols in sorted(by_weight.items()):
        if any(x < 0 for x in w):
            continue
        colset = {c: k for k, c in enumerate(cols)}
        rows = []
        for E in rep.E:
            for d in E.row_dicts():
                sub = {colset[c]: v for c, v in d.items() if c in colset}
                if sub:
                    rows.append(sub)
        m = len(cols) - rank(rows)
        if m:
            mult[w] = m
    total = sum(m * weyl_dimension(blocks, w) for w, m in mult.items())
    recon = {}
    for w, m in mult.items():
        for wt, k in irreducible_character(blocks, w).items():
            recon[wt] = recon.get(wt, 0) + m * k
    return Decomposition(mult, rep.dim, char, total == rep.dim, recon == char)


# ---------------------------------------------------------------------------
# action on Hom spaces of finite slices
# ---------------------------------------------------------------------------

def hom_action(gen, phi: SparseMatrix, target: Rep, source: Rep) -> SparseMatrix:
    """(x.phi) = sum rho_target(x2) phi rho_source(S^-1(x1)) for phi: source -> target."""
    kind, i = _parse_gen(gen)
    tE, tF, tK, tKi = target.E[i], target.F[i], target.K[i], target.Kinv[i]
    sE, sF, sK, sKi = source.E[i], source.F[i], source.K[i], source.Kinv[i]
    if kind == "e":
        # S^-1(e) = -k^-1 e
        return tE @ phi - tK @ phi @ sKi @ sE
    if kind == "f":
        # S^-1(f) = -f k
        return tF @ phi @ sK - phi @ sF @ sK
    if kind == "k":
        return tK @ phi @ sKi
    if kind == "kinv":
        return tKi @ phi @ sK
    raise SpecError(f"unknown generator {gen!r}")


def is_hom_invariant(phi, target: Rep, source: Rep) -> bool:
    for i in range(len(target.E)):
        if not hom_action(("e", i), phi, target, source).is_zero():
            return False
        if not hom_action(("f", i), phi, target, source).is_zero():
            return False
        if not (hom_action(("k", i), phi, target, source) == phi):
            return False
    return True
