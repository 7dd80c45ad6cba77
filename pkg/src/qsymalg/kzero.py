"""Representation ring bookkeeping and K_0-level reports."""
from __future__ import annotations

from fractions import Fraction

from .quadratic import FilteredAlgebra, QuadraticAlgebra, associated_graded, confluent_order, graded_dim, pbw_check
from .quadratic import rees_algebra
from .uqact import CONVENTION, act_element, check_relations_submodule, component_rep, decompose_semisimple
from .uqact import irreducible_character, module_algebra_check, weyl_dimension

__all__ = [
    "Character",
    "RepRingElement",
    "character",
    "decompose_character",
    "tensor_decompose",
    "equivariant_hilbert",
    "k0_report",
    "CLAIMS",
    "weight_label",
]

# Isomorphisms asserted at the level of Grothendieck groups; checked only
# through the hypotheses listed next to them in each report.
CLAIMS = {
    "quadratic": "K_i^U(A) = K_i(U-mod) for all i >= 0 (A Noetherian quantum symmetric algebra)",
    "k0_basis": "K_0^U(A) = K_0(U-mod), free abelian on the classes [A (x) V_lambda], lambda dominant",
    "filtered": "K_i^U(S) = K_i^U(gr S) for all i >= 0 (gr S Noetherian, flat over A)",
    "graded": "Z[t] (x)_Z K_i(M(A,U)) = K_i(M_gr(S,U))",
}


def weight_label(w):
    if not w:
        return "trivial"
    return ",".join(str(x) for x in w) if len(w) != 1 else str(w[0])


def _simple_roots(cartan):
    # alpha_i in fundamental-weight coordinates is the i-th row of the Cartan matrix
    return [tuple(row) for row in cartan]


def _height_key(cartan):
    r = len(cartan)
    if r == 0:
        return lambda w: 0
    # inverse Cartan matrix over Q, then height = sum of root coordinates
    M = [[Fraction(c) for c in row] + [Fraction(int(i == j)) for j in range(r)] for i, row in enumerate(cartan)]
    for col in range(r):
        piv = next(i for i in range(col, r) if M[i][col] != 0)
        M[col], M[piv] = M[piv], M[col]
        p = M[col][col]
        M[col] = [x / p for x in M[col]]
        for i in range(r):
            if i != col and M[i][col] != 0:
                f = M[i][col]
                M[i] = [a - f * b for a, b in zip(M[i], M[col])]
    inv = [row[r:] for row in M]
    col_sums = [sum(inv[i][j] for i in range(r)) for j in range(r)]
    return lambda w: sum(c * x for c, x in zip(col_sums, w))


def _cartan(blocks):
    from .uqact import _cartan_from_blocks

    return _cartan_from_blocks(blocks)


class Character:
    """Laurent polynomial in z_1..z_r: {weight tuple: integer coefficient}."""

    def __init__(self, terms=None, blocks=(2,)):
        self.blocks = tuple(blocks)
        self.terms = {tuple(k): int(v) for k, v in (terms or {}).items() if v}

    def __add__(self, other):
        out = dict(self.terms)
        for k, v in other.terms.items():
            out[k] = out.get(k, 0) + v
        return Character(out, self.blocks)

    def __sub__(self, other):
        return self + other.scale(-1)

    def scale(self, c):
        return Character({k: c * v for k, v in self.terms.items()}, self.blocks)

    def __mul__(self, other):
        out = {}
        for k1, v1 in self.terms.items():
            for k2, v2 in other.terms.items():
                k = tuple(a + b for a, b in zip(k1, k2))
                out[k] = out.get(k, 0) + v1 * v2
        return Character(out, self.blocks)

    def __eq__(self, other):
        return isinstance(other, Character) and self.terms == other.terms

    def dim(self):
        return sum(self.terms.values())

    def is_weyl_invariant(self):
        roots = _simple_roots(_cartan(self.blocks))
        for i, a in enumerate(roots):
            for w, c in self.terms.items():
                s = tuple(x - w[i] * ai for x, ai in zip(w, a))
                if self.terms.get(s, 0) != c:
                    return False
        return True

    def __repr__(self):
        return f"Character({self.terms})"


class RepRingElement:
    """Virtual module: {dominant weight: integer multiplicity}."""

    def __init__(self, mults=None, blocks=(2,)):
        self.blocks = tuple(blocks)
        self.mults = {tuple(k): int(v) for k, v in (mults or {}).items() if v}
        for k in self.mults:
            if any(x < 0 for x in k):
                raise ValueError(f"{k} is not dominant")

    def __add__(self, other):
        out = dict(self.mults)
        for k, v in other.mults.items():
            out[k] = out.get(k, 0) + v
        return RepRingElement(out, self.blocks)

    def __mul__(self, other):
        return decompose_character(self.character() * other.character())

    def __eq__(self, other):
        return isinstance(other, RepRingElement) and self.mults == other.mults

    def __hash__(self):
        return hash(frozenset(self.mults.items()))

    def character(self):
        out = Character({}, self.blocks)
        for w, m in self.mults.items():
            out = out + character(w, self.blocks).scale(m)
        return out

    def dim(self):
        return sum(m * weyl_dimension(self.blocks, w) for w, m in self.mults.items())

    def is_effective(self):
        return all(v > 0 for v in self.mults.values())

    def to_dict(self):
        return {weight_label(w): m for w, m in sorted(self.mults.items(), reverse=True)}

    def __repr__(self):
        return f"RepRingElement({self.to_dict()})"


def character(lam, blocks=(2,)) -> Character:
    lam = tuple(lam)
    if len(lam) != sum(b - 1 for b in blocks):
        raise ValueError("weight has the wrong length for the block structure")
    if any(x < 0 for x in lam):
        raise ValueError(f"{lam} is not dominant")
    return Character(irreducible_character(list(blocks), lam), blocks)


def decompose_character(ch: Character) -> RepRingElement:
    """Peel off irreducibles from the highest remaining weight."""
    key = _height_key(_cartan(ch.blocks))
    rest = Character(ch.terms, ch.blocks)
    out = {}
    while rest.terms:
        top = max(rest.terms, key=lambda w: (key(w), w))
        if any(x < 0 for x in top):
            raise ValueError("character is not Weyl-invariant")
        c = rest.terms[top]
        out[top] = out.get(top, 0) + c
        rest = rest - character(top, ch.blocks).scale(c)
    return RepRingElement(out, ch.blocks)


def tensor_decompose(lam, mu, blocks=(2,)) -> RepRingElement:
    return decompose_character(character(lam, blocks) * character(mu, blocks))


def equivariant_hilbert(A, spec, N, order=None):
    """[A_n] in the representation ring for n = 0..N."""
    if isinstance(A, FilteredAlgebra):
        A = associated_graded(A)
    out = []
    for n in range(N + 1):
        if spec is None or spec.rank == 0:
            out.append(RepRingElement({(): graded_dim(A, n)}, ()))
            continue
        dec = decompose_semisimple(spec, component_rep(A, spec, n, order))
        if not dec.ok:
            raise ValueError(f"decomposition of A_{n} does not reconstruct its character")
        out.append(RepRingElement(dec.multiplicities, spec.blocks))
    return out


def _filtered_relations_invariant(F, spec):
    rw = F.rewriter()
    for gen in spec.generators():
        for r in F.relations:
            if not rw.normal_form(act_element(spec, gen, r)).is_zero():
                return False
    return True


def _dominant_sample(blocks, bound):
    r = sum(b - 1 for b in blocks)
    out = [()]
    for _ in range(r):
        out = [w + (k,) for w in out for k in range(bound + 1)]
    return sorted(out, key=lambda w: (sum(w), w))


def k0_report(A, spec, N=4, sample_bound=3, order=None, noetherian=None):
    """K_0-level report: hypotheses, sample generators [A (x) V_lambda], Hilbert table.

    ``noetherian`` may carry a precomputed certificate result; otherwise
    the report only records what was verified here.
    """
    from .rmatrix import bk_form_check, bk_search

    filtered = isinstance(A, FilteredAlgebra)
    gr = associated_graded(A) if filtered else A
    hyp = {}
    pbw = pbw_check(gr, order, max(N, 2))
    hyp["pbw"] = pbw.label
    if noetherian is None:
        bk = bk_form_check(gr, order)
        if not bk.certified:
            bk = bk_search(gr, limit=5040)
        noetherian = bk
    hyp["noetherian_certificate"] = noetherian.status
    hyp["noetherian_order"] = [gr.names[g] for g in noetherian.order]
    basis_order = confluent_order(gr, order)
    if spec is not None and spec.rank:
        hyp["relations_submodule"] = check_relations_submodule(gr, spec).passed
        hyp["module_algebra"] = module_algebra_check(gr, spec, N, basis_order).passed
        if filtered:
            hyp["filtered_relations_invariant"] = _filtered_relations_invariant(A, spec)
    if filtered:
        R = rees_algebra(A)
        hyp["rees_z1_recovers_relations"] = R.specialize(1) == A.relations
        hyp["rees_z0_recovers_associated_graded"] = (
            QuadraticAlgebra(A.names, R.specialize(0)).relations == gr.relations
        )
        hyp["rees_pbw"] = pbw_check(R.algebra, (R.z,) + tuple(range(A.ngens)), max(N, 2)).label
    conditional = not (pbw.flat and noetherian.certified and all(v is not False for v in hyp.values()))

    blocks = tuple(spec.blocks) if spec is not None and spec.rank else ()
    hilb = equivariant_hilbert(gr, spec, N, basis_order)
    table = [{"n": n, "decomposition": h.to_dict(), "dim": h.dim(),
              "dim_check": h.dim() == graded_dim(gr, n)} for n, h in enumerate(hilb)]
    sample = []
    degree0 = []
    lams = _dominant_sample(blocks, sample_bound) if blocks else [()]
    for lam in lams:
        V = RepRingElement({lam: 1}, blocks)
        data = [(h * V) if blocks else RepRingElement({(): h.dim()}, ()) for h in hilb]
        sample.append({
            "class": f"[A (x) V_({weight_label(lam)})]" if blocks else "[A]",
            "highest_weight": list(lam),
            "equivariant_hilbert": [d.to_dict() for d in data],
        })
        degree0.append(data[0])
    distinct = len(set(degree0)) == len(degree0)
    return {
        "algebra": A.name,
        "generators": list(A.names),
        "convention_header": CONVENTION,
        "status": "conditional" if conditional else "verified-hypotheses",
        "hypotheses_verified": hyp,
        "claims": [CLAIMS["quadratic"], CLAIMS["k0_basis"]] + ([CLAIMS["filtered"]] if filtered else []),
        "k0_basis": "free abelian on [A (x) V_lambda], lambda dominant" if blocks else "Z, generated by [A]",
        "k0_basis_sample": sample,
        "injectivity_witness": {
            "degree0_decompositions_distinct": distinct,
            "note": "computable proxy: distinct lambda give distinct degree-0 components",
        },
        "equivariant_hilbert_table": table,
    }
