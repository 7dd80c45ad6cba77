"""Quadratic algebras k{V, I}: dimensions, PBW certification, rewriting,
filtered algebras and their Rees / associated graded algebras."""
from __future__ import annotations

import itertools
import re
from dataclasses import dataclass, field
from math import comb

from .exactalg import ONE, SparseMatrix, as_scalar, kernel_basis, parse_scalar, q_power, row_reduce
from .freeword import (
    FreeElement,
    GradedSubspace,
    ideal_component,
    span_reduce,
    word_key,
)

__all__ = [
    "QuadraticAlgebra",
    "FilteredAlgebra",
    "RewriteSystem",
    "RewriteError",
    "SpecError",
    "PBWResult",
    "ReesPresentation",
    "graded_dim",
    "ordered_monomials",
    "normal_words",
    "pbw_check",
    "search_pbw_orders",
    "confluent_order",
    "normal_form",
    "multiply",
    "associated_graded",
    "rees_algebra",
    "quantum_plane",
    "quantum_matrices",
    "so_even",
    "weyl_q",
    "free_algebra",
    "algebra_preset",
    "algebra_from_spec",
    "algebra_to_spec",
]

DEFAULT_STEP_LIMIT = 1_000_000


class SpecError(ValueError):
    """Malformed algebra / action / matrix description."""


class RewriteError(RuntimeError):
    pass


def _resolve_order(names, order):
    if order is None:
        return None
    out = []
    for g in order:
        if isinstance(g, str):
            if g not in names:
                raise SpecError(f"unknown generator {g!r} in order")
            out.append(names.index(g))
        else:
            out.append(int(g))
    if sorted(out) != list(range(len(names))):
        raise SpecError("order must list every generator exactly once")
    return tuple(out)


class QuadraticAlgebra:
    """T(V)/<I> for a space I of homogeneous degree-2 relations.

    ``weights`` optionally records the K-weights of the generators.
    Ideal components and rewriting systems are cached per instance.
    """

    def __init__(self, names, relations, weights=None, name=None):
        self.names = list(names)
        if len(set(self.names)) != len(self.names):
            raise SpecError("generator names must be distinct")
        self.weights = None if weights is None else [tuple(w) for w in weights]
        self.name = name or "custom"
        if isinstance(relations, GradedSubspace):
            rels = relations.basis
        else:
            rels = list(relations)
        for r in rels:
            if not r.is_homogeneous(2):
                raise SpecError(f"relation is not homogeneous quadratic: {r.format(self.names)}")
        self.relations = span_reduce(rels, 2, self.ngens)
        self._ideal = {}
        self._rewriters = {}

    @property
    def ngens(self):
        return len(self.names)

    def ideal(self, n, order=None):
        order = None if order is None else tuple(order)
        key = (n, order)
        if key not in self._ideal:
            self._ideal[key] = ideal_component(self.relations, n, order)
        return self._ideal[key]

    def rewriter(self, order=None, step_limit=DEFAULT_STEP_LIMIT):
        order = None if order is None else tuple(order)
        rw = self._rewriters.get(order)
        if rw is None:
            rw = RewriteSystem.from_relations(self.relations.basis, self.ngens, order, step_limit)
            # quadratic rules only overlap in degree 3, so confluence is a count there
            leads = set(rw.rules)
            n3 = sum(1 for a in range(self.ngens) for b in range(self.ngens) for c in range(self.ngens)
                     if (a, b) not in leads and (b, c) not in leads)
            if n3 != graded_dim(self, 3):
                raise RewriteError(f"rewriting rules are not confluent under order {order}")
            self._rewriters[order] = rw
        return rw

    def resolve_order(self, order):
        return _resolve_order(self.names, order)

    def format(self, x):
        return x.format(self.names)

    def __repr__(self):
        return f"QuadraticAlgebra({self.name!r}, d={self.ngens}, dim I={self.relations.dim})"


def graded_dim(A: QuadraticAlgebra, n: int) -> int:
    if n < 0:
        raise ValueError("degree must be nonnegative")
    if n == 0:
        return 1
    if n == 1:
        return A.ngens
    return A.ngens**n - A.ideal(n).dim


def ordered_monomials(d, n, order=None):
    """Words v_{i1}...v_{in} with nondecreasing position in ``order``."""
    seq = list(order) if order is not None else list(range(d))
    return [tuple(seq[i] for i in c) for c in itertools.combinations_with_replacement(range(d), n)]


def normal_words(A, n, order=None):
    """Words of length n avoiding every leading word of the rewriting system."""
    rw = A.rewriter(order)
    leads = set(rw.rules)
    out = [()]
    for _ in range(n):
        out = [w + (g,) for w in out for g in range(A.ngens) if not w or (w[-1], g) not in leads]
    key = word_key(order)
    return sorted(out, key=lambda w: tuple(-k for k in key(w)))


@dataclass
class PBWResult:
    flat: bool
    max_degree: int
    order: tuple
    dims: list
    expected: list
    failing_degree: int | None = None
    reason: str | None = None
    witness: FreeElement | None = None

    @property
    def label(self):
        return f"flat up to degree {self.max_degree}" if self.flat else f"not flat (degree {self.failing_degree})"

    def to_dict(self, names):
        return {
            "flat": self.flat,
            "label": self.label,
            "max_degree": self.max_degree,
            "order": [names[g] for g in self.order],
            "dims": self.dims,
            "expected_binomial": self.expected,
            "failing_degree": self.failing_degree,
            "reason": self.reason,
            "witness": None if self.witness is None else element_to_spec(self.witness, names),
        }


def pbw_check(A: QuadraticAlgebra, order=None, N=8) -> PBWResult:
    """Certify the ordered monomials as a basis of A_n for n <= N."""
    if N < 2:
        raise ValueError("N must be at least 2")
    order = A.resolve_order(order)
    full_order = order or tuple(range(A.ngens))
    d = A.ngens
    dims, expected = [], []
    for n in range(N + 1):
        dim_n = graded_dim(A, n)
        exp_n = comb(d + n - 1, n)
        dims.append(dim_n)
        expected.append(exp_n)
        if n < 2:
            continue
        witness = _monomial_dependence(A, n, order)
        if witness is not None:
            return PBWResult(False, N, full_order, dims, expected, n, "ordered monomials are linearly dependent", witness)
        if dim_n != exp_n:
            return PBWResult(False, N, full_order, dims, expected, n,
                             f"dim A_{n} = {dim_n} differs from binomial({d + n - 1},{n}) = {exp_n}")
    return PBWResult(True, N, full_order, dims, expected)


def _monomial_dependence(A, n, order):
    """Nonzero combination of ordered monomials lying in <I>_n, or None."""
    ideal = A.ideal(n, order)
    pivot_rows = {}
    key = word_key(order)
    for b in ideal.basis:
        lead = min(b.terms, key=key)
        pivot_rows[lead] = b.terms
    monos = ordered_monomials(A.ngens, n, order)
    residues = []
    for w in monos:
        row = pivot_rows.get(w)
        if row is None:
            residues.append({w: ONE})
        else:
            residues.append({c: -v for c, v in row.items() if c != w})
    coords = {}
    ent = {}
    for j, r in enumerate(residues):
        for w, v in r.items():
            i = coords.setdefault(w, len(coords))
            ent[(i, j)] = v
    M = SparseMatrix(len(coords), len(monos), ent)
    ker = kernel_basis(M)
    if not ker:
        return None
    vec = ker[0]
    return FreeElement({monos[j]: c for j, c in enumerate(vec) if not c.is_zero()})


def search_pbw_orders(A, N=4, limit=None):
    """First generator order (if any) for which pbw_check succeeds."""
    for i, perm in enumerate(itertools.permutations(range(A.ngens))):
        if limit is not None and i >= limit:
            break
        res = pbw_check(A, perm, N)
        if res.flat:
            return res
    return None


def confluent_order(A, preferred=None, limit=None):
    """``preferred`` if its rewriting rules are confluent, else the first order that is."""
    candidates = itertools.chain([preferred], itertools.permutations(range(A.ngens)))
    for i, order in enumerate(candidates):
        if limit is not None and i > limit:
            break
        try:
            A.rewriter(order)
        except RewriteError:
            continue
        return order
    raise RewriteError("no generator order gives confluent quadratic rewriting rules")


# ---------------------------------------------------------------------------
# rewriting
# ---------------------------------------------------------------------------

class RewriteSystem:
    """Rules ``leading pair -> combination of smaller words``.

    Words are compared degree-first, then lexicographically under the
    generator order, so every application strictly decreases a word and
    reduction terminates.  Normal forms are memoised per word.
    """

    def __init__(self, rules, ngens, order=None, step_limit=DEFAULT_STEP_LIMIT):
        self.rules = rules
        self.ngens = ngens
        self.order = order
        self.step_limit = step_limit
        self.steps = 0
        self._memo = {}

    @classmethod
    def from_relations(cls, relations, ngens, order=None, step_limit=DEFAULT_STEP_LIMIT):
        lex = word_key(order)

        def deglex(w):
            return (-len(w), lex(w))

        basis, pivots = row_reduce([r.terms for r in relations], key=deglex)
        rules = {}
        for row, lead in zip(basis, pivots):
            if len(lead) != 2:
                raise RewriteError("no rewriting presentation: leading word of length != 2")
            rules[lead] = {w: -c for w, c in row.items() if w != lead}
        return cls(rules, ngens, order, step_limit)

    def _tick(self):
        self.steps += 1
        if self.steps > self.step_limit:
            raise RewriteError(f"rewriting exceeded step limit {self.step_limit}")

    def _nf_word(self, w):
        hit = self._memo.get(w)
        if hit is not None:
            return hit
        if len(w) <= 1:
            res = {w: ONE}
        else:
            res = {}
            for m, c in self._nf_word(w[1:]).items():
                for m2, c2 in self._insert(w[0], m).items():
                    _acc(res, m2, c * c2)
        self._memo[w] = res
        return res

    def _insert(self, a, m):
        if not m:
            return {(a,): ONE}
        rhs = self.rules.get((a, m[0]))
        if rhs is None:
            return {(a,) + m: ONE}
        self._tick()
        res = {}
        for u, c in rhs.items():
            for m2, c2 in self._nf_word(u + m[1:]).items():
                _acc(res, m2, c * c2)
        return res

    def normal_form(self, x: FreeElement) -> FreeElement:
        res = {}
        for w, c in x.terms.items():
            for m, c2 in self._nf_word(w).items():
                _acc(res, m, c * c2)
        return FreeElement(res)

    def is_normal(self, w):
        return all((w[i], w[i + 1]) not in self.rules for i in range(len(w) - 1))


def _acc(d, k, v):
    old = d.get(k)
    if old is None:
        if not v.is_zero():
            d[k] = v
    else:
        nv = old + v
        if nv.is_zero():
            del d[k]
        else:
            d[k] = nv


def normal_form(A, order, x: FreeElement, step_limit=None) -> FreeElement:
    """Reduce x to a combination of normal words (ordered monomials for PBW A)."""
    order = A.resolve_order(order) if hasattr(A, "resolve_order") else order
    rw = A.rewriter(order)
    if step_limit is not None:
        rw.step_limit = step_limit
    return rw.normal_form(x)


def multiply(A, x, y, order=None):
    return normal_form(A, order, x * y)


# ---------------------------------------------------------------------------
# filtered algebras, associated graded, Rees algebra
# ---------------------------------------------------------------------------

class FilteredAlgebra:
    """Generators with filtration degrees and relations whose top part is quadratic."""

    def __init__(self, names, relations, degrees=None, weights=None, name=None):
        self.names = list(names)
        self.relations = [r for r in relations if not r.is_zero()]
        self.degrees = list(degrees) if degrees is not None else [1] * len(self.names)
        self.weights = None if weights is None else [tuple(w) for w in weights]
        self.name = name or "filtered"
        for r in self.relations:
            top = self.top_part(r)
            if top.is_zero() or not top.is_homogeneous(2):
                raise SpecError(f"top part of {r.format(self.names)} is not quadratic")
        self._rewriters = {}

    @property
    def ngens(self):
        return len(self.names)

    def filtration_degree(self, w):
        return sum(self.degrees[g] for g in w)

    def top_part(self, r):
        top = max(self.filtration_degree(w) for w in r.terms)
        return FreeElement({w: c for w, c in r.terms.items() if self.filtration_degree(w) == top})

    def is_homogeneous(self):
        return all(r.is_homogeneous(2) for r in self.relations)

    def rewriter(self, order=None, step_limit=DEFAULT_STEP_LIMIT):
        order = None if order is None else tuple(order)
        if order not in self._rewriters:
            self._rewriters[order] = RewriteSystem.from_relations(self.relations, self.ngens, order, step_limit)
        return self._rewriters[order]

    def resolve_order(self, order):
        return _resolve_order(self.names, order)

    def __repr__(self):
        return f"FilteredAlgebra({self.name!r}, d={self.ngens}, relations={len(self.relations)})"


def associated_graded(F: FilteredAlgebra) -> QuadraticAlgebra:
    tops = [F.top_part(r) for r in F.relations]
    return QuadraticAlgebra(F.names, tops, weights=F.weights, name=f"gr({F.name})")


@dataclass
class ReesPresentation:
    """Homogenised presentation with a central degree-one generator z."""

    source: FilteredAlgebra
    algebra: QuadraticAlgebra
    z: int
    homogenized: list = field(default_factory=list)
    centrality: list = field(default_factory=list)

    def specialize(self, value):
        """Relations over the original generators after z -> value (0 or 1)."""
        if value not in (0, 1):
            raise ValueError("z can only be specialised to 0 or 1")
        out = []
        for r in self.homogenized + self.centrality:
            terms = {}
            for w, c in r.terms.items():
                if self.z in w:
                    if value == 0:
                        continue
                    w = tuple(g for g in w if g != self.z)
                _acc(terms, w, c)
            e = FreeElement(terms)
            if not e.is_zero():
                out.append(e)
        return out


def rees_algebra(F: FilteredAlgebra) -> ReesPresentation:
    if any(deg != 1 for deg in F.degrees):
        raise SpecError("Rees construction implemented for degree-one generators")
    d = F.ngens
    z = d
    names = F.names + [_fresh_name("z", F.names)]
    homog = []
    for r in F.relations:
        terms = {}
        for w, c in r.terms.items():
            terms[w + (z,) * (2 - len(w))] = c
        homog.append(FreeElement(terms))
    central = [FreeElement({(z, g): ONE, (g, z): -ONE}) for g in range(d)]
    weights = None if F.weights is None else F.weights + [tuple(0 for _ in F.weights[0])]
    alg = QuadraticAlgebra(names, homog + central, weights=weights, name=f"rees({F.name})")
    return ReesPresentation(F, alg, z, homog, central)


def _fresh_name(base, taken):
    name, i = base, 0
    while name in taken:
        i += 1
        name = f"{base}{i}"
    return name


# ---------------------------------------------------------------------------
# presets
# ---------------------------------------------------------------------------

def _rel(pairs):
    return FreeElement({tuple(w): as_scalar(c) for w, c in pairs})


def quantum_plane(n=2):
    """Quantum affine n-space: x_j x_i = q x_i x_j for i < j."""
    names = ["x", "y"] if n == 2 else [f"x{i + 1}" for i in range(n)]
    q = q_power(1)
    rels = [_rel([((j, i), 1), ((i, j), -q)]) for i in range(n) for j in range(i + 1, n)]
    weights = [tuple((1 if a == i else 0) - (1 if a == i + 1 else 0) for a in range(n - 1)) for i in range(n)]
    name = "quantum-plane" if n == 2 else f"quantum-plane({n})"
    return QuadraticAlgebra(names, rels, weights=weights, name=name)


def quantum_matrices(m, n):
    """Coordinate algebra of quantum m x n matrices, generators row-major."""
    idx = lambda i, j: i * n + j  # noqa: E731
    names = [f"x{i + 1}{j + 1}" if m < 10 and n < 10 else f"x_{i + 1}_{j + 1}" for i in range(m) for j in range(n)]
    q = q_power(1)
    qi = q_power(-1)
    rels = []
    for i in range(m):
        for k in range(m):
            for j in range(n):
                for l in range(n):
                    a, b = idx(i, j), idx(k, l)
                    if i == k and j < l:
                        rels.append(_rel([((a, b), 1), ((b, a), -qi)]))
                    elif j == l and i < k:
                        rels.append(_rel([((a, b), 1), ((b, a), -qi)]))
                    elif i < k and j > l:
                        rels.append(_rel([((a, b), 1), ((b, a), -1)]))
                    elif i < k and j < l:
                        rels.append(_rel([((a, b), 1), ((b, a), -1), ((idx(i, l), idx(k, j)), q - qi)]))
    weights = [tuple((1 if a == j else 0) - (1 if a == j + 1 else 0) for a in range(n - 1))
               for i in range(m) for j in range(n)]
    return QuadraticAlgebra(names, rels, weights=weights, name=f"quantum-matrices({m},{n})")


def so_even(n):
    """Quantum symmetric algebra of the natural U_q(so_2n)-module."""
    if n < 2:
        raise SpecError("so-even(n) needs n >= 2")
    N = 2 * n
    v = lambda a: a - 1  # noqa: E731  (1-based labels)
    q = q_power(1)
    rels = []
    for a in range(1, N + 1):
        for b in range(a + 1, N + 1):
            if a + b != N + 1:
                rels.append(_rel([((v(b), v(a)), 1), ((v(a), v(b)), -q)]))
    rels.append(_rel([((v(n + 1), v(n)), 1), ((v(n), v(n + 1)), -1)]))
    for i in range(1, n):
        rels.append(_rel([
            ((v(N - i), v(i + 1)), 1),
            ((v(i + 1), v(N - i)), -(q * q)),
            ((v(i), v(N + 1 - i)), q),
            ((v(N + 1 - i), v(i)), -q),
        ]))
    names = [f"v{a}" for a in range(1, N + 1)]
    return QuadraticAlgebra(names, rels, name=f"so-even({n})")


def weyl_q():
    """x y - q^-1 y x = 1, filtered by word length."""
    rel = _rel([((0, 1), 1), ((1, 0), -q_power(-1)), ((), -1)])
    return FilteredAlgebra(["x", "y"], [rel], weights=[(1,), (-1,)], name="weyl-q")


def free_algebra(d):
    names = [f"v{i + 1}" for i in range(d)]
    return QuadraticAlgebra(names, [], name=f"free({d})")


_PRESET_RE = re.compile(r"^\s*([a-z][a-z0-9-]*)\s*(?:\((.*)\))?\s*$")


def parse_preset(text):
    m = _PRESET_RE.match(text)
    if not m:
        raise SpecError(f"malformed preset name {text!r}")
    name, args = m.group(1), m.group(2)
    return name, ([] if args is None or not args.strip() else _split_args(args))


def _split_args(s):
    out, depth, cur = [], 0, ""
    for ch in s:
        if ch == "," and depth == 0:
            out.append(cur.strip())
            cur = ""
            continue
        depth += ch == "("
        depth -= ch == ")"
        cur += ch
    out.append(cur.strip())
    return out


def _int_args(name, args, count, defaults=()):
    args = list(args) + list(defaults)[len(args):] if len(args) < count else list(args)
    if len(args) != count:
        raise SpecError(f"{name} expects {count} integer arguments")
    try:
        return [int(a) for a in args]
    except ValueError as exc:
        raise SpecError(f"{name}: non-integer argument") from exc


def algebra_preset(text):
    """Algebra presets by name: quantum-plane(n), quantum-matrices(m,n), so-even(n), weyl-q."""
    name, args = parse_preset(text)
    if name == "quantum-plane":
        (n,) = _int_args(name, args, 1, (2,))
        return quantum_plane(n)
    if name == "quantum-matrices":
        m, n = _int_args(name, args, 2)
        return quantum_matrices(m, n)
    if name == "so-even":
        (n,) = _int_args(name, args, 1)
        return so_even(n)
    if name == "weyl-q":
        return weyl_q()
    if name == "free":
        (d,) = _int_args(name, args, 1)
        return free_algebra(d)
    raise SpecError(f"unknown algebra preset {text!r}")


# ---------------------------------------------------------------------------
# spec files
# ---------------------------------------------------------------------------

def element_to_spec(x: FreeElement, names):
    return [{"coefficient": str(c), "word": [names[g] for g in w]} for w, c in sorted(x.terms.items())]


def element_from_spec(terms, names, where="relation"):
    if not isinstance(terms, list):
        raise SpecError(f"{where}: expected a list of terms")
    out = {}
    for k, t in enumerate(terms):
        loc = f"{where}[{k}]"
        if not isinstance(t, dict) or "word" not in t:
            raise SpecError(f"{loc}: expected an object with 'coefficient' and 'word'")
        try:
            c = parse_scalar(t.get("coefficient", "1"))
        except (ValueError, ZeroDivisionError) as exc:
            raise SpecError(f"{loc}.coefficient: {exc}") from exc
        word = t["word"]
        if isinstance(word, str):
            word = word.split()
        try:
            w = tuple(names.index(g) for g in word)
        except ValueError as exc:
            raise SpecError(f"{loc}.word: unknown generator in {word!r}") from exc
        _acc(out, w, c)
    return FreeElement(out)


def algebra_from_spec(spec):
    """Build a QuadraticAlgebra (or FilteredAlgebra) from a JSON-style dict."""
    if not isinstance(spec, dict):
        raise SpecError("algebra spec must be an object")
    names = spec.get("generators")
    if not isinstance(names, list) or not names or not all(isinstance(g, str) for g in names):
        raise SpecError("generators: expected a nonempty list of names")
    rels_raw = spec.get("relations", [])
    if not isinstance(rels_raw, list):
        raise SpecError("relations: expected a list")
    rels = [element_from_spec(r, names, f"relations[{i}]") for i, r in enumerate(rels_raw)]
    weights = spec.get("weights")
    name = spec.get("name", "custom")
    if spec.get("filtered") or any(not r.is_homogeneous(2) for r in rels if not r.is_zero()):
        return FilteredAlgebra(names, rels, degrees=spec.get("degrees"), weights=weights, name=name)
    return QuadraticAlgebra(names, rels, weights=weights, name=name)


def algebra_to_spec(A):
    rels = A.relations.basis if isinstance(A, QuadraticAlgebra) else A.relations
    out = {"name": A.name, "generators": list(A.names), "relations": [element_to_spec(r, A.names) for r in rels]}
    if A.weights is not None:
        out["weights"] = [list(w) for w in A.weights]
    if isinstance(A, FilteredAlgebra):
        out["filtered"] = True
    return out
