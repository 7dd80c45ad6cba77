"""Words, elements of the tensor algebra T(V), and graded subspaces."""
from __future__ import annotations

from itertools import product

from .exactalg import ONE, ZERO, as_scalar, rank, row_reduce

__all__ = [
    "FreeElement",
    "GradedSubspace",
    "words_of_degree",
    "word_key",
    "span_reduce",
    "ideal_component",
    "ideal_component_recursive",
]


def words_of_degree(d: int, n: int):
    """All d**n words of length n in letters 0..d-1, lexicographic."""
    if n < 0:
        raise ValueError("degree must be nonnegative")
    return [tuple(w) for w in product(range(d), repeat=n)]


def word_key(order=None):
    """Sort key placing words in DESCENDING order under a generator order.

    ``order`` lists generator indices from smallest to largest; the
    default is declaration order.  Descending order makes the largest word
    of a relation its pivot, i.e. its leading word.
    """
    if order is None:
        return lambda w: tuple(-g for g in w)
    rank_of = {g: i for i, g in enumerate(order)}
    return lambda w: tuple(-rank_of[g] for g in w)


class FreeElement:
    """Finite linear combination of words with Scalar coefficients."""

    __slots__ = ("terms",)

    def __init__(self, terms=None):
        clean = {}
        if terms:
            for w, c in dict(terms).items():
                c = as_scalar(c)
                if not c.is_zero():
                    clean[tuple(w)] = c
        self.terms = clean

    @classmethod
    def word(cls, w, coeff=ONE):
        return cls({tuple(w): coeff})

    @classmethod
    def one(cls):
        return cls({(): ONE})

    def is_zero(self):
        return not self.terms

    def degrees(self):
        return sorted({len(w) for w in self.terms})

    def is_homogeneous(self, n=None):
        degs = self.degrees()
        if n is None:
            return len(degs) <= 1
        return degs in ([], [n])

    def homogeneous_part(self, n):
        return FreeElement({w: c for w, c in self.terms.items() if len(w) == n})

    def coeff(self, w):
        return self.terms.get(tuple(w), ZERO)

    def __add__(self, other):
        out = dict(self.terms)
        for w, c in other.terms.items():
            v = out.get(w)
            v = c if v is None else v + c
            if v.is_zero():
                out.pop(w, None)
            else:
                out[w] = v
        return FreeElement._from_clean(out)

    def __neg__(self):
        return FreeElement._from_clean({w: -c for w, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, FreeElement):
            out = {}
            for w1, c1 in self.terms.items():
                for w2, c2 in other.terms.items():
                    w = w1 + w2
                    v = out.get(w)
                    v = c1 * c2 if v is None else v + c1 * c2
                    out[w] = v
            return FreeElement(out)
        c = as_scalar(other)
        if c is NotImplemented:
            return NotImplemented
        if c.is_zero():
            return FreeElement()
        return FreeElement._from_clean({w: v * c for w, v in self.terms.items()})

    def __rmul__(self, other):
        c = as_scalar(other)
        if c is NotImplemented:
            return NotImplemented
        return self * c

    @classmethod
    def _from_clean(cls, terms):
        e = object.__new__(cls)
        e.terms = terms
        return e

    def __eq__(self, other):
        if not isinstance(other, FreeElement):
            return NotImplemented
        return self.terms == other.terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def format(self, names=None):
        if not self.terms:
            return "0"
        parts = []
        for w in sorted(self.terms):
            c = self.terms[w]
            mono = "*".join(names[g] if names else f"v{g}" for g in w) or "1"
            parts.append(f"({c})*{mono}" if w else f"({c})")
        return " + ".join(parts)

    def __repr__(self):
        return f"FreeElement({self.format()})"


class GradedSubspace:
    """Subspace of V^{(x)degree} held as a reduced echelon basis.

    The basis is canonical for the column order it was reduced with, so
    two subspaces reduced under the same order are equal exactly when
    their bases are.
    """

    __slots__ = ("ngens", "degree", "basis", "order")

    def __init__(self, ngens, degree, basis, order=None):
        self.ngens = ngens
        self.degree = degree
        self.basis = list(basis)
        self.order = None if order is None else tuple(order)

    @property
    def dim(self):
        return len(self.basis)

    def __len__(self):
        return len(self.basis)

    def leading_words(self):
        key = word_key(self.order)
        return [min(b.terms, key=key) for b in self.basis]

    def contains(self, x: FreeElement) -> bool:
        if x.is_zero():
            return True
        if not x.is_homogeneous(self.degree):
            return False
        rows = [b.terms for b in self.basis]
        return rank(rows + [x.terms]) == len(rows)

    def __eq__(self, other):
        if not isinstance(other, GradedSubspace):
            return NotImplemented
        if (self.ngens, self.degree, self.dim) != (other.ngens, other.degree, other.dim):
            return False
        if self.order == other.order:
            return self.basis == other.basis
        return all(self.contains(b) for b in other.basis)

    def __repr__(self):
        return f"GradedSubspace(degree={self.degree}, dim={self.dim}, ngens={self.ngens})"


def span_reduce(vectors, degree, ngens=None, order=None) -> GradedSubspace:
    """Row-reduced basis for the span of homogeneous elements of one degree."""
    vectors = list(vectors)
    for v in vectors:
        if not v.is_homogeneous(degree):
            raise ValueError(f"inhomogeneous input for degree {degree}: {v}")
    if ngens is None:
        ngens = 1 + max((g for v in vectors for w in v.terms for g in w), default=-1)
    basis, _ = row_reduce([v.terms for v in vectors], key=word_key(order))
    return GradedSubspace(ngens, degree, [FreeElement._from_clean(b) for b in basis], order)


def _relations_of(I):
    return [b.terms for b in I.basis]


def ideal_component(I: GradedSubspace, n: int, order=None) -> GradedSubspace:
    """Degree-n part of the two-sided ideal generated by degree-2 relations.

    Spanned by w_a * r * w_b over relations r and words with a + b = n - 2.
    """
    d = I.ngens
    if n < 2 or I.dim == 0:
        return GradedSubspace(d, max(n, 0), [], order)
    rels = _relations_of(I)
    gens = []
    for a in range(n - 1):
        b = n - 2 - a
        lefts = words_of_degree(d, a)
        rights = words_of_degree(d, b)
        for r in rels:
            for wl in lefts:
                for wr in rights:
                    gens.append({wl + w + wr: c for w, c in r.items()})
    basis, _ = row_reduce(gens, key=word_key(order))
    return GradedSubspace(d, n, [FreeElement._from_clean(b) for b in basis], order)


def ideal_component_recursive(I: GradedSubspace, n: int, order=None, previous=None) -> GradedSubspace:
    """Same space built as V*<I>_{n-1} + <I>_{n-1}*V (n >= 3)."""
    d = I.ngens
    if n < 2 or I.dim == 0:
        return GradedSubspace(d, max(n, 0), [], order)
    if n == 2:
        return span_reduce(I.basis, 2, d, order)
    prev = previous if previous is not None else ideal_component_recursive(I, n - 1, order)
    gens = []
    for r in _relations_of(prev):
        for g in range(d):
            gens.append({(g,) + w: c for w, c in r.items()})
            gens.append({w + (g,): c for w, c in r.items()})
    basis, _ = row_reduce(gens, key=word_key(order))
    return GradedSubspace(d, n, [FreeElement._from_clean(b) for b in basis], order)
