"""Exact arithmetic in Q(q) and sparse linear algebra over it.

Scalars are reduced fractions of integer polynomials in ``q``.  The
elimination routines work on rows with polynomial entries (denominators
cleared) and divide out common factors as they go, so no fraction
arithmetic happens in the inner loop.
"""
from __future__ import annotations

import re
from functools import reduce

from flint import fmpz_poly

__all__ = [
    "Scalar",
    "ScalarParseError",
    "SparseMatrix",
    "parse_scalar",
    "scalar_normalize",
    "as_scalar",
    "q_power",
    "signed_q_power",
    "q_integer",
    "row_reduce",
    "rank",
    "kernel_basis",
    "left_kernel_basis",
    "solve_in_span",
]

_ZERO = fmpz_poly([])
_ONE = fmpz_poly([1])
_Q = fmpz_poly([0, 1])


def _poly(x):
    if isinstance(x, fmpz_poly):
        return x
    if isinstance(x, int):
        return fmpz_poly([x])
    return fmpz_poly(list(x))


def _poly_key(p):
    return tuple(int(c) for c in p.coeffs())


class Scalar:
    """Element of Q(q) stored as a canonical fraction ``num/den``.

    ``gcd(num, den) == 1`` and ``den`` has positive leading coefficient, so
    two scalars are equal exactly when their representations are.
    """

    __slots__ = ("num", "den", "_hash")

    def __init__(self, num=0, den=1):
        num = _poly(num)
        den = _poly(den)
        if den.is_zero():
            raise ZeroDivisionError("division by zero polynomial")
        if num.is_zero():
            den = _ONE
        elif not den.is_one():
            g = num.gcd(den)
            if not g.is_one():
                num = num // g
                den = den // g
            if den.leading_coefficient() < 0:
                num, den = -num, -den
        self.num = num
        self.den = den
        self._hash = None

    @classmethod
    def _raw(cls, num, den):
        s = object.__new__(cls)
        s.num = num
        s.den = den
        s._hash = None
        return s

    @classmethod
    def q(cls):
        return cls._raw(_Q, _ONE)

    # ---- predicates -------------------------------------------------
    def is_zero(self):
        return self.num.is_zero()

    def is_one(self):
        return self.num.is_one() and self.den.is_one()

    def is_polynomial(self):
        return self.den.is_one()

    def __bool__(self):
        return not self.num.is_zero()

    # ---- arithmetic -------------------------------------------------
    def __add__(self, other):
        other = as_scalar(other)
        if other is NotImplemented:
            return NotImplemented
        if self.den.is_one() and other.den.is_one():
            return Scalar._raw(self.num + other.num, _ONE)
        return Scalar(self.num * other.den + other.num * self.den, self.den * other.den)

    __radd__ = __add__

    def __neg__(self):
        return Scalar._raw(-self.num, self.den)

    def __sub__(self, other):
        other = as_scalar(other)
        if other is NotImplemented:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = as_scalar(other)
        if other is NotImplemented:
            return NotImplemented
        if self.den.is_one() and other.den.is_one():
            return Scalar._raw(self.num * other.num, _ONE)
        return Scalar(self.num * other.num, self.den * other.den)

    __rmul__ = __mul__

    def inverse(self):
        if self.num.is_zero():
            raise ZeroDivisionError("division by zero polynomial")
        return Scalar(self.den, self.num)

    def __truediv__(self, other):
        other = as_scalar(other)
        if other is NotImplemented:
            return NotImplemented
        return self * other.inverse()

    def __rtruediv__(self, other):
        return as_scalar(other) * self.inverse()

    def __pow__(self, n):
        if not isinstance(n, int):
            return NotImplemented
        if n < 0:
            return self.inverse() ** (-n)
        return Scalar._raw(self.num**n, self.den**n) if n else Scalar._raw(_ONE, _ONE)

    # ---- comparison -------------------------------------------------
    def __eq__(self, other):
        other = as_scalar(other)
        if other is NotImplemented:
            return NotImplemented
        return self.num == other.num and self.den == other.den

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((_poly_key(self.num), _poly_key(self.den)))
        return self._hash

    # ---- display ----------------------------------------------------
    def __str__(self):
        return format_scalar(self)

    def __repr__(self):
        return f"Scalar({format_scalar(self)!r})"


def as_scalar(x):
    if isinstance(x, Scalar):
        return x
    if isinstance(x, int):
        return Scalar._raw(fmpz_poly([x]) if x else _ZERO, _ONE)
    if isinstance(x, fmpz_poly):
        return Scalar._raw(x, _ONE)
    if isinstance(x, str):
        return parse_scalar(x)
    return NotImplemented


ZERO = Scalar(0)
ONE = Scalar(1)


def scalar_normalize(n, d) -> Scalar:
    """Canonical form of the fraction ``n/d`` (polynomials or coefficient lists)."""
    return Scalar(n, d)


def q_power(m: int) -> Scalar:
    if m >= 0:
        return Scalar._raw(_Q**m, _ONE)
    return Scalar._raw(_ONE, _Q ** (-m))


def q_integer(n: int) -> Scalar:
    """Symmetric quantum integer (q^n - q^-n)/(q - q^-1)."""
    return (q_power(n) - q_power(-n)) / (q_power(1) - q_power(-1))


def signed_q_power(s: Scalar):
    """Return ``(sign, m)`` when ``s == sign * q**m``, else None."""
    s = as_scalar(s)
    if s.is_zero():
        return None
    num, den = s.num, s.den
    # a monomial c*q^k has exactly one nonzero coefficient
    nc = [int(c) for c in num.coeffs()]
    dc = [int(c) for c in den.coeffs()]
    if sum(1 for c in nc if c) != 1 or sum(1 for c in dc if c) != 1:
        return None
    a = max(i for i, c in enumerate(nc) if c)
    b = max(i for i, c in enumerate(dc) if c)
    if abs(nc[a]) != 1 or dc[b] != 1:
        return None
    return (1 if nc[a] > 0 else -1), a - b


# ---------------------------------------------------------------------------
# formatting / parsing
# ---------------------------------------------------------------------------

def _format_laurent(coeffs, shift=0):
    parts = []
    for i in range(len(coeffs) - 1, -1, -1):
        c = coeffs[i]
        if not c:
            continue
        e = i - shift
        if e == 0:
            mono = str(abs(c))
        else:
            mono = "q" if e == 1 else f"q^{e}"
            if abs(c) != 1:
                mono = f"{abs(c)}*{mono}"
        sign = "-" if c < 0 else "+"
        parts.append((sign, mono))
    if not parts:
        return "0"
    out = ("-" if parts[0][0] == "-" else "") + parts[0][1]
    for sign, mono in parts[1:]:
        out += f" {sign} {mono}"
    return out


def format_scalar(s: Scalar) -> str:
    nc = [int(c) for c in s.num.coeffs()]
    dc = [int(c) for c in s.den.coeffs()]
    if not nc:
        return "0"
    # denominator q^k prints as a Laurent polynomial
    if sum(1 for c in dc if c) == 1 and dc[-1] == 1:
        return _format_laurent(nc, len(dc) - 1)
    return f"({_format_laurent(nc)})/({_format_laurent(dc)})"


class ScalarParseError(ValueError):
    pass


_TOKEN = re.compile(r"\s*(?:(\d+)|(q)|(\*\*|[-+*/^()]))")


def _tokenize(text):
    pos, out = 0, []
    text = text.strip()
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m or m.end() == pos:
            raise ScalarParseError(f"unexpected character at {pos} in {text!r}")
        num, sym, op = m.groups()
        if num is not None:
            out.append(("num", int(num)))
        elif sym is not None:
            out.append(("q", None))
        else:
            out.append(("op", "^" if op == "**" else op))
        pos = m.end()
    return out


class _Parser:
    def __init__(self, text):
        self.text = text
        self.toks = _tokenize(text)
        self.i = 0

    def peek(self):
        return self.toks[self.i] if self.i < len(self.toks) else (None, None)

    def take(self):
        t = self.peek()
        self.i += 1
        return t

    def expect(self, op):
        t = self.take()
        if t != ("op", op):
            raise ScalarParseError(f"expected {op!r} in {self.text!r}")

    def parse(self):
        if not self.toks:
            raise ScalarParseError("empty scalar")
        val = self.expr()
        if self.i != len(self.toks):
            raise ScalarParseError(f"trailing input in {self.text!r}")
        return val

    def expr(self):
        val = self.term()
        while self.peek() in (("op", "+"), ("op", "-")):
            op = self.take()[1]
            rhs = self.term()
            val = val + rhs if op == "+" else val - rhs
        return val

    def term(self):
        val = self.unary()
        while True:
            t = self.peek()
            if t in (("op", "*"), ("op", "/")):
                self.take()
                rhs = self.unary()
                if t[1] == "/":
                    if rhs.is_zero():
                        raise ScalarParseError("division by zero polynomial")
                    val = val / rhs
                else:
                    val = val * rhs
            elif t[0] in ("num", "q") or t == ("op", "("):
                val = val * self.power()  # implicit product, e.g. 2q
            else:
                return val

    def unary(self):
        t = self.peek()
        if t == ("op", "-"):
            self.take()
            return -self.unary()
        if t == ("op", "+"):
            self.take()
            return self.unary()
        return self.power()

    def power(self):
        base = self.atom()
        if self.peek() == ("op", "^"):
            self.take()
            sign = 1
            while self.peek() in (("op", "-"), ("op", "+")):
                if self.take()[1] == "-":
                    sign = -sign
            t = self.take()
            if t[0] != "num":
                raise ScalarParseError(f"exponent must be an integer in {self.text!r}")
            if base.is_zero() and sign < 0:
                raise ScalarParseError("division by zero polynomial")
            base = base ** (sign * t[1])
        return base

    def atom(self):
        t = self.take()
        if t[0] == "num":
            return as_scalar(t[1])
        if t[0] == "q":
            return Scalar.q()
        if t == ("op", "("):
            val = self.expr()
            self.expect(")")
            return val
        raise ScalarParseError(f"unexpected token in {self.text!r}")


def parse_scalar(text) -> Scalar:
    """Parse e.g. ``"(q^2-1)/(q)"``, ``"q^-1"``, ``"-q + q^-1"``."""
    if isinstance(text, (int, Scalar)):
        return as_scalar(text)
    return _Parser(str(text)).parse()


# ---------------------------------------------------------------------------
# sparse matrices
# ---------------------------------------------------------------------------

class SparseMatrix:
    """rows x cols matrix over Q(q); ``entries`` maps (i, j) to a nonzero Scalar."""

    __slots__ = ("rows", "cols", "entries")

    def __init__(self, rows, cols, entries=None):
        self.rows = rows
        self.cols = cols
        clean = {}
        for (i, j), v in (entries or {}).items():
            if not (0 <= i < rows and 0 <= j < cols):
                raise IndexError(f"entry {(i, j)} outside {rows}x{cols}")
            v = as_scalar(v)
            if not v.is_zero():
                clean[(i, j)] = v
        self.entries = clean

    @classmethod
    def from_dense(cls, data):
        data = [list(r) for r in data]
        rows = len(data)
        cols = len(data[0]) if rows else 0
        return cls(rows, cols, {(i, j): v for i, r in enumerate(data) for j, v in enumerate(r)})

    @classmethod
    def identity(cls, n):
        return cls(n, n, {(i, i): ONE for i in range(n)})

    @classmethod
    def from_rows(cls, rows, cols):
        """Build from a list of {col: value} dicts."""
        ent = {}
        for i, r in enumerate(rows):
            for j, v in r.items():
                ent[(i, j)] = v
        return cls(len(rows), cols, ent)

    def __getitem__(self, ij):
        return self.entries.get(ij, ZERO)

    def row_dicts(self):
        out = [dict() for _ in range(self.rows)]
        for (i, j), v in self.entries.items():
            out[i][j] = v
        return out

    def col_dicts(self):
        out = [dict() for _ in range(self.cols)]
        for (i, j), v in self.entries.items():
            out[j][i] = v
        return out

    def to_dense(self):
        return [[self[i, j] for j in range(self.cols)] for i in range(self.rows)]

    def transpose(self):
        return SparseMatrix(self.cols, self.rows, {(j, i): v for (i, j), v in self.entries.items()})

    def __matmul__(self, other):
        if isinstance(other, SparseMatrix):
            if self.cols != other.rows:
                raise ValueError("shape mismatch")
            orow = other.row_dicts()
            acc = {}
            for (i, k), v in self.entries.items():
                for j, w in orow[k].items():
                    acc[(i, j)] = acc.get((i, j), ZERO) + v * w
            return SparseMatrix(self.rows, other.cols, acc)
        # vector given as dict or list
        vec = other if isinstance(other, dict) else dict(enumerate(other))
        out = {}
        for (i, k), v in self.entries.items():
            w = vec.get(k)
            if w is not None and not as_scalar(w).is_zero():
                out[i] = out.get(i, ZERO) + v * w
        return {i: v for i, v in out.items() if not v.is_zero()}

    def __add__(self, other):
        acc = dict(self.entries)
        for k, v in other.entries.items():
            acc[k] = acc.get(k, ZERO) + v
        return SparseMatrix(self.rows, self.cols, acc)

    def __sub__(self, other):
        return self + other.scale(-1)

    def scale(self, c):
        c = as_scalar(c)
        return SparseMatrix(self.rows, self.cols, {k: v * c for k, v in self.entries.items()})

    def kron(self, other):
        ent = {}
        for (i, j), v in self.entries.items():
            for (k, l), w in other.entries.items():
                ent[(i * other.rows + k, j * other.cols + l)] = v * w
        return SparseMatrix(self.rows * other.rows, self.cols * other.cols, ent)

    def is_zero(self):
        return not self.entries

    def __eq__(self, other):
        if not isinstance(other, SparseMatrix):
            return NotImplemented
        return (self.rows, self.cols, self.entries) == (other.rows, other.cols, other.entries)

    def __repr__(self):
        return f"SparseMatrix({self.rows}x{self.cols}, nnz={len(self.entries)})"


def vstack(mats):
    mats = list(mats)
    cols = mats[0].cols
    ent, off = {}, 0
    for m in mats:
        if m.cols != cols:
            raise ValueError("column mismatch")
        for (i, j), v in m.entries.items():
            ent[(i + off, j)] = v
        off += m.rows
    return SparseMatrix(off, cols, ent)


# ---------------------------------------------------------------------------
# elimination core
# ---------------------------------------------------------------------------

def _clear(row):
    """Scalar row -> primitive polynomial row spanning the same line."""
    dens = [v.den for v in row.values() if not v.den.is_one()]
    if dens:
        lcm = reduce(lambda a, b: a * (b // a.gcd(b)), dens, _ONE)
        prow = {c: v.num * (lcm // v.den) for c, v in row.items()}
    else:
        prow = {c: v.num for c, v in row.items()}
    return _primitive(prow)


def _primitive(prow):
    g = None
    for p in prow.values():
        g = p if g is None else g.gcd(p)
        if g.is_one():
            return prow
    if g is None or g.is_one():
        return prow
    return {c: p // g for c, p in prow.items()}


def _echelon(prows, key):
    """Leading-column elimination.

    Returns {pivot_col: primitive poly row}; each pivot row's smallest
    column under ``key`` is its pivot, and no two rows share a pivot.
    """
    pivots = {}
    for row in prows:
        row = {c: p for c, p in row.items() if not p.is_zero()}
        while row:
            lead = min(row, key=key)
            prow = pivots.get(lead)
            if prow is None:
                pivots[lead] = _primitive(row)
                break
            a, b = prow[lead], row[lead]
            g = a.gcd(b)
            if not g.is_one():
                a, b = a // g, b // g
            new = {}
            for c, p in row.items():
                if c != lead:
                    new[c] = p * a
            for c, p in prow.items():
                if c == lead:
                    continue
                v = new.get(c)
                v = -(p * b) if v is None else v - p * b
                if v.is_zero():
                    new.pop(c, None)
                else:
                    new[c] = v
            row = _primitive(new) if new else new
    return pivots


def _back_substitute(pivots, key):
    order = sorted(pivots, key=key)
    for idx in range(len(order) - 1, -1, -1):
        pc = order[idx]
        prow = pivots[pc]
        a = prow[pc]
        for jdx in range(idx):
            oc = order[jdx]
            orow = pivots[oc]
            b = orow.get(pc)
            if b is None:
                continue
            g = a.gcd(b)
            aa, bb = (a // g, b // g) if not g.is_one() else (a, b)
            new = {c: p * aa for c, p in orow.items() if c != pc}
            for c, p in prow.items():
                if c == pc:
                    continue
                v = new.get(c)
                v = -(p * bb) if v is None else v - p * bb
                if v.is_zero():
                    new.pop(c, None)
                else:
                    new[c] = v
            pivots[oc] = _primitive(new)
    return order


def _default_key(c):
    return c


def row_reduce(rows, key=None):
    """Reduced row echelon form of a list of {col: Scalar} rows.

    Columns are ordered by ``key`` (smallest first); each returned row has
    pivot coefficient 1 at its smallest column, and pivot columns vanish in
    every other row.  Returns ``(basis_rows, pivot_cols)``.
    """
    key = key or _default_key
    prows = []
    for r in rows:
        r = {c: as_scalar(v) for c, v in r.items()}
        r = {c: v for c, v in r.items() if not v.is_zero()}
        if r:
            prows.append(_clear(r))
    pivots = _echelon(prows, key)
    order = _back_substitute(pivots, key)
    out = []
    for pc in order:
        prow = pivots[pc]
        lead = prow[pc]
        out.append({c: Scalar(p, lead) for c, p in prow.items()})
    return out, order


def _rank_rows(rows):
    rows = [r for r in rows if r]
    if not rows:
        return 0
    # sparsest columns become pivots first
    counts = {}
    for r in rows:
        for c in r:
            counts[c] = counts.get(c, 0) + 1
    rank_of = {c: (n, i) for i, (c, n) in enumerate(sorted(counts.items(), key=lambda t: (t[1], repr(t[0]))))}
    prows = sorted((_clear(r) for r in rows), key=len)
    return len(_echelon(prows, rank_of.__getitem__))


def rank(M) -> int:
    """Rank over Q(q) of a SparseMatrix (or a list of {col: Scalar} rows)."""
    if isinstance(M, SparseMatrix):
        return _rank_rows(M.row_dicts())
    return _rank_rows([{c: as_scalar(v) for c, v in r.items() if not as_scalar(v).is_zero()} for r in M])


def kernel_basis(M: SparseMatrix):
    """Basis of {v : M v = 0}, each vector a length-``cols`` list of Scalars."""
    basis, pivots = row_reduce(M.row_dicts())
    pivset = set(pivots)
    out = []
    for f in range(M.cols):
        if f in pivset:
            continue
        v = [ZERO] * M.cols
        v[f] = ONE
        for r, pc in zip(basis, pivots):
            c = r.get(f)
            if c is not None:
                v[pc] = -c
        out.append(v)
    return out


def left_kernel_basis(M: SparseMatrix):
    """Basis of {w : w M = 0}."""
    return kernel_basis(M.transpose())


def solve_in_span(rows, target, key=None):
    """Coefficients expressing ``target`` in the span of ``rows`` or None.

    Works on {col: Scalar} dicts; returns a list of Scalars, one per row.
    """
    tagged = []
    n = len(rows)
    for i, r in enumerate(rows):
        rr = {("c", c): v for c, v in r.items()}
        rr[("t", i)] = ONE
        tagged.append(rr)
    order_key = (lambda c: (0, key(c[1])) if c[0] == "c" else (1, c[1])) if key else (
        lambda c: (0, c[1]) if c[0] == "c" else (1, c[1]))
    basis, pivots = row_reduce(tagged, key=order_key)
    # reduce target against basis rows with real pivots
    t = {("c", c): as_scalar(v) for c, v in target.items() if not as_scalar(v).is_zero()}
    for r, pc in zip(basis, pivots):
        if pc[0] != "c":
            continue
        a = t.get(pc)
        if a is None:
            continue
        for c, v in r.items():
            nv = t.get(c, ZERO) - a * v
            if nv.is_zero():
                t.pop(c, None)
            else:
                t[c] = nv
    if any(c[0] == "c" for c in t):
        return None
    coeffs = [ZERO] * n
    for c, v in t.items():
        coeffs[c[1]] = -v
    return coeffs
