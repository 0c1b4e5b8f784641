"""Exact rational linear algebra.

Scalars are :class:`fractions.Fraction`; matrices are immutable row-major
tuples of fractions.  Subspaces carry their canonical RREF basis so that
equality of subspaces is equality of bases.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import reduce
from math import lcm
from typing import Iterable, Sequence

Scalar = Fraction

ZERO = Fraction(0)
ONE = Fraction(1)


def to_scalar(value) -> Fraction:
    if isinstance(value, Fraction):
        return value
    if isinstance(value, str):
        return Fraction(value.strip())
    if isinstance(value, float):
        raise TypeError("floats are not exact; pass an int, Fraction or 'p/q' string")
    return Fraction(value)


def format_scalar(x: Fraction) -> str:
    """'p/q', or 'p' when q == 1; the sign always sits on the numerator."""
    return str(Fraction(x))


def parse_scalar(text: str) -> Fraction:
    return Fraction(text.strip())


class Mat:
    """Dense immutable matrix over Q."""

    __slots__ = ("rows", "cols", "entries", "_hash")

    def __init__(self, rows: int, cols: int, entries: Iterable):
        entries = tuple(to_scalar(e) for e in entries)
        if len(entries) != rows * cols:
            raise ValueError(f"expected {rows * cols} entries, got {len(entries)}")
        object.__setattr__(self, "rows", rows)
        object.__setattr__(self, "cols", cols)
        object.__setattr__(self, "entries", entries)
        object.__setattr__(self, "_hash", None)

    def __setattr__(self, name, value):
        raise AttributeError("Mat is immutable")

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence]) -> "Mat":
        rows = [list(r) for r in rows]
        ncols = len(rows[0]) if rows else 0
        if any(len(r) != ncols for r in rows):
            raise ValueError("ragged rows")
        return cls(len(rows), ncols, [x for r in rows for x in r])

    @classmethod
    def from_columns(cls, columns: Sequence[Sequence]) -> "Mat":
        return cls.from_rows(columns).T if columns else cls(0, 0, [])

    @classmethod
    def zeros(cls, rows: int, cols: int | None = None) -> "Mat":
        cols = rows if cols is None else cols
        return cls(rows, cols, [0] * (rows * cols))

    @classmethod
    def identity(cls, n: int) -> "Mat":
        return cls(n, n, [1 if i == j else 0 for i in range(n) for j in range(n)])

    @classmethod
    def scalar(cls, n: int, c) -> "Mat":
        c = to_scalar(c)
        return cls(n, n, [c if i == j else 0 for i in range(n) for j in range(n)])

    def __getitem__(self, ij):
        i, j = ij
        return self.entries[i * self.cols + j]

    def row(self, i: int) -> tuple:
        return self.entries[i * self.cols:(i + 1) * self.cols]

    def col(self, j: int) -> tuple:
        return self.entries[j::self.cols]

    def to_rows(self) -> list[list[Fraction]]:
        return [list(self.row(i)) for i in range(self.rows)]

    @property
    def shape(self) -> tuple[int, int]:
        return self.rows, self.cols

    @property
    def T(self) -> "Mat":
        return Mat(self.cols, self.rows, [self[i, j] for j in range(self.cols) for i in range(self.rows)])

    def is_square(self) -> bool:
        return self.rows == self.cols

    def is_zero(self) -> bool:
        return not any(self.entries)

    def __eq__(self, other):
        if not isinstance(other, Mat):
            return NotImplemented
        return self.shape == other.shape and self.entries == other.entries

    def __hash__(self):
        h = self._hash
        if h is None:
            h = hash((self.rows, self.cols, self.entries))
            object.__setattr__(self, "_hash", h)
        return h

    def __repr__(self):
        return f"Mat({self.rows}x{self.cols}, {serialize_mat(self)})"

    def __add__(self, other: "Mat") -> "Mat":
        self._check_same_shape(other)
        return Mat(self.rows, self.cols, [a + b for a, b in zip(self.entries, other.entries)])

    def __sub__(self, other: "Mat") -> "Mat":
        self._check_same_shape(other)
        return Mat(self.rows, self.cols, [a - b for a, b in zip(self.entries, other.entries)])

    def __neg__(self) -> "Mat":
        return Mat(self.rows, self.cols, [-a for a in self.entries])

    def scale(self, c) -> "Mat":
        c = to_scalar(c)
        return Mat(self.rows, self.cols, [c * a for a in self.entries])

    def __rmul__(self, c):
        if isinstance(c, (int, Fraction)):
            return self.scale(c)
        return NotImplemented

    def __matmul__(self, other: "Mat") -> "Mat":
        if self.cols != other.rows:
            raise ValueError(f"shape mismatch {self.shape} @ {other.shape}")
        ocols = [other.col(j) for j in range(other.cols)]
        out = []
        for i in range(self.rows):
            r = self.row(i)
            nz = [(k, a) for k, a in enumerate(r) if a]
            for c in ocols:
                out.append(sum((a * c[k] for k, a in nz), ZERO))
        return Mat(self.rows, other.cols, out)

    def apply(self, v: Sequence) -> tuple:
        """Matrix-vector product with a coordinate vector."""
        if len(v) != self.cols:
            raise ValueError("vector length mismatch")
        nz = [(j, x) for j, x in enumerate(v) if x]
        return tuple(sum((self.entries[i * self.cols + j] * x for j, x in nz), ZERO) for i in range(self.rows))

    def __pow__(self, k: int) -> "Mat":
        if not self.is_square() or k < 0:
            raise ValueError("power needs a square matrix and k >= 0")
        result, base = Mat.identity(self.rows), self
        while k:
            if k & 1:
                result = result @ base
            base = base @ base
            k >>= 1
        return result

    def trace(self) -> Fraction:
        return sum((self[i, i] for i in range(min(self.rows, self.cols))), ZERO)

    def rank(self) -> int:
        return rref(self)[1]

    def inverse(self) -> "Mat":
        if not self.is_square():
            raise ValueError("inverse of a non-square matrix")
        n = self.rows
        aug = Mat(n, 2 * n, [x for i in range(n) for x in self.row(i) + Mat.identity(n).row(i)])
        red, r = rref(aug)
        if any(red[i, i] != 1 for i in range(n)) or r < n or any(red[i, j] for i in range(n) for j in range(n) if i != j):
            raise ZeroDivisionError("matrix is singular")
        return Mat(n, n, [red[i, n + j] for i in range(n) for j in range(n)])

    def det(self) -> Fraction:
        if not self.is_square():
            raise ValueError("det of a non-square matrix")
        n = self.rows
        a = self.to_rows()
        sign, d = 1, ONE
        for c in range(n):
            p = next((r for r in range(c, n) if a[r][c]), None)
            if p is None:
                return ZERO
            if p != c:
                a[c], a[p] = a[p], a[c]
                sign = -sign
            d *= a[c][c]
            for r in range(c + 1, n):
                if a[r][c]:
                    f = a[r][c] / a[c][c]
                    a[r] = [x - f * y for x, y in zip(a[r], a[c])]
        return sign * d

    def is_invertible(self) -> bool:
        return self.is_square() and self.det() != 0

    def _check_same_shape(self, other: "Mat"):
        if self.shape != other.shape:
            raise ValueError(f"shape mismatch {self.shape} vs {other.shape}")


def rref(m: Mat) -> tuple[Mat, int]:
    """Reduced row-echelon form and rank, with exact pivots."""
    rows = [list(m.row(i)) for i in range(m.rows)]
    pivot_row = 0
    for c in range(m.cols):
        p = next((r for r in range(pivot_row, m.rows) if rows[r][c]), None)
        if p is None:
            continue
        rows[pivot_row], rows[p] = rows[p], rows[pivot_row]
        pr = rows[pivot_row]
        inv = 1 / pr[c]
        if inv != 1:
            pr = rows[pivot_row] = [x * inv for x in pr]
        for r in range(m.rows):
            if r != pivot_row and rows[r][c]:
                f = rows[r][c]
                rows[r] = [x - f * y for x, y in zip(rows[r], pr)]
        pivot_row += 1
        if pivot_row == m.rows:
            break
    return Mat(m.rows, m.cols, [x for r in rows for x in r]), pivot_row


def pivot_columns(reduced: Mat, rank: int) -> list[int]:
    cols = []
    for i in range(rank):
        r = reduced.row(i)
        cols.append(next(j for j, x in enumerate(r) if x))
    return cols


@dataclass(frozen=True)
class Subspace:
    """Subspace of Q^n stored by its canonical RREF basis (as row tuples)."""

    ambient_dim: int
    basis: tuple[tuple[Fraction, ...], ...]

    @classmethod
    def span(cls, vectors: Iterable[Sequence], ambient_dim: int) -> "Subspace":
        vecs = [tuple(to_scalar(x) for x in v) for v in vectors]
        if any(len(v) != ambient_dim for v in vecs):
            raise ValueError("vector length does not match ambient dimension")
        if not vecs:
            return cls(ambient_dim, ())
        red, r = rref(Mat(len(vecs), ambient_dim, [x for v in vecs for x in v]))
        return cls(ambient_dim, tuple(red.row(i) for i in range(r)))

    @classmethod
    def zero(cls, ambient_dim: int) -> "Subspace":
        return cls(ambient_dim, ())

    @classmethod
    def full(cls, ambient_dim: int) -> "Subspace":
        return cls.span(Mat.identity(ambient_dim).to_rows(), ambient_dim)

    @property
    def dim(self) -> int:
        return len(self.basis)

    def contains(self, v: Sequence) -> bool:
        return Subspace.span(list(self.basis) + [v], self.ambient_dim).dim == self.dim

    def __contains__(self, v) -> bool:
        return self.contains(v)

    def contains_subspace(self, other: "Subspace") -> bool:
        return self.sum(other).dim == self.dim

    def sum(self, other: "Subspace") -> "Subspace":
        return Subspace.span(list(self.basis) + list(other.basis), self.ambient_dim)

    def intersection(self, other: "Subspace") -> "Subspace":
        # x = sum a_i u_i = sum b_j w_j  <=>  [U^T | -W^T] (a, b) = 0
        if not self.basis or not other.basis:
            return Subspace.zero(self.ambient_dim)
        cols = [list(u) for u in self.basis] + [[-x for x in w] for w in other.basis]
        ker = kernel(Mat.from_columns(cols))
        k = self.dim
        vecs = []
        for coeffs in ker.basis:
            vecs.append(combine(self.basis, coeffs[:k], self.ambient_dim))
        return Subspace.span(vecs, self.ambient_dim)

    def coordinates(self, v: Sequence) -> tuple[Fraction, ...]:
        """Coefficients of v in this subspace's basis; raises if v is outside."""
        if not self.basis:
            if any(v):
                raise ValueError("vector not in subspace")
            return ()
        piv = [next(j for j, x in enumerate(b) if x) for b in self.basis]
        coeffs = tuple(to_scalar(v[j]) for j in piv)
        if tuple(combine(self.basis, coeffs, self.ambient_dim)) != tuple(to_scalar(x) for x in v):
            raise ValueError("vector not in subspace")
        return coeffs

    def __repr__(self):
        rows = ", ".join("[" + " ".join(format_scalar(x) for x in b) + "]" for b in self.basis)
        return f"Subspace(dim={self.dim}/{self.ambient_dim}: {rows})"


def combine(vectors: Sequence[Sequence], coeffs: Sequence, n: int) -> list[Fraction]:
    out = [ZERO] * n
    for c, v in zip(coeffs, vectors):
        if c:
            for i, x in enumerate(v):
                if x:
                    out[i] += c * x
    return out


def kernel(m: Mat) -> Subspace:
    """Canonical basis of the right null space of m."""
    red, r = rref(m)
    piv = pivot_columns(red, r)
    free = [j for j in range(m.cols) if j not in piv]
    vecs = []
    for f in free:
        v = [ZERO] * m.cols
        v[f] = ONE
        for i, p in enumerate(piv):
            v[p] = -red[i, f]
        vecs.append(v)
    return Subspace.span(vecs, m.cols)


def image(m: Mat) -> Subspace:
    """Column space of m."""
    return Subspace.span([m.col(j) for j in range(m.cols)], m.rows)


# --- polynomials: coefficient tuples, lowest degree first -------------------


def poly_trim(p: Sequence) -> tuple[Fraction, ...]:
    p = [to_scalar(c) for c in p]
    while p and p[-1] == 0:
        p.pop()
    return tuple(p)


def poly_mul(a: Sequence, b: Sequence) -> tuple[Fraction, ...]:
    if not a or not b:
        return ()
    out = [ZERO] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    return poly_trim(out)


def poly_divmod(a: Sequence, b: Sequence) -> tuple[tuple, tuple]:
    a, b = list(poly_trim(a)), poly_trim(b)
    if not b:
        raise ZeroDivisionError("polynomial division by zero")
    q = [ZERO] * max(len(a) - len(b) + 1, 1)
    while len(a) >= len(b) and a:
        shift = len(a) - len(b)
        f = a[-1] / b[-1]
        q[shift] = f
        for i, c in enumerate(b):
            a[i + shift] -= f * c
        a = list(poly_trim(a))
    return poly_trim(q), poly_trim(a)


def poly_monic(p: Sequence) -> tuple[Fraction, ...]:
    p = poly_trim(p)
    return tuple(c / p[-1] for c in p) if p else p


def poly_gcd(a: Sequence, b: Sequence) -> tuple[Fraction, ...]:
    a, b = poly_trim(a), poly_trim(b)
    while b:
        a, b = b, poly_divmod(a, b)[1]
    return poly_monic(a)


def poly_lcm(a: Sequence, b: Sequence) -> tuple[Fraction, ...]:
    if not poly_trim(a) or not poly_trim(b):
        return ()
    return poly_monic(poly_divmod(poly_mul(a, b), poly_gcd(a, b))[0])


def poly_pow(p: Sequence, k: int) -> tuple[Fraction, ...]:
    return reduce(poly_mul, [p] * k, (ONE,))


def poly_compose_affine(p: Sequence, a, b) -> tuple[Fraction, ...]:
    """p(a*x + b)."""
    lin = (to_scalar(b), to_scalar(a))
    out: tuple = ()
    for k, c in enumerate(poly_trim(p)):
        if c:
            term = tuple(c * x for x in poly_pow(lin, k))
            out = poly_add(out, term)
    return poly_trim(out)


def poly_add(a: Sequence, b: Sequence) -> tuple[Fraction, ...]:
    n = max(len(a), len(b))
    return poly_trim([(a[i] if i < len(a) else ZERO) + (b[i] if i < len(b) else ZERO) for i in range(n)])


def poly_eval_mat(p: Sequence, m: Mat) -> Mat:
    """Horner evaluation of p at a square matrix."""
    n = m.rows
    acc = Mat.zeros(n)
    for c in reversed(poly_trim(p)):
        acc = acc @ m + Mat.scalar(n, c)
    return acc


def format_poly(p: Sequence, var: str = "x") -> str:
    p = poly_trim(p)
    if not p:
        return "0"
    terms = []
    for k in range(len(p) - 1, -1, -1):
        c = p[k]
        if not c:
            continue
        mono = "" if k == 0 else (var if k == 1 else f"{var}^{k}")
        if mono and c == 1:
            s = mono
        elif mono and c == -1:
            s = "-" + mono
        else:
            s = format_scalar(c) + ("*" + mono if mono else "")
        terms.append(s)
    return " + ".join(terms).replace("+ -", "- ")


def x_xplus1_exponents(p: Sequence) -> tuple[int, int] | None:
    """(a, b) with p = x^a (x+1)^b, or None if p has another factor."""
    p = poly_monic(p)
    a = 0
    while len(p) > 1 and p[0] == 0:
        p, a = p[1:], a + 1
    b = 0
    while len(p) > 1:
        q, r = poly_divmod(p, (ONE, ONE))
        if poly_trim(r):
            return None
        p, b = q, b + 1
    return (a, b) if p == (ONE,) else None


def format_x_xplus1(a: int, b: int) -> str:
    parts = [f"x^{a}" if a > 1 else "x"] * (a > 0) + [f"(x+1)^{b}" if b > 1 else "(x+1)"] * (b > 0)
    return "*".join(parts) or "1"


def _vector_annihilator(m: Mat, v: Sequence) -> tuple[Fraction, ...]:
    """Monic least-degree p with p(m) v = 0, from the Krylov sequence of v."""
    krylov = [tuple(to_scalar(x) for x in v)]
    while True:
        nxt = m.apply(krylov[-1])
        # find coefficients with nxt = sum c_k krylov[k]; krylov is independent so far
        cols = [list(u) for u in krylov]
        sol = _solve_in_span(cols, nxt)
        if sol is not None:
            return poly_trim([-c for c in sol] + [ONE])
        krylov.append(nxt)


def _solve_in_span(cols: list[list[Fraction]], target: Sequence) -> list[Fraction] | None:
    n = len(target)
    k = len(cols)
    aug = Mat(n, k + 1, [x for i in range(n) for x in [c[i] for c in cols] + [to_scalar(target[i])]])
    red, r = rref(aug)
    piv = pivot_columns(red, r)
    if k in piv:
        return None
    sol = [ZERO] * k
    for i, p in enumerate(piv):
        sol[p] = red[i, k]
    return sol


def minimal_polynomial(m: Mat) -> tuple[Fraction, ...]:
    """Monic minimal polynomial: lcm of the Krylov annihilators of the basis vectors."""
    if not m.is_square():
        raise ValueError("minimal polynomial of a non-square matrix")
    result: tuple = (ONE,)
    for j in range(m.rows):
        e = [ZERO] * m.rows
        e[j] = ONE
        result = poly_lcm(result, _vector_annihilator(m, e))
    return result


def common_denominator(values: Iterable[Fraction]) -> int:
    return reduce(lcm, (to_scalar(v).denominator for v in values), 1)


def serialize_mat(m: Mat) -> list[list[str]]:
    return [[format_scalar(x) for x in m.row(i)] for i in range(m.rows)]


def parse_mat(rows: Sequence[Sequence[str]]) -> Mat:
    return Mat.from_rows([[parse_scalar(x) for x in r] for r in rows])
