"""Finite-dimensional associative algebras given by structure constants.

Subalgebras are plain :class:`~rbx.exactlinalg.Subspace` objects in the
ambient coordinate space; every routine here takes the context explicitly.
"""

from __future__ import annotations

import math

import re
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from itertools import product
from typing import Iterable, Sequence

from .exactlinalg import (
    ONE,
    ZERO,
    Mat,
    Subspace,
    combine,
    format_scalar,
    kernel,
    parse_scalar,
    pivot_columns,
    rref,
    to_scalar,
)


class ContextMismatch(ValueError):
    pass


class NotClosedError(ValueError):
    pass


@dataclass(frozen=True, eq=False)
class AlgebraContext:
    name: str
    basis_labels: tuple[str, ...]
    # products[i * dim + j] = sparse coordinates of e_i e_j as ((k, c), ...)
    products: tuple[tuple[tuple[int, Fraction], ...], ...]
    unit: tuple[Fraction, ...] | None = None
    matrix_order: int | None = None

    @property
    def dim(self) -> int:
        return len(self.basis_labels)

    def index(self, label: str) -> int:
        return self.basis_labels.index(label)

    def basis_vector(self, i: int | str) -> tuple[Fraction, ...]:
        if isinstance(i, str):
            i = self.index(i)
        return tuple(ONE if k == i else ZERO for k in range(self.dim))

    def product(self, i: int, j: int) -> tuple[tuple[int, Fraction], ...]:
        return self.products[i * self.dim + j]

    def mul_coords(self, u: Sequence, v: Sequence) -> tuple[Fraction, ...]:
        d = self.dim
        out = [ZERO] * d
        nv = [(j, b) for j, b in enumerate(v) if b]
        for i, a in enumerate(u):
            if not a:
                continue
            for j, b in nv:
                for k, c in self.products[i * d + j]:
                    out[k] += a * b * c
        return tuple(out)

    @property
    def int_products(self):
        """Integer structure constants, or None if some constant is not integral."""
        cached = self.__dict__.get("_int_products", False)
        if cached is False:
            if all(c.denominator == 1 for p in self.products for _, c in p):
                cached = tuple(tuple((k, int(c)) for k, c in p) for p in self.products)
            else:
                cached = None
            object.__setattr__(self, "_int_products", cached)
        return cached

    def structure_tensor(self) -> list[list[list[Fraction]]]:
        d = self.dim
        t = [[[ZERO] * d for _ in range(d)] for _ in range(d)]
        for i in range(d):
            for j in range(d):
                for k, c in self.product(i, j):
                    t[i][j][k] = c
        return t

    def is_associative(self) -> bool:
        d = self.dim
        for i, j, k in product(range(d), repeat=3):
            ei, ej, ek = self.basis_vector(i), self.basis_vector(j), self.basis_vector(k)
            if self.mul_coords(self.mul_coords(ei, ej), ek) != self.mul_coords(ei, self.mul_coords(ej, ek)):
                return False
        return True

    def unit_is_valid(self) -> bool:
        if self.unit is None:
            return True
        return all(
            self.mul_coords(self.unit, self.basis_vector(i)) == self.basis_vector(i)
            and self.mul_coords(self.basis_vector(i), self.unit) == self.basis_vector(i)
            for i in range(self.dim)
        )

    def element(self, coords: Sequence) -> "Element":
        return Element(self, tuple(to_scalar(x) for x in coords))

    def parse_element(self, text: str) -> "Element":
        return Element(self, parse_combination(text, self.basis_labels))

    def __repr__(self):
        return f"AlgebraContext({self.name}, dim={self.dim})"


@dataclass(frozen=True)
class Element:
    context: AlgebraContext
    coords: tuple[Fraction, ...]

    def __post_init__(self):
        if len(self.coords) != self.context.dim:
            raise ValueError("coordinate length does not match the context dimension")

    def _check(self, other: "Element"):
        if other.context is not self.context:
            raise ContextMismatch(f"{self.context.name} vs {other.context.name}")

    def __mul__(self, other):
        if isinstance(other, Element):
            return mul(self, other)
        c = to_scalar(other)
        return Element(self.context, tuple(c * x for x in self.coords))

    def __rmul__(self, c):
        c = to_scalar(c)
        return Element(self.context, tuple(c * x for x in self.coords))

    def __add__(self, other: "Element") -> "Element":
        self._check(other)
        return Element(self.context, tuple(a + b for a, b in zip(self.coords, other.coords)))

    def __sub__(self, other: "Element") -> "Element":
        self._check(other)
        return Element(self.context, tuple(a - b for a, b in zip(self.coords, other.coords)))

    def __neg__(self) -> "Element":
        return Element(self.context, tuple(-a for a in self.coords))

    def is_zero(self) -> bool:
        return not any(self.coords)

    def __str__(self):
        return format_combination(self.coords, self.context.basis_labels)


def mul(a: Element, b: Element) -> Element:
    """Bilinear product through the structure constants."""
    a._check(b)
    return Element(a.context, a.context.mul_coords(a.coords, b.coords))


# --- shipped contexts --------------------------------------------------------


@lru_cache(maxsize=None)
def matrix_algebra(n: int) -> AlgebraContext:
    """M_n(Q) with matrix unities e_ij in row-major order."""
    labels = tuple(f"e{i + 1}{j + 1}" for i in range(n) for j in range(n))
    prods = []
    for i, j in product(range(n), repeat=2):
        for k, l in product(range(n), repeat=2):
            prods.append(((i * n + l, ONE),) if j == k else ())
    unit = tuple(ONE if i == j else ZERO for i in range(n) for j in range(n))
    return AlgebraContext(f"M{n}", labels, tuple(prods), unit, matrix_order=n)


@lru_cache(maxsize=None)
def sum_of_fields(n: int) -> AlgebraContext:
    """F^n = Ff_1 + ... + Ff_n with orthogonal idempotents."""
    labels = tuple(f"f{i + 1}" for i in range(n))
    prods = tuple(((i, ONE),) if i == j else () for i in range(n) for j in range(n))
    return AlgebraContext(f"F{n}", labels, prods, tuple(ONE for _ in range(n)))


M2 = matrix_algebra(2)
M3 = matrix_algebra(3)
F3 = sum_of_fields(3)

CONTEXTS = {"M2": M2, "M3": M3, "F3": F3}


def get_context(name: str) -> AlgebraContext:
    if name in CONTEXTS:
        return CONTEXTS[name]
    m = re.fullmatch(r"M(\d+)", name)
    if m:
        return matrix_algebra(int(m.group(1)))
    m = re.fullmatch(r"F(\d+)", name)
    if m:
        return sum_of_fields(int(m.group(1)))
    raise KeyError(f"unknown algebra context {name!r}")


def coords_to_matrix(ctx: AlgebraContext, coords: Sequence) -> Mat:
    n = ctx.matrix_order
    if n is None:
        raise ValueError(f"{ctx.name} is not a matrix algebra")
    return Mat(n, n, coords)


def matrix_to_coords(m: Mat) -> tuple[Fraction, ...]:
    return m.entries


def unit_index_pairs(ctx: AlgebraContext) -> list[tuple[int, int]]:
    n = ctx.matrix_order
    if n is None:
        raise ValueError(f"{ctx.name} is not a matrix algebra")
    return [(i, j) for i in range(n) for j in range(n)]


# --- subalgebra machinery ----------------------------------------------------


def product_space(A: Subspace, B: Subspace, ctx: AlgebraContext) -> Subspace:
    """span{a b : a in A, b in B}."""
    return Subspace.span([ctx.mul_coords(a, b) for a in A.basis for b in B.basis], ctx.dim)


def is_product_closed(S: Subspace, ctx: AlgebraContext) -> bool:
    return S.contains_subspace(product_space(S, S, ctx))


def subalgebra_closure(S: Subspace, ctx: AlgebraContext) -> tuple[Subspace, bool]:
    """Smallest product-closed subspace containing S, and whether S was closed."""
    current = S
    closed = None
    while True:
        nxt = current.sum(product_space(current, current, ctx))
        if closed is None:
            closed = nxt.dim == current.dim
        if nxt.dim == current.dim:
            return current, closed
        current = nxt


def _require_closed(A: Subspace, ctx: AlgebraContext):
    if not is_product_closed(A, ctx):
        raise NotClosedError("subspace is not closed under the product")


def left_mult_matrix(x: Sequence, A: Subspace, ctx: AlgebraContext) -> Mat:
    """Matrix of a -> x a on A, in A's canonical basis."""
    cols = [A.coordinates(ctx.mul_coords(x, b)) for b in A.basis]
    return Mat.from_columns(cols) if cols else Mat.zeros(0)


def radical(A: Subspace, ctx: AlgebraContext) -> Subspace:
    """Jacobson radical of A by the trace criterion (char 0).

    rad A = {x in A : tr L_{xy} = 0 for all y in A}, L the left regular
    action of A on itself.  Valid without a unit element.
    """
    _require_closed(A, ctx)
    m = A.dim
    if m == 0:
        return A
    # gram[i][j] = tr L_{b_i b_j}
    gram = [[left_mult_matrix(ctx.mul_coords(bi, bj), A, ctx).trace() for bj in A.basis] for bi in A.basis]
    # x = sum c_i b_i in rad  <=>  sum_i c_i gram[i][j] = 0 for all j
    ker = kernel(Mat.from_rows(gram).T)
    return Subspace.span([combine(A.basis, c, ctx.dim) for c in ker.basis], ctx.dim)


def trace_form_discriminant(A: Subspace, ctx: AlgebraContext) -> Fraction:
    """det of (tr L_{b_i b_j}) over A's canonical basis.

    Changing basis multiplies it by a nonzero square, so its square class is
    an invariant.  A 2-dimensional semisimple commutative algebra over Q
    splits as Q + Q exactly when this is a rational square.
    """
    _require_closed(A, ctx)
    if not A.dim:
        return Fraction(1)
    gram = [[left_mult_matrix(ctx.mul_coords(bi, bj), A, ctx).trace() for bj in A.basis] for bi in A.basis]
    return Mat.from_rows(gram).det()


def is_rational_square(q: Fraction) -> bool:
    q = Fraction(q)
    if q < 0:
        return False
    n, d = q.numerator, q.denominator
    return math.isqrt(n) ** 2 == n and math.isqrt(d) ** 2 == d


def semisimple_dim(A: Subspace, ctx: AlgebraContext) -> int:
    return A.dim - radical(A, ctx).dim


def power_series(A: Subspace, ctx: AlgebraContext) -> list[Subspace]:
    """[A, A^2, A^3, ...] until the chain stabilises."""
    chain = [A]
    while True:
        nxt = product_space(chain[-1], A, ctx)
        if nxt.dim == chain[-1].dim:
            return chain
        chain.append(nxt)
        if nxt.dim == 0:
            return chain


def is_nilpotent(A: Subspace, ctx: AlgebraContext) -> bool:
    _require_closed(A, ctx)
    return power_series(A, ctx)[-1].dim == 0


def has_trivial_product(A: Subspace, ctx: AlgebraContext) -> bool:
    return product_space(A, A, ctx).dim == 0


def _annihilator(A: Subspace, ctx: AlgebraContext, side: str) -> Subspace:
    m = A.dim
    if m == 0:
        return A
    rows = []
    for b in A.basis:
        prods = [ctx.mul_coords(bi, b) if side == "left" else ctx.mul_coords(b, bi) for bi in A.basis]
        for k in range(ctx.dim):
            rows.append([p[k] for p in prods])
    ker = kernel(Mat.from_rows(rows))
    return Subspace.span([combine(A.basis, c, ctx.dim) for c in ker.basis], ctx.dim)


def annihilators(A: Subspace, ctx: AlgebraContext) -> tuple[Subspace, Subspace]:
    """(left, right) annihilators inside A: {x : xA = 0}, {x : Ax = 0}."""
    _require_closed(A, ctx)
    return _annihilator(A, ctx, "left"), _annihilator(A, ctx, "right")


def center(A: Subspace, ctx: AlgebraContext) -> Subspace:
    if A.dim == 0:
        return A
    rows = []
    for b in A.basis:
        diffs = [[p - q for p, q in zip(ctx.mul_coords(bi, b), ctx.mul_coords(b, bi))] for bi in A.basis]
        for k in range(ctx.dim):
            rows.append([d[k] for d in diffs])
    ker = kernel(Mat.from_rows(rows))
    return Subspace.span([combine(A.basis, c, ctx.dim) for c in ker.basis], ctx.dim)


def has_unit(A: Subspace, ctx: AlgebraContext) -> bool:
    """Whether A has its own identity element (not necessarily the ambient one)."""
    m = A.dim
    if m == 0:
        return True
    rows = []
    for b in A.basis:
        left = [ctx.mul_coords(bi, b) for bi in A.basis]
        right = [ctx.mul_coords(b, bi) for bi in A.basis]
        for k in range(ctx.dim):
            rows.append([v[k] for v in left] + [b[k]])
            rows.append([v[k] for v in right] + [b[k]])
    red, r = rref(Mat.from_rows(rows))
    return m not in pivot_columns(red, r)


def is_homogeneous(V: Subspace, ctx: AlgebraContext) -> bool:
    """V is spanned by the basis unities it contains."""
    members = sum(1 for i in range(ctx.dim) if V.contains(ctx.basis_vector(i)))
    return members == V.dim


@dataclass(frozen=True)
class AlgebraProfile:
    """Computable isomorphism-type data of a subalgebra."""

    dim: int
    radical_dim: int
    nilpotent: bool
    trivial_product: bool
    ann_l_dim: int
    ann_r_dim: int
    homogeneous: bool
    square_dim: int
    commutative: bool
    unital: bool

    @property
    def semisimple_dim(self) -> int:
        return self.dim - self.radical_dim

    def invariant_part(self, swap_sides: bool = False) -> tuple:
        """Everything preserved by (anti-)isomorphisms; homogeneity is basis-bound."""
        l, r = (self.ann_r_dim, self.ann_l_dim) if swap_sides else (self.ann_l_dim, self.ann_r_dim)
        return (self.dim, self.radical_dim, self.nilpotent, self.trivial_product, l, r,
                self.square_dim, self.commutative, self.unital)


def profile(A: Subspace, ctx: AlgebraContext) -> AlgebraProfile | None:
    """Profile of A, or None when A is not product-closed."""
    if not is_product_closed(A, ctx):
        return None
    left, right = annihilators(A, ctx)
    sq = product_space(A, A, ctx)
    return AlgebraProfile(
        dim=A.dim,
        radical_dim=radical(A, ctx).dim,
        nilpotent=is_nilpotent(A, ctx),
        trivial_product=sq.dim == 0,
        ann_l_dim=left.dim,
        ann_r_dim=right.dim,
        homogeneous=is_homogeneous(A, ctx),
        square_dim=sq.dim,
        commutative=center(A, ctx).dim == A.dim,
        unital=has_unit(A, ctx),
    )


# --- linear combinations and the context file format ------------------------

_TERM = re.compile(r"^\s*([+-]?\s*[0-9/]*)\s*\*?\s*([A-Za-z_][A-Za-z0-9_]*)\s*$")


def format_combination(coords: Sequence, labels: Sequence[str]) -> str:
    terms = [f"{format_scalar(c)}*{lab}" for c, lab in zip(coords, labels) if c]
    return " + ".join(terms) if terms else "0"


def parse_combination(text: str, labels: Sequence[str]) -> tuple[Fraction, ...]:
    out = [ZERO] * len(labels)
    text = text.strip()
    if text == "0":
        return tuple(out)
    # split on + and on binary minus, keeping signs attached to the term
    chunks = re.split(r"\s+\+\s+|(?<=\S)\s+(?=-)", text)
    for chunk in chunks:
        chunk = chunk.strip()
        if not chunk:
            continue
        m = _TERM.match(chunk)
        if not m:
            raise ValueError(f"cannot parse term {chunk!r}")
        coeff, label = m.group(1).replace(" ", ""), m.group(2)
        if coeff in ("", "+"):
            c = ONE
        elif coeff == "-":
            c = -ONE
        else:
            c = parse_scalar(coeff)
        if label not in labels:
            raise ValueError(f"unknown basis label {label!r}")
        out[labels.index(label)] += c
    return tuple(out)


def export_context(ctx: AlgebraContext) -> str:
    lines = [f"algebra {ctx.name} dim={ctx.dim}", "basis " + " ".join(ctx.basis_labels)]
    if ctx.unit is not None:
        lines.append("unit " + format_combination(ctx.unit, ctx.basis_labels))
    for i in range(ctx.dim):
        for j in range(ctx.dim):
            p = ctx.product(i, j)
            if p:
                coords = [ZERO] * ctx.dim
                for k, c in p:
                    coords[k] = c
                rhs = format_combination(coords, ctx.basis_labels)
                lines.append(f"{ctx.basis_labels[i]} * {ctx.basis_labels[j]} = {rhs}")
    return "\n".join(lines) + "\n"


def parse_context(text: str) -> AlgebraContext:
    lines = [ln.strip() for ln in text.splitlines() if ln.strip() and not ln.strip().startswith("#")]
    m = re.fullmatch(r"algebra\s+(\S+)\s+dim=(\d+)", lines[0])
    if not m:
        raise ValueError("missing 'algebra <name> dim=<d>' header")
    name, d = m.group(1), int(m.group(2))
    if not lines[1].startswith("basis "):
        raise ValueError("missing basis line")
    labels = tuple(lines[1].split()[1:])
    if len(labels) != d:
        raise ValueError("basis label count does not match dim")
    unit = None
    table: dict[tuple[int, int], tuple] = {}
    for ln in lines[2:]:
        if ln.startswith("unit "):
            unit = parse_combination(ln[5:], labels)
            continue
        mm = re.fullmatch(r"(\S+)\s*\*\s*(\S+)\s*=\s*(.+)", ln)
        if not mm:
            raise ValueError(f"cannot parse line {ln!r}")
        i, j = labels.index(mm.group(1)), labels.index(mm.group(2))
        coords = parse_combination(mm.group(3), labels)
        table[(i, j)] = tuple((k, c) for k, c in enumerate(coords) if c)
    prods = tuple(table.get((i, j), ()) for i in range(d) for j in range(d))
    order = None
    mo = re.fullmatch(r"M(\d+)", name)
    if mo and int(mo.group(1)) ** 2 == d:
        order = int(mo.group(1))
    return AlgebraContext(name, labels, prods, unit, matrix_order=order)


def span_of_labels(ctx: AlgebraContext, labels: Iterable[str]) -> Subspace:
    return Subspace.span([ctx.basis_vector(lab) for lab in labels], ctx.dim)


def span_of(ctx: AlgebraContext, exprs: Iterable[str]) -> Subspace:
    """Span of elements written as combinations, e.g. 'e21 - e23'."""
    return Subspace.span([parse_combination(e, ctx.basis_labels) for e in exprs], ctx.dim)
