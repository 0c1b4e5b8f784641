"""Automorphisms, anti-automorphisms and operator conjugation.

Composition follows (f * g)(x) = f(g(x)).  Conjugation of an operator R by
psi is psi^-1 R psi for both kinds of morphism.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from itertools import permutations
from typing import Mapping, Sequence

import numpy as np

from . import _kernels
from .algebra import AlgebraContext, ContextMismatch, M2, M3, parse_combination
from .exactlinalg import ZERO, Mat, common_denominator, format_scalar, parse_scalar, to_scalar
from .operators import OperatorMatrix

AUTOMORPHISM = "automorphism"
ANTI_AUTOMORPHISM = "anti_automorphism"


class MorphismError(ValueError):
    pass


@dataclass(frozen=True)
class Morphism:
    context: AlgebraContext
    matrix: Mat
    kind: str = AUTOMORPHISM
    name: str = ""

    def __post_init__(self):
        ctx, m = self.context, self.matrix
        if m.shape != (ctx.dim, ctx.dim):
            raise MorphismError("morphism matrix has the wrong shape")
        if self.kind not in (AUTOMORPHISM, ANTI_AUTOMORPHISM):
            raise MorphismError(f"unknown kind {self.kind!r}")
        if not m.is_invertible():
            raise MorphismError(f"{self.name or 'morphism'} is not invertible")
        bad = _multiplicativity_failure(ctx, m, self.kind == ANTI_AUTOMORPHISM)
        if bad:
            raise MorphismError(f"{self.name or 'morphism'} is not multiplicative on ({bad[0]}, {bad[1]})")
        if ctx.unit is not None and m.apply(ctx.unit) != tuple(ctx.unit):
            raise MorphismError(f"{self.name or 'morphism'} moves the unit")

    @classmethod
    def from_images(cls, ctx: AlgebraContext, images: Mapping[str, str], kind=AUTOMORPHISM, name="") -> "Morphism":
        """Unlisted basis elements are fixed."""
        unknown = set(images) - set(ctx.basis_labels)
        if unknown:
            raise MorphismError(f"unknown basis labels {sorted(unknown)}")
        cols = []
        for lab in ctx.basis_labels:
            cols.append(_image_coords(ctx, images[lab]) if lab in images else ctx.basis_vector(lab))
        return cls(ctx, Mat.from_columns(cols), kind, name)

    def apply(self, v: Sequence) -> tuple[Fraction, ...]:
        return self.matrix.apply(v)

    @property
    def is_anti(self) -> bool:
        return self.kind == ANTI_AUTOMORPHISM

    def inverse(self) -> "Morphism":
        return Morphism(self.context, self.matrix.inverse(), self.kind, f"({self.name})^-1" if self.name else "")

    def __mul__(self, other: "Morphism") -> "Morphism":
        return compose(self, other)


def _image_coords(ctx: AlgebraContext, img) -> tuple[Fraction, ...]:
    """An image given as 'e11 - e13' or as {label: coefficient}."""
    if isinstance(img, str):
        return parse_combination(img, ctx.basis_labels)
    out = [ZERO] * ctx.dim
    for lab, c in img.items():
        out[ctx.index(lab)] += to_scalar(c)
    return tuple(out)


def _multiplicativity_failure(ctx: AlgebraContext, m: Mat, anti: bool):
    cols = [m.col(i) for i in range(ctx.dim)]
    for i in range(ctx.dim):
        for j in range(ctx.dim):
            prod = [ZERO] * ctx.dim
            for k, c in ctx.product(i, j):
                prod[k] = c
            lhs = m.apply(prod)
            rhs = ctx.mul_coords(cols[j], cols[i]) if anti else ctx.mul_coords(cols[i], cols[j])
            if lhs != rhs:
                return ctx.basis_labels[i], ctx.basis_labels[j]
    return None


def compose(f: Morphism, g: Morphism) -> Morphism:
    """(f o g)(x) = f(g(x))."""
    if f.context is not g.context:
        raise ContextMismatch("morphisms live on different algebras")
    kind = AUTOMORPHISM if f.is_anti == g.is_anti else ANTI_AUTOMORPHISM
    name = f"{f.name}*{g.name}" if f.name and g.name else ""
    return Morphism(f.context, f.matrix @ g.matrix, kind, name)


def identity_morphism(ctx: AlgebraContext) -> Morphism:
    return Morphism(ctx, Mat.identity(ctx.dim), AUTOMORPHISM, "id")


def conjugate(R: OperatorMatrix, psi: Morphism) -> OperatorMatrix:
    """psi^-1 R psi."""
    if R.context is not psi.context:
        raise ContextMismatch("operator and morphism live on different algebras")
    return R.with_matrix(psi.matrix.inverse() @ R.matrix @ psi.matrix)


def _require_matrix_context(ctx: AlgebraContext) -> int:
    if ctx.matrix_order is None:
        raise MorphismError(f"{ctx.name} is not a matrix algebra")
    return ctx.matrix_order


def _index_map(ctx: AlgebraContext, fn) -> Mat:
    """Matrix of the linear map X -> fn(X) on M_n (fn acts on n x n Mats)."""
    n = ctx.matrix_order
    return Mat.from_columns([fn(Mat(n, n, ctx.basis_vector(k))).entries for k in range(ctx.dim)])


def inner(T: Mat, ctx: AlgebraContext | None = None, name: str = "") -> Morphism:
    """X -> T^-1 X T."""
    n = T.rows
    ctx = ctx or (M2 if n == 2 else M3 if n == 3 else None)
    if ctx is None or _require_matrix_context(ctx) != n:
        raise MorphismError("T does not match the matrix algebra")
    if not T.is_invertible():
        raise MorphismError("inner automorphism needs an invertible matrix")
    Ti = T.inverse()
    return Morphism(ctx, _index_map(ctx, lambda X: Ti @ X @ T), AUTOMORPHISM, name or "inner")


def transpose_morphism(ctx: AlgebraContext) -> Morphism:
    _require_matrix_context(ctx)
    return Morphism(ctx, _index_map(ctx, lambda X: X.T), ANTI_AUTOMORPHISM, "transpose")


def index_permutation(ctx: AlgebraContext, sigma: Mapping[int, int], name: str) -> Morphism:
    """e_ij -> e_{sigma(i) sigma(j)}, indices 1-based."""
    n = _require_matrix_context(ctx)
    s = {i: sigma.get(i, i) for i in range(1, n + 1)}
    if sorted(s.values()) != list(range(1, n + 1)):
        raise MorphismError(f"{sigma} is not a permutation of 1..{n}")
    images = {f"e{i}{j}": f"e{s[i]}{s[j]}" for i in range(1, n + 1) for j in range(1, n + 1)}
    return Morphism.from_images(ctx, images, AUTOMORPHISM, name)


def _nonzero(name: str, **vals):
    for k, v in vals.items():
        if v == 0:
            raise MorphismError(f"{name}: parameter {k} must be nonzero")


def psi_m2(alpha) -> Morphism:
    a = to_scalar(alpha)
    return Morphism.from_images(M2, {
        "e11": {"e11": 1, "e12": -a},
        "e12": "e12",
        "e22": {"e22": 1, "e12": a},
        "e21": {"e11": a, "e22": -a, "e12": -a * a, "e21": 1},
    }, name=f"psi:alpha={format_scalar(a)}")


def chi_m2(alpha, gamma) -> Morphism:
    a, g = to_scalar(alpha), to_scalar(gamma)
    if a + g == 0:
        raise MorphismError("chi: alpha + gamma must be nonzero")
    s = 1 / (a + g)
    return Morphism.from_images(M2, {
        "e11": {"e11": 1, "e12": g},
        "e12": {"e12": -(a + g)},
        "e22": {"e22": 1, "e12": -g},
        "e21": {"e11": g * s, "e22": -g * s, "e12": g * g * s, "e21": -s},
    }, name=f"chi:alpha={format_scalar(a)},gamma={format_scalar(g)}")


def xi_m2(alpha) -> Morphism:
    a = to_scalar(alpha)
    _nonzero("xi", alpha=a)
    return Morphism.from_images(M2, {"e12": {"e12": 1 / a}, "e21": {"e21": a}},
                                name=f"xi:alpha={format_scalar(a)}")


def upsilon(a) -> Morphism:
    a = to_scalar(a)
    _nonzero("upsilon", a=a)
    return Morphism.from_images(M3, {
        "e13": {"e13": a}, "e23": {"e23": a}, "e31": {"e31": 1 / a}, "e32": {"e32": 1 / a},
    }, name=f"upsilon:a={format_scalar(a)}")


def rho(a, b, c) -> Morphism:
    a, b, c = (to_scalar(x) for x in (a, b, c))
    _nonzero("rho", a=a, b=b)
    return Morphism.from_images(M3, {
        "e11": "e11",
        "e12": {"e12": 1 / a, "e13": -b * c / a},
        "e13": {"e13": b},
        "e21": {"e21": a},
        "e22": {"e22": 1, "e23": -b * c},
        "e23": {"e23": a * b},
        "e31": {"e21": c, "e31": 1 / b},
        "e32": {"e22": c / a, "e23": -b * c * c / a, "e32": 1 / (a * b), "e33": -c / a},
        "e33": {"e33": 1, "e23": b * c},
    }, name=f"rho:a={format_scalar(a)},b={format_scalar(b)},c={format_scalar(c)}")


def case6_psi() -> Morphism:
    return Morphism.from_images(M3, {
        "e11": "e11 - e13", "e22": "e22", "e33": "e33 + e13", "e12": "e12", "e21": "e21 - e23",
        "e13": "e13", "e31": "e11 - e33 + e31 - e13", "e23": "e23", "e32": "e32 + e12",
    }, name="case6-psi")


def case6_xi() -> Morphism:
    return Morphism.from_images(M3, {
        "e11": "e22", "e22": "e11 + e13", "e33": "e33 - e13", "e12": "e21 + e23", "e21": "e12",
        "e13": "e23", "e31": "e32 - e12", "e23": "e13", "e32": "e33 - e13 - e11 + e31",
    }, name="case6-xi")


def named_morphism(name: str, ctx: AlgebraContext = M3, **params) -> Morphism:
    """Construct a morphism by its CLI name; parameters are rationals."""
    p = {k: to_scalar(v) for k, v in params.items()}

    def need(*keys):
        missing = [k for k in keys if k not in p]
        extra = set(p) - set(keys)
        if missing or extra:
            raise MorphismError(f"{name} takes parameters {', '.join(keys) or 'none'}")
        return [p[k] for k in keys]

    m = re.fullmatch(r"phi([1-9]{2,3})", name)
    if m:
        need()
        idx = [int(ch) for ch in m.group(1)]
        if len(set(idx)) != len(idx):
            raise MorphismError(f"{name}: repeated index")
        # phiab swaps a and b; phiabc is the cycle a -> b -> c -> a
        sigma = {a: b for a, b in zip(idx, idx[1:] + idx[:1])}
        return index_permutation(ctx, sigma, name)
    if name == "transpose":
        need()
        return transpose_morphism(ctx)
    if name in ("id", "identity"):
        need()
        return identity_morphism(ctx)
    builders = {
        "psi": (psi_m2, ("alpha",), M2),
        "chi": (chi_m2, ("alpha", "gamma"), M2),
        "xi": (xi_m2, ("alpha",), M2),
        "upsilon": (upsilon, ("a",), M3),
        "rho": (rho, ("a", "b", "c"), M3),
        "case6-psi": (case6_psi, (), M3),
        "case6-xi": (case6_xi, (), M3),
    }
    if name not in builders:
        raise MorphismError(f"unknown morphism {name!r}")
    fn, keys, home = builders[name]
    if ctx is not home:
        raise MorphismError(f"{name} is defined on {home.name}, not {ctx.name}")
    return fn(*need(*keys))


def parse_morphism_expr(expr: str, ctx: AlgebraContext = M3) -> Morphism:
    """Parse 'phi23*rho:a=1,b=2,c=1*phi23' etc.; '*' is composition f o g."""
    result = None
    for token in (t.strip() for t in expr.split("*")):
        if not token:
            raise MorphismError(f"empty factor in {expr!r}")
        name, _, args = token.partition(":")
        if name == "inner":
            vals = [parse_scalar(v) for v in args.split(",")]
            n = ctx.matrix_order
            if n is None or len(vals) != n * n:
                raise MorphismError(f"inner needs {ctx.dim} entries for {ctx.name}")
            f = inner(Mat(n, n, vals), ctx, name=token)
        else:
            params = {}
            for kv in filter(None, (a.strip() for a in args.split(","))):
                k, eq, v = kv.partition("=")
                if not eq:
                    raise MorphismError(f"parameter {kv!r} is not key=value")
                params[k.strip()] = parse_scalar(v.strip())
            f = named_morphism(name, ctx, **params)
        result = f if result is None else compose(result, f)
    if result is None:
        raise MorphismError("empty morphism expression")
    return Morphism(result.context, result.matrix, result.kind, expr)


# --- bounded conjugator search --------------------------------------------------

DEFAULT_CONJ_GRID = (-2, -1, 0, 1, 2)


@dataclass(frozen=True)
class ConjugatorResult:
    found: bool
    morphism: Morphism | None
    T: Mat | None
    transposed: bool
    bound: str
    note: str

    def __bool__(self):
        return self.found


def _scaled_int(*mats: Mat):
    D = common_denominator(x for m in mats for x in m.entries)
    return [np.array([[int(x * D) for x in m.row(r)] for r in range(m.rows)], dtype=np.int64) for m in mats]


def find_conjugator(P: OperatorMatrix, Q: OperatorMatrix, grid: Sequence[int] = DEFAULT_CONJ_GRID,
                    allow_transpose: bool = True) -> ConjugatorResult:
    """Look for psi = inner(T) (or inner(T) o transpose) with psi^-1 P psi = Q.

    The identity is tried first, then T runs over the grid in lexicographic
    order, plain before transposed; the first hit is returned.  A negative
    answer only covers the grid.
    """
    ctx = P.context
    if Q.context is not ctx:
        raise ContextMismatch("operators live on different algebras")
    n = _require_matrix_context(ctx)
    if n not in (2, 3):
        raise MorphismError("conjugator search is implemented for M2 and M3")
    grid = tuple(int(g) for g in grid)
    bound = f"T in {{{','.join(map(str, grid))}}}^{n * n}" + (" with optional transpose" if allow_transpose else "")
    if P.weight != Q.weight:
        return ConjugatorResult(False, None, None, False, bound, "weights differ")
    if P.matrix == Q.matrix:
        return ConjugatorResult(True, identity_morphism(ctx), Mat.identity(n), False, bound, "identical operators")
    Pi, Qi = _scaled_int(P.matrix, Q.matrix)
    P1, Q1 = _scaled_int(Mat(n, n, P.unit_image()), Mat(n, n, Q.unit_image()))
    g = np.array(grid, dtype=np.int64)
    total = len(grid) ** (n * n)
    for transposed in ((False, True) if allow_transpose else (False,)):
        idx = _kernels.conj_search(Pi, Qi, P1, Q1.T.copy() if transposed else Q1, g, transposed, 0, total)
        if idx >= 0:
            entries = _kernels.decode(np.array([idx]), g, n * n)[0]
            T = Mat(n, n, [int(x) for x in entries])
            psi = inner(T, ctx, name="inner:" + ",".join(str(int(x)) for x in entries))
            if transposed:
                psi = compose(psi, transpose_morphism(ctx))
            if conjugate(P, psi).matrix != Q.matrix:  # exact re-check
                raise AssertionError("grid kernel reported a false conjugator")
            return ConjugatorResult(True, psi, T, transposed, bound, "found")
    return ConjugatorResult(False, None, None, False, bound, "not found within bound (not a proof of non-conjugacy)")


def s3_permutations(n: int = 3):
    """All index permutations of 1..n as dicts."""
    for perm in permutations(range(1, n + 1)):
        yield {i + 1: perm[i] for i in range(n)}
