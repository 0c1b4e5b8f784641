"""Named RB operators of weight 1 on F^3, M_2 and M_3, plus their constructors."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from itertools import product
from typing import Callable, Mapping, Sequence

from .algebra import (
    F3,
    M2,
    M3,
    AlgebraContext,
    is_product_closed,
    product_space,
    span_of_labels,
)
from .exactlinalg import ONE, ZERO, Mat, Subspace, _solve_in_span, to_scalar
from .operators import OperatorMatrix, rb_check, subalgebra_context

FAMILY_SAMPLES = tuple(Fraction(x) for x in (-2, -1, 1, 2, 3))


class CatalogError(ValueError):
    pass


@dataclass(frozen=True)
class CatalogEntry:
    id: str
    label: str
    context: AlgebraContext
    operator: OperatorMatrix | None = None
    family: Callable[..., OperatorMatrix] | None = None
    params: tuple[str, ...] = ()
    samples: tuple[tuple[Fraction, ...], ...] = ()
    tags: frozenset[str] = frozenset()
    expected: Mapping[str, object] = field(default_factory=dict)
    note: str = ""

    @property
    def is_family(self) -> bool:
        return self.family is not None

    def instances(self) -> list[tuple[tuple[Fraction, ...], OperatorMatrix]]:
        if not self.is_family:
            return [((), self.operator)]
        return [(s, self.family(*s)) for s in self.samples]


# --- constructors ----------------------------------------------------------------


def _decompose(parts: Sequence[Subspace], v: Sequence, n: int) -> list[list[Fraction]]:
    """Split v along a direct sum of subspaces."""
    basis = [list(b) for p in parts for b in p.basis]
    coeffs = _solve_in_span(basis, v)
    if coeffs is None:
        raise CatalogError("vector lies outside the sum")
    out, k = [], 0
    for p in parts:
        comp = [ZERO] * n
        for b in p.basis:
            c = coeffs[k]
            k += 1
            if c:
                for i, x in enumerate(b):
                    comp[i] += c * x
        out.append(comp)
    return out


def _require_direct(parts: Sequence[Subspace], n: int):
    total = parts[0]
    for p in parts[1:]:
        total = total.sum(p)
    if total.dim != n or sum(p.dim for p in parts) != n:
        raise CatalogError("the given subspaces do not form a direct-sum decomposition")


def _check_rb(R: OperatorMatrix, what: str) -> OperatorMatrix:
    res = rb_check(R)
    if not res:
        raise CatalogError(f"{what} fails the RB identity on {res.witness}")
    return R


def split_operator(A1: Subspace, A2: Subspace, weight, ctx: AlgebraContext) -> OperatorMatrix:
    """P(a1 + a2) = -weight * a2 for a decomposition into two subalgebras."""
    w = to_scalar(weight)
    _require_direct([A1, A2], ctx.dim)
    for A in (A1, A2):
        if not is_product_closed(A, ctx):
            raise CatalogError("summand is not a subalgebra")
    cols = []
    for i in range(ctx.dim):
        _, a2 = _decompose([A1, A2], ctx.basis_vector(i), ctx.dim)
        cols.append([-w * x for x in a2])
    return _check_rb(OperatorMatrix(ctx, Mat.from_columns(cols), w), "split operator")


def _restricted_action(R0: OperatorMatrix, A0: Subspace, ctx: AlgebraContext):
    """R0 as a function on A0 vectors of the ambient space."""
    if R0.context is ctx:
        def act(v):
            out = R0.apply(v)
            if not A0.contains(out):
                raise CatalogError("R0 does not preserve A0")
            return out
        sub = OperatorMatrix(subalgebra_context(ctx, A0), Mat.from_columns(
            [A0.coordinates(act(b)) for b in A0.basis]), R0.weight)
        return act, sub
    if R0.context.dim != A0.dim:
        raise CatalogError("R0 does not match A0")

    def act(v):
        coords = A0.coordinates(v)
        img = R0.apply(coords)
        out = [ZERO] * ctx.dim
        for c, b in zip(img, A0.basis):
            if c:
                for i, x in enumerate(b):
                    out[i] += c * x
        return tuple(out)
    sub = OperatorMatrix(subalgebra_context(ctx, A0), R0.matrix, R0.weight)
    return act, sub


def _three_part(A_minus, A0, A_plus, R0, weight, ctx) -> OperatorMatrix:
    act, _ = _restricted_action(R0, A0, ctx)
    cols = []
    for i in range(ctx.dim):
        _, a0, ap = _decompose([A_minus, A0, A_plus], ctx.basis_vector(i), ctx.dim)
        img = act(a0) if any(a0) else (ZERO,) * ctx.dim
        cols.append([x - weight * y for x, y in zip(img, ap)])
    return OperatorMatrix(ctx, Mat.from_columns(cols), weight)


def triangular_split(A_minus: Subspace, A0: Subspace, A_plus: Subspace, R0: OperatorMatrix,
                     weight, ctx: AlgebraContext) -> OperatorMatrix:
    """P(a- + a0 + a+) = R0(a0) - weight * a+.

    A- and A+ must be subalgebras and A0-modules on both sides; R0 acts on
    A0, either as an ambient operator preserving A0 or in A0's own basis.
    """
    w = to_scalar(weight)
    _require_direct([A_minus, A0, A_plus], ctx.dim)
    for A in (A_minus, A0, A_plus):
        if not is_product_closed(A, ctx):
            raise CatalogError("a summand is not a subalgebra")
    for A in (A_minus, A_plus):
        if not (A.contains_subspace(product_space(A0, A, ctx)) and A.contains_subspace(product_space(A, A0, ctx))):
            raise CatalogError("module condition fails")
    _, sub = _restricted_action(R0, A0, ctx)
    if A0.dim and not rb_check(OperatorMatrix(sub.context, sub.matrix, w)):
        raise CatalogError("R0 is not an RB operator on A0")
    return _check_rb(_three_part(A_minus, A0, A_plus, R0, w, ctx), "triangular split")


def three_part_placement(A_minus: Subspace, A0: Subspace, A_plus: Subspace, ctx: AlgebraContext) -> bool:
    """Whether A0 A- and A- A0 lie in A+."""
    return (A_plus.contains_subspace(product_space(A0, A_minus, ctx))
            and A_plus.contains_subspace(product_space(A_minus, A0, ctx)))


def three_part_extend(A_minus: Subspace, A0: Subspace, A_plus: Subspace, P0: OperatorMatrix,
                    ctx: AlgebraContext) -> OperatorMatrix:
    """R(a- + a0 + a+) = P0(a0) - a+.

    The placement A0 A-, A- A0 inside A+ is not enforced (see
    ``three_part_placement``): the decompositions this is used with have
    A0 A- inside A- instead.  What is enforced is the side condition
    R(A0)A-, A-R(A0) inside A-, then the RB identity itself.
    """
    _require_direct([A_minus, A0, A_plus], ctx.dim)
    for A in (A_minus, A0, A_plus):
        if not is_product_closed(A, ctx):
            raise CatalogError("a summand is not a subalgebra")
    R = _three_part(A_minus, A0, A_plus, P0, ONE, ctx)
    RA0 = Subspace.span([R.apply(b) for b in A0.basis], ctx.dim)
    if not (A_minus.contains_subspace(product_space(RA0, A_minus, ctx))
            and A_minus.contains_subspace(product_space(A_minus, RA0, ctx))):
        raise CatalogError("side condition R(A0)A-, A-R(A0) in A- fails")
    return _check_rb(R, "extension")


# --- F^3 ----------------------------------------------------------------------------

# images of f1, f2, f3
F3_CASES = {
    1: ("f2 + f3", "f3", "0"),
    2: ("f2 + f3", "f3", "-f3"),
    3: ("f2 + f3", "-f2 - f3", "-f3"),
    4: ("f2 + f3", "-f2", "0"),
    5: ("f2 + f3", "0", "0"),
    6: ("f2", "0", "0"),
    7: ("f2", "0", "-f3"),
    8: ("-f1", "0", "0"),
    9: ("f2", "-f2", "-f3"),
}

F3_PRIMED = {
    1: ("-f1 - f2 - f3", "-f2 - f3", "-f3"),
    2: ("-f1 - f2 - f3", "-f2 - f3", "0"),
    3: ("-f1 - f2 - f3", "f3", "0"),
    4: ("-f1 - f2 - f3", "0", "-f3"),
    5: ("-f1 - f2 - f3", "-f2", "-f3"),
    6: ("-f1 - f2", "-f2", "-f3"),
    7: ("-f1 - f2", "-f2", "0"),
    8: ("0", "-f2", "-f3"),
    9: ("-f1 - f2", "0", "0"),
}


def f3_operator(images: Sequence[str], name: str = "") -> OperatorMatrix:
    return OperatorMatrix.from_images(F3, dict(zip(F3.basis_labels, images)), 1, name)


def f3_case(k: int) -> OperatorMatrix:
    return f3_operator(F3_CASES[k], f"case{k}")


def permute_f3(R: OperatorMatrix, sigma: Mapping[int, int]) -> OperatorMatrix:
    """R_sigma(f_sigma(i)) = sigma(R(f_i)), indices 1-based."""
    n = R.context.dim
    P = Mat.from_columns([[ONE if r + 1 == sigma.get(c + 1, c + 1) else ZERO for r in range(n)] for c in range(n)])
    return R.with_matrix(P @ R.matrix @ P.inverse())


# --- M_3 primitive operators -------------------------------------------------------

STRICT_UPPER = ("e12", "e13", "e23")
STRICT_LOWER = ("e21", "e31", "e32")
DIAGONAL = ("e11", "e22", "e33")
VARIANT_PERMUTATION = {"a": {}, "b": {1: 2, 2: 1}, "c": {2: 3, 3: 2}}


def primitive_operator(case: int, variant: str) -> OperatorMatrix:
    """Zero on strictly upper, -id on strictly lower, case action on the diagonal."""
    if case not in range(1, 8) or variant not in VARIANT_PERMUTATION:
        raise CatalogError(f"no primitive operator {case}{variant}")
    if (case, variant) == (5, "c"):
        raise CatalogError("5c coincides with 5b and is not listed separately")
    diag = permute_f3(f3_case(case), VARIANT_PERMUTATION[variant])
    R = triangular_split(span_of_labels(M3, STRICT_UPPER), span_of_labels(M3, DIAGONAL),
                         span_of_labels(M3, STRICT_LOWER), diag, 1, M3)
    return R.renamed(f"{case}{variant}")


def m3_operator(images: Mapping[str, str], name: str) -> OperatorMatrix:
    return OperatorMatrix.from_images(M3, images, 1, name)


_B_CASES = {
    "1-I": {"e11": "e22 + e33", "e12": "-e12", "e13": "-e13", "e21": "-e32", "e22": "e33",
            "e23": "e12 - e23"},
    "6-I": {"e11": "e22", "e12": "-e12 - e32", "e21": "-e21 + e23", "e13": "e11 + e22 - e13",
            "e31": "-e31 + e33"},
    "6-II": {"e11": "e22", "e21": "-e21", "e31": "-e31 + e11 + e22"},
    "6-III": {"e11": "e22", "e21": "-e21 - e23", "e31": "-e31 + e11 + e22"},
}

# images on M1 = span{e11} + span{e22, e23, e32, e33}; e12, e13 -> -self, e21, e31 -> 0
_C_CASES = {
    "2-I": {"e11": "e22 + e33", "e22": "e33", "e23": "-e23", "e33": "-e33", "e32": "e33"},
    "2-II": {"e11": "e22 + e33", "e22": "e33", "e32": "-e32", "e33": "-e33", "e23": "e33"},
    "3-I": {"e11": "-e11", "e23": "-e23", "e22": "-e11 - e22", "e33": "e11 + e22", "e32": "e11 + e22"},
    "3-II": {"e11": "-e11", "e32": "-e32", "e22": "-e11 - e22", "e33": "e11 + e22", "e23": "e11 + e22"},
    "4-I": {"e22": "e11 + e33", "e33": "-e33", "e32": "-e32", "e23": "e33"},
    "4-II": {"e22": "e11 + e33", "e33": "-e33", "e23": "-e23", "e32": "e33"},
    "5-I": {"e11": "e22 + e33"},
    "5-II": {"e11": "e22 + e33", "e32": "e33 - e32"},
    "6-IV": {"e22": "e11", "e23": "-e23 + e11 + e22"},
    "6-V": {"e22": "e11", "e32": "-e32 + e11 + e22"},
    "6-VI": {"e11": "e22"},
    "8-I": {"e11": "-e11", "e32": "e11 + e22 - e32"},
}

BLOCK_MINUS = ("e21", "e31")
BLOCK_ZERO = ("e11", "e22", "e23", "e32", "e33")
BLOCK_PLUS = ("e12", "e13")


def c_case(label: str) -> OperatorMatrix:
    images = dict(_C_CASES[label])
    for lab in BLOCK_PLUS:
        images[lab] = f"-{lab}"
    return m3_operator(images, label)


def block_extension_operator(R0: OperatorMatrix, name: str = "") -> OperatorMatrix:
    """The k = 1 block extension of an operator R0 on M1 (given on M3)."""
    R = triangular_split(span_of_labels(M3, BLOCK_MINUS), span_of_labels(M3, BLOCK_ZERO),
                         span_of_labels(M3, BLOCK_PLUS), R0, 1, M3)
    return R.renamed(name)


# six-tuple groups, as (members, tuple)
SIX_TUPLE_GROUPS = {
    "a": (("2a", "2b", "2c", "2-I", "2-II"), (4, 5, 4, 4, 2, 3)),
    "b": (("3a", "3b", "3c", "3-I", "3-II"), (4, 4, 4, 5, 1, 2)),
    "c": (("4a", "4b", "4c", "4-I", "4-II", "6-I"), (4, 5, 4, 4, 1, 3)),
    "d": (("6-II", "6-III", "6-VI"), (6, 7, 2, 2, 1, 3)),
    "e": (("5a", "5b", "5-II"), (5, 6, 3, 3, 2, 3)),
    "f": (("6a", "6b", "6c", "6-IV", "6-V"), (5, 6, 3, 3, 1, 3)),
}

CASE6_DERIVED = ("6a", "6b", "6c", "6-I", "6-II", "6-III", "6-IV", "6-V", "6-VI")


def _m3_expected(label: str) -> dict:
    exp: dict[str, object] = {}
    for members, tup in SIX_TUPLE_GROUPS.values():
        if label in members:
            exp["six_tuple_up_to_phi"] = tup
    if label in ("1a", "1b", "1c"):
        exp["min_poly"] = (3, 1)  # exponents of x and x+1
    if label == "1-I":
        exp["min_poly"] = (3, 2)
    if label in ("7a", "7b", "7c"):
        exp["rank_pair"] = (2, 2)
    if label == "8-I":
        exp["ker_dims"] = (5, 5)
    if label == "5-I":
        exp["ker_dim"] = 6
        exp["rank_pair"] = (2, 3)
    if label in CASE6_DERIVED:
        exp["trace_R1"] = Fraction(1)
    if label == "6-V":
        exp["ann_ker"] = ((), ("e21", "e23"))
    if label == "6-IV":
        exp["ann_ker"] = ((), ())
    return exp


# --- M_2 ------------------------------------------------------------------------------

M2_FIXED = {
    "M1": {"e11": "e22", "e12": "-e12"},
    "M2": {"e11": "-e11", "e12": "-e12"},
    "M3": {"e21": "-e21"},
    "M4": {"e21": "e11 - e21"},
    "M5": {"e12": "e11 - e12", "e21": "-e21 + e22"},
    "M6": {"e11": "-e11", "e12": "-e12", "e22": "e11"},
    "M4p": {"e21": "-e21 + e22"},
}


def m2_operator(label: str) -> OperatorMatrix:
    return OperatorMatrix.from_images(M2, M2_FIXED[label], 1, label)


def _vec2(**terms) -> tuple[Fraction, ...]:
    return tuple(to_scalar(terms.get(lab, 0)) for lab in M2.basis_labels)


def family_c(alpha, gamma) -> OperatorMatrix:
    a, g = to_scalar(alpha), to_scalar(gamma)
    img = _vec2(e11=-a, e12=-a * g, e21=-1, e22=-g)
    return OperatorMatrix.from_images(M2, {"e21": img}, 1, f"c({a},{g})")


def family_d(alpha) -> OperatorMatrix:
    a = to_scalar(alpha)
    if a == 0:
        raise CatalogError("family (d) needs alpha != 0")
    return OperatorMatrix.from_images(M2, {"e12": _vec2(e11=a, e12=-1), "e21": _vec2(e21=-1, e22=1 / a)},
                                      1, f"d({a})")


def family_e(beta) -> OperatorMatrix:
    b = to_scalar(beta)
    return OperatorMatrix.from_images(M2, {
        "e11": _vec2(e11=-1), "e22": _vec2(e11=1), "e12": _vec2(e12=-1),
        "e21": _vec2(e11=b, e12=-b * b / 4),
    }, 1, f"e({b})")


# --- assembly ------------------------------------------------------------------------


def _entry(id_, label, R, tags=(), expected=None, note=""):
    _check_rb(R, id_)
    return CatalogEntry(id_, label, R.context, R.renamed(label), tags=frozenset(tags),
                        expected=expected or {}, note=note)


@lru_cache(maxsize=1)
def build_catalog() -> tuple[CatalogEntry, ...]:
    entries: list[CatalogEntry] = []
    for k in range(1, 10):
        R = f3_case(k)
        entries.append(_entry(f"F3.case{k}", f"case{k}", R, ("f3",)))
    for k in range(1, 10):
        Rp = f3_operator(F3_PRIMED[k], f"case{k}'")
        entries.append(_entry(f"F3.case{k}p", f"case{k}'", Rp, ("f3", "primed"),
                              note="stored verbatim; must equal phi of the unprimed case"))
    for label in M2_FIXED:
        tags = ("m2",) + (("representative",) if label != "M4p" else ("conjugate-of-M4",))
        entries.append(_entry(f"M2.{label}", label, m2_operator(label), tags))
    c_samples = tuple(product(FAMILY_SAMPLES, FAMILY_SAMPLES))
    for id_, fn, params, samples in (
        ("M2.family-c", family_c, ("alpha", "gamma"), c_samples),
        ("M2.family-d", family_d, ("alpha",), tuple((s,) for s in FAMILY_SAMPLES)),
        ("M2.family-e", family_e, ("beta",), tuple((s,) for s in FAMILY_SAMPLES)),
    ):
        entry = CatalogEntry(id_, id_.split(".")[1], M2, family=fn, params=params, samples=samples,
                             tags=frozenset({"m2", "family"}))
        for s, R in entry.instances():
            _check_rb(R, f"{id_}{s}")
        entries.append(entry)
    for case in range(1, 8):
        for variant in "abc":
            if (case, variant) == (5, "c"):
                continue
            label = f"{case}{variant}"
            entries.append(_entry(f"M3.{label}", label, primitive_operator(case, variant), ("m3", "primitive"),
                                  _m3_expected(label)))
    for label, images in _B_CASES.items():
        entries.append(_entry(f"M3.{label}", label, m3_operator(images, label), ("m3", "exceptional"),
                              _m3_expected(label)))
    for label in _C_CASES:
        note = "also the endpoint of the case 2 block argument" if label == "5-I" else ""
        entries.append(_entry(f"M3.{label}", label, c_case(label), ("m3", "block-extension"),
                              _m3_expected(label), note))
    return tuple(entries)


def catalog_index() -> dict[str, CatalogEntry]:
    return {e.id: e for e in build_catalog()}


def get_entry(entry_id: str) -> CatalogEntry:
    idx = catalog_index()
    if entry_id in idx:
        return idx[entry_id]
    # allow bare labels such as "6-IV" or "M5"
    matches = [e for e in idx.values() if e.id.split(".", 1)[1] == entry_id]
    if len(matches) == 1:
        return matches[0]
    raise KeyError(f"unknown catalog entry {entry_id!r}")


def m3_entries() -> list[CatalogEntry]:
    return [e for e in build_catalog() if e.context is M3]


