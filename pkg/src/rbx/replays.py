"""Explicit conjugation claims between RB operators, as replayable data.

Each :class:`Replay` names a source operator (possibly parametric), a
morphism expression in the CLI syntax and a target.  ``direction`` records which
way the equality holds: ``"stated"`` means psi^-1 R psi = target, while
``"inverse"`` means the same expression only works as psi R psi^-1.  Some claims
name no map at all; those are settled by the bounded conjugator search and
live in :data:`SEARCH_REPLAYS`.

Intermediate operators that appear only on the way to a catalog entry are
kept here, in :data:`LOCAL`, rather than in the catalog.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Callable

from .algebra import M3, span_of
from .catalog import three_part_extend, family_c, family_d, family_e, get_entry, m3_operator
from .exactlinalg import format_scalar
from .operators import OperatorMatrix

Fr = Fraction
SAMPLES = (Fr(-2), Fr(-1), Fr(1), Fr(2), Fr(3))


def _s(x) -> str:
    return format_scalar(Fr(x))


def _cat(label: str) -> Callable[..., OperatorMatrix]:
    return lambda *_: get_entry(label).operator


def _op(images: dict, name: str) -> OperatorMatrix:
    return m3_operator(images, name)


# --- intermediate operators ------------------------------------------------------

_UPPER_NEG = {"e12": "-e12", "e13": "-e13"}
_DIAG5 = {"e11": "e22 + e33"}
_BASE3 = {"e33": "-e33", "e13": "-e13", "e23": "-e23"}
_BASE4B = {"e13": "-e13", "e23": "-e23"}


def block1b(a) -> OperatorMatrix:
    a = Fr(a)
    return _op({"e11": "e22 + e33", "e22": "e33", **_UPPER_NEG,
                "e21": f"{_s(-a)}*e32", "e23": f"{_s(a)}*e12 - e23"}, f"1b({_s(a)})")


def block2_second(a) -> OperatorMatrix:
    a = Fr(a)
    return _op({"e11": "e22 + e33", "e22": "e33", "e33": "-e33", "e21": "-e21", "e13": "-e13", "e23": "-e23",
                "e12": f"{_s(-a)}*e13", "e31": f"{_s(a)}*e21",
                "e32": f"{_s(-a * a)}*e23 + {_s(-2 * a)}*e33"}, f"2-second({_s(a)})")


def block4a1(a) -> OperatorMatrix:
    a = Fr(a)
    return _op({"e11": "e22 + e33", "e22": "-e22", "e13": "-e13", "e23": "-e23",
                "e12": f"{_s(a)}*e22", "e21": f"{_s(-1 / a)}*e22 + {_s(-1 / a)}*e33"}, f"4a1({_s(a)})")


def block4a2(a) -> OperatorMatrix:
    a = Fr(a)
    return _op({"e11": "e22 + e33", "e22": "-e22", "e13": "-e13", "e23": "-e23",
                "e21": f"{_s(a)}*e22", "e12": f"{_s(-1 / a)}*e22 + {_s(-1 / a)}*e33"}, f"4a2({_s(a)})")


LOCAL: dict[str, OperatorMatrix] = {}


def _local(name: str, images: dict) -> None:
    LOCAL[name] = _op(images, name)


_local("2a", {**_DIAG5, **_UPPER_NEG, "e32": "e33 - e32"})
_local("2b", {**_DIAG5, **_UPPER_NEG, "e23": "e22 - e23"})
_local("5-III", {**_DIAG5, **_UPPER_NEG, "e23": "e22 - e23"})
_local("5-IV", {**_DIAG5, **_UPPER_NEG, "e23": "e22 - e23", "e32": "e33 - e32"})
_local("5-V", {**_DIAG5, **_UPPER_NEG, "e23": "e33 - e23", "e32": "e22 - e32"})
_local("2c", {**_DIAG5, **_UPPER_NEG, "e23": "e22 - e23", "e32": "e33 - e32"})
_local("2d", {**_DIAG5, **_UPPER_NEG, "e23": "e33 - e23", "e32": "e22 - e32"})
_local("3a", {**_BASE3, "e21": "e22 - e21 + e33"})
_local("3b", {**_BASE3, "e12": "e11 - e12 + e33"})
_local("3c", {**_BASE3, "e12": "e11 - e12 + e33", "e21": "e22 - e21 + e33"})
_local("3d", {**_BASE3, "e12": "e22 - e12 + e33", "e21": "e11 - e21 + e33"})
_local("4a1-P", {"e12": "-e12", "e13": "-e13", "e22": "-e22", "e23": "e22", "e32": "-e11 - e22",
                 "e33": "e11 + e22"})
_local("4a2-P", {"e12": "-e12", "e13": "-e13", "e22": "-e22", "e32": "e22", "e23": "-e11 - e22",
                 "e33": "e11 + e22"})
_local("4b1-R1", {**_BASE4B, "e22": "e33", "e12": "e11 - e12", "e21": "e22 - e21 + e33"})
_local("4b1-R2", {**_BASE4B, "e11": "e33", "e12": "e11 - e12 + e33", "e21": "e22 - e21"})
_local("4b2", {**_BASE4B, "e22": "e33", "e21": "e11 - e21", "e12": "e22 - e12 + e33"})
_local("6a-M3", {"e11": "e22", "e12": "-e12", "e32": "-e32", "e31": "-e31"})
_local("6a-M4", {"e11": "e22", "e12": "-e12", "e31": "e11 + e22 - e31", "e32": "-e32"})
_local("6a-M5", {"e11": "e22", "e12": "-e12", "e13": "e11 + e22 - e13", "e31": "-e31 + e33", "e32": "-e32"})
_local("6c-M3", {"e11": "e22", "e21": "-e21", "e31": "-e31"})
# Q and Q1 are only pinned down on the invariant block M1 below; images elsewhere are unknown
M1_BLOCK = ("e11", "e22", "e33", "e13", "e31")
_local("6-Q", {"e33": "e22", "e31": "e11 - e31"})
_local("6-Q1", {"e11": "e22", "e31": "e33 - e31"})
_local("8b", {"e11": "-e11", **_UPPER_NEG, "e23": "e11 + e33 - e23"})
_local("8c", {"e11": "-e11", **_UPPER_NEG, "e23": "e11 + e22 - e23", "e32": "e11 + e33 - e32"})
_local("8c2", {"e11": "-e11", **_UPPER_NEG, "e32": "e11 + e22 - e32", "e23": "e11 + e33 - e23"})


def three_part_operator() -> OperatorMatrix:
    """The three-part operator with A- = strict upper, A0 = diagonal and a twisted A+."""
    A_minus = span_of(M3, ["e12", "e13", "e23"])
    A0 = span_of(M3, ["e11", "e22", "e33"])
    A_plus = span_of(M3, ["e21 - e23", "e32 + e12", "e11 - e33 + e31 - e13"])
    P0 = _op({"e22": "-e11 - e22 - e33", "e11": "-e11 - e33"}, "P0")
    return three_part_extend(A_minus, A0, A_plus, P0, M3).renamed("three-part")


def _loc(name: str) -> Callable[..., OperatorMatrix]:
    return lambda *_: LOCAL[name]


# --- predicates for claims whose target is a property, not an operator -------------

_UPPER = ("e12", "e13", "e23")
_LOWER = ("e21", "e31", "e32")
_DIAG = ("e11", "e22", "e33")


def is_primitive_shape(R: OperatorMatrix) -> bool:
    """Strict upper -> 0, strict lower -> -id, diagonal mapped into the diagonal."""
    ctx = R.context
    for lab in _UPPER:
        if any(R.image(lab)):
            return False
    for lab in _LOWER:
        if R.image(lab) != tuple(-x for x in ctx.basis_vector(lab)):
            return False
    diag = {ctx.index(lab) for lab in _DIAG}
    return all(not x or k in diag for lab in _DIAG for k, x in enumerate(R.image(lab)))


def satisfies_case6_normal_form(R: OperatorMatrix) -> bool:
    """Q(e22) = Q(e33) = 0, Q(e11) = e22 and the three blocks stay invariant."""
    ctx = R.context
    blocks = (("e11", "e22", "e33", "e13", "e31"), ("e21", "e23"), ("e12", "e32"))
    for block in blocks:
        allowed = {ctx.index(lab) for lab in block} | ({ctx.index("e22")} if "e11" in block else set())
        for lab in block:
            if any(x and k not in allowed for k, x in enumerate(R.image(lab))):
                return False
    e22 = ctx.basis_vector("e22")
    return (not any(R.image("e22")) and not any(R.image("e33")) and R.image("e11") == e22)


@dataclass(frozen=True)
class Replay:
    id: str
    claim: str
    source: Callable[..., OperatorMatrix]
    expr: Callable[..., str]
    target: Callable[..., OperatorMatrix] | None = None
    predicate: Callable[[OperatorMatrix], bool] | None = None
    samples: tuple[tuple, ...] = ((),)
    direction: str = "stated"
    apply_phi: bool = False
    context: str = "M3"
    note: str = ""
    block: tuple[str, ...] = ()  # compare and RB-check only on this invariant subalgebra


def _pairs(*vals):
    return tuple((v,) for v in vals)


REPLAYS: tuple[Replay, ...] = (
    Replay("identity", "phi12 o phi12 is the identity", _cat("M3.6-IV"), lambda: "phi12*phi12",
           _cat("M3.6-IV")),
    Replay("m2.psi", "M3 ~ (c) with gamma = -alpha via psi_alpha", _cat("M2.M3"),
           lambda a: f"psi:alpha={_s(a)}", lambda a: family_c(a, -a), samples=_pairs(*SAMPLES, Fr(1, 2)),
           direction="inverse", context="M2"),
    Replay("m2.chi", "(c) ~ M4 via chi", lambda a, g: family_c(a, g),
           lambda a, g: f"chi:alpha={_s(a)},gamma={_s(g)}", _cat("M2.M4"),
           samples=((1, 1), (2, -1), (0, 3), (3, 0), (-1, 3), (Fr(1, 2), 2)), context="M2"),
    Replay("m2.xi", "(d) ~ M5 via xi_alpha", lambda a: family_d(a), lambda a: f"xi:alpha={_s(a)}",
           _cat("M2.M5"), samples=_pairs(*SAMPLES), context="M2"),
    Replay("m2.psi-half", "(e) ~ M6 via psi_{beta/2}", lambda b: family_e(b),
           lambda b: f"psi:alpha={_s(Fr(b) / 2)}", _cat("M2.M6"), samples=_pairs(0, *SAMPLES), context="M2"),
    Replay("1b.upsilon", "1b block with parameter a ~ 1-I via upsilon_a", block1b,
           lambda a: f"upsilon:a={_s(a)}", _cat("M3.1-I"), samples=_pairs(*SAMPLES, Fr(1, 2)),
           direction="inverse", note="stated direction holds with upsilon_{1/a}"),
    Replay("2.second-variant", "phi of the upsilon_{1/a} phi12 conjugate is the three-part operator",
           block2_second, lambda a: f"phi12*upsilon:a={_s(1 / Fr(a))}", lambda *_: three_part_operator(),
           samples=_pairs(*SAMPLES, Fr(1, 2)), direction="inverse", apply_phi=True),
    Replay("2.second-to-primitive", "phi12 rho(1,1,1) phi12 takes the three-part operator to a primitive one",
           lambda *_: three_part_operator(), lambda: "phi12*rho:a=1,b=1,c=1*phi12", predicate=is_primitive_shape),
    Replay("2a.equals-5-II", "2a block operator is literally 5-II", _loc("2a"), lambda: "id", _cat("M3.5-II")),
    Replay("2b.phi23", "2b block operator ~ 5-II via phi23", _loc("2b"), lambda: "phi23", _cat("M3.5-II")),
    Replay("2c.rho", "2c block operator ~ 2-I via phi23 rho(1/b,b,1/b) phi23", _loc("2c"),
           lambda b: f"phi23*rho:a={_s(1 / Fr(b))},b={_s(b)},c={_s(1 / Fr(b))}*phi23", _cat("M3.2-I"),
           samples=_pairs(*SAMPLES)),
    Replay("2d.rho", "2d block operator ~ 2-II via rho(1/b,b,1/b)", _loc("2d"),
           lambda b: f"rho:a={_s(1 / Fr(b))},b={_s(b)},c={_s(1 / Fr(b))}", _cat("M3.2-II"),
           samples=_pairs(*SAMPLES), direction="inverse", note="rho alone, without the phi23 sandwich"),
    Replay("3a.8-I", "3a block operator ~ 8-I via phi13 o T", _loc("3a"), lambda: "phi13*transpose",
           _cat("M3.8-I")),
    Replay("3a.3b", "3a ~ 3b via phi12", _loc("3a"), lambda: "phi12", _loc("3b")),
    Replay("3d.rho", "3d block operator ~ 3-II via phi13 o T o rho(1/b,b,1/b)", _loc("3d"),
           lambda b: f"phi13*transpose*rho:a={_s(1 / Fr(b))},b={_s(b)},c={_s(1 / Fr(b))}", _cat("M3.3-II"),
           samples=_pairs(*SAMPLES), note="the map given for 3c; it takes 3d, not 3c, to 3-II"),
    Replay("4a1.upsilon", "4a1 ~ P via phi13 o T o upsilon_{1/a}", block4a1,
           lambda a: f"phi13*transpose*upsilon:a={_s(1 / Fr(a))}", _loc("4a1-P"), samples=_pairs(*SAMPLES)),
    Replay("4a1.6-V", "P ~ 6-V via phi23 rho(-1/b,b,-1/b) phi23", _loc("4a1-P"),
           lambda b: f"phi23*rho:a={_s(-1 / Fr(b))},b={_s(b)},c={_s(-1 / Fr(b))}*phi23", _cat("M3.6-V"),
           samples=_pairs(*SAMPLES)),
    Replay("4a2.upsilon", "4a2 ~ P via phi13 o T o upsilon_a", block4a2,
           lambda a: f"phi13*transpose*upsilon:a={_s(a)}", _loc("4a2-P"), samples=_pairs(*SAMPLES)),
    Replay("4a2.6-IV", "P ~ 6-IV via rho(-1/b,b,1/b)", _loc("4a2-P"),
           lambda b: f"rho:a={_s(-1 / Fr(b))},b={_s(b)},c={_s(1 / Fr(b))}", _cat("M3.6-IV"),
           samples=_pairs(*SAMPLES)),
    Replay("4b1.phi12", "R1 ~ R2 via phi12", _loc("4b1-R1"), lambda: "phi12", _loc("4b1-R2")),
    Replay("4b1.4-I", "R1 ~ 4-I via phi13 o T o rho(1/b,b,-1/b)", _loc("4b1-R1"),
           lambda b: f"phi13*transpose*rho:a={_s(1 / Fr(b))},b={_s(b)},c={_s(-1 / Fr(b))}", _cat("M3.4-I"),
           samples=_pairs(*SAMPLES)),
    Replay("5-III.phi23", "5-III ~ 5-II via phi23", _loc("5-III"), lambda: "phi23", _cat("M3.5-II")),
    Replay("5-IV.rho", "5-IV ~ 2-I via phi23 rho(1/b,b,1/b) phi23", _loc("5-IV"),
           lambda b: f"phi23*rho:a={_s(1 / Fr(b))},b={_s(b)},c={_s(1 / Fr(b))}*phi23", _cat("M3.2-I"),
           samples=_pairs(*SAMPLES)),
    Replay("2-II.rho", "2-II ~ 5-V via rho(1/b,b,1/b)", _cat("M3.2-II"),
           lambda b: f"rho:a={_s(1 / Fr(b))},b={_s(b)},c={_s(1 / Fr(b))}", _loc("5-V"), samples=_pairs(*SAMPLES)),
    Replay("6a-M5.xi", "6a (M5 block) ~ 4-I via T o xi", _loc("6a-M5"), lambda: "transpose*case6-xi",
           _cat("M3.4-I")),
    Replay("6a-M4.phi12T", "6a (M4 block) ~ 6-IV via phi12 o T", _loc("6a-M4"), lambda: "phi12*transpose",
           _cat("M3.6-IV")),
    Replay("6a-M3.phi12", "6a (M3 block) ~ 6b via phi12", _loc("6a-M3"), lambda: "phi12", _cat("M3.6b")),
    Replay("6c-M3.T", "6c (M3 block) ~ 6-VI via T", _loc("6c-M3"), lambda: "transpose", _cat("M3.6-VI")),
    Replay("6.Q1", "Q ~ Q1 via T o phi13", _loc("6-Q"), lambda: "transpose*phi13", _loc("6-Q1"),
           block=M1_BLOCK),
    Replay("6.Q2", "psi^-1 Q1 psi is in normal form", _loc("6-Q1"), lambda: "case6-psi",
           predicate=satisfies_case6_normal_form, block=M1_BLOCK),
    Replay("8b.phi23", "8b block operator ~ 8-I via phi23", _loc("8b"), lambda: "phi23", _cat("M3.8-I")),
    Replay("8c.rho", "8c block operator ~ 3-II via rho(1/b,b,1/b)", _loc("8c"),
           lambda b: f"rho:a={_s(1 / Fr(b))},b={_s(b)},c={_s(1 / Fr(b))}", _cat("M3.3-II"),
           samples=_pairs(*SAMPLES)),
)


@dataclass(frozen=True)
class SearchReplay:
    id: str
    claim: str
    source: Callable[[], OperatorMatrix]
    target: Callable[[], OperatorMatrix]


SEARCH_REPLAYS: tuple[SearchReplay, ...] = (
    SearchReplay("m2.M4-M4p", "M4 ~ M4'", _cat("M2.M4"), _cat("M2.M4p")),
    SearchReplay("3c.3-I", "3c block operator ~ 3-I", _loc("3c"), _cat("M3.3-I")),
    SearchReplay("4b2.4-II", "4b2 block operator ~ 4-II", _loc("4b2"), _cat("M3.4-II")),
    SearchReplay("8c2.3-I", "second 8c operator ~ 3-I", _loc("8c2"), _cat("M3.3-I")),
)


@dataclass(frozen=True)
class Discrepancy:
    id: str
    claimed: str
    observed: str
    check: Callable[[], bool]  # True when the claim as written fails


def _fails_as_written() -> tuple[Discrepancy, ...]:
    from .morphisms import conjugate, parse_morphism_expr

    def eq(P, Q):
        return P.matrix == Q.matrix

    def conj(R, expr):
        return conjugate(R, parse_morphism_expr(expr, M3))

    def e(lab):
        return get_entry(lab).operator

    def never(expr_fn, src, tgt):
        """expr_fn(b) fails for every sample b, both ways round."""
        for b in SAMPLES:
            psi = parse_morphism_expr(expr_fn(b), M3)
            if eq(conjugate(src, psi), tgt) or eq(conjugate(src, psi.inverse()), tgt):
                return False
        return True

    return (
        Discrepancy("2a", "2a coincides with 5-I", "2a coincides with 5-II",
                    lambda: not eq(LOCAL["2a"], e("M3.5-I")) and eq(LOCAL["2a"], e("M3.5-II"))),
        Discrepancy("2b", "2b ~ 5-I via phi23", "phi23 takes 2b to 5-II",
                    lambda: not eq(conj(LOCAL["2b"], "phi23"), e("M3.5-I"))
                    and eq(conj(LOCAL["2b"], "phi23"), e("M3.5-II"))),
        Discrepancy("3c", "3c ~ 3-II via phi13 o T o rho(1/b,b,1/b)",
                    "that map takes 3d to 3-II; 3c reaches 3-I by grid search",
                    lambda: never(lambda b: f"phi13*transpose*rho:a={_s(1 / b)},b={_s(b)},c={_s(1 / b)}",
                                  LOCAL["3c"], e("M3.3-II"))),
        Discrepancy("3d", "3d ~ 3-I via phi13 o T o rho(-1/b,b,-1/b) o phi13",
                    "fails at every sample b, in both directions",
                    lambda: never(lambda b: f"phi13*transpose*rho:a={_s(-1 / b)},b={_s(b)},c={_s(-1 / b)}*phi13",
                                  LOCAL["3d"], e("M3.3-I"))),
        Discrepancy("3-diagonal", "case 3 diagonal e11 -> e22+e33, e22 -> -(e22+e33), e33 -> -e33",
                    "3a-3d need R(e11) = R(e22) = 0; with the stated diagonal none is RB",
                    lambda: not _header3_rb()),
        Discrepancy("6a-M3", "the (M3) block operator of 6a equals 6b",
                    "it is the phi12 conjugate of 6b, not 6b itself",
                    lambda: not eq(LOCAL["6a-M3"], e("M3.6b")) and eq(conj(LOCAL["6a-M3"], "phi12"), e("M3.6b"))),
    )


def _header3_rb() -> bool:
    from .operators import rb_check
    h = {"e11": "e22 + e33", "e22": "-e22 - e33", "e33": "-e33", "e13": "-e13", "e23": "-e23"}
    variants = ({"e21": "e22 - e21 + e33"}, {"e12": "e11 - e12 + e33"},
                {"e12": "e11 - e12 + e33", "e21": "e22 - e21 + e33"},
                {"e12": "e22 - e12 + e33", "e21": "e11 - e21 + e33"})
    return any(rb_check(_op({**h, **v}, "3-header")) for v in variants)


DISCREPANCIES = _fails_as_written()
