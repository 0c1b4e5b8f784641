"""Exhaustive grid searches for RB operators on F^3 and M_2.

Every candidate matrix with entries in a finite grid is tested against the
RB identity by the integer kernels in ``_kernels``.  Hits are then re-checked
exactly (twice: basis pairs and random element pairs) and sorted into
buckets, each carrying a witness that can be re-verified offline.

The grids are finite, so a clean run says nothing about operators outside
the grid.
"""

from __future__ import annotations

import os
import random
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

import numpy as np

from . import _kernels
from .algebra import F3, M2, AlgebraContext, is_product_closed, is_rational_square, trace_form_discriminant
from .catalog import F3_CASES, f3_case, get_entry, permute_f3, split_operator
from .exactlinalg import ONE, Mat, common_denominator, format_scalar, kernel, to_scalar
from .morphisms import DEFAULT_CONJ_GRID, find_conjugator, s3_permutations
from .operators import (OperatorMatrix, is_inner_splitting, is_splitting_map, kernel_space,
                        orbit_signature, phi, random_pair_check, rb_check, scale_weight)

DEFAULT_GRID = (-1, 0, 1)
BUCKETS = ("inner_splitting", "orbit", "splitting_other", "unmatched")
M2_REPRESENTATIVES = ("M1", "M2", "M3", "M4", "M5", "M6")


@dataclass
class Hit:
    index: int
    operator: OperatorMatrix
    bucket: str
    label: str = ""
    witness: dict = field(default_factory=dict)

    def summary(self) -> dict:
        return {
            "index": self.index,
            "matrix": [[format_scalar(x) for x in row] for row in self.operator.matrix.to_rows()],
            "bucket": self.bucket,
            "label": self.label,
            "witness": self.witness,
        }


@dataclass
class SearchResult:
    context: str
    grid: tuple[Fraction, ...]
    weight: Fraction
    candidates: int
    scanned: int
    hits: list[Hit]
    complete: bool
    elapsed: float
    backend: str
    workers: int

    def bucket(self, name: str) -> list[Hit]:
        return [h for h in self.hits if h.bucket == name]

    def bucket_sizes(self) -> dict[str, int]:
        return {b: len(self.bucket(b)) for b in BUCKETS}

    def label_counts(self) -> dict[str, int]:
        out: dict[str, int] = {}
        for h in self.hits:
            key = f"{h.bucket}:{h.label}" if h.label else h.bucket
            out[key] = out.get(key, 0) + 1
        return dict(sorted(out.items()))

    @property
    def unmatched(self) -> list[Hit]:
        return self.bucket("unmatched")

    @property
    def green(self) -> bool:
        return self.complete and not self.unmatched

    def summary(self, with_hits: bool = False) -> dict:
        out = {
            "context": self.context,
            "grid": [format_scalar(g) for g in self.grid],
            "weight": format_scalar(self.weight),
            "candidates": self.candidates,
            "scanned": self.scanned,
            "complete": self.complete,
            "rb_hits": len(self.hits),
            "buckets": self.bucket_sizes(),
            "labels": self.label_counts(),
            "unmatched": [h.summary() for h in self.unmatched],
            "note": "exhaustive over the grid only; not a completeness proof over Q",
        }
        if with_hits:
            out["hits"] = [h.summary() for h in self.hits]
        return out

    def timing(self) -> dict:
        return {"elapsed_sec": round(self.elapsed, 3), "backend": self.backend, "workers": self.workers}


# --- scanning ------------------------------------------------------------------------


def _integer_problem(ctx: AlgebraContext, grid: Sequence, weight):
    grid = tuple(to_scalar(g) for g in grid)
    w = to_scalar(weight)
    if not grid:
        raise ValueError("empty grid")
    if w == 0:
        raise ValueError("weight must be nonzero")
    D = common_denominator(grid)
    tensor = np.array([[[int(c) for c in row] for row in plane] for plane in ctx.structure_tensor()],
                      dtype=np.int64)
    if any(Fraction(c).denominator != 1 for plane in ctx.structure_tensor() for row in plane for c in row):
        raise ValueError("grid search needs integral structure constants")
    igrid = np.array([int(g * D) for g in grid], dtype=np.int64)
    return grid, w, D, tensor, igrid


def _scan_range(args):
    tensor, igrid, p, q, pd, lo, hi = args
    return _kernels.rb_search(tensor, igrid, p, q, pd, lo, hi)


def _scan(ctx, grid, weight, budget_sec=None, workers=1, chunk=1 << 21):
    grid, w, D, tensor, igrid = _integer_problem(ctx, grid, weight)
    total = len(grid) ** (ctx.dim * ctx.dim)
    p, q = w.numerator, w.denominator
    jobs = [(tensor, igrid, p, q, p * D, lo, min(lo + chunk, total)) for lo in range(0, total, chunk)]
    start = time.perf_counter()
    found: list[np.ndarray] = []
    scanned = 0
    complete = True
    if workers <= 1:
        for job in jobs:
            if budget_sec is not None and time.perf_counter() - start > budget_sec:
                complete = False
                break
            found.append(_scan_range(job))
            scanned += job[6] - job[5]
    else:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            futures = [pool.submit(_scan_range, job) for job in jobs]
            for job, fut in zip(jobs, futures):
                remaining = None if budget_sec is None else budget_sec - (time.perf_counter() - start)
                if remaining is not None and remaining <= 0 and not fut.done():
                    complete = False
                    break
                try:
                    found.append(fut.result(timeout=remaining))
                except TimeoutError:
                    complete = False
                    break
                scanned += job[6] - job[5]
            if not complete:
                for fut in futures:
                    fut.cancel()
    idx = np.sort(np.concatenate(found)) if found else np.empty(0, dtype=np.int64)
    entries = _kernels.decode(idx, igrid, ctx.dim * ctx.dim)
    ops = []
    for i, row in zip(idx, entries):
        m = Mat(ctx.dim, ctx.dim, [Fraction(int(x), D) for x in row])
        ops.append((int(i), OperatorMatrix(ctx, m, w)))
    return grid, w, total, scanned, complete, ops, time.perf_counter() - start


def _double_entry(R: OperatorMatrix, rng: random.Random) -> None:
    """Second and third opinion on a kernel hit."""
    if not rb_check(R):
        raise AssertionError(f"kernel hit fails the exact check: {R.matrix}")
    if not random_pair_check(R, rng):
        raise AssertionError(f"kernel hit fails the random-pair check: {R.matrix}")


def _splitting_witness(R: OperatorMatrix) -> dict | None:
    """ker R and ker(R + w) as a certified split decomposition, if R is splitting."""
    if not is_splitting_map(R):
        return None
    ctx = R.context
    A1 = kernel_space(R)
    A2 = kernel(R.matrix + Mat.scalar(ctx.dim, R.weight))
    if A1.dim + A2.dim != ctx.dim or A1.intersection(A2).dim:
        return None
    if not (is_product_closed(A1, ctx) and is_product_closed(A2, ctx)):
        return None
    if split_operator(A1, A2, R.weight, ctx).matrix != R.matrix:
        return None
    fmt = lambda S: [[format_scalar(x) for x in b] for b in S.basis]
    return {"A1": fmt(A1), "A2": fmt(A2)}


# --- F^3 -----------------------------------------------------------------------------


def _f3_orbit_table() -> dict[tuple, tuple[int, dict, bool]]:
    table = {}
    for k in sorted(F3_CASES):
        base = f3_case(k)
        for use_phi in (False, True):
            src = phi(base) if use_phi else base
            for sigma in s3_permutations(3):
                key = permute_f3(src, sigma).matrix.entries
                table.setdefault(key, (k, sigma, use_phi))
    return table


def classify_f3(R: OperatorMatrix, table=None) -> Hit:
    """Bucket one weight-w operator on F^3 (index left at -1)."""
    table = table if table is not None else _f3_orbit_table()
    if is_inner_splitting(R):
        c = R.unit_image()[0]
        return Hit(-1, R, "inner_splitting", witness={"R(1)": f"{format_scalar(c)}*(f1+f2+f3)"})
    R1 = scale_weight(R) if R.weight != ONE else R
    hit = table.get(R1.matrix.entries)
    if hit is not None:
        k, sigma, use_phi = hit
        return Hit(-1, R, "orbit", f"case{k}", {
            "case": k, "permutation": {str(a): b for a, b in sigma.items()}, "phi": use_phi,
            "scaled_by": format_scalar(1 / R.weight)})
    split = _splitting_witness(R)
    if split is not None:
        return Hit(-1, R, "splitting_other", witness=split)
    return Hit(-1, R, "unmatched")


def search_f3(grid: Sequence = DEFAULT_GRID, weight=1, seed: int = 0) -> SearchResult:
    grid, w, total, scanned, complete, ops, elapsed = _scan(F3, grid, weight)
    rng = random.Random(seed)
    table = _f3_orbit_table()
    hits = []
    for i, R in ops:
        _double_entry(R, rng)
        h = classify_f3(R, table)
        h.index = i
        hits.append(h)
    return SearchResult("F3", grid, w, total, scanned, hits, complete, elapsed, _kernels.backend(), 1)


# --- M_2 -----------------------------------------------------------------------------


def _m2_targets() -> list[tuple[str, bool, OperatorMatrix]]:
    out = []
    for label in M2_REPRESENTATIVES:
        R = get_entry("M2." + label).operator
        out.append((label, False, R))
        out.append((label, True, phi(R)))
    return out


def classify_m2(R: OperatorMatrix, targets=None, conj_grid: Sequence[int] = DEFAULT_CONJ_GRID) -> Hit:
    """Bucket one operator on M_2; orbit labels come with an explicit conjugator."""
    targets = targets if targets is not None else _m2_targets()
    R1 = scale_weight(R) if R.weight != ONE else R
    trivial = None
    if R1.matrix.is_zero():
        trivial = ("zero", False)
    elif R1.matrix == Mat.scalar(R.context.dim, -ONE):
        trivial = ("zero", True)
    inner_split = is_inner_splitting(R)
    if trivial:
        label, witness = "trivial", {"phi": trivial[1], "operator": "zero"}
    else:
        label, witness = "", {}
        for name, use_phi, Q in targets:
            res = find_conjugator(R1, Q, conj_grid)
            if res:
                label = name
                witness = {"representative": name, "phi": use_phi,
                           "T": [[format_scalar(x) for x in row] for row in res.T.to_rows()],
                           "transposed": res.transposed, "conjugator": res.morphism.name}
                break
    if not label and not trivial:
        label, witness = _invariant_label(R1, targets)
    if inner_split:
        c = R.unit_image()[0]
        witness = {"R(1)": f"{format_scalar(c)}*E", **witness}
        return Hit(-1, R, "inner_splitting", label, witness)
    if label:
        return Hit(-1, R, "orbit", label, witness)
    split = _splitting_witness(R)
    if split is not None:
        return Hit(-1, R, "splitting_other", witness=split)
    return Hit(-1, R, "unmatched")


def _kernel_discriminants(R: OperatorMatrix) -> list[str]:
    ctx = R.context
    spaces = (kernel_space(R), kernel(R.matrix + Mat.scalar(ctx.dim, R.weight)))
    return [format_scalar(trace_form_discriminant(A, ctx)) for A in spaces]


def _invariant_label(R: OperatorMatrix, targets) -> tuple[str, dict]:
    """Fallback when no grid conjugator exists: match orbit invariants.

    This happens when a kernel is a quadratic field over Q: the operator is
    then conjugate to the representative only after extending scalars, and
    the witness records the non-square discriminant that rules out a
    rational conjugator.
    """
    sig = orbit_signature(R)
    for name, use_phi, Q in targets:
        if not use_phi and orbit_signature(Q) == sig:
            mine, theirs = _kernel_discriminants(R), _kernel_discriminants(Q)
            return name, {
                "representative": name,
                "certificate": "orbit invariants; no conjugator in the grid",
                "kernel_discriminants": mine,
                "representative_discriminants": theirs,
                "rational_conjugator_possible": sorted(map(_square_class, mine)) == sorted(map(_square_class, theirs)),
            }
    return "", {}


def _square_class(text: str) -> bool:
    return is_rational_square(Fraction(text))


def search_m2(grid: Sequence = DEFAULT_GRID, weight=1, budget_sec: float | None = None,
              workers: int = 1, seed: int = 0, classify: bool = True) -> SearchResult:
    """Enumerate all 4x4 operator matrices over the grid.

    With ``workers > 1`` index ranges go to a process pool; hits are merged in
    index order, so the result does not depend on scheduling.  When the
    budget runs out the result is marked incomplete.
    """
    workers = max(1, int(workers))
    grid, w, total, scanned, complete, ops, elapsed = _scan(M2, grid, weight, budget_sec, workers)
    rng = random.Random(seed)
    targets = _m2_targets()
    hits = []
    for i, R in ops:
        _double_entry(R, rng)
        if classify:
            h = classify_m2(R, targets)
        else:
            h = Hit(-1, R, "unmatched")
        h.index = i
        hits.append(h)
    return SearchResult("M2", grid, w, total, scanned, hits, complete, elapsed, _kernels.backend(), workers)


def default_workers() -> int:
    return len(os.sched_getaffinity(0)) if hasattr(os, "sched_getaffinity") else (os.cpu_count() or 1)
