"""Certified two-sided estimates for reduced operator norms.

The reduced norm of an algebra element is the supremum over base words w
of the operator norm of left convolution acting on l2 of the germs at w.
Everything here returns quantities with a stated side:

* a *lower* bound is ||A v|| / ||v|| for an explicitly computed vector v
  whose image under the operator is exact (no truncation error), so it is
  certified up to floating point rounding;
* an *upper* bound comes from a summable coefficient inequality, the
  length-layered l2 estimate sum_l (l+1) ||f_l||_2 for the free group.

Truncations are to balls in the rank-two free group on c, d.  A column of
a truncated matrix whose image would leave the ball is flagged as a
boundary column and excluded from the certified iteration.
"""

from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping, Optional, Sequence

import numpy as np
import scipy.sparse as sp

from .bundle import (
    BSteinElt,
    BUnit,
    _FLAG_KINDS,
    _fiber_at,
    bstein_sub,
    bundle_bn,
    bundle_chiB,
    bundle_sup_dist,
    buset_member,
    stratum_units,
)
from .groups import FreeWord, H_GENS, W_ONE, ball, sphere
from .selfsim import EPS, FinWord, Germ, S_ONE, Word, germ_key, s_defined_at, s_mul
from .steinberg import FULL_REGION, SteinElt, st_bn, st_chiB, st_eval, st_sub, st_sup_dist


# ---------------------------------------------------------------------------
# germ bases and convolution matrices
# ---------------------------------------------------------------------------


def germ_label(g: Germ) -> str:
    """Class of the germ's range word: 'B' (y-rooted), 'C' (z-rooted), or
    'eps' (the empty finite word)."""
    r = g.range_word()
    if isinstance(r, FinWord):
        if len(r) == 0:
            return "eps"
        first = r[0]
    else:
        first = r.letter_at(0)
    return "B" if first.family == "y" else "C"


@dataclass(frozen=True)
class GermBasis:
    """An ordered list of distinct germs at a common base word."""

    word: Word
    germs: tuple[Germ, ...]
    labels: tuple[str, ...]
    _by_key: dict = field(init=False, repr=False, compare=False)

    def __post_init__(self) -> None:
        by_key = {}
        for i, g in enumerate(self.germs):
            if g.word != self.word:
                raise ValueError("basis germs must share the base word")
            key = g.key()
            if key in by_key:
                raise ValueError("basis germs must be pairwise distinct")
            by_key[key] = i
        object.__setattr__(self, "_by_key", by_key)

    def __len__(self) -> int:
        return len(self.germs)

    def index(self, key) -> Optional[int]:
        return self._by_key.get(key)


def enumerate_orbit(f: SteinElt, w: Word, steps: int) -> GermBasis:
    """Germs at w reachable from the unit germ by at most ``steps`` left
    multiplications by terms of f with nonzero value.  The seed [1, w] is
    always included; duplicates are pruned by the canonical germ key, so
    terms that agree near the current range word contribute one germ.
    """
    seed = Germ(S_ONE, w)
    germs = [seed]
    seen = {seed.key()}
    frontier = [seed]
    for _ in range(steps):
        nxt = []
        for gm in frontier:
            r = gm.range_word()
            for t, _ in f.terms:
                if not s_defined_at(t, r) or st_eval(f, Germ(t, r)) == 0:
                    continue
                prod = s_mul(t, gm.s)
                key = germ_key(prod, w)
                if key in seen:
                    continue
                seen.add(key)
                new = Germ(prod, w)
                germs.append(new)
                nxt.append(new)
        frontier = nxt
        if not frontier:
            break
    return GermBasis(w, tuple(germs), tuple(germ_label(g) for g in germs))


@dataclass(frozen=True)
class SparseOperator:
    """A sparse rational matrix with flagged boundary columns.

    Entry (i, j, c) means c in row i, column j.  Boundary columns are
    those whose true image is not captured by the rows; certified lower
    bounds iterate on vectors supported away from them.
    """

    shape: tuple[int, int]
    entries: tuple[tuple[int, int, Fraction], ...]
    boundary_cols: frozenset[int] = frozenset()

    def to_csr(self, drop_boundary: bool = True) -> sp.csr_matrix:
        rows, cols, vals = [], [], []
        for i, j, c in self.entries:
            if drop_boundary and j in self.boundary_cols:
                continue
            rows.append(i)
            cols.append(j)
            vals.append(float(c))
        return sp.csr_matrix((vals, (rows, cols)), shape=self.shape)


def sparse_operator(
    shape: tuple[int, int],
    entries: Mapping[tuple[int, int], Fraction],
    boundary_cols=(),
) -> SparseOperator:
    cells = tuple(
        (i, j, c) for (i, j), c in sorted(entries.items()) if c != 0
    )
    return SparseOperator(shape, cells, frozenset(boundary_cols))


def lambda_matrix(f: SteinElt, basis: GermBasis) -> SparseOperator:
    """Matrix of left convolution by f on the span of the basis germs.

    Column j collects f(alpha) over the distinct germs alpha of terms of f
    at the range word of gamma_j; the product germ alpha gamma_j indexes
    the row.  A product germ outside the basis flags column j as boundary.
    """
    entries: dict[tuple[int, int], Fraction] = {}
    boundary = set()
    for j, gm in enumerate(basis.germs):
        r = gm.range_word()
        reps = {}
        for t, _ in f.terms:
            if s_defined_at(t, r):
                reps.setdefault(germ_key(t, r), t)
        for t in reps.values():
            val = st_eval(f, Germ(t, r))
            if val == 0:
                continue
            prod = s_mul(t, gm.s)
            i = basis.index(germ_key(prod, basis.word))
            if i is None:
                boundary.add(j)
            else:
                entries[(i, j)] = entries.get((i, j), Fraction(0)) + val
    return sparse_operator((len(basis), len(basis)), entries, boundary)


# ---------------------------------------------------------------------------
# certified norm estimates
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class NormEstimate:
    lower: float
    upper: Optional[float]
    iterations: int
    truncation_radius: Optional[int] = None

    def __str__(self) -> str:
        up = "?" if self.upper is None else f"{self.upper:.9f}"
        return f"[{self.lower:.9f}, {up}]"


def _power_lower(mat: sp.csr_matrix, tol: float, max_iter: int):
    """Largest ||A v|| / ||v|| found over explicit vectors v.

    Small matrices certify the dense SVD's top right singular vector with
    one exact multiplication; larger ones iterate A^T A from a uniform
    start, where the Rayleigh quotients are nondecreasing, so the last
    value is the best certified one.  Either way the result is witnessed
    by a vector whose image is computed directly.
    """
    ncols = mat.shape[1]
    if mat.nnz == 0 or ncols == 0:
        return 0.0, 0
    if max(mat.shape) <= 600:
        dense = mat.toarray()
        v = np.linalg.svd(dense)[2][0]
        return float(np.linalg.norm(dense @ v) / np.linalg.norm(v)), 1
    v = np.full(ncols, 1.0 / math.sqrt(ncols))
    sigma_prev = -1.0
    sigma = 0.0
    it = 0
    for it in range(1, max_iter + 1):
        u = mat @ v
        sigma = float(np.linalg.norm(u))
        if sigma == 0.0:
            return 0.0, it
        w = mat.T @ u
        norm_w = float(np.linalg.norm(w))
        if norm_w == 0.0:
            break
        v = w / norm_w
        if sigma - sigma_prev < tol:
            break
        sigma_prev = sigma
    return sigma, it


def opnorm_lower(
    op: SparseOperator,
    tol: float = 1e-9,
    max_iter: int = 2000,
    truncation_radius: Optional[int] = None,
) -> NormEstimate:
    """Certified lower bound for the operator norm: power iteration on the
    matrix with boundary columns dropped, so every image is exact."""
    sigma, iters = _power_lower(op.to_csr(drop_boundary=True), tol, max_iter)
    return NormEstimate(sigma, None, iters, truncation_radius)


def h_ball_operator(
    coeffs: Mapping[FreeWord, Fraction], radius: int
) -> SparseOperator:
    """Left multiplication by sum_h c_h h on l2 of the radius-``radius``
    ball of the free group on c, d.  Columns with some product landing
    outside the ball are flagged as boundary."""
    words = ball(radius)
    index = {w: i for i, w in enumerate(words)}
    items = [
        (h, c)
        for h, c in sorted(coeffs.items(), key=lambda t: t[0].sort_key())
        if c != 0
    ]
    entries: dict[tuple[int, int], Fraction] = {}
    boundary = set()
    for j, w in enumerate(words):
        for h, c in items:
            i = index.get(h * w)
            if i is None:
                boundary.add(j)
            else:
                entries[(i, j)] = entries.get((i, j), Fraction(0)) + c
    return sparse_operator((len(words), len(words)), entries, boundary)


def haagerup_bound(n: int) -> float:
    """Upper bound (n+1)/sqrt(4 * 3^(n-1)) for the norm of the normalized
    radius-n sphere average in the reduced algebra of the rank-two free
    group: the layer has l2 norm 1/sqrt|S_n| and weight n+1."""
    if not isinstance(n, int) or n < 1:
        raise ValueError("sphere radius must be a positive integer")
    return (n + 1) / (2.0 * 3.0 ** ((n - 1) / 2.0))


def _radial_sphere1_sigma(radius: int, tol: float, max_iter: int):
    """sigma_max of the radius-``radius`` truncated normalized sphere-1
    walk, computed in radial coordinates.

    On e_l = the normalized sphere-l indicator the walk is tridiagonal:
    A e_0 = (1/2) e_1, A e_1 = (1/2) e_0 + (sqrt3/4) e_2, and for l >= 2
    A e_l = (sqrt3/4)(e_{l-1} + e_{l+1}).  Columns l <= radius-1 have
    exact images in the ball; the truncation is invariant under the
    letter symmetries, which act transitively on spheres, so a top
    singular vector can be averaged into a radial one and the radial
    block attains the full truncated sigma_max.
    """
    rows, cols = radius + 1, radius
    off = math.sqrt(3.0) / 4.0
    mat = np.zeros((rows, cols))
    for col in range(cols):
        mat[col + 1, col] = 0.5 if col == 0 else off
        if col >= 1:
            mat[col - 1, col] = 0.5 if col == 1 else off
    return _power_lower(sp.csr_matrix(mat), tol, max_iter)


def rho_estimate(
    K: Sequence[FreeWord],
    radius: int,
    tol: float = 1e-9,
    max_iter: int = 2000,
) -> NormEstimate:
    """Certified estimates for the norm of the normalized walk operator
    (1/|K|) sum_{k in K} lambda(k) on l2 of the free group on c, d.

    K must be closed under inverses so the walk is self-adjoint.  The
    lower bound iterates on the ball truncation with boundary columns
    removed (for the full radius-1 sphere this reduces exactly to a
    tridiagonal radial matrix); the upper bound is the layered l2
    estimate when K is a full sphere, else the trivial average-of-
    unitaries bound 1.
    """
    ks = tuple(K)
    if not ks:
        raise ValueError("K must be nonempty")
    for k in ks:
        if not isinstance(k, FreeWord) or not k.gens() <= set(H_GENS):
            raise ValueError(f"walk steps must be words over {H_GENS}")
    if Counter(ks) != Counter(k.inv() for k in ks):
        raise ValueError("K must be closed under inverses")
    if radius < 1:
        raise ValueError("truncation radius must be positive")
    if all(k.is_identity() for k in ks):
        return NormEstimate(1.0, 1.0, 0, radius)

    lengths = {len(k.chars) for k in ks}
    sphere_n = None
    if len(lengths) == 1:
        n = lengths.pop()
        if n >= 1 and Counter(ks) == Counter(sphere(n)):
            sphere_n = n
    upper = haagerup_bound(sphere_n) if sphere_n is not None else 1.0

    # a symmetric K cannot shrink every word at once (w would have to start
    # with every k), so below the minimum step length no column is interior
    if radius < min(len(k.chars) for k in ks):
        return NormEstimate(0.0, upper, 0, radius)

    if sphere_n == 1:
        sigma, iters = _radial_sphere1_sigma(radius, tol, max_iter)
    else:
        coeffs: dict[FreeWord, Fraction] = {}
        unit = Fraction(1, len(ks))
        for k in ks:
            coeffs[k] = coeffs.get(k, Fraction(0)) + unit
        est = opnorm_lower(h_ball_operator(coeffs, radius), tol, max_iter)
        sigma, iters = est.lower, est.iterations
    return NormEstimate(min(sigma, upper), upper, iters, radius)


# ---------------------------------------------------------------------------
# norm bounds for combinations of fiber group terms
# ---------------------------------------------------------------------------


def _h_coeffs(f: SteinElt) -> dict[FreeWord, Fraction]:
    if f.region != FULL_REGION:
        raise ValueError("norm bound needs an unrestricted element")
    coeffs: dict[FreeWord, Fraction] = {}
    for s, c in f.terms:
        g = s.g
        if (
            len(s.alpha) != 0
            or len(s.beta) != 0
            or not g.f.is_identity()
            or g.n != 0
            or g.m != 0
        ):
            raise ValueError("terms must be fiber group elements over c, d")
        coeffs[g.h] = coeffs.get(g.h, Fraction(0)) + c
    return {h: c for h, c in coeffs.items() if c != 0}


def _layered_upper(coeffs: Mapping[FreeWord, Fraction]) -> float:
    layers: dict[int, Fraction] = {}
    for h, c in coeffs.items():
        length = len(h.chars)
        layers[length] = layers.get(length, Fraction(0)) + c * c
    return sum((l + 1) * math.sqrt(q) for l, q in layers.items())


def stein_H_norm_bound(
    f: SteinElt, radius: int = 6, tol: float = 1e-9, max_iter: int = 2000
) -> NormEstimate:
    """Two-sided bound for the reduced norm of a combination of fiber
    group terms (group elements of the free factor on c, d).

    On a cylinder rooted in a y-family all such terms share one germ, so
    those base words contribute exactly |sum of coefficients|.  Rooted in
    a z-family or at the empty word the germs are the left translations
    of the free factor, i.e. the regular representation: bounded above by
    the layered l2 estimate and below by iteration on an exact ball
    truncation.  The norm is the max of the two parts.
    """
    coeffs = _h_coeffs(f)
    collapse = float(abs(sum(coeffs.values(), Fraction(0))))
    if not coeffs:
        return NormEstimate(0.0, 0.0, 0, radius)
    est = opnorm_lower(h_ball_operator(coeffs, radius), tol, max_iter)
    return NormEstimate(
        max(collapse, est.lower),
        max(collapse, _layered_upper(coeffs)),
        est.iterations,
        radius,
    )


def _fiber_coeffs(f: BSteinElt, u: BUnit) -> dict[tuple[int, FreeWord], Fraction]:
    """Coefficients of the fiber group algebra element of f at a unit."""
    if u.kind not in _FLAG_KINDS[f.flag]:
        return {}
    acc: dict[tuple[int, FreeWord], Fraction] = {}
    for bit, h, c, region in f.terms:
        if buset_member(region, u):
            key = _fiber_at(bit, h, u)
            acc[key] = acc.get(key, Fraction(0)) + c
    return {k: v for k, v in acc.items() if v != 0}


def bundle_norm_bound(
    f: BSteinElt, radius: int = 6, tol: float = 1e-9, max_iter: int = 2000
) -> NormEstimate:
    """Two-sided reduced-norm bound for a bundle element: the sup of the
    fiber operator norms over one unit per fiber stratum.

    x-fibers are trivial and y-fibers abelian of order two, so both are
    exact character maxima.  z- and eps-fibers carry the order-two group
    times the free factor; splitting along the two characters of the
    order-two part leaves free group walks, bounded as in
    ``stein_H_norm_bound``.
    """
    lower = 0.0
    upper = 0.0
    iterations = 0
    for u in stratum_units((f,)):
        coeffs = _fiber_coeffs(f, u)
        if not coeffs:
            continue
        if u.kind == "x":
            val = float(abs(coeffs.get((0, W_ONE), Fraction(0))))
            lower = max(lower, val)
            upper = max(upper, val)
            continue
        if u.kind == "y":
            v0 = coeffs.get((0, W_ONE), Fraction(0))
            v1 = coeffs.get((1, W_ONE), Fraction(0))
            val = float(max(abs(v0 + v1), abs(v0 - v1)))
            lower = max(lower, val)
            upper = max(upper, val)
            continue
        for sign in (1, -1):
            walk: dict[FreeWord, Fraction] = {}
            for (bit, h), c in coeffs.items():
                c = c if (sign == 1 or bit == 0) else -c
                walk[h] = walk.get(h, Fraction(0)) + c
            walk = {h: c for h, c in walk.items() if c != 0}
            if not walk:
                continue
            est = opnorm_lower(h_ball_operator(walk, radius), tol, max_iter)
            lower = max(lower, est.lower)
            upper = max(upper, _layered_upper(walk))
            iterations += est.iterations
            if not any(bit for bit, _ in coeffs):
                break  # both characters give the same walk
    return NormEstimate(lower, upper, iterations, radius)


# ---------------------------------------------------------------------------
# scattering profile
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class CauchyRow:
    n: int
    m: int
    sup_dist: Fraction
    upper: float
    lower: float


@dataclass(frozen=True)
class LimitRow:
    n: int
    sup_dist: Fraction


@dataclass(frozen=True)
class CauchyProfile:
    example: str
    radius: int
    rows: tuple[CauchyRow, ...]
    limit_rows: tuple[LimitRow, ...]


def cauchy_profile(
    indices: Sequence[int],
    example: str = "selfsim",
    radius: int = 6,
    tol: float = 1e-9,
) -> CauchyProfile:
    """Pairwise distances between the sphere averages b_n.

    For each pair n < m of indices one row records the exact pointwise
    sup distance and a certified two-sided bound for the reduced norm of
    b_n - b_m; limit rows record the sup distance to the indicator of the
    y-rooted half.  Pointwise the b_n converge (sup distances vanish),
    while the norm rows stay bounded away from zero.
    """
    idx = sorted(set(indices))
    for n in idx:
        if not isinstance(n, int) or n < 1:
            raise ValueError("sphere indices must be positive integers")
    if example == "selfsim":
        elts = {n: st_bn(n) for n in idx}
        limit = st_chiB()
        dist = st_sup_dist
        bound = lambda n, m: stein_H_norm_bound(
            st_sub(elts[n], elts[m]), radius, tol
        )
    elif example == "bundle":
        elts = {n: bundle_bn(n) for n in idx}
        limit = bundle_chiB()
        dist = bundle_sup_dist
        bound = lambda n, m: bundle_norm_bound(
            bstein_sub(elts[n], elts[m]), radius, tol
        )
    else:
        raise ValueError(f"unknown example {example!r}")
    rows = []
    for i, n in enumerate(idx):
        for m in idx[i + 1:]:
            est = bound(n, m)
            rows.append(
                CauchyRow(n, m, dist(elts[n], elts[m]), est.upper, est.lower)
            )
    limit_rows = tuple(LimitRow(n, dist(elts[n], limit)) for n in idx)
    return CauchyProfile(example, radius, tuple(rows), limit_rows)
