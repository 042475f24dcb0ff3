"""A bundle of groups over a grid-with-limits unit space.

Units: grid points ``x[i,j]`` (isolated), one column limit ``y[i]`` per
column, isolated points ``z[k]``, and a final limit ``eps``.  The isotropy
is trivial over X, the order-two group over Y, and ``Z2 x H`` over Z and
eps, where H is the free group on c, d.  Arrows are written (bit, h, unit).

For a group element g = (bit, h) the global bisection U_g consists of the
unit arrows over X, the bit-arrows over Y, and the (bit, h)-arrows over Z
and eps.  Functions are finite rational combinations of indicators of
U_g restricted to compact open unit sets, together with a symbolic
restriction flag to one of the two closed-open halves B = X u Y and
F = Z u {eps}; this keeps the indicator of the noncompact half B exact.

Everything here is exact: coefficients are fractions, suprema are computed
over finitely many strata on which every involved function is constant.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Optional, Union

from .groups import FreeWord, H_GENS, W_ONE, sphere

# ---------------------------------------------------------------------------
# units and arrows
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class BUnit:
    kind: str  # 'x', 'y', 'z', 'eps'
    i: int = 0  # column for x/y, index for z
    j: int = 0  # row inside a column, x only

    def __post_init__(self) -> None:
        if self.kind not in ("x", "y", "z", "eps"):
            raise ValueError(f"unknown unit kind {self.kind!r}")
        if self.kind in ("y", "z", "eps") and self.j != 0:
            raise ValueError(f"{self.kind}-units carry no row index")
        if self.kind == "eps" and self.i != 0:
            raise ValueError("eps carries no indices")

    def sort_key(self):
        return (self.kind, self.i, self.j)

    def __str__(self) -> str:
        if self.kind == "x":
            return f"x[{self.i},{self.j}]"
        if self.kind == "eps":
            return "eps"
        return f"{self.kind}[{self.i}]"


def ux(i: int, j: int) -> BUnit:
    return BUnit("x", i, j)


def uy(i: int) -> BUnit:
    return BUnit("y", i)


def uz(k: int) -> BUnit:
    return BUnit("z", k)


U_EPS = BUnit("eps")


@dataclass(frozen=True)
class BArrow:
    """Arrow (bit, h) in the fiber over ``unit``.

    Over x-units only the unit arrow exists; over y-units the fiber is the
    order-two group (h must be trivial); over z and eps the full Z2 x H.
    """

    bit: int
    h: FreeWord
    unit: BUnit

    def __post_init__(self) -> None:
        if self.bit not in (0, 1):
            raise ValueError("bit must be 0 or 1")
        if not self.h.gens() <= set(H_GENS):
            raise ValueError(f"fiber word {self.h} not over {H_GENS}")
        if self.unit.kind == "x" and (self.bit or not self.h.is_identity()):
            raise ValueError("x-fibers are trivial")
        if self.unit.kind == "y" and not self.h.is_identity():
            raise ValueError("y-fibers have no free part")

    def sort_key(self):
        return (self.unit.sort_key(), self.bit, self.h.sort_key())

    def __str__(self) -> str:
        return f"({self.bit},{self.h};{self.unit})"


def barrow(bit: int, h: FreeWord, unit: BUnit) -> BArrow:
    return BArrow(bit, h, unit)


# ---------------------------------------------------------------------------
# compact open unit sets
# ---------------------------------------------------------------------------

ColTrace = tuple[bool, frozenset]  # (has_y, js): js excluded if has_y else included


@dataclass(frozen=True)
class BUnitSet:
    """Compact open set of units in canonical form; build with buset().

    With eps in the set, zs lists the finitely many excluded z-indices and
    every column not listed in cols is entirely inside; without eps, zs
    lists the included z-indices and unlisted columns are disjoint from the
    set.  A column trace (True, js) means y[i] plus all x[i,j] except the
    finitely many listed; (False, js) means just the listed x[i,j].
    """

    eps: bool = False
    zs: frozenset = frozenset()
    cols: tuple[tuple[int, ColTrace], ...] = ()

    def default_trace(self) -> ColTrace:
        return (self.eps, frozenset())

    def col(self, i: int) -> ColTrace:
        for key, trace in self.cols:
            if key == i:
                return trace
        return self.default_trace()

    def is_empty(self) -> bool:
        return not self.eps and not self.zs and not self.cols

    def sort_key(self):
        return (
            self.eps,
            tuple(sorted(self.zs)),
            tuple((i, t[0], tuple(sorted(t[1]))) for i, t in self.cols),
        )

    def __str__(self) -> str:
        if self.is_empty():
            return "{}"
        parts = []
        if self.eps:
            parts.append("eps")
            if self.zs:
                parts.append("Z-" + "{" + ",".join(str(k) for k in sorted(self.zs)) + "}")
            else:
                parts.append("Z")
        elif self.zs:
            parts.append("{" + ",".join(f"z[{k}]" for k in sorted(self.zs)) + "}")
        for i, (has_y, js) in self.cols:
            if has_y:
                ex = "-" + "{" + ",".join(str(j) for j in sorted(js)) + "}" if js else ""
                parts.append(f"col[{i}]{ex}")
            else:
                parts.append("{" + ",".join(f"x[{i},{j}]" for j in sorted(js)) + "}")
        if self.eps:
            parts.append("cols*" if not self.cols else "other-cols")
        return " u ".join(parts)


def buset(
    eps: bool = False,
    zs: Iterable[int] = (),
    cols: Optional[dict] = None,
) -> BUnitSet:
    """Canonicalize: drop column traces equal to the default."""
    default = (eps, frozenset())
    items = []
    for i, (has_y, js) in sorted((cols or {}).items()):
        trace = (bool(has_y), frozenset(js))
        if trace != default:
            items.append((i, trace))
    return BUnitSet(eps, frozenset(zs), tuple(items))


EMPTY_SET = buset()
WHOLE_SET = buset(eps=True)


def buset_member(U: BUnitSet, u: BUnit) -> bool:
    if u.kind == "eps":
        return U.eps
    if u.kind == "z":
        return (u.i not in U.zs) if U.eps else (u.i in U.zs)
    has_y, js = U.col(u.i)
    if u.kind == "y":
        return has_y
    return (u.j not in js) if has_y else (u.j in js)


def _trace_intersect(t1: ColTrace, t2: ColTrace) -> ColTrace:
    (y1, s1), (y2, s2) = t1, t2
    if y1 and y2:
        return (True, s1 | s2)
    if y1:
        return (False, s2 - s1)
    if y2:
        return (False, s1 - s2)
    return (False, s1 & s2)


def _trace_union(t1: ColTrace, t2: ColTrace) -> ColTrace:
    (y1, s1), (y2, s2) = t1, t2
    if y1 and y2:
        return (True, s1 & s2)
    if y1:
        return (True, s1 - s2)
    if y2:
        return (True, s2 - s1)
    return (False, s1 | s2)


def _merge(U: BUnitSet, V: BUnitSet, trace_op) -> BUnitSet:
    keys = {i for i, _ in U.cols} | {i for i, _ in V.cols}
    cols = {i: trace_op(U.col(i), V.col(i)) for i in keys}
    # the (eps, zs) pair obeys the same finite/cofinite logic as a column
    eps, zset = trace_op((U.eps, U.zs), (V.eps, V.zs))
    return buset(eps, zset, cols)


def buset_intersect(U: BUnitSet, V: BUnitSet) -> BUnitSet:
    return _merge(U, V, _trace_intersect)


def buset_union(U: BUnitSet, V: BUnitSet) -> BUnitSet:
    return _merge(U, V, _trace_union)


# ---------------------------------------------------------------------------
# functions
# ---------------------------------------------------------------------------

FLAG_FULL = "full"
FLAG_B = "B"  # X u Y
FLAG_F = "F"  # Z u {eps}

_FLAG_KINDS = {
    FLAG_FULL: ("x", "y", "z", "eps"),
    FLAG_B: ("x", "y"),
    FLAG_F: ("z", "eps"),
}

BTerm = tuple[int, FreeWord, Fraction, BUnitSet]  # (bit, h, coeff, region)


@dataclass(frozen=True)
class BSteinElt:
    terms: tuple[BTerm, ...] = ()
    flag: str = FLAG_FULL

    def is_zero_elt(self) -> bool:
        return not self.terms

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        bits = []
        for bit, h, c, region in self.terms:
            r = "" if region == WHOLE_SET else f"|{region}"
            bits.append(f"{c}*U({bit},{h}){r}")
        s = " + ".join(bits)
        return s if self.flag == FLAG_FULL else f"r_{self.flag}[{s}]"


def bstein(terms: Iterable[BTerm], flag: str = FLAG_FULL) -> BSteinElt:
    """Merge same-(bit, h, region) terms, drop zeros and empty regions."""
    if flag not in _FLAG_KINDS:
        raise ValueError(f"unknown flag {flag!r}")
    acc: dict = {}
    for bit, h, coeff, region in terms:
        if region.is_empty():
            continue
        key = (bit, h, region)
        acc[key] = acc.get(key, Fraction(0)) + Fraction(coeff)
    out = [
        (bit, h, c, region)
        for (bit, h, region), c in acc.items()
        if c != 0
    ]
    out.sort(key=lambda t: (t[0], t[1].sort_key(), t[3].sort_key()))
    # a flag carries no information on the zero element
    return BSteinElt(tuple(out), flag if out else FLAG_FULL)


B_ZERO = BSteinElt()


def _fiber_at(bit: int, h: FreeWord, unit: BUnit):
    """The single arrow of U_(bit, h) over ``unit``."""
    if unit.kind == "x":
        return (0, W_ONE)
    if unit.kind == "y":
        return (bit, W_ONE)
    return (bit, h)


def bstein_eval(f: BSteinElt, arrow: BArrow) -> Fraction:
    if arrow.unit.kind not in _FLAG_KINDS[f.flag]:
        return Fraction(0)
    total = Fraction(0)
    for bit, h, coeff, region in f.terms:
        if buset_member(region, arrow.unit) and _fiber_at(bit, h, arrow.unit) == (
            arrow.bit,
            arrow.h,
        ):
            total += coeff
    return total


def _flag_meet(a: str, b: str) -> Optional[str]:
    if a == b:
        return a
    if a == FLAG_FULL:
        return b
    if b == FLAG_FULL:
        return a
    return None  # B meet F is empty


def bstein_conv(f: BSteinElt, g: BSteinElt) -> BSteinElt:
    """Convolution; in a bundle arrows compose only over a shared unit."""
    flag = _flag_meet(f.flag, g.flag)
    if flag is None:
        return B_ZERO
    prods = []
    for b1, h1, c1, U in f.terms:
        for b2, h2, c2, V in g.terms:
            prods.append(((b1 + b2) % 2, h1 * h2, c1 * c2, buset_intersect(U, V)))
    return bstein(prods, flag)


def bstein_star(f: BSteinElt) -> BSteinElt:
    return bstein(
        [(bit, h.inv(), c, region) for bit, h, c, region in f.terms], f.flag
    )


def bstein_add(f: BSteinElt, g: BSteinElt) -> BSteinElt:
    if f.flag != g.flag and f.terms and g.terms:
        raise ValueError("cannot add elements restricted to different halves")
    flag = f.flag if f.terms else g.flag
    return bstein(f.terms + g.terms, flag)


def bstein_scale(f: BSteinElt, c: Union[Fraction, int]) -> BSteinElt:
    c = Fraction(c)
    return bstein([(b, h, c * q, U) for b, h, q, U in f.terms], f.flag)


def bstein_sub(f: BSteinElt, g: BSteinElt) -> BSteinElt:
    return bstein_add(f, bstein_scale(g, -1))


def bundle_restrict_F(f: BSteinElt) -> BSteinElt:
    """Restriction to the closed half F = Z u {eps}; kills chi_B exactly."""
    flag = _flag_meet(f.flag, FLAG_F)
    if flag is None:
        return B_ZERO
    return bstein(f.terms, flag)


def bundle_restrict_B(f: BSteinElt) -> BSteinElt:
    flag = _flag_meet(f.flag, FLAG_B)
    if flag is None:
        return B_ZERO
    return bstein(f.terms, flag)


# ---------------------------------------------------------------------------
# the named elements
# ---------------------------------------------------------------------------


def bundle_chi(U: BUnitSet) -> BSteinElt:
    """Indicator of the unit arrows over a compact open unit set."""
    return bstein([(0, W_ONE, Fraction(1), U)])


def bundle_chiB() -> BSteinElt:
    """Indicator of the unit arrows over B = X u Y (symbolic restriction)."""
    return bstein([(0, W_ONE, Fraction(1), WHOLE_SET)], FLAG_B)


def bundle_a() -> BSteinElt:
    """chi of the bit-0 global bisection minus the bit-1 one."""
    return bstein(
        [
            (0, W_ONE, Fraction(1), WHOLE_SET),
            (1, W_ONE, Fraction(-1), WHOLE_SET),
        ]
    )


def bundle_bn(n: int) -> BSteinElt:
    """Average of the bisections of (0, h) over the radius-n sphere of H."""
    sph = sphere(n)
    w = Fraction(1, len(sph))
    return bstein([(0, h, w, WHOLE_SET) for h in sph])


# ---------------------------------------------------------------------------
# exact suprema and singularity
# ---------------------------------------------------------------------------


def _fresh(indices: Iterable[int]) -> int:
    return max((abs(i) for i in indices), default=0) + 1


def stratum_units(fs: tuple[BSteinElt, ...]) -> list[BUnit]:
    """Finitely many units meeting every stratum on which each f has a
    constant fiber: region membership only inspects the finitely many
    indices written in the terms' regions, so these indices plus one
    fresh index of each kind see every fiber any of the functions has.
    """
    zs: set[int] = set()
    col_keys: set[int] = set()
    col_js: dict[int, set[int]] = {}
    for f in fs:
        for _, _, _, region in f.terms:
            zs.update(region.zs)
            for i, (_, js) in region.cols:
                col_keys.add(i)
                col_js.setdefault(i, set()).update(js)
    zs.add(_fresh(zs))
    col_keys.add(_fresh(col_keys))
    units: list[BUnit] = [U_EPS]
    units.extend(uz(k) for k in sorted(zs))
    for i in sorted(col_keys):
        units.append(uy(i))
        js = col_js.get(i, set())
        js.add(_fresh(js))
        units.extend(ux(i, j) for j in sorted(js))
    return units


def _stratum_arrows(fs: tuple[BSteinElt, ...]) -> list[BArrow]:
    """Finitely many arrows meeting every stratum on which each f is constant.

    Term fibers only match arrows carrying one of the terms' (bit, h)
    pairs, so evaluating on these arrows sees every value any of the
    functions attains.
    """
    fibers = {(0, W_ONE), (1, W_ONE)}
    for f in fs:
        for bit, h, _, _ in f.terms:
            fibers.add((bit, h))
    units = stratum_units(fs)
    arrows: list[BArrow] = []
    for u in units:
        if u.kind == "x":
            arrows.append(barrow(0, W_ONE, u))
        elif u.kind == "y":
            arrows.append(barrow(0, W_ONE, u))
            arrows.append(barrow(1, W_ONE, u))
        else:
            arrows.extend(barrow(b, h, u) for b, h in sorted(fibers, key=lambda t: (t[0], t[1].sort_key())))
    return arrows


def bundle_sup_dist(f: BSteinElt, g: BSteinElt) -> Fraction:
    """Exact supremum of |f - g| over all arrows."""
    best = Fraction(0)
    for arrow in _stratum_arrows((f, g)):
        best = max(best, abs(bstein_eval(f, arrow) - bstein_eval(g, arrow)))
    return best


@dataclass(frozen=True)
class BundleVerdict:
    singular: bool
    witness: Optional[BArrow]  # a nonzero isolated arrow when nonsingular
    checked: tuple[tuple[BArrow, Fraction], ...]


def bundle_is_singular(f: BSteinElt) -> BundleVerdict:
    """Whether supp(f) has empty interior.

    The isolated arrows are exactly those over x- and z-units, and every
    nonempty open set contains one, so f is singular iff it vanishes on
    all of them.  Constancy on strata reduces the check to finitely many
    arrows.
    """
    checked = []
    witness = None
    for arrow in _stratum_arrows((f,)):
        if arrow.unit.kind in ("y", "eps"):
            continue
        val = bstein_eval(f, arrow)
        checked.append((arrow, val))
        if val != 0 and witness is None:
            witness = arrow
    return BundleVerdict(witness is None, witness, tuple(checked))
