"""Finite rational combinations of partial-transformation indicators.

An element is a list of (S-element, coefficient) terms, optionally
restricted to one of the clopen word regions B (first letter from a
y-family), C (first letter from a z-family), or the full space, minus
finitely many removed cylinders.  Evaluation at a germ, convolution, exact
sup-distances, and the support analysis all run over finitely many strata:

Words are classified by a pattern assigning each position either a letter
written in some term's source prefix (or removed cylinder) or a generic
letter of one of the four families.  Up to the stabilization length
L = max source-prefix length + 2, the germ partition of the terms and all
their values are constant across each pattern class: index arithmetic at a
generic position cancels between any two terms compared there, and
restrictions die after two letters.  Length-L classes absorb every longer
and infinite word and are exactly the classes whose germ sets contain open
cylinders, so a function is singular precisely when no nonzero stratum has
full pattern length.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Optional, Union

from .groups import FreeWord, GElt, KElt, W_ONE, free_word, hom_pi, sphere
from .selfsim import (
    EPS,
    FinWord,
    Germ,
    Letter,
    OmegaWord,
    S_ONE,
    SElt,
    Word,
    germ_key,
    omega,
    s_defined_at,
    s_from_group,
    s_inv,
    s_mul,
    s_proj,
)

# ---------------------------------------------------------------------------
# regions
# ---------------------------------------------------------------------------

REGION_FULL = "full"
REGION_B = "B"  # words whose first letter is from a y-family
REGION_C = "C"  # words whose first letter is from a z-family


@dataclass(frozen=True)
class Region:
    kind: str = REGION_FULL
    removed: tuple[FinWord, ...] = ()

    def __post_init__(self) -> None:
        if self.kind not in (REGION_FULL, REGION_B, REGION_C):
            raise ValueError(f"unknown region kind {self.kind!r}")

    def member(self, w: Word) -> bool:
        if self.kind != REGION_FULL:
            first = w.prefix(1)
            if len(first) == 0:
                return False
            fam = "y" if self.kind == REGION_B else "z"
            if first[0].family != fam:
                return False
        return not any(w.startswith(r) for r in self.removed)

    def is_unrestricted(self) -> bool:
        return self.kind == REGION_FULL and not self.removed

    def __str__(self) -> str:
        s = self.kind
        if self.removed:
            s += " - {" + ", ".join(str(r) for r in self.removed) + "}"
        return s


FULL_REGION = Region()


@dataclass(frozen=True)
class SteinElt:
    terms: tuple[tuple[SElt, Fraction], ...] = ()
    region: Region = FULL_REGION

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        body = " + ".join(f"{c}*[{s}]" for s, c in self.terms)
        return body if self.region == FULL_REGION else f"({body})|{self.region}"


ST_ZERO = SteinElt()


def st_make(
    terms: Iterable[tuple[SElt, Union[Fraction, int]]],
    region: Region = FULL_REGION,
) -> SteinElt:
    """Merge structurally equal S-elements, drop zeros, sort."""
    acc: dict[SElt, Fraction] = {}
    for s, c in terms:
        if s.zero:
            continue
        acc[s] = acc.get(s, Fraction(0)) + Fraction(c)
    out = [(s, c) for s, c in acc.items() if c != 0]
    out.sort(key=lambda t: t[0].sort_key())
    # a region carries no information on the zero element
    return SteinElt(tuple(out), region if out else FULL_REGION)


def st_add(f: SteinElt, g: SteinElt) -> SteinElt:
    if f.region != g.region and f.terms and g.terms:
        raise ValueError("cannot add elements restricted to different regions")
    region = f.region if f.terms else g.region
    return st_make(f.terms + g.terms, region)


def st_scale(f: SteinElt, c: Union[Fraction, int]) -> SteinElt:
    return st_make([(s, Fraction(c) * q) for s, q in f.terms], f.region)


def st_sub(f: SteinElt, g: SteinElt) -> SteinElt:
    return st_add(f, st_scale(g, -1))


def st_conv(f: SteinElt, g: SteinElt) -> SteinElt:
    """Convolution.  The left factor must be unrestricted: a right
    restriction passes through the product, f * (g chi_U) = (f g) chi_U,
    but a region on the left factor is not expressible as a region on the
    result."""
    if not f.region.is_unrestricted() and f.terms:
        raise ValueError("left factor of a convolution must be unrestricted")
    prods = []
    for s, c in f.terms:
        for t, d in g.terms:
            prods.append((s_mul(s, t), c * d))
    return st_make(prods, g.region)


def st_star(f: SteinElt) -> SteinElt:
    """Involution; defined for unrestricted elements (the adjoint of a
    right restriction is a left restriction, which the type cannot carry)."""
    if not f.region.is_unrestricted() and f.terms:
        raise ValueError("star of a region-restricted element is not representable")
    return st_make([(s_inv(s), c) for s, c in f.terms], f.region)


def st_eval(f: SteinElt, g: Germ) -> Fraction:
    """Exact value at a germ: the sum of coefficients of terms defined at
    the base word with the same germ there."""
    if not f.region.member(g.word):
        return Fraction(0)
    target = germ_key(g.s, g.word)
    total = Fraction(0)
    for s, c in f.terms:
        if s_defined_at(s, g.word) and germ_key(s, g.word) == target:
            total += c
    return total


# ---------------------------------------------------------------------------
# named elements
# ---------------------------------------------------------------------------


def h_elt(h: FreeWord) -> GElt:
    """Embed a word over c, d as a group element."""
    return GElt(h, W_ONE, 0, 0)


def st_bn(n: int) -> SteinElt:
    """Average of the indicators of the radius-n sphere of H."""
    sph = sphere(n)
    w = Fraction(1, len(sph))
    return st_make([(s_from_group(h_elt(h)), w) for h in sph])


def st_a() -> SteinElt:
    """(1 - a)(1 - b) as a combination of group-element indicators."""
    one, a, b = W_ONE, free_word("a"), free_word("b")
    return st_make(
        [
            (s_from_group(GElt(f=one)), Fraction(1)),
            (s_from_group(GElt(f=a)), Fraction(-1)),
            (s_from_group(GElt(f=b)), Fraction(-1)),
            (s_from_group(GElt(f=a * b)), Fraction(1)),
        ]
    )


def st_chiB() -> SteinElt:
    return st_make([(S_ONE, Fraction(1))], Region(REGION_B))


def st_chiC() -> SteinElt:
    return st_make([(S_ONE, Fraction(1))], Region(REGION_C))


def st_chi_cylinder(alpha: FinWord) -> SteinElt:
    """Indicator of the unit cylinder at alpha, as a projection term."""
    return st_make([(s_proj(alpha), Fraction(1))])


# ---------------------------------------------------------------------------
# support strata
# ---------------------------------------------------------------------------

GEN_FAMILIES = (("y", 1), ("y", 2), ("z", 1), ("z", 2))

PatEntry = tuple  # ('lit', Letter) or ('gen', family, channel)


@dataclass(frozen=True)
class SupportStratum:
    """A germ class constant for the function: all germs [m, w] with m in
    ``members`` and w running over the base-word class described by
    ``pattern`` (exact length len(pattern) when not ``interior``, all words
    extending the pattern when ``interior``)."""

    pattern: tuple[PatEntry, ...]
    rep_word: Word
    base: SElt
    members: tuple[SElt, ...]
    value: Fraction
    interior: bool

    def rep_germ(self) -> Germ:
        return Germ(self.base, self.rep_word)

    def __str__(self) -> str:
        pat = ".".join(
            str(e[1]) if e[0] == "lit" else f"{e[1]}{e[2]}[*]" for e in self.pattern
        )
        tail = "..." if self.interior else ""
        kind = "open" if self.interior else "exact"
        return f"<{self.value} at [{self.base}, {pat or 'eps'}{tail}] ({kind})>"


def _mentioned_indices(f: SteinElt, extra: tuple[FinWord, ...]):
    ys: set[int] = set()
    zs: set[KElt] = set()
    words = [s.alpha for s, _ in f.terms] + [s.beta for s, _ in f.terms]
    words.extend(f.region.removed)
    words.extend(extra)
    for w in words:
        for x in w:
            if x.family == "y":
                ys.add(x.index)
            else:
                zs.add(x.index)
    return ys, zs


def _fresh_letter(fam: str, ch: int, pos: int, ys: set[int], zs: set[KElt]) -> Letter:
    if fam == "y":
        return Letter("y", ch, max((abs(n) for n in ys), default=0) + 1 + pos)
    depth = max((len(k.h) for k in zs), default=0) + 1 + pos
    return Letter("z", ch, KElt(free_word("c" * depth), W_ONE, 0))


def _class_strata(f, defined, rep_word, pattern, interior):
    """Partition the terms defined on this word class by their germ at the
    representative; emit one stratum per nonzero value."""
    in_region = f.region.member(rep_word)
    if not in_region:
        return []
    groups: dict = {}
    for s, c in defined:
        groups.setdefault(germ_key(s, rep_word), []).append((s, c))
    out = []
    for members in groups.values():
        value = sum((c for _, c in members), Fraction(0))
        if value == 0:
            continue
        ms = tuple(sorted((s for s, _ in members), key=lambda s: s.sort_key()))
        out.append(
            SupportStratum(pattern, rep_word, ms[0], ms, value, interior)
        )
    return out


def st_support_strata(
    f: SteinElt, split_on: tuple[FinWord, ...] = ()
) -> tuple[SupportStratum, ...]:
    """All nonzero germ-class strata of f, exact and exhaustive.

    ``split_on`` lists extra prefixes the word classes must distinguish;
    joint computations over several elements pass the other elements'
    removed cylinders here so that every class is constant for all of them.
    """
    if not f.terms:
        return ()
    max_beta = max(len(s.beta) for s, _ in f.terms)
    max_removed = max(
        (len(r) for r in f.region.removed + tuple(split_on)), default=0
    )
    L = max(max_beta + 2, max_removed)
    ys, zs = _mentioned_indices(f, tuple(split_on))
    trie_words = [s.beta for s, _ in f.terms] + list(f.region.removed)
    trie_words.extend(split_on)

    strata: list[SupportStratum] = []

    def walk(pos, pattern, rep, alive):
        rep_fin = FinWord(tuple(rep))
        defined = [
            (s, c) for s, c in f.terms if len(s.beta) <= pos and rep_fin.startswith(s.beta)
        ]
        if pos == L:
            tail = _fresh_letter("y", 1, L, ys, zs)
            rep_inf = omega(rep_fin, FinWord((tail,)))
            strata.extend(_class_strata(f, defined, rep_inf, pattern, True))
            return
        strata.extend(_class_strata(f, defined, rep_fin, pattern, False))
        children = sorted(
            {w[pos] for w in alive if len(w) > pos}, key=Letter.sort_key
        )
        for x in children:
            walk(
                pos + 1,
                pattern + (("lit", x),),
                rep + [x],
                [w for w in alive if len(w) > pos and w[pos] == x],
            )
        for fam, ch in GEN_FAMILIES:
            x = _fresh_letter(fam, ch, pos, ys, zs)
            walk(pos + 1, pattern + (("gen", fam, ch),), rep + [x], [])
        # generic letters match no written prefix, so nothing stays alive

    walk(0, (), [], list(trie_words))
    return tuple(strata)


def st_sup_dist(f: SteinElt, g: SteinElt) -> Fraction:
    """Exact supremum of |f - g| over all germs.

    Joint stratification: on each pattern class the germ partition of the
    combined term lists and both regions' membership are constant, so the
    difference attains its supremum on the class representatives.
    """
    # all-ones coefficients: the scaffold only provides germ classes, and
    # real coefficients could cancel a class out of the enumeration
    combined = st_make([(s, 1) for s, _ in f.terms + g.terms])
    if not combined.terms:
        return Fraction(0)
    removed = tuple(
        sorted(set(f.region.removed) | set(g.region.removed), key=FinWord.sort_key)
    )
    best = Fraction(0)
    for stratum in st_support_strata(combined, split_on=removed):
        gm = stratum.rep_germ()
        best = max(best, abs(st_eval(f, gm) - st_eval(g, gm)))
    return best


# ---------------------------------------------------------------------------
# singularity and the open witness
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class OpenWitness:
    """For every z-index k of the stated channel outside ``excluded`` and
    every word w, the germ of ``group_elt`` at z[k].w lies in the support
    with |value| = floor > 0."""

    group_elt: GElt
    channel: int
    excluded: tuple[KElt, ...]
    floor: Fraction


def st_open_witness(f: SteinElt) -> Optional[OpenWitness]:
    """Extract an open-support certificate from the group-element terms.

    Restrictions past a z-letter are trivial, so for a word z[k].w with k
    avoiding every written source prefix, the value of f at [h, z[k].w] is
    the sum of the coefficients of the group-element terms g with
    pi_ch(g) = pi_ch(h), independent of w and k.  Any coset with nonzero
    sum certifies an open subset of the support.
    """
    if f.region.kind == REGION_B:
        return None
    group_terms = [
        (s.g, c) for s, c in f.terms if len(s.alpha) == 0 and len(s.beta) == 0
    ]
    if not group_terms:
        return None
    excluded: set[KElt] = set()
    for w in [s.beta for s, _ in f.terms] + list(f.region.removed):
        if len(w) > 0 and w[0].family == "z":
            excluded.add(w[0].index)
    for ch in (1, 2):
        cosets: dict[KElt, list[tuple[GElt, Fraction]]] = {}
        for g, c in group_terms:
            cosets.setdefault(hom_pi(ch, g), []).append((g, c))
        for key in sorted(cosets, key=KElt.sort_key):
            total = sum((c for _, c in cosets[key]), Fraction(0))
            if total != 0:
                rep = min((g for g, _ in cosets[key]), key=GElt.sort_key)
                return OpenWitness(
                    rep,
                    ch,
                    tuple(sorted(excluded, key=KElt.sort_key)),
                    abs(total),
                )
    return None


@dataclass(frozen=True)
class SingularVerdict:
    singular: bool
    strata: tuple[SupportStratum, ...]
    interior_stratum: Optional[SupportStratum]
    witness: Optional[OpenWitness]


def st_is_singular(f: SteinElt) -> SingularVerdict:
    """Whether the support of f has empty interior.

    Short-word strata contain no cylinder of base words, while every
    full-length stratum does, so the verdict reads off the strata.
    """
    strata = st_support_strata(f)
    interior = next((s for s in strata if s.interior), None)
    witness = st_open_witness(f) if interior is not None else None
    return SingularVerdict(interior is None, strata, interior, witness)
