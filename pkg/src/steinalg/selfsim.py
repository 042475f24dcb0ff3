"""A self-similar inverse semigroup acting on a four-family alphabet.

The alphabet has letters ``y1[n], y2[n]`` indexed by integers and
``z1[k], z2[k]`` indexed by elements of K.  The group G acts on letters by

    g . yi[n] = yi[zeta_i(g) + n]     with restriction tau(g),
    g . zi[k] = zi[pi_i(g) * k]       with trivial restriction,

and extends to finite and eventually periodic infinite words by the
self-similarity rule g(xw) = g(x) (g|_x)(w).  Because tau kills the free
parts and tau(tau(g)) = 1, every restriction past two letters is trivial;
germ computations below rely on that stabilization depth.

S-elements are the partial transformations alpha g beta^* (prepend alpha,
act by g, require and strip the prefix beta) together with a zero.
Products, inverses and germs are all exact and structural.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Union

from .groups import (
    GElt,
    G_ONE,
    KElt,
    K_ONE,
    group_inv,
    hom_pi,
    hom_tau,
    hom_zeta,
)

# ---------------------------------------------------------------------------
# letters and words
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Letter:
    family: str  # 'y' or 'z'
    channel: int  # 1 or 2
    index: Union[int, KElt]

    def __post_init__(self) -> None:
        if self.family not in ("y", "z"):
            raise ValueError(f"unknown letter family {self.family!r}")
        if self.channel not in (1, 2):
            raise ValueError(f"channel must be 1 or 2, got {self.channel}")
        if self.family == "y" and not isinstance(self.index, int):
            raise ValueError("y-letters take integer indices")
        if self.family == "z" and not isinstance(self.index, KElt):
            raise ValueError("z-letters take K-element indices")

    def sort_key(self):
        if self.family == "y":
            idx = ((0, ""), (0, ""), self.index)
        else:
            idx = self.index.sort_key()
        return (self.family, self.channel, idx)

    def __str__(self) -> str:
        return f"{self.family}{self.channel}[{self.index}]"


def yl(channel: int, n: int) -> Letter:
    return Letter("y", channel, n)


def zl(channel: int, k: KElt = K_ONE) -> Letter:
    return Letter("z", channel, k)


@dataclass(frozen=True)
class FinWord:
    letters: tuple[Letter, ...] = ()

    def __len__(self) -> int:
        return len(self.letters)

    def __getitem__(self, i):
        if isinstance(i, slice):
            return FinWord(self.letters[i])
        return self.letters[i]

    def __iter__(self):
        return iter(self.letters)

    def __add__(self, other: "FinWord") -> "FinWord":
        return FinWord(self.letters + other.letters)

    def startswith(self, prefix: "FinWord") -> bool:
        return self.letters[: len(prefix)] == prefix.letters

    def prefix(self, n: int) -> "FinWord":
        return FinWord(self.letters[:n])

    def sort_key(self):
        return (len(self.letters), tuple(x.sort_key() for x in self.letters))

    def __str__(self) -> str:
        return ".".join(str(x) for x in self.letters) if self.letters else "1"


EPS = FinWord(())


def finword(*letters: Letter) -> FinWord:
    return FinWord(tuple(letters))


@dataclass(frozen=True)
class OmegaWord:
    """Eventually periodic right-infinite word; build with :func:`omega`.

    Canonical form: the period is primitive and the head does not end with
    the last period letter, so structural equality is equality of words.
    """

    head: FinWord
    period: FinWord

    def __post_init__(self) -> None:
        if not self.period.letters:
            raise ValueError("period must be nonempty")

    def prefix(self, n: int) -> FinWord:
        if n <= len(self.head):
            return self.head[:n]
        out = list(self.head.letters)
        p = self.period.letters
        while len(out) < n:
            out.extend(p)
        return FinWord(tuple(out[:n]))

    def letter_at(self, i: int) -> Letter:
        if i < len(self.head):
            return self.head.letters[i]
        return self.period.letters[(i - len(self.head)) % len(self.period)]

    def startswith(self, prefix: FinWord) -> bool:
        return self.prefix(len(prefix)) == prefix

    def sort_key(self):
        return (self.head.sort_key(), self.period.sort_key())

    def __str__(self) -> str:
        tail = f"({self.period})^w"
        return f"{self.head}.{tail}" if self.head.letters else tail


Word = Union[FinWord, OmegaWord]


def omega(head: FinWord, period: FinWord) -> OmegaWord:
    p = period.letters
    if not p:
        raise ValueError("period must be nonempty")
    for d in range(1, len(p) + 1):
        if len(p) % d == 0 and p == p[:d] * (len(p) // d):
            p = p[:d]
            break
    h = head.letters
    while h and h[-1] == p[-1]:
        h = h[:-1]
        p = (p[-1],) + p[:-1]
    return OmegaWord(FinWord(h), FinWord(p))


def word_len(w: Word):
    """Length of a word; None means infinite."""
    return len(w) if isinstance(w, FinWord) else None


# ---------------------------------------------------------------------------
# the action
# ---------------------------------------------------------------------------


def act_letter(g: GElt, x: Letter) -> Letter:
    if x.family == "y":
        return Letter("y", x.channel, hom_zeta(x.channel, g) + x.index)
    return Letter("z", x.channel, hom_pi(x.channel, g) * x.index)


def restrict_letter(g: GElt, x: Letter) -> GElt:
    if x.family == "y":
        return hom_tau(g)
    return G_ONE


def act_word(g: GElt, w: FinWord) -> tuple[FinWord, GElt]:
    """Image of w under g together with the restriction of g past w."""
    imgs = []
    cur = g
    for x in w:
        imgs.append(act_letter(cur, x))
        cur = restrict_letter(cur, x)
    return FinWord(tuple(imgs)), cur


def act_omega(g: GElt, w: OmegaWord) -> OmegaWord:
    head_img, r = act_word(g, w.head)
    # iterate the restriction over the period until the state repeats
    seen: dict[GElt, int] = {}
    imgs: list[FinWord] = []
    cur = r
    while cur not in seen:
        seen[cur] = len(imgs)
        img, cur = act_word(cur, w.period)
        imgs.append(img)
    start = seen[cur]
    head = head_img
    for p in imgs[:start]:
        head = head + p
    per = EPS
    for p in imgs[start:]:
        per = per + p
    return omega(head, per)


# ---------------------------------------------------------------------------
# S-elements
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class SElt:
    """alpha g beta^*, or the zero element."""

    alpha: FinWord = EPS
    g: GElt = G_ONE
    beta: FinWord = EPS
    zero: bool = False

    def __mul__(self, other: "SElt") -> "SElt":
        return s_mul(self, other)

    def inv(self) -> "SElt":
        return s_inv(self)

    def weight(self) -> int:
        return len(self.alpha) - len(self.beta)

    def sort_key(self):
        return (
            self.zero,
            self.alpha.sort_key(),
            self.g.sort_key(),
            self.beta.sort_key(),
        )

    def __str__(self) -> str:
        if self.zero:
            return "0"
        parts = []
        if self.alpha.letters:
            parts.append(str(self.alpha))
        if not self.g.is_identity():
            parts.append(str(self.g))
        if self.beta.letters:
            b = str(self.beta)
            parts.append(f"({b})*" if len(self.beta) > 1 else f"{b}*")
        return " ^ ".join(parts) if parts else "1"


S_ZERO = SElt(zero=True)
S_ONE = SElt()


def s_triple(alpha: FinWord, g: GElt, beta: FinWord) -> SElt:
    return SElt(alpha=alpha, g=g, beta=beta)


def s_from_group(g: GElt) -> SElt:
    return SElt(g=g)


def s_from_word(alpha: FinWord) -> SElt:
    return SElt(alpha=alpha)


def s_proj(alpha: FinWord) -> SElt:
    """The idempotent alpha alpha^* (range projection of alpha)."""
    return SElt(alpha=alpha, beta=alpha)


def s_mul(s: SElt, t: SElt) -> SElt:
    if s.zero or t.zero:
        return S_ZERO
    b1, a2 = s.beta, t.alpha
    if len(a2) >= len(b1):
        if not a2.startswith(b1):
            return S_ZERO
        gamma = a2[len(b1):]
        img, r = act_word(s.g, gamma)
        return SElt(alpha=s.alpha + img, g=r * t.g, beta=t.beta)
    if not b1.startswith(a2):
        return S_ZERO
    gamma = b1[len(a2):]
    gamma_pre, r_inv = act_word(group_inv(t.g), gamma)
    # t.g restricted at gamma_pre is r_inv^{-1} (cocycle identity)
    return SElt(
        alpha=s.alpha,
        g=s.g * group_inv(r_inv),
        beta=t.beta + gamma_pre,
    )


def s_inv(s: SElt) -> SElt:
    if s.zero:
        return S_ZERO
    return SElt(alpha=s.beta, g=group_inv(s.g), beta=s.alpha)


def s_defined_at(s: SElt, w: Word) -> bool:
    return not s.zero and w.startswith(s.beta)


def s_apply(s: SElt, w: Word) -> Word:
    """Apply the partial map to a word in its domain."""
    if s.zero:
        raise ValueError("zero element has empty domain")
    if not w.startswith(s.beta):
        raise ValueError(f"word does not extend the source prefix {s.beta}")
    if isinstance(w, FinWord):
        img, _ = act_word(s.g, w[len(s.beta):])
        return s.alpha + img
    k = len(s.beta)
    h = w.head.letters
    p = w.period.letters
    while len(h) < k:
        h = h + p
    rest = OmegaWord(FinWord(h[k:]), w.period)
    img = act_omega(s.g, rest)
    return omega(s.alpha + img.head, img.period)


# ---------------------------------------------------------------------------
# germs
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Germ:
    """The germ of s at a word in its domain."""

    s: SElt
    word: Word

    def __post_init__(self) -> None:
        if not s_defined_at(self.s, self.word):
            raise ValueError(f"germ undefined: {self.s} at {self.word}")

    def range_word(self) -> Word:
        return s_apply(self.s, self.word)

    def key(self):
        return germ_key(self.s, self.word)

    def __str__(self) -> str:
        return f"[{self.s}, {self.word}]"


def germ(s: SElt, w: Word) -> Germ:
    return Germ(s, w)


def germ_key(s: SElt, w: Word):
    """Canonical invariant: two elements have equal keys at w iff their
    germs at w agree.

    For finite w the key is the image word together with the restriction of
    g past the unconsumed part of w; for infinite w restrictions stabilize
    to the identity within the compared prefix, so the image word plus the
    weight |alpha| - |beta| determine the germ.
    """
    if not s_defined_at(s, w):
        raise ValueError(f"germ undefined: {s} at {w}")
    if isinstance(w, FinWord):
        img, residual = act_word(s.g, w[len(s.beta):])
        return ("fin", s.alpha + img, residual)
    return ("inf", s.weight(), s_apply(s, w))


def germ_eq(s: SElt, t: SElt, w: Word) -> bool:
    """Whether s and t agree on a neighborhood of w.

    Equivalent to comparing the normal forms of s gamma and t gamma for
    the prefix gamma of w of length min(|w|, max(|beta_s|, |beta_t|) + 2):
    restrictions past two letters are trivial, so agreement at that depth
    is agreement on the whole cylinder.
    """
    return germ_key(s, w) == germ_key(t, w)


# ---------------------------------------------------------------------------
# fixed-point spectrum and effectiveness
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class FamilyFix:
    """How a group element fixes one letter family.

    status 'cofinite' with the (here always empty) exceptional index set,
    or 'nowhere'.  This action fixes a family strongly either entirely or
    not at all; the exceptions field keeps the report shape uniform.
    """

    status: str
    exceptions: tuple = ()


@dataclass(frozen=True)
class FixSpectrum:
    families: tuple[tuple[tuple[str, int], FamilyFix], ...]

    def family(self, fam: str, channel: int) -> FamilyFix:
        return dict(self.families)[(fam, channel)]


def strongly_fixed_spectrum(g: GElt) -> FixSpectrum:
    """Which letters g fixes with trivial restriction, by family.

    yi[n] is strongly fixed iff zeta_i(g) = 0 and tau(g) = 1 (one condition
    for every n at once); zi[k] iff pi_i(g) = 1, since pi_i(g) k = k forces
    pi_i(g) = 1 and z-restrictions are always trivial.
    """
    out = []
    for ch in (1, 2):
        ok = hom_zeta(ch, g) == 0 and hom_tau(g) == G_ONE
        out.append((("y", ch), FamilyFix("cofinite" if ok else "nowhere")))
    for ch in (1, 2):
        ok = hom_pi(ch, g).is_identity()
        out.append((("z", ch), FamilyFix("cofinite" if ok else "nowhere")))
    return FixSpectrum(tuple(out))


@dataclass(frozen=True)
class EffectivenessWitness:
    channel: int
    letter: Letter
    image: Letter


def effectiveness_witness(g: GElt) -> EffectivenessWitness:
    """A concrete letter moved by g, from the lowest channel that sees g.

    pi_1(g) = pi_2(g) = 1 forces g = 1, so every nontrivial g moves the
    basepoint letter z_i[1] of some channel.
    """
    if g.is_identity():
        raise ValueError("the identity moves nothing")
    for ch in (1, 2):
        if not hom_pi(ch, g).is_identity():
            x = zl(ch, K_ONE)
            return EffectivenessWitness(ch, x, act_letter(g, x))
    raise AssertionError("unreachable")
