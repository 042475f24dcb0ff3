"""Exact arithmetic in two rank-2 free groups and their products.

Two disjoint free groups are used throughout the package: ``H`` with
generators ``c, d`` and ``F`` with generators ``a, b``.  The ambient group
is ``G = H x F x Z x Z``; the quotient ``K = H x F x Z`` appears as the
target of the two projections that drop one integer coordinate.

Free-group elements are reduced words stored as strings, lowercase for a
generator and uppercase for its inverse.  Reduction happens on
construction, so structural equality is group equality.
"""

from __future__ import annotations

from dataclasses import dataclass

H_GENS = ("c", "d")
F_GENS = ("a", "b")


def _reduce(chars: str) -> str:
    out: list[str] = []
    for ch in chars:
        # xX and Xx cancel; anything else is already reduced on the left
        if out and out[-1] != ch and out[-1].lower() == ch.lower():
            out.pop()
        else:
            out.append(ch)
    return "".join(out)


@dataclass(frozen=True)
class FreeWord:
    """A reduced word; build with :func:`free_word` or the operators."""

    chars: str = ""

    def __post_init__(self) -> None:
        if _reduce(self.chars) != self.chars:
            raise ValueError(f"word not reduced: {self.chars!r}")

    def __mul__(self, other: "FreeWord") -> "FreeWord":
        return free_mul(self, other)

    def inv(self) -> "FreeWord":
        return FreeWord(self.chars[::-1].swapcase())

    def __len__(self) -> int:
        return len(self.chars)

    def is_identity(self) -> bool:
        return not self.chars

    def exp_sum(self, gen: str) -> int:
        return self.chars.count(gen) - self.chars.count(gen.upper())

    def gens(self) -> frozenset[str]:
        return frozenset(ch.lower() for ch in self.chars)

    def sort_key(self):
        return (len(self.chars), self.chars)

    def __str__(self) -> str:
        return self.chars or "1"


W_ONE = FreeWord("")


def free_word(chars: str) -> FreeWord:
    """Reduce ``chars`` (lowercase gen, uppercase inverse) to a FreeWord."""
    return FreeWord(_reduce(chars))


def free_mul(u: FreeWord, v: FreeWord) -> FreeWord:
    return FreeWord(_reduce(u.chars + v.chars))


def free_inv(u: FreeWord) -> FreeWord:
    return u.inv()


@dataclass(frozen=True)
class GElt:
    """Element (h, f, n, m) of G = H x F x Z x Z."""

    h: FreeWord = W_ONE
    f: FreeWord = W_ONE
    n: int = 0
    m: int = 0

    def __post_init__(self) -> None:
        if not self.h.gens() <= set(H_GENS):
            raise ValueError(f"h-part {self.h} not over {H_GENS}")
        if not self.f.gens() <= set(F_GENS):
            raise ValueError(f"f-part {self.f} not over {F_GENS}")

    def __mul__(self, other: "GElt") -> "GElt":
        return group_mul(self, other)

    def inv(self) -> "GElt":
        return group_inv(self)

    def is_identity(self) -> bool:
        return (
            self.h.is_identity()
            and self.f.is_identity()
            and self.n == 0
            and self.m == 0
        )

    def sort_key(self):
        return (self.h.sort_key(), self.f.sort_key(), self.n, self.m)

    def __str__(self) -> str:
        return f"({self.h},{self.f},{self.n},{self.m})"


G_ONE = GElt()


def group_mul(g1: GElt, g2: GElt) -> GElt:
    return GElt(g1.h * g2.h, g1.f * g2.f, g1.n + g2.n, g1.m + g2.m)


def group_inv(g: GElt) -> GElt:
    return GElt(g.h.inv(), g.f.inv(), -g.n, -g.m)


@dataclass(frozen=True)
class KElt:
    """Element (h, f, n) of K = H x F x Z."""

    h: FreeWord = W_ONE
    f: FreeWord = W_ONE
    n: int = 0

    def __post_init__(self) -> None:
        if not self.h.gens() <= set(H_GENS):
            raise ValueError(f"h-part {self.h} not over {H_GENS}")
        if not self.f.gens() <= set(F_GENS):
            raise ValueError(f"f-part {self.f} not over {F_GENS}")

    def __mul__(self, other: "KElt") -> "KElt":
        return KElt(self.h * other.h, self.f * other.f, self.n + other.n)

    def inv(self) -> "KElt":
        return KElt(self.h.inv(), self.f.inv(), -self.n)

    def is_identity(self) -> bool:
        return self.h.is_identity() and self.f.is_identity() and self.n == 0

    def sort_key(self):
        return (self.h.sort_key(), self.f.sort_key(), self.n)

    def __str__(self) -> str:
        return f"({self.h},{self.f},{self.n})"


K_ONE = KElt()


# ---------------------------------------------------------------------------
# homomorphisms
# ---------------------------------------------------------------------------

def hom_tau(g: GElt) -> GElt:
    """tau(h, f, n, m) = (1, 1, sigma_a(f), sigma_b(f)).

    The integer coordinates of the image are the exponent sums of the
    F-part; everything else is forgotten.  tau(tau(g)) is always the
    identity.
    """
    return GElt(W_ONE, W_ONE, g.f.exp_sum("a"), g.f.exp_sum("b"))


def hom_pi(i: int, g: GElt) -> KElt:
    """Projection G -> K keeping the i-th integer coordinate, i in {1, 2}."""
    if i == 1:
        return KElt(g.h, g.f, g.n)
    if i == 2:
        return KElt(g.h, g.f, g.m)
    raise ValueError(f"channel must be 1 or 2, got {i}")


def hom_zeta(i: int, g: GElt) -> int:
    """The i-th integer coordinate of g, i in {1, 2}."""
    if i == 1:
        return g.n
    if i == 2:
        return g.m
    raise ValueError(f"channel must be 1 or 2, got {i}")


# ---------------------------------------------------------------------------
# spheres and balls in a free group
# ---------------------------------------------------------------------------

def _signed_gens(gens: tuple[str, ...]) -> list[str]:
    return [g for gen in gens for g in (gen, gen.upper())]


def sphere(n: int, gens: tuple[str, ...] = H_GENS) -> tuple[FreeWord, ...]:
    """All reduced words of length exactly n >= 1, sorted deterministically.

    Size is 2r(2r-1)^(n-1) for rank r, so 4 * 3^(n-1) at rank 2.  n < 1 is
    rejected: the length-0 sphere is the identity and never what a sphere
    average means here.
    """
    if n < 1:
        raise ValueError(f"sphere radius must be >= 1, got {n}")
    words = [""]
    for _ in range(n):
        words = [
            w + s
            for w in words
            for s in _signed_gens(gens)
            if not (w and w[-1] != s and w[-1].lower() == s.lower())
        ]
    return tuple(sorted((FreeWord(w) for w in words), key=FreeWord.sort_key))


def ball(n: int, gens: tuple[str, ...] = H_GENS) -> tuple[FreeWord, ...]:
    """All reduced words of length <= n, sorted deterministically."""
    if n < 0:
        raise ValueError(f"ball radius must be >= 0, got {n}")
    out = [W_ONE]
    for k in range(1, n + 1):
        out.extend(sphere(k, gens))
    return tuple(out)
