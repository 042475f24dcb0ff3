"""Action, S-products, and germ logic against independent oracles.

The germ oracle below multiplies by an explicit prefix projection and
compares normal forms at the stabilization depth; germ_eq must agree with
it everywhere.
"""

import pytest
from hypothesis import assume, given, settings, strategies as st

from steinalg.groups import (
    GElt,
    G_ONE,
    KElt,
    K_ONE,
    W_ONE,
    free_word,
    group_inv,
    hom_pi,
    hom_tau,
    sphere,
)
from steinalg.selfsim import (
    EPS,
    FinWord,
    OmegaWord,
    S_ONE,
    S_ZERO,
    SElt,
    act_letter,
    act_omega,
    act_word,
    effectiveness_witness,
    finword,
    germ_eq,
    omega,
    restrict_letter,
    s_apply,
    s_defined_at,
    s_from_group,
    s_from_word,
    s_inv,
    s_mul,
    s_proj,
    s_triple,
    strongly_fixed_spectrum,
    yl,
    zl,
)

# ---------------------------------------------------------------------------
# oracles and strategies
# ---------------------------------------------------------------------------


def oracle_germ_eq(s, t, w):
    """Compare s gamma and t gamma structurally at the stabilization depth."""
    depth = max(len(s.beta), len(t.beta)) + 2
    if isinstance(w, FinWord):
        depth = min(len(w), depth)
    gamma = s_from_word(w.prefix(depth) if isinstance(w, OmegaWord) else w[:depth])
    return s_mul(s, gamma) == s_mul(t, gamma)


k_elts = st.builds(
    lambda h, f, n: KElt(free_word(h), free_word(f), n),
    st.sampled_from(["", "c", "D", "cd"]),
    st.sampled_from(["", "a", "B"]),
    st.integers(-2, 2),
)
g_elts = st.builds(
    lambda h, f, n, m: GElt(free_word(h), free_word(f), n, m),
    st.sampled_from(["", "c", "D", "cd"]),
    st.sampled_from(["", "a", "B", "ab"]),
    st.integers(-2, 2),
    st.integers(-2, 2),
)
letters = st.one_of(
    st.builds(yl, st.sampled_from([1, 2]), st.integers(-2, 2)),
    st.builds(zl, st.sampled_from([1, 2]), k_elts),
)
fin_words = st.builds(lambda ls: FinWord(tuple(ls)), st.lists(letters, max_size=4))
omega_words = st.builds(
    omega,
    fin_words,
    st.builds(lambda ls: FinWord(tuple(ls)), st.lists(letters, min_size=1, max_size=3)),
)
words = st.one_of(fin_words, omega_words)
s_elts = st.builds(s_triple, fin_words, g_elts, fin_words)


def A(chars):
    return s_from_group(GElt(W_ONE, free_word(chars), 0, 0))


def Hh(chars):
    return s_from_group(GElt(free_word(chars), W_ONE, 0, 0))


# ---------------------------------------------------------------------------
# the action on letters and words
# ---------------------------------------------------------------------------


def test_letter_action_table():
    g = GElt(free_word("c"), free_word("ab"), 2, -1)
    assert act_letter(g, yl(1, 5)) == yl(1, 7)
    assert act_letter(g, yl(2, 5)) == yl(2, 4)
    assert restrict_letter(g, yl(1, 5)) == GElt(W_ONE, W_ONE, 1, 1)
    k = KElt(free_word("d"), W_ONE, 3)
    assert act_letter(g, zl(1, k)) == zl(1, hom_pi(1, g) * k)
    assert act_letter(g, zl(2, k)) == zl(2, hom_pi(2, g) * k)
    assert restrict_letter(g, zl(1, k)) == G_ONE


@given(g_elts, g_elts, fin_words)
def test_action_cocycle(g1, g2, w):
    img2, r2 = act_word(g2, w)
    img12, r12 = act_word(g1 * g2, w)
    img1, r1 = act_word(g1, img2)
    assert img12 == img1
    assert r12 == r1 * r2


@given(g_elts, fin_words)
def test_action_invertible(g, w):
    img, _ = act_word(g, w)
    back, _ = act_word(group_inv(g), img)
    assert back == w


@given(g_elts, omega_words, st.integers(0, 8))
def test_act_omega_matches_prefixes(g, w, k):
    assert act_omega(g, w).prefix(k) == act_word(g, w.prefix(k))[0]


def test_act_omega_frozen_case():
    w = omega(EPS, finword(yl(1, 0)))
    img = act_omega(A("a").g, w)
    assert img == omega(finword(yl(1, 0), yl(1, 1)), finword(yl(1, 0)))


def test_omega_canonical_form():
    x = yl(1, 0)
    z = zl(1, K_ONE)
    assert omega(finword(x), finword(x)) == omega(EPS, finword(x))
    assert omega(EPS, finword(x, x)) == omega(EPS, finword(x))
    assert omega(finword(z, x), finword(x)) == omega(finword(z), finword(x))
    assert omega(finword(z), finword(x, z)).head == EPS  # absorbed into rotation
    assert omega(EPS, finword(x)).prefix(3) == finword(x, x, x)
    with pytest.raises(ValueError):
        OmegaWord(EPS, EPS)


# ---------------------------------------------------------------------------
# product identities through letters (frozen)
# ---------------------------------------------------------------------------


def test_f_slides_past_y_as_tau():
    # t y = y tau(t) for every t in F and both channels
    for chars in ("a", "b", "A", "ab", "aB"):
        t = A(chars)
        tau_t = s_from_group(hom_tau(t.g))
        for ch in (1, 2):
            for n in (-1, 0, 3):
                y = s_from_word(finword(yl(ch, n)))
                assert s_mul(t, y) == s_mul(y, tau_t)


def test_integer_parts_shift_y_indices():
    for n, m in ((1, 0), (0, 1), (2, -3)):
        g = s_from_group(GElt(W_ONE, W_ONE, n, m))
        for k in (-1, 0, 2):
            assert s_mul(g, s_from_word(finword(yl(1, k)))) == s_from_word(
                finword(yl(1, n + k))
            )
            assert s_mul(g, s_from_word(finword(yl(2, k)))) == s_from_word(
                finword(yl(2, m + k))
            )


def test_h_acts_trivially_past_y():
    for chars in ("c", "d", "cD"):
        h = Hh(chars)
        y = s_from_word(finword(yl(1, 0)))
        assert s_mul(h, y) == y


def test_group_translates_z_indices():
    g = GElt(free_word("c"), free_word("a"), 1, 2)
    for ch in (1, 2):
        k = KElt(free_word("d"), free_word("b"), -1)
        z = s_from_word(finword(zl(ch, k)))
        expect = s_from_word(finword(zl(ch, hom_pi(ch, g) * k)))
        assert s_mul(s_from_group(g), z) == expect


# ---------------------------------------------------------------------------
# inverse-semigroup laws
# ---------------------------------------------------------------------------


@settings(max_examples=200)
@given(s_elts, s_elts, s_elts)
def test_s_mul_associative(s, t, u):
    assert s_mul(s_mul(s, t), u) == s_mul(s, s_mul(t, u))


@given(s_elts)
def test_partial_isometry_laws(s):
    assert s_mul(s_mul(s, s_inv(s)), s) == s
    assert s_mul(s, S_ONE) == s == s_mul(S_ONE, s)
    assert s_mul(s, S_ZERO) == S_ZERO == s_mul(S_ZERO, s)
    assert s_inv(s_inv(s)) == s


@given(s_elts, s_elts)
def test_involution_antihomomorphism(s, t):
    assert s_inv(s_mul(s, t)) == s_mul(s_inv(t), s_inv(s))


@given(fin_words)
def test_projection_idempotent(alpha):
    p = s_proj(alpha)
    assert s_mul(p, p) == p
    assert s_inv(p) == p


def test_s_mul_frozen_cases():
    y0, y1 = yl(1, 0), yl(1, 1)
    a = A("a")
    # (y0 a) (y0^*) absorbs nothing: beta grows by the preimage of y0 under a
    s = s_triple(finword(y0), a.g, EPS)
    t = s_triple(EPS, G_ONE, finword(y0))
    assert s_mul(s, t) == s_triple(finword(y0), a.g, finword(y0))
    # projection meet: D(y0) D(y1) = 0
    assert s_mul(s_proj(finword(y0)), s_proj(finword(y1))) == S_ZERO
    # domain transport: a^{-1} arrives where a departs
    assert s_mul(s_inv(a), s_mul(a, s_from_word(finword(y0)))) == s_from_word(
        finword(y0)
    )


# ---------------------------------------------------------------------------
# applying S-elements to words
# ---------------------------------------------------------------------------


@given(s_elts, s_elts, words)
def test_apply_is_functorial(s, t, w):
    st_ = s_mul(s, t)
    assume(s_defined_at(st_, w))
    tw = s_apply(t, w)
    assume(s_defined_at(s, tw))
    assert s_apply(st_, w) == s_apply(s, tw)


@given(s_elts, words)
def test_apply_roundtrip(s, w):
    assume(s_defined_at(s, w))
    img = s_apply(s, w)
    assert s_defined_at(s_inv(s), img)
    assert s_apply(s_inv(s), img) == w


def test_apply_undefined_raises():
    s = s_triple(EPS, G_ONE, finword(yl(1, 0)))
    with pytest.raises(ValueError):
        s_apply(s, finword(yl(1, 1)))
    with pytest.raises(ValueError):
        s_apply(S_ZERO, EPS)


# ---------------------------------------------------------------------------
# germs
# ---------------------------------------------------------------------------


def test_h_germs_collapse_over_y_only():
    # distinct H-elements agree near y-rooted words, never near z-rooted
    # words or the empty word
    hs = [Hh("c"), Hh("d"), Hh("C"), Hh("cd")]
    y_word = finword(yl(1, 0), yl(2, 3))
    y_inf = omega(EPS, finword(yl(2, -1)))
    z_word = finword(zl(1, K_ONE), yl(1, 0))
    z_inf = omega(finword(zl(2, K_ONE)), finword(yl(1, 0)))
    for i, h1 in enumerate(hs):
        for h2 in hs[i + 1 :]:
            for w in (y_word, y_inf):
                assert germ_eq(h1, h2, w)
            for w in (z_word, z_inf, EPS):
                assert not germ_eq(h1, h2, w)


def test_germ_undefined_raises():
    s = s_triple(EPS, G_ONE, finword(yl(1, 0)))
    with pytest.raises(ValueError):
        germ_eq(s, S_ONE, finword(zl(1, K_ONE)))


@settings(max_examples=300)
@given(s_elts, s_elts, st.lists(letters, max_size=3), st.one_of(st.none(), omega_words))
def test_germ_eq_matches_oracle(s, t, suffix, tail):
    w = s.beta + FinWord(tuple(suffix))
    if tail is not None:
        w = omega(w, tail.period)
    assume(s_defined_at(s, w) and s_defined_at(t, w))
    assert germ_eq(s, t, w) == oracle_germ_eq(s, t, w)


@given(s_elts, st.lists(letters, min_size=1, max_size=3))
def test_germ_eq_after_projection_cut(s, suffix):
    # s and s (restricted to a smaller cylinder around w) share the germ
    w = s.beta + FinWord(tuple(suffix))
    t = s_mul(s, s_proj(w.prefix(len(s.beta) + 1)))
    assert germ_eq(s, t, w)
    assert oracle_germ_eq(s, t, w)


@given(s_elts, s_elts, s_elts, st.lists(letters, max_size=3))
def test_germ_eq_left_composition(s, t, u, suffix):
    w = s.beta + FinWord(tuple(suffix))
    assume(s_defined_at(s, w) and s_defined_at(t, w))
    us, ut = s_mul(u, s), s_mul(u, t)
    assume(s_defined_at(us, w) and s_defined_at(ut, w))
    if germ_eq(s, t, w):
        assert germ_eq(us, ut, w)


# ---------------------------------------------------------------------------
# fixed-point spectrum and effectiveness
# ---------------------------------------------------------------------------


def test_spectrum_frozen_case():
    spec = strongly_fixed_spectrum(GElt(W_ONE, W_ONE, 0, 5))
    assert spec.family("y", 1).status == "cofinite"
    assert spec.family("y", 2).status == "nowhere"
    assert spec.family("z", 1).status == "cofinite"
    assert spec.family("z", 2).status == "nowhere"
    assert spec.family("y", 1).exceptions == ()


def test_spectrum_tau_obstruction():
    # fixes every y-index but with nontrivial restriction: not strongly fixed
    spec = strongly_fixed_spectrum(GElt(W_ONE, free_word("ab"), 0, 0))
    assert spec.family("y", 1).status == "nowhere"
    assert spec.family("z", 1).status == "nowhere"  # pi_1 sees the f-part
    # the commutator has trivial tau, so it strongly fixes both y-families
    # while still acting effectively on z
    spec2 = strongly_fixed_spectrum(GElt(W_ONE, free_word("abAB"), 0, 0))
    assert spec2.family("y", 1).status == "cofinite"
    assert spec2.family("y", 2).status == "cofinite"
    assert spec2.family("z", 1).status == "nowhere"


@given(g_elts)
def test_spectrum_matches_direct_check(g):
    spec = strongly_fixed_spectrum(g)
    samples = {
        ("y", 1): [yl(1, n) for n in (-2, 0, 1, 7)],
        ("y", 2): [yl(2, n) for n in (-2, 0, 1, 7)],
        ("z", 1): [zl(1, k) for k in (K_ONE, KElt(free_word("c"), W_ONE, 2))],
        ("z", 2): [zl(2, k) for k in (K_ONE, KElt(free_word("c"), W_ONE, 2))],
    }
    for key, xs in samples.items():
        fixed = [
            act_letter(g, x) == x and restrict_letter(g, x) == G_ONE for x in xs
        ]
        if spec.family(*key).status == "cofinite":
            assert all(fixed)
        else:
            assert not any(fixed)


def test_effectiveness_witness_frozen():
    w = effectiveness_witness(GElt(W_ONE, W_ONE, 0, 5))
    assert w.channel == 2
    assert w.letter == zl(2, K_ONE)
    assert w.image == zl(2, KElt(W_ONE, W_ONE, 5))
    with pytest.raises(ValueError):
        effectiveness_witness(G_ONE)


@given(g_elts)
def test_effectiveness_witness_moves(g):
    assume(not g.is_identity())
    w = effectiveness_witness(g)
    assert w.image != w.letter
    assert act_letter(g, w.letter) == w.image
    if w.channel == 2:
        assert hom_pi(1, g).is_identity()


def test_sphere_elements_never_fix_z():
    # group elements used by the averaging all act effectively
    for h in sphere(2):
        g = GElt(h, W_ONE, 0, 0)
        assert effectiveness_witness(g).channel == 1
