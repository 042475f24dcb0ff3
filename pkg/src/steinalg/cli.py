"""Batch verification, scattering tables, and expression evaluation.

Three subcommands.  ``verify`` runs the whole pipeline on one of the two
example groupoids and reports every check; ``scatter`` tabulates certified
walk-norm estimates over spheres; ``eval`` parses an expression in the
documented grammar and prints its normal form.  Reports are deterministic
given the same configuration (including the seed): keys are sorted and no
timestamps are emitted, so reruns are byte-identical.

Exit codes: 0 all checks pass, 1 a check failed, 2 usage or parse errors.
"""

from __future__ import annotations

import io
import json
import os
import random
import sys
from fractions import Fraction
from typing import Optional

import click

from .bundle import (
    B_ZERO,
    WHOLE_SET,
    barrow,
    bstein_conv,
    bstein_eval,
    bstein_scale,
    bstein_star,
    bundle_a,
    bundle_bn,
    bundle_chi,
    bundle_chiB,
    bundle_is_singular,
    bundle_sup_dist,
    buset,
    buset_intersect,
    buset_union,
    ux,
    uy,
    uz,
    U_EPS,
)
from .groups import (
    F_GENS,
    FreeWord,
    GElt,
    H_GENS,
    KElt,
    K_ONE,
    W_ONE,
    free_word,
    hom_pi,
    hom_tau,
    sphere,
)
from .repnorm import cauchy_profile, haagerup_bound, rho_estimate
from .selfsim import (
    EPS,
    FinWord,
    Germ,
    S_ONE,
    SElt,
    effectiveness_witness,
    finword,
    germ_eq,
    omega,
    s_from_group,
    s_from_word,
    s_mul,
    strongly_fixed_spectrum,
    yl,
    zl,
)
from .steinberg import (
    h_elt,
    st_a,
    st_bn,
    st_chiB,
    st_chi_cylinder,
    st_conv,
    st_eval,
    st_is_singular,
    st_open_witness,
    st_sub,
    st_sup_dist,
)
from .syntax import ParseError, format_buset, parse_buset, parse_selt

SCHEMA_VERSION = 1
OUT_DIR_ENV = "STEINALG_OUT_DIR"


# ---------------------------------------------------------------------------
# seeded samplers
# ---------------------------------------------------------------------------


def _sample_free(rng: random.Random, gens: tuple[str, ...], maxlen: int = 3) -> FreeWord:
    chars = "".join(
        rng.choice(gens + tuple(g.upper() for g in gens))
        for _ in range(rng.randrange(maxlen + 1))
    )
    return free_word(chars)


def _sample_kelt(rng: random.Random) -> KElt:
    return KElt(
        _sample_free(rng, H_GENS),
        _sample_free(rng, F_GENS),
        rng.randrange(-3, 4),
    )


def _sample_gelt(rng: random.Random) -> GElt:
    return GElt(
        _sample_free(rng, H_GENS),
        _sample_free(rng, F_GENS),
        rng.randrange(-3, 4),
        rng.randrange(-3, 4),
    )


def _sample_letter(rng: random.Random):
    if rng.random() < 0.5:
        return yl(rng.choice((1, 2)), rng.randrange(-5, 6))
    return zl(rng.choice((1, 2)), _sample_kelt(rng))


def _sample_word(rng: random.Random):
    head = finword(*(_sample_letter(rng) for _ in range(rng.randrange(4))))
    if rng.random() < 0.4:
        period = finword(*(_sample_letter(rng) for _ in range(rng.randrange(1, 3))))
        return omega(head, period)
    return head


def _sample_buset(rng: random.Random):
    U = buset()
    for _ in range(rng.randrange(1, 4)):
        kind = rng.randrange(4)
        if kind == 0:
            U = buset_union(U, buset(zs={rng.randrange(1, 8)}))
        elif kind == 1:
            i = rng.randrange(1, 8)
            U = buset_union(U, buset(cols={i: (False, {rng.randrange(1, 8)})}))
        elif kind == 2:
            i = rng.randrange(1, 8)
            U = buset_union(U, buset(cols={i: (True, set())}))
        else:
            U = buset_union(U, buset(eps=True, zs={rng.randrange(1, 8)}))
    return U


def _first_is_y(w) -> bool:
    if isinstance(w, FinWord):
        return len(w) > 0 and w[0].family == "y"
    return w.letter_at(0).family == "y"


# ---------------------------------------------------------------------------
# verify checks, self-similar example
# ---------------------------------------------------------------------------


def _check(checks: list, cid: str, ok: bool, detail: str) -> None:
    checks.append({"id": cid, "status": "pass" if ok else "fail", "detail": detail})


def _selfsim_identities(rng: random.Random, checks: list) -> None:
    a_g = GElt(f=free_word("a"))
    bad = ""
    for n in range(-20, 21):
        for ch in (1, 2):
            y = s_from_word(finword(yl(ch, n)))
            if s_mul(S_ONE, y) != y or s_mul(y, S_ONE) != y:
                bad = bad or f"1y=y1 fails at y{ch}[{n}]"
            if s_mul(s_from_group(a_g), y) != s_mul(y, s_from_group(hom_tau(a_g))):
                bad = bad or f"ay=y(1,0) fails at y{ch}[{n}]"
            shift = GElt(n=1) if ch == 1 else GElt(m=1)
            if s_mul(s_from_group(shift), y) != s_from_word(finword(yl(ch, n + 1))):
                bad = bad or f"(1,0)y=y' fails at y{ch}[{n}]"
            other = GElt(m=1) if ch == 1 else GElt(n=1)
            if s_mul(s_from_group(other), y) != y:
                bad = bad or f"cross-channel shift moves y{ch}[{n}]"
    for _ in range(50):
        k = _sample_kelt(rng)
        g = _sample_gelt(rng)
        ch = rng.choice((1, 2))
        z = s_from_word(finword(zl(ch, k)))
        img = s_from_word(finword(zl(ch, hom_pi(ch, g) * k)))
        if s_mul(s_from_group(g), z) != img:
            bad = bad or f"g z[k] != z[pi(g)k] at ch {ch}, k {k}, g {g}"
    _check(
        checks,
        "semigroup-identities",
        not bad,
        bad or "1y=y1, ay=y(1,0), (1,0)y1[n]=y1[n+1] for n in [-20,20], "
        "both channels; 50 sampled g z[k] = z[pi(g)k]: all exact",
    )


def _selfsim_germ_law(rng: random.Random, checks: list) -> None:
    elems = [s_from_group(h_elt(h)) for h in sphere(1) + sphere(2)]
    words = [EPS] + [_sample_word(rng) for _ in range(20)]
    bad = ""
    pairs = 0
    for i, s1 in enumerate(elems):
        for s2 in elems[i + 1:]:
            pairs += 1
            for w in words:
                if germ_eq(s1, s2, w) != _first_is_y(w):
                    bad = bad or f"germ law fails for {s1}, {s2} at {w}"
    _check(
        checks,
        "germ-collapse",
        not bad,
        bad
        or f"germ_eq(h1,h2,w) iff w starts in Y: {pairs} sphere(1)+sphere(2) "
        f"pairs x {len(words)} words",
    )


def _selfsim_support(checks: list) -> None:
    verdict = st_is_singular(st_conv(st_a(), st_chiB()))
    names = set()
    ok = verdict.singular and len(verdict.strata) == 8
    for s in verdict.strata:
        ok = ok and not s.interior and len(s.pattern) == 1
        ok = ok and s.pattern[0][0] == "gen" and s.pattern[0][1] == "y"
        expect = Fraction(1) if str(s.base.g.f) in ("1", "ab") else Fraction(-1)
        ok = ok and s.value == expect
        names.add((s.pattern[0][2], str(s.base.g.f)))
    ok = ok and names == {(ch, t) for ch in (1, 2) for t in ("1", "a", "b", "ab")}
    _check(
        checks,
        "support-table",
        ok,
        "a*chiB singular; support table = four-germ family "
        "[1,y],[a,y],[b,y],[ab,y] over both channels, values +1,-1,-1,+1",
    )


def _selfsim_values(indices: tuple, rng: random.Random, checks: list) -> None:
    achib = st_conv(st_a(), st_chiB())
    bad = ""
    for ch in (1, 2):
        yw = finword(yl(ch, rng.randrange(-5, 6)))
        if st_eval(achib, Germ(S_ONE, yw)) != 1:
            bad = bad or f"(a*chiB)[1, y{ch}] != 1"
        if st_eval(achib, Germ(s_from_group(GElt(f=free_word("a"))), yw)) != -1:
            bad = bad or f"(a*chiB)[a, y{ch}] != -1"
    zw = finword(zl(1, K_ONE))
    if st_eval(achib, Germ(S_ONE, zw)) != 0:
        bad = bad or "(a*chiB)[1, z] != 0"
    for n in indices:
        abn = st_conv(st_a(), st_bn(n))
        size = len(sphere(n))
        h = s_from_group(h_elt(rng.choice(sphere(n))))
        if st_eval(abn, Germ(h, zw)) != Fraction(1, size):
            bad = bad or f"(a*b{n})[h, z] != 1/{size}"
        ah = s_mul(s_from_group(GElt(f=free_word("a"))), h)
        if st_eval(abn, Germ(ah, zw)) != Fraction(-1, size):
            bad = bad or f"(a*b{n})[ah, z] != -1/{size}"
        if st_sup_dist(st_bn(n), st_chiB()) != Fraction(1, size):
            bad = bad or f"sup|b{n} - chiB| != 1/{size}"
        if st_sup_dist(abn, achib) != Fraction(1, size):
            bad = bad or f"sup|a*b{n} - a*chiB| != 1/{size}"
    _check(
        checks,
        "value-table",
        not bad,
        bad or "a*chiB germ values +1/-1 on y, 0 on z; "
        "a*b_n = +-1/|H_n| on z; sup distances 1/|H_n|",
    )


def _selfsim_witness(indices: tuple, rng: random.Random, checks: list) -> None:
    bad = ""
    if st_open_witness(st_conv(st_a(), st_chiB())) is not None:
        bad = "a*chiB yields an open witness"
    for n in indices:
        abn = st_conv(st_a(), st_bn(n))
        w = st_open_witness(abn)
        if w is None:
            bad = bad or f"no open witness for a*b{n}"
            continue
        for _ in range(10):
            k = _sample_kelt(rng)
            while k in w.excluded:
                k = _sample_kelt(rng)
            tail = _sample_word(rng)
            if isinstance(tail, FinWord):
                word = finword(zl(w.channel, k), *tail.letters)
            else:
                word = omega(finword(zl(w.channel, k), *tail.head.letters), tail.period)
            val = st_eval(abn, Germ(s_from_group(w.group_elt), word))
            if abs(val) != w.floor or val == 0:
                bad = bad or f"witness value |{val}| != floor {w.floor} for a*b{n}"
    _check(
        checks,
        "open-witness",
        not bad,
        bad or "open witnesses for a*b_n validated at 10 sampled germs "
        "[h, z[k].w] each; none for a*chiB",
    )


def _selfsim_verdicts(indices: tuple, rng: random.Random, checks: list) -> None:
    bad = ""
    for n in indices:
        v = st_is_singular(st_conv(st_a(), st_bn(n)))
        if v.singular or v.witness is None:
            bad = bad or f"a*b{n} not recognized as nonsingular with witness"
    # U ranges over neighborhoods of support points of a*chiB, which are
    # the single-letter y-cylinders
    seen = set()
    while len(seen) < 5:
        alpha = finword(yl(rng.choice((1, 2)), rng.randrange(-20, 21)))
        if alpha in seen:
            continue
        seen.add(alpha)
        prod = st_conv(st_a(), st_chi_cylinder(alpha))
        v = st_is_singular(prod)
        if not v.singular or not prod.terms:
            bad = bad or f"a*chi_U not singular and nonzero at U = [{alpha}]"
    _check(
        checks,
        "singularity-verdicts",
        not bad,
        bad or "a*b_n nonsingular with open witness; a*chi_U singular and "
        "nonzero for 5 sampled compact open U inside B",
    )


def _selfsim_effectiveness(rng: random.Random, checks: list) -> None:
    bad = ""
    for _ in range(30):
        g = _sample_gelt(rng)
        while g.is_identity():
            g = _sample_gelt(rng)
        w = effectiveness_witness(g)
        if w.image == w.letter:
            bad = bad or f"witness letter not moved by {g}"
        spec = strongly_fixed_spectrum(g)
        zstat = {spec.family("z", ch).status for ch in (1, 2)}
        if "nowhere" not in zstat:
            bad = bad or f"no non-cofinitely-fixed z-family for {g}"
    _check(
        checks,
        "effectiveness",
        not bad,
        bad or "30 sampled g != 1: effectiveness witness moves z[1], "
        "fixed-point spectrum reports a nowhere-fixed z-family",
    )


def _cauchy_section(indices: tuple, example: str, radius: int, tol: float, checks: list):
    if len(indices) == 0:
        return None
    profile = cauchy_profile(indices, example=example, radius=radius, tol=tol)
    bad = ""
    for row in profile.rows:
        if row.lower > row.upper + 1e-12:
            bad = bad or f"lower > upper at pair ({row.n},{row.m})"
        if row.sup_dist != Fraction(1, len(sphere(min(row.n, row.m)))):
            bad = bad or f"sup distance off at pair ({row.n},{row.m})"
    for row in profile.limit_rows:
        if row.sup_dist != Fraction(1, len(sphere(row.n))):
            bad = bad or f"limit sup distance off at n={row.n}"
    for n in indices:
        for m in indices:
            if n < m:
                diff = st_sub(st_bn(n), st_bn(m))
                if sum((c for _, c in diff.terms), Fraction(0)) != 0:
                    bad = bad or f"pi_triv part of b{n}-b{m} nonzero"
    _check(
        checks,
        "cauchy-profile",
        not bad,
        bad or "pair rows have lower <= upper and exact sup distance "
        "1/|H_min|; limits 1/|H_n|; pi_triv part of every difference is 0",
    )
    return {
        "example": profile.example,
        "radius": profile.radius,
        "pairs": [
            {
                "n": r.n,
                "m": r.m,
                "sup_dist": str(r.sup_dist),
                "upper_bound": r.upper,
                "lower_bound": r.lower,
            }
            for r in profile.rows
        ],
        "limits": [{"n": r.n, "sup_dist": str(r.sup_dist)} for r in profile.limit_rows],
    }


# ---------------------------------------------------------------------------
# verify checks, bundle example
# ---------------------------------------------------------------------------


def _bundle_identities(rng: random.Random, checks: list) -> None:
    bad = ""
    A = bundle_a()
    if bstein_conv(A, A) != bstein_scale(A, 2):
        bad = "a*a != 2a"
    for _ in range(20):
        U, V = _sample_buset(rng), _sample_buset(rng)
        if bstein_conv(bundle_chi(U), bundle_chi(V)) != bundle_chi(buset_intersect(U, V)):
            bad = bad or f"chi_U * chi_V != chi_(U cap V) at {U}; {V}"
    for n in (1, 2):
        f, g = bundle_bn(n), A
        if bstein_star(bstein_conv(f, g)) != bstein_conv(bstein_star(g), bstein_star(f)):
            bad = bad or f"(fg)* != g*f* at b{n}, a"
    _check(
        checks,
        "convolution-identities",
        not bad,
        bad or "a*a = 2a; chi_U * chi_V = chi_(U cap V) on 20 sampled "
        "compact open pairs; involution antihomomorphism",
    )


def _bundle_values(indices: tuple, checks: list) -> None:
    achib = bstein_conv(bundle_a(), bundle_chiB())
    x, y, z = ux(2, 3), uy(2), uz(5)
    bad = ""
    table = [
        (barrow(0, W_ONE, x), Fraction(0)),
        (barrow(0, W_ONE, y), Fraction(1)),
        (barrow(1, W_ONE, y), Fraction(-1)),
        (barrow(0, W_ONE, z), Fraction(0)),
        (barrow(1, W_ONE, z), Fraction(0)),
        (barrow(0, W_ONE, U_EPS), Fraction(0)),
    ]
    for arrow, want in table:
        if bstein_eval(achib, arrow) != want:
            bad = bad or f"(a*chiB)({arrow}) != {want}"
    for n in indices:
        bn = bundle_bn(n)
        size = len(sphere(n))
        h = sphere(n)[0]
        rows = [
            (barrow(0, W_ONE, x), Fraction(1)),
            (barrow(0, W_ONE, y), Fraction(1)),
            (barrow(1, W_ONE, y), Fraction(0)),
            (barrow(0, h, z), Fraction(1, size)),
            (barrow(0, h, U_EPS), Fraction(1, size)),
            (barrow(1, h, z), Fraction(0)),
        ]
        for arrow, want in rows:
            if bstein_eval(bn, arrow) != want:
                bad = bad or f"b{n}({arrow}) != {want}"
    _check(
        checks,
        "value-table",
        not bad,
        bad or "a*chiB: 0 on x, +1/-1 on y, 0 on z and eps; "
        "b_n: 1 on B, 1/|H_n| on (0,h) over z and eps",
    )


def _bundle_rates(indices: tuple, checks: list) -> None:
    bad = ""
    A = bundle_a()
    achib = bstein_conv(A, bundle_chiB())
    for n in indices:
        size = len(sphere(n))
        if bundle_sup_dist(bundle_bn(n), bundle_chiB()) != Fraction(1, size):
            bad = bad or f"sup|b{n} - chiB| != 1/{size}"
        if bundle_sup_dist(bstein_conv(A, bundle_bn(n)), achib) != Fraction(1, size):
            bad = bad or f"sup|a*b{n} - a*chiB| != 1/{size}"
    _check(
        checks,
        "scattering-rate",
        not bad,
        bad or "sup|b_n - chiB| = sup|a*b_n - a*chiB| = 1/|H_n| exactly",
    )


def _bundle_verdicts(indices: tuple, rng: random.Random, checks: list) -> None:
    bad = ""
    A = bundle_a()
    if not bundle_is_singular(bstein_conv(A, bundle_chiB())).singular:
        bad = "a*chiB not singular"
    for n in indices:
        v = bundle_is_singular(bstein_conv(A, bundle_bn(n)))
        if v.singular or v.witness is None:
            bad = bad or f"a*b{n} not nonsingular with isolated witness"
    for _ in range(5):
        i = rng.randrange(1, 8)
        U = buset(cols={i: (rng.random() < 0.5, {rng.randrange(1, 8)})})
        prod = bstein_conv(A, bundle_chi(U))
        if not bundle_is_singular(prod).singular or prod == B_ZERO:
            bad = bad or f"a*chi_U not singular and nonzero at U = {U}"
    _check(
        checks,
        "singularity-verdicts",
        not bad,
        bad or "a*chiB singular; a*b_n nonsingular with isolated arrow "
        "witness; a*chi_U singular and nonzero for 5 sampled U inside B",
    )


# ---------------------------------------------------------------------------
# report plumbing
# ---------------------------------------------------------------------------


def _report_json(payload: dict) -> str:
    return json.dumps(payload, sort_keys=True, indent=2) + "\n"


def _csv_text(header: list, rows: list) -> str:
    buf = io.StringIO()
    buf.write(",".join(header) + "\r\n")
    for row in rows:
        buf.write(",".join(str(v) for v in row) + "\r\n")
    return buf.getvalue()


def _emit(text: str, out: Optional[str], default_name: str) -> None:
    path = out or os.environ.get(OUT_DIR_ENV)
    if not path:
        click.echo(text, nl=False)
        return
    # a trailing separator or the env var always means a directory
    as_dir = path is not out or path.endswith(os.sep)
    try:
        if as_dir and not os.path.isdir(path):
            os.makedirs(path, exist_ok=True)
        if os.path.isdir(path):
            path = os.path.join(path, default_name)
        with open(path, "w") as fh:
            fh.write(text)
    except OSError as exc:
        raise click.UsageError(f"cannot write {path}: {exc}") from exc
    click.echo(f"wrote {path}", err=True)


def _finish(payload: dict, checks: list) -> int:
    checks.sort(key=lambda c: c["id"])
    failed = sum(1 for c in checks if c["status"] == "fail")
    payload["checks"] = checks
    payload["summary"] = {
        "passed": len(checks) - failed,
        "failed": failed,
        "total": len(checks),
    }
    return 0 if failed == 0 else 1


def _config_echo(example, indices, radius, tol, seed, out, fmt) -> dict:
    return {
        "example": example,
        "indices": list(indices),
        "radius": radius,
        "tol": tol,
        "seed": seed,
        "out": out,
        "format": fmt,
    }


def _indices_cb(ctx, param, value):
    if value.strip() == "":
        return ()
    try:
        out = tuple(int(p) for p in value.split(","))
    except ValueError:
        raise click.BadParameter(f"not a comma list of integers: {value!r}")
    if any(n < 1 for n in out):
        raise click.BadParameter("indices must be positive")
    return out


def _radius_cb(ctx, param, value):
    if value < 1:
        raise click.BadParameter("radius must be at least 1")
    return value


def _tol_cb(ctx, param, value):
    if value <= 0:
        raise click.BadParameter("tolerance must be positive")
    return value


_SHARED = [
    click.option(
        "--example",
        type=click.Choice(["selfsim", "bundle"]),
        default="selfsim",
        show_default=True,
        help="Which counterexample groupoid to run on.",
    ),
    click.option(
        "--indices",
        default="1,2",
        show_default=True,
        callback=_indices_cb,
        help="Comma list of scattering indices n (empty for identity suites only).",
    ),
    click.option(
        "--radius",
        default=6,
        show_default=True,
        callback=_radius_cb,
        help="Truncation radius for norm estimates.",
    ),
    click.option(
        "--tol",
        default=1e-6,
        show_default=True,
        callback=_tol_cb,
        help="Power-iteration tolerance.",
    ),
    click.option("--seed", default=0, show_default=True, help="Sampling seed."),
    click.option(
        "--out",
        default=None,
        help=f"Output file or directory (default: ${OUT_DIR_ENV} or stdout).",
    ),
    click.option(
        "--format",
        "fmt",
        type=click.Choice(["json", "csv"]),
        default="json",
        show_default=True,
        help="Report format.",
    ),
]


def _shared(fn):
    for opt in reversed(_SHARED):
        fn = opt(fn)
    return fn


@click.group()
def main() -> None:
    """Exact verification of two groupoid counterexamples."""


@main.command()
@_shared
def verify(example, indices, radius, tol, seed, out, fmt) -> None:
    """Run the full check pipeline and emit a report."""
    rng = random.Random(seed)
    checks: list = []
    cauchy = None
    if example == "selfsim":
        _selfsim_identities(rng, checks)
        _selfsim_germ_law(rng, checks)
        if indices:
            _selfsim_support(checks)
            _selfsim_values(indices, rng, checks)
            _selfsim_witness(indices, rng, checks)
            _selfsim_verdicts(indices, rng, checks)
            _selfsim_effectiveness(rng, checks)
            cauchy = _cauchy_section(indices, example, radius, tol, checks)
    else:
        _bundle_identities(rng, checks)
        if indices:
            _bundle_values(indices, checks)
            _bundle_rates(indices, checks)
            _bundle_verdicts(indices, rng, checks)
            cauchy = _cauchy_section(indices, example, radius, tol, checks)
    payload = {
        "schema_version": SCHEMA_VERSION,
        "command": "verify",
        "config": _config_echo(example, indices, radius, tol, seed, out, fmt),
        "cauchy": cauchy,
    }
    code = _finish(payload, checks)
    if fmt == "json":
        text = _report_json(payload)
    else:
        rows = []
        if cauchy is not None:
            for r in cauchy["pairs"]:
                rows.append(
                    (r["n"], r["m"], r["sup_dist"],
                     f"{r['upper_bound']:.9f}", f"{r['lower_bound']:.9f}")
                )
            for r in cauchy["limits"]:
                rows.append((r["n"], "", r["sup_dist"], "", ""))
        text = _csv_text(["n", "m", "sup_dist", "upper_bound", "lower_bound"], rows)
    _emit(text, out, f"verify_{example}.{fmt}")
    sys.exit(code)


@main.command()
@_shared
def scatter(example, indices, radius, tol, seed, out, fmt) -> None:
    """Tabulate certified sphere-average norm estimates."""
    rows = []
    for n in indices:
        est = rho_estimate(sphere(n), radius=radius, tol=tol)
        rows.append(
            {
                "n": n,
                "sphere_size": len(sphere(n)),
                "lower": est.lower,
                "upper": est.upper,
                "radius": est.truncation_radius,
                "iterations": est.iterations,
            }
        )
    checks: list = []
    uppers = [r["upper"] for r in rows]
    _check(
        checks,
        "upper-strictly-decreasing",
        all(x > y for x, y in zip(uppers, uppers[1:])),
        "analytic upper bounds strictly decrease along the index list",
    )
    _check(
        checks,
        "lower-below-upper",
        all(r["lower"] <= r["upper"] + 1e-12 for r in rows),
        "certified lower bounds stay below the analytic uppers",
    )
    payload = {
        "schema_version": SCHEMA_VERSION,
        "command": "scatter",
        "config": _config_echo(example, indices, radius, tol, seed, out, fmt),
        "rows": rows,
    }
    code = _finish(payload, checks)
    if fmt == "json":
        text = _report_json(payload)
    else:
        text = _csv_text(
            ["n", "sphere_size", "lower", "upper"],
            [
                (r["n"], r["sphere_size"], f"{r['lower']:.9f}", f"{r['upper']:.9f}")
                for r in rows
            ],
        )
    _emit(text, out, f"scatter_{example}.{fmt}")
    sys.exit(code)


@main.command("eval")
@click.argument("expression")
@click.option(
    "--example",
    type=click.Choice(["selfsim", "bundle"]),
    default="selfsim",
    show_default=True,
    help="selfsim parses semigroup expressions, bundle parses unit sets.",
)
def eval_cmd(expression, example) -> None:
    """Parse an expression and print its normal form."""
    try:
        if example == "selfsim":
            click.echo(str(parse_selt(expression)))
        else:
            click.echo(format_buset(parse_buset(expression)))
    except ParseError as exc:
        click.echo(exc.diagnostic(), err=True)
        sys.exit(2)


if __name__ == "__main__":
    main()
