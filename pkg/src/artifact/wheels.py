"""Cyclic words CW(S) and the functionals tr_u, div_u, div, j and J_u."""

from __future__ import annotations

import json
from itertools import product

from gmpy2 import mpq

from .freelie import (NEVER, LieSeries, Series, assoc_part, clean, format_coeff_term,
                      linear, norm_alphabet)
from .scalars import Q, Poly, poly_at_one, q_str


def canonical(w: str) -> str:
    """Least rotation of ``w``."""
    return min(w[i:] + w[:i] for i in range(len(w))) if w else w


def cw_basis(alphabet: str, n: int) -> list[str]:
    """Canonical cyclic words of length ``n``, sorted."""
    return sorted({canonical("".join(w)) for w in product(alphabet, repeat=n)}) if n > 0 else []


def cw_of_assoc(poly: dict) -> dict:
    """Project associative words to cyclic words; the empty word is dropped."""
    acc: dict = {}
    for w, c in poly.items():
        if w:
            k = canonical(w)
            acc[k] = acc.get(k, 0) + c
    return clean(acc)


class CWSeries(Series):
    __slots__ = ("alphabet",)

    def __init__(self, gen, alphabet: str, lo: int = 1):
        super().__init__(gen, lo)
        self.alphabet = alphabet

    def _like(self, gen, lo=1):
        return CWSeries(gen, self.alphabet, lo)

    @classmethod
    def zero(cls, alphabet: str) -> "CWSeries":
        return cls(lambda n: {}, alphabet, NEVER)

    @classmethod
    def from_parts(cls, parts: dict, alphabet: str) -> "CWSeries":
        acc: dict[int, dict] = {}
        for n, p in parts.items():
            for w, c in p.items():
                if len(w) != int(n):
                    raise ValueError(f"cyclic word {w!r} is not of degree {n}")
                d = acc.setdefault(int(n), {})
                k = canonical(w)
                d[k] = d.get(k, 0) + c
        acc = {n: clean(p) for n, p in acc.items()}
        acc = {n: p for n, p in acc.items() if p}
        return cls(lambda n: acc.get(n, {}), alphabet, min(acc, default=NEVER))

    @classmethod
    def word(cls, w: str, alphabet: str, c=1) -> "CWSeries":
        return cls.from_parts({len(w): {w: mpq(c)}}, alphabet)

    def with_alphabet(self, alphabet: str) -> "CWSeries":
        return CWSeries(self.part, alphabet, self.lo)

    def pretty(self, d: int) -> str:
        items = [(w, c) for n in range(1, d + 1) for w, c in sorted(self.part(n).items())]
        out = []
        for w, c in items:
            out.append(format_coeff_term(f"⌒({w})", c, not out))
        return "".join(out) or "0"

    def __repr__(self):
        return f"CWSeries({self.pretty(4)} + ...)"

    def to_json(self, d: int) -> dict:
        return {"alphabet": list(self.alphabet),
                "parts": {str(n): {w: q_str(c) for w, c in sorted(self.part(n).items())}
                          for n in range(1, d + 1) if self.part(n)}}

    @classmethod
    def from_json(cls, obj: dict) -> "CWSeries":
        return cls.from_parts({int(n): {w: Q(c) for w, c in p.items()} for n, p in obj["parts"].items()},
                              norm_alphabet(obj["alphabet"]))


def cw_zero(alphabet: str) -> CWSeries:
    return CWSeries.zero(alphabet)


def cw_from_lie_word(factors: list, alphabet: str | None = None) -> CWSeries:
    """The cyclic word of a product of Lie elements, brackets read as commutators.

    ``factors`` holds LieSeries or single letters.
    """
    alphabet = alphabet or next((f.alphabet for f in factors if isinstance(f, LieSeries)), None)
    if alphabet is None:
        alphabet = norm_alphabet(factors)
    fs = [LieSeries.generator(f, alphabet) if isinstance(f, str) else f for f in factors]
    if any(f.lo >= NEVER for f in fs):
        return CWSeries.zero(alphabet)
    lo = sum(f.lo for f in fs)

    def gen(n):
        acc: dict = {}

        def rec(i, left, prefix):
            if i == len(fs) - 1:
                for w, c in assoc_part(fs[i], left).items():
                    for pw, pc in prefix.items():
                        acc[pw + w] = acc.get(pw + w, 0) + pc * c
                return
            rest = sum(f.lo for f in fs[i + 1:])
            for d in range(fs[i].lo, left - rest + 1):
                part = assoc_part(fs[i], d)
                if part:
                    nxt = {}
                    for pw, pc in prefix.items():
                        for w, c in part.items():
                            nxt[pw + w] = nxt.get(pw + w, 0) + pc * c
                    rec(i + 1, left - d, nxt)

        rec(0, n, {"": 1})
        return cw_of_assoc(acc)

    return CWSeries(gen, alphabet, lo)


# ---------------------------------------------------------------------------
# tr_u, div_u and div


def tr_u(u: str, gamma: LieSeries) -> CWSeries:
    """Join the head of ``gamma`` to each of its ``u``-tails."""
    def gen(n):
        acc: dict = {}
        for w, c in assoc_part(gamma, n + 1).items():
            if w[-1] == u and len(w) > 1:
                k = canonical(w[:-1])
                acc[k] = acc.get(k, 0) + c
        return clean(acc)

    return CWSeries(gen, gamma.alphabet, max(gamma.lo - 1, 1))


def div_u(u: str, gamma: LieSeries) -> CWSeries:
    """Sum over ``u``-tails of ``gamma``: cut the tail and close the tree into a wheel.

    In words: the associative terms of ``gamma`` that end in ``u`` are read
    cyclically.  With this reading ``div_u(u)`` is the one-letter wheel.
    """
    def gen(n):
        acc: dict = {}
        for w, c in assoc_part(gamma, n).items():
            if w[-1] == u:
                k = canonical(w)
                acc[k] = acc.get(k, 0) + c
        return clean(acc)

    return CWSeries(gen, gamma.alphabet, gamma.lo)


def drop_framing(a: str, f: LieSeries) -> LieSeries:
    """Remove the coefficient of the generator ``a`` (the A_S part of ``a -> f``)."""
    return f.map_parts(lambda n, p: p if n != 1 else {w: c for w, c in p.items() if w != a})


def div(lam) -> CWSeries:
    """Divergence of a tangent map, extended by 0 on the framing part."""
    alphabet = lam.alphabet
    acc = CWSeries.zero(alphabet)
    terms = [div_u(a, drop_framing(a, lam.comp(a))) for a in lam.heads if a in alphabet]
    if not terms:
        return acc
    from .freelie import lincomb
    return lincomb([(1, t) for t in terms], acc)


# ---------------------------------------------------------------------------
# substitutions on cyclic words


def cw_substitute_linear(omega: CWSeries, mapping: dict, alphabet: str | None = None) -> CWSeries:
    """Apply ``letter -> combination of letters`` (renaming, ``u -> v+w``, ``u -> 0``)."""
    m = linear(mapping)

    def img(a):
        return m.get(a, {a: 1})

    def gen(n):
        acc: dict = {}
        for w, c in omega.part(n).items():
            for combo in product(*(img(a).items() for a in w)):
                k = canonical("".join(b for b, _ in combo))
                x = c
                for _, y in combo:
                    x = x * y
                acc[k] = acc.get(k, 0) + x
        return clean(acc)

    return CWSeries(gen, alphabet if alphabet is not None else omega.alphabet, omega.lo)


def cw_morphism(omega: CWSeries, images: dict, alphabet: str | None = None) -> CWSeries:
    """Apply the algebra morphism ``letter -> images[letter]`` (Lie series) to a wheel series.

    Letters not in ``images`` are fixed.
    """
    out_alpha = alphabet if alphabet is not None else omega.alphabet
    gens: dict = {}

    def img(a):
        s = images.get(a)
        if s is None:
            s = gens.get(a)
            if s is None:
                s = gens[a] = LieSeries.generator(a, out_alpha)
        return s

    lo_img = min((img(a).lo for a in set(omega.alphabet) | set(images)), default=1)

    def gen(n):
        acc: dict = {}
        for m in range(omega.lo, n // max(lo_img, 1) + 1):
            for w, c in omega.part(m).items():
                ims = [img(a) for a in w]
                if any(s.lo >= NEVER for s in ims):
                    continue
                _expand_word(ims, n, c, acc)
        return cw_of_assoc(acc)

    return CWSeries(gen, out_alpha, omega.lo * lo_img if omega.lo < NEVER else NEVER)


def _expand_word(ims, n, c, acc):
    k = len(ims)
    los = [s.lo for s in ims]
    tail = [0] * (k + 1)
    for i in range(k - 1, -1, -1):
        tail[i] = tail[i + 1] + los[i]

    def rec(i, left, prefix):
        if i == k - 1:
            for w, x in assoc_part(ims[i], left).items():
                for pw, pc in prefix.items():
                    acc[pw + w] = acc.get(pw + w, 0) + pc * x
            return
        for d in range(los[i], left - tail[i + 1] + 1):
            part = assoc_part(ims[i], d)
            if not part:
                continue
            nxt: dict = {}
            for pw, pc in prefix.items():
                for w, x in part.items():
                    nxt[pw + w] = nxt.get(pw + w, 0) + pc * x
            rec(i + 1, left - d, nxt)

    if n >= tail[0]:
        rec(0, n, {"": c})


def cw_letters(omega: CWSeries, d: int) -> set:
    return {a for n in range(1, d + 1) for w in omega.part(n) for a in w}


# ---------------------------------------------------------------------------
# j and J_u (these need tangential derivations and conjugations)


def j(lam) -> CWSeries:
    """(e^{d_lam} - 1)/d_lam applied to div(lam)."""
    from .tangential import tder_exp_series
    from math import factorial
    return tder_exp_series(lam, div(lam), lambda k: mpq(1, factorial(k + 1)))


def J_u(u: str, gamma: LieSeries) -> CWSeries:
    """Integral over s in [0,1] of div_u(gamma // RC_u^{s gamma}) // C_u^{-s gamma}."""
    from .tangential import conj_u, rc_u
    s_gamma = gamma.map_parts(lambda n, p: {w: Poly([0, c]) for w, c in p.items()})
    inner = div_u(u, rc_u(u, s_gamma, gamma))
    integrand = conj_u(u, -s_gamma, inner)

    def gen(n):
        out = {}
        for w, c in integrand.part(n).items():
            v = c.integrate().at(1) if isinstance(c, Poly) else c
            if v:
                out[w] = v
        return out

    return CWSeries(gen, gamma.alphabet, gamma.lo)


def random_cw(alphabet: str, seed: int, coeff_range: int = 2) -> CWSeries:
    """Deterministic random wheel series, like ``random_series``."""
    import random
    alphabet = norm_alphabet(alphabet)

    def gen(n):
        out = {}
        for w in cw_basis(alphabet, n):
            c = random.Random(f"cw:{seed}:{n}:{w}").randint(-coeff_range, coeff_range)
            if c:
                out[w] = mpq(c)
        return out

    return CWSeries(gen, alphabet, 1)


def dumps(omega: CWSeries, d: int) -> str:
    return json.dumps(omega.to_json(d), sort_keys=True)


__all__ = ["canonical", "cw_basis", "CWSeries", "random_cw", "cw_from_lie_word", "tr_u", "div_u", "div", "j", "J_u",
           "cw_substitute_linear", "cw_morphism", "poly_at_one"]
