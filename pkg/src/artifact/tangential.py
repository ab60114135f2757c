"""Tangential derivations, the tb bracket, conjugation automorphisms and the Gamma/Lambda maps."""

from __future__ import annotations

import json
from math import factorial

from gmpy2 import mpq

from . import _kernel as K
from .freelie import (NEVER, LieSeries, Series, add_into, assoc_of, bch_generic, bernoulli, bracket,
                      clean, lincomb, norm_alphabet, substitute)
from .scalars import Poly
from .wheels import CWSeries, canonical, cw_morphism


class TangentMap(Series):
    """A map ``head -> LieSeries`` over the tail alphabet, graded as one series.

    Keys of ``part(n)`` are ``(head, lyndon_word)``.  ``comp(a)`` returns the
    component as a LieSeries; components given at construction are kept as is.
    """

    __slots__ = ("heads", "alphabet", "_comps")

    def __init__(self, gen, heads: str, alphabet: str, lo: int = 1, comps: dict | None = None):
        super().__init__(gen, lo)
        self.heads = heads
        self.alphabet = alphabet
        self._comps = comps if comps is not None else {}

    def _like(self, gen, lo=1):
        return TangentMap(gen, self.heads, self.alphabet, lo)

    @classmethod
    def from_comps(cls, comps: dict, alphabet: str | None = None, heads: str | None = None) -> "TangentMap":
        alphabet = alphabet if alphabet is not None else norm_alphabet(
            set().union(*(set(f.alphabet) for f in comps.values())) if comps else "")
        heads = heads if heads is not None else "".join(sorted(comps))
        zero = LieSeries.zero(alphabet)
        comps = {a: comps.get(a, zero) for a in heads}

        def gen(n):
            out = {}
            for a in heads:
                for w, c in comps[a].part(n).items():
                    out[(a, w)] = c
            return out

        lo = min((f.lo for f in comps.values()), default=NEVER)
        return cls(gen, heads, alphabet, lo, comps)

    @classmethod
    def zero(cls, heads: str, alphabet: str | None = None) -> "TangentMap":
        return cls.from_comps({}, alphabet if alphabet is not None else heads, heads)

    @classmethod
    def parse(cls, spec: dict, alphabet: str) -> "TangentMap":
        """``{"x": "y", "y": "[xy]/2"}``-style construction."""
        from .freelie import parse_lie
        return cls.from_comps({a: parse_lie(v, alphabet) if isinstance(v, str) else v
                               for a, v in spec.items()}, alphabet, norm_alphabet(spec))

    def comp(self, a: str) -> LieSeries:
        f = self._comps.get(a)
        if f is None:
            if a not in self.heads:
                return LieSeries.zero(self.alphabet)
            f = LieSeries(lambda n: {w: c for (h, w), c in self.part(n).items() if h == a},
                          self.alphabet, self.lo)
            self._comps[a] = f
        return f

    def comps(self) -> dict:
        return {a: self.comp(a) for a in self.heads}

    def map_comps(self, fn, alphabet: str | None = None) -> "TangentMap":
        return TangentMap.from_comps({a: fn(a, self.comp(a)) for a in self.heads},
                                     self.alphabet if alphabet is None else alphabet, self.heads)

    def pretty(self, d: int) -> str:
        return "(" + ", ".join(f"{a} -> {self.comp(a).pretty(d)}" for a in self.heads) + ")"

    def __repr__(self):
        return f"TangentMap{self.pretty(3)}"

    def to_json(self, d: int) -> dict:
        return {a: self.comp(a).to_json(d) for a in self.heads}

    @classmethod
    def from_json(cls, obj: dict, alphabet: str | None = None) -> "TangentMap":
        comps = {a: LieSeries.from_json(v) for a, v in obj.items()}
        if alphabet is None:
            alphabet = norm_alphabet(set().union(*(set(f.alphabet) for f in comps.values())) or obj)
        comps = {a: f.with_alphabet(alphabet) for a, f in comps.items()}
        return cls.from_comps(comps, alphabet, norm_alphabet(obj))


def coerce_tangent(lam, alphabet=None) -> TangentMap:
    if isinstance(lam, TangentMap):
        return lam
    return TangentMap.from_comps(lam, alphabet)


# ---------------------------------------------------------------------------
# the derivation d_lam


class Derivation:
    """``d_lam``: the derivation with ``a -> [a, lam_a]``, acting on Lie, wheel and tangent series."""

    def __init__(self, lam: TangentMap):
        self.lam = lam
        self._lie: dict = {}
        self._cw: dict = {}

    @classmethod
    def of(cls, lam: TangentMap) -> "Derivation":
        d = lam.aux.get("der")
        if d is None:
            d = lam.aux["der"] = cls(lam)
        return d

    def word(self, w: str, k: int) -> dict:
        """Degree ``len(w)+k`` part of d(P_w)."""
        key = (w, k)
        hit = self._lie.get(key)
        if hit is None:
            if len(w) == 1:
                comp = self.lam.comp(w).part(k) if w in self.lam.heads else {}
                hit = K.bracket_parts({w: 1}, comp) if comp else {}
            else:
                u, v = K.factor(w)
                hit = {}
                du, dv = self.word(u, k), self.word(v, k)
                if du:
                    add_into(hit, K.bracket_parts(du, {v: 1}))
                if dv:
                    add_into(hit, K.bracket_parts({u: 1}, dv))
                hit = clean(hit)
            self._lie[key] = hit
        return hit

    def cw_word(self, w: str, k: int) -> dict:
        key = (w, k)
        hit = self._cw.get(key)
        if hit is None:
            acc: dict = {}
            for i, a in enumerate(w):
                img = self.word(a, k)
                if not img:
                    continue
                rest = w[i + 1:] + w[:i]
                for x, c in assoc_of(img).items():
                    kk = canonical(x + rest)
                    acc[kk] = acc.get(kk, 0) + c
            hit = self._cw[key] = clean(acc)
        return hit

    def _apply(self, f: Series, word_fn) -> Series:
        lam_lo = self.lam.lo
        if lam_lo >= NEVER or f.lo >= NEVER:
            return f._like(lambda n: {}, NEVER)

        def gen(n):
            acc: dict = {}
            for d in range(f.lo, n - lam_lo + 1):
                for w, c in f.part(d).items():
                    img = word_fn(w, n - d)
                    if img:
                        add_into(acc, img, c)
            return clean(acc)

        return f._like(gen, f.lo + lam_lo)

    def __call__(self, f):
        if isinstance(f, TangentMap):
            return f.map_comps(lambda a, g: self(g))
        if isinstance(f, CWSeries):
            return self._apply(f, self.cw_word)
        if isinstance(f, LieSeries):
            return self._apply(f, self.word)
        raise TypeError(f"cannot differentiate {type(f).__name__}")


def apply_tder(lam, f):
    """``d_lam(f)`` for a Lie series, wheel series, or tangent map ``f``."""
    return Derivation.of(coerce_tangent(lam))(f)


def tder_exp_series(lam, f, coef) -> Series:
    """``sum_k coef(k) d_lam^k (f)``."""
    lam = coerce_tangent(lam)
    if lam.lo >= NEVER or f.lo >= NEVER:
        return lincomb([(coef(0), f)], f)
    der = Derivation.of(lam)
    chain = [f]

    def gen(n):
        acc: dict = {}
        k = 0
        while f.lo + k * lam.lo <= n:
            while len(chain) <= k:
                chain.append(der(chain[-1]))
            c = coef(k)
            if c:
                add_into(acc, chain[k].part(n), c)
            k += 1
        return clean(acc)

    return f._like(gen, f.lo)


def power_coef(scale, base):
    """``k -> scale**k * base(k)``, for ``scale`` a rational or a Poly."""
    powers = [mpq(1)]

    def coef(k):
        while len(powers) <= k:
            powers.append(powers[-1] * scale)
        return powers[k] * base(k)

    return coef


def exp_tder(lam, f, scale=1):
    """``e^{scale d_lam}(f)``; ``scale`` may be a rational or a Poly in t."""
    return tder_exp_series(lam, f, power_coef(scale, lambda k: mpq(1, factorial(k))))


def ad_series(x: Series, y: Series, coef, bracket_fn=bracket) -> Series:
    """``sum_k coef(k) ad_x^k (y)``; ``x`` must have positive lower degree."""
    if x.lo >= NEVER or y.lo >= NEVER:
        return lincomb([(coef(0), y)], y)
    chain = [y]

    def term(k):
        while len(chain) <= k:
            chain.append(bracket_fn(x, chain[-1]))
        return chain[k]

    def gen(n):
        acc: dict = {}
        k = 0
        while y.lo + k * x.lo <= n:
            c = coef(k)
            if c:
                add_into(acc, term(k).part(n), c)
            k += 1
        return clean(acc)

    return y._like(gen, y.lo)


def exp_coef(sign=1):
    return lambda k: mpq(sign) ** k / factorial(k)


_BERN: list = []


def bernoulli_coef(k: int):
    """Coefficients of x/(e^x - 1)."""
    global _BERN
    if len(_BERN) <= k:
        _BERN = bernoulli(max(k, 2 * len(_BERN), 16))
    return _BERN[k] / factorial(k)


# ---------------------------------------------------------------------------
# tb bracket


def tb(l1, l2) -> TangentMap:
    """``[l1, l2] + d_l1 l2 - d_l2 l1``, componentwise."""
    l1, l2 = coerce_tangent(l1), coerce_tangent(l2)
    if l1.lo >= NEVER or l2.lo >= NEVER:
        return TangentMap.zero(l1.heads, l1.alphabet)
    d1, d2 = Derivation.of(l1), Derivation.of(l2)
    comps = {}
    for a in l1.heads:
        f, g = l1.comp(a), l2.comp(a)
        comps[a] = lincomb([(1, bracket(f, g)), (1, d1(g)), (-1, d2(f))], f)
    return TangentMap.from_comps(comps, l1.alphabet, l1.heads)


def bch_tb(l1, l2) -> TangentMap:
    return bch_generic(coerce_tangent(l1), coerce_tangent(l2), tb)


# ---------------------------------------------------------------------------
# conjugation automorphisms


def _apply_morphism(images: dict, f, alphabet):
    if isinstance(f, TangentMap):
        return f.map_comps(lambda a, g: _apply_morphism(images, g, alphabet))
    if isinstance(f, CWSeries):
        return cw_morphism(f, images, alphabet)
    if isinstance(f, LieSeries):
        return substitute(f, images, alphabet)
    raise TypeError(f"cannot apply a morphism to {type(f).__name__}")


def conj_images(lam: TangentMap) -> dict:
    """Generator images of C^lam: ``a -> e^{ad lam_a} a``."""
    hit = lam.aux.get("conj")
    if hit is None:
        hit = {a: ad_series(lam.comp(a), LieSeries.generator(a, lam.alphabet), exp_coef(1))
               for a in lam.heads if a in lam.alphabet}
        lam.aux["conj"] = hit
    return hit


def rc_images(lam: TangentMap) -> dict:
    """Generator images of the inverse of C^lam: ``a -> e^{-ad psi(lam_a)} a`` with psi itself."""
    hit = lam.aux.get("rc")
    if hit is not None:
        return hit
    images: dict = {}
    inner: dict = {}
    heads = [a for a in lam.heads if a in lam.alphabet]

    def make(a):
        gen_a = LieSeries.generator(a, lam.alphabet)
        holder = {}

        def g(n):
            s = holder.get("s")
            if s is None:
                psi_lam = substitute(lam.comp(a), images, lam.alphabet)
                inner[a] = psi_lam
                s = holder["s"] = ad_series(psi_lam, gen_a, exp_coef(-1))
            return s.part(n)

        return LieSeries(g, lam.alphabet, 1)

    for a in heads:
        images[a] = make(a)
    lam.aux["rc"] = images
    return images


def conj(lam, f):
    """C^lam applied to ``f`` (Lie series, wheel series, or tangent map componentwise)."""
    lam = coerce_tangent(lam)
    return _apply_morphism(conj_images(lam), f, f.alphabet)


def rc(lam, f):
    """The inverse of C^lam applied to ``f``."""
    lam = coerce_tangent(lam)
    return _apply_morphism(rc_images(lam), f, f.alphabet)


def single(u: str, gamma: LieSeries) -> TangentMap:
    return TangentMap.from_comps({u: gamma}, gamma.alphabet, u)


def conj_u(u: str, gamma: LieSeries, f):
    """C_u^gamma: ``u -> e^{ad gamma} u``, other generators fixed."""
    return conj(single(u, gamma), f)


def rc_u(u: str, gamma: LieSeries, f):
    """RC_u^gamma, the inverse of C_u^{-gamma}."""
    return rc(single(u, -gamma), f)


# ---------------------------------------------------------------------------
# Gamma_t and Lambda_t


def _t_integrate(c):
    return c.integrate() if isinstance(c, Poly) else Poly([0, c])


def _at(c, t):
    return c.at(t) if isinstance(c, Poly) else c


def _integrate_series(rhs: Series, holder: Series):
    def gen(n):
        return clean({k: _t_integrate(c) for k, c in rhs.part(n).items()})
    return gen


def gamma_t(lam) -> TangentMap:
    """Gamma_t(lam) with Poly-in-t coefficients.

    d/dt Gamma_t = lam // e^{-t d_lam} // ad Gamma_t/(e^{ad Gamma_t} - 1) componentwise.
    """
    lam = coerce_tangent(lam)
    comps: dict = {}
    minus_t = Poly([0, -1])
    for a in lam.heads:
        cell: dict = {}

        def g(n, a=a, cell=cell):
            rhs = cell.get("rhs")
            if rhs is None:
                moved = exp_tder(lam, lam.comp(a), minus_t)
                rhs = cell["rhs"] = ad_series(comps[a], moved, bernoulli_coef)
            return clean({w: _t_integrate(c) for w, c in rhs.part(n).items()})

        comps[a] = LieSeries(g, lam.alphabet, 1)
    return TangentMap.from_comps(comps, lam.alphabet, lam.heads)


def lambda_t(lam) -> TangentMap:
    """Lambda_t(lam) with Poly-in-t coefficients.

    d/dt Lambda_t = lam // e^{d_{Lambda_t}} // ad_tb Lambda_t/(e^{ad_tb Lambda_t} - 1).
    """
    lam = coerce_tangent(lam)
    cell: dict = {}

    def g(n):
        rhs = cell.get("rhs")
        if rhs is None:
            moved = exp_tder(out, lam)
            rhs = cell["rhs"] = ad_series(out, moved, bernoulli_coef, tb)
        return clean({k: _t_integrate(c) for k, c in rhs.part(n).items()})

    out = TangentMap(g, lam.heads, lam.alphabet, 1)
    return out


def at_t(lam: TangentMap, t=1) -> TangentMap:
    return lam.map_comps(lambda a, f: f.map_parts(lambda n, p: clean({w: _at(c, t) for w, c in p.items()})))


def gamma(lam) -> TangentMap:
    lam = coerce_tangent(lam)
    if lam.lo >= NEVER:
        return lam
    return at_t(gamma_t(lam))


def lambda_(lam) -> TangentMap:
    lam = coerce_tangent(lam)
    if lam.lo >= NEVER:
        return lam
    return at_t(lambda_t(lam))


def tangent_eq(l1: TangentMap, l2: TangentMap, d: int) -> list[bool]:
    return [True] + [l1.part(n) == l2.part(n) for n in range(1, d + 1)]


def dumps(lam: TangentMap, d: int) -> str:
    return json.dumps(lam.to_json(d), sort_keys=True)
