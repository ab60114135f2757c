"""Drinfel'd-Kohno algebras t_n, their operad maps, associators, and the map alpha into A^w.

t_n is the iterated semidirect product of the free Lie algebras
FL_{k-1} = FL(t_{1k}, ..., t_{k-1,k}), k = 2..n, so a basis element is a pair
``(k, w)`` with ``w`` a Lyndon word in the letters ``"1"..str(k-1)``; the
letter ``i`` stands for ``t_{ik}``.  Strand labels are the digits 1..9.
"""

from __future__ import annotations

import json
from functools import lru_cache

from gmpy2 import mpq

from . import _kernel as K
from .awcalc import El, Es, convert_ls
from .freelie import NEVER, Series, add_into, bch_generic, clean
from .scalars import Q, Residual, SolveLog, UnknownRegistry, q_str, series_solve
from .tangential import TangentMap, ad_series, exp_coef, tb
from .freelie import LieSeries

MAX_STRANDS = 9


class SubsetOverlap(ValueError):
    pass


def _digits(n: int) -> str:
    return "".join(str(i) for i in range(1, n + 1))


def dk_basis(n: int, degree: int) -> list[tuple[int, str]]:
    out = []
    for k in range(2, n + 1):
        if degree >= 1:
            out += [(k, w) for w in K.lyndon_words(_digits(k - 1), degree)]
    return out


def gen_key(i: int, j: int) -> tuple[int, str]:
    """Basis key of t_ij."""
    if i == j:
        raise ValueError("t_ii is not a generator")
    i, j = min(i, j), max(i, j)
    return (j, str(i))


# ---------------------------------------------------------------------------
# bracket


@lru_cache(maxsize=None)
def _act_gen(k: int, w: str, l: str) -> tuple:
    """[P_w at level k, t_{l m}] for any m > k, as a word combination at level m."""
    if len(w) == 1:
        i, kk = w, str(k)
        if l == i:      # [t_ik, t_im] = [t_im, t_km]
            return ((i + kk, 1),)
        if l == kk:     # [t_ik, t_km] = [t_km, t_im] = -[t_im, t_km]
            return ((i + kk, -1),)
        return ()
    u, v = K.factor(w)
    # [[U,V],T] = [U,[V,T]] - [V,[U,T]]
    acc: dict = {}
    add_into(acc, _act(k, u, dict(_act_gen(k, v, l))))
    add_into(acc, _act(k, v, dict(_act_gen(k, u, l))), -1)
    return tuple(sorted(clean(acc).items()))


@lru_cache(maxsize=None)
def _act_word(k: int, w: str, y: str) -> tuple:
    """[P_w at level k, P_y at a higher level]."""
    if len(y) == 1:
        return _act_gen(k, w, y)
    u, v = K.factor(y)
    # [X,[U,V]] = [[X,U],V] + [U,[X,V]]
    acc: dict = {}
    xu, xv = dict(_act_word(k, w, u)), dict(_act_word(k, w, v))
    if xu:
        add_into(acc, K.bracket_parts(xu, {v: 1}))
    if xv:
        add_into(acc, K.bracket_parts({u: 1}, xv))
    return tuple(sorted(clean(acc).items()))


def _act(k: int, w: str, part: dict) -> dict:
    acc: dict = {}
    for y, c in part.items():
        for z, x in _act_word(k, w, y):
            acc[z] = acc.get(z, 0) + c * x
    return clean(acc)


def bracket_keys(a: tuple, b: tuple) -> dict:
    """[a, b] for basis keys, as ``{key: coefficient}``."""
    (k1, w1), (k2, w2) = a, b
    if k1 == k2:
        return {(k1, w): c for w, c in K.bracket_words(w1, w2).items()}
    if k1 < k2:
        return {(k2, w): c for w, c in _act_word(k1, w1, w2)}
    return {(k1, w): -c for w, c in _act_word(k2, w2, w1)}


def bracket_parts(p: dict, q: dict) -> dict:
    acc: dict = {}
    for a, x in p.items():
        for b, y in q.items():
            if a == b:
                continue
            xy = x * y
            for key, c in bracket_keys(a, b).items():
                acc[key] = acc.get(key, 0) + xy * c
    return clean(acc)


# ---------------------------------------------------------------------------
# series


def key_label(key: tuple) -> str:
    k, w = key

    def rec(u):
        if len(u) == 1:
            return f"t{u}{k}"
        a, b = K.factor(u)
        return "[" + rec(a) + "," + rec(b) + "]"
    return rec(w)


def key_str(key: tuple) -> str:
    return f"{key[0]}:{key[1]}"


def parse_key(s: str) -> tuple:
    k, w = s.split(":")
    return (int(k), w)


class DKSeries(Series):
    __slots__ = ("n",)

    def __init__(self, gen, n: int, lo: int = 1):
        super().__init__(gen, lo)
        if not 1 <= n <= MAX_STRANDS:
            raise ValueError(f"strand count must be in 1..{MAX_STRANDS}")
        self.n = n

    def _like(self, gen, lo=1):
        return DKSeries(gen, self.n, lo)

    @classmethod
    def zero(cls, n: int) -> "DKSeries":
        return cls(lambda d: {}, n, NEVER)

    @classmethod
    def from_parts(cls, parts: dict, n: int) -> "DKSeries":
        parts = {int(d): clean(dict(p)) for d, p in parts.items()}
        parts = {d: p for d, p in parts.items() if p}
        for d, p in parts.items():
            for k, w in p:
                if len(w) != d or not 2 <= k <= n or not K.is_lyndon(w) or max(w) >= str(k):
                    raise ValueError(f"({k}, {w!r}) is not a degree-{d} basis element of t_{n}")
        return cls(lambda d: parts.get(d, {}), n, min(parts, default=NEVER))

    @classmethod
    def generator(cls, i: int, j: int, n: int, c=1) -> "DKSeries":
        return cls.from_parts({1: {gen_key(i, j): mpq(c)}}, n)

    def pretty(self, d: int) -> str:
        from .freelie import format_coeff_term
        out = []
        for m in range(1, d + 1):
            for key, c in sorted(self.part(m).items()):
                out.append(format_coeff_term(key_label(key), c, not out))
        return "".join(out) or "0"

    def __repr__(self):
        return f"DKSeries({self.pretty(3)} + ...)"

    def to_json(self, d: int) -> dict:
        return {"n": self.n,
                "parts": {str(m): {key_str(k): q_str(c) for k, c in sorted(self.part(m).items())}
                          for m in range(1, d + 1) if self.part(m)}}

    @classmethod
    def from_json(cls, obj: dict) -> "DKSeries":
        return cls.from_parts({int(m): {parse_key(k): Q(c) for k, c in p.items()}
                               for m, p in obj["parts"].items()}, int(obj["n"]))


def dk_bracket(f: DKSeries, g: DKSeries) -> DKSeries:
    if f.n != g.n:
        raise ValueError("bracket of series in different t_n")
    if f.lo >= NEVER or g.lo >= NEVER:
        return DKSeries.zero(f.n)

    def gen(d):
        acc: dict = {}
        for i in range(f.lo, d - g.lo + 1):
            p, q = f.part(i), g.part(d - i)
            if p and q:
                add_into(acc, bracket_parts(p, q))
        return clean(acc)

    return DKSeries(gen, f.n, f.lo + g.lo)


def dk_bch(f: DKSeries, g: DKSeries) -> DKSeries:
    return bch_generic(f, g, dk_bracket)


def dk_product(*logs: DKSeries) -> DKSeries:
    out = logs[0]
    for g in logs[1:]:
        out = dk_bch(out, g)
    return out


def dk_inverse(f: DKSeries) -> DKSeries:
    return -f


def dk_conj(f: DKSeries, by: DKSeries) -> DKSeries:
    """log of e^by e^f e^-by, i.e. e^{ad by} f."""
    return ad_series(by, f, exp_coef(1), dk_bracket)


# ---------------------------------------------------------------------------
# operad maps


def _check_subsets(subsets: list, m: int) -> list[tuple[int, ...]]:
    subs = [tuple(int(c) for c in s) if isinstance(s, str) else tuple(s) for s in subsets]
    seen: set = set()
    for s in subs:
        for a in s:
            if not 1 <= a <= m:
                raise ValueError(f"strand {a} outside 1..{m}")
            if a in seen:
                raise SubsetOverlap(f"strand {a} appears in two subsets")
            seen.add(a)
    return subs


def operad_map(f: DKSeries, subsets: list, m: int) -> DKSeries:
    """The Lie morphism t_n -> t_m with t_ij -> sum of t_ab over a in s_i, b in s_j.

    ``subsets`` may hold strings of digits (``"12"``) or tuples of ints.
    """
    if len(subsets) != f.n:
        raise ValueError(f"need {f.n} subsets, got {len(subsets)}")
    subs = _check_subsets(subsets, m)
    memo: dict = {}

    def image(key) -> dict:
        hit = memo.get(key)
        if hit is None:
            k, w = key
            if len(w) == 1:
                hit = {}
                for a in subs[int(w) - 1]:
                    for b in subs[k - 1]:
                        kk = gen_key(a, b)
                        hit[kk] = hit.get(kk, 0) + 1
            else:
                u, v = K.factor(w)
                hit = bracket_parts(image((k, u)), image((k, v)))
            memo[key] = hit
        return hit

    def gen(d):
        acc: dict = {}
        for key, c in f.part(d).items():
            add_into(acc, image(key), c)
        return clean(acc)

    return DKSeries(gen, m, f.lo)


def sup(f: DKSeries, spec: str, m: int | None = None) -> DKSeries:
    """Superscript shorthand: ``sup(phi, "1,23,4")`` is phi^{1,23,4}."""
    subsets = spec.split(",")
    if m is None:
        m = max((int(c) for c in spec if c.isdigit()), default=1)
    return operad_map(f, subsets, m)


# ---------------------------------------------------------------------------
# associators


def r_log(n: int = 2, sign: int = 1) -> DKSeries:
    """log R^{+-1} = +-t_12/2 in t_2."""
    return DKSeries.generator(1, 2, n, mpq(sign, 2))


def pentagon_residual(phi: DKSeries) -> DKSeries:
    lhs = dk_product(sup(phi, "1,2,3", 4), sup(phi, "1,23,4"), sup(phi, "2,3,4"))
    rhs = dk_product(sup(phi, "12,3,4"), sup(phi, "1,2,34"))
    return lhs - rhs


def unitarity_residual(phi: DKSeries) -> DKSeries:
    return sup(phi, "3,2,1") + phi


def hexagon_residual(phi: DKSeries, sign: int = 1) -> DKSeries:
    """(R^s)^{12,3}  versus  Phi (R^s)^{2,3} (Phi^-1)^{1,3,2} (R^s)^{1,3} Phi^{3,1,2}."""
    r = r_log(2, sign)
    lhs = sup(r, "12,3")
    rhs = dk_product(phi, sup(r, "2,3", 3), sup(dk_inverse(phi), "1,3,2"), sup(r, "1,3", 3),
                     sup(phi, "3,1,2"))
    return lhs - rhs


def unknown_dk(reg: UnknownRegistry, family: str, n: int) -> DKSeries:
    def gen(d):
        return clean({key: reg.coefficient(family, d, i, key_str(key))
                      for i, key in enumerate(dk_basis(n, d))})
    return DKSeries(gen, n, 1)


def solve_associator(max_degree: int) -> tuple[DKSeries, SolveLog]:
    """log Phi in t_3 from pentagon and unitarity, degree 2 pinned to [t13,t23]/24."""
    if max_degree < 2:
        raise ValueError("max_degree must be >= 2")
    reg = UnknownRegistry()
    reg.add_family("φ", lambda d: [key_str(k) for k in dk_basis(3, d)])
    phi = lambda: unknown_dk(reg, "φ", 3)
    init_key = (3, "12")
    residuals = [
        Residual(lambda: pentagon_residual(phi()), lambda f, d: f.coefficients(d), 0, "pentagon"),
        Residual(lambda: unitarity_residual(phi()), lambda f, d: f.coefficients(d), 0, "unitarity"),
        Residual(phi, lambda f, d: [f.part(2).get(init_key, 0) - mpq(1, 24)] if d == 2 else [], 0,
                 "initial"),
    ]
    log = series_solve(residuals, reg, max_degree)
    final = phi()
    parts = {d: final.part(d) for d in range(1, max_degree + 1)}
    return DKSeries.from_parts(parts, 3), log


# ---------------------------------------------------------------------------
# alpha: t_n -> tangential derivations -> A^w


def alpha_tangent(f: DKSeries) -> TangentMap:
    """The Lie morphism t_ij -> (i -> x_j, j -> x_i) into FL(1..n)^{1..n} with the tb bracket."""
    S = _digits(f.n)
    memo: dict = {}

    def image(key) -> TangentMap:
        hit = memo.get(key)
        if hit is None:
            k, w = key
            if len(w) == 1:
                i, j = w, str(k)
                hit = TangentMap.from_comps({i: LieSeries.generator(j, S), j: LieSeries.generator(i, S)}, S, S)
            else:
                u, v = K.factor(w)
                hit = tb(image((k, u)), image((k, v)))
            memo[key] = hit
        return hit

    def gen(d):
        acc: dict = {}
        for key, c in f.part(d).items():  # images are homogeneous
            add_into(acc, image(key).part(d), c)
        return clean(acc)

    return TangentMap(gen, S, S, f.lo)


def alpha_to_el(f: DKSeries) -> El:
    """exp of alpha(f) with zero wheels, in the lower-interlaced presentation."""
    S = _digits(f.n)
    return El(alpha_tangent(f), None, S)


def dk_to_es(f: DKSeries) -> Es:
    """A group-like element of exp t_n (given by its log) as an element of A^w, split presentation."""
    return convert_ls(alpha_to_el(f))


def dumps(f: DKSeries, d: int) -> str:
    return json.dumps(f.to_json(d), sort_keys=True)
