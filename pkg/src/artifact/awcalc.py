"""Trees-and-wheels presentations of group-like arrow-diagram elements.

``El`` is the lower-interlaced presentation on a strand set ``S``; ``Es`` is the
split presentation on heads ``H`` and tails ``T``.  An element on strands
``S`` in factored form is an ``Es`` with ``H = T = S``.
"""

from __future__ import annotations

import json

from gmpy2 import mpq

from .freelie import NEVER, LieSeries, bch, lincomb, norm_alphabet, substitute_linear
from .tangential import (TangentMap, bch_tb, exp_tder, gamma, lambda_, rc_u)
from .wheels import CWSeries, J_u, cw_substitute_linear, j


class LabelClash(ValueError):
    pass


class UnknownLabel(KeyError):
    def __str__(self):
        return str(self.args[0]) if self.args else "unknown label"


def _need(label, labels, what="label"):
    if label not in labels:
        raise UnknownLabel(f"{what} {label!r} not among {list(labels)}")


def _merge(*alphabets) -> str:
    return norm_alphabet("".join(alphabets))


def _without(labels: str, *drop) -> str:
    return "".join(a for a in labels if a not in drop)


def _sub_tm(lam: TangentMap, mapping: dict, alphabet: str) -> TangentMap:
    return lam.map_comps(lambda a, f: substitute_linear(f, mapping, alphabet), alphabet)


def _realpha_tm(lam: TangentMap, alphabet: str) -> TangentMap:
    return TangentMap.from_comps({a: lam.comp(a).with_alphabet(alphabet) for a in lam.heads},
                                 alphabet, lam.heads)


def fresh_labels(n: int, avoid: str) -> str:
    """``n`` single-character labels not in ``avoid`` (stable choice)."""
    out = []
    c = 0x3b1  # greek block keeps temporaries visibly distinct
    while len(out) < n:
        ch = chr(c)
        if ch not in avoid:
            out.append(ch)
        c += 1
    return "".join(out)


# ---------------------------------------------------------------------------
# E_l


class El:
    """``(lam; omega)_l`` on the strands ``S``."""

    __slots__ = ("strands", "lam", "omega")

    def __init__(self, lam: TangentMap, omega: CWSeries | None = None, strands: str | None = None):
        strands = strands if strands is not None else lam.heads
        self.strands = strands
        if lam.alphabet != strands or lam.heads != strands:
            lam = TangentMap.from_comps({a: lam.comp(a).with_alphabet(strands) for a in strands},
                                        strands, strands)
        self.lam = lam
        self.omega = (omega if omega is not None else CWSeries.zero(strands)).with_alphabet(strands)

    @classmethod
    def unit(cls, strands: str) -> "El":
        strands = norm_alphabet(strands)
        return cls(TangentMap.zero(strands), CWSeries.zero(strands), strands)

    def eq(self, other: "El", d: int) -> list[bool]:
        return [True] + [self.lam.part(n) == other.lam.part(n) and self.omega.part(n) == other.omega.part(n)
                         for n in range(1, d + 1)]

    def pretty(self, d: int) -> str:
        return f"({self.lam.pretty(d)[1:-1]}; {self.omega.pretty(d)})_l"

    def __repr__(self):
        return self.pretty(3)

    def to_json(self, d: int) -> dict:
        return {"kind": "El", "heads": list(self.strands), "tails": list(self.strands),
                "lambda": self.lam.to_json(d), "omega": self.omega.to_json(d)}

    @classmethod
    def from_json(cls, obj: dict) -> "El":
        s = norm_alphabet(obj["heads"])
        return cls(TangentMap.from_json(obj["lambda"], s), CWSeries.from_json(obj["omega"]), s)


def el_union(e1: El, e2: El) -> El:
    if set(e1.strands) & set(e2.strands):
        raise LabelClash(f"strands {sorted(set(e1.strands) & set(e2.strands))} occur on both sides")
    s = _merge(e1.strands, e2.strands)
    comps = {a: e1.lam.comp(a).with_alphabet(s) for a in e1.strands}
    comps.update({a: e2.lam.comp(a).with_alphabet(s) for a in e2.strands})
    om = lincomb([(1, e1.omega.with_alphabet(s)), (1, e2.omega.with_alphabet(s))], e1.omega.with_alphabet(s))
    return El(TangentMap.from_comps(comps, s, s), om, s)


def el_mul(e1: El, e2: El) -> El:
    """Stacking product: (BCH_tb(l1, l2); e^{-d_l2} w1 + w2)."""
    if e1.strands != e2.strands:
        raise LabelClash(f"strand sets differ: {e1.strands!r} vs {e2.strands!r}")
    lam = bch_tb(e1.lam, e2.lam)
    om = exp_tder(e2.lam, e1.omega, -1) + e2.omega
    return El(lam, om, e1.strands)


def el_inverse(e: El) -> El:
    """(-lam; -e^{d_lam} w), the stacking inverse."""
    return El(-e.lam, -exp_tder(e.lam, e.omega, 1), e.strands)


def el_deta(e: El, a: str) -> El:
    _need(a, e.strands, "strand")
    s = _without(e.strands, a)
    lam = TangentMap.from_comps({b: substitute_linear(e.lam.comp(b), {a: 0}, s) for b in s}, s, s)
    return El(lam, cw_substitute_linear(e.omega, {a: 0}, s), s)


def el_dDelta(e: El, a: str, b: str, c: str) -> El:
    _need(a, e.strands, "strand")
    rest = _without(e.strands, a)
    if b == c or b in rest or c in rest:
        raise LabelClash(f"cannot double {a!r} into {b!r}, {c!r}")
    s = _merge(rest, b, c)
    m = {a: {b: 1, c: 1}}
    comps = {x: e.lam.comp(x) for x in rest}
    comps[b] = comps[c] = e.lam.comp(a)
    lam = TangentMap.from_comps({x: substitute_linear(f, m, s) for x, f in comps.items()}, s, s)
    return El(lam, cw_substitute_linear(e.omega, m, s), s)


def el_dsigma(e: El, a: str, b: str) -> El:
    _need(a, e.strands, "strand")
    rest = _without(e.strands, a)
    if b in rest:
        raise LabelClash(f"strand {b!r} already present")
    s = _merge(rest, b)
    comps = {x: e.lam.comp(x) for x in rest}
    comps[b] = e.lam.comp(a)
    m = {a: b}
    lam = TangentMap.from_comps({x: substitute_linear(f, m, s) for x, f in comps.items()}, s, s)
    return El(lam, cw_substitute_linear(e.omega, m, s), s)


def framing_wheel(lam: TangentMap) -> CWSeries:
    """sum_a <lam_a, a> (one-letter wheel on a): the part of the divergence that div leaves out."""
    part = {a: lam.comp(a).part(1).get(a, 0) for a in lam.heads}
    part = {a: c for a, c in part.items() if c}
    return CWSeries.from_parts({1: part} if part else {}, lam.alphabet)


def el_dA_all(e: El) -> El:
    """(-lam; e^{d_lam} w - j(lam)), with the framing wheel also subtracted.

    j ignores the framing part of lam, but reversing a strand turns each
    self-arrow into its opposite plus a one-letter wheel; without that wheel
    this formula would disagree with the factored presentation in degree 1.
    """
    om = exp_tder(e.lam, e.omega) - j(e.lam) - framing_wheel(e.lam)
    return El(-e.lam, om, e.strands)


def el_dS_all(e: El) -> El:
    a = el_dA_all(e)
    return El(-e.lam.degree_scale(-1), a.omega.degree_scale(-1), e.strands)


def el_dA(e: El, a: str) -> El:
    """Single-strand antipode, computed through the factored presentation."""
    return convert_sl(es_dA(convert_ls(e), a))


def el_dS(e: El, a: str) -> El:
    return convert_sl(es_dS(convert_ls(e), a))


def el_dm(e: El, a: str, b: str, c: str) -> El:
    return convert_sl(es_dm(convert_ls(e), a, b, c))


# ---------------------------------------------------------------------------
# E_s


class Es:
    """``(lam; omega)_s`` with ``lam: heads -> FL(tails)`` and ``omega`` in CW(tails)."""

    __slots__ = ("heads", "tails", "lam", "omega")

    def __init__(self, lam: TangentMap, omega: CWSeries | None = None, tails: str | None = None):
        tails = tails if tails is not None else lam.alphabet
        self.heads = lam.heads
        self.tails = tails
        if lam.alphabet != tails:
            lam = _realpha_tm(lam, tails)
        self.lam = lam
        self.omega = (omega if omega is not None else CWSeries.zero(tails)).with_alphabet(tails)

    @classmethod
    def unit(cls, heads: str, tails: str | None = None) -> "Es":
        heads = norm_alphabet(heads)
        tails = heads if tails is None else norm_alphabet(tails)
        return cls(TangentMap.zero(heads, tails), CWSeries.zero(tails), tails)

    @classmethod
    def make(cls, comps: dict, omega: CWSeries | None = None, heads: str | None = None,
             tails: str | None = None) -> "Es":
        heads = norm_alphabet(heads if heads is not None else comps)
        tails = norm_alphabet(tails) if tails is not None else heads
        lam = TangentMap.from_comps({a: f.with_alphabet(tails) for a, f in comps.items()}, tails, heads)
        return cls(lam, omega, tails)

    def comp(self, x: str) -> LieSeries:
        return self.lam.comp(x)

    def eq(self, other: "Es", d: int) -> list[bool]:
        return [True] + [self.lam.part(n) == other.lam.part(n) and self.omega.part(n) == other.omega.part(n)
                         for n in range(1, d + 1)]

    def pretty(self, d: int) -> str:
        return f"({self.lam.pretty(d)[1:-1]}; {self.omega.pretty(d)})_s"

    def __repr__(self):
        return self.pretty(3)

    def to_json(self, d: int) -> dict:
        return {"kind": "Es", "heads": list(self.heads), "tails": list(self.tails),
                "lambda": self.lam.to_json(d), "omega": self.omega.to_json(d)}

    @classmethod
    def from_json(cls, obj: dict) -> "Es":
        t = norm_alphabet(obj["tails"])
        lam = TangentMap.from_json(obj["lambda"], t)
        if not obj["lambda"]:
            lam = TangentMap.zero(norm_alphabet(obj["heads"]), t)
        return cls(lam, CWSeries.from_json(obj["omega"]), t)


def _es(comps: dict, omega: CWSeries, heads: str, tails: str) -> Es:
    lam = TangentMap.from_comps(comps, tails, norm_alphabet(heads))
    return Es(lam, omega, tails)


def _tail_sub(e: Es, mapping: dict, tails: str) -> Es:
    comps = {x: substitute_linear(e.comp(x), mapping, tails) for x in e.heads}
    return _es(comps, cw_substitute_linear(e.omega, mapping, tails), e.heads, tails)


def es_union(e1: Es, e2: Es) -> Es:
    if set(e1.heads) & set(e2.heads) or set(e1.tails) & set(e2.tails):
        raise LabelClash("heads and tails of the two factors must be disjoint")
    t = _merge(e1.tails, e2.tails)
    comps = {x: e1.comp(x).with_alphabet(t) for x in e1.heads}
    comps.update({x: e2.comp(x).with_alphabet(t) for x in e2.heads})
    om = lincomb([(1, e1.omega.with_alphabet(t)), (1, e2.omega.with_alphabet(t))], e1.omega.with_alphabet(t))
    return _es(comps, om, e1.heads + e2.heads, t)


def es_hash(e1: Es, e2: Es) -> Es:
    """Componentwise BCH of trees; wheels add."""
    if e1.heads != e2.heads or e1.tails != e2.tails:
        raise LabelClash("the # product needs identical heads and tails")
    comps = {x: bch(e1.comp(x), e2.comp(x)) for x in e1.heads}
    return _es(comps, e1.omega + e2.omega, e1.heads, e1.tails)


def h_eta(e: Es, x: str) -> Es:
    _need(x, e.heads, "head")
    return _es({y: e.comp(y) for y in e.heads if y != x}, e.omega, _without(e.heads, x), e.tails)


def t_eta(e: Es, u: str) -> Es:
    _need(u, e.tails, "tail")
    return _tail_sub(e, {u: 0}, _without(e.tails, u))


def h_A(e: Es, x: str) -> Es:
    _need(x, e.heads, "head")
    comps = {y: e.comp(y) for y in e.heads}
    comps[x] = -comps[x]
    return _es(comps, e.omega, e.heads, e.tails)


def t_A(e: Es, u: str) -> Es:
    _need(u, e.tails, "tail")
    return e


h_S = h_A


def t_S(e: Es, u: str) -> Es:
    _need(u, e.tails, "tail")
    return _tail_sub(e, {u: {u: -1}}, e.tails)


def h_m(e: Es, x: str, y: str, z: str) -> Es:
    _need(x, e.heads, "head")
    _need(y, e.heads, "head")
    rest = _without(e.heads, x, y)
    if x == y or z in rest:
        raise LabelClash(f"cannot merge heads {x!r}, {y!r} into {z!r}")
    comps = {w: e.comp(w) for w in rest}
    comps[z] = bch(e.comp(x), e.comp(y))
    return _es(comps, e.omega, rest + z, e.tails)


def t_m(e: Es, u: str, v: str, w: str) -> Es:
    _need(u, e.tails, "tail")
    _need(v, e.tails, "tail")
    rest = _without(e.tails, u, v)
    if u == v or w in rest:
        raise LabelClash(f"cannot merge tails {u!r}, {v!r} into {w!r}")
    return _tail_sub(e, {u: w, v: w}, _merge(rest, w))


def h_Delta(e: Es, x: str, y: str, z: str) -> Es:
    _need(x, e.heads, "head")
    rest = _without(e.heads, x)
    if y == z or y in rest or z in rest:
        raise LabelClash(f"cannot double head {x!r} into {y!r}, {z!r}")
    comps = {w: e.comp(w) for w in rest}
    comps[y] = comps[z] = e.comp(x)
    return _es(comps, e.omega, rest + y + z, e.tails)


def t_Delta(e: Es, u: str, v: str, w: str) -> Es:
    _need(u, e.tails, "tail")
    rest = _without(e.tails, u)
    if v == w or v in rest or w in rest:
        raise LabelClash(f"cannot double tail {u!r} into {v!r}, {w!r}")
    return _tail_sub(e, {u: {v: 1, w: 1}}, _merge(rest, v, w))


def h_sigma(e: Es, x: str, y: str) -> Es:
    _need(x, e.heads, "head")
    rest = _without(e.heads, x)
    if y in rest:
        raise LabelClash(f"head {y!r} already present")
    comps = {w: e.comp(w) for w in rest}
    comps[y] = e.comp(x)
    return _es(comps, e.omega, rest + y, e.tails)


def t_sigma(e: Es, u: str, v: str) -> Es:
    _need(u, e.tails, "tail")
    rest = _without(e.tails, u)
    if v in rest:
        raise LabelClash(f"tail {v!r} already present")
    return _tail_sub(e, {u: v}, _merge(rest, v))


def t_ha(e: Es, u: str, x: str) -> Es:
    """Tail-by-head action: (lam // RC_u^{lam_x}; (omega + J_u(lam_x)) // RC_u^{lam_x})."""
    _need(u, e.tails, "tail")
    _need(x, e.heads, "head")
    g = e.comp(x)
    if g.lo >= NEVER:
        return e
    comps = {y: rc_u(u, g, e.comp(y)) for y in e.heads}
    om = rc_u(u, g, e.omega + J_u(u, g))
    return _es(comps, om, e.heads, e.tails)


# --- composites on A^w(S) elements in factored form (heads = tails = S) ----


def _strands(e: Es):
    if e.heads != e.tails:
        raise LabelClash(f"expected heads = tails, got {e.heads!r} / {e.tails!r}")


def es_dm(e: Es, a: str, b: str, c: str) -> Es:
    _strands(e)
    return t_m(h_m(t_ha(e, a, b), a, b, c), a, b, c)


def es_dA(e: Es, a: str) -> Es:
    _strands(e)
    return t_ha(t_A(h_A(e, a), a), a, a)


def es_dS(e: Es, a: str) -> Es:
    _strands(e)
    return t_ha(t_S(h_S(e, a), a), a, a)


def es_deta(e: Es, a: str) -> Es:
    _strands(e)
    return t_eta(h_eta(e, a), a)


def es_dDelta(e: Es, a: str, b: str, c: str) -> Es:
    _strands(e)
    return t_Delta(h_Delta(e, a, b, c), a, b, c)


def es_dsigma(e: Es, a: str, b: str) -> Es:
    _strands(e)
    return t_sigma(h_sigma(e, a, b), a, b)


def es_rename(e: Es, mapping: dict) -> Es:
    """Simultaneous strand renaming (through temporaries, so swaps are fine)."""
    mapping = {a: b for a, b in mapping.items() if a != b}
    if not mapping:
        return e
    tmp = fresh_labels(len(mapping), e.heads + e.tails + "".join(mapping.values()))
    for (a, _), t in zip(mapping.items(), tmp):
        e = es_dsigma(e, a, t)
    for (_, b), t in zip(mapping.items(), tmp):
        e = es_dsigma(e, t, b)
    return e


def es_stack(e1: Es, e2: Es) -> Es:
    """Stacking product: union with renamed copies, then stitch each a with its copy."""
    _strands(e1)
    _strands(e2)
    if e1.heads != e2.heads:
        raise LabelClash("stacking needs identical strand sets")
    s = e1.heads
    bar = fresh_labels(len(s), s)
    e = es_union(e1, es_rename(e2, dict(zip(s, bar))))
    for a, ab in zip(s, bar):
        e = es_dm(e, a, ab, a)
    return e


def es_dA_all(e: Es) -> Es:
    for a in e.heads:
        e = es_dA(e, a)
    return e


def es_dS_all(e: Es) -> Es:
    for a in e.heads:
        e = es_dS(e, a)
    return e


def es_inverse(e: Es) -> Es:
    return convert_ls(el_inverse(convert_sl(e)))


def es_power(e: Es, n: int) -> Es:
    """n-th stacking power; negative n uses the stacking inverse."""
    _strands(e)
    out = Es.unit(e.heads)
    base = e if n >= 0 else es_inverse(e)
    for _ in range(abs(n)):
        out = es_stack(out, base)
    return out


# ---------------------------------------------------------------------------
# conversions


def convert_ls(e: El) -> Es:
    """E_l -> E_s via Gamma; wheels pass through."""
    return Es(gamma(e.lam), e.omega, e.strands)


def convert_sl(e: Es) -> El:
    """E_s (heads = tails) -> E_l via Lambda."""
    _strands(e)
    return El(lambda_(e.lam), e.omega, e.heads)


def r_element(sign: int, a: str, b: str, presentation: str = "s", strands: str | None = None):
    """R^{+-}(a, b) = (a -> 0, b -> +-a; 0): one arrow from ``a`` to ``b``."""
    if a == b:
        raise LabelClash("an R element needs two distinct strands")
    s = norm_alphabet(strands if strands is not None else a + b)
    comps = {b: LieSeries.from_parts({1: {a: mpq(sign)}}, s)}
    lam = TangentMap.from_comps(comps, s, s)
    if presentation == "l":
        return El(lam, CWSeries.zero(s), s)
    return Es(lam, CWSeries.zero(s), s)


def es_exp_wheel(omega: CWSeries, strands: str) -> Es:
    """exp of a pure wheel: wheels are central, so this is just (0; omega)."""
    return Es(TangentMap.zero(strands), omega.with_alphabet(strands), strands)


def el_exp_wheel(omega: CWSeries, strands: str) -> El:
    return El(TangentMap.zero(strands), omega.with_alphabet(strands), strands)


def random_es(strands: str, seed: int, with_wheels: bool = True) -> Es:
    """Seeded random element on ``strands`` (heads = tails)."""
    from .freelie import random_series
    from .wheels import random_cw
    s = norm_alphabet(strands)
    comps = {a: random_series(s, f"{seed}/{a}") for a in s}  # any hashable seed works
    om = random_cw(s, seed) if with_wheels else None
    return Es.make(comps, om, s, s)


def random_el(strands: str, seed: int, with_wheels: bool = True) -> El:
    e = random_es(strands, seed, with_wheels)
    return El(e.lam, e.omega, e.heads)


def dumps(e, d: int) -> str:
    return json.dumps(e.to_json(d), sort_keys=True)
