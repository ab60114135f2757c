"""Free Lie algebras on Lyndon bases, as lazy graded series.

A series is a memoized map ``degree -> {key: coefficient}``.  For Lie series the
keys are Lyndon words (``str`` over single-character generators, ordered by
code point) standing for their standard bracketings.  Degree parts are only
computed when asked for, so series behave as unbounded objects.
"""

from __future__ import annotations

import json
import random
import re
from math import comb, factorial
from typing import Callable, Iterable

from gmpy2 import mpq

from . import _kernel as K
from .scalars import Q, q_str

NEVER = 1 << 30  # ``lo`` of the zero series


def clean(d: dict) -> dict:
    return {k: v for k, v in d.items() if v}


def add_into(acc: dict, part: dict, c=1):
    get = acc.get
    if c == 1:
        for k, v in part.items():
            acc[k] = get(k, 0) + v
    else:
        for k, v in part.items():
            acc[k] = get(k, 0) + c * v


class Series:
    """Lazy graded object; subclasses fix what the keys mean.

    ``lo`` is a lower bound for the first possibly nonzero degree.  Parts are
    memoized on first request; computing a part twice is harmless, so
    concurrent readers need no lock.
    """

    __slots__ = ("_gen", "_parts", "lo", "aux")

    def __init__(self, gen: Callable[[int], dict], lo: int = 1):
        self._gen = gen
        self._parts: dict[int, dict] = {}
        self.lo = lo
        self.aux: dict = {}  # derived caches, e.g. associative expansions

    def part(self, n: int) -> dict:
        p = self._parts.get(n)
        if p is None:
            p = self._gen(n) if n >= self.lo else {}
            self._parts[n] = p
        return p

    def _like(self, gen, lo=1):
        raise NotImplementedError

    # linear structure
    def __add__(self, other):
        return lincomb([(1, self), (1, other)], self)

    def __sub__(self, other):
        return lincomb([(1, self), (-1, other)], self)

    def __neg__(self):
        return lincomb([(-1, self)], self)

    def __mul__(self, c):
        if isinstance(c, Series):
            return NotImplemented
        return lincomb([(c, self)], self)

    __rmul__ = __mul__

    def __truediv__(self, c):
        return lincomb([(mpq(1) / mpq(c), self)], self)

    def map_parts(self, fn: Callable[[int, dict], dict], lo=None):
        """Same-kind series whose degree-``n`` part is ``fn(n, self.part(n))``."""
        return self._like(lambda n: fn(n, self.part(n)), self.lo if lo is None else lo)

    def truncate(self, d: int):
        return self._like(lambda n: self.part(n) if n <= d else {}, self.lo)

    def degree_scale(self, h):
        """Multiply the degree-``k`` part by ``h**k``."""
        return self.map_parts(lambda n, p: clean({k: v * h ** n for k, v in p.items()}))

    def euler(self):
        """Multiply the degree-``k`` part by ``k``."""
        return self.map_parts(lambda n, p: {k: v * n for k, v in p.items()})

    def coefficients(self, n: int) -> list:
        return list(self.part(n).values())

    def is_zero_to(self, d: int) -> bool:
        return all(not self.part(n) for n in range(1, d + 1))


def lincomb(terms: list, like: Series) -> Series:
    terms = [(c, s) for c, s in terms if c and s.lo < NEVER]

    def gen(n):
        acc: dict = {}
        for c, s in terms:
            add_into(acc, s.part(n), c)
        return clean(acc)

    lo = min((s.lo for _, s in terms), default=NEVER)
    return like._like(gen, lo)


def series_eq(f: Series, g: Series, d: int) -> list[bool]:
    """Per-degree equality for degrees ``0..d`` (degree 0 is always equal)."""
    return [True] + [f.part(n) == g.part(n) for n in range(1, d + 1)]


def norm_alphabet(alphabet: Iterable[str]) -> str:
    letters = sorted(set(alphabet))
    for a in letters:
        if len(a) != 1:
            raise ValueError(f"generator labels must be single characters, got {a!r}")
    return "".join(letters)


# ---------------------------------------------------------------------------
# Lie series


class LieSeries(Series):
    __slots__ = ("alphabet",)

    def __init__(self, gen, alphabet: str, lo: int = 1):
        super().__init__(gen, lo)
        self.alphabet = alphabet

    def _like(self, gen, lo=1):
        return LieSeries(gen, self.alphabet, lo)

    @classmethod
    def zero(cls, alphabet: str) -> "LieSeries":
        return cls(lambda n: {}, alphabet, NEVER)

    @classmethod
    def from_parts(cls, parts: dict, alphabet: str) -> "LieSeries":
        parts = {int(n): clean({w: v for w, v in p.items()}) for n, p in parts.items()}
        parts = {n: p for n, p in parts.items() if p}
        for n, p in parts.items():
            for w in p:
                if len(w) != n or not K.is_lyndon(w):
                    raise ValueError(f"{w!r} is not a Lyndon word of length {n}")
        lo = min(parts, default=NEVER)
        return cls(lambda n: parts.get(n, {}), alphabet, lo)

    @classmethod
    def generator(cls, a: str, alphabet: str) -> "LieSeries":
        return cls.from_parts({1: {a: mpq(1)}}, alphabet)

    def with_alphabet(self, alphabet: str) -> "LieSeries":
        return LieSeries(self.part, alphabet, self.lo)

    def letters_used(self, d: int) -> set:
        return {a for n in range(1, d + 1) for w in self.part(n) for a in w}

    def pretty(self, d: int) -> str:
        return pretty_terms((w, c) for n in range(1, d + 1) for w, c in sorted(self.part(n).items()))

    def __repr__(self):
        return f"LieSeries({self.pretty(4)} + ...)"

    def to_json(self, d: int) -> dict:
        return {"alphabet": list(self.alphabet),
                "parts": {str(n): {w: q_str(c) for w, c in sorted(self.part(n).items())}
                          for n in range(1, d + 1) if self.part(n)}}

    @classmethod
    def from_json(cls, obj: dict) -> "LieSeries":
        return cls.from_parts({int(n): {w: Q(c) for w, c in p.items()} for n, p in obj["parts"].items()},
                              norm_alphabet(obj["alphabet"]))


def lyndon_basis(alphabet: str, degree: int) -> list[str]:
    if degree < 1:
        raise ValueError("degree must be positive")
    return K.lyndon_words(norm_alphabet(alphabet), degree)


def necklace_count(k: int, n: int) -> int:
    """Witt's formula: number of Lyndon words of length n over k letters."""
    def mobius(m):
        res, p = 1, 2
        while p * p <= m:
            if m % p == 0:
                m //= p
                if m % p == 0:
                    return 0
                res = -res
            p += 1
        return -res if m > 1 else res
    return sum(mobius(d) * k ** (n // d) for d in range(1, n + 1) if n % d == 0) // n


def bracket_notation(w: str) -> str:
    if len(w) == 1:
        return w
    u, v = K.factor(w)
    return "[" + bracket_notation(u) + bracket_notation(v) + "]"


def format_coeff_term(label: str, c, first: bool) -> str:
    c = mpq(c)
    neg = c < 0
    a = -c if neg else c
    p, q = int(a.numerator), int(a.denominator)
    body = ("" if p == 1 else str(p)) + label + ("" if q == 1 else f"/{q}")
    if first:
        return ("-" if neg else "") + body
    return (" - " if neg else " + ") + body


def pretty_terms(items: Iterable, label=bracket_notation) -> str:
    out = []
    for w, c in items:
        if not c:
            continue
        out.append(format_coeff_term(label(w), c, not out))
    return "".join(out) or "0"


# ---------------------------------------------------------------------------
# associative embedding and rewriting into the basis


def assoc_of(part: dict) -> dict:
    """Expand a Lyndon-basis combination into the free associative algebra."""
    acc: dict = {}
    for w, c in part.items():
        add_into(acc, K.expand(w), c)
    return clean(acc)


def assoc_part(f: LieSeries, n: int) -> dict:
    """Memoized associative expansion of ``f.part(n)``."""
    cache = f.aux.setdefault("assoc", {})
    hit = cache.get(n)
    if hit is None:
        hit = cache[n] = assoc_of(f.part(n))
    return hit


def assoc_mul(a: dict, b: dict) -> dict:
    acc: dict = {}
    for u, x in a.items():
        for v, y in b.items():
            acc[u + v] = acc.get(u + v, 0) + x * y
    return clean(acc)


def from_assoc(poly: dict) -> dict:
    """Rewrite a homogeneous Lie polynomial given by words into the Lyndon basis.

    The smallest word of the standard bracketing of a Lyndon word ``w`` is ``w``
    itself with coefficient 1, so peeling off the smallest surviving word is a
    triangular elimination.
    """
    poly = clean(dict(poly))
    out = {}
    while poly:
        w = min(poly)
        if not K.is_lyndon(w):
            raise ValueError(f"not a Lie element: leading word {w!r}")
        c = poly[w]
        out[w] = c
        for u, x in K.expand(w).items():
            v = poly.get(u, 0) - c * x
            if v:
                poly[u] = v
            else:
                poly.pop(u, None)
    return out


def tree_assoc(tree) -> dict:
    if isinstance(tree, str):
        if len(tree) != 1:
            raise ValueError(f"bad leaf {tree!r}")
        return {tree: 1}
    a, b = tree
    x, y = tree_assoc(a), tree_assoc(b)
    acc = assoc_mul(x, y)
    add_into(acc, assoc_mul(y, x), -1)
    return clean(acc)


def to_basis(tree, alphabet: str | None = None) -> LieSeries:
    """Normalise a formal bracket tree (nested pairs of letters) into the Lyndon basis."""
    poly = tree_assoc(tree)
    out: dict[int, dict] = {}
    for w, c in from_assoc(poly).items():
        out.setdefault(len(w), {})[w] = mpq(c)
    letters = alphabet or norm_alphabet(_tree_letters(tree))
    return LieSeries.from_parts(out, letters)


def _tree_letters(tree):
    if isinstance(tree, str):
        return {tree}
    return _tree_letters(tree[0]) | _tree_letters(tree[1])


def parse_bracket(s: str):
    """Parse ``[x[xy]]``-style notation into a nested-pair tree."""
    pos = 0

    def node():
        nonlocal pos
        if s[pos] == "[":
            pos += 1
            a = node()
            b = node()
            if s[pos] != "]":
                raise ValueError(f"expected ] in {s!r}")
            pos += 1
            return (a, b)
        ch = s[pos]
        pos += 1
        return ch

    t = node()
    if pos != len(s):
        raise ValueError(f"trailing text in {s!r}")
    return t


_TERM = re.compile(r"\s*([+-])?\s*(\d*)\s*\*?\s*(\[[^\s+/]*\]|[^\s+\-/\d\[\]])\s*(?:/\s*(\d+))?")


def parse_lie(text: str, alphabet: str) -> LieSeries:
    """Parse ``x + [xy]/2 - 7[x[x[xy]]]/5760`` into a Lie series."""
    acc: dict[int, dict] = {}
    pos = 0
    text = text.replace("−", "-")
    while pos < len(text.rstrip()):
        m = _TERM.match(text, pos)
        if not m or m.end() == pos:
            raise ValueError(f"cannot parse {text[pos:]!r}")
        sign = -1 if m.group(1) == "-" else 1
        num = int(m.group(2)) if m.group(2) else 1
        den = int(m.group(4)) if m.group(4) else 1
        c = mpq(sign * num, den)
        for w, x in from_assoc(tree_assoc(parse_bracket(m.group(3)))).items():
            p = acc.setdefault(len(w), {})
            p[w] = p.get(w, 0) + c * x
        pos = m.end()
    return LieSeries.from_parts(acc, alphabet)


# ---------------------------------------------------------------------------
# bracket, substitution, BCH


def bracket(f: LieSeries, g: LieSeries) -> LieSeries:
    if f.lo >= NEVER or g.lo >= NEVER:
        return LieSeries.zero(f.alphabet)
    lo = f.lo + g.lo

    def gen(n):
        acc: dict = {}
        for i in range(f.lo, n - g.lo + 1):
            a, b = f.part(i), g.part(n - i)
            if a and b:
                add_into(acc, K.bracket_parts(a, b))
        return clean(acc)

    return LieSeries(gen, f.alphabet, lo)


def evaluate_lie(poly: LieSeries, images: dict, bracket_fn, like: Series) -> Series:
    """Evaluate a Lie series at ``letter -> images[letter]`` inside another graded Lie algebra.

    ``bracket_fn`` is that algebra's bracket on series; ``like`` supplies the
    result kind.  Letters missing from ``images`` are sent to zero.
    """
    memo: dict[str, Series] = {}
    zero = like._like(lambda n: {}, NEVER)

    def image(w: str) -> Series:
        s = memo.get(w)
        if s is None:
            if len(w) == 1:
                s = images.get(w, zero)
            else:
                u, v = K.factor(w)
                a, b = image(u), image(v)
                s = zero if (a.lo >= NEVER or b.lo >= NEVER) else bracket_fn(a, b)
            memo[w] = s
        return s

    lo_img = min((s.lo for s in images.values()), default=NEVER)
    if lo_img >= NEVER:
        return zero

    def gen(n):
        acc: dict = {}
        for d in range(poly.lo, n // lo_img + 1):
            for w, c in poly.part(d).items():
                s = image(w)
                if s.lo <= n:
                    add_into(acc, s.part(n), c)
        return clean(acc)

    return like._like(gen, lo_img * poly.lo if poly.lo < NEVER else NEVER)


_LINEAR_CACHE: dict = {}


class LinearSub:
    """Substitution sending each letter to a degree-1 combination of letters.

    Word images are homogeneous and cached per mapping, so renamings,
    ``a -> b + c`` and ``a -> 0`` reuse work across all series they touch.
    """

    def __init__(self, mapping: dict):
        self.mapping = {a: clean(dict(v)) for a, v in mapping.items()}
        self.words: dict[str, dict] = {}

    @classmethod
    def get(cls, mapping: dict) -> "LinearSub":
        key = tuple(sorted((a, tuple(sorted(v.items()))) for a, v in mapping.items()))
        hit = _LINEAR_CACHE.get(key)
        if hit is None:
            if len(_LINEAR_CACHE) > 512:
                _LINEAR_CACHE.clear()
            hit = _LINEAR_CACHE[key] = cls(mapping)
        return hit

    def letter(self, a: str) -> dict:
        m = self.mapping.get(a)
        return {a: 1} if m is None else m

    def word(self, w: str) -> dict:
        hit = self.words.get(w)
        if hit is None:
            if len(w) == 1:
                hit = self.letter(w)
            else:
                u, v = K.factor(w)
                hit = K.bracket_parts(self.word(u), self.word(v))
            self.words[w] = hit
        return hit

    def apply_part(self, part: dict) -> dict:
        acc: dict = {}
        for w, c in part.items():
            add_into(acc, self.word(w), c)
        return clean(acc)


def linear(mapping: dict) -> dict:
    """Normalise ``{"a": "b"}`` / ``{"a": {"b": 1, "c": 1}}`` / ``{"a": 0}`` to letter dicts."""
    out = {}
    for a, v in mapping.items():
        if isinstance(v, str):
            if len(v) != 1:
                raise ValueError(f"image of {a!r} must be a letter or a dict, got {v!r}")
            out[a] = {v: mpq(1)}
        elif not v:
            out[a] = {}
        else:
            out[a] = {b: mpq(c) for b, c in v.items()}
    return out


def substitute_linear(f: LieSeries, mapping: dict, alphabet: str | None = None) -> LieSeries:
    sub = LinearSub.get(linear(mapping))
    out_alpha = alphabet if alphabet is not None else f.alphabet
    return LieSeries(lambda n: sub.apply_part(f.part(n)), out_alpha, f.lo)


def substitute(f: LieSeries, images: dict, alphabet: str | None = None) -> LieSeries:
    """Apply the Lie morphism ``letter -> images[letter]`` (identity on unlisted letters)."""
    out_alpha = alphabet if alphabet is not None else f.alphabet
    letters = set(f.alphabet) | set(images)
    full = {}
    for a in letters:
        img = images.get(a)
        full[a] = LieSeries.generator(a, out_alpha) if img is None else img
    like = LieSeries.zero(out_alpha)
    return evaluate_lie(f, full, bracket, like)


# --- BCH -------------------------------------------------------------------


def bernoulli(n: int) -> list:
    """Bernoulli numbers B_0..B_n with B_1 = -1/2."""
    B = [mpq(1)]
    for m in range(1, n + 1):
        B.append(-sum(comb(m + 1, k) * B[k] for k in range(m)) / mpq(m + 1))
    return B


_BCH: dict[int, dict] = {1: {"x": mpq(1), "y": mpq(1)}}
_BCH_W: dict[tuple[int, int], dict] = {(0, 0): {"x": mpq(1), "y": mpq(1)}}


def _bch_w(p: int, m: int) -> dict:
    """Sum over k_1+..+k_p = m of [Z_{k1},[...,[Z_{kp}, x+y]]]."""
    hit = _BCH_W.get((p, m))
    if hit is not None:
        return hit
    acc: dict = {}
    if p > 0 and m >= p:
        for k in range(1, m - p + 2):
            add_into(acc, K.bracket_parts(bch_xy_part(k), _bch_w(p - 1, m - k)))
    res = _BCH_W[(p, m)] = clean(acc)
    return res


def bch_xy_part(n: int) -> dict:
    """Degree-``n`` part of log(e^x e^y) in the Lyndon basis over ``x < y``.

    Uses the recursion
    (n+1) Z_{n+1} = [x-y, Z_n]/2 + sum_p B_{2p}/(2p)! sum [Z_{k1},[...,[Z_{k2p}, x+y]]].
    """
    hit = _BCH.get(n)
    if hit is not None:
        return hit
    if n < 1:
        return {}
    m = n - 1
    B = bernoulli(m + 1)
    acc: dict = {}
    add_into(acc, K.bracket_parts({"x": mpq(1), "y": mpq(-1)}, bch_xy_part(m)), mpq(1, 2))
    for p in range(1, m // 2 + 1):
        add_into(acc, _bch_w(2 * p, m), B[2 * p] / factorial(2 * p))
    res = _BCH[n] = {w: c / n for w, c in acc.items() if c}
    return res


BCH_XY = LieSeries(bch_xy_part, "xy", 1)


def bch(f: LieSeries, g: LieSeries) -> LieSeries:
    """log(e^f e^g), degree by degree."""
    return evaluate_lie(BCH_XY, {"x": f, "y": g}, bracket, f)


def bch_generic(f: Series, g: Series, bracket_fn) -> Series:
    """BCH in any graded Lie algebra given by its bracket on series."""
    return evaluate_lie(BCH_XY, {"x": f, "y": g}, bracket_fn, f)


# ---------------------------------------------------------------------------
# random series


def random_series(alphabet: str, seed: int, coeff_range: int = 2) -> LieSeries:
    """Deterministic random Lie series: integer coefficients in [-2, 2] per (seed, degree, word)."""
    alphabet = norm_alphabet(alphabet)

    def gen(n):
        out = {}
        for w in K.lyndon_words(alphabet, n):
            c = random.Random(f"{seed}:{n}:{w}").randint(-coeff_range, coeff_range)
            if c:
                out[w] = mpq(c)
        return out

    return LieSeries(gen, alphabet, 1)


def lie_from_dict(parts: dict, alphabet: str) -> LieSeries:
    return LieSeries.from_parts(parts, alphabet)


def dumps(f: LieSeries, d: int) -> str:
    return json.dumps(f.to_json(d), sort_keys=True)
