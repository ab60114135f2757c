"""Pure-Python Lyndon-word kernel.

Words are ``str`` over single-character letters, ordered by code point.  The
compiled twin ``_lyndon_ext`` exposes the same functions; ``artifact._kernel``
picks one at import.
"""

from __future__ import annotations

_FACTOR: dict[str, tuple[str, str]] = {}
_BRACKET: dict[tuple[str, str], dict[str, int]] = {}
_EXPAND: dict[str, dict[str, int]] = {}
_WORDS: dict[tuple[str, int], list[str]] = {}


def is_lyndon(w: str) -> bool:
    return bool(w) and all(w < w[i:] + w[:i] for i in range(1, len(w)))


def lyndon_words(alphabet: str, n: int) -> list[str]:
    """All Lyndon words of length ``n`` over the sorted ``alphabet``, in lex order."""
    key = (alphabet, n)
    hit = _WORDS.get(key)
    if hit is not None:
        return hit
    k = len(alphabet)
    out = []
    if k and n >= 1:
        w = [-1]
        while w:
            w[-1] += 1
            m = len(w)
            if m == n:
                out.append("".join(alphabet[i] for i in w))
            while len(w) < n:
                w.append(w[len(w) - m])
            while w and w[-1] == k - 1:
                w.pop()
    _WORDS[key] = out
    return out


def factor(w: str) -> tuple[str, str]:
    """Standard factorization ``w = uv`` with ``v`` the longest proper Lyndon suffix."""
    hit = _FACTOR.get(w)
    if hit is None:
        for i in range(1, len(w)):
            if is_lyndon(w[i:]):
                hit = (w[:i], w[i:])
                break
        _FACTOR[w] = hit
    return hit


def bracket_words(u: str, v: str) -> dict[str, int]:
    """Structure constants of ``[P_u, P_v]`` in the Lyndon basis (``u < v`` not required)."""
    if u == v:
        return {}
    if u > v:
        return {w: -c for w, c in _bracket_lt(v, u).items()}
    return _bracket_lt(u, v)


def _bracket_lt(u: str, v: str) -> dict[str, int]:
    key = (u, v)
    hit = _BRACKET.get(key)
    if hit is not None:
        return hit
    if len(u) == 1 or factor(u)[1] >= v:
        res = {u + v: 1}
    else:
        # [[u1,u2],v] = [u1,[u2,v]] - [u2,[u1,v]]
        u1, u2 = factor(u)
        res: dict[str, int] = {}
        for w, c in bracket_words(u2, v).items():
            for w2, c2 in bracket_words(u1, w).items():
                res[w2] = res.get(w2, 0) + c * c2
        for w, c in bracket_words(u1, v).items():
            for w2, c2 in bracket_words(u2, w).items():
                res[w2] = res.get(w2, 0) - c * c2
        res = {w: c for w, c in res.items() if c}
    _BRACKET[key] = res
    return res


def bracket_parts(a: dict, b: dict) -> dict:
    """Bilinear bracket of two homogeneous Lyndon-basis combinations."""
    if a is b:
        return {}
    res: dict = {}
    get = res.get
    for u, x in a.items():
        for v, y in b.items():
            if u == v:
                continue
            xy = x * y
            for w, c in bracket_words(u, v).items():
                res[w] = get(w, 0) + xy * c
    return {w: c for w, c in res.items() if c}


def expand(w: str) -> dict[str, int]:
    """Associative expansion of the standard bracketing of a Lyndon word."""
    hit = _EXPAND.get(w)
    if hit is not None:
        return hit
    if len(w) == 1:
        res = {w: 1}
    else:
        u, v = factor(w)
        eu, ev = expand(u), expand(v)
        res = {}
        for a, x in eu.items():
            for b, y in ev.items():
                res[a + b] = res.get(a + b, 0) + x * y
                res[b + a] = res.get(b + a, 0) - x * y
        res = {k: c for k, c in res.items() if c}
    _EXPAND[w] = res
    return res


def cache_sizes() -> dict[str, int]:
    return {"bracket": len(_BRACKET), "factor": len(_FACTOR), "expand": len(_EXPAND)}


def clear_caches():
    _FACTOR.clear()
    _BRACKET.clear()
    _EXPAND.clear()
    _WORDS.clear()
