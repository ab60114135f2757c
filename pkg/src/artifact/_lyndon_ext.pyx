# cython: language_level=3
"""Compiled Lyndon-word kernel; same functions and caches as ``_lyndon_py``."""

cdef dict _FACTOR = {}
cdef dict _BRACKET = {}
cdef dict _EXPAND = {}
cdef dict _WORDS = {}


cpdef bint is_lyndon(str w):
    """Duval's test: ``w`` is one Lyndon factor of length ``len(w)``."""
    cdef Py_ssize_t n = len(w), i = 0, j = 1
    cdef Py_UCS4 a, b
    if n == 0:
        return False
    while j < n:
        a = w[i]
        b = w[j]
        if a == b:
            i += 1
        elif a < b:
            i = 0
        else:
            return False
        j += 1
    return i == 0


def lyndon_words(str alphabet, int n):
    key = (alphabet, n)
    hit = _WORDS.get(key)
    if hit is not None:
        return hit
    cdef int k = len(alphabet)
    cdef list out = []
    cdef list w
    cdef int m
    if k and n >= 1:
        w = [-1]
        while w:
            w[-1] += 1
            m = len(w)
            if m == n:
                out.append("".join([alphabet[i] for i in w]))
            while len(w) < n:
                w.append(w[len(w) - m])
            while w and w[-1] == k - 1:
                w.pop()
    _WORDS[key] = out
    return out


cpdef tuple factor(str w):
    hit = _FACTOR.get(w)
    cdef Py_ssize_t i
    if hit is None:
        for i in range(1, len(w)):
            if is_lyndon(w[i:]):
                hit = (w[:i], w[i:])
                break
        _FACTOR[w] = hit
    return hit


cpdef dict bracket_words(str u, str v):
    if u == v:
        return {}
    if u > v:
        return {w: -c for w, c in _bracket_lt(v, u).items()}
    return _bracket_lt(u, v)


cdef dict _bracket_lt(str u, str v):
    key = (u, v)
    cdef dict hit = _BRACKET.get(key)
    if hit is not None:
        return hit
    cdef dict res
    cdef str u1, u2
    cdef tuple f
    if len(u) == 1:
        res = {u + v: 1}
    else:
        f = factor(u)
        u1, u2 = f
        if u2 >= v:
            res = {u + v: 1}
        else:
            res = {}
            for w, c in bracket_words(u2, v).items():
                for w2, c2 in bracket_words(u1, w).items():
                    res[w2] = res.get(w2, 0) + c * c2
            for w, c in bracket_words(u1, v).items():
                for w2, c2 in bracket_words(u2, w).items():
                    res[w2] = res.get(w2, 0) - c * c2
            res = {w: c for w, c in res.items() if c}
    _BRACKET[key] = res
    return res


def bracket_parts(dict a, dict b):
    if a is b:
        return {}
    cdef dict res = {}
    cdef dict bw
    for u, x in a.items():
        for v, y in b.items():
            if u == v:
                continue
            bw = bracket_words(u, v)
            if not bw:
                continue
            xy = x * y
            for w, c in bw.items():
                res[w] = res.get(w, 0) + xy * c
    return {w: c for w, c in res.items() if c}


cpdef dict expand(str w):
    cdef dict hit = _EXPAND.get(w)
    if hit is not None:
        return hit
    cdef dict res, eu, ev
    if len(w) == 1:
        res = {w: 1}
    else:
        u, v = factor(w)
        eu = expand(u)
        ev = expand(v)
        res = {}
        for a, x in eu.items():
            for b, y in ev.items():
                res[a + b] = res.get(a + b, 0) + x * y
                res[b + a] = res.get(b + a, 0) - x * y
        res = {k: c for k, c in res.items() if c}
    _EXPAND[w] = res
    return res


def cache_sizes():
    return {"bracket": len(_BRACKET), "factor": len(_FACTOR), "expand": len(_EXPAND)}


def clear_caches():
    _FACTOR.clear()
    _BRACKET.clear()
    _EXPAND.clear()
    _WORDS.clear()
