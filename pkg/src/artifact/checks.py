"""Invariant checks on seeded random inputs.

Each check returns per-degree booleans (index 0 is degree 0 and always True),
so callers can report the first failing degree.
"""

from __future__ import annotations

from .awcalc import (El, Es, convert_ls, convert_sl, el_dA_all, el_dDelta, el_deta, el_dS_all,
                     el_dsigma, el_mul, es_dA_all, es_dDelta, es_deta, es_dm, es_dS_all, es_dsigma,
                     es_stack, h_m, r_element, random_el, random_es, t_ha)
from .freelie import random_series
from .tangential import gamma, lambda_, tangent_eq
from .wheels import random_cw


def _el_eq(a: El, b: El, d: int) -> list[bool]:
    return a.eq(b, d)


def el_mul_assoc(seed: int, d: int) -> list[bool]:
    a, b, c = (random_el("xy", seed + k) for k in range(3))
    return _el_eq(el_mul(el_mul(a, b), c), el_mul(a, el_mul(b, c)), d)


def dA_involution(seed: int, d: int) -> list[bool]:
    e = random_el("xy", seed)
    return _el_eq(el_dA_all(el_dA_all(e)), e, d)


def dA_antihom(seed: int, d: int) -> list[bool]:
    a, b = random_el("xy", seed), random_el("xy", seed + 1)
    return _el_eq(el_dA_all(el_mul(a, b)), el_mul(el_dA_all(b), el_dA_all(a)), d)


def yang_baxter(d: int) -> list[bool]:
    def R(a, b):
        return r_element(1, a, b, "l", "123")
    lhs = el_mul(el_mul(R("1", "2"), R("1", "3")), R("2", "3"))
    rhs = el_mul(el_mul(R("2", "3"), R("1", "3")), R("1", "2"))
    return _el_eq(lhs, rhs, d)


def haction(seed: int, d: int) -> list[bool]:
    """hm^{xy}_z // tha^{uz} = tha^{ux} // tha^{uy} // hm^{xy}_z."""
    comps = {h: random_series("uv", f"{seed}/{h}") for h in "xy"}
    e = Es.make(comps, random_cw("uv", seed), "xy", "uv")
    lhs = t_ha(h_m(e, "x", "y", "z"), "u", "z")
    rhs = h_m(t_ha(t_ha(e, "u", "x"), "u", "y"), "x", "y", "z")
    return lhs.eq(rhs, d)


def dm_meta_assoc(seed: int, d: int) -> list[bool]:
    """dm^{ab}_a // dm^{ac}_a = dm^{bc}_b // dm^{ab}_a."""
    e = random_es("abc", seed)
    lhs = es_dm(es_dm(e, "a", "b", "a"), "a", "c", "a")
    rhs = es_dm(es_dm(e, "b", "c", "b"), "a", "b", "a")
    return lhs.eq(rhs, d)


def gamma_lambda_inverse(seed: int, d: int) -> list[bool]:
    e = random_es("xy", seed, with_wheels=False)
    lam = e.lam
    there = tangent_eq(lambda_(gamma(lam)), lam, d)
    back = tangent_eq(gamma(lambda_(lam)), lam, d)
    return [a and b for a, b in zip(there, back)]


def cross_presentation(seed: int, d: int) -> dict[str, list[bool]]:
    """convert_ls(op_l(e)) = op_s(convert_ls(e)) for the A^w(S)-level operations."""
    a, b = random_el("xyz", seed), random_el("xyz", seed + 1)
    sa, sb = convert_ls(a), convert_ls(b)
    pairs = {
        "mul": (el_mul(a, b), es_stack(sa, sb)),
        "eta": (el_deta(a, "z"), es_deta(sa, "z")),
        "Delta": (el_dDelta(a, "z", "z", "w"), es_dDelta(sa, "z", "z", "w")),
        "sigma": (el_dsigma(a, "z", "w"), es_dsigma(sa, "z", "w")),
        "A": (el_dA_all(a), es_dA_all(sa)),
        "S": (el_dS_all(a), es_dS_all(sa)),
    }
    return {k: convert_ls(l).eq(s, d) for k, (l, s) in pairs.items()}


def es_to_el_roundtrip(seed: int, d: int) -> list[bool]:
    e = random_es("xy", seed)
    return convert_ls(convert_sl(e)).eq(e, d)


def property_suite(seed: int, d: int) -> dict[str, list[bool]]:
    """The calculus laws through degree ``d``; cross-presentation dominates the cost."""
    out = {
        "el_mul associativity": el_mul_assoc(seed, d),
        "dA involution": dA_involution(seed, d),
        "dA anti-homomorphism": dA_antihom(seed, d),
        "Yang-Baxter (E_l)": yang_baxter(d),
        "haction identity": haction(seed, d),
        "dm meta-associativity": dm_meta_assoc(seed, d),
        "Gamma/Lambda inverse": gamma_lambda_inverse(seed, d),
    }
    for k, v in cross_presentation(seed, d).items():
        out[f"cross-presentation {k}"] = v
    return out


__all__ = ["el_mul_assoc", "dA_involution", "dA_antihom", "yang_baxter", "haction", "dm_meta_assoc",
           "gamma_lambda_inverse", "cross_presentation", "es_to_el_roundtrip", "property_suite"]
