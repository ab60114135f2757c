"""End-to-end computations: tangle invariants, Kashiwara-Vergne solutions, the
twist equation, linearized dimensions, associators in A^w, the buckle, nu and
the rho symmetries.

Two-strand elements live on strands ``x`` and ``y``; three- and four-strand
ones on the digits ``1``..``4``.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from math import factorial

from gmpy2 import mpq

from . import _kernel as K
from .awcalc import (El, Es, LabelClash, convert_ls, convert_sl, es_dA_all, es_dDelta, es_deta,
                     es_dm, es_dS, es_dsigma, es_rename, es_stack, es_union, fresh_labels,
                     r_element, t_eta)
from .freelie import (LieSeries, bch, bernoulli, bracket, clean, lincomb, lyndon_basis, norm_alphabet,
                      substitute_linear)
from .scalars import (Q, Residual, SolveLog, UnknownRegistry, exact_rank, linear_solve,
                      series_solve, Unknown, AffineScalar)
from .tangential import TangentMap, ad_series, tb
from .wheels import CWSeries, canonical, cw_basis, cw_from_lie_word, cw_substitute_linear, div_u


class NonEmptyHeads(ValueError):
    """A strand that should carry no arrow heads does."""


# ---------------------------------------------------------------------------
# small building blocks


def lie(text: str, alphabet: str = "xy") -> LieSeries:
    from .freelie import parse_lie
    return parse_lie(text, alphabet)


def wheel(parts: dict, alphabet: str) -> CWSeries:
    """``{"xy": "-1/48"}`` -> the wheel series with those coefficients."""
    acc: dict = {}
    for w, c in parts.items():
        acc.setdefault(len(w), {})[w] = Q(c)
    return CWSeries.from_parts(acc, alphabet)


def fix(series, d: int):
    """Freeze a lazy series to its parts of degree <= d (drops the generator chain)."""
    parts = {n: series.part(n) for n in range(1, d + 1)}
    return series._like(lambda n: parts.get(n, {}), min((n for n, p in parts.items() if p), default=1 << 30))


def fix_es(e: Es, d: int) -> Es:
    comps = {a: fix(e.comp(a), d) for a in e.heads}
    return Es.make(comps, fix(e.omega, d), e.heads, e.tails)


def r_power(s, a: str = "x", b: str = "y", strands: str | None = None) -> Es:
    """R(a,b)^s = exp(s * arrow from a to b), in the split presentation."""
    s_ = norm_alphabet(strands if strands is not None else a + b)
    lam = TangentMap.from_comps({b: LieSeries.from_parts({1: {a: mpq(s)}}, s_)}, s_, s_)
    return convert_ls(El(lam, None, s_))


def theta_l(s, a: str = "x", b: str = "y") -> El:
    """Theta^s = e^{s t}, t the sum of the two opposite arrows between a and b."""
    s_ = norm_alphabet(a + b)
    comps = {a: LieSeries.from_parts({1: {b: mpq(s)}}, s_), b: LieSeries.from_parts({1: {a: mpq(s)}}, s_)}
    return El(TangentMap.from_comps(comps, s_, s_), None, s_)


def theta(s, a: str = "x", b: str = "y") -> Es:
    return convert_ls(theta_l(s, a, b))


def es_swap(e: Es, a: str = "x", b: str = "y") -> Es:
    return es_rename(e, {a: b, b: a})


def es_pad(e: Es, strands: str) -> Es:
    """Add idle strands so that ``e`` lives on ``strands``."""
    extra = "".join(a for a in strands if a not in e.heads)
    return es_union(e, Es.unit(extra)) if extra else e


def es_cable(e: Es, targets: list[str], strands: str | None = None) -> Es:
    """The superscript map: strand ``i`` of ``e`` (in label order) becomes the strands in ``targets[i]``.

    An empty target deletes the strand, several letters double it.  The result is
    padded with unit strands up to ``strands``.
    """
    src = e.heads
    if len(targets) != len(src):
        raise ValueError(f"need {len(src)} targets, got {len(targets)}")
    used = "".join(targets)
    if len(set(used)) != len(used):
        raise LabelClash(f"targets {targets} overlap")
    tmp = fresh_labels(len(src), src + used + (strands or ""))
    e = es_rename(e, dict(zip(src, tmp)))
    for t, tgt in zip(tmp, targets):
        if not tgt:
            e = es_deta(e, t)
            continue
        cur = t
        for k, c in enumerate(tgt[:-1]):
            rest = fresh_labels(1, e.heads + used + tmp)
            e = es_dDelta(e, cur, c, rest)
            cur = rest
        e = es_dsigma(e, cur, tgt[-1])
    return es_pad(e, norm_alphabet(strands)) if strands else e


def es_mul(*factors: Es) -> Es:
    out = factors[0]
    for f in factors[1:]:
        out = es_stack(out, f)
    return out


def es_residual_coeffs(a: Es, b: Es, n: int) -> list:
    out = []
    la, lb = a.lam.part(n), b.lam.part(n)
    out += [la.get(k, 0) - lb.get(k, 0) for k in set(la) | set(lb)]
    oa, ob = a.omega.part(n), b.omega.part(n)
    out += [oa.get(k, 0) - ob.get(k, 0) for k in set(oa) | set(ob)]
    return [c for c in out if c]


def es_diff_degrees(a: Es, b: Es, d: int) -> list[bool]:
    """Per-degree equality, degrees 0..d, like ``series_eq``."""
    return [True] + [not es_residual_coeffs(a, b, n) for n in range(1, d + 1)]


def top_cap(e: Es) -> CWSeries:
    """Wheels of ``e`` modulo the CP relation at the strand tops.

    Reversing every strand moves the tops to the bottom, where capping keeps
    exactly the wheel part of the split presentation.
    """
    return es_dA_all(e).omega


# ---------------------------------------------------------------------------
# Kashiwara-Vergne: V and Cap


def unknown_lie(reg: UnknownRegistry, family: str, alphabet: str) -> LieSeries:
    def gen(n):
        return clean({w: reg.coefficient(family, n, i, w) for i, w in enumerate(lyndon_basis(alphabet, n))})
    return LieSeries(gen, alphabet, 1)


def unknown_cw(reg: UnknownRegistry, family: str, alphabet: str) -> CWSeries:
    def gen(n):
        return clean({w: reg.coefficient(family, n, i, w) for i, w in enumerate(cw_basis(alphabet, n))})
    return CWSeries(gen, alphabet, 1)


def cap_element(kappa: CWSeries, strand: str) -> Es:
    """The capped strand: tree part 0, wheels ``kappa`` with ``x`` renamed to ``strand``."""
    return Es(TangentMap.zero(strand), cw_substitute_linear(kappa, {"x": strand}, strand), strand)


def r4_sides(V: Es) -> tuple[Es, Es]:
    """V * (R(x,z) // dDelta^x_xy)  versus  R(y,z) * R(x,z) * V, on strands x, y, z."""
    v = es_pad(V, "xyz")
    lhs = es_stack(v, es_dDelta(r_element(1, "x", "z"), "x", "x", "y"))
    rhs = es_mul(r_element(1, "y", "z", strands="xyz"), r_element(1, "x", "z", strands="xyz"), v)
    return lhs, rhs


def unitarity_sides(V: Es) -> tuple[Es, Es]:
    return es_stack(V, es_dA_all(V)), Es.unit("xy")


def cap_sides(V: Es, kappa: CWSeries) -> tuple[CWSeries, CWSeries]:
    lhs = es_stack(V, es_dDelta(cap_element(kappa, "x"), "x", "x", "y"))
    rhs = es_union(cap_element(kappa, "x"), cap_element(kappa, "y"))
    return top_cap(lhs), top_cap(rhs)


def _cw_diff(pair, n):
    pa, pb = pair[0].part(n), pair[1].part(n)
    return [c for c in (pa.get(k, 0) - pb.get(k, 0) for k in set(pa) | set(pb)) if c]


def _es_diff(pair, n):
    return es_residual_coeffs(pair[0], pair[1], n)


@dataclass
class KVSolution:
    V: Es
    cap: CWSeries
    log: SolveLog
    degree: int

    def to_json(self) -> dict:
        return {"V": self.V.to_json(self.degree), "Cap": self.cap.to_json(self.degree),
                "solve_log": [json.loads(e.to_json()) for e in self.log]}


def kv_system(reg: UnknownRegistry):
    """Register the unknown families and return ``(V(), kappa())`` builders.

    The families are registered as kappa, gamma, beta, alpha: pivots go to the
    earliest unknowns, so the free choices land on the last ones.
    """
    reg.add_family("κ", lambda n: cw_basis("x", n))
    reg.add_family("γ", lambda n: cw_basis("xy", n))
    reg.add_family("β", lambda n: lyndon_basis("xy", n))
    reg.add_family("α", lambda n: lyndon_basis("xy", n))

    def V():
        return Es.make({"x": unknown_lie(reg, "α", "xy"), "y": unknown_lie(reg, "β", "xy")},
                       unknown_cw(reg, "γ", "xy"), "xy", "xy")

    def kappa():
        return unknown_cw(reg, "κ", "x")

    return V, kappa


def kv_residuals(V, kappa) -> list[Residual]:
    """The R4 (shifted by one degree), unitarity and cap equations."""
    return [Residual(lambda: r4_sides(V()), _es_diff, 1, "R4"),
            Residual(lambda: unitarity_sides(V()), _es_diff, 0, "unitarity"),
            Residual(lambda: cap_sides(V(), kappa()), _cw_diff, 0, "cap")]


def solve_kv(degree: int) -> KVSolution:
    """Solve for V and Cap degree by degree; V_y starts with x/2."""
    if degree < 1:
        raise ValueError("degree must be >= 1")
    reg = UnknownRegistry()
    V, kappa = kv_system(reg)
    init = LieSeries.from_parts({1: {"x": mpq(1, 2)}}, "xy")
    residuals = kv_residuals(V, kappa)
    residuals.append(Residual(lambda: unknown_lie(reg, "β", "xy") - init,
                              lambda f, n: f.coefficients(n) if n == 1 else [], 0, "initial"))
    log = series_solve(residuals, reg, degree)
    return KVSolution(fix_es(V(), degree), fix(kappa(), degree), log, degree)


def kv_check(V: Es, cap: CWSeries, d: int) -> dict[str, list[bool]]:
    """Per-degree vanishing of the three KV residuals (R4 through degree d+1)."""
    out = {}
    r4 = r4_sides(V)
    out["R4"] = [True] + [not es_residual_coeffs(*r4, n + 1) for n in range(1, d + 1)]
    out["unitarity"] = es_diff_degrees(*unitarity_sides(V), d)
    cl, cr = cap_sides(V, cap)
    out["cap"] = [True] + [not _cw_diff((cl, cr), n) for n in range(1, d + 1)]
    return out


def cap_closed_form(degree: int) -> CWSeries:
    """sum a_n wheel(x^n) with sum a_n h^n = log((h/2)/sinh(h/2)) / 4."""
    # (h/2)/sinh(h/2) = 1/S with S = sum (h/2)^{2k}/(2k+1)!; log(1/S) = -log S
    N = degree
    s = [mpq(0)] * (N + 1)
    for k in range(0, N // 2 + 1):
        s[2 * k] = mpq(1, 2 ** (2 * k) * factorial(2 * k + 1))
    u = s[:]
    u[0] = mpq(0)  # S = 1 + u
    log_s = [mpq(0)] * (N + 1)
    power = [mpq(1)] + [mpq(0)] * N
    for m in range(1, N + 1):
        power = [sum(power[i] * u[n - i] for i in range(n + 1)) for n in range(N + 1)]
        sign = mpq((-1) ** (m + 1), m)
        log_s = [a + sign * b for a, b in zip(log_s, power)]
    parts = {n: {"x" * n: -log_s[n] / 4} for n in range(1, N + 1) if log_s[n]}
    return CWSeries.from_parts(parts, "x")


# ---------------------------------------------------------------------------
# log F, (f, g) and the classical KV equations


def log_f(V: Es) -> TangentMap:
    """Tree part of V in the lower-interlaced presentation, with x and y swapped."""
    lam = convert_sl(V).lam
    sw = {"x": "y", "y": "x"}
    return TangentMap.from_comps({b: substitute_linear(lam.comp(a), sw, "xy") for a, b in sw.items()},
                                 "xy", "xy")


def kv_fg(logF: TangentMap) -> tuple[LieSeries, LieSeries]:
    """(f, g) = ((e^{ad logF} - 1)/ad logF)(Euler(logF)), ad taken in the tangential bracket."""
    fg = ad_series(logF, logF.euler(), lambda k: mpq(1, factorial(k + 1)), tb)
    fg = TangentMap(fg.part, logF.heads, logF.alphabet, fg.lo)
    return fg.comp("x"), fg.comp("y")


def kv1_residual(f: LieSeries, g: LieSeries) -> LieSeries:
    """x + y - log(e^y e^x) - (1 - e^{-ad x}) f - (e^{ad y} - 1) g."""
    X, Y = LieSeries.generator("x", "xy"), LieSeries.generator("y", "xy")
    lhs = X + Y - bch(Y, X)
    a = ad_series(X, f, lambda k: 0 if k == 0 else -mpq(-1) ** k / factorial(k))
    b = ad_series(Y, g, lambda k: 0 if k == 0 else mpq(1, factorial(k)))
    return lincomb([(1, lhs), (-1, a), (-1, b)], lhs)


def _bernoulli_wheels(z: LieSeries, d: int) -> CWSeries:
    """sum_{k>=1} B_k/k! wheel(z^k), i.e. tr_u of (ad z/(e^{ad z}-1))(u) without the constant."""
    B = bernoulli(d + 1)
    terms = [(B[k] / factorial(k), cw_from_lie_word([z] * k, "xy")) for k in range(1, d + 1) if B[k]]
    return lincomb(terms, CWSeries.zero("xy"))


def kv2_residual(f: LieSeries, g: LieSeries, d: int) -> CWSeries:
    """div_x f + div_y g - tr_u(...)/2, with the symmetric (x, y) reading of the trace term."""
    X, Y = LieSeries.generator("x", "xy"), LieSeries.generator("y", "xy")
    Z = bch(X, Y)
    rhs = lincomb([(1, _bernoulli_wheels(X, d)), (1, _bernoulli_wheels(Y, d)),
                   (-1, _bernoulli_wheels(Z, d))], CWSeries.zero("xy"))
    lhs = div_u("x", f) + div_u("y", g)
    return lincomb([(1, lhs), (mpq(-1, 2), rhs)], lhs)


# ---------------------------------------------------------------------------
# tau and the twist equation


def tau(V: Es) -> Es:
    """R(x,y) * V^{21} * Theta^{-1/2}."""
    return es_mul(r_element(1, "x", "y"), es_swap(V), theta(mpq(-1, 2)))


def twist_residual(V: Es, d: int) -> list[bool]:
    return es_diff_degrees(tau(V), V, d)


# ---------------------------------------------------------------------------
# linearized KV


def _linearized_columns(n: int, twist: bool):
    """Images of the unknowns under A, B -> ([x,A]+[y,B], div_x A + div_y B).

    Without the twist the unknowns are the Lyndon coefficients of A then B; with
    it, B(x,y) = A(y,x) and only A is unknown.
    """
    basis = lyndon_basis("xy", n)
    cols = []

    def image(w, head):
        col: dict = {}
        for v, c in K.bracket_words(head, w).items():
            col[("L", v)] = col.get(("L", v), 0) + c
        for v, c in K.expand(w).items():
            if v[-1] == head:
                k = ("C", canonical(v))
                col[k] = col.get(k, 0) + c
        return col

    swapped = {w: substitute_linear(LieSeries.from_parts({n: {w: 1}}, "xy"), {"x": "y", "y": "x"}).part(n)
               for w in basis} if twist else None
    for w in basis:
        col = image(w, "x")
        if twist:
            for v, c in swapped[w].items():
                for k, x in image(v, "y").items():
                    col[k] = col.get(k, 0) + c * x
        cols.append(({k: v for k, v in col.items() if v}, ("A", w)))
    if not twist:
        cols += [(image(w, "y"), ("B", w)) for w in basis]
    return cols


def linearized_system(n: int, twist: bool = False):
    """Equations (affine scalars = 0) and unknown list for degree n."""
    cols = _linearized_columns(n, twist)
    unknowns = [Unknown(fam, n, i, w) for i, (_, (fam, w)) in enumerate(cols)]
    rows: dict = {}
    for u, (col, _) in zip(unknowns, cols):
        for k, c in col.items():
            rows.setdefault(k, {})[u] = mpq(c)
    eqs = [AffineScalar(0, r) for _, r in sorted(rows.items())]
    return eqs, unknowns


def linearized_dims(max_degree: int, with_twist: bool = False) -> list[int]:
    """Free-unknown count of the linearized KV system (optionally with the twist) per degree."""
    out = []
    for n in range(1, max_degree + 1):
        eqs, unknowns = linearized_system(n, with_twist)
        _, free = linear_solve(eqs, unknowns)
        out.append(len(free))
    return out


def linearized_rank_dims(max_degree: int, with_twist: bool = False) -> list[int]:
    """Same numbers through a plain rank computation (no solver bookkeeping)."""
    out = []
    for n in range(1, max_degree + 1):
        cols = _linearized_columns(n, with_twist)
        out.append(len(cols) - exact_rank([c for c, _ in cols]))
    return out


# ---------------------------------------------------------------------------
# Phi_V and sder


def phi_v(V: Es) -> Es:
    """(V//dA)^{12,3} (V//dA)^{1,2} V^{2,3} V^{1,23} on strands 1, 2, 3."""
    Va = es_dA_all(V)
    return es_mul(es_cable(Va, ["12", "3"], "123"), es_cable(Va, ["1", "2"], "123"),
                  es_cable(V, ["2", "3"], "123"), es_cable(V, ["1", "23"], "123"))


def pentagon_sides(phi: Es) -> tuple[Es, Es]:
    """Phi Phi^{1,23,4} Phi^{2,3,4}  versus  Phi^{12,3,4} Phi^{1,2,34}."""
    S = "1234"
    lhs = es_mul(es_cable(phi, ["1", "2", "3"], S), es_cable(phi, ["1", "23", "4"], S),
                 es_cable(phi, ["2", "3", "4"], S))
    rhs = es_mul(es_cable(phi, ["12", "3", "4"], S), es_cable(phi, ["1", "2", "34"], S))
    return lhs, rhs


def sder_residual(phi: TangentMap) -> LieSeries:
    """sum_i [x_i, phi_i]; zero exactly when phi kills the sum of the generators."""
    terms = [(1, bracket(LieSeries.generator(a, phi.alphabet), phi.comp(a))) for a in phi.heads]
    return lincomb(terms, LieSeries.zero(phi.alphabet))


# ---------------------------------------------------------------------------
# rho_2, rho_3 and V_2


def rho2(e: Es) -> Es:
    return Es(e.lam.degree_scale(-1), e.omega.degree_scale(-1), e.tails)


def rho3(e: Es) -> Es:
    """e // dS^y // dDelta^y_yz // dm^xz_x // swap(x, y)."""
    e = es_dS(e, "y")
    e = es_dDelta(e, "y", "y", "z")
    e = es_dm(e, "x", "z", "x")
    return es_swap(e)


def v1(V: Es) -> Es:
    return es_stack(r_power(mpq(-1, 2)), V)


def v2(V: Es, cap: CWSeries, cap_power: int = -2) -> Es:
    """V * Theta^{-1/4} * exp((wheel(x) - wheel(y))/12) * dDelta^x_xy(Cap^k).

    With our orientation conventions the rho_3-fixed point needs k = -2.
    """
    w = wheel({"x": "1/12", "y": "-1/12"}, "xy")
    capk = es_dDelta(cap_element(cap * cap_power, "x"), "x", "x", "y")
    return es_mul(V, theta(mpq(-1, 4)), Es(TangentMap.zero("xy"), w, "xy"), capk)


# ---------------------------------------------------------------------------
# associators in A^w: the buckle and nu


def z_buckle(phi) -> Es:
    """Z_B = (Phi^-1)^{13,2,4} Phi^{1,3,2} R^{23} Phi^-1 Phi^{12,3,4}, pushed to A^w by alpha.

    ``phi`` is the logarithm of an associator in t_3 (a DKSeries).
    """
    from .dk import dk_inverse, dk_to_es, r_log, sup
    P, Pi = dk_to_es(phi), dk_to_es(dk_inverse(phi))
    R = dk_to_es(sup(r_log(2, 1), "2,3", 4))
    S = "1234"
    return es_mul(es_cable(Pi, ["13", "2", "4"], S), es_cable(P, ["1", "3", "2"], S), R,
                  es_cable(Pi, ["1", "2", "3"], S), es_cable(P, ["12", "3", "4"], S))


def unitarize(lam: TangentMap, d: int) -> Es:
    """The unique (lam; omega) with V * V//dA = 1 in its wheel part, through degree d.

    dA fixes wheels, so the wheel residual at degree n is 2 omega_n plus terms of
    lower degree; omega is fixed one degree at a time.
    """
    lam = fix(lam, d)
    parts: dict = {}
    for n in range(1, d + 1):
        cur = Es(lam, CWSeries.from_parts(dict(parts), lam.alphabet), lam.alphabet)
        r = es_stack(cur, es_dA_all(cur)).omega.part(n)
        if r:
            parts[n] = {w: -c / 2 for w, c in r.items()}
    return Es(lam, CWSeries.from_parts(parts, lam.alphabet), lam.alphabet)


def v_from_phi(phi, d: int) -> Es:
    """Puncture strands 1 and 3 of Z_B; strands 2 and 4 must carry no heads.

    Heads 1, 3 and tails 2, 4 become strands x, y.  The puncture leaves the
    wheel part empty, so it is restored from the unitarity equation.
    """
    e = t_eta(t_eta(z_buckle(phi), "1"), "3")
    for h in "24":
        bad = [n for n in range(1, d + 1) if e.comp(h).part(n)]
        if bad:
            raise NonEmptyHeads(f"strand {h} carries heads in degree {bad[0]}")
    m = {"2": "x", "4": "y"}
    comps = {"x": substitute_linear(e.comp("1"), m, "xy"), "y": substitute_linear(e.comp("3"), m, "xy")}
    return unitarize(TangentMap.from_comps(comps, "xy", "xy"), d)


def nu_inverse(phi) -> Es:
    """alpha(nu^-1) = Phi // alpha // dS^2 // dm^{32}_2 // dm^{21}_1, on strand 1."""
    from .dk import dk_to_es
    e = es_dS(dk_to_es(phi), "2")
    e = es_dm(e, "3", "2", "2")
    return es_dm(e, "2", "1", "1")


def check_nu_cap4(nu_inv: Es, cap: CWSeries, d: int) -> list[bool]:
    """Is nu^-1 * Cap^4 the unit, degree by degree?"""
    strand = nu_inv.heads
    return es_diff_degrees(es_stack(nu_inv, cap_element(cap * 4, strand)), Es.unit(strand), d)


# ---------------------------------------------------------------------------
# tangles


class PlanError(ValueError):
    """A tangle plan that cannot be executed."""


@dataclass
class TanglePlan:
    """Crossings ``(sign, over, under)``, stitches ``(a, b, c)`` meaning dm^{ab}_c, then a renaming."""

    crossings: list
    stitches: list
    rename: dict = field(default_factory=dict)
    name: str = ""

    def validate(self) -> str:
        """Check the plan and return its final strand labels."""
        live: list[str] = []
        for sign, a, b in self.crossings:
            if sign not in (1, -1):
                raise PlanError(f"crossing sign must be +-1, got {sign!r}")
            for c in (a, b):
                if len(c) != 1:
                    raise PlanError(f"labels are single characters, got {c!r}")
                if c in live:
                    raise PlanError(f"label {c!r} introduced twice")
                live.append(c)
            if a == b:
                raise PlanError(f"crossing {a!r} over itself")
        for a, b, c in self.stitches:
            if a not in live or b not in live or a == b:
                raise PlanError(f"cannot stitch {a!r} to {b!r}")
            live.remove(a)
            live.remove(b)
            if c in live or len(c) != 1:
                raise PlanError(f"stitch target {c!r} clashes")
            live.append(c)
        for a in self.rename:
            if a not in live:
                raise PlanError(f"cannot rename missing strand {a!r}")
        out = [self.rename.get(a, a) for a in live]
        if len(set(out)) != len(out):
            raise PlanError("renaming merges strands")
        return "".join(sorted(out))

    def with_stitches(self, stitches: list) -> "TanglePlan":
        return TanglePlan(self.crossings, stitches, self.rename, self.name)


def tangle_invariant(plan: TanglePlan, degree: int | None = None) -> Es:
    """Z^w of the plan: the union of its crossings, stitched in order, then renamed.

    With ``degree`` the result is frozen at that degree.
    """
    plan.validate()
    e = None
    for sign, a, b in plan.crossings:
        r = r_element(sign, a, b)
        e = r if e is None else es_union(e, r)
    for a, b, c in plan.stitches:
        e = es_dm(e, a, b, c)
    e = es_rename(e, plan.rename)
    return fix_es(e, degree) if degree else e


def _chain(labels: str, backwards: bool = False) -> list:
    """Stitches joining ``labels`` in order into its first label."""
    if not backwards:
        return [(labels[0], b, labels[0]) for b in labels[1:]]
    return [(labels[k - 1], labels[k], labels[k - 1]) for k in range(len(labels) - 1, 0, -1)]


_SEG = "123456789abcdefghijklmnopqrstuvwABCDEFGHIJKLMNOPQRSTUVW"


def knot_817(order: int = 0) -> TanglePlan:
    """8_17 as a long knot: 8 crossings on arcs 1..16, then 1 to 2, 2 to 3, and so on.

    ``order`` 1 stitches from the far end instead.
    """
    arcs = [(-1, 12, 1), (-1, 2, 7), (-1, 8, 3), (-1, 4, 11),
            (1, 16, 5), (1, 6, 13), (1, 14, 9), (1, 10, 15)]
    crossings = [(s, _SEG[a - 1], _SEG[b - 1]) for s, a, b in arcs]
    return TanglePlan(crossings, _chain(_SEG[:16], backwards=bool(order)), {}, "8_17")


def braid_plan(word: list[int], n: int, order: int = 0, name: str = "") -> TanglePlan:
    """The closure-free tangle of a braid word (+-i crosses positions i and i+1).

    A positive letter puts the left strand over, a negative one the right strand.
    Each crossing starts a new segment on both of its strands; each component is
    stitched along its segments and renamed to its starting position 1..n.
    ``order`` 1 stitches the components in reverse, each from its far end.
    """
    pool = iter(_SEG[n:])
    pos = list(range(n))             # component at each position
    segs: list[list[str]] = [[] for _ in range(n)]
    crossings = []
    for g in word:
        i = abs(g) - 1
        if not 0 <= i < n - 1:
            raise PlanError(f"braid letter {g} out of range")
        left, right = pos[i], pos[i + 1]
        a, b = next(pool), next(pool)
        segs[left].append(a)
        segs[right].append(b)
        crossings.append((1, a, b) if g > 0 else (-1, b, a))
        pos[i], pos[i + 1] = right, left
    stitches, rename = [], {}
    comps = range(n - 1, -1, -1) if order else range(n)
    for k in comps:
        if not segs[k]:
            raise PlanError(f"component {k + 1} has no crossings")
        stitches += _chain("".join(segs[k]), backwards=bool(order))
        rename[segs[k][0]] = _SEG[k]
    return TanglePlan(crossings, stitches, rename, name)


def borromean(order: int = 0) -> TanglePlan:
    """The Borromean tangle as the pure braid (s1 s2^-1)^3."""
    return braid_plan([1, -2] * 3, 3, order, "borromean")


# ---------------------------------------------------------------------------
# JSON result envelopes


def envelope(inputs: dict, degree: int, result, log: SolveLog | None = None) -> dict:
    out = {"inputs": inputs, "degree": degree, "result": result}
    if log is not None:
        out["solve_log"] = [json.loads(e.to_json()) for e in log]
    return out
