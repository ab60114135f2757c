"""Exact scalars, affine unknowns and the degree-staged linear solver.

Rationals are ``gmpy2.mpq`` values.  An :class:`AffineScalar` is a rational
plus a finite linear combination of :class:`Unknown` symbols; products of two
non-constant affine scalars are refused, which is what keeps every solving
stage linear.  :class:`Poly` is a univariate polynomial whose coefficients are
any of the above, used for the auxiliary integration variables ``s`` and ``t``.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Callable, Iterable, NamedTuple

from gmpy2 import mpq

Rational = type(mpq())


class Inconsistent(ArithmeticError):
    """Elimination derived ``c = 0`` for a nonzero constant ``c``."""

    def __init__(self, message: str, equation=None):
        super().__init__(message)
        self.equation = equation


class NonlinearEntanglement(ArithmeticError):
    """Two uncommitted unknowns were multiplied together."""


class MisStaged(ArithmeticError):
    """A residual involved unknowns from a degree that is not being solved."""


def Q(x, d=None) -> Rational:
    """Coerce ints, strings like ``"-7/5760"`` or pairs to an exact rational."""
    if d is not None:
        return mpq(x, d)
    if isinstance(x, str):
        x = x.strip()
        if "/" in x:
            p, q = x.split("/")
            return mpq(int(p), int(q))
        return mpq(int(x))
    return mpq(x)


def q_str(x) -> str:
    """Serialize a rational as ``"p/q"`` (or ``"p"`` when ``q = 1``)."""
    return str(mpq(x))


class Unknown(NamedTuple):
    family: str
    degree: int
    index: int
    key: str = ""

    def __str__(self):
        return f"{self.family}[{self.key or self.index}]"


def _sort_key(u: Unknown):
    return (u.degree, u.family, u.index)


class AffineScalar:
    """``constant + sum(c_u * u)``; immutable, no zero terms stored."""

    __slots__ = ("const", "terms")

    def __init__(self, const=0, terms: dict | None = None):
        self.const = mpq(const)
        self.terms = {u: c for u, c in terms.items() if c} if terms else {}

    @classmethod
    def var(cls, u: Unknown) -> "AffineScalar":
        a = cls.__new__(cls)
        a.const = mpq(0)
        a.terms = {u: mpq(1)}
        return a

    @staticmethod
    def _raw(const, terms):
        a = AffineScalar.__new__(AffineScalar)
        a.const = const
        a.terms = terms
        return a

    def is_constant(self) -> bool:
        return not self.terms

    def __bool__(self):
        return bool(self.const) or bool(self.terms)

    def __eq__(self, other):
        if isinstance(other, AffineScalar):
            return self.const == other.const and self.terms == other.terms
        if isinstance(other, (int, Rational)):
            return not self.terms and self.const == other
        return NotImplemented

    def __hash__(self):
        return hash((self.const, frozenset(self.terms.items())))

    def __neg__(self):
        return AffineScalar._raw(-self.const, {u: -c for u, c in self.terms.items()})

    def __add__(self, other):
        if isinstance(other, AffineScalar):
            terms = dict(self.terms)
            for u, c in other.terms.items():
                v = terms.get(u, 0) + c
                if v:
                    terms[u] = v
                else:
                    terms.pop(u, None)
            return AffineScalar._raw(self.const + other.const, terms)
        if isinstance(other, (int, Rational)):
            return AffineScalar._raw(self.const + other, self.terms)
        return NotImplemented

    __radd__ = __add__

    def __sub__(self, other):
        if isinstance(other, (AffineScalar, int, Rational)):
            return self + (-other)
        return NotImplemented

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, Rational)):
            if not other:
                return mpq(0)
            return AffineScalar._raw(self.const * other,
                                     {u: c * other for u, c in self.terms.items()})
        if isinstance(other, AffineScalar):
            if not other.terms:
                return self * other.const
            if not self.terms:
                return other * self.const
            raise NonlinearEntanglement(f"product of {self} and {other}")
        return NotImplemented

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, (int, Rational)):
            return self * (mpq(1) / other)
        return NotImplemented

    def subs(self, values: dict) -> "AffineScalar | Rational":
        """Substitute known values for unknowns; collapse to a rational if possible."""
        const = self.const
        terms = {}
        for u, c in self.terms.items():
            if u in values:
                const += c * values[u]
            else:
                terms[u] = c
        return AffineScalar._raw(const, terms) if terms else const

    def __repr__(self):
        parts = [q_str(self.const)] if self.const or not self.terms else []
        parts += [f"{q_str(c)}*{u}" for u, c in sorted(self.terms.items(), key=lambda t: _sort_key(t[0]))]
        return "(" + " + ".join(parts) + ")"


def is_zero(c) -> bool:
    return not c


class Poly:
    """Polynomial in one auxiliary variable; ``coeffs[k]`` multiplies ``t**k``."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Iterable):
        cs = list(coeffs)
        while cs and not cs[-1]:
            cs.pop()
        self.coeffs = tuple(cs)

    @classmethod
    def monomial(cls, k: int, c=1) -> "Poly":
        return cls([0] * k + [mpq(c)])

    def __bool__(self):
        return bool(self.coeffs)

    def __eq__(self, other):
        if isinstance(other, Poly):
            return self.coeffs == other.coeffs
        if not other:
            return not self.coeffs
        return len(self.coeffs) == 1 and self.coeffs[0] == other

    def __hash__(self):
        return hash(self.coeffs)

    def __neg__(self):
        return Poly([-c for c in self.coeffs])

    def __add__(self, other):
        if isinstance(other, Poly):
            a, b = self.coeffs, other.coeffs
            if len(a) < len(b):
                a, b = b, a
            return Poly([a[i] + b[i] if i < len(b) else a[i] for i in range(len(a))])
        if isinstance(other, (int, Rational, AffineScalar)):
            if not other:
                return self
            cs = list(self.coeffs) or [mpq(0)]
            cs[0] = cs[0] + other
            return Poly(cs)
        return NotImplemented

    __radd__ = __add__

    def __sub__(self, other):
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, Poly):
            a, b = self.coeffs, other.coeffs
            if not a or not b:
                return Poly(())
            out = [0] * (len(a) + len(b) - 1)
            for i, x in enumerate(a):
                if not x:
                    continue
                for j, y in enumerate(b):
                    if y:
                        out[i + j] = out[i + j] + x * y
            return Poly(out)
        if isinstance(other, (int, Rational, AffineScalar)):
            if not other:
                return Poly(())
            return Poly([c * other for c in self.coeffs])
        return NotImplemented

    __rmul__ = __mul__

    def integrate(self) -> "Poly":
        """Antiderivative vanishing at 0."""
        return Poly([0] + [c * mpq(1, k + 1) for k, c in enumerate(self.coeffs)])

    def at(self, t=1):
        out = mpq(0)
        for c in reversed(self.coeffs):
            out = out * t + c
        return out

    def __repr__(self):
        return "Poly(" + ", ".join(repr(c) for c in self.coeffs) + ")"


def poly_at_one(c):
    return c.at(1) if isinstance(c, Poly) else c


# ---------------------------------------------------------------------------
# linear algebra


def linear_solve(equations: list, unknowns: list[Unknown]):
    """Solve ``eq == 0`` for every affine ``eq`` by Gauss-Jordan elimination.

    Pivots are the first nonzero coefficient in ``unknowns`` order, so the
    non-pivot (free) unknowns are the ones dependent on earlier columns.  Free
    unknowns are set to 0.  Returns ``(assignment, free)``.
    """
    col = {u: i for i, u in enumerate(unknowns)}
    pivots: dict[int, tuple[dict, Rational]] = {}  # column -> (row, const) normalised, fully reduced
    for eq in equations:
        if not isinstance(eq, AffineScalar):
            if eq:
                raise Inconsistent(f"{eq} = 0", eq)
            continue
        row = {}
        for u, c in eq.terms.items():
            if u not in col:
                raise ValueError(f"unknown {u} not listed")
            row[col[u]] = c
        const = eq.const
        # pivot rows hold no pivot columns, so one pass reduces the row fully
        for j in [j for j in row if j in pivots]:
            c = row.pop(j)
            prow, pconst = pivots[j]
            for k, v in prow.items():
                nv = row.get(k, 0) - c * v
                if nv:
                    row[k] = nv
                else:
                    row.pop(k, None)
            const -= c * pconst
        if not row:
            if const:
                raise Inconsistent(f"derived {const} = 0", eq)
            continue
        lead = min(row)
        inv = 1 / row[lead]
        row = {k: v * inv for k, v in row.items()}
        const = const * inv
        del row[lead]
        for j, (prow, pconst) in list(pivots.items()):
            c = prow.get(lead)
            if c:
                del prow[lead]
                for k, v in row.items():
                    nv = prow.get(k, 0) - c * v
                    if nv:
                        prow[k] = nv
                    else:
                        prow.pop(k, None)
                pivots[j] = (prow, pconst - c * const)
        pivots[lead] = (row, const)
    free = [u for i, u in enumerate(unknowns) if i not in pivots]
    assignment = {u: mpq(0) for u in free}
    for j, (row, const) in pivots.items():
        # u_j + sum row_k u_k + const = 0, free u_k = 0
        assignment[unknowns[j]] = -const
    return assignment, free


def rank_mod(rows: list[dict], p: int = (1 << 61) - 1) -> int:
    """Rank of a sparse integer/rational matrix modulo a prime (fast screening only)."""
    pivots: dict[int, dict] = {}
    rank = 0
    for r in rows:
        row = {}
        for k, v in r.items():
            v = mpq(v)
            x = int(v.numerator) * pow(int(v.denominator), -1, p) % p
            if x:
                row[k] = x
        while row:
            lead = min(row)
            if lead not in pivots:
                inv = pow(row[lead], -1, p)
                pivots[lead] = {k: v * inv % p for k, v in row.items()}
                rank += 1
                break
            c = row[lead]
            for k, v in pivots[lead].items():
                nv = (row.get(k, 0) - c * v) % p
                if nv:
                    row[k] = nv
                else:
                    row.pop(k, None)
    return rank


def exact_rank(rows: list[dict]) -> int:
    """Exact rank over the rationals by sparse row echelon reduction."""
    pivots: dict[int, dict] = {}
    for r in rows:
        row = {k: mpq(v) for k, v in r.items() if v}
        while row:
            lead = min(row)
            prow = pivots.get(lead)
            if prow is None:
                inv = 1 / row[lead]
                pivots[lead] = {k: v * inv for k, v in row.items()}
                break
            c = row[lead]
            for k, v in prow.items():
                nv = row.get(k, 0) - c * v
                if nv:
                    row[k] = nv
                else:
                    row.pop(k, None)
    return len(pivots)


# ---------------------------------------------------------------------------
# unknown registry and the staged solver


@dataclass
class Family:
    name: str
    basis: Callable[[int], list]  # degree -> ordered basis keys


class UnknownRegistry:
    """Owns the unknown families of one solve and their committed values."""

    def __init__(self):
        self.families: dict[str, Family] = {}
        self.values: dict[Unknown, Rational] = {}

    def add_family(self, name: str, basis: Callable[[int], list]) -> Family:
        if name in self.families:
            raise ValueError(f"family {name} already registered")
        fam = Family(name, basis)
        self.families[name] = fam
        return fam

    def unknowns(self, degree: int) -> list[Unknown]:
        out = []
        for name in self.families:  # registration order decides which unknowns end up free
            for i, key in enumerate(self.families[name].basis(degree)):
                out.append(Unknown(name, degree, i, str(key)))
        return out

    def coefficient(self, family: str, degree: int, index: int, key) -> "Rational | AffineScalar":
        u = Unknown(family, degree, index, str(key))
        v = self.values.get(u)
        return v if v is not None else AffineScalar.var(u)

    def commit(self, assignment: dict):
        for u, v in assignment.items():
            if isinstance(v, AffineScalar):
                if v.terms:
                    raise ValueError(f"cannot commit non-constant {u} = {v}")
                v = v.const
            self.values[u] = mpq(v)


@dataclass
class SolveEvent:
    degree: int
    solved: list[str] = field(default_factory=list)
    free: list[str] = field(default_factory=list)
    inconsistency: str | None = None

    def to_json(self) -> str:
        return json.dumps({"degree": self.degree, "unknowns-solved": self.solved,
                           "unknowns-set-free-to-zero": self.free,
                           "inconsistency-found": self.inconsistency}, sort_keys=True)


class SolveLog(list):
    """Ordered list of :class:`SolveEvent`; serializes as JSON lines."""

    def to_jsonl(self) -> str:
        return "".join(e.to_json() + "\n" for e in self)

    def free_unknowns(self) -> list[str]:
        return [u for e in self for u in e.free]


@dataclass
class Residual:
    """A graded quantity that must vanish.

    ``build`` returns a fresh object each stage (so nothing cached from an
    earlier, less-committed registry survives); ``coefficients(obj, n)`` lists
    its degree-``n`` coefficients.  At stage ``k`` the residual is evaluated in
    degree ``k + shift``.
    """
    build: Callable[[], object]
    coefficients: Callable[[object, int], list]
    shift: int = 0
    name: str = ""


def series_solve(residuals: list[Residual], registry: UnknownRegistry, max_degree: int,
                 start_degree: int = 1) -> SolveLog:
    log = SolveLog()
    if not residuals:
        return log
    for k in range(start_degree, max_degree + 1):
        unknowns = [u for u in registry.unknowns(k) if u not in registry.values]
        eqs = []
        for r in residuals:
            n = k + r.shift
            if n < 1:
                continue
            obj = r.build()
            for c in r.coefficients(obj, n):
                if not c:
                    continue
                if isinstance(c, AffineScalar):
                    stray = [u for u in c.terms if u.degree != k]
                    if stray:
                        raise MisStaged(f"residual {r.name} in degree {n} involves {stray[0]}")
                eqs.append(c)
        event = SolveEvent(k)
        try:
            assignment, free = linear_solve(eqs, unknowns)
        except Inconsistent as exc:
            event.inconsistency = str(exc)
            log.append(event)
            raise
        registry.commit(assignment)
        event.free = [str(u) for u in free]
        event.solved = [str(u) for u in unknowns if u not in free]
        log.append(event)
    return log
