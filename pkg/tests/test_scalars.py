import json

import pytest
from gmpy2 import mpq

from artifact.scalars import (AffineScalar, Inconsistent, MisStaged, NonlinearEntanglement, Poly, Q,
                              Residual, SolveLog, Unknown, UnknownRegistry, exact_rank, linear_solve,
                              q_str, rank_mod, series_solve)

a, b, c = (Unknown("u", 1, i, k) for i, k in enumerate("abc"))
A, B, C = (AffineScalar.var(u) for u in (a, b, c))


def test_rational_coercion_roundtrip():
    assert Q("-7/5760") == mpq(-7, 5760)
    assert Q(3) == 3 and Q(2, 6) == mpq(1, 3)
    assert q_str(Q("10/4")) == "5/2"
    assert q_str(Q("4/2")) == "2"


def test_affine_arithmetic():
    e = 2 * A - B / 2 + 3
    assert e.subs({a: 1, b: 4}) == 3
    assert (A - A) == 0 and not (A - A)
    assert (A * 2) * mpq(1, 2) == A


def test_nonlinear_product_refused():
    with pytest.raises(NonlinearEntanglement):
        A * B


def test_poly_integrate_and_evaluate():
    p = Poly([1, 2])  # 1 + 2t
    assert p.integrate().at(1) == 2
    assert (p * p).at(1) == 9


def test_linear_solve_unique():
    sol, free = linear_solve([A + B - 3, A - B - 1], [a, b])
    assert sol == {a: 2, b: 1} and free == []


def test_linear_solve_free_is_the_later_unknown():
    sol, free = linear_solve([A + B - 1], [a, b, c])
    assert free == [b, c]
    assert sol[a] == 1 and sol[b] == 0


def test_linear_solve_inconsistent():
    with pytest.raises(Inconsistent):
        linear_solve([A + B - 1, 2 * A + 2 * B - 3], [a, b])
    with pytest.raises(Inconsistent):
        linear_solve([AffineScalar(5)], [a])


def test_linear_solve_rejects_unlisted_unknown():
    with pytest.raises(ValueError):
        linear_solve([A + C], [a])


def test_ranks_agree():
    rows = [{0: 1, 1: 2}, {0: 2, 1: 4}, {2: mpq(1, 3)}]
    assert exact_rank(rows) == rank_mod(rows) == 2


def _registry():
    reg = UnknownRegistry()
    reg.add_family("p", lambda n: ["k"])
    reg.add_family("q", lambda n: ["k"])
    return reg


def test_series_solve_logs_and_commits():
    reg = _registry()

    def build():
        return {n: [reg.coefficient("p", n, 0, "k") - n, reg.coefficient("q", n, 0, "k")
                    + reg.coefficient("p", n, 0, "k")] for n in (1, 2)}

    log = series_solve([Residual(build, lambda o, n: o[n], 0, "r")], reg, 2)
    assert [e.degree for e in log] == [1, 2]
    assert reg.values[Unknown("q", 2, 0, "k")] == -2
    row = json.loads(log[0].to_json())
    assert set(row) == {"degree", "unknowns-solved", "unknowns-set-free-to-zero", "inconsistency-found"}
    assert isinstance(log, SolveLog) and log.free_unknowns() == []


def test_series_solve_reports_inconsistency():
    reg = _registry()

    def build():
        p = reg.coefficient("p", 1, 0, "k")
        return [p - 1, p - 2]

    with pytest.raises(Inconsistent):
        series_solve([Residual(build, lambda o, n: o, 0, "bad")], reg, 1)


def test_series_solve_detects_misstaging():
    reg = _registry()
    res = Residual(lambda: [reg.coefficient("p", 2, 0, "k")], lambda o, n: o, 0, "early")
    with pytest.raises(MisStaged):
        series_solve([res], reg, 1)


def test_registry_refuses_duplicate_family():
    reg = _registry()
    with pytest.raises(ValueError):
        reg.add_family("p", lambda n: [])
