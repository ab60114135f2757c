"""Acceptance criteria, one test each.

Every criterion prints a single ``criterion N: PASS|FAIL`` line (also
collected into the pytest summary).  Arithmetic is exact: every tolerance
below is zero unless it is a wall-clock budget in seconds.

Run just these with ``pytest tests/test_acceptance.py -v`` or as a script.
The degree 13..16 dimension stretch target is opt-in: ``ARTIFACT_STRETCH=1``.
"""

from __future__ import annotations

import os
import time

import pytest
from gmpy2 import mpq

from artifact import apps, checks, dk
from artifact.apps import es_diff_degrees
from artifact.awcalc import Es, convert_sl, random_es, t_eta
from artifact.freelie import bch_xy_part, parse_lie
from conftest import frac, golden
from oracles import bch_assoc, cap_coefficients

TOL = 0  # exact equality everywhere
BUDGET = {1: 300, 2: 600, 4: 600, 5: 1800, 6: 900, 11: 900, 12: 1200}  # seconds

RESULTS: list[str] = []


def report(n: int, checks_: dict[str, bool], extra: str = "") -> bool:
    ok = all(checks_.values())
    bad = [k for k, v in checks_.items() if not v]
    line = f"criterion {n:2d}: {'PASS' if ok else 'FAIL'}"
    line += f" ({len(checks_) - len(bad)}/{len(checks_)} checks, tol={TOL})"
    if bad:
        line += " failing: " + "; ".join(bad)
    if extra:
        line += f" [{extra}]"
    RESULTS.append(line)
    print(line)
    return ok


def timed(fn):
    t0 = time.perf_counter()
    out = fn()
    return out, time.perf_counter() - t0


def lie_matches(f, text: str, d: int) -> bool:
    g = parse_lie(text, "xy")
    return all(f.part(n) == g.part(n) for n in range(1, d + 1))


def wheel_table(omega, d: int) -> dict:
    return {w: frac(c) for n in range(1, d + 1) for w, c in omega.part(n).items()}


def zero_to(series, d: int) -> bool:
    return all(not series.part(n) for n in range(1, d + 1))


# ---------------------------------------------------------------------------


def test_criterion_01_bch():
    want = golden("bch.json")
    oracle = bch_assoc(4)
    from artifact.freelie import LieSeries, assoc_part
    z = LieSeries(bch_xy_part, "xy", 1)
    low = all({w: frac(c) for w, c in assoc_part(z, n).items()} == oracle[n] for n in range(1, 5))
    display = z.pretty(3) == want["display_degree_3"]
    part16, secs = timed(lambda: bch_xy_part(16))
    c = {"degrees 1-4 classical": low, "display": display,
         "degree 16 has 2181 Lyndon terms": len(part16) == want["degree_16_terms"],
         f"runtime <= {BUDGET[1]}s": secs <= BUDGET[1]}
    assert report(1, c, f"deg16 {len(part16)} terms in {secs:.1f}s")


def test_criterion_02_kv_solve():
    want = golden("kv_v.json")
    sol, secs = timed(lambda: apps.solve_kv(6))
    V = sol.V
    lam_l = convert_sl(V).lam
    wheels = {w: frac(c) for w, c in want["wheels"].items()}
    cap = {w: frac(c) for w, c in golden("cap.json")["wheels"].items()}
    c = {
        "V split x-trees deg<=4": lie_matches(V.comp("x"), want["V_split"]["x"], 4),
        "V split y-trees deg<=4": lie_matches(V.comp("y"), want["V_split"]["y"], 4),
        "V lower-interlaced trees deg<=4": all(lie_matches(lam_l.comp(a), want["V_lower"][a], 4) for a in "xy"),
        "V wheels deg<=4": wheel_table(V.omega, 4) == wheels,
        "Cap deg<=6": wheel_table(sol.cap, 6) == cap,
        "free coefficients exactly kappa[x], alpha[xyy]": sol.log.free_unknowns() == want["free"],
        f"runtime <= {BUDGET[2]}s": secs <= BUDGET[2],
    }
    assert report(2, c, f"free={sol.log.free_unknowns()}, {secs:.1f}s")


def test_criterion_03_cap_closed_form():
    sol = apps.solve_kv(8)
    ref = cap_coefficients(8)
    closed = apps.cap_closed_form(8)
    c = {}
    for n in range(1, 9):
        want = {"x" * n: ref[n]} if n in ref else {}
        c[f"degree {n}"] = ({w: frac(v) for w, v in sol.cap.part(n).items()} == want
                            and {w: frac(v) for w, v in closed.part(n).items()} == want)
    assert report(3, c)


def test_criterion_04_logf_fg():
    want = golden("logf_fg.json")

    def run():
        sol = apps.solve_kv(8)
        lf = apps.log_f(sol.V)
        f, g = apps.kv_fg(lf)
        return lf, f, g, apps.kv1_residual(f, g), apps.kv2_residual(f, g, 8)

    (lf, f, g, r1, r2), secs = timed(run)
    c = {"log F deg<=4": all(lie_matches(lf.comp(a), want["logF"][a], 4) for a in "xy"),
         "f deg<=4": lie_matches(f, want["f"], 4), "g deg<=4": lie_matches(g, want["g"], 4),
         "KV1 residual through 8": zero_to(r1, 8), "KV2 residual through 8": zero_to(r2, 8),
         f"runtime <= {BUDGET[4]}s": secs <= BUDGET[4]}
    assert report(4, c, f"{secs:.1f}s")


def test_criterion_05_linearized_dims():
    want = golden("dims.json")["dims"][:12]
    plain, secs_a = timed(lambda: apps.linearized_dims(12))
    twisted, secs_b = timed(lambda: apps.linearized_dims(12, with_twist=True))
    c = {"without twist 1..12": plain == want, "with twist 1..12": twisted == want,
         "identical lists": plain == twisted}
    assert report(5, c, f"{plain}, {secs_a + secs_b:.1f}s; stretch 13..16 is a separate opt-in test")


@pytest.mark.slow
@pytest.mark.skipif(os.environ.get("ARTIFACT_STRETCH") != "1", reason="stretch target, set ARTIFACT_STRETCH=1")
def test_criterion_05_stretch():
    want = golden("dims.json")["dims"]
    t0 = time.perf_counter()
    got = {}
    for tw in (False, True):
        for n in range(13, 17):
            eqs, u = apps.linearized_system(n, tw)
            got[(n, tw)] = len(apps.linear_solve(eqs, u)[1])
    secs = time.perf_counter() - t0
    c = {f"degree {n}{' twist' if tw else ''}": v == want[n - 1] for (n, tw), v in got.items()}
    c[f"runtime <= {BUDGET[5]}s"] = secs <= BUDGET[5]
    assert report(5, c, f"stretch {secs:.0f}s")


def test_criterion_06_associator():
    (phi, log), secs = timed(lambda: dk.solve_associator(6))
    t = lambda i, j: dk.DKSeries.generator(i, j, 3)
    c = {"degree 2 is [t13,t23]/24": phi.part(2) == (dk.dk_bracket(t(1, 3), t(2, 3)) * mpq(1, 24)).part(2),
         "pentagon": zero_to(dk.pentagon_residual(phi), 6),
         "unitarity": zero_to(dk.unitarity_residual(phi), 6),
         "hexagon +": zero_to(dk.hexagon_residual(phi, 1), 6),
         "hexagon -": zero_to(dk.hexagon_residual(phi, -1), 6),
         f"runtime <= {BUDGET[6]}s": secs <= BUDGET[6]}
    assert report(6, c, f"{secs:.1f}s")


def test_criterion_07_phi_v():
    sol = apps.solve_kv(4)
    P = apps.phi_v(sol.V)
    phi0, _ = dk.solve_associator(4)
    c = {"pentagon through 4": all(es_diff_degrees(*apps.pentagon_sides(P), 4)),
         "sder through 4": zero_to(apps.sder_residual(convert_sl(P).lam), 4),
         "alpha(Phi_0) = Phi_V through 4": all(es_diff_degrees(dk.dk_to_es(phi0), P, 4))}
    assert report(7, c)


def test_criterion_08_buckle():
    d = 6
    phi0, _ = dk.solve_associator(d)
    sol = apps.solve_kv(d)
    punctured = t_eta(t_eta(apps.z_buckle(phi0), "1"), "3")
    W = apps.v_from_phi(phi0, d)
    res = apps.kv_check(W, sol.cap, d)
    c = {"strands 2 and 4 head-free": all(zero_to(punctured.comp(h), d) for h in "24"),
         "R4 through 6": all(res["R4"]), "unitarity through 6": all(res["unitarity"]),
         "cap through 6": all(res["cap"]),
         "equals solve_kv V through 6": all(es_diff_degrees(W, sol.V, d))}
    assert report(8, c, "wheels restored by unitarity")


def test_criterion_09_symmetries():
    sol = apps.solve_kv(6)
    V1, V2 = apps.v1(sol.V), apps.v2(sol.V, sol.cap)
    rho3_cube = all(all(es_diff_degrees(apps.rho3(apps.rho3(apps.rho3(xi))), xi, 6))
                    for xi in (random_es("xy", s) for s in range(3)))
    c = {"twist residual through 6": all(apps.twist_residual(sol.V, 6)),
         "rho2(R^-1/2 V) fixed through 6": all(es_diff_degrees(apps.rho2(V1), V1, 6)),
         "rho3^3 = id through 6": rho3_cube,
         "rho3(V2) = V2 through 4": all(es_diff_degrees(apps.rho3(V2), V2, 4))}
    assert report(9, c, "V2 uses Cap^-2")


def test_criterion_10_nu():
    phi0, _ = dk.solve_associator(6)
    sol = apps.solve_kv(6)
    c = {"nu^-1 Cap^4 = 1 through 6": all(apps.check_nu_cap4(apps.nu_inverse(phi0), sol.cap, 6))}
    assert report(10, c)


def test_criterion_11_property_suite():
    rows, secs = timed(lambda: {**checks.property_suite(0, 8), **checks.property_suite(1, 6)})
    c = {k: all(v) for k, v in rows.items()}
    c[f"runtime <= {BUDGET[11]}s"] = secs <= BUDGET[11]
    assert report(11, c, f"{secs:.1f}s")


def test_criterion_12_tangles():
    (k0, k1), s1 = timed(lambda: (apps.tangle_invariant(apps.knot_817(0), 6),
                                   apps.tangle_invariant(apps.knot_817(1), 6)))
    (b0, b1), s2 = timed(lambda: (apps.tangle_invariant(apps.borromean(0), 4),
                                   apps.tangle_invariant(apps.borromean(1), 4)))
    c = {"8_17 stitch orders agree through 6": all(es_diff_degrees(k0, k1, 6)),
         "borromean stitch orders agree through 4": all(es_diff_degrees(b0, b1, 4)),
         f"8_17 within {BUDGET[12]}s": s1 <= BUDGET[12], f"borromean within {BUDGET[12]}s": s2 <= BUDGET[12]}
    assert report(12, c, f"{s1:.1f}s, {s2:.1f}s")


if __name__ == "__main__":
    import sys
    sys.exit(pytest.main([__file__, "-q", "-s"]))
