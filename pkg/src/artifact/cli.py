"""Command line front end (``wcalc``).

Exit codes: 0 success, 1 bad input or a failed check, 2 solver inconsistency.
Results go to stdout (or ``--output``), usage and logs to stderr.
"""

from __future__ import annotations

import json
import sys
import time
from functools import reduce

import click

from . import apps, dk
from .freelie import LieSeries, bch, norm_alphabet
from .scalars import Inconsistent, MisStaged, NonlinearEntanglement
from .tangential import TangentMap, gamma, lambda_


class CheckFailed(Exception):
    """A verified property did not hold."""


def _common(f):
    f = click.option("--expect", type=click.Path(exists=True, dir_okay=False),
                     help="Compare the output with this file; exit 1 on mismatch.")(f)
    f = click.option("--output", "-o", type=click.Path(dir_okay=False), help="Write the result here.")(f)
    f = click.option("--format", "fmt", type=click.Choice(["pretty", "json"]), default="pretty",
                     show_default=True)(f)
    f = click.option("--seed", type=int, default=0, show_default=True)(f)
    f = click.option("--degree", type=click.IntRange(min=1), default=4, envvar="WCALC_DEGREE",
                     show_default=True, help="Working degree (env WCALC_DEGREE).")(f)
    return f


def _emit(opts: dict, pretty: str, obj) -> int:
    text = pretty if opts["fmt"] == "pretty" else json.dumps(obj, sort_keys=True, indent=1)
    text = text.rstrip("\n") + "\n"
    if opts.get("output"):
        with open(opts["output"], "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        click.echo(text, nl=False)
    if opts.get("expect"):
        with open(opts["expect"], encoding="utf-8") as fh:
            want = fh.read().rstrip("\n") + "\n"
        if want != text:
            click.echo(f"output differs from {opts['expect']}", err=True)
            return 1
    return 0


def _flags(rows: dict[str, list[bool]]) -> tuple[str, dict, bool]:
    """Render named per-degree checks; returns (text, json, all ok)."""
    lines, ok = [], True
    for name, vals in rows.items():
        good = all(vals)
        ok &= good
        bad = next((n for n, v in enumerate(vals) if not v), None)
        lines.append(f"{name}: {'ok' if good else f'FAILS at degree {bad}'} (through degree {len(vals) - 1})")
    return "\n".join(lines), {k: v for k, v in rows.items()}, ok


def _checked(opts: dict, text: str, obj, ok: bool) -> int:
    rc = _emit(opts, text, obj)
    return rc or (0 if ok else 1)


def _zero_degrees(series, d: int) -> list[bool]:
    return [True] + [not series.part(n) for n in range(1, d + 1)]


@click.group(context_settings={"help_option_names": ["-h", "--help"]})
def cli():
    """Exact computations with free Lie algebras, wheels and A^w."""


# ---------------------------------------------------------------------------
# calculus


@cli.command("bch")
@click.option("--gens", default="x,y", show_default=True, help="Comma separated generators.")
@_common
def bch_cmd(gens, **opts):
    """log(e^a e^b ...) of single-letter generators."""
    letters = [g.strip() for g in gens.split(",") if g.strip()]
    if not letters or any(len(g) != 1 for g in letters):
        raise click.BadParameter("generators are single letters", param_hint="--gens")
    alpha = norm_alphabet(letters)
    z = reduce(bch, [LieSeries.generator(a, alpha) for a in letters])
    d = opts["degree"]
    return _emit(opts, z.pretty(d), apps.envelope({"gens": letters}, d, z.to_json(d)))


def _tangent(specs: tuple[str, ...]) -> TangentMap:
    spec = {}
    for s in specs:
        head, sep, body = s.partition("=")
        if not sep or len(head.strip()) != 1:
            raise click.BadParameter(f"expected a=<Lie series>, got {s!r}", param_hint="--lam")
        spec[head.strip()] = body
    letters = set(spec) | {c for body in spec.values() for c in body if c.isalnum() and not c.isdigit()}
    return TangentMap.parse(spec, norm_alphabet(letters))


def _tangent_cmd(fn, lam_specs, opts):
    lam = _tangent(lam_specs)
    out = fn(lam)
    d = opts["degree"]
    return _emit(opts, out.pretty(d), apps.envelope({"lam": list(lam_specs)}, d, out.to_json(d)))


@cli.command("gamma")
@click.option("--lam", "lam_specs", multiple=True, required=True, help="Component, e.g. 'y=[xy]/2'.")
@_common
def gamma_cmd(lam_specs, **opts):
    """Gamma of a tangent map (lower-interlaced to split trees)."""
    return _tangent_cmd(gamma, lam_specs, opts)


@cli.command("lambda")
@click.option("--lam", "lam_specs", multiple=True, required=True, help="Component, e.g. 'y=[xy]/2'.")
@_common
def lambda_cmd(lam_specs, **opts):
    """Lambda of a tangent map (split to lower-interlaced trees)."""
    return _tangent_cmd(lambda_, lam_specs, opts)


# ---------------------------------------------------------------------------
# Kashiwara-Vergne


@cli.group()
def kv():
    """Kashiwara-Vergne solutions."""


@kv.command("solve")
@_common
def kv_solve(**opts):
    d = opts["degree"]
    sol = apps.solve_kv(d)
    text = "\n".join([f"V = {sol.V.pretty(d)}", f"Cap = {sol.cap.pretty(d)}",
                      "free: " + (", ".join(sol.log.free_unknowns()) or "none")])
    res = {"V": sol.V.to_json(d), "Cap": sol.cap.to_json(d)}
    return _emit(opts, text, apps.envelope({}, d, res, sol.log))


@kv.command("fg")
@_common
def kv_fg_cmd(**opts):
    """log F and (f, g) from the computed V, with the KV1/KV2 residual checks."""
    d = opts["degree"]
    sol = apps.solve_kv(d)
    logF = apps.log_f(sol.V)
    f, g = apps.kv_fg(logF)
    rows = {"KV1": _zero_degrees(apps.kv1_residual(f, g), d),
            "KV2": _zero_degrees(apps.kv2_residual(f, g, d), d)}
    ftext, fobj, ok = _flags(rows)
    text = "\n".join([f"log F = {logF.pretty(d)}", f"f = {f.pretty(d)}", f"g = {g.pretty(d)}", ftext])
    res = {"logF": logF.to_json(d), "f": f.to_json(d), "g": g.to_json(d), "checks": fobj}
    return _checked(opts, text, apps.envelope({}, d, res), ok)


@kv.command("dims")
@click.option("--max-degree", type=click.IntRange(min=1), required=True)
@click.option("--twist/--no-twist", default=False, show_default=True)
@_common
def kv_dims(max_degree, twist, **opts):
    """Dimensions of the linearized KV solution spaces, degree by degree."""
    dims = apps.linearized_dims(max_degree, twist)
    return _emit(opts, " ".join(map(str, dims)),
                 apps.envelope({"max_degree": max_degree, "twist": twist}, max_degree, dims))


@kv.command("twist-check")
@_common
def kv_twist(**opts):
    d = opts["degree"]
    sol = apps.solve_kv(d)
    text, obj, ok = _flags({"twist": apps.twist_residual(sol.V, d)})
    return _checked(opts, text, apps.envelope({}, d, obj), ok)


# ---------------------------------------------------------------------------
# associators


@cli.group()
def assoc():
    """Drinfel'd associators in t_3."""


@assoc.command("solve")
@_common
def assoc_solve(**opts):
    d = opts["degree"]
    phi, log = dk.solve_associator(d)
    text = f"log Phi = {phi.pretty(d)}\nfree: " + (", ".join(log.free_unknowns()) or "none")
    return _emit(opts, text, apps.envelope({}, d, phi.to_json(d), log))


@assoc.command("check")
@_common
def assoc_check(**opts):
    d = opts["degree"]
    phi, _ = dk.solve_associator(d)
    rows = {"pentagon": _zero_degrees(dk.pentagon_residual(phi), d),
            "unitarity": _zero_degrees(dk.unitarity_residual(phi), d),
            "hexagon+": _zero_degrees(dk.hexagon_residual(phi, 1), d),
            "hexagon-": _zero_degrees(dk.hexagon_residual(phi, -1), d)}
    text, obj, ok = _flags(rows)
    return _checked(opts, text, apps.envelope({}, d, obj), ok)


@cli.command("phiv")
@_common
def phiv(**opts):
    """Phi_V from the computed V, with pentagon, sder and alpha(Phi_0) comparisons."""
    d = opts["degree"]
    sol = apps.solve_kv(d)
    P = apps.phi_v(sol.V)
    phi0, _ = dk.solve_associator(d)
    rows = {"pentagon": apps.es_diff_degrees(*apps.pentagon_sides(P), d),
            "sder": _zero_degrees(apps.sder_residual(apps.convert_sl(P).lam), d),
            "equals alpha(Phi_0)": apps.es_diff_degrees(dk.dk_to_es(phi0), P, d)}
    ftext, fobj, ok = _flags(rows)
    return _checked(opts, f"Phi_V = {P.pretty(d)}\n{ftext}",
                    apps.envelope({}, d, {"PhiV": P.to_json(d), "checks": fobj}), ok)


@cli.command("buckle")
@_common
def buckle(**opts):
    """V from the associator through the buckle, compared with the solved V."""
    d = opts["degree"]
    phi0, _ = dk.solve_associator(d)
    W = apps.v_from_phi(phi0, d)
    sol = apps.solve_kv(d)
    rows = dict(apps.kv_check(W, sol.cap, d))
    rows["equals solved V"] = apps.es_diff_degrees(W, sol.V, d)
    ftext, fobj, ok = _flags(rows)
    return _checked(opts, f"V_B = {W.pretty(d)}\n{ftext}",
                    apps.envelope({}, d, {"V": W.to_json(d), "checks": fobj}), ok)


@cli.command("nu")
@_common
def nu(**opts):
    d = opts["degree"]
    phi0, _ = dk.solve_associator(d)
    N = apps.nu_inverse(phi0)
    sol = apps.solve_kv(d)
    ftext, fobj, ok = _flags({"nu^-1 Cap^4 = 1": apps.check_nu_cap4(N, sol.cap, d)})
    return _checked(opts, f"nu^-1 = {N.pretty(d)}\n{ftext}",
                    apps.envelope({}, d, {"nu_inverse": N.to_json(d), "checks": fobj}), ok)


@cli.command("tangle")
@click.option("--name", type=click.Choice(["8_17", "borromean"]), required=True)
@click.option("--order", type=click.IntRange(0, 1), default=0, show_default=True,
              help="Which of the two stitch orders to use.")
@_common
def tangle(name, order, **opts):
    d = opts["degree"]
    plan = apps.knot_817(order) if name == "8_17" else apps.borromean(order)
    t0 = time.perf_counter()
    Z = apps.tangle_invariant(plan, d)
    click.echo(f"computed in {time.perf_counter() - t0:.1f}s", err=True)
    return _emit(opts, Z.pretty(d), apps.envelope({"name": name, "order": order}, d, Z.to_json(d)))


@cli.command("rho-check")
@_common
def rho_check(**opts):
    """rho_2 and rho_3 on random elements, V_1 and V_2."""
    from .awcalc import random_es
    d, seed = opts["degree"], opts["seed"]
    xi = random_es("xy", seed)
    sol = apps.solve_kv(d)
    V1, V2 = apps.v1(sol.V), apps.v2(sol.V, sol.cap)
    rows = {"rho2^2 = 1": apps.es_diff_degrees(apps.rho2(apps.rho2(xi)), xi, d),
            "rho3^3 = 1": apps.es_diff_degrees(apps.rho3(apps.rho3(apps.rho3(xi))), xi, d),
            "rho2(V1) = V1": apps.es_diff_degrees(apps.rho2(V1), V1, d),
            "rho3(V2) = V2": apps.es_diff_degrees(apps.rho3(V2), V2, d)}
    text, obj, ok = _flags(rows)
    return _checked(opts, text, apps.envelope({"seed": seed}, d, obj), ok)


@cli.command("selftest")
@_common
def selftest(**opts):
    """The invariant suite: calculus laws, then the KV, associator and buckle residuals."""
    from .checks import property_suite
    d, seed = opts["degree"], opts["seed"]
    rows = property_suite(seed, d)
    sol = apps.solve_kv(d)
    rows.update({f"KV {k}": v for k, v in apps.kv_check(sol.V, sol.cap, d).items()})
    rows["twist"] = apps.twist_residual(sol.V, d)
    phi0, _ = dk.solve_associator(d)
    rows["associator pentagon"] = _zero_degrees(dk.pentagon_residual(phi0), d)
    rows["associator hexagon+"] = _zero_degrees(dk.hexagon_residual(phi0, 1), d)
    rows["buckle = V"] = apps.es_diff_degrees(apps.v_from_phi(phi0, d), sol.V, d)
    rows["nu^-1 Cap^4 = 1"] = apps.check_nu_cap4(apps.nu_inverse(phi0), sol.cap, d)
    text, obj, ok = _flags(rows)
    return _checked(opts, text, apps.envelope({"seed": seed}, d, obj), ok)


def main(argv: list[str] | None = None) -> int:
    try:
        rc = cli.main(args=argv, prog_name="wcalc", standalone_mode=False)
    except click.exceptions.Exit as e:      # --help
        return e.exit_code
    except click.UsageError as e:
        e.show()
        return 1
    except click.ClickException as e:
        e.show()
        return 1
    except (Inconsistent, NonlinearEntanglement, MisStaged) as e:
        click.echo(f"solver: {type(e).__name__}: {e}", err=True)
        return 2
    except (ValueError, KeyError) as e:
        click.echo(f"error: {e}", err=True)
        return 1
    return rc if isinstance(rc, int) else 0


if __name__ == "__main__":
    sys.exit(main())
