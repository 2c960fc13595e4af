"""Command-line front end: ``adelic <group> <command> [options]``.

Exit status is 0 on success, 2 when an input violates a documented contract
(bad field order, unparsable divisor, cap exceeded, ...) and 3 when a
computation refuses to answer because a truncation was not stable.
"""

from __future__ import annotations

import json
import sys
import time
from dataclasses import dataclass, field
from fractions import Fraction

import click
import numpy as np

from . import curve, harmonic, hecke, lattice, surface
from .adeles import InstabilityError, restricted_complex_cohomology, strong_approximation_check
from .algebra import field_of_order
from .curve import Divisor, parse_divisor
from .series import Place

EXIT_OK, EXIT_CONTRACT, EXIT_INSTABILITY = 0, 2, 3
DEFAULT_SEED = 20240


@dataclass
class CommandResult:
    status: str  # ok | contract-violation | instability
    payload: dict = field(default_factory=dict)
    seconds: float = 0.0

    @property
    def exit_code(self) -> int:
        return {"ok": EXIT_OK, "contract-violation": EXIT_CONTRACT, "instability": EXIT_INSTABILITY}[self.status]

    def to_json(self) -> dict:
        return {"status": self.status, "payload": self.payload, "seconds": round(self.seconds, 4)}


def _jsonable(x):
    if isinstance(x, Fraction):
        return x.numerator if x.denominator == 1 else str(x)
    if isinstance(x, dict):
        return {str(k): _jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_jsonable(v) for v in x]
    if isinstance(x, (np.integer,)):
        return int(x)
    if isinstance(x, float) and x in (float("inf"), float("-inf")):
        return str(x)
    return x


def _text(payload, indent=0) -> str:
    pad = "  " * indent
    lines = []
    for k, v in payload.items():
        if isinstance(v, dict):
            lines.append(f"{pad}{k}:")
            lines.append(_text(v, indent + 1))
        elif isinstance(v, str) and "\n" in v:
            lines.append(f"{pad}{k}:")
            lines.extend(pad + "  " + ln for ln in v.splitlines())
        else:
            lines.append(f"{pad}{k}: {v}")
    return "\n".join(lines)


def _emit(ctx: click.Context, compute) -> None:
    """Run ``compute`` and print its payload, mapping errors to exit codes."""
    t0 = time.perf_counter()
    try:
        result = CommandResult("ok", _jsonable(compute()))
    except InstabilityError as exc:
        result = CommandResult("instability", {"error": str(exc)})
    except (ValueError, KeyError) as exc:
        result = CommandResult("contract-violation", {"error": str(exc)})
    result.seconds = time.perf_counter() - t0
    if ctx.find_root().params.get("as_json") or ctx.params.get("as_json"):
        click.echo(json.dumps(result.to_json(), indent=2, ensure_ascii=False))
    else:
        if result.status != "ok":
            click.echo(f"{result.status}: {result.payload['error']}", err=True)
        else:
            click.echo(_text(result.payload))
    ctx.exit(result.exit_code)


json_option = click.option("--json", "as_json", is_flag=True, help="Emit the result as JSON.")
q_option = click.option("--q", "q", type=int, default=2, show_default=True, help="Field order.")


@click.group()
@click.option("--json", "as_json", is_flag=True, help="Emit every result as JSON.")
def main(as_json):
    """Exact adelic computations over finite fields."""


# -- zeta ------------------------------------------------------------------------------


@main.group()
def zeta():
    """Zeta functions of curves and of the plane."""


@zeta.command("curve")
@q_option
@click.option("--model", type=click.Choice(["p1", "plane"]), default="p1", show_default=True)
@click.option("--poly", default=None, help="Homogeneous F(x,y,z) for --model plane.")
@click.option("--terms", type=int, default=7, show_default=True, help="Number of coefficients, starting with the constant one.")
@click.option("--method", type=click.Choice(["euler", "dirichlet", "hecke", "all"]), default="all", show_default=True)
@json_option
@click.pass_context
def zeta_curve(ctx, q, model, poly, terms, method, as_json):
    """Coefficients of Z(T) by Euler product, effective divisors and the Hecke integral."""

    def run():
        if model == "plane" and not poly:
            raise curve.CurveError("--model plane needs --poly")
        if terms < 1:
            raise curve.CurveError("--terms must be at least 1")
        m = curve.P1Model(q) if model == "p1" else curve.PlaneModel(q, poly)
        N = terms - 1
        routes = {}
        cp = curve.closed_points(m, max(N, 1))
        if method in ("euler", "all"):
            routes["euler"] = curve.euler_product(cp.counts, N)
        if method in ("dirichlet", "all"):
            routes["dirichlet"] = curve.effective_divisor_counts(cp.counts, N)
        if method in ("hecke", "all"):
            if model != "p1":
                if method == "hecke":
                    raise hecke.HeckeError("the Hecke route is implemented for P^1 only")
            else:
                z = hecke.hecke_zeta(hecke.DiscretePart(q), hecke.MultiplicativeIntegrand.ideal(q), N).zeta
                routes["hecke"] = list(z.coeffs)
        first = next(iter(routes.values()))
        Z = curve.ZetaSeries(q, tuple(first), curve.fit_rational(q, first, m.genus))
        out = {"q": q, "model": model, "genus": m.genus, "coefficients": routes}
        out["agree"] = all(r == first for r in routes.values())
        out["fit"] = Z.to_json().get("fit")
        if Z.fit is not None:
            out["functional_equation"] = curve.functional_equation_check(Z, m.genus)
        return out

    _emit(ctx, run)


@zeta.command("surface")
@q_option
@click.option("--terms", type=int, default=10, show_default=True)
@json_option
@click.pass_context
def zeta_surface(ctx, q, terms, as_json):
    """Product of the Euler products of A^2, A^1 and a point."""
    _emit(ctx, lambda: surface.surface_zeta_factorization(q, terms).to_json())


# -- Riemann-Roch, Fourier, cohomology ---------------------------------------------------------


def _divisor(q: int, text: str) -> Divisor:
    return parse_divisor(field_of_order(q), text)


@main.group()
def rr():
    """Riemann-Roch on P^1."""


@rr.command("verify")
@q_option
@click.option("--divisor", required=True, help='E.g. "2*(inf) - (t^2+t+1)".')
@json_option
@click.pass_context
def rr_verify(ctx, q, divisor, as_json):
    """Parseval on an adelic window gives l(D) - l(K-D) = deg D + 1."""

    def run():
        D = _divisor(q, divisor)
        rep = harmonic.rr_via_parseval(D)
        out = rep.to_json()
        out["deg_D"] = D.degree()
        out["identity"] = f"{rep.l_D}-{rep.l_K_minus_D} = {D.degree()}+{rep.chi_high}"
        return out

    _emit(ctx, run)


@main.group()
def fourier():
    """Fourier analysis on adelic windows."""


@fourier.command("demo")
@q_option
@click.option("--divisor", default="0", show_default=True)
@click.option("--seed", type=int, default=DEFAULT_SEED, show_default=True)
@click.option("--pairs", type=int, default=3, show_default=True, help="Random pairs for the cube chain.")
@json_option
@click.pass_context
def fourier_demo(ctx, q, divisor, seed, pairs, as_json):
    """Subgroup rule, double transform and the cube chain on the window around D."""

    def run():
        D = _divisor(q, divisor)
        W = harmonic.rr_window(D)
        V = harmonic.space_of(W)
        if V.size > 4096:
            raise harmonic.HarmonicError(f"window of size {V.size} exceeds the table cap 4096")
        duality, _ = harmonic.window_duality(W)
        ok, e = harmonic.subgroup_rule_check(W, D)
        rng = np.random.default_rng(seed)
        f = harmonic.random_table(V, rng)
        double = harmonic.inverse_fourier_check(f, duality, harmonic.transpose(duality))
        cubes = [harmonic.cube_check(harmonic.random_table(V, rng), harmonic.random_table(V, rng), duality) for _ in range(pairs)]
        return {
            "window": W.describe(),
            "size": V.size,
            "subgroup_rule": ok,
            "subgroup_exponent": e,
            "double_transform": double,
            "cube_pairs": len(cubes),
            "cube_holds": all(cubes),
            "seed": seed,
        }

    _emit(ctx, run)


@main.group()
def cohomology():
    """Cohomology of adelic complexes."""


@cohomology.command("restricted")
@q_option
@click.option("--divisor", required=True)
@click.option("--bounds", default=None, help="Truncation N,M; refused with exit 3 when too small.")
@json_option
@click.pass_context
def cohomology_restricted(ctx, q, divisor, bounds, as_json):
    """(h0, h1) of A + O_inf -> K_inf against l(D) and l(K - D)."""

    def run():
        D = _divisor(q, divisor)
        F = D.field
        nm = tuple(int(x) for x in bounds.split(",")) if bounds else None
        if nm is not None and len(nm) != 2:
            raise ValueError("--bounds takes two integers N,M")
        h = restricted_complex_cohomology(D, bounds=nm)
        lD, lKD = curve.l_dim(D), curve.l_dim(Divisor.canonical(F) - D)
        W = harmonic.rr_window(D)
        return {
            "divisor": str(D),
            "h0": h.h0,
            "h1": h.h1,
            "l_D": lD,
            "l_K_minus_D": lKD,
            "matches": (h.h0, h.h1) == (lD, lKD),
            "strong_approximation": strong_approximation_check(W, Place.infinity(F)),
        }

    _emit(ctx, run)


# -- Hecke -------------------------------------------------------------------------------


@main.group("hecke")
def hecke_group():
    """Hecke integrals for P^1."""


@hecke_group.command("fe")
@q_option
@click.option("--terms", type=int, default=12, show_default=True)
@click.option("--shift", type=int, default=0, show_default=True, help="Use char(z^shift O) at infinity.")
@json_option
@click.pass_context
def hecke_fe(ctx, q, terms, shift, as_json):
    """Functional equation Z(1/(qT)) = factor * Z(T), checked symbolically."""
    _emit(ctx, lambda: hecke.functional_equation(q, terms, shift).to_json())


# -- residues ---------------------------------------------------------------------------------


@main.group()
def residue():
    """Residue relations for 2-forms on P^1 x P^1."""


def _point(text: str) -> tuple[int, int]:
    try:
        u, t = (int(x) for x in text.split(","))
    except ValueError:
        raise click.BadParameter(f"expected 'u,t', got {text!r}") from None
    return u, t


@residue.command("point")
@q_option
@click.option("--form", "form_text", required=True, help='E.g. "1/(u*t*(u+t)) du^dt".')
@click.option("--point", default="0,0", show_default=True, help="Field elements u,t as integers.")
@json_option
@click.pass_context
def residue_point(ctx, q, form_text, point, as_json):
    """Sum of residues over the curves through a point."""
    pt = _point(point)
    _emit(ctx, lambda: surface.residue_relation_point(surface.parse_form(field_of_order(q), form_text), pt).to_json())


@residue.command("curve")
@q_option
@click.option("--form", "form_text", required=True)
@click.option("--curve", "curve_text", default="t=0", show_default=True, help="E.g. t=0, u=1, u=inf, t=u^2+1.")
@json_option
@click.pass_context
def residue_curve(ctx, q, form_text, curve_text, as_json):
    """Sum of residues over the points of a curve."""

    def run():
        F = field_of_order(q)
        return surface.residue_relation_curve(surface.parse_form(F, form_text), surface.parse_curve(F, curve_text)).to_json()

    _emit(ctx, run)


# -- lattice ---------------------------------------------------------------------------------


@main.group("lattice")
def lattice_group():
    """The free distributive lattice on 01, 02, 12."""


@lattice_group.command("enumerate")
@json_option
@click.pass_context
def lattice_enumerate(ctx, as_json):
    """All elements, the covering relations and a DOT rendering."""

    def run():
        L = lattice.enumerate_free_lattice()
        out = L.to_json()
        out["with_bounds"] = len(L.elements) + 2
        out["monotone_boolean_functions"] = len(lattice.monotone_boolean_functions(3))
        out["dot"] = L.to_dot()
        return out

    _emit(ctx, run)


@lattice_group.command("model")
@click.option("--search", is_flag=True, help="Rerun the bounded search instead of using the shipped assignment.")
@json_option
@click.pass_context
def lattice_model(ctx, search, as_json):
    """Evaluate the lattice on quadrant sets and test injectivity up to commensurability."""

    def run():
        if search:
            res = lattice.search_third_generator()
            assignment = res.assignment
        else:
            assignment = lattice.shipped_assignment()
        L = lattice.enumerate_free_lattice()
        out = {
            "assignment": {g: str(s) for g, s in sorted(assignment.items())},
            "classes": lattice.distinct_classes(assignment, L),
            "elements": len(L.elements),
            "injective": lattice.injectivity_check(assignment),
            "homomorphism": lattice.homomorphism_check(assignment),
            "values": {str(t): str(lattice.model_evaluate(t, assignment)) for t in L.elements},
        }
        if search:
            out["searched"] = res.searched
        return out

    _emit(ctx, run)


# -- measures -----------------------------------------------------------------------------


@main.group()
def measure():
    """Haar-measure normalizations on two-dimensional local fields."""


@measure.command("torsor")
@q_option
@click.option("--base", default="0,0", show_default=True, help="Base normalization i,k.")
@click.option("--radius", type=int, default=3, show_default=True)
@click.option("--seed", type=int, default=DEFAULT_SEED, show_default=True)
@json_option
@click.pass_context
def measure_torsor(ctx, q, base, radius, seed, as_json):
    """Torsor laws on [-radius, radius]^2 and transitivity of the collapse maps."""

    def run():
        try:
            i, k = (int(x) for x in base.split(","))
        except ValueError:
            raise surface.SurfaceError(f"expected 'i,k', got {base!r}") from None
        d = surface.NormalizationDatum(i, k)
        failures = surface.torsor_law_failures(q, d, radius)
        F = field_of_order(q)
        W = surface.TwoLevelWindow(F, 0, ((-1, 1), (0, 1), (0, 1)))
        if W.space.size > 4096:
            raise surface.SurfaceError("transitivity window too large for this field")
        f = harmonic.random_table(W.space, np.random.default_rng(seed))
        return {
            "base": [i, k],
            "checked": (2 * radius + 1) ** 2,
            "torsor_laws": not failures,
            "failures": failures,
            "transitivity": surface.f02_transitivity(f, W, d),
            "seed": seed,
        }

    _emit(ctx, run)


def run(argv=None) -> int:
    """Entry point returning the exit code instead of exiting."""
    try:
        code = main.main(args=argv, prog_name="adelic", standalone_mode=False)
    except click.exceptions.Exit as exc:
        return exc.exit_code
    except click.ClickException as exc:
        exc.show()
        return EXIT_CONTRACT
    return code if isinstance(code, int) else EXIT_OK


if __name__ == "__main__":
    sys.exit(run())
