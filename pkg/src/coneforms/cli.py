"""Command line front end.

Subcommands run the identity suites, homology computations, cone reports,
membership queries, flatness constructions and bump/partition checks.  Each
report path writes a deterministic JSON document and a CSV table, renders
figures beside them unless --no-figures is given, and prints a plain-text
summary with timing to standard output.

Exit codes: 0 when every check passes (queries count as answered), 1 when a
check fails, 2 for invalid configuration.
"""

from __future__ import annotations

import argparse
import os
import random
import sys
import time
from fractions import Fraction

import numpy as np

from . import __version__
from .cones import (
    ConeSpace,
    conical_identity_report,
    flat_cone,
    latitude_link,
    make_cone_symplectic,
    metric_c1_check,
    quadric_link,
    standard_sphere_contact,
    trig_zero_witness,
)
from .forms import DifferentialForm
from .homology import build_stratified_complex, homology_ranks, stable_homology_ranks
from .report import Report, write_report
from .ring import CoefficientElement
from .smooth import (
    ConeFunction,
    EuclideanStructure,
    bump_on_cone,
    chi_profile,
    construct_flatness_link,
    degree_of_flatness,
    membership,
    membership_oracle,
    nash_cone_analytic,
    nash_cone_membership,
    partition_of_unity,
    tangent_cone,
)
from .symplectic import (
    SymplecticChart,
    brylinski_delta,
    cyclic_plane_action,
    delta_bracket_formula,
    random_element,
    random_form,
    star_delta_identity_check,
    symplectic_star,
)

DEFAULT_OUT_ENV = "CONEFORMS_OUT"


def _out_dir(args) -> str:
    if args.out:
        return args.out
    return os.environ.get(DEFAULT_OUT_ENV, "reports")


def _chart_arg(value: str) -> SymplecticChart:
    table = {"r2": 1, "r4": 2, "r6": 3}
    if value not in table:
        raise argparse.ArgumentTypeError(f"unknown chart {value!r} (use r2/r4/r6)")
    return SymplecticChart.standard(table[value])


def _emit(report: Report, args, figure_paths: list, started: float) -> int:
    out_dir = _out_dir(args)
    paths = write_report(report, out_dir, report.command)
    for line in report.summary_lines():
        print(line)
    elapsed = time.time() - started
    print(f"report: {paths['json']}  table: {paths['csv']}")
    for fig in figure_paths:
        print(f"figure: {fig}")
    print(f"elapsed: {elapsed:.2f}s")
    return 0 if report.passed else 1


# ----- verify -------------------------------------------------------------------


def cmd_verify(args) -> int:
    started = time.time()
    s = _chart_arg(args.chart)
    rng = random.Random(args.seed)
    report = Report("verify", {
        "chart": args.chart, "degree": args.degree, "count": args.count,
        "seed": args.seed,
    }, version=__version__)

    failures = {}
    for trial in range(args.count):
        p = rng.randint(0, s.dimension)
        form = random_form(s.chart, p, rng, max_degree=args.degree)
        checks = {
            "d_squared_zero":
                form.exterior_derivative().exterior_derivative().is_zero,
            "delta_squared_zero":
                brylinski_delta(brylinski_delta(form, s), s).is_zero,
            "star_involution":
                symplectic_star(symplectic_star(form, s), s) == form,
            "star_delta_conjugation": star_delta_identity_check(form, s),
        }
        f0 = random_element(s.chart, rng, max_degree=args.degree)
        k = rng.randint(1, min(3, s.dimension))
        fs = [random_element(s.chart, rng, max_degree=2) for _ in range(k)]
        decomposable = DifferentialForm.from_function(f0)
        for g in fs:
            decomposable = decomposable.wedge(
                DifferentialForm.from_function(g).exterior_derivative())
        checks["boundary_bracket_expansion"] = (
            delta_bracket_formula(f0, fs, s) == brylinski_delta(decomposable, s))
        for name, ok in checks.items():
            if not ok and name not in failures:
                failures[name] = f"trial {trial}: {form.to_text()[:200]}"
    for name in ("d_squared_zero", "delta_squared_zero", "star_involution",
                 "star_delta_conjugation", "boundary_bracket_expansion"):
        report.add(name, name not in failures, failures.get(name),
                   data={"trials": args.count})
    report.results["trials"] = args.count
    return _emit(report, args, [], started)


# ----- homology -----------------------------------------------------------------


def cmd_homology(args) -> int:
    started = time.time()
    s = _chart_arg(args.chart)
    action = None
    if args.group_order and args.group_order > 1:
        if s.n != 1:
            print("group quotients are supported on the plane chart only",
                  file=sys.stderr)
            return 2
        try:
            action = cyclic_plane_action(args.group_order, s)
        except ValueError as exc:
            print(f"invalid group order: {exc}", file=sys.stderr)
            return 2
    report = Report("homology", {
        "chart": args.chart, "trunc": args.trunc, "operator": args.operator,
        "group_order": args.group_order or 1, "raw": bool(args.raw),
    }, version=__version__)

    strata = build_stratified_complex(s, args.trunc, args.operator, action)
    plain = homology_ranks(strata)
    stable = stable_homology_ranks(strata)
    report.add("composition_zero", True,
               data={"strata": [st.dimension for st in strata]})
    report.add("rank_bounds", all(
        st.rank <= min(st.dimension, sum(x.dimension for x in strata))
        for st in strata))
    report.results["ranks"] = plain if args.raw else stable
    report.results["truncated_ranks"] = plain
    report.results["stable_ranks"] = stable
    report.results["dimensions"] = [st.dimension for st in strata]
    print(f"{args.operator} ranks (stable): {tuple(stable)}")
    print(f"{args.operator} ranks (truncated complex): {tuple(plain)}")

    figures = []
    if not args.no_figures:
        from .figures import homology_figure
        path = os.path.join(_out_dir(args), "homology.png")
        figures.append(homology_figure(
            {"stable": stable, "truncated": plain}, path,
            f"{args.chart} D={args.trunc} {args.operator}"
            + (f" Z{args.group_order}-invariant" if action else "")))
    return _emit(report, args, figures, started)


# ----- cone-report ---------------------------------------------------------------


def _resolve_link(selector: str):
    if selector == "flat":
        return flat_cone().link
    if selector == "quadric":
        return quadric_link(1)
    if selector == "hopf":
        return standard_sphere_contact(2)
    if selector.startswith("latitude:"):
        return latitude_link(Fraction(selector.split(":", 1)[1]))
    if selector.startswith("flatness:"):
        return construct_flatness_link(int(selector.split(":", 1)[1]))
    if selector.startswith("perturbed:"):
        k = int(selector.split(":", 1)[1])
        chart = flat_cone().link.chart
        z = CoefficientElement.cos(chart, "phi", k) * Fraction(1, 4)
        from .cones import perturbed_circle_link
        return perturbed_circle_link(z, f"perturbed[cos{k}]")
    raise argparse.ArgumentTypeError(
        f"unknown link {selector!r}; use flat, quadric, hopf, latitude:F, "
        "perturbed:K or flatness:K")


def cmd_cone_report(args) -> int:
    started = time.time()
    link = _resolve_link(args.link)
    cone = ConeSpace.over(link)
    report = Report("cone-report", {
        "link": args.link, "samples": args.samples, "tolerance": args.tolerance,
    }, version=__version__)
    report.results["link"] = {
        "name": link.name, "ambient_dim": link.ambient_dim,
        "radius_squared": str(link.radius_squared),
        "rational": link.is_rational,
    }

    if link.contact_form is not None:
        csf = make_cone_symplectic(cone, link.contact_form)
        identities = conical_identity_report(cone, csf.alpha, csf.omega_hat,
                                             csf.total)
        for name, ok in identities.items():
            report.add(f"conical_identity.{name}", ok,
                       witness=csf.total.to_text()[:200])
        coeff = csf.alpha.coefficient((link.chart.var_index("phi"),))
        witness = trig_zero_witness(coeff)
        report.add("contact_nondegenerate", witness is None,
                   witness=f"alpha coefficient vanishes near phi={witness}")
        report.results["alpha"] = csf.alpha.to_text()
        report.results["omega_bar"] = csf.total.to_text()
    else:
        report.skip("conical_identities", "link carries no contact form")

    tc = tangent_cone(cone)
    report.results["flatness_degree"] = degree_of_flatness(tc)
    report.results["flat_everywhere"] = tc.flat_everywhere
    if tc.convention_note:
        report.results["flatness_convention"] = tc.convention_note
    sphere_residual = 0.0
    pts = tc.directions
    sphere_residual = float(np.max(np.abs(np.sum(pts * pts, axis=1) - 1.0)))
    report.add("directions_on_unit_sphere", sphere_residual < 1e-12,
               witness=f"max |,|v|^2 - 1| = {sphere_residual}")

    if link.ambient_dim == 3:
        chart = link.chart
        h = CoefficientElement.cos(chart, "phi", 2) * Fraction(1, 8)
        metric = metric_c1_check(link, h, samples=min(args.samples, 2000),
                                 tolerance=args.tolerance)
        report.add("metric_c1_at_apex", metric.passed,
                   witness=f"max first-derivative deviation {metric.max_deviation:.3e}",
                   data={"max_deviation": metric.max_deviation,
                         "tolerance": metric.tolerance})
        try:
            z = link.vertical_component()
            theta = z.evaluate({"phi": 0.0})
        except ValueError:
            theta = None
        if theta:
            rng = random.Random(args.seed)
            agreements = 0
            samples = []
            for _ in range(24):
                v = np.array([rng.gauss(0, 1) for _ in range(3)])
                v /= np.linalg.norm(v)
                got = nash_cone_membership(cone, v, tol=args.tolerance)
                want = nash_cone_analytic(link, v)
                agreements += got == want
                samples.append({"direction": [round(float(c), 6) for c in v],
                                "member": bool(got)})
            report.add("nash_membership_matches_analytic", agreements == 24,
                       witness=f"{agreements}/24 sampled directions agree")
            report.results["nash_samples"] = samples

    figures = []
    if not args.no_figures:
        from .figures import link_figure
        path = os.path.join(_out_dir(args), "cone-report.png")
        figures.append(link_figure(link, tc, path))
    return _emit(report, args, figures, started)


# ----- membership ----------------------------------------------------------------


def cmd_membership(args) -> int:
    started = time.time()
    theta = Fraction(args.theta)
    try:
        func = ConeFunction.parse(",".join(args.term))
    except (ValueError, ZeroDivisionError) as exc:
        print(f"invalid term list: {exc}", file=sys.stderr)
        return 2
    structure = EuclideanStructure.latitude(theta)
    decided = membership(func, structure)
    oracle = membership_oracle(func, structure)
    report = Report("membership", {
        "theta": str(theta), "terms": list(args.term),
    }, version=__version__)
    report.add("decision_matches_oracle", decided == oracle,
               witness=f"decision {decided} vs oracle {oracle}")
    report.results["smooth"] = bool(decided)
    verdict = "smooth" if decided else "not smooth"
    print(f"f is {verdict} on the cone with theta = {theta}")

    figures = []
    if not args.no_figures:
        from .figures import membership_figure
        grid = {}
        for a in range(0, 9):
            for b in range(0, a + 3):
                probe = ConeFunction.from_terms([(a, b, Fraction(1))])
                grid[(a, b)] = membership(probe, structure)
        path = os.path.join(_out_dir(args), "membership.png")
        figures.append(membership_figure(grid, theta, path))
    return _emit(report, args, figures, started)


# ----- flatness ------------------------------------------------------------------


def cmd_flatness(args) -> int:
    started = time.time()
    report = Report("flatness", {"pairs": args.pairs}, version=__version__)
    link = construct_flatness_link(args.pairs)
    tc = tangent_cone(ConeSpace.over(link))
    degree = degree_of_flatness(tc)
    expected = 2 * args.pairs if args.pairs else 0
    report.add("flatness_degree", degree == expected,
               witness=f"got {degree}, wanted {expected}")
    report.results["link"] = link.name
    report.results["flatness_degree"] = degree
    report.results["flat_angles"] = [round(a, 9) for a in tc.flat_angles]
    print(f"{link.name}: flatness degree {degree}")
    figures = []
    if not args.no_figures:
        from .figures import link_figure
        path = os.path.join(_out_dir(args), "flatness.png")
        figures.append(link_figure(link, tc, path))
    return _emit(report, args, figures, started)


# ----- bump-check ----------------------------------------------------------------


def cmd_bump_check(args) -> int:
    started = time.time()
    eps = args.epsilon
    report = Report("bump-check", {
        "epsilon": eps, "samples": args.samples,
    }, version=__version__)
    bump = bump_on_cone(eps)
    rs = np.linspace(0.0, 1.5 * eps, args.samples)
    vals = bump(rs)
    report.add("apex_value_one", bump(0.0) == 1.0, witness=f"f(0)={bump(0.0)}")
    outside = vals[rs >= eps]
    report.add("support_in_ball", bool(np.all(outside == 0.0)),
               witness=f"max outside value {float(np.max(outside))}")
    report.add("range_in_unit_interval",
               bool(np.all((vals >= 0.0) & (vals <= 1.0))),
               witness=f"range [{vals.min()}, {vals.max()}]")
    chi = chi_profile(eps)
    seg = chi(np.linspace(2 * eps / 5, 4 * eps / 5, args.samples // 4))
    report.add("plateau_monotone", bool(np.all(np.diff(seg) <= 1e-12)),
               witness="chi rises on the falling window")

    cover = [("cap", Fraction(1, 4)), ("annulus", Fraction(1, 8), Fraction(2, 3)),
             ("annulus", Fraction(1, 2), Fraction(1))]
    parts = partition_of_unity(cover)
    grid = np.linspace(0.0, 0.999, 1000)
    total = sum(f(grid) for f in parts)
    err = float(np.max(np.abs(total - 1.0)))
    report.add("partition_sums_to_one", err < 1e-12, witness=f"max error {err}")
    report.results["partition_max_error"] = err

    figures = []
    if not args.no_figures:
        from .figures import bump_figure, partition_figure
        figures.append(bump_figure(bump, chi, eps,
                                   os.path.join(_out_dir(args), "bump.png")))
        figures.append(partition_figure(parts, 1.0,
                                        os.path.join(_out_dir(args), "partition.png")))
    return _emit(report, args, figures, started)


# ----- argument parsing ------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="coneforms",
        description="exact exterior calculus and Poisson homology on cones")
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--out", default=None,
                       help=f"output directory (default ${DEFAULT_OUT_ENV} or ./reports)")
        p.add_argument("--seed", type=int, default=0)
        p.add_argument("--no-figures", action="store_true",
                       help="skip figure rendering")

    p = sub.add_parser("verify", help="randomized algebraic identity suite")
    p.add_argument("--chart", default="r2", choices=["r2", "r4", "r6"])
    p.add_argument("--degree", type=int, default=6)
    p.add_argument("--count", type=int, default=200)
    common(p)
    p.set_defaults(fn=cmd_verify)

    p = sub.add_parser("homology", help="exact homology ranks of truncated complexes")
    p.add_argument("--chart", default="r2", choices=["r2", "r4", "r6"])
    p.add_argument("--trunc", type=int, default=4)
    p.add_argument("--operator", default="delta", choices=["delta", "deRham"])
    p.add_argument("--group-order", type=int, default=None,
                   help="restrict to the invariant subcomplex of Z_k")
    p.add_argument("--raw", action="store_true",
                   help="report truncated-complex ranks instead of stable ranks")
    common(p)
    p.set_defaults(fn=cmd_homology)

    p = sub.add_parser("cone-report", help="conical identities and cone analysis")
    p.add_argument("--link", default="flat")
    p.add_argument("--samples", type=int, default=10_000)
    p.add_argument("--tolerance", type=float, default=1e-6)
    common(p)
    p.set_defaults(fn=cmd_cone_report)

    p = sub.add_parser("membership", help="smooth-structure membership query")
    p.add_argument("--theta", default="1/2")
    p.add_argument("--term", action="append", required=True,
                   help="term a:b:num/den (b >= 0 cosine, b < 0 sine); repeatable")
    common(p)
    p.set_defaults(fn=cmd_membership)

    p = sub.add_parser("flatness", help="construct and validate prescribed flat pairs")
    p.add_argument("--pairs", type=int, default=2)
    common(p)
    p.set_defaults(fn=cmd_flatness)

    p = sub.add_parser("bump-check", help="bump function and partition checks")
    p.add_argument("--epsilon", type=float, default=0.5)
    p.add_argument("--samples", type=int, default=10_000)
    common(p)
    p.set_defaults(fn=cmd_bump_check)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if getattr(args, "tolerance", 1.0) <= 0:
        print("tolerance must be positive", file=sys.stderr)
        return 2
    if getattr(args, "trunc", 0) < 0:
        print("truncation must be nonnegative", file=sys.stderr)
        return 2
    if getattr(args, "epsilon", 1.0) <= 0:
        print("epsilon must be positive", file=sys.stderr)
        return 2
    if getattr(args, "pairs", 0) < 0:
        print("pair count must be nonnegative", file=sys.stderr)
        return 2
    try:
        return args.fn(args)
    except (ValueError, ArithmeticError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
