"""Command line entry point: ``steinberg <suite> <action> [options]``.

Every command prints a JSON report (CSV/SVG for profiles and pictures) and
exits with 0 when all checks pass, 1 when a check fails and 2 on usage
errors.  Output files go to ``--out`` or ``$STEINBERG_OUT`` when set.
"""
from __future__ import annotations

import argparse
import json
import math
import os
import sys
from pathlib import Path

import numpy as np

SCHEMA = "steinberg.cli/1"
ENV_OUT = "STEINBERG_OUT"


class Suite:
    """Named boolean checks plus free-form data."""

    def __init__(self, name: str, genus: int):
        self.name = name
        self.genus = genus
        self.checks: list[dict] = []
        self.data: dict = {}
        self.skipped = False

    def check(self, name: str, ok, **info) -> bool:
        self.checks.append({"name": name, "passed": bool(ok), **info})
        return bool(ok)

    @property
    def passed(self) -> bool:
        return all(c["passed"] for c in self.checks)

    def failing(self) -> list[str]:
        return [f"{self.name}.{c['name']}" for c in self.checks if not c["passed"]]

    def to_json(self) -> dict:
        out = {"schema": SCHEMA, "suite": self.name, "genus": self.genus,
               "passed": self.passed, "checks": self.checks, "data": self.data}
        if self.skipped:
            out["skipped"] = True
        return out


def _jsonable(x):
    if isinstance(x, dict):
        return {str(k): _jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_jsonable(v) for v in x]
    if isinstance(x, (np.integer,)):
        return int(x)
    if isinstance(x, (np.floating,)):
        return float(x)
    if isinstance(x, np.ndarray):
        return _jsonable(x.tolist())
    return x


def dumps(obj) -> str:
    return json.dumps(_jsonable(obj), indent=2, sort_keys=True)


# --------------------------------------------------------------------------
# suites


def phi_suite(g: int, action: str) -> Suite:
    from .sphere import build_phi, count_triangulations, fundamental_cycle, homology, homology_json

    s = Suite(f"phi.{action}", g)
    K = build_phi(g)
    n = 2 * g + 2
    if action == "build":
        fv = list(K.f_vector())
        s.data.update(f_vector=fv, euler_characteristic=K.euler_characteristic())
        s.check("vertices_are_diagonals", fv[0] == n * (n - 3) // 2, value=fv[0])
        s.check("facets_are_triangulations", fv[-1] == count_triangulations(n), value=fv[-1])
        s.check("dimension", K.dimension == 2 * g - 2, value=K.dimension)
        s.check("euler_characteristic", K.euler_characteristic() == 1 + (-1) ** (2 * g - 2))
    elif action == "homology":
        hs = homology(K)
        s.data.update(homology_json(K))
        top = len(hs) - 1
        s.check("top_is_Z", hs[top].betti == 1 and not hs[top].torsion, group=str(hs[top]))
        s.check("below_top_vanishes", all(h.betti == 0 and not h.torsion for h in hs[:top]),
                groups=[str(h) for h in hs[:top]])
    elif action == "cycle":
        z = fundamental_cycle(K)
        facets = K.faces[K.dimension]
        s.data.update(facets=len(facets), terms=len(z))
        s.check("unit_coefficients", set(z.coeffs.values()) <= {1, -1} and len(z) == len(facets))
        s.check("zero_boundary", K.boundary(z).is_zero())
        same = all(fundamental_cycle(K, seed) in (z, -z) for seed in range(len(facets)))
        s.check("unique_up_to_sign", same, seeds=len(facets))
    else:
        raise ValueError(action)
    return s


def map_suite(g: int, action: str, model: str = "literal") -> Suite:
    from . import steinberg_map as sm

    s = Suite(f"map.{action}", g)
    n = 2 * g + 2
    if action == "vertices":
        table = sm.vertex_table(g)
        s.data["vertices"] = table
        for row in table:
            i, j = row["diagonal"]
            name = f"{{{i},{j}}}"
            if row["short"]:
                inner = (i + 1) % n if (j - i) % n == 2 else (j + 1) % n
                s.check(f"short{name}", row["multicurve"] == [f"c{inner}"], image=row["multicurve"])
            elif g == 2 and (j - i) % n == n // 2:
                s.check(f"long{name}", len(row["multicurve"]) == 1 and row["separating"] == [True],
                        image=row["multicurve"])
        labels = {tuple(r["multicurve"]) for r in table}
        s.check("distinct_images", len(labels) == len(table), distinct=len(labels))
    elif action == "flags":
        for m in ((model,) if model != "both" else sm.MODELS):
            rep = sm.verify_flag_structure(g, m)
            s.data[m] = {"checks": rep.checks, "failure_count": len(rep.failures),
                         "details": rep.details, "first_failures": rep.failures[:5]}
            s.check(f"monotone[{m}]", rep.passed, failures=len(rep.failures), checks=rep.checks)
    elif action == "cycle":
        try:
            img = sm.pushforward_cycle(g)
        except AssertionError as exc:
            s.check("pushforward", False, error=str(exc))
            return s
        s.data.update(vertices=len(img.vertices), terms=len(img.chain))
        s.check("zero_boundary", sm._boundary(img.chain).is_zero())
        s.check("nonzero_support", len(img.chain) > 0, terms=len(img.chain))
        s.check("unit_coefficients", set(img.chain.coeffs.values()) <= {1, -1})
        s.check("flags", all(sm.is_flag(img.vertices, x) for x in img.chain.coeffs))
    elif action == "stabilizer":
        rep = sm.stabilizer_report(g)
        s.data.update(rep.details)
        s.check("dihedral_stabilizer", rep.passed, checks=rep.checks, failures=rep.failures[:5])
        s.check("order", len(rep.details["elements"]) == 2 * n, order=len(rep.details["elements"]))
    elif action == "equivariance":
        rep = sm.equivariance_report(g)
        s.check("equivariant", rep.passed, checks=rep.checks, failures=rep.failures[:5])
    else:
        raise ValueError(action)
    return s


def parse_range(text: str) -> list[float]:
    from .hyperbolic import t_grid

    parts = [float(p) for p in text.split(":")]
    if len(parts) == 1:
        return parts
    if len(parts) != 3 or parts[2] <= 0 or parts[1] < parts[0]:
        raise argparse.ArgumentTypeError(f"bad range {text!r}, expected start:stop:step")
    return t_grid(*parts)


def hyp_suite(g: int, action: str, ts: list[float], tol: float) -> tuple[Suite, str | None]:
    from . import hyperbolic as hy

    s = Suite(f"hyp.{action}", g)
    extra = None
    n = 2 * g + 2
    if action == "polygon":
        side = hy.right_angled_regular_side(5)
        s.check("pentagon_golden_ratio", abs(math.cosh(side) - (1 + math.sqrt(5)) / 2) < 1e-12, side=side)
        surf = hy.critical_surface(g)
        area = surf.area()
        s.check("area", abs(area - 4 * math.pi * (g - 1)) < 1e-9, area=area)
        s.check("relations", max(surf.relation_residuals().values()) < hy.RELATION_TOL)
        poly = hy.semiregular_polygon(n, ts[0] if ts else 0.0)
        s.data.update(side_lengths=list(poly.side_lengths), angles=list(poly.angles),
                      fundamental_domain_sides=surf.cx.fundamental_domain_sides)
        extra = hy.fundamental_domain_svg(g, ts[0] if ts else 0.0)
    elif action == "gamma":
        rows = []
        for t in ts:
            gp = hy.gamma_point(g, t)
            lengths = gp.surface.curve_lengths()
            rows.append({"t": t, "formula": gp.curve_length, "trace": list(lengths)})
            s.check(f"formula_vs_trace[t={t:g}]", np.abs(np.asarray(lengths) - gp.curve_length).max() < 1e-8)
        s.data["points"] = rows
    elif action == "profile":
        prof = hy.length_profile(g, ts)
        for name, ok in prof.checks().items():
            s.check(name, ok)
        extra = prof.to_csv()
    elif action == "deltastar":
        d = hy.delta_star(g)
        again = hy.delta_star(g)
        lsys = hy.systole_at_p(g)
        half = d / 2
        s.data.update(delta_star=d, systole=lsys, collar_diameter_at_half=hy.collar_diameter(half))
        s.check("stable", abs(d - again) < 1e-8)
        s.check("threshold_equation", abs(hy.collar_diameter(d) - lsys) < 1e-8)
        s.check("collar_inequality_at_half", lsys < hy.collar_diameter(half))
    else:
        raise ValueError(action)
    return s, extra


def _parse_curves(text: str) -> list[int]:
    out = []
    for tok in text.split(","):
        tok = tok.strip().lower().lstrip("c")
        if not tok.isdigit():
            raise argparse.ArgumentTypeError(f"bad curve {tok!r}")
        out.append(int(tok))
    return out


def opt_suite(g: int, action: str, args) -> Suite:
    from . import minima as mn
    from .hyperbolic import gamma_point

    s = Suite(f"opt.{action}", g)
    tol = args.tol
    if action == "critical":
        results = mn.multistart(mn.LengthFunctional.uniform(g), args.starts, args.seed)
        runs = [r.to_json() for r in results]
        ends = [r.point for r in results]
        zs = np.array([x.z for x in ends])
        spread = float(np.abs(zs - zs[0]).max())
        ref = mn.sym_vector(g, 0.0)
        lengths = mn.curve_lengths(ends[0])
        target = gamma_point(g, 0.0).curve_length
        rank, sv = mn.jacobian_rank(ends[0], tol=tol)
        mem = mn.min_membership(ends[0], tol=tol)
        s.data.update(runs=runs, lengths=lengths, singular_values=sv, membership=mem.to_json())
        s.check("all_converged", all(r["converged"] for r in runs))
        s.check("common_limit", spread < 1e-4, spread=spread)
        s.check("equal_lengths", float(np.ptp(lengths)) < 1e-6, spread=float(np.ptp(lengths)))
        s.check("matches_gamma0", float(np.abs(lengths - target).max()) < 1e-4
                and float(np.abs(zs[0] - ref).max()) < 1e-4)
        s.check("rank", rank == 2 * g - 1, rank=rank)
        s.check("rank_gap", sv[rank - 1] / max(sv[rank], 1e-300) >= 1e3 if rank < len(sv) else False)
        s.check("membership", mem.member, residual=mem.residual)
    elif action == "membership":
        x = mn.gamma_chart_point(g, args.t[0] if args.t else 0.0)
        mem = mn.min_membership(x, tol=tol)
        s.data.update(mem.to_json())
        s.check("member", mem.member, residual=mem.residual)
    elif action == "minequality":
        rep = mn.verify_min_equality_sample(args.samples, args.seed, tuple(args.delete or (1, 2)), 1e-5, g)
        s.data.update(rep)
        s.check("all_members", rep["pass_rate"] == 1.0, pass_rate=rep["pass_rate"])
        s.check("worst_residual", rep["worst_residual"] < 1e-5, value=rep["worst_residual"])
    elif action == "vertex":
        res = mn.locate_admissible_vertex(args.delete or (1, 4), args.delta, g)
        s.data.update(res.to_json())
        if res.converged:
            s.check("systoles_in_boundary_multicurve", res.contained, systoles=[c.label() for c in res.systoles])
        else:
            s.data["warning"] = f"constrained minimisation did not converge: {res.status}"
    else:
        raise ValueError(action)
    return s


EXACT = [("phi", a) for a in ("build", "homology", "cycle")] + \
        [("map", a) for a in ("vertices", "flags", "cycle", "stabilizer", "equivariance")]
NUMERIC = [("hyp", a) for a in ("polygon", "gamma", "profile", "deltastar")]
OPTIMIZER = [("opt", a) for a in ("critical", "membership", "minequality", "vertex")]


def _expect(s: Suite, fixtures: dict, key: str, value):
    if key in fixtures:
        s.check(f"fixture:{key}", _jsonable(fixtures[key]) == _jsonable(value), expected=fixtures[key], got=value)


def report(g: int, args, fixtures: dict | None = None) -> dict:
    from .hyperbolic import t_grid

    suites = []
    for kind, action in EXACT:
        suites.append(phi_suite(g, action) if kind == "phi" else map_suite(g, action))
    if g == 2:
        for _, action in NUMERIC:
            suites.append(hyp_suite(g, action, t_grid() if action == "profile" else [0.0], args.tol)[0])
        for _, action in OPTIMIZER:
            suites.append(opt_suite(g, action, args))
    else:
        for kind, action in NUMERIC + OPTIMIZER:
            sk = Suite(f"{kind}.{action}", g)
            sk.skipped = True
            sk.data["reason"] = "numerical suites are verified for genus 2 only"
            suites.append(sk)
    if fixtures is not None:
        fx = Suite("fixtures", g)
        build = next(x for x in suites if x.name == "phi.build")
        _expect(fx, fixtures, "f_vector", build.data["f_vector"])
        verts = next(x for x in suites if x.name == "map.vertices")
        _expect(fx, fixtures, "vertex_images", [r["multicurve"] for r in verts.data["vertices"]])
        suites.append(fx)
    failing = [f for x in suites for f in x.failing()]
    return {"schema": SCHEMA, "genus": g, "passed": not failing, "failing": failing,
            "suites": [x.to_json() for x in suites],
            "note": "systoles are computed relative to a finite curve dictionary"}


# --------------------------------------------------------------------------
# argument handling


def _genus(text: str) -> int:
    try:
        g = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"genus must be an integer, got {text!r}") from None
    if g < 2:
        raise argparse.ArgumentTypeError("genus must be at least 2")
    return g


def _positive(text: str) -> float:
    x = float(text)
    if not x > 0:
        raise argparse.ArgumentTypeError("must be positive")
    return x


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--genus", type=_genus, default=2)
    common.add_argument("--out", type=Path, default=None, help="output directory (default $STEINBERG_OUT)")
    common.add_argument("--tol", type=_positive, default=1e-6)
    common.add_argument("--seed", type=int, default=0)

    p = argparse.ArgumentParser(prog="steinberg", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    ph = sub.add_parser("phi", parents=[common], help="the sphere of non-crossing diagonals")
    ph.add_argument("action", choices=["build", "homology", "cycle"])

    mp = sub.add_parser("map", parents=[common], help="the map to multicurves")
    mp.add_argument("action", choices=["vertices", "flags", "cycle", "stabilizer", "equivariance"])
    mp.add_argument("--model", choices=["literal", "union", "both"], default="literal")

    hp = sub.add_parser("hyp", parents=[common], help="hyperbolic constructions")
    hp.add_argument("action", choices=["polygon", "gamma", "profile", "deltastar"])
    hp.add_argument("--t", type=parse_range, default=None, help="value or start:stop:step")
    hp.add_argument("--svg", action="store_true", help="write the fundamental domain picture")

    op = sub.add_parser("opt", parents=[common], help="length function minimisation")
    op.add_argument("action", choices=["critical", "membership", "minequality", "vertex"])
    op.add_argument("--starts", type=int, default=20)
    op.add_argument("--samples", type=int, default=10)
    op.add_argument("--delete", type=_parse_curves, default=None, help="curves to delete, e.g. c1,c4")
    op.add_argument("--delta", type=_positive, default=0.05)
    op.add_argument("--t", type=parse_range, default=None)

    rp = sub.add_parser("report", parents=[common], help="all suites in one bundle")
    rp.add_argument("--fixtures", type=Path, default=None, help="JSON file of expected values")
    rp.add_argument("--starts", type=int, default=20)
    rp.add_argument("--samples", type=int, default=10)
    rp.add_argument("--delete", type=_parse_curves, default=None)
    rp.add_argument("--delta", type=_positive, default=0.05)
    rp.add_argument("--t", type=parse_range, default=None)
    return p


def _emit(out: Path | None, name: str, text: str) -> None:
    if out is None:
        return
    out.mkdir(parents=True, exist_ok=True)
    (out / name).write_text(text)


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    out = args.out or (Path(os.environ[ENV_OUT]) if os.environ.get(ENV_OUT) else None)
    g = args.genus
    stem = f"{args.command}_{getattr(args, 'action', 'bundle')}_g{g}"

    if args.command == "opt" and args.delete is not None and any(not 0 <= i < 2 * g + 2 for i in args.delete):
        parser.error(f"curve indices must lie in 0..{2 * g + 1}")

    if args.command == "report":
        fixtures = None
        if args.fixtures is not None:
            try:
                fixtures = json.loads(args.fixtures.read_text())
                if not isinstance(fixtures, dict):
                    raise ValueError("fixture file must hold a JSON object")
            except (OSError, ValueError) as exc:
                bundle = {"schema": SCHEMA, "genus": g, "passed": False,
                          "failing": ["fixtures.load"], "error": str(exc)}
                print(dumps(bundle))
                return 1
        bundle = report(g, args, fixtures)
        text = dumps(bundle)
        _emit(out, stem + ".json", text)
        print(text)
        for name in bundle["failing"]:
            print(f"FAILED {name}", file=sys.stderr)
        return 0 if bundle["passed"] else 1

    extra = None
    if args.command == "phi":
        s = phi_suite(g, args.action)
    elif args.command == "map":
        s = map_suite(g, args.action, args.model)
    elif args.command == "hyp":
        ts = args.t
        if ts is None:
            from .hyperbolic import t_grid

            ts = t_grid() if args.action == "profile" else [0.0]
        if args.action == "profile":
            # the profile is even in t; mirror one-sided grids so that the
            # table shows it and the second difference at 0 is defined
            ts = sorted({round(s * t, 12) for t in ts for s in (1, -1)})
        s, extra = hyp_suite(g, args.action, ts, args.tol)
    else:
        if g != 2 and args.action != "membership":
            print(f"warning: optimizer suites are only verified for genus 2", file=sys.stderr)
        s = opt_suite(g, args.action, args)

    text = dumps(s.to_json())
    _emit(out, stem + ".json", text)
    if extra is not None:
        if args.command == "hyp" and args.action == "profile":
            _emit(out, stem + ".csv", extra)
            s.data["csv"] = stem + ".csv"
        elif args.command == "hyp" and args.action == "polygon" and args.svg:
            _emit(out if out is not None else Path("."), stem + ".svg", extra)
    print(text)
    if args.command == "hyp" and args.action == "profile" and out is None:
        print(extra, end="")
    for name in s.failing():
        print(f"FAILED {name}", file=sys.stderr)
    return 0 if s.passed else 1


if __name__ == "__main__":
    sys.exit(main())
