"""Command-line front end: JSON vertex files in, JSON certificate reports out.

Exit codes: 0 when a certificate (or a certified verdict) was produced, 2 when
the inputs are fine but no witness could be certified, 1 for usage, IO and
malformed-input problems.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys
from typing import Any

import numpy as np

from . import affine, oracle, perturb, simplex
from .errors import (
    CannotCertifyError,
    DimensionError,
    InvalidInputError,
    ResourceError,
)
from .vecnorm import get_eta, tolerance

SCHEMA_VERSION = 1
SEED_ENV = "SIMPLEX_CERT_SEED"

EXIT_OK = 0
EXIT_ERROR = 1
EXIT_CANNOT_CERTIFY = 2

PROVENANCE = {
    "margin_c": "l1 independence margin: sqrt(Gram eigenvalue lower bound)/sqrt(n), best base vertex",
    "lip_forward": "diameter of the vertex set; bounds the coordinate map in l1",
    "lip_inverse_bound": "1/margin_c",
    "affine_delta": "half the linear-independence radius c/(2n+1) of the base differences",
    "aff_residual": "least-squares distance from the point to the affine hull",
    "witness_margin": "smallest coordinate (inside) or violated coordinate / hull distance (outside)",
    "radius_r": "min coordinate * margin_c / 2 (forward modulus at epsilon = min coordinate)",
    "min_coeff_m": "smallest barycentric coordinate",
    "bound": "lambda_nu * height of vertex nu over the opposite facet, less the rounding of the point",
    "height": "distance from vertex nu to the affine hull of the opposite facet",
    "line_parameter": "1/(1 - lambda_nu): where the ray from vertex nu through the point meets the facet",
    "stability_delta": "forward modulus at eps = min(l, 1-l, (1-l)^2 r/(2M))/2",
    "count": "cone construction over a grid of [0,1] and a net of the lower face",
    "worst_gap": "largest sampled distance from the simplex to the net",
    "delta": "vertex-perturbation radius: min of the chain below",
    "delta_1": "min(affine_delta, 1/2)",
    "m": "smallest coordinate of the interior point",
    "kappa": "matrix size n+1; column-sum norm <= kappa * max-entry norm",
    "inversion_target": "m / (2 kappa)",
    "inversion_delta": "entry radius around I with det > 1/2 and inverse deviation < target",
    "delta_2": "min(delta_1, inversion_delta)",
    "modulus_delta": "forward modulus at eps = delta_2",
    "min_gamma": "smallest recoordinated weight, from the transposed coordinate system",
    "gamma_deviation_l1": "l1 distance between old and recoordinated weights",
    "edge_min": "shortest edge",
    "edge_max": "longest edge",
}


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _fmt(x: Any) -> str:
    # every float goes out with 17 significant digits
    if isinstance(x, (bool, np.bool_)):
        return "true" if x else "false"
    if x is None:
        return "null"
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    if isinstance(x, (float, np.floating)):
        x = float(x)
        if not math.isfinite(x):
            return "null"
        return format(x, ".17g")
    if isinstance(x, str):
        return json.dumps(x)
    if isinstance(x, np.ndarray):
        return _fmt(x.tolist())
    if isinstance(x, dict):
        return "{" + ", ".join(f"{json.dumps(str(k))}: {_fmt(v)}" for k, v in x.items()) + "}"
    if isinstance(x, (list, tuple)):
        return "[" + ", ".join(_fmt(v) for v in x) + "]"
    raise TypeError(f"cannot serialise {type(x).__name__}")


def dumps(report: dict) -> str:
    return _fmt(report)


def load_vertex_file(path: str) -> dict:
    """Read and validate a vertex file; raises OSError, ValueError or DimensionError."""
    with open(path, encoding="utf-8") as fh:
        data = json.load(fh)
    if not isinstance(data, dict):
        raise InvalidInputError(f"{path}: top level must be a JSON object")
    dim = data.get("dimension")
    if isinstance(dim, bool) or not isinstance(dim, int) or dim < 1:
        raise InvalidInputError(f"{path}: 'dimension' must be a positive integer")
    verts = data.get("vertices")
    if not isinstance(verts, list) or not verts:
        raise InvalidInputError(f"{path}: 'vertices' must be a non-empty list")
    for i, v in enumerate(verts):
        if not isinstance(v, list) or len(v) != dim:
            raise DimensionError(f"{path}: vertex {i} does not have {dim} coordinates")
        if not all(isinstance(t, (int, float)) and not isinstance(t, bool) for t in v):
            raise InvalidInputError(f"{path}: vertex {i} has non-numeric coordinates")
    if len(verts) > dim + 1:
        raise DimensionError(f"{path}: {len(verts)} vertices exceed dimension + 1 = {dim + 1}")
    points = data.get("points", {})
    if not isinstance(points, dict):
        raise InvalidInputError(f"{path}: 'points' must be an object mapping names to coordinates")
    for name, p in points.items():
        if not isinstance(p, list) or len(p) != dim:
            raise DimensionError(f"{path}: point {name!r} does not have {dim} coordinates")
    tol = data.get("tolerance")
    if tol is not None and (not isinstance(tol, (int, float)) or not tol > 0):
        raise InvalidInputError(f"{path}: 'tolerance' must be a positive number")
    return {
        "dimension": dim,
        "vertices": np.array(verts, dtype=float),
        "points": {k: np.array(v, dtype=float) for k, v in points.items()},
        "tolerance": tol,
    }


def _resolve_point(text: str | None, vfile: dict) -> np.ndarray | None:
    if text is None:
        return None
    if text in vfile["points"]:
        return vfile["points"][text]
    try:
        p = np.array([float(t) for t in text.split(",")])
    except ValueError:
        raise UsageError(f"--point {text!r} is neither a coordinate list nor a named point") from None
    if p.size != vfile["dimension"]:
        raise DimensionError(f"--point has {p.size} coordinates, expected {vfile['dimension']}")
    if not np.all(np.isfinite(p)):
        raise InvalidInputError("--point has non-finite coordinates")
    return p


def _point_or_barycentre(args, vfile, s):
    p = _resolve_point(args.point, vfile)
    return simplex.barycentre(s)[0] if p is None else p


def _constants_values(s: simplex.Simplex) -> dict:
    c = s.constants
    return {"margin_c": c.margin_c, "lip_forward": c.lip_forward,
            "lip_inverse_bound": c.lip_inverse_bound}


class _Outcome:
    def __init__(self, values=None, status="certified", vectors=None, message=None,
                 diagnostics=None, **extra):
        self.values = values or {}
        self.diagnostics = diagnostics or {}
        self.status = status
        self.vectors = vectors or {}
        self.message = message
        self.extra = extra


def cmd_certify_independence(args, vfile):
    s = simplex.new_simplex(vfile["vertices"])
    values = _constants_values(s)
    if s.n > 0:
        values["affine_delta"] = perturb.affine_perturbation_delta(s.vertices)
    return _Outcome(values, diagnostics={"n": s.n, "dimension": s.dim,
                                         "base_index": s.constants.base_index})


def cmd_barycentric(args, vfile):
    s = simplex.new_simplex(vfile["vertices"])
    x = _resolve_point(args.point, vfile)
    lam, resid = s.barycentric(x)
    cls = affine.convexity_class(lam) if resid <= get_eta() * s.constants.scale else None
    return _Outcome(diagnostics={"aff_residual": resid}, vectors={"lambda": lam},
                    convexity=cls.value if cls else "off-hull")


def cmd_classify(args, vfile):
    s = simplex.new_simplex(vfile["vertices"])
    v = simplex.classify(s, _resolve_point(args.point, vfile))
    undecided = v.verdict is simplex.Membership.INDETERMINATE
    return _Outcome({"witness_margin": v.witness_margin},
                    diagnostics={"aff_residual": v.aff_residual},
                    status="cannot-certify" if undecided else "certified",
                    vectors={"lambda": v.lam}, verdict=v.verdict.value,
                    message="membership is within tolerance of the boundary" if undecided else None)


def cmd_interior(args, vfile):
    s = simplex.new_simplex(vfile["vertices"])
    cert = simplex.relint_certificate(s, _point_or_barycentre(args, vfile, s))
    return _Outcome({"radius_r": cert.radius_r, "min_coeff_m": cert.min_coeff_m,
                     "margin_c": s.constants.margin_c}, vectors={"lambda": cert.lam})


def _convex_coords(s, x):
    v = simplex.classify(s, x)
    if v.verdict is simplex.Membership.CERTIFIED_OUTSIDE:
        raise CannotCertifyError("point is certifiably outside the simplex")
    return v.lam


def cmd_face_distance(args, vfile):
    s = simplex.new_simplex(vfile["vertices"])
    lam = _convex_coords(s, _point_or_barycentre(args, vfile, s))
    bound = simplex.face_distance_lb(s, lam, args.vertex)
    height = {"height": simplex.vertex_face_height(s, args.vertex)}
    if bound > 0:
        return _Outcome({"bound": bound, **height}, vectors={"lambda": lam})
    return _Outcome(status="cannot-certify", diagnostics={"bound": bound, **height},
                    vectors={"lambda": lam},
                    message=f"coordinate {args.vertex} is not certifiably positive")


def cmd_project_face(args, vfile):
    s = simplex.new_simplex(vfile["vertices"])
    lam = _convex_coords(s, _point_or_barycentre(args, vfile, s))
    proj = simplex.face_projection(s, lam, args.vertex)
    values = {"line_parameter": 1.0 / (1.0 - lam[args.vertex])}
    if args.radius is not None:
        values["stability_delta"] = simplex.projection_stability(s, lam, args.vertex, args.radius)
    return _Outcome(values, vectors={"lambda": lam, "b": proj.point, "face_coeffs": proj.coeffs})


def cmd_net(args, vfile):
    s = simplex.new_simplex(vfile["vertices"])
    net = simplex.epsilon_net(s, args.epsilon, cap=args.cap)
    values = {"epsilon": net.epsilon, "count": len(net)}
    diagnostics = {}
    vectors = {"points": net.points, "coords": net.coords} if args.include_points else {}
    if args.validate:
        cfg = oracle.OracleConfig(seed=args.seed, samples=args.samples)
        ok, diagnostics["worst_gap"] = oracle.coverage_check(net, s, cfg)
        if not ok:
            return _Outcome(values, status="cannot-certify", vectors=vectors,
                            diagnostics=diagnostics, message="sampled coverage check failed")
    return _Outcome(values, vectors=vectors, diagnostics=diagnostics)


def cmd_perturbation_delta(args, vfile):
    s = simplex.new_simplex(vfile["vertices"])
    cert = perturb.vertex_perturbation_delta(s, _point_or_barycentre(args, vfile, s))
    return _Outcome(dict(cert.chain))


def cmd_recoordinate(args, vfile):
    s = simplex.new_simplex(vfile["vertices"])
    new = load_vertex_file(args.new)
    if new["vertices"].shape != s.vertices.shape:
        raise DimensionError("--new must list as many vertices, of the same dimension")
    x = _point_or_barycentre(args, vfile, s)
    lam = _convex_coords(s, x)
    gamma = perturb.recoordinate(s, new["vertices"], lam)
    values = {"min_gamma": float(np.min(gamma))}
    diagnostics = {"gamma_deviation_l1": float(np.sum(np.abs(gamma - lam)))}
    vectors = {"lambda": lam, "gamma": gamma}
    if values["min_gamma"] > get_eta():
        return _Outcome(values, vectors=vectors, diagnostics=diagnostics)
    return _Outcome(values, status="cannot-certify", vectors=vectors, diagnostics=diagnostics,
                    message="recoordinated weights are not certifiably positive")


def cmd_regular_simplex(args, vfile):
    s = simplex.regular_simplex(args.n)
    A = s.vertices
    edges = [float(np.linalg.norm(A[i] - A[j]))
             for i in range(len(A)) for j in range(i + 1, len(A))]
    b, _ = simplex.barycentre(s)
    values = {"n": s.n, "edge_min": min(edges), "edge_max": max(edges), **_constants_values(s)}
    return _Outcome(values, vectors={"vertices": A, "barycentre": b})


COMMANDS = {
    "certify-independence": cmd_certify_independence,
    "barycentric": cmd_barycentric,
    "classify": cmd_classify,
    "interior": cmd_interior,
    "face-distance": cmd_face_distance,
    "project-face": cmd_project_face,
    "net": cmd_net,
    "perturbation-delta": cmd_perturbation_delta,
    "recoordinate": cmd_recoordinate,
    "regular-simplex": cmd_regular_simplex,
}


def _seed_default() -> int:
    raw = os.environ.get(SEED_ENV)
    if raw is None:
        return oracle.DEFAULT_SEED
    try:
        return int(raw)
    except ValueError:
        raise UsageError(f"{SEED_ENV}={raw!r} is not an integer") from None


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--tolerance", type=float, default=None,
                        help="positivity tolerance eta (overrides the file's 'tolerance')")
    common.add_argument("--seed", type=int, default=None,
                        help=f"oracle seed (default: ${SEED_ENV} or {oracle.DEFAULT_SEED})")

    parser = _Parser(prog="simplex-cert", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def add(name, help_, with_file=True):
        p = sub.add_parser(name, help=help_, parents=[common])
        if with_file:
            p.add_argument("file", help="vertex file (JSON)")
        return p

    add("certify-independence", "certify affine independence and report the margin")
    add("barycentric", "barycentric coordinates of a point").add_argument("--point", required=True)
    add("classify", "certified membership verdict").add_argument("--point", required=True)
    add("interior", "relative-interior radius").add_argument("--point")
    for name in ("face-distance", "project-face"):
        p = add(name, f"{name.replace('-', ' ')} for the facet opposite --vertex")
        p.add_argument("--point")
        p.add_argument("--vertex", type=int, required=True, help="0-based vertex index")
        if name == "project-face":
            p.add_argument("--radius", type=float, help="also report the stability radius")
    p = add("net", "epsilon-net of the simplex")
    p.add_argument("--epsilon", type=float, required=True)
    p.add_argument("--cap", type=int, default=simplex.DEFAULT_NET_CAP)
    p.add_argument("--validate", action="store_true", help="run the sampled coverage check")
    p.add_argument("--samples", type=int, default=100_000)
    p.add_argument("--include-points", action="store_true")
    add("perturbation-delta", "vertex-perturbation certificate").add_argument("--point")
    p = add("recoordinate", "weights of a point relative to perturbed vertices")
    p.add_argument("--new", required=True, help="vertex file with the perturbed vertices")
    p.add_argument("--point")
    add("regular-simplex", "the regular simplex with edge sqrt(2)", with_file=False) \
        .add_argument("n", type=int)
    return parser


def _error_report(echo, kind: str, message: str, **extra) -> dict:
    return {
        "schema_version": SCHEMA_VERSION,
        "command": echo,
        "status": "error",
        "error": {"type": kind, "message": message, **extra},
    }


def run(argv: list[str]) -> tuple[int, dict]:
    """Execute one command; returns ``(exit_code, report)`` without printing."""
    argv = list(argv)
    echo: dict = {"name": None, "argv": argv}
    try:
        args = build_parser().parse_args(argv)
        echo["name"] = args.command
        if args.seed is None:
            args.seed = _seed_default()
        vfile = load_vertex_file(args.file) if getattr(args, "file", None) else None
        eta = args.tolerance
        if eta is None and vfile is not None:
            eta = vfile["tolerance"]
        with tolerance(eta if eta is not None else get_eta()):
            echo.update(tolerance=get_eta(), seed=args.seed)
            outcome = COMMANDS[args.command](args, vfile)
    except UsageError as exc:
        return EXIT_ERROR, _error_report(echo, "usage", str(exc))
    except OSError as exc:
        return EXIT_ERROR, _error_report(echo, "io", str(exc))
    except json.JSONDecodeError as exc:
        return EXIT_ERROR, _error_report(echo, "malformed-json", str(exc))
    except DimensionError as exc:
        return EXIT_ERROR, _error_report(echo, "dimension", str(exc))
    except InvalidInputError as exc:
        return EXIT_ERROR, _error_report(echo, "invalid-input", str(exc))
    except ResourceError as exc:
        return EXIT_ERROR, _error_report(echo, "resource", str(exc), required=exc.required)
    except CannotCertifyError as exc:
        report = {
            "schema_version": SCHEMA_VERSION,
            "command": echo,
            "status": "cannot-certify",
            "values": {},
            "provenance": {},
            "message": str(exc),
            "reason": type(exc).__name__,
        }
        return EXIT_CANNOT_CERTIFY, report

    report = {
        "schema_version": SCHEMA_VERSION,
        "command": echo,
        "status": outcome.status,
        "values": outcome.values,
        "provenance": {k: PROVENANCE[k] for k in outcome.values if k in PROVENANCE},
    }
    if outcome.diagnostics:
        report["diagnostics"] = outcome.diagnostics
    report.update(outcome.extra)
    if outcome.vectors:
        report["vectors"] = outcome.vectors
    if outcome.message:
        report["message"] = outcome.message
    code = EXIT_OK if outcome.status == "certified" else EXIT_CANNOT_CERTIFY
    return code, report


def main(argv: list[str] | None = None) -> int:
    argv = sys.argv[1:] if argv is None else argv
    if any(a in ("-h", "--help") for a in argv):
        build_parser().parse_args(argv)  # argparse prints help and exits 0
    code, report = run(argv)
    if code == EXIT_ERROR:
        print(f"simplex-cert: {report['error']['message']}", file=sys.stderr)
    elif code == EXIT_CANNOT_CERTIFY:
        print(f"simplex-cert: cannot certify: {report.get('message', '')}", file=sys.stderr)
    print(dumps(report))
    return code


if __name__ == "__main__":
    sys.exit(main())
