"""Command-line front end.

Every command produces one JSON report (optionally rendered as text).  Exit
codes: 0 computed, 1 input error, 2 precondition violated, 3 inconclusive or
not computable.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from functools import reduce
from typing import Sequence

from . import ZETA_CONVENTION, __version__
from .critloc import (
    DEFAULT_RADIUS,
    DEFAULT_SAMPLES,
    classify_faces,
    fibration_verdict,
    jacobian,
)
from .errors import InputError, MilnorLabError
from .newton import (
    face_function,
    multiplicity_condition,
    newton_boundary,
    newton_number_2d,
    nondegeneracy_2d,
    weighted_degree,
)
from .polycore.poly import Polynomial, format_polynomial, parse_polynomial
from .polycore.roots import DEFAULT_TOL as ROOT_TOL
from .polycore.series import ZERO_REL
from .puiseux import SNAP_TOL, branches, verify_branch
from .zeta import zeta_mixed_homog3, zeta_mixed_plane, zeta_plane, zeta_plane_product

COMMANDS = ("newton", "multcond", "zeta", "zeta-mixed", "zeta3h", "jacobian", "puiseux", "fibration")
NEEDS_G = {"multcond", "zeta-mixed", "zeta3h", "jacobian", "fibration"}
EXIT_OK, EXIT_INPUT, EXIT_PRECONDITION, EXIT_INCONCLUSIVE = 0, 1, 2, 3


@dataclass
class Job:
    command: str
    f: str | None = None
    g: str | None = None
    variables: list[str] | None = None
    order: int = 12
    tol: float = 1e-9
    samples: int = DEFAULT_SAMPLES
    radius: float = DEFAULT_RADIUS
    format: str = "json"

    def validate(self) -> None:
        if self.command not in COMMANDS:
            raise InputError(f"unknown command {self.command!r}")
        if not self.f:
            raise InputError(f"command {self.command!r} requires -f")
        if self.command in NEEDS_G and not self.g:
            raise InputError(f"command {self.command!r} requires -g")
        if self.format not in ("json", "text"):
            raise InputError("format must be json or text")
        if self.order < 4:
            raise InputError("--order must be at least 4")
        if not self.tol > 0:
            raise InputError("--tol must be positive")
        if self.samples < 256:
            raise InputError("--samples must be at least 256")
        if not 0 < self.radius < 1:
            raise InputError("--radius must lie in (0, 1)")

    def resolved_variables(self) -> list[str]:
        if self.variables:
            return list(self.variables)
        return ["z1", "z2", "z3"] if self.command == "zeta3h" else ["x", "y"]

    @classmethod
    def from_dict(cls, d: dict) -> "Job":
        if not isinstance(d, dict):
            raise InputError("each job must be a JSON object")
        if "command" not in d:
            raise InputError("job has no 'command'")
        variables = d.get("vars", d.get("variables"))
        if isinstance(variables, str):
            variables = [v.strip() for v in variables.split(",") if v.strip()]
        try:
            return cls(
                command=str(d["command"]),
                f=d.get("f"),
                g=d.get("g"),
                variables=variables,
                order=int(d.get("order", 12)),
                tol=float(d.get("tol", 1e-9)),
                samples=int(d.get("samples", DEFAULT_SAMPLES)),
                radius=float(d.get("radius", DEFAULT_RADIUS)),
                format=str(d.get("format", "json")),
            )
        except (TypeError, ValueError) as exc:
            raise InputError(f"malformed job: {exc}") from None


# ---------------------------------------------------------------------------
# per-command computations


def _intercept(c):
    return "inf" if c == math.inf else c


def _newton_json(p: Polynomial) -> dict:
    data = newton_boundary(p)
    faces = []
    for face in data.faces:
        entry = {
            "P": list(face.normal),
            "d": face.d,
            "dim": face.dim,
            "lattice_points": [list(e) for e in face.lattice_points],
        }
        if data.nvars == 2:
            ff = face_function(p, face.normal)
            entry["face_function"] = format_polynomial(ff.polynomial)
            entry["edge_polynomial"] = [str(c) for c in ff.edge_polynomial]
            entry["distinct_roots"] = ff.distinct_roots
        faces.append(entry)
    out = {
        "polynomial": format_polynomial(p),
        "support": [list(e) for e in data.support],
        "vertices": [list(v) for v in data.vertices],
        "faces": faces,
        "intercepts": [_intercept(c) for c in data.intercepts],
        "convenient": data.convenient,
    }
    if data.nvars == 2:
        ok, bad = nondegeneracy_2d(p)
        out["nondegenerate"] = ok
        if bad:
            out["degenerate_face"] = list(bad)
        if data.convenient:
            out["newton_number"] = newton_number_2d(p)
    return out


def _factored(p: Polynomial) -> str:
    if p.is_zero():
        return "0"
    mono = p.monomial_content()
    rest = p.divide_monomial(mono)
    num = reduce(lambda a, b: math.gcd(a, b), (c.numerator for c in rest.terms.values()), 0)
    den = reduce(lambda a, b: a * b // math.gcd(a, b), (c.denominator for c in rest.terms.values()), 1)
    content = Fraction(num, den)
    rest = rest * (1 / content)
    parts = []
    if content != 1:
        parts.append(str(content))
    parts += [v if k == 1 else f"{v}^{k}" for v, k in zip(p.variables, mono) if k]
    body = format_polynomial(rest)
    if len(rest.terms) > 1 or not parts:
        parts.append(f"({body})" if parts else body)
    elif body != "1":
        parts.append(body)
    return "*".join(parts)


def _compute(job: Job, f: Polynomial, g: Polynomial | None) -> tuple[dict, int]:
    cmd = job.command
    if cmd == "newton":
        out = {"f": _newton_json(f)}
        if g is not None:
            out["g"] = _newton_json(g)
        return out, EXIT_OK
    if cmd == "multcond":
        v = multiplicity_condition(f, g)
        out = v.to_json()
        if v.witness is not None:
            out["d_f"] = weighted_degree(v.witness, f)
            out["d_g"] = weighted_degree(v.witness, g)
        out["checked_by"] = list(v.checked_by)
        return out, EXIT_OK
    if cmd == "zeta":
        out = {"zeta_f": zeta_plane(f).to_json()}
        if g is not None:
            out["zeta_g"] = zeta_plane(g).to_json()
            out["zeta_h"] = zeta_plane_product(f, g).to_json()
        return out, EXIT_OK
    if cmd == "zeta-mixed":
        return {"zeta_H": zeta_mixed_plane(f, g).to_json()}, EXIT_OK
    if cmd == "zeta3h":
        return {"zeta_H": zeta_mixed_homog3(f, g).to_json()}, EXIT_OK
    if cmd == "jacobian":
        J = jacobian(f, g)
        out = {"jacobian": format_polynomial(J), "factored": _factored(J)}
        if not J.is_zero():
            out["faces"] = [fc.to_json() for fc in classify_faces(J, f, g)]
        return out, EXIT_OK
    if cmd == "puiseux":
        bs = branches(f, job.order)
        items = []
        for b in bs:
            entry = b.to_json()
            res = verify_branch(f, b)
            entry["residual_order"] = "exact" if res == math.inf else res
            items.append(entry)
        return {"branches": items}, EXIT_OK
    if cmd == "fibration":
        rep = fibration_verdict(f, g, job.order, job.tol, job.samples, job.radius)
        code = EXIT_INCONCLUSIVE if rep.verdict == "inconclusive" else EXIT_OK
        return rep.to_json(), code
    raise InputError(f"unknown command {cmd!r}")


def _header(job: Job) -> dict:
    return {
        "tool": "milnorlab",
        "version": __version__,
        "command": job.command,
        "input": {"f": job.f, "g": job.g, "variables": job.resolved_variables()},
        "convention": ZETA_CONVENTION,
        "tolerances": {
            "unit_modulus": job.tol,
            "root_residual": ROOT_TOL,
            "series_zero_relative": ZERO_REL,
            "rational_snap": SNAP_TOL,
        },
        "options": {"order": job.order, "samples": job.samples, "radius": job.radius},
    }


def run(job: Job) -> tuple[dict, int]:
    """Execute one job; never raises for library errors."""
    try:
        doc = _header(job)
    except Exception:  # header needs only plain fields; be defensive for batch input
        doc = {"tool": "milnorlab", "version": __version__, "convention": ZETA_CONVENTION}
    try:
        job.validate()
        variables = job.resolved_variables()
        f = parse_polynomial(job.f, variables)
        g = parse_polynomial(job.g, variables) if job.g else None
        result, code = _compute(job, f, g)
        doc["status"] = "ok" if code == EXIT_OK else "inconclusive"
        doc["result"] = result
    except MilnorLabError as exc:
        code = exc.exit_code
        doc["status"] = "error"
        doc["error"] = {"type": type(exc).__name__, "message": str(exc)}
    except Exception as exc:  # noqa: BLE001 - the contract is "no stack traces"
        code = EXIT_INCONCLUSIVE
        doc["status"] = "error"
        doc["error"] = {"type": "InternalError", "message": f"{type(exc).__name__}: {exc}"}
    doc["exit_code"] = code
    return doc, code


def _threads() -> int:
    raw = os.environ.get("MILNORLAB_THREADS", "")
    try:
        n = int(raw)
    except ValueError:
        n = os.cpu_count() or 1
    return max(1, n)


def run_batch(path: str) -> tuple[dict, int]:
    doc: dict = {"tool": "milnorlab", "version": __version__, "convention": ZETA_CONVENTION}
    try:
        with open(path, encoding="utf-8") as fh:
            raw = json.load(fh)
        if not isinstance(raw, list):
            raise InputError("job file must contain a JSON list of jobs")
    except (OSError, json.JSONDecodeError, InputError) as exc:
        doc.update({"status": "error", "error": {"type": "InputError", "message": str(exc)}, "exit_code": 1})
        return doc, EXIT_INPUT

    def one(item):
        try:
            job = Job.from_dict(item)
        except InputError as exc:
            return (
                {"status": "error", "error": {"type": "InputError", "message": str(exc)}, "exit_code": 1},
                EXIT_INPUT,
            )
        return run(job)

    with ThreadPoolExecutor(max_workers=min(_threads(), max(1, len(raw)))) as pool:
        results = list(pool.map(one, raw))
    code = max((c for _, c in results), default=EXIT_OK)
    doc["jobs"] = [d for d, _ in results]
    doc["exit_code"] = code
    return doc, code


# ---------------------------------------------------------------------------
# rendering


def to_json_text(doc: dict) -> str:
    return json.dumps(doc, indent=2, ensure_ascii=False, allow_nan=False) + "\n"


def to_text(doc, indent: int = 0) -> str:
    pad = "  " * indent
    lines = []
    if isinstance(doc, dict):
        for k, v in doc.items():
            if isinstance(v, (dict, list)) and v:
                lines.append(f"{pad}{k}:")
                lines.append(to_text(v, indent + 1))
            else:
                lines.append(f"{pad}{k}: {_scalar(v)}")
    elif isinstance(doc, list):
        for v in doc:
            if isinstance(v, (dict, list)) and v:
                lines.append(f"{pad}-")
                lines.append(to_text(v, indent + 1))
            else:
                lines.append(f"{pad}- {_scalar(v)}")
    else:
        lines.append(f"{pad}{_scalar(doc)}")
    return "\n".join(lines)


def _scalar(v) -> str:
    if v is None:
        return "-"
    if isinstance(v, bool):
        return "yes" if v else "no"
    if isinstance(v, (list, dict)):
        return "[]" if isinstance(v, list) else "{}"
    return str(v)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="milnorlab",
        description="Newton-boundary invariants, zeta functions and critical-curve tests for H = f*conj(g).",
    )
    parser.add_argument("command", choices=COMMANDS + ("batch",))
    parser.add_argument("jobfile", nargs="?", help="job file (batch only)")
    parser.add_argument("-f", "--f", dest="f", help="polynomial f")
    parser.add_argument("-g", "--g", dest="g", help="polynomial g")
    parser.add_argument("--vars", help="comma separated variable names (default x,y; z1,z2,z3 for zeta3h)")
    parser.add_argument("--order", type=int, default=12, help="Puiseux terms beyond the leading one")
    parser.add_argument("--tol", type=float, default=1e-9, help="unit-modulus tolerance")
    parser.add_argument("--samples", type=int, default=DEFAULT_SAMPLES, help="circle samples")
    parser.add_argument("--radius", type=float, default=DEFAULT_RADIUS, help="circle radius for sampling")
    parser.add_argument("--format", choices=("json", "text"), default="json")
    parser.add_argument("--out", help="write the report here instead of stdout")
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_INPUT if exc.code not in (0, None) else 0
    if args.command == "batch":
        if not args.jobfile:
            print("batch needs a job file", file=sys.stderr)
            return EXIT_INPUT
        doc, code = run_batch(args.jobfile)
    else:
        variables = [v.strip() for v in args.vars.split(",")] if args.vars else None
        job = Job(
            command=args.command,
            f=args.f,
            g=args.g,
            variables=variables,
            order=args.order,
            tol=args.tol,
            samples=args.samples,
            radius=args.radius,
            format=args.format,
        )
        doc, code = run(job)
    text = to_json_text(doc) if args.format == "json" else to_text(doc) + "\n"
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    if code and doc.get("error"):
        print(f"milnorlab: {doc['error']['message']}", file=sys.stderr)
    return code


if __name__ == "__main__":
    sys.exit(main())
