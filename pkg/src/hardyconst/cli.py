"""Command-line surface: constants, angle tables, certification, validation.

Angles are written as multiples of pi ("1.5pi") or as plain radians;
tables carry both units.  Output documents are JSON (default) or CSV with
floats fixed to 12 significant digits, so identical invocations produce
byte-identical files.  Exit codes: 0 success, 2 input or domain error,
3 numerical failure.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import os
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Optional

from . import angles as angles_mod
from . import certify as certify_mod
from . import hardycore, odeengine, rayleigh, specfun
from .certify import Dbeta, Ebg, OneReflexPolygon, Sector, SectorCapConvex

__all__ = ["RunConfig", "main", "parse_angle", "parse_domain_file"]

PI = math.pi

_WORKER_ENV = "HARDY_WORKERS"


@dataclass(frozen=True)
class RunConfig:
    """One command invocation: everything the output document depends on."""

    command: str
    params: dict = field(default_factory=dict)


def parse_angle(text: str) -> float:
    """Angle from '1.5pi' (multiples of pi) or a plain radian literal."""
    t = text.strip().lower()
    try:
        if t.endswith("pi"):
            head = t[:-2]
            return (float(head) if head not in ("", "+", "-") else float(head + "1")) * PI
        return float(t)
    except ValueError:
        raise ValueError(f"cannot parse angle {text!r}; use e.g. '1.5pi' or a radian value")


def _parse_sweep(text: str) -> list:
    parts = text.split(":")
    if len(parts) != 3:
        raise ValueError(f"sweep {text!r} must look like start:stop:count")
    lo, hi = parse_angle(parts[0]), parse_angle(parts[1])
    count = int(parts[2])
    if count < 2 or not hi > lo:
        raise ValueError(f"sweep {text!r} needs an increasing range and count >= 2")
    return [lo + (hi - lo) * k / (count - 1) for k in range(count)]


def _round12(x):
    if isinstance(x, float):
        return float(f"{x:.12g}")
    return x


def _round_tree(obj):
    if isinstance(obj, dict):
        return {k: _round_tree(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_round_tree(v) for v in obj]
    return _round12(obj)


def _emit(document: dict, rows: Optional[list], out: Optional[str], fmt: str) -> None:
    document = _round_tree(document)
    if out is None:
        return
    if fmt == "json":
        payload = json.dumps(document, indent=2, sort_keys=True) + "\n"
    elif fmt == "csv":
        if rows is None:
            raise ValueError("this command has no tabular output; use JSON")
        buf = io.StringIO()
        rows = _round_tree(rows)
        writer = csv.DictWriter(buf, fieldnames=list(rows[0].keys()), lineterminator="\n")
        writer.writeheader()
        for row in rows:
            writer.writerow({k: ("" if v is None else f"{v:.12g}" if isinstance(v, float) else v) for k, v in row.items()})
        payload = buf.getvalue()
    else:
        raise ValueError(f"unknown output format {fmt!r}")
    with open(out, "w", encoding="utf-8") as fh:
        fh.write(payload)


def _print_table(rows: list) -> None:
    if not rows:
        return
    keys = list(rows[0].keys())
    print("  ".join(f"{k:>16s}" for k in keys))
    for row in rows:
        cells = []
        for k in keys:
            v = row[k]
            cells.append(f"{'':>16s}" if v is None else f"{v:>16.10g}" if isinstance(v, float) else f"{str(v):>16s}")
        print("  ".join(cells))


def _workers() -> int:
    try:
        return max(1, int(os.environ.get(_WORKER_ENV, "1")))
    except ValueError:
        return 1


def _cbeta_row(args) -> dict:
    beta, check = args
    sol = hardycore.solve_c_beta(beta)
    row = {
        "beta_rad": beta,
        "beta_pi": beta / PI,
        "c": sol.c,
        "alpha": sol.alpha,
        "residual": sol.residual,
        "shoot_c": None,
    }
    if check:
        row["shoot_c"] = odeengine.shoot_c(beta).c_estimate
    return row


def _gamma_row(beta: float) -> dict:
    crit = angles_mod.gamma_star(beta)
    return {
        "beta_rad": beta,
        "beta_pi": beta / PI,
        "gamma_star_rad": crit.gamma_star,
        "gamma_star_pi": crit.gamma_star / PI,
        "gamma_star_star_rad": crit.gamma_star_star,
        "gamma_star_star_pi": None if crit.gamma_star_star is None else crit.gamma_star_star / PI,
        "argmax_theta": crit.argmax_theta,
    }


def _map_ordered(fn, items):
    if _workers() > 1 and len(items) > 1:
        with ProcessPoolExecutor(max_workers=_workers()) as pool:
            return list(pool.map(fn, items))
    return [fn(item) for item in items]


def parse_domain_file(path: str):
    """Domain description from a JSON document; angles are in pi-units."""
    with open(path, "r", encoding="utf-8") as fh:
        doc = json.load(fh)
    kind = doc.get("type")
    if kind == "sector":
        return Sector(beta=doc["beta"] * PI)
    if kind == "sector_cap":
        return SectorCapConvex(
            beta=doc["beta"] * PI,
            gamma_plus=doc["gamma_plus"] * PI,
            gamma_minus=doc["gamma_minus"] * PI,
            bounded=bool(doc.get("bounded", True)),
        )
    if kind == "polygon":
        return OneReflexPolygon(doc["vertices"])
    if kind == "ebg":
        return Ebg(beta=doc["beta"] * PI, gamma=doc["gamma"] * PI)
    if kind == "dbeta":
        return Dbeta(doc["beta"] * PI, [(t * PI, r) for t, r in doc["r_samples"]])
    raise ValueError(f"unknown domain type {kind!r}")


def _domain_to_dict(domain) -> dict:
    if isinstance(domain, Sector):
        return {"type": "sector", "beta": domain.beta / PI}
    if isinstance(domain, SectorCapConvex):
        return {
            "type": "sector_cap",
            "beta": domain.beta / PI,
            "gamma_plus": domain.gamma_plus / PI,
            "gamma_minus": domain.gamma_minus / PI,
            "bounded": domain.bounded,
        }
    if isinstance(domain, OneReflexPolygon):
        return {"type": "polygon", "vertices": [list(v) for v in domain.vertices]}
    if isinstance(domain, Ebg):
        return {"type": "ebg", "beta": domain.beta / PI, "gamma": domain.gamma / PI}
    if isinstance(domain, Dbeta):
        return {
            "type": "dbeta",
            "beta": domain.beta / PI,
            "r_samples": [[t / PI, r] for t, r in domain.r_samples],
        }
    raise TypeError(type(domain).__name__)


def _cmd_cbeta(args) -> int:
    if (args.beta is None) == (args.sweep is None):
        raise ValueError("provide exactly one of --beta or --sweep")
    betas = [parse_angle(args.beta)] if args.beta else _parse_sweep(args.sweep)
    rows = _map_ordered(_cbeta_row, [(b, args.check) for b in betas])
    config = RunConfig("cbeta", {"betas_pi": [b / PI for b in betas], "check": args.check})
    _print_table(rows)
    _emit({"command": config.command, "params": config.params, "rows": rows}, rows, args.output, args.format)
    return 0


def _cmd_betacr(args) -> int:
    bcr = hardycore.beta_critical()
    rhs = 4.0 * (specfun.gamma(0.75) / specfun.gamma(0.25)) ** 2
    residual = hardycore.equation_residual(bcr, 0.25)
    rows = [
        {
            "beta_cr_rad": bcr,
            "beta_cr_pi": bcr / PI,
            "tan_rhs": rhs,
            "residual_at_quarter": residual,
        }
    ]
    _print_table(rows)
    _emit({"command": "betacr", "params": {}, "rows": rows}, rows, args.output, args.format)
    return 0


def _cmd_gamma_star(args) -> int:
    if (args.beta is None) == (args.sweep is None):
        raise ValueError("provide exactly one of --beta or --sweep")
    betas = [parse_angle(args.beta)] if args.beta else _parse_sweep(args.sweep)
    rows = _map_ordered(_gamma_row, betas)
    _print_table(rows)
    _emit(
        {"command": "gamma-star", "params": {"betas_pi": [b / PI for b in betas]}, "rows": rows},
        rows,
        args.output,
        args.format,
    )
    return 0


def _cmd_certify(args) -> int:
    domain = parse_domain_file(args.file)
    report = certify_mod.certify_domain(domain)
    doc = {
        "command": "certify",
        "input": _domain_to_dict(domain),
        "report": report.to_dict(),
    }
    print(f"verdict: {report.verdict}")
    if report.constant is not None:
        print(f"constant: {report.constant:.10g}  ({report.constant_source})")
    for chk in report.checks:
        print(f"  [{'ok' if chk.satisfied else 'FAIL'}] {chk.name}  margin={chk.margin:.6g}")
    _emit(doc, None, args.output, "json" if args.format == "csv" else args.format)
    return 0


def _cmd_validate(args) -> int:
    domain = parse_domain_file(args.file)
    grid = rayleigh.build_grid(domain, args.n, radius=args.radius)
    est = rayleigh.estimate_constant(grid)
    doc = {
        "command": "validate",
        "input": _domain_to_dict(domain),
        "n": args.n,
        "estimate": est.to_dict(),
    }
    print(
        f"lambda_min = {est.lam:.6g}  (n={args.n}, h={est.h:.4g}, "
        f"{est.iterations} iterations, {grid.interior_count} nodes)"
    )
    _emit(doc, None, args.output, "json" if args.format == "csv" else args.format)
    return 0


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="hardyconst",
        description="Hardy constants of non-convex planar sectors and domains built from them.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--output", "-o", default=None, help="write a document to this path")
        p.add_argument("--format", choices=("json", "csv"), default="json")

    p = sub.add_parser("cbeta", help="Hardy constant of a sector")
    p.add_argument("--beta", default=None, help="opening angle, e.g. 1.5pi")
    p.add_argument("--sweep", default=None, help="start:stop:count, e.g. pi:2pi:101")
    p.add_argument("--check", action="store_true", help="cross-check each row with the shooting solver")
    common(p)
    p.set_defaults(func=_cmd_cbeta)

    p = sub.add_parser("betacr", help="critical opening angle")
    common(p)
    p.set_defaults(func=_cmd_betacr)

    p = sub.add_parser("gamma-star", help="critical adjacent-angle table")
    p.add_argument("--beta", default=None)
    p.add_argument("--sweep", default=None)
    common(p)
    p.set_defaults(func=_cmd_gamma_star)

    p = sub.add_parser("certify", help="certify a domain description file")
    p.add_argument("file")
    common(p)
    p.set_defaults(func=_cmd_certify)

    p = sub.add_parser("validate", help="variational grid estimate for a domain file")
    p.add_argument("file")
    p.add_argument("--n", type=int, default=128, help="nodes per side of the bounding box")
    p.add_argument("--radius", type=float, default=None, help="truncation radius for unbounded domains")
    common(p)
    p.set_defaults(func=_cmd_validate)
    return parser


def main(argv: Optional[list] = None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
        return args.func(args)
    except (ValueError, OSError, json.JSONDecodeError, KeyError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except RuntimeError as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    raise SystemExit(main())
