"""Command line front end: ``hhbounds bounds | integrate | verify``.

Machine-readable output goes to stdout (or ``--out``), human summaries to
stderr. Exit codes: 0 holds, 1 usage or input error, 2 violated,
3 inconclusive.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
from dataclasses import asdict, dataclass, field
from pathlib import Path
from typing import Optional

import numpy as np

from . import functions as fl
from .bounds import (
    FAMILY_CLASSES,
    Family,
    IntegratorConfig,
    Status,
    classical_hh,
    make_barycenter_functional,
    make_quadrature_functional,
    make_vertex_average_functional,
    operator_hh,
    strongly_convex_hh,
    strongly_wright_hh,
    wright_hh,
)
from .quadrature import cartesian_to_barycentric, integrate_mc, integrate_polynomial
from .simplex import Simplex, SimplexError, random_simplex

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_VIOLATED = 2
EXIT_INCONCLUSIVE = 3

_STATUS_EXIT = {Status.HOLDS: EXIT_OK, Status.VIOLATED: EXIT_VIOLATED,
                Status.INCONCLUSIVE: EXIT_INCONCLUSIVE}

CATALOGS = {
    "convex": fl.convex_catalog,
    "strongly_convex": fl.strongly_convex_catalog,
    "wright": fl.wright_catalog,
    "strongly_wright": fl.strongly_wright_catalog,
    "control": fl.control_catalog,
    "full": fl.full_catalog,
}

_OPERATOR_FUNCTIONALS = {
    "barycenter": make_barycenter_functional,
    "vertex_average": make_vertex_average_functional,
    "degree2": make_quadrature_functional,
}


class UsageError(Exception):
    pass


def _load_json(text: str, what: str):
    """Parse inline JSON, or JSON from a file when ``text`` starts with ``@``."""
    try:
        if text.startswith("@"):
            text = Path(text[1:]).read_text()
        return json.loads(text)
    except (OSError, json.JSONDecodeError) as exc:
        raise UsageError(f"could not read {what}: {exc}") from exc


def _parse_simplex(text: str) -> Simplex:
    data = _load_json(text, "simplex descriptor")
    try:
        return Simplex.from_dict(data)
    except (KeyError, TypeError, SimplexError) as exc:
        raise UsageError(f"bad simplex descriptor: {exc}") from exc


def _parse_function(text: str) -> fl.FunctionSpec:
    data = _load_json(text, "function descriptor")
    try:
        return fl.from_descriptor(data)
    except (ValueError, TypeError) as exc:
        raise UsageError(f"bad function descriptor: {exc}") from exc


def resolve_seed(cli_seed: Optional[int], config_seed: Optional[int] = None) -> int:
    if cli_seed is not None:
        return cli_seed
    if config_seed is not None:
        return int(config_seed)
    env = os.environ.get("HH_SEED")
    if env:
        try:
            return int(env)
        except ValueError as exc:
            raise UsageError(f"HH_SEED must be an integer, got {env!r}") from exc
    return 0


def run_family(family: Family, f, S: Simplex, config: IntegratorConfig):
    """One report per family; the operator family yields one report per functional."""
    if family is Family.CLASSICAL:
        return [classical_hh(f, S, config)]
    if family is Family.WRIGHT:
        return [wright_hh(f, S, config)]
    if family is Family.STRONGLY_CONVEX:
        return [strongly_convex_hh(f, S, config)]
    if family is Family.STRONGLY_WRIGHT:
        return [strongly_wright_hh(f, S, config)]
    return [operator_hh(f, S, make(S), config) for make in _OPERATOR_FUNCTIONALS.values()]


def _check_family(family: Family, f: fl.FunctionSpec):
    if f.class_tag not in FAMILY_CLASSES[family]:
        raise UsageError(
            f"family {family.value!r} does not apply to class {f.class_tag.value!r}")


def cmd_bounds(args) -> int:
    S = _parse_simplex(args.simplex)
    f = _parse_function(args.function)
    try:
        family = Family(args.family)
    except ValueError:
        raise UsageError(f"unknown family {args.family!r}") from None
    _check_family(family, f)
    if not f.supports_dim(S.n):
        raise UsageError(f"function is defined on R^{f.dim}, simplex lives in R^{S.n}")
    config = IntegratorConfig(args.method, args.samples, resolve_seed(args.seed))
    if family is Family.OPERATOR:
        T = _OPERATOR_FUNCTIONALS[args.functional](S)
        report = operator_hh(f, S, T, config)
    else:
        report = run_family(family, f, S, config)[0]
    print(json.dumps(report.to_dict()))
    print(f"{family.value}: {report.lower:.6g} <= {report.middle.value:.6g} <= "
          f"{report.upper:.6g} -> {report.status.value}", file=sys.stderr)
    return _STATUS_EXIT[report.status]


def cmd_integrate(args) -> int:
    S = _parse_simplex(args.simplex)
    f = _parse_function(args.function)
    if not f.supports_dim(S.n):
        raise UsageError(f"function is defined on R^{f.dim}, simplex lives in R^{S.n}")
    if args.method == "exact":
        cart = f.polynomial_on(S)
        if cart is None:
            raise UsageError(f"{f.name!r} has no polynomial form on this simplex; use --method mc")
        est = integrate_polynomial(S, cartesian_to_barycentric(S, cart))
    else:
        if args.samples < 2:
            raise UsageError("--samples must be >= 2")
        est = integrate_mc(S, f, args.samples, resolve_seed(args.seed))
    print(json.dumps(est.to_dict()))
    return EXIT_OK


@dataclass
class CampaignConfig:
    families: list = field(default_factory=lambda: [f.value for f in Family])
    dimensions: list = field(default_factory=lambda: [1, 2, 3, 4])
    simplices_per_dim: int = 25
    function_catalog: list = field(default_factory=lambda: [{"catalog": "full"}])
    mc_samples: int = 20_000
    seed: Optional[int] = None
    output_path: Optional[str] = None
    format: str = "json"

    def __post_init__(self):
        if self.simplices_per_dim < 1:
            raise UsageError("simplices_per_dim must be >= 1")
        if self.mc_samples < 100:
            raise UsageError("mc_samples must be >= 100")
        if not self.dimensions or any(int(n) < 1 for n in self.dimensions):
            raise UsageError("dimensions must be a non-empty list of integers >= 1")
        if self.format not in ("json", "csv"):
            raise UsageError(f"unknown format {self.format!r}")
        try:
            self.families = [Family(x).value for x in self.families]
        except ValueError as exc:
            raise UsageError(str(exc)) from None
        for entry in self.function_catalog:
            if "catalog" in entry:
                if entry["catalog"] not in CATALOGS:
                    raise UsageError(f"unknown catalog {entry['catalog']!r}")
            else:
                try:
                    fl.from_descriptor(entry)
                except (ValueError, TypeError) as exc:
                    raise UsageError(f"bad function descriptor: {exc}") from exc

    @classmethod
    def from_dict(cls, data: dict) -> "CampaignConfig":
        known = set(cls.__dataclass_fields__)
        unknown = set(data) - known
        if unknown:
            raise UsageError(f"unknown config keys: {sorted(unknown)}")
        return cls(**data)


def _functions_for(config: CampaignConfig, n: int, seed: int):
    out = []
    for k, entry in enumerate(config.function_catalog):
        if "catalog" in entry:
            specs = CATALOGS[entry["catalog"]](n, np.random.SeedSequence([seed, n, k]))
            out.extend(specs)
        else:
            spec = fl.from_descriptor(entry)
            if spec.supports_dim(n):
                out.append(spec)
    return out


def run_campaign(config: CampaignConfig) -> dict:
    """Run every (dimension, simplex, function, family) case in config order."""
    seed = resolve_seed(None, config.seed)
    families = [Family(x) for x in config.families]
    cases = []
    for n in config.dimensions:
        n = int(n)
        specs = _functions_for(config, n, seed)
        for s in range(config.simplices_per_dim):
            S = random_simplex(n, np.random.SeedSequence([seed, n, s, 1]))
            for fi, f in enumerate(specs):
                for family in families:
                    if f.class_tag not in FAMILY_CLASSES[family]:
                        continue
                    integ = IntegratorConfig("auto", config.mc_samples,
                                             [seed, n, s, fi, list(Family).index(family)])
                    for report in run_family(family, f, S, integ):
                        rec = report.to_dict()
                        rec.pop("terms", None)
                        cases.append({
                            "n": n, "simplex": s, "function": f.name,
                            "class": f.class_tag.value,
                            "positive": f.class_tag.is_positive,
                            "operator": report.terms["middle"] if family is Family.OPERATOR else None,
                            **rec,
                        })
    return {"cases": cases, "aggregate": aggregate(cases)}


def aggregate(cases: list) -> dict:
    def tally(rows):
        return {
            "total": len(rows),
            "holds": sum(r["status"] == Status.HOLDS.value for r in rows),
            "violated": sum(r["status"] == Status.VIOLATED.value for r in rows),
            "inconclusive": sum(r["status"] == Status.INCONCLUSIVE.value for r in rows),
            "worst_margin": min((min(r["margin_lower"], r["margin_upper"]) for r in rows),
                                default=None),
        }

    out = tally(cases)
    out["positive"] = tally([r for r in cases if r["positive"]])
    out["controls"] = tally([r for r in cases if not r["positive"]])
    return out


def campaign_exit_code(result: dict) -> int:
    return EXIT_VIOLATED if result["aggregate"]["positive"]["violated"] else EXIT_OK


CSV_FIELDS = ["n", "simplex", "function", "class", "family", "operator", "lower",
              "middle", "middle_kind", "std_error", "upper", "margin_lower",
              "margin_upper", "status", "guard"]


def render(result: dict, config: CampaignConfig, fmt: str) -> str:
    if fmt == "json":
        payload = {"config": asdict(config), **result}
        return json.dumps(payload, indent=1) + "\n"
    buf = io.StringIO()
    writer = csv.DictWriter(buf, fieldnames=CSV_FIELDS, lineterminator="\n")
    writer.writeheader()
    for r in result["cases"]:
        writer.writerow({
            **{k: r[k] for k in CSV_FIELDS if k in r and k != "middle"},
            "middle": r["middle"]["value"],
            "middle_kind": r["middle"]["kind"],
            "std_error": r["middle"]["std_error"],
        })
    return buf.getvalue()


def cmd_verify(args) -> int:
    data = _load_json("@" + args.config, "config") if args.config else {}
    if not isinstance(data, dict):
        raise UsageError("config must be a JSON object")
    config = CampaignConfig.from_dict(data)
    if args.seed is not None:
        config.seed = args.seed
    config.seed = resolve_seed(None, config.seed)
    if args.samples is not None:
        config.mc_samples = args.samples
    if args.format is not None:
        config.format = args.format
    if args.out is not None:
        config.output_path = args.out
    config.__post_init__()

    result = run_campaign(config)
    text = render(result, config, config.format)
    if config.output_path:
        try:
            Path(config.output_path).write_text(text)
        except OSError as exc:
            raise UsageError(f"could not write {config.output_path}: {exc}") from exc
    else:
        sys.stdout.write(text)
    agg = result["aggregate"]
    pos, ctl = agg["positive"], agg["controls"]
    print(f"positive classes: {pos['holds']}/{pos['total']} hold, {pos['violated']} violated, "
          f"{pos['inconclusive']} inconclusive, worst margin {pos['worst_margin']}", file=sys.stderr)
    print(f"negative controls: {ctl['violated']}/{ctl['total']} flagged violated", file=sys.stderr)
    return campaign_exit_code(result)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="hhbounds", description="Hermite-Hadamard bounds on simplices")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--seed", type=int, default=None,
                       help="random seed (falls back to $HH_SEED, then 0)")
        p.add_argument("--samples", type=int, default=None, help="Monte Carlo sample count")

    p = sub.add_parser("bounds", help="evaluate one inequality chain")
    p.add_argument("--simplex", required=True, help='JSON {"n":..,"vertices":[..]} or @file')
    p.add_argument("--function", required=True, help='JSON {"class":..,"params":{..}} or @file')
    p.add_argument("--family", required=True, choices=[f.value for f in Family])
    p.add_argument("--method", default="auto", choices=["auto", "exact", "mc"])
    p.add_argument("--functional", default="degree2", choices=sorted(_OPERATOR_FUNCTIONALS),
                   help="positive functional for the operator family")
    common(p)
    p.set_defaults(func=cmd_bounds)

    p = sub.add_parser("integrate", help="integrate a function over a simplex")
    p.add_argument("--simplex", required=True)
    p.add_argument("--function", required=True)
    p.add_argument("--method", default="exact", choices=["exact", "mc"])
    common(p)
    p.set_defaults(func=cmd_integrate)

    p = sub.add_parser("verify", help="run a verification campaign")
    p.add_argument("--config", default=None, help="campaign config JSON file")
    p.add_argument("--format", default=None, choices=["json", "csv"])
    p.add_argument("--out", default=None, help="output path (default stdout)")
    common(p)
    p.set_defaults(func=cmd_verify)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    if getattr(args, "samples", None) is None and args.command != "verify":
        args.samples = 200_000
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"hhbounds: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
