"""Command-line front end: JSON in, JSON (or text) out, exact rationals as
"num/den" strings.

Exit codes: 0 success, 1 hard error, 2 computed-but-uncertified result.
"""

from __future__ import annotations

import argparse
import concurrent.futures
import datetime
import json
import os
import re
import sys
from fractions import Fraction
from typing import Any, Optional

from .algebra import Poly, rat_to_str
from .contfrac import CfExpansion, cf_expand, euclid_cf, phi_prefix_of_expansion
from .cyclotomic import (
    coprime_split,
    cyclotomic_poly,
    decompose_cyclo_power,
    rad,
    reach_depth,
)
from .errors import MahlerError
from .gaps import (
    ExponentConfig,
    ExponentResult,
    GapOrbit,
    certified_expansion,
    find_big_gaps,
    find_primitive_gaps,
    irrationality_exponent,
)
from .hankel import hankel_determinants
from .laurent import MahlerSystem, solve_mahler
from .numeric import empirical_exponent, expansion_for_convergents, growth_ratio_check

_PRESET_RE = re.compile(r"^(family_[abc]):([+-]?\d+|[+-])$")


def preset_system(name: str, point: Optional[int] = None) -> MahlerSystem:
    """family_a:s, family_b:s, family_c:+ or family_c:-"""
    m = _PRESET_RE.match(name)
    if not m:
        raise ValueError(f"unknown preset {name!r}")
    family, arg = m.groups()
    if family == "family_c":
        sign = 1 if arg in ("+", "1") else -1 if arg in ("-", "-1") else None
        if sign is None:
            raise ValueError("family_c takes + or -")
        numer = Poly.of(1, 2 * sign, 1)
    else:
        s = int(arg)
        if family == "family_a":
            numer = Poly.of(s * s, s, 1)
        else:
            numer = Poly.of(-s * s * (s * s + 1), s**3, 1)
    return MahlerSystem(numer=numer, denom=Poly.one(), power=3, point=point)


def load_system(args) -> MahlerSystem:
    if getattr(args, "preset", None):
        return preset_system(args.preset, point=getattr(args, "point", None))
    if getattr(args, "input", None):
        text = (
            sys.stdin.read()
            if args.input == "-"
            else open(args.input, "r", encoding="utf-8").read()
        )
    elif getattr(args, "system", None):
        text = args.system
    else:
        raise ValueError("no system given: use --preset, --input or --system")
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ValueError(f"invalid system JSON at line {exc.lineno}, column {exc.colno}: {exc.msg}")
    sysm = MahlerSystem.from_json(data)
    point = getattr(args, "point", None)
    if point is not None and sysm.point != point:
        sysm = MahlerSystem(sysm.numer, sysm.denom, sysm.power, point)
    return sysm


# -- serialization helpers ----------------------------------------------------


def _frac(x: Fraction) -> str:
    return rat_to_str(x)


def _orbit_json(orbit: GapOrbit) -> dict:
    return {
        "origin": [orbit.origin.lo, orbit.origin.hi],
        "steps": [
            {
                "lo": s.lo,
                "hi": s.hi,
                "cancel_deg": s.cancel_deg,
                "cancel_split": list(s.cancel_split) if s.cancel_split else None,
            }
            for s in orbit.steps
        ],
        "preperiod": orbit.preperiod,
        "period": orbit.period,
        "cycle_weight": orbit.cycle_weight,
        "lo_drift": orbit.lo_drift,
        "hi_drift": orbit.hi_drift,
        "phase_limits": [_frac(v) for v in orbit.phase_limits],
        "status": orbit.status.value,
        "exact_zero": orbit.exact_zero,
        "witness": list(orbit.witness_notes),
    }


def _expansion_json(exp: CfExpansion) -> dict:
    return {
        "quotients": [q.to_json() for q in exp.quotients],
        "convergents": [
            {
                "k": c.index,
                "p": c.num.to_json(),
                "q": c.den.to_json(),
                "d_k": c.degree,
                "certified": c.certified,
            }
            for c in exp.convergents
        ],
        "phi": list(exp.phi),
        "horizon": exp.horizon,
        "is_rational": exp.is_rational,
        "rational_suspected": exp.rational_suspected,
    }


def _exponent_json(res: ExponentResult) -> dict:
    out: dict[str, Any] = {"status": res.status, "certified": res.certified}
    if res.is_rational:
        num, den = res.rational_value
        out["rational_value"] = {"num": num.to_json(), "den": den.to_json()}
        out["mu"] = None
        return out
    out["mu"] = _frac(res.mu)
    out["rho"] = _frac(res.rho)
    out["caveats"] = list(res.caveats)
    out["pruning"] = {
        "best_size": res.pruning.best_size,
        "size_bound": _frac(res.pruning.size_bound),
        "lo_limit": res.pruning.lo_limit,
        "phi_scan_limit": res.pruning.phi_scan_limit,
    }
    out["phi"] = list(res.phi)
    out["witness"] = _orbit_json(res.witness) if res.witness else None
    out["orbits"] = [_orbit_json(o) for o in res.orbits]
    return out


def _render(report: dict, args) -> str:
    if args.format == "json":
        return json.dumps(report, indent=2)
    lines = []

    def walk(prefix: str, value):
        if isinstance(value, dict):
            for k, v in value.items():
                walk(f"{prefix}{k}.", v) if isinstance(v, (dict, list)) else lines.append(
                    f"{prefix}{k}: {v}"
                )
        elif isinstance(value, list):
            lines.append(f"{prefix[:-1]}: {json.dumps(value)}")

    walk("", report)
    return "\n".join(lines)


def _finish(report: dict, args, exit_code: int = 0) -> int:
    if not args.no_meta:
        report["meta"] = {
            "generated_at": datetime.datetime.now(datetime.timezone.utc).isoformat()
        }
    text = _render(report, args)
    if args.output:
        with open(args.output, "w", encoding="utf-8") as fh:
            fh.write(text + "\n")
    else:
        print(text)
    return exit_code


# -- subcommands --------------------------------------------------------------


def cmd_series(args) -> int:
    system = load_system(args)
    series = solve_mahler(system, args.terms)
    return _finish(series.to_json(), args)


def cmd_cf(args) -> int:
    system = load_system(args)
    f, exp, kind = certified_expansion(system, args.max_degree, _config(args))
    report = _expansion_json(exp)
    report["kind"] = kind
    return _finish(report, args)


def cmd_phi(args) -> int:
    system = load_system(args)
    f, exp, kind = certified_expansion(system, args.up_to, _config(args))
    if kind == "rational":
        report = {"phi": list(exp.phi), "is_rational": True}
    else:
        report = {
            "phi": list(phi_prefix_of_expansion(exp, args.up_to)),
            "is_rational": False,
        }
    report["up_to"] = args.up_to
    return _finish(report, args)


def cmd_gaps(args) -> int:
    system = load_system(args)
    f, exp, kind = certified_expansion(system, args.scan, _config(args))
    if kind == "rational":
        return _finish({"status": "rational", "big": [], "primitive": []}, args)
    big = find_big_gaps(exp, system, args.scan)
    prims = find_primitive_gaps(big, system)
    report = {
        "scan": args.scan,
        "big": [[g.lo, g.hi] for g in big],
        "primitive": [[g.lo, g.hi] for g in prims],
    }
    return _finish(report, args)


def _config(args) -> ExponentConfig:
    cfg = ExponentConfig()
    cap = os.environ.get("MAHLER_MU_DEGREE_CAP")
    updates = {}
    if cap:
        updates["degree_cap"] = int(cap)
    for name in ("horizon", "degree_cap", "initial_scan", "max_terms"):
        val = getattr(args, name, None)
        if val is not None:
            updates[name] = val
    if updates:
        cfg = ExponentConfig(
            initial_scan=updates.get("initial_scan", cfg.initial_scan),
            horizon=updates.get("horizon", cfg.horizon),
            degree_cap=updates.get("degree_cap", cfg.degree_cap),
            start_terms=cfg.start_terms,
            max_terms=updates.get("max_terms", cfg.max_terms),
            min_period_window=cfg.min_period_window,
            scan_margin=cfg.scan_margin,
        )
    return cfg


def _exponent_one(system: MahlerSystem, cfg: ExponentConfig) -> tuple[dict, bool]:
    res = irrationality_exponent(system, cfg)
    return _exponent_json(res), res.certified or res.is_rational


def cmd_exponent(args) -> int:
    cfg = _config(args)
    if args.batch:
        with open(args.batch, "r", encoding="utf-8") as fh:
            specs = json.load(fh)
        systems = [MahlerSystem.from_json(d) for d in specs["systems"]]
        if args.jobs > 1:
            with concurrent.futures.ProcessPoolExecutor(max_workers=args.jobs) as ex:
                results = list(ex.map(_exponent_one, systems, [cfg] * len(systems)))
        else:
            results = [_exponent_one(s, cfg) for s in systems]
        report = {"results": [r for r, _ in results]}
        all_ok = all(ok for _, ok in results)
        return _finish(report, args, 0 if all_ok else 2)
    system = load_system(args)
    report, ok = _exponent_one(system, cfg)
    return _finish(report, args, 0 if ok else 2)


def cmd_hankel(args) -> int:
    system = load_system(args)
    series = solve_mahler(system, max(args.terms, 2 * args.n_max + 1))
    rep = hankel_determinants(series, args.n_max)
    report = {
        "n_range": [rep.n_min, rep.n_max],
        "values": [_frac(v) for v in rep.values],
        "nonzero": list(rep.nonzero),
    }
    return _finish(report, args)


def cmd_cyclo(args) -> int:
    op = args.op
    if op == "decompose":
        report = {
            "n": args.n,
            "d": args.d,
            "indices": decompose_cyclo_power(args.n, args.d),
        }
    elif op == "phi":
        report = {"n": args.n, "coeffs": cyclotomic_poly(args.n).to_json()}
    elif op == "rad":
        report = {"n": args.n, "rad": rad(args.n)}
    elif op == "split":
        sp = coprime_split(args.n, args.d)
        report = {"n": sp.n, "m": sp.m, "r": sp.r, "s": sp.s}
    elif op == "reaches":
        report = {"n": args.n, "d": args.d, "m": reach_depth(args.n, args.d)}
    else:
        raise ValueError(f"unknown cyclo operation {op!r}")
    return _finish(report, args)


def cmd_verify(args) -> int:
    system = load_system(args)
    k_max, m_max = (int(x) for x in args.depth.split(","))
    exp = expansion_for_convergents(system, k_max + 1)
    report_pairs = []
    emp = empirical_exponent(
        system, bits=args.bits, conv_count=k_max + 1, depth_max=m_max, expansion=exp
    )
    for p in emp.pairs:
        report_pairs.append(
            {
                "k": p.index,
                "m": p.depth,
                "local_exponent": p.local_exponent,
                "degenerate": p.degenerate,
                "reduced": p.reduced,
            }
        )
    degrees = {c.index: c.degree for c in exp.convergents}
    checks = []
    for conv in [c for c in exp.convergents if c.index >= 1 and c.certified][: k_max + 1]:
        chk = growth_ratio_check(
            system,
            conv,
            degrees.get(conv.index + 1),
            depths=tuple(range(1, m_max + 1)),
            bits=args.bits,
        )
        checks.append(
            {
                "k": chk.index,
                "passed": chk.passed,
                "vacuous": chk.vacuous,
                "q_ratio_log2": list(chk.q_ratio_log2),
                "err_ratio_log2": list(chk.err_ratio_log2),
            }
        )
    report = {
        "empirical_mu": emp.value,
        "rational_suspected": emp.rational_suspected,
        "pairs": report_pairs,
        "growth_checks": checks,
        "all_passed": all(c["passed"] for c in checks),
    }
    return _finish(report, args, 0 if report["all_passed"] else 2)


# -- argument parsing ---------------------------------------------------------


def _add_system_args(p: argparse.ArgumentParser):
    p.add_argument("--preset", help="family_a:S, family_b:S, family_c:+ or family_c:-")
    p.add_argument("--input", help="path to a system JSON file, or - for stdin")
    p.add_argument("--system", help="inline system JSON")
    p.add_argument("--point", type=int, help="evaluation point b, |b| >= 2")


def _add_common_args(p: argparse.ArgumentParser):
    p.add_argument("--format", choices=("json", "text"), default="json")
    p.add_argument("--output", help="write the report here instead of stdout")
    p.add_argument("--no-meta", action="store_true", help="suppress the timestamp")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="mahler-mu",
        description=(
            "Exact irrationality exponents of Mahler numbers f(b), where "
            "f(z) = A(z)/B(z) * f(z^d)."
        ),
    )
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("series", help="truncated Laurent series solution")
    p.add_argument("--terms", type=int, default=32)
    _add_system_args(p), _add_common_args(p)
    p.set_defaults(func=cmd_series)

    p = sub.add_parser("cf", help="continued fraction with certification")
    p.add_argument("--max-degree", type=int, default=10, dest="max_degree")
    _add_system_args(p), _add_common_args(p)
    p.set_defaults(func=cmd_cf)

    p = sub.add_parser("phi", help="certified prefix of the degree set")
    p.add_argument("--up-to", type=int, default=16, dest="up_to")
    _add_system_args(p), _add_common_args(p)
    p.set_defaults(func=cmd_phi)

    p = sub.add_parser("gaps", help="big and primitive gaps")
    p.add_argument("--scan", type=int, default=32)
    _add_system_args(p), _add_common_args(p)
    p.set_defaults(func=cmd_gaps)

    p = sub.add_parser("exponent", help="exact irrationality exponent")
    p.add_argument("--horizon", type=int)
    p.add_argument("--degree-cap", type=int, dest="degree_cap")
    p.add_argument("--initial-scan", type=int, dest="initial_scan")
    p.add_argument("--max-terms", type=int, dest="max_terms")
    p.add_argument("--batch", help="JSON file with {'systems': [...]} to sweep")
    p.add_argument("--jobs", type=int, default=1)
    _add_system_args(p), _add_common_args(p)
    p.set_defaults(func=cmd_exponent)

    p = sub.add_parser("hankel", help="exact Hankel determinants")
    p.add_argument("--n-max", type=int, default=8, dest="n_max")
    p.add_argument("--terms", type=int, default=0)
    _add_system_args(p), _add_common_args(p)
    p.set_defaults(func=cmd_hankel)

    p = sub.add_parser("cyclo", help="cyclotomic helpers")
    p.add_argument("op", choices=("decompose", "phi", "rad", "split", "reaches"))
    p.add_argument("n", type=int)
    p.add_argument("d", type=int, nargs="?", default=2)
    _add_common_args(p)
    p.set_defaults(func=cmd_cyclo)

    p = sub.add_parser("verify", help="numeric corroboration of the exponent")
    p.add_argument("--bits", type=int, default=4096)
    p.add_argument("--depth", default="4,6", help="k_max,m_max grid")
    _add_system_args(p), _add_common_args(p)
    p.set_defaults(func=cmd_verify)
    return ap


def main(argv: Optional[list[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (MahlerError, ValueError, OSError) as exc:
        print(json.dumps({"error": str(exc)}), file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
