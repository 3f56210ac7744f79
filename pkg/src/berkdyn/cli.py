"""Command-line interface: ``berkdyn COMMAND --map FILE [options]``.

Exit codes: 0 success, 1 other library error, 2 parse error, 3 hypothesis
violated (good reduction), 4 undetermined classification, 5 series
precision exhausted.
"""

from __future__ import annotations

import argparse
import json
import sys
from contextlib import nullcontext
from fractions import Fraction

from . import __version__
from .berkovich import CLASSICAL_INFINITY
from .dynamics import Orbit
from .errors import (BerkDynError, DegreeMismatch, HypothesisViolated, InsufficientPrecision,
                     ParseError, PrecisionExceeded, Undetermined)
from .familyio import parse_family, parse_point, parse_t_list
from .limit import delta_f_description, limit_measure
from .measures import _rat
from .quantized import delta_witness, witness_bound
from .reduction import gauss_totally_invariant_test, reduce_map
from .residue import INFINITY_POINT, ResiduePoint
from .series import precision_context
from .verifier import backward_orbit_measure, compare_measures, convergence_study, specialize

SCHEMA = "berkdyn-report/1"

EXIT_OK, EXIT_ERROR, EXIT_PARSE, EXIT_HYPOTHESIS, EXIT_UNDETERMINED, EXIT_PRECISION = range(6)


def exit_code_for(exc: BaseException) -> int:
    if isinstance(exc, (ParseError, DegreeMismatch)):
        return EXIT_PARSE
    if isinstance(exc, HypothesisViolated):
        return EXIT_HYPOTHESIS
    if isinstance(exc, Undetermined):
        return EXIT_UNDETERMINED
    if isinstance(exc, (PrecisionExceeded, InsufficientPrecision)):
        return EXIT_PRECISION
    return EXIT_ERROR


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="berkdyn", description="Dynamics of degenerating rational maps "
                                "at the Gauss point of the Berkovich projective line.")
    p.add_argument("--version", action="version", version=__version__)
    p.add_argument("command", choices=["reduce", "orbit", "degrees", "limit", "delta", "verify", "study"])
    p.add_argument("family", nargs="?", help="inline family text (alternative to --map)")
    p.add_argument("--map", dest="map_file", help="file holding the family text ('-' for stdin)")
    p.add_argument("--n-max", type=int)
    p.add_argument("--tol")
    p.add_argument("--window", type=int)
    p.add_argument("--horizon", type=int)
    p.add_argument("--candidate", action="append", default=[],
                   help="extra exceptional-point candidate (repeatable)")
    p.add_argument("--base")
    p.add_argument("--t")
    p.add_argument("--samples", type=int)
    p.add_argument("--burn-in", type=int)
    p.add_argument("--seed", type=int)
    p.add_argument("--eps", type=float, default=0.05)
    p.add_argument("--workers", type=int)
    p.add_argument("--precision", type=int)
    p.add_argument("--s", dest="s", help="witness parameter s for 'delta'")
    p.add_argument("--s-prime", dest="s_prime", help="witness parameter s' for 'delta'")
    p.add_argument("--out", choices=["json", "csv", "text"], default="text")
    return p


def _read_family_text(args) -> str:
    if args.map_file:
        if args.map_file == "-":
            return sys.stdin.read()
        with open(args.map_file, encoding="utf-8") as fh:
            return fh.read()
    if args.family:
        return args.family
    raise ParseError("no family given: use --map FILE or an inline argument")


def _option(args, parsed, name, default):
    value = getattr(args, name)
    if value is not None:
        return value
    return parsed.options.get(name, default)


def _point_text(p: ResiduePoint) -> str:
    return p.canonical()


def _emit(args, payload: dict, text: str, csv: str | None = None) -> None:
    if args.out == "json":
        print(json.dumps(payload, indent=2, ensure_ascii=False))
    elif args.out == "csv":
        if csv is None:
            raise BerkDynError(f"'{payload['command']}' has no CSV output")
        sys.stdout.write(csv)
    else:
        print(text)


# ---------------------------------------------------------------------
# commands

def cmd_reduce(args, parsed, f):
    R = reduce_map(f)
    good = gauss_totally_invariant_test(f)
    payload = {"reduction": R.to_json(), "good_reduction": good}
    text = R.pretty() + "\n" + ("good reduction: f⁻¹(S_G) = {S_G}" if good
                                else "bad reduction: f⁻¹(S_G) ≠ {S_G}")
    return payload, text, None


def cmd_orbit(args, parsed, f):
    n = _option(args, parsed, "n_max", 8)
    orbit = Orbit(f, n)
    rows = [orbit.step(j).to_json() for j in range(n + 1)]
    lines = ["j  center  q  deg  rho_step  reduction"]
    lines += [f"{r['j']}  {orbit.point(r['j']).center.pretty()}  {r['q']}  {r['local_degree']}  "
              f"{r['rho_increment']}  {r['reduction']}" for r in rows]
    csv = "j,q,local_degree,rho_increment\n" + "".join(
        f"{r['j']},{r['q']},{r['local_degree']},{r['rho_increment']}\n" for r in rows)
    return {"orbit": rows}, "\n".join(lines), csv


def cmd_degrees(args, parsed, f):
    n = _option(args, parsed, "n_max", 4)
    orbit = Orbit(f, n)
    tables = []
    lines = []
    for j in range(n + 1):
        R = orbit.step(j).reduction
        labels = {INFINITY_POINT, ResiduePoint.exact(0), ResiduePoint.exact(1)}
        labels.update(p for p, _ in R.divisor())
        rows = []
        for v in sorted(labels, key=lambda p: p.sort_key()):
            m, s, w = orbit.directional(j, v)
            rows.append({"direction": _point_text(v), "m": m, "s": s, "image": _point_text(w),
                         "display": (str(v), str(w))})
        tables.append({"j": j, "point": orbit.point(j).canonical(), "rows": rows})
        lines.append(f"S_{j} = {orbit.point(j).canonical()}:  {R.pretty()}")
        lines += [f"  {r['display'][0]}: m = {r['m']}, s = {r['s']} -> {r['display'][1]}" for r in rows]
        for r in rows:
            del r["display"]
    return {"steps": tables}, "\n".join(lines), None


def _limit(args, parsed, f):
    base = _option(args, parsed, "base", "2")
    tol = Fraction(_option(args, parsed, "tol", 0))
    return limit_measure(f, base=parse_point(str(base)), n_max=_option(args, parsed, "n_max", 8), tol=tol)


def cmd_limit(args, parsed, f):
    mu = _limit(args, parsed, f)
    lines = [f"{p}: {m}" for p, m in mu.atoms.items()]
    lines.append(f"leftover: {mu.leftover}  (n = {mu.n_used})")
    return {"limit": mu.to_json()}, "\n".join(lines), mu.to_csv()


def cmd_delta(args, parsed, f):
    window = _option(args, parsed, "window", 4)
    cands = [parse_point(c) for c in args.candidate]
    cands = [c for c in cands if c is not CLASSICAL_INFINITY]
    desc = delta_f_description(f, window=window, horizon=args.horizon, candidates=cands,
                               base=parse_point(str(_option(args, parsed, "base", "2"))),
                               n_max=_option(args, parsed, "n_max", 8))
    payload = {"delta": desc.to_json()}
    lines = [f"case {desc.case}", desc.text]
    if desc.case == "II":
        half = Fraction(1, 2)
        grid = [(Fraction(0), Fraction(0)), (Fraction(1), Fraction(0)), (half, Fraction(0)),
                (half, witness_bound(half, desc.nu))]
        if args.s is not None:
            grid.append((Fraction(args.s), Fraction(args.s_prime or 0)))
        checks = []
        for s, sp in grid:
            w = delta_witness(f, s, sp, n=3, window=window, horizon=args.horizon, candidates=cands)
            checks.append({"s": _rat(s), "s_prime": _rat(sp), "pullback_equal": w.pullback_equal,
                           "projection_equal": w.projection_equal})
            lines.append(f"witness (s, s') = ({s}, {sp}) at n = 3: "
                         f"pullback {'ok' if w.pullback_equal else 'FAIL'}, "
                         f"projection {'ok' if w.projection_equal else 'FAIL'}")
        payload["witnesses"] = checks
    return payload, "\n".join(lines), None


def _verify_params(args, parsed):
    return dict(n_samples=_option(args, parsed, "samples", 200_000),
                burn_in=_option(args, parsed, "burn_in", 40),
                seed=_option(args, parsed, "seed", 0))


def cmd_verify(args, parsed, f):
    mu = _limit(args, parsed, f)
    t = parse_t_list(_option(args, parsed, "t", "0.001"))[-1]
    params = _verify_params(args, parsed)
    g = specialize(f, t)
    emp = backward_orbit_measure(g, params["n_samples"], params["burn_in"], params["seed"],
                                 workers=args.workers)
    rep = compare_measures(emp, mu, args.eps)
    payload = {"t": repr(t), "seed": params["seed"], "samples": params["n_samples"],
               "burn_in": params["burn_in"], "comparison": rep.to_json()}
    lines = [f"t = {t!r}, samples = {params['n_samples']}, seed = {params['seed']}"]
    lines += [f"  {r['display']}: predicted {r['predicted']}, empirical {r['empirical']:.4f}"
              for r in rep.rows]
    lines.append(f"  unassigned {rep.unassigned:.4f} (predicted leftover {rep.leftover})")
    lines.append(f"max deviation {rep.max_deviation:.4f}")
    return payload, "\n".join(lines), emp.to_csv()


def cmd_study(args, parsed, f):
    mu = _limit(args, parsed, f)
    ts = parse_t_list(_option(args, parsed, "t", "0.1,0.01,0.001"))
    table = convergence_study(f, ts, predicted=mu, eps=args.eps, workers=args.workers,
                              **_verify_params(args, parsed))
    lines = ["t  max_deviation  unassigned"]
    lines += [f"{r['t']}  {r['max_deviation']:.4f}  {r['unassigned']:.4f}" for r in table.rows]
    csv = "t,max_deviation,unassigned\n" + "".join(
        f"{r['t']},{r['max_deviation']!r},{r['unassigned']!r}\n" for r in table.rows)
    return {"study": table.to_json()}, "\n".join(lines), csv


COMMANDS = {"reduce": cmd_reduce, "orbit": cmd_orbit, "degrees": cmd_degrees, "limit": cmd_limit,
            "delta": cmd_delta, "verify": cmd_verify, "study": cmd_study}


def run(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        parsed = parse_family(_read_family_text(args))
        precision = _option(args, parsed, "precision", None)
        with precision_context(precision) if precision else nullcontext():
            f = parsed.family()
            payload, text, csv = COMMANDS[args.command](args, parsed, f)
        payload = {"schema": SCHEMA, "command": args.command, "family": parsed.canonical(), **payload}
        _emit(args, payload, text, csv)
        return EXIT_OK
    except BerkDynError as exc:
        print(f"berkdyn: {type(exc).__name__}: {exc}", file=sys.stderr)
        return exit_code_for(exc)
    except (OSError, ValueError) as exc:
        print(f"berkdyn: {exc}", file=sys.stderr)
        return EXIT_ERROR


def main() -> None:
    sys.exit(run())
