"""Command-line front end.

Exit codes: 0 on success (all checks pass), 1 on a failed check, failed
certificate, or invalid scenario, 2 on usage or parse errors.  Output modes:
``pretty`` (human-readable, the default) and ``lines`` (stable, diffable
key/value or case lines).
"""

from __future__ import annotations

import argparse
import sys

from .errors import KeypolyError, ParseError, PreconditionFailed
from .expansion import expand, truncation_report
from .limit import (
    LimitScenario,
    choose_base_key,
    estimated_limits,
    fixedness_at_horizon,
    load_scenario,
    ppower_rewrite,
    reduced_ppower_rewrite,
    stability_at_horizon,
    validate_scenario,
)
from .literals import field_from_name, parse_poly
from .oracle import CHECKS, run_check
from .valgroup import Value
from .valuation import GaussValuation, epsilon_report


class _Usage(Exception):
    pass


def _build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="keypoly", description=__doc__)
    sub = ap.add_subparsers(dest="command", required=True)

    def common(p, poly=False, scenario=False, field=False):
        p.add_argument("--mode", choices=["pretty", "lines"], default="pretty")
        if poly:
            p.add_argument("--poly", required=True, help="polynomial literal")
        if scenario:
            p.add_argument("--scenario", required=scenario == "required", help="scenario file")
        if field:
            p.add_argument("--field", help="field name: Q, F<p>, F<p>t, H<p>")
            p.add_argument("--p", type=int, default=None, help="prime for --field Q")

    p = sub.add_parser("eval", help="value of a polynomial")
    common(p, poly=True, scenario=True, field=True)
    p.add_argument("--mu", help="monomial weight for a Gauss valuation")

    p = sub.add_parser("epsilon", help="eps invariant and its attaining orders")
    common(p, poly=True, scenario=True, field=True)
    p.add_argument("--mu", help="monomial weight for a Gauss valuation")

    p = sub.add_parser("expand", help="digits of the base-q expansion")
    common(p, poly=True, scenario=True, field=True)
    p.add_argument("--q", required=True, help="monic base polynomial literal")

    p = sub.add_parser("truncate", help="truncated value along a chain key")
    common(p, poly=True, scenario="required")
    p.add_argument("--q-index", type=int, required=True)

    p = sub.add_parser("stable", help="scan truncations for the value of f")
    common(p, poly=True, scenario="required")

    p = sub.add_parser("fixed", help="scan the chain tail for the value of f")
    common(p, poly=True, scenario="required")
    p.add_argument("--q-index", type=int, default=None, help="base key index")

    p = sub.add_parser("choose-q", help="least admissible base key index")
    common(p, scenario="required")

    p = sub.add_parser("construct-fp", help="p-power rewrite of the limit key")
    common(p, scenario="required")
    p.add_argument("--theta", type=int, required=True)

    p = sub.add_parser("construct-fp-bar", help="reduced p-power rewrite")
    common(p, scenario="required")
    p.add_argument("--theta", type=int, required=True)

    p = sub.add_parser("verify", help="run one check or the whole catalog")
    p.add_argument("check", help="check id or 'all'")
    common(p, scenario="required")

    p = sub.add_parser("validate", help="report scenario invariant violations")
    common(p, scenario="required")
    return ap


def _load(args) -> LimitScenario:
    s = load_scenario(args.scenario)
    report = validate_scenario(s)
    if not report.ok:
        code, message = report.problems[0]
        raise KeypolyError(f"InvalidScenario: {code}: {message}")
    return s


def _context(args):
    """Resolve (field, valuation-or-None, scenario-or-None) for commands that
    accept either a scenario or a field (+ optional Gauss weight)."""
    if getattr(args, "scenario", None):
        s = _load(args)
        return s.field, s.valuation, s
    if getattr(args, "field", None):
        fld = field_from_name(args.field, args.p)
        v = None
        if getattr(args, "mu", None) is not None:
            v = GaussValuation(fld, Value.parse(args.mu))
        return fld, v, None
    raise _Usage("either --scenario or --field is required")


def _emit(args, pretty: str, lines: list[str]):
    print(pretty if args.mode == "pretty" else "\n".join(lines))


def _set_str(indices) -> str:
    return "{" + ",".join(str(i) for i in indices) + "}"


def _cmd_eval(args) -> int:
    fld, v, _ = _context(args)
    if v is None:
        raise _Usage("eval needs a scenario or --field with --mu")
    f = parse_poly(args.poly, fld)
    nu = v.value(f)
    _emit(args, f"nu = {nu}", [f"nu {nu.as_ratio()}"])
    return 0


def _cmd_epsilon(args) -> int:
    fld, v, _ = _context(args)
    if v is None:
        raise _Usage("epsilon needs a scenario or --field with --mu")
    f = parse_poly(args.poly, fld)
    rep = epsilon_report(v, f)
    lines = [f"epsilon {rep.epsilon.as_ratio()}", f"attaining {_set_str(rep.attaining)}"]
    for b, nu_db, quotient in rep.rows:
        lines.append(f"order {b} {nu_db.as_ratio()} {quotient.as_ratio()}")
    _emit(args, f"epsilon = {rep.epsilon}; I = {_set_str(rep.attaining)}", lines)
    return 0


def _cmd_expand(args) -> int:
    fld, _, _ = _context(args)
    f = parse_poly(args.poly, fld)
    q = parse_poly(args.q, fld)
    digits = expand(f, q).coeffs
    rendered = [d.render(compact=True) for d in digits]
    _emit(
        args,
        "a = [" + ", ".join(rendered) + "]",
        [f"a{i} {r}" for i, r in enumerate(rendered)],
    )
    return 0


def _cmd_truncate(args) -> int:
    _, v, s = _context(args)
    f = parse_poly(args.poly, s.field)
    rep = truncation_report(v, f, s.key(args.q_index))
    _emit(
        args,
        f"nu_Q = {rep.value}; S_Q = {_set_str(rep.attaining)}; delta_Q = {rep.delta}",
        [
            f"nu_Q {rep.value.as_ratio()}",
            f"S_Q {_set_str(rep.attaining)}",
            f"delta_Q {rep.delta}",
        ],
    )
    return 0


def _cmd_stable(args) -> int:
    _, _, s = _context(args)
    f = parse_poly(args.poly, s.field)
    rep = stability_at_horizon(s, f)
    lines = [f"nu {rep.value.as_ratio()}"]
    for k, val in rep.scan:
        lines.append(f"scan {k} {val.as_ratio()}")
    if rep.stable:
        lines.insert(0, f"stable {rep.index}")
        pretty = f"stable at k = {rep.index}; nu = {rep.value}"
        if rep.constant_witness_index is not None:
            pretty += f"; constant digit attains at k = {rep.constant_witness_index}"
            lines.insert(1, f"constant_witness {rep.constant_witness_index}")
    else:
        lines.insert(0, "unstable_at_horizon")
        pretty = f"unstable_at_horizon; nu = {rep.value}"
    _emit(args, pretty, lines)
    return 0


def _cmd_fixed(args) -> int:
    _, _, s = _context(args)
    f = parse_poly(args.poly, s.field)
    rep = fixedness_at_horizon(s, f, args.q_index)
    lines = [f"base {rep.base_index}", f"nu {rep.value.as_ratio()}"]
    for row in rep.rows:
        lines.append(
            f"scan {row.rho} {row.nu_forward.as_ratio()} {row.nu_backward.as_ratio()}"
        )
    if rep.fixed:
        lines.insert(0, f"fixed {rep.index}")
        pretty = f"fixed at rho = {rep.index}; nu = {rep.value}; base = {rep.base_index}"
    else:
        lines.insert(0, "not_fixed_at_horizon")
        pretty = f"not_fixed_at_horizon; nu = {rep.value}; base = {rep.base_index}"
    _emit(args, pretty, lines)
    return 0


def _cmd_choose_q(args) -> int:
    _, _, s = _context(args)
    k = choose_base_key(s)
    _emit(args, f"Q_index = {k}", [f"Q_index {k}"])
    return 0


def _cmd_construct_fp(args) -> int:
    _, _, s = _context(args)
    result, cert = ppower_rewrite(s, args.theta)
    lines = [
        f"F_p {result.render(compact=True)}",
        f"monic {cert.monic}",
        f"deg_X {cert.deg_x}",
        f"threshold {cert.threshold}",
        f"minimizer {cert.minimizer_order} {cert.minimizer_beta.as_ratio()}",
        f"degenerate_identity {cert.degenerate_identity}",
    ]
    for r in cert.rows:
        lines.append(
            f"tail {r.rho} {r.nu_l.as_ratio()} {r.nu_difference.as_ratio()} {r.bound.as_ratio()}"
        )
    _emit(
        args,
        f"F_p = {result}; certificate ok (theta = {cert.theta}, deg_X = {cert.deg_x}, "
        f"monic = {cert.monic}, identical tail = {cert.degenerate_identity})",
        lines,
    )
    return 0


def _cmd_construct_fp_bar(args) -> int:
    _, _, s = _context(args)
    result, cert = reduced_ppower_rewrite(s, args.theta)
    lines = [f"F_p_bar {result.render(compact=True)}"]
    for i, a in cert.coefficients:
        lines.append(f"digit {i} {a.render(compact=True)}")
    lines.append(f"support_ok {cert.support_ok}")
    lines.append(f"leading_is_one {cert.leading_is_one}")
    for r in cert.rows:
        lines.append(f"tail {r.rho} {r.nu_gap.as_ratio()} {r.nu_f.as_ratio()}")
    _emit(
        args,
        f"F_p_bar = {result}; certificate ok (theta = {cert.theta}, "
        f"support = powers of {s.p} plus constant, leading digit 1)",
        lines,
    )
    return 0


def _cmd_verify(args) -> int:
    _, _, s = _context(args)
    ids = list(CHECKS) if args.check == "all" else [args.check]
    reports = [run_check(cid, s) for cid in ids]
    if args.mode == "lines":
        chunks = [r.render_lines() for r in reports if r.cases]
        chunks.append("\n".join(r.summary() for r in reports))
        print("\n".join(chunks))
    else:
        for r in reports:
            print(r.summary())
    return 0 if all(r.ok for r in reports) else 1


def _cmd_validate(args) -> int:
    s = load_scenario(args.scenario)
    report = validate_scenario(s)
    if report.ok:
        b, bbar = estimated_limits(s)
        _emit(
            args,
            f"valid; observed sup nu(Q_k) = {b} (declared limit {s.key_value_limit}), "
            f"observed sup nu_Q(F) = {bbar} (declared limit {s.truncated_value_limit})",
            ["valid", f"observed_key_sup {b.as_ratio()}", f"observed_trunc_sup {bbar.as_ratio()}"],
        )
        return 0
    for code, message in report.problems:
        print(f"invalid {code}: {message}")
    return 1


_COMMANDS = {
    "eval": _cmd_eval,
    "epsilon": _cmd_epsilon,
    "expand": _cmd_expand,
    "truncate": _cmd_truncate,
    "stable": _cmd_stable,
    "fixed": _cmd_fixed,
    "choose-q": _cmd_choose_q,
    "construct-fp": _cmd_construct_fp,
    "construct-fp-bar": _cmd_construct_fp_bar,
    "verify": _cmd_verify,
    "validate": _cmd_validate,
}


def main(argv: list[str] | None = None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 2 if exc.code not in (0, None) else 0
    try:
        return _COMMANDS[args.command](args)
    except (_Usage, ParseError, PreconditionFailed, FileNotFoundError) as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 2
    except KeypolyError as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    raise SystemExit(main())
