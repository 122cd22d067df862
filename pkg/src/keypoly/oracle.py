"""Brute-force validators for every statement-level claim of the library,
runnable against any scenario.

Each check evaluates both sides of its statement for every admissible case in
the corpus-times-chain grid, exactly, and records one verdict per case:

* ``pass``     -- the statement holds with substantive (finite) content;
* ``vacuous``  -- the statement holds because a side is inf or the admissible
  index set is empty; reported separately so a vacuously green suite is
  visibly vacuous;
* ``skip``     -- the case does not meet the statement's premise;
* ``fail``     -- the statement is violated;
* ``uncertified`` -- the horizon or the precision does not determine the case.

Catalog:

* ``VAX``  valuation axioms for nu and for each truncation nu_(Q_k);
* ``TRC``  the truncation lower bound nu_Q(f) <= nu(f);
* ``L21``  division by a key controls the value of the remainder;
* ``L22``  a smaller key's truncation distributes over a larger key's digits;
* ``L23``  dominant digits agree across keys of larger eps;
* ``P24``  the base expansion evaluated at the key difference bounds the
  truncated value, with an exact equality criterion;
* ``C25``  small-degree polynomials eventually stabilize, with the constant
  digit as witness;
* ``K31``  the eventual minimizer of the affine value family, cross-checked
  against brute force over the chain grid;
* ``P32``  truncated values eventually equal the value at the key difference;
* ``L41``  p-power derivative orders eventually dominate their composite
  multiples;
* ``L42``  constant-digit extraction stays above the declared truncation
  limit.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction

from .errors import InvalidScenario, KeypolyError
from .expansion import constant_coefficient, expand, truncation_report
from .limit import (
    LimitScenario,
    _admissible_gap_pair,
    choose_base_key,
    ppower_gap,
    ppower_split,
    validate_scenario,
)
from .poly import Poly, compose, hasse_derivative_x, poly_divmod
from .valgroup import (
    INF,
    ExplicitGammas,
    GammaGenerator,
    MinimizerInput,
    Value,
    eventual_minimizer,
)
from .valuation import epsilon_report


@dataclass(frozen=True)
class CheckCase:
    key: str
    lhs: Value | None
    rhs: Value | None
    status: str
    note: str = ""


@dataclass(frozen=True)
class CheckReport:
    check_id: str
    cases: tuple[CheckCase, ...]

    def count(self, status: str) -> int:
        return sum(1 for c in self.cases if c.status == status)

    @property
    def ok(self) -> bool:
        return self.count("fail") == 0 and self.count("uncertified") == 0

    def summary(self) -> str:
        verdict = "pass" if self.ok else "FAIL"
        return (
            f"{self.check_id}: {verdict} (substantive={self.count('pass')}, "
            f"vacuous={self.count('vacuous')}, skipped={self.count('skip')}, "
            f"failed={self.count('fail')}, uncertified={self.count('uncertified')})"
        )

    def render_lines(self) -> str:
        out = []
        for c in self.cases:
            lhs = "-" if c.lhs is None else c.lhs.as_ratio()
            rhs = "-" if c.rhs is None else c.rhs.as_ratio()
            out.append(f"{self.check_id} {c.key} {lhs} {rhs} {c.status}")
        return "\n".join(out)


def _ck(f: Poly) -> str:
    return f.render(compact=True)


def _pair_sample(s: LimitScenario, tag: int, count: int) -> list[tuple[Poly, Poly]]:
    rng = random.Random(s.corpus_seed * 1_000_003 + tag)
    corpus = s.corpus
    return [(rng.choice(corpus), rng.choice(corpus)) for _ in range(count)]


def _check_vax(s: LimitScenario) -> list[CheckCase]:
    v = s.valuation
    cases = []
    for f, g in _pair_sample(s, 1, 200):
        lhs = v.value(f * g)
        rhs = v.value(f) + v.value(g)
        cases.append(
            CheckCase(f"mul;f={_ck(f)};g={_ck(g)}", lhs, rhs, "pass" if lhs == rhs else "fail")
        )
    for f, g in _pair_sample(s, 2, 200):
        lhs = v.value(f + g)
        rhs = min(v.value(f), v.value(g))
        ok = not lhs < rhs
        status = "vacuous" if not lhs.is_finite else ("pass" if ok else "fail")
        if not ok:
            status = "fail"
        cases.append(CheckCase(f"ultra;f={_ck(f)};g={_ck(g)}", lhs, rhs, status))
    for k in range(1, s.chain_len + 1):
        q = s.key(k)
        for f, g in _pair_sample(s, 100 + k, 60):
            lhs = truncation_report(v, f * g, q).value
            rhs = truncation_report(v, f, q).value + truncation_report(v, g, q).value
            cases.append(
                CheckCase(
                    f"trunc_mul;Q={k};f={_ck(f)};g={_ck(g)}",
                    lhs,
                    rhs,
                    "pass" if lhs == rhs else "fail",
                )
            )
    return cases


def _check_trc(s: LimitScenario) -> list[CheckCase]:
    v = s.valuation
    cases = []
    for k in range(1, s.chain_len + 1):
        q = s.key(k)
        for f in s.corpus:
            lhs = truncation_report(v, f, q).value
            rhs = v.value(f)
            cases.append(
                CheckCase(
                    f"f={_ck(f)};Q={k}", lhs, rhs, "pass" if not rhs < lhs else "fail"
                )
            )
    return cases


def _eps_or_none(v, f: Poly) -> Value | None:
    deg = f.degree()
    if deg is None or deg < 1:
        return None
    return epsilon_report(v, f).epsilon


def _check_l21(s: LimitScenario) -> list[CheckCase]:
    v = s.valuation
    cases = []
    for k in range(1, s.chain_len + 1):
        q = s.key(k)
        eps_q = epsilon_report(v, q).epsilon
        for f in s.corpus:
            key = f"f={_ck(f)};Q={k}"
            eps_f = _eps_or_none(v, f)
            if eps_f is None:
                cases.append(CheckCase(key, None, None, "skip", "constant"))
                continue
            quo, rem = poly_divmod(f, q)
            if quo.is_zero() or rem.is_zero():
                cases.append(CheckCase(key, None, None, "skip", "trivial division"))
                continue
            eps_r = _eps_or_none(v, rem)
            gamma = eps_f if eps_r is None else max(eps_f, eps_r)
            if not gamma < eps_q:
                cases.append(CheckCase(key, None, None, "skip", "eps too large"))
                continue
            nu_f, nu_r = v.value(f), v.value(rem)
            if nu_f != nu_r:
                cases.append(CheckCase(key, nu_f, nu_r, "fail", "nu(f) != nu(r)"))
                continue
            lhs = truncation_report(v, quo * q, q).value - (eps_q - gamma)
            cases.append(CheckCase(key, lhs, nu_f, "pass" if not lhs < nu_f else "fail"))
    return cases


def _check_l22(s: LimitScenario) -> list[CheckCase]:
    v = s.valuation
    cases = []
    for j in range(1, s.chain_len + 1):
        for k in range(j + 1, s.chain_len + 1):
            q_small, q_large = s.key(j), s.key(k)
            for f in s.corpus:
                digits = expand(f, q_large).coeffs
                rhs = min(
                    (
                        truncation_report(v, d * q_large**i, q_small).value
                        for i, d in enumerate(digits)
                        if not d.is_zero()
                    ),
                    default=INF,
                )
                lhs = truncation_report(v, f, q_small).value
                cases.append(
                    CheckCase(
                        f"f={_ck(f)};Q={j};Qlarge={k}",
                        lhs,
                        rhs,
                        "pass" if lhs == rhs else "fail",
                    )
                )
    return cases


def _check_l23(s: LimitScenario) -> list[CheckCase]:
    v = s.valuation
    cases = []
    for j in range(1, s.chain_len + 1):
        for k in range(j + 1, s.chain_len + 1):
            q_small, q_large = s.key(j), s.key(k)
            for f in s.corpus:
                key = f"f={_ck(f)};Q={j};Qlarge={k}"
                rep = truncation_report(v, f, q_small)
                if rep.delta is None:
                    cases.append(CheckCase(key, None, None, "skip", "zero polynomial"))
                    continue
                l = rep.delta
                a = expand(f, q_small).coeffs
                b = expand(f, q_large).coeffs
                a_l = a[l]
                b_l = b[l] if l < len(b) else _zero_like(f)
                diff = a_l - b_l
                lhs = v.value(diff) if not diff.is_zero() else INF
                rhs = v.value(a_l)
                if diff.is_zero():
                    cases.append(CheckCase(key, lhs, rhs, "vacuous", "digits equal"))
                    continue
                ok = rhs < lhs and v.value(b_l) == rhs
                cases.append(CheckCase(key, lhs, rhs, "pass" if ok else "fail"))
    return cases


def _zero_like(f: Poly) -> Poly:
    from .poly import zero

    return zero(f.field)


def _check_p24(s: LimitScenario) -> list[CheckCase]:
    v = s.valuation
    base = choose_base_key(s)
    q_base = s.key(base)
    d = expand(s.limit_key, q_base).deg_x()
    cases = []
    for f in s.corpus:
        l = expand(f, q_base).as_xpoly()
        if l.deg_x() > d:
            cases.append(CheckCase(f"f={_ck(f)}", None, None, "skip", "deg_X too large"))
            continue
        for rho in range(base + 1, s.chain_len + 1):
            key = f"f={_ck(f)};rho={rho}"
            q_rho = s.key(rho)
            at_h = compose(l, s.key_difference(base, rho))
            lhs = (
                INF
                if at_h.is_zero()
                else truncation_report(v, at_h, q_rho).value
            )
            rhs = truncation_report(v, f, q_rho).value
            if lhs < rhs:
                cases.append(CheckCase(key, lhs, rhs, "fail", "lower bound broken"))
                continue
            equality = lhs == rhs
            a0 = constant_coefficient(f, q_rho)
            nu_a0 = INF if a0.is_zero() else v.value(a0)
            nu_at_h = INF if at_h.is_zero() else v.value(at_h)
            criterion = nu_a0 == rhs and rhs == nu_at_h
            agree = equality == criterion
            status = "pass" if agree else "fail"
            if agree and not lhs.is_finite:
                status = "vacuous"
            cases.append(CheckCase(key, lhs, rhs, status))
    return cases


def _tail_all(
    s: LimitScenario, base: int, holds_at
) -> tuple[int | None, int]:
    """Least rho in [base, chain_len) such that holds_at(sigma) for every
    sigma in (rho, chain_len]; also returns the count of indices checked."""
    last_fail = None
    checked = 0
    for sigma in range(base + 1, s.chain_len + 1):
        checked += 1
        if not holds_at(sigma):
            last_fail = sigma
    if last_fail == s.chain_len or checked == 0:
        return None, checked
    return max(last_fail or base, base), checked


def _check_c25(s: LimitScenario) -> list[CheckCase]:
    v = s.valuation
    base = choose_base_key(s)
    q_base = s.key(base)
    cases = []
    for f in s.corpus:
        key = f"f={_ck(f)}"
        if not f.degree() < s.limit_key.degree():
            cases.append(CheckCase(key, None, None, "skip", "degree too large"))
            continue
        l = expand(f, q_base).as_xpoly()
        nu_f = v.value(f)

        def holds(sigma: int) -> bool:
            at_h = compose(l, s.key_difference(base, sigma))
            if at_h.is_zero():
                return False
            a0 = constant_coefficient(f, s.key(sigma))
            if a0.is_zero():
                return False
            return (
                v.value(at_h) == nu_f
                and truncation_report(v, f, s.key(sigma)).value == nu_f
                and v.value(a0) == nu_f
            )

        rho, _ = _tail_all(s, base, holds)
        if rho is None:
            cases.append(
                CheckCase(key, None, nu_f, "uncertified", "no threshold within horizon")
            )
        else:
            cases.append(CheckCase(key, Value.of(rho), nu_f, "pass"))
    return cases


def _check_k31(s: LimitScenario) -> list[CheckCase]:
    v = s.valuation
    base = choose_base_key(s)
    l = expand(s.limit_key, s.key(base)).as_xpoly()
    cases = []
    orders = []
    betas = []
    for i in range(1, l.deg_x() + 1):
        di = hasse_derivative_x(l, i)
        if di.is_zero():
            continue
        vals = {
            v.value(compose(di, s.key_difference(base, rho)))
            for rho in range(base + 1, s.chain_len + 1)
        }
        if len(vals) != 1:
            cases.append(
                CheckCase(f"order={i}", None, None, "uncertified", "beta not stabilized")
            )
            return cases
        orders.append(i)
        betas.append(vals.pop())
    tail = tuple(s.gamma(r) for r in range(base + 1, s.chain_len + 1))
    explicit = eventual_minimizer(
        MinimizerInput(tuple(betas), tuple(orders), ExplicitGammas(tail))
    )
    b_order = orders[explicit.b - 1]
    # brute-force domination on the available grid
    ok = True
    for pos, g in enumerate(tail, start=1):
        if pos <= explicit.rho:
            continue
        mine = betas[explicit.b - 1] + g.scale(b_order)
        for idx, o in enumerate(orders):
            if o == b_order:
                continue
            if not mine < betas[idx] + g.scale(o):
                ok = False
    cases.append(
        CheckCase(
            f"explicit;b={b_order};rho={base + explicit.rho}",
            betas[explicit.b - 1],
            None,
            "pass" if ok else "fail",
        )
    )
    if s.chain_form == "partial_sums":
        # closed form: gamma_sigma is the first omitted exponent of Q_sigma
        exps = [e for e, _ in s.series.terms]

        def gamma_of(sigma: int) -> Value:
            return Value(exps[sigma])

        gen = eventual_minimizer(
            MinimizerInput(
                tuple(betas),
                tuple(orders),
                GammaGenerator(gamma_of, limit=s.key_value_limit, max_scan=len(exps) - 1),
            )
        )
        b_gen = orders[gen.b - 1]
        cases.append(
            CheckCase(
                f"closed_form;b={b_gen};rho={gen.rho}",
                None,
                None,
                "pass" if b_gen == b_order else "fail",
            )
        )
    return cases


def _check_p32(s: LimitScenario) -> list[CheckCase]:
    v = s.valuation
    base = choose_base_key(s)
    q_base = s.key(base)
    d = expand(s.limit_key, q_base).deg_x()
    cases = []
    for f in s.corpus:
        key = f"f={_ck(f)}"
        l = expand(f, q_base).as_xpoly()
        if l.deg_x() > d:
            cases.append(CheckCase(key, None, None, "skip", "deg_X too large"))
            continue

        def holds(sigma: int) -> bool:
            at_h = compose(l, s.key_difference(base, sigma))
            lhs = INF if at_h.is_zero() else v.value(at_h)
            return truncation_report(v, f, s.key(sigma)).value == lhs

        rho, _ = _tail_all(s, base, holds)
        if rho is None:
            cases.append(
                CheckCase(key, None, None, "uncertified", "no threshold within horizon")
            )
        else:
            cases.append(CheckCase(key, Value.of(rho), None, "pass"))
    return cases


def _check_l41(s: LimitScenario) -> list[CheckCase]:
    base = choose_base_key(s)
    d = expand(s.limit_key, s.key(base)).deg_x()
    pairs = [
        (i, j)
        for i in range(1, d + 1)
        for j in range(i + 1, d + 1)
        if _admissible_gap_pair(i, j, s.p, d)
    ]
    if not pairs:
        return [
            CheckCase(
                "no_admissible_pairs", None, None, "vacuous", f"d={d}, all orders are p-powers"
            )
        ]
    cases = []
    for i, j in pairs:
        rec = ppower_gap(s, i, j, base)
        key = f"i={i};j={j}"
        if rec.status == "vacuous":
            cases.append(CheckCase(key, rec.beta_small, None, "vacuous", "derivative vanishes"))
        elif rec.status == "holds":
            cases.append(CheckCase(key, rec.beta_small, rec.beta_large, "pass"))
        else:
            cases.append(CheckCase(key, rec.beta_small, rec.beta_large, "fail"))
    return cases


def _check_l42(s: LimitScenario) -> list[CheckCase]:
    v = s.valuation
    base = choose_base_key(s)
    l = expand(s.limit_key, s.key(base)).as_xpoly()
    cases = []
    for theta in range(base + 1, s.usable_horizon + 1):
        q_theta = s.key(theta)
        nu_q = v.value(q_theta)
        h_theta = s.key_difference(base, theta)
        for i in range(0, l.deg_x() + 1):
            di_at_h = compose(hasse_derivative_x(l, i), h_theta)
            a_i0 = constant_coefficient(di_at_h, q_theta)
            gap = di_at_h - a_i0
            lhs = (
                INF
                if gap.is_zero()
                else truncation_report(v, gap, q_theta).value + nu_q.scale(i)
            )
            rhs = s.truncated_value_limit
            ok = rhs < lhs
            status = "vacuous" if not lhs.is_finite else ("pass" if ok else "fail")
            if not ok:
                status = "fail"
            cases.append(CheckCase(f"theta={theta};i={i}", lhs, rhs, status))
    return cases


CHECKS: dict[str, tuple[str, object]] = {
    "VAX": ("valuation axioms for nu and each truncation", _check_vax),
    "TRC": ("truncation lower bound nu_Q(f) <= nu(f)", _check_trc),
    "L21": ("division by a key controls the remainder value", _check_l21),
    "L22": ("smaller-key truncation distributes over larger-key digits", _check_l22),
    "L23": ("dominant digits agree across keys of larger eps", _check_l23),
    "P24": ("base expansion at the key difference bounds the truncation", _check_p24),
    "C25": ("small-degree polynomials eventually stabilize with constant witness", _check_c25),
    "K31": ("eventual minimizer of the affine value family", _check_k31),
    "P32": ("truncation eventually equals the value at the key difference", _check_p32),
    "L41": ("p-power orders eventually dominate composite multiples", _check_l41),
    "L42": ("constant-digit extraction stays above the truncation limit", _check_l42),
}


def run_check(check_id: str, s: LimitScenario) -> CheckReport:
    if check_id not in CHECKS:
        raise KeypolyError(f"unknown check id {check_id!r}")
    report = validate_scenario(s)
    if not report.ok:
        code, message = report.problems[0]
        raise InvalidScenario(f"{code}: {message}")
    _, runner = CHECKS[check_id]
    return CheckReport(check_id, tuple(runner(s)))


def run_all(s: LimitScenario) -> list[CheckReport]:
    return [run_check(cid, s) for cid in CHECKS]
