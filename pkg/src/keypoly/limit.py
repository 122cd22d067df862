"""Finite-horizon models of pseudo-convergent chains of key polynomials.

A scenario declares a strictly increasing chain Q_1, ..., Q_m of monic keys of
one degree n, together with the analytic limits of their values, a minimal
polynomial F whose value no truncation along the chain attains, and a seed for
the reproducible test corpus.  Everything "for all large rho" becomes "for all
certified rho up to the declared horizon" and results say so.

Operations: structural validation, base-key selection, stability and
fixedness detection, and the constructive rewriting of F into a form
supported on p-power indices (plus constant term), with per-index value
certificates.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, replace
from fractions import Fraction
from functools import cached_property

from .basefield import (
    Field,
    HahnSeries,
    hahn_field,
    hahn_series,
)
from .errors import (
    CertificateFailed,
    HorizonExhausted,
    InvalidScenario,
    ParseError,
    PreconditionFailed,
)
from .expansion import TruncationReport, constant_coefficient, expand, truncation_report
from .literals import parse_poly
from .poly import Poly, compose, constant, hasse_derivative_x, poly, x_poly
from .valgroup import (
    INF,
    ExplicitGammas,
    GammaGenerator,
    MinimizerInput,
    MinimizerResult,
    Value,
    eventual_minimizer,
)
from .valuation import PxValuation, SeriesValuation, epsilon_report


@dataclass(frozen=True)
class LimitScenario:
    """Declarative description of a finite-horizon chain model.

    The chain either lists its keys explicitly or is the family of partial
    sums of the series point: Q_k = x + (first k terms), which is the
    canonical degree-one family in characteristic p.  ``usable_horizon`` is
    the largest index quantified statements run over; the chain may extend
    past it so that horizon-edge witnesses exist.
    """

    field_kind: str
    p: int
    n: int
    corpus_seed: int
    series: HahnSeries
    chain_form: str  # "partial_sums" | "explicit"
    chain_len: int
    chain_explicit: tuple[Poly, ...]
    limit_key: Poly
    q0_index: int
    key_value_limit: Value  # declared limit of nu(Q_k)
    truncated_value_limit: Value  # declared limit of nu_{Q_k}(F)
    usable_horizon: int
    corpus_size: int = 50

    @cached_property
    def field(self) -> Field:
        if self.field_kind != "hahn_series":
            raise InvalidScenario(f"unsupported scenario field {self.field_kind!r}")
        return hahn_field(self.p)

    @cached_property
    def valuation(self) -> PxValuation:
        return SeriesValuation(self.field, self.series)

    @cached_property
    def keys(self) -> tuple[Poly, ...]:
        if self.chain_form == "explicit":
            return self.chain_explicit
        if self.chain_form != "partial_sums":
            raise InvalidScenario(f"unknown chain form {self.chain_form!r}")
        if self.chain_len > len(self.series.terms):
            raise InvalidScenario("partial-sum chain longer than the series")
        out = []
        for k in range(1, self.chain_len + 1):
            a_k = hahn_series(self.p, self.series.terms[:k])
            out.append(x_poly(self.field) + constant(self.field, a_k))
        return tuple(out)

    def key(self, index: int) -> Poly:
        if not 1 <= index <= self.chain_len:
            raise PreconditionFailed(f"chain index {index} out of range")
        return self.keys[index - 1]

    @cached_property
    def gammas(self) -> tuple[Value, ...]:
        return tuple(self.valuation.value(q) for q in self.keys)

    def gamma(self, index: int) -> Value:
        return self.gammas[index - 1]

    def key_difference(self, base: int, rho: int) -> Poly:
        """Q_base - Q_rho, the step polynomial of the chain."""
        return self.key(base) - self.key(rho)

    @cached_property
    def corpus(self) -> tuple[Poly, ...]:
        """Monomials below deg F, the chain keys up to the horizon, F itself,
        and a seeded pseudorandom sample of small-support polynomials."""
        fld = self.field
        out = [poly(fld, [fld.zero()] * k + [fld.one()]) for k in range(self.limit_key.degree())]
        out.extend(self.keys[: self.usable_horizon])
        out.append(self.limit_key)
        rng = random.Random(self.corpus_seed)
        exponents = [
            Fraction(-1),
            Fraction(-1, 2),
            Fraction(-1, 4),
            Fraction(-1, 8),
            Fraction(0),
            Fraction(1, 2),
            Fraction(1),
            Fraction(2),
        ]
        max_deg = self.limit_key.degree()
        while len(out) < max_deg + self.usable_horizon + 1 + self.corpus_size:
            deg = rng.randint(0, max_deg)
            coeffs = []
            for k in range(deg + 1):
                if k < deg and rng.random() < 0.3:
                    coeffs.append(fld.zero())
                    continue
                terms = [
                    (rng.choice(exponents), rng.randrange(1, self.p))
                    for _ in range(rng.randint(1, 2))
                ]
                coeffs.append(hahn_series(self.p, terms))
            f = poly(fld, coeffs)
            if not f.is_zero():
                out.append(f)
        return tuple(out)


# ---------------------------------------------------------------------------
# Validation.


@dataclass(frozen=True)
class ValidationReport:
    problems: tuple[tuple[str, str], ...]  # (code, message)

    @property
    def ok(self) -> bool:
        return not self.problems


_validation_cache: dict[LimitScenario, ValidationReport] = {}


def validate_scenario(s: LimitScenario) -> ValidationReport:
    cached = _validation_cache.get(s)
    if cached is not None:
        return cached
    report = _validate_scenario(s)
    if len(_validation_cache) > 64:
        _validation_cache.clear()
    _validation_cache[s] = report
    return report


def _validate_scenario(s: LimitScenario) -> ValidationReport:
    problems: list[tuple[str, str]] = []

    def bad(code: str, message: str):
        problems.append((code, message))

    if not s.series.precision.is_finite:
        bad("series", "the evaluation point must carry finite precision")
    if not 1 <= s.usable_horizon <= s.chain_len:
        bad("horizon", f"usable horizon {s.usable_horizon} outside 1..{s.chain_len}")
    if not 1 <= s.q0_index <= s.chain_len:
        bad("q0", f"q0 index {s.q0_index} outside the chain")
    try:
        keys = s.keys
    except InvalidScenario as exc:
        bad("chain", str(exc))
        return ValidationReport(tuple(problems))
    for k, q in enumerate(keys, start=1):
        if q.degree() != s.n or not q.is_monic():
            bad("key", f"Q_{k} is not monic of degree {s.n}")
    if not s.limit_key.is_monic():
        bad("F", "the limit key candidate must be monic")
    gammas = s.gammas
    for k in range(1, s.chain_len):
        if not gammas[k - 1] < gammas[k]:
            bad("gamma", f"gamma not increasing at index {k + 1}")
    for k, g in enumerate(gammas, start=1):
        if not g < s.key_value_limit:
            bad("gamma_limit", f"gamma_{k} = {g} not below the declared limit")
    for rho in range(1, s.chain_len + 1):
        for sigma in range(rho + 1, s.chain_len + 1):
            diff = s.key(sigma) - s.key(rho)
            if s.valuation.value(diff) != gammas[rho - 1]:
                bad(
                    "pseudo_convergence",
                    f"nu(Q_{sigma} - Q_{rho}) != gamma_{rho}",
                )
    nu_f = s.valuation.value(s.limit_key)
    prev = None
    for k in range(1, s.chain_len + 1):
        tv = truncation_report(s.valuation, s.limit_key, s.key(k)).value
        if k <= s.usable_horizon and not tv < nu_f:
            bad("unstable", f"nu_(Q_{k})(F) = {tv} not below nu(F) = {nu_f}")
        if not tv < s.truncated_value_limit:
            bad("trunc_limit", f"nu_(Q_{k})(F) at index {k} not below its declared limit")
        if prev is not None and not prev < tv:
            bad("trunc_monotone", f"nu_(Q_k)(F) not increasing at index {k}")
        prev = tv
    return ValidationReport(tuple(problems))


def require_valid(s: LimitScenario) -> LimitScenario:
    report = validate_scenario(s)
    if not report.ok:
        code, message = report.problems[0]
        raise InvalidScenario(f"{code}: {message}")
    return s


def estimated_limits(s: LimitScenario) -> tuple[Value, Value]:
    """Suprema observed along the chain, as uncertified stand-ins for the
    declared limits."""
    best_trunc = max(
        truncation_report(s.valuation, s.limit_key, q).value for q in s.keys
    )
    return max(s.gammas), best_trunc


# ---------------------------------------------------------------------------
# Base-key selection and the two detectors.


def choose_base_key(s: LimitScenario) -> int:
    """Least chain index k > q0 with

        eps(Q_k) - eps(Q_0) > d * (B - nu(Q_k))   and
        eps(Q_k) - eps(Q_0) > Bbar - nu_(Q_k)(F),

    where d is the expansion length of F, B and Bbar the declared limits."""
    v = s.valuation
    q0 = s.key(s.q0_index)
    eps0 = epsilon_report(v, q0).epsilon
    d = expand(s.limit_key, q0).deg_x()
    for k in range(s.q0_index + 1, s.usable_horizon + 1):
        qk = s.key(k)
        gap = epsilon_report(v, qk).epsilon - eps0
        cond_value = gap > (s.key_value_limit - s.gamma(k)).scale(d)
        cond_trunc = gap > s.truncated_value_limit - truncation_report(v, s.limit_key, qk).value
        if cond_value and cond_trunc:
            return k
    raise HorizonExhausted("no admissible base key within the usable horizon")


@dataclass(frozen=True)
class StabilityReport:
    """Outcome of scanning truncations nu_(Q_k) for k up to the horizon.

    ``index`` is the least k whose truncation attains nu(f); a negative
    outcome is horizon-relative, not a proof of instability.  When
    deg f < deg F, ``constant_witness_index`` is the least scanned index whose
    attaining set contains 0, if one exists."""

    stable: bool
    value: Value
    index: int | None
    report: TruncationReport | None
    scan: tuple[tuple[int, Value], ...]
    constant_witness_index: int | None
    constant_witness: TruncationReport | None


def stability_at_horizon(s: LimitScenario, f: Poly) -> StabilityReport:
    if f.is_zero():
        raise PreconditionFailed("stability is defined for nonzero polynomials")
    v = s.valuation
    nu_f = v.value(f)
    scan = []
    hit = None
    hit_report = None
    witness_idx = None
    witness = None
    want_witness = f.degree() < s.limit_key.degree()
    for k in range(1, s.usable_horizon + 1):
        rep = truncation_report(v, f, s.key(k))
        scan.append((k, rep.value))
        if rep.value == nu_f:
            if hit is None:
                hit, hit_report = k, rep
            if want_witness and witness_idx is None and 0 in rep.attaining:
                witness_idx, witness = k, rep
        if hit is not None and (not want_witness or witness_idx is not None):
            break
    return StabilityReport(
        stable=hit is not None,
        value=nu_f,
        index=hit,
        report=hit_report,
        scan=tuple(scan),
        constant_witness_index=witness_idx,
        constant_witness=witness,
    )


@dataclass(frozen=True)
class FixednessRow:
    rho: int
    nu_forward: Value  # nu(l(Q_base - Q_rho))
    nu_backward: Value  # nu(l(Q_rho - Q_base))


@dataclass(frozen=True)
class FixednessReport:
    """Outcome of evaluating the base-key expansion l of f along the chain
    tail.  Both orientations of the key difference are evaluated; the match
    is decided on the forward one (base minus tail key).  In characteristic 2
    the two agree."""

    fixed: bool
    value: Value
    base_index: int
    index: int | None
    rows: tuple[FixednessRow, ...]


def fixedness_at_horizon(
    s: LimitScenario, f: Poly, base_index: int | None = None
) -> FixednessReport:
    if f.is_zero():
        raise PreconditionFailed("fixedness is defined for nonzero polynomials")
    base = choose_base_key(s) if base_index is None else base_index
    v = s.valuation
    nu_f = v.value(f)
    l = expand(f, s.key(base)).as_xpoly()
    rows = []
    hit = None
    for rho in range(1, s.chain_len + 1):
        if not s.gamma(base) < s.gamma(rho):
            continue
        h = s.key_difference(base, rho)
        fwd = v.value(compose(l, h))
        bwd = v.value(compose(l, -h))
        rows.append(FixednessRow(rho, fwd, bwd))
        if hit is None and fwd == nu_f:
            hit = rho
            break
    return FixednessReport(hit is not None, nu_f, base, hit, tuple(rows))


# ---------------------------------------------------------------------------
# p-power support machinery.


@dataclass(frozen=True)
class PPowerSplit:
    """Indices 1..d split into powers of p and the rest."""

    d: int
    p: int
    powers: tuple[int, ...]
    rest: tuple[int, ...]


def ppower_split(d: int, p: int) -> PPowerSplit:
    if d < 1:
        raise PreconditionFailed("the index range must be nonempty")
    powers = []
    q = 1
    while q <= d:
        powers.append(q)
        q *= p
    rest = tuple(i for i in range(1, d + 1) if i not in powers)
    return PPowerSplit(d, p, tuple(powers), rest)


@dataclass(frozen=True)
class GapRow:
    sigma: int
    lhs: Value  # beta_small + small*gamma_sigma
    rhs: Value  # beta_large + large*gamma_sigma
    ok: bool


@dataclass(frozen=True)
class GapRecord:
    """Comparison of the affine forms attached to a p-power index and one of
    its non-p-power multiples: the p-power side must win eventually, and also
    at the declared limit of the gammas.  ``status`` is "holds", "fails", or
    "vacuous" (the larger derivative vanishes)."""

    small_index: int
    large_index: int
    beta_small: Value | None
    beta_large: Value | None
    status: str
    threshold: int | None
    rows: tuple[GapRow, ...]
    holds_at_limit: bool | None


def gap_record(
    beta_small: Value,
    small: int,
    beta_large: Value,
    large: int,
    gammas: tuple[Value, ...],
    limit: Value,
) -> GapRecord:
    """Evaluate beta_small + small*gamma < beta_large + large*gamma over a
    1-based gamma list and at the declared limit."""
    if not small < large:
        raise PreconditionFailed("indices must satisfy small < large")
    rows = []
    for sigma, g in enumerate(gammas, start=1):
        lhs = beta_small + g.scale(small)
        rhs = beta_large + g.scale(large)
        rows.append(GapRow(sigma, lhs, rhs, lhs < rhs))
    # smallest rho >= 1 with every later row ok; requires the last row ok
    threshold = None
    if rows and rows[-1].ok:
        last_fail = max((r.sigma for r in rows if not r.ok), default=0)
        threshold = max(last_fail, 1)
    at_limit = (beta_small + limit.scale(small)) < (beta_large + limit.scale(large))
    status = "holds" if threshold is not None and at_limit else "fails"
    return GapRecord(small, large, beta_small, beta_large, status, threshold, tuple(rows), at_limit)


def _admissible_gap_pair(i: int, j: int, p: int, d: int) -> bool:
    if not (1 <= i < j <= d):
        return False
    q = i
    while q % p == 0:
        q //= p
    if q != 1:
        return False  # i must be a power of p
    if j % i != 0:
        return False
    r = j // i
    return r > 1 and r % p != 0


def _stabilized_derivative_values(
    s: LimitScenario, l_xpoly, base: int
) -> tuple[dict[int, Value], int]:
    """beta_i = nu(d_i l (Q_base - Q_rho)) once constant along the tail;
    returns the map (vanishing derivatives excluded) and the least tail index
    from which every value is stabilized."""
    v = s.valuation
    d = l_xpoly.deg_x()
    tail = range(base + 1, s.chain_len + 1)
    betas: dict[int, Value] = {}
    tables: dict[int, list[Value]] = {}
    for i in range(1, d + 1):
        di = hasse_derivative_x(l_xpoly, i)
        if di.is_zero():
            continue
        tables[i] = [v.value(compose(di, s.key_difference(base, rho))) for rho in tail]
    stable_from = base
    for i, vals in tables.items():
        idx = len(vals) - 1
        while idx > 0 and vals[idx - 1] == vals[idx]:
            idx -= 1
        if idx == len(vals) - 1 and len(vals) > 1:
            raise HorizonExhausted(
                f"derivative order {i}: values not stabilized by the horizon"
            )
        betas[i] = vals[-1]
        # vals constant from tail position idx, i.e. for every rho > base + idx
        stable_from = max(stable_from, base + idx)
    return betas, stable_from


def ppower_gap(
    s: LimitScenario, i: int, j: int, base_index: int | None = None
) -> GapRecord:
    """The gap record for derivative orders (i, j) of the base expansion of
    F, where i is a p-power and j one of its admissible multiples."""
    base = choose_base_key(s) if base_index is None else base_index
    l = expand(s.limit_key, s.key(base)).as_xpoly()
    d = l.deg_x()
    if not _admissible_gap_pair(i, j, s.p, d):
        raise PreconditionFailed(
            f"orders ({i}, {j}) are not an admissible p-power pair below {d}"
        )
    betas, _ = _stabilized_derivative_values(s, l, base)
    if j not in betas:
        return GapRecord(i, j, betas.get(i), None, "vacuous", None, (), None)
    tail_gammas = tuple(s.gamma(r) for r in range(base + 1, s.chain_len + 1))
    rec = gap_record(betas[i], i, betas[j], j, tail_gammas, s.key_value_limit)
    # report thresholds as chain indices
    threshold = None if rec.threshold is None else base + rec.threshold
    rows = tuple(
        GapRow(base + r.sigma, r.lhs, r.rhs, r.ok) for r in rec.rows
    )
    return replace(rec, threshold=threshold, rows=rows)


# ---------------------------------------------------------------------------
# The p-power rewrite of the limit key and its certificates.


@dataclass(frozen=True)
class RewriteParts:
    base: int
    l: object  # XPoly of F at the base key
    d: int
    split: PPowerSplit
    betas: dict
    minimizer: MinimizerResult
    threshold: int


def _rewrite_parts(s: LimitScenario, base: int) -> RewriteParts:
    l = expand(s.limit_key, s.key(base)).as_xpoly()
    d = l.deg_x()
    split = ppower_split(d, s.p)
    betas, stable_from = _stabilized_derivative_values(s, l, base)
    orders = sorted(betas)
    minimizer = eventual_minimizer(
        MinimizerInput(
            betas=tuple(betas[i] for i in orders),
            ts=tuple(orders),
            gammas=ExplicitGammas(
                tuple(s.gamma(r) for r in range(base + 1, s.chain_len + 1))
            ),
        )
    )
    threshold = max(stable_from, base + minimizer.rho)
    for j in split.rest:
        if j in betas:
            for i in split.powers:
                if _admissible_gap_pair(i, j, s.p, d):
                    rec = ppower_gap(s, i, j, base)
                    if rec.status == "holds" and rec.threshold is not None:
                        threshold = max(threshold, rec.threshold)
                        break
            else:
                raise HorizonExhausted(
                    f"no p-power order dominates order {j} within the horizon"
                )
    b_order = orders[minimizer.b - 1]
    return RewriteParts(base, l, d, split, betas, replace(minimizer, b=b_order), threshold)


def rewrite_threshold(s: LimitScenario, base_index: int | None = None) -> int:
    """Chain index past which the p-power rewrite is certified to work."""
    base = choose_base_key(s) if base_index is None else base_index
    return _rewrite_parts(s, base).threshold


@dataclass(frozen=True)
class RewriteRow:
    rho: int
    nu_l: Value  # nu(l(h_rho))
    nu_rewritten: Value  # nu of the rewrite evaluated along the tail
    nu_difference: Value
    bound: Value  # beta_b + b*gamma_rho
    identical: bool
    dominance_ok: bool
    value_matches_bound: bool


@dataclass(frozen=True)
class RewriteCertificate:
    theta: int
    base: int
    minimizer_order: int
    minimizer_beta: Value
    threshold: int
    rows: tuple[RewriteRow, ...]
    monic: bool
    deg_x: int
    deg_x_preserved: bool
    in_sn_at_horizon: bool
    degenerate_identity: bool  # every non-p-power derivative vanished

    @property
    def ok(self) -> bool:
        return (
            self.monic
            and self.deg_x_preserved
            and self.in_sn_at_horizon
            and all(r.dominance_ok and r.value_matches_bound for r in self.rows)
        )


def _check_theta(s: LimitScenario, theta: int, parts: RewriteParts):
    if theta <= parts.threshold:
        raise PreconditionFailed(
            f"theta = {theta} does not exceed the certified threshold {parts.threshold}"
        )
    if theta >= s.usable_horizon:
        raise HorizonExhausted(
            f"theta = {theta} leaves no tail below the horizon {s.usable_horizon}"
        )


def ppower_rewrite(
    s: LimitScenario, theta: int, base_index: int | None = None
) -> tuple[Poly, RewriteCertificate]:
    """Rewrite F as l(h_theta) + sum over p-power orders i of
    (d_i l)(h_theta) * Q_theta^i, where h_rho is the base key minus Q_rho.

    The certificate evaluates, for every tail index rho, the original and
    rewritten expansions at h_rho: their difference must sit strictly above
    beta_b + b*gamma_rho, which is the common value of both sides."""
    base = choose_base_key(s) if base_index is None else base_index
    parts = _rewrite_parts(s, base)
    _check_theta(s, theta, parts)
    v = s.valuation
    l, split = parts.l, parts.split
    h_theta = s.key_difference(base, theta)
    head = compose(l, h_theta)
    derivs = {i: compose(hasse_derivative_x(l, i), h_theta) for i in range(1, parts.d + 1)}
    q_theta = s.key(theta)
    result = head
    for i in split.powers:
        result = result + derivs[i] * q_theta**i

    def rewritten_at(a: Poly) -> Poly:
        # head + sum_{i in powers} (d_i l)(h_theta) * (a - h_theta)^i
        acc = head
        shift = a - h_theta
        for i in split.powers:
            acc = acc + derivs[i] * shift**i
        return acc

    degenerate = all(derivs[j].is_zero() for j in split.rest)
    b = parts.minimizer.b
    beta_b = parts.betas[b]
    rows = []
    for rho in range(theta + 1, s.usable_horizon + 1):
        h_rho = s.key_difference(base, rho)
        original = compose(l, h_rho)
        rewritten = rewritten_at(h_rho)
        diff = original - rewritten
        nu_l = v.value(original)
        nu_rw = v.value(rewritten)
        nu_diff = v.value(diff)
        bound = beta_b + s.gamma(rho).scale(b)
        identical = diff.is_zero()
        dominance = identical or bound < nu_diff
        rows.append(
            RewriteRow(rho, nu_l, nu_rw, nu_diff, bound, identical, dominance, nu_l == bound)
        )
    exp = expand(result, q_theta)
    nu_result = v.value(result)
    in_sn = all(
        truncation_report(v, result, s.key(k)).value < nu_result
        for k in range(1, s.usable_horizon + 1)
    )
    cert = RewriteCertificate(
        theta=theta,
        base=base,
        minimizer_order=b,
        minimizer_beta=beta_b,
        threshold=parts.threshold,
        rows=tuple(rows),
        monic=result.is_monic(),
        deg_x=exp.deg_x(),
        deg_x_preserved=exp.deg_x() == parts.d,
        in_sn_at_horizon=in_sn,
        degenerate_identity=degenerate,
    )
    if not cert.ok:
        bad = next(
            (r.rho for r in cert.rows if not (r.dominance_ok and r.value_matches_bound)),
            None,
        )
        raise CertificateFailed(f"rewrite certificate failed (first bad index: {bad})")
    return result, cert


@dataclass(frozen=True)
class ReducedRow:
    rho: int
    nu_gap: Value  # nu_rho of (rewrite - reduced rewrite)
    nu_f: Value  # nu_rho of F
    above_limit: bool  # nu_gap > declared truncation limit
    limit_above_f: bool  # declared truncation limit > nu_f


@dataclass(frozen=True)
class ReducedCertificate:
    theta: int
    base: int
    coefficients: tuple[tuple[int, Poly], ...]  # (order, digit), orders in powers + {0}
    degree_bounds_ok: bool
    support_ok: bool
    leading_is_one: bool
    extraction_rows: tuple[tuple[int, Value], ...]  # (order, nu_theta(d_i l(h) - a_i0) + i*nu(Q))
    extraction_ok: bool
    rows: tuple[ReducedRow, ...]
    in_sn_at_horizon: bool

    @property
    def ok(self) -> bool:
        return (
            self.degree_bounds_ok
            and self.support_ok
            and self.leading_is_one
            and self.extraction_ok
            and self.in_sn_at_horizon
            and all(r.above_limit and r.limit_above_f for r in self.rows)
        )


def reduced_ppower_rewrite(
    s: LimitScenario, theta: int, base_index: int | None = None
) -> tuple[Poly, ReducedCertificate]:
    """The fully reduced p-power form: each surviving coefficient is replaced
    by the constant digit of its Q_theta-expansion, so the result is an
    honest expansion supported on p-power orders and the constant term."""
    base = choose_base_key(s) if base_index is None else base_index
    parts = _rewrite_parts(s, base)
    _check_theta(s, theta, parts)
    v = s.valuation
    rewritten, _ = ppower_rewrite(s, theta, base)
    l, split = parts.l, parts.split
    q_theta = s.key(theta)
    h_theta = s.key_difference(base, theta)
    nu_q_theta = v.value(q_theta)
    coeffs: list[tuple[int, Poly]] = []
    extraction_rows = []
    result = None
    for i in [0] + list(split.powers):
        di_at_h = compose(hasse_derivative_x(l, i), h_theta)
        a_i = constant_coefficient(di_at_h, q_theta)
        coeffs.append((i, a_i))
        gap = di_at_h - a_i
        nu_gap = (
            INF
            if gap.is_zero()
            else truncation_report(v, gap, q_theta).value + nu_q_theta.scale(i)
        )
        extraction_rows.append((i, nu_gap))
        term = a_i * q_theta**i
        result = term if result is None else result + term
    rows = []
    for rho in range(theta + 1, s.usable_horizon + 1):
        q_rho = s.key(rho)
        diff = rewritten - result
        nu_gap = (
            INF if diff.is_zero() else truncation_report(v, diff, q_rho).value
        )
        nu_f = truncation_report(v, s.limit_key, q_rho).value
        rows.append(
            ReducedRow(
                rho,
                nu_gap,
                nu_f,
                above_limit=s.truncated_value_limit < nu_gap,
                limit_above_f=nu_f < s.truncated_value_limit,
            )
        )
    exp = expand(result, q_theta)
    support = {i for i, a in enumerate(exp.coeffs) if not a.is_zero()}
    nu_result = v.value(result)
    cert = ReducedCertificate(
        theta=theta,
        base=base,
        coefficients=tuple(coeffs),
        degree_bounds_ok=all(
            a.is_zero() or a.degree() < s.n for _, a in coeffs
        ),
        support_ok=support <= set(split.powers) | {0},
        leading_is_one=exp.deg_x() == parts.d and s.field.is_one(exp.coeffs[-1].constant())
        and exp.coeffs[-1].degree() == 0,
        extraction_rows=tuple(extraction_rows),
        extraction_ok=all(s.truncated_value_limit < nu for _, nu in extraction_rows),
        rows=tuple(rows),
        in_sn_at_horizon=all(
            truncation_report(v, result, s.key(k)).value < nu_result
            for k in range(1, s.usable_horizon + 1)
        ),
    )
    if not cert.ok:
        raise CertificateFailed("reduced rewrite certificate failed")
    return result, cert


# ---------------------------------------------------------------------------
# Scenario file format: line-oriented key/value text, canonical order.


_HEADER = "keypoly-scenario 1"


def serialize_scenario(s: LimitScenario) -> str:
    field_name = "hahn" if s.field_kind == "hahn_series" else s.field_kind
    lines = [
        _HEADER,
        f"field {field_name}",
        f"p {s.p}",
        f"n {s.n}",
        f"seed {s.corpus_seed}",
        f"corpus_size {s.corpus_size}",
        f"series.precision {s.series.precision}",
    ]
    for e, c in s.series.terms:
        lines.append(f"series.term {e} {c}")
    if s.chain_form == "partial_sums":
        lines.append(f"chain partial_sums {s.chain_len}")
    else:
        lines.append(f"chain explicit {s.chain_len}")
        for q in s.chain_explicit:
            lines.append(f"chain.poly {q.render(compact=True)}")
    lines.append(f"F {s.limit_key.render(compact=True)}")
    lines.append(f"q0_index {s.q0_index}")
    lines.append(f"key_value_limit {s.key_value_limit}")
    lines.append(f"truncated_value_limit {s.truncated_value_limit}")
    lines.append(f"usable_horizon {s.usable_horizon}")
    return "\n".join(lines) + "\n"


def parse_scenario(text: str) -> LimitScenario:
    rows: list[tuple[str, str]] = []
    for raw in text.splitlines():
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        key, _, rest = line.partition(" ")
        rows.append((key, rest.strip()))
    if not rows or f"{rows[0][0]} {rows[0][1]}" != _HEADER:
        raise ParseError("missing scenario header")
    fields: dict[str, str] = {}
    series_terms: list[tuple[Fraction, int]] = []
    chain_lits: list[str] = []
    for key, rest in rows[1:]:
        if key == "series.term":
            try:
                e, c = rest.split()
                series_terms.append((Fraction(e), int(c)))
            except ValueError as exc:
                raise ParseError(f"bad series term {rest!r}") from exc
        elif key == "chain.poly":
            chain_lits.append(rest)
        elif key in fields:
            raise ParseError(f"duplicate scenario key {key!r}")
        else:
            fields[key] = rest

    def need(key: str) -> str:
        if key not in fields:
            raise ParseError(f"missing scenario key {key!r}")
        return fields[key]

    try:
        field_kind = {"hahn": "hahn_series"}.get(need("field"), need("field"))
        p = int(need("p"))
        n = int(need("n"))
        seed = int(need("seed"))
        corpus_size = int(fields.get("corpus_size", "50"))
        precision = Value.parse(need("series.precision"))
        series = hahn_series(p, series_terms, precision)
        chain_kind, _, chain_len_text = need("chain").partition(" ")
        chain_len = int(chain_len_text)
        fld = hahn_field(p) if field_kind == "hahn_series" else None
        if fld is None:
            raise ParseError(f"unsupported scenario field {field_kind!r}")
        if chain_kind == "explicit":
            if len(chain_lits) != chain_len:
                raise ParseError("explicit chain length mismatch")
            chain_explicit = tuple(parse_poly(lit, fld) for lit in chain_lits)
        elif chain_kind == "partial_sums":
            if chain_lits:
                raise ParseError("partial-sum chains take no chain.poly lines")
            chain_explicit = ()
        else:
            raise ParseError(f"unknown chain form {chain_kind!r}")
        return LimitScenario(
            field_kind=field_kind,
            p=p,
            n=n,
            corpus_seed=seed,
            corpus_size=corpus_size,
            series=series,
            chain_form=chain_kind,
            chain_len=chain_len,
            chain_explicit=chain_explicit,
            limit_key=parse_poly(need("F"), fld),
            q0_index=int(need("q0_index")),
            key_value_limit=Value.parse(need("key_value_limit")),
            truncated_value_limit=Value.parse(need("truncated_value_limit")),
            usable_horizon=int(need("usable_horizon")),
        )
    except ParseError:
        raise
    except (ValueError, KeyError) as exc:
        raise ParseError(f"malformed scenario: {exc}") from exc


def load_scenario(path) -> LimitScenario:
    from pathlib import Path

    return parse_scenario(Path(path).read_text(encoding="utf-8"))
