"""Computable rank-one valuations on K[x].

Three interchangeable backends:

* ``GaussValuation(field, mu)``: nu(sum c_k x^k) = min_k (v(c_k) + k*mu) over
  the base valuation v of the coefficient field;
* ``AugmentedValuation(base, steps)``: iterated augmentation, where each step
  (Q, gamma) redefines nu(f) as the minimum of nu_prev(a_j) + j*gamma over the
  Q-expansion of f; a step is admissible only when gamma exceeds the previous
  value of Q;
* ``SeriesValuation(field, point)``: nu(f) = least exponent of f evaluated at
  a truncated series point, with conservative precision propagation; results
  are only reported when certified below the working precision.

On top of any backend: the invariant eps(f) = max_b (nu(f) - nu(d_b f))/b over
divided-power derivatives, its attaining set, and a sampled refuter for the
key-polynomial property.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from typing import Iterable, Sequence

from .basefield import Field, HahnSeries, hahn_valuation
from .errors import InvalidChain, PreconditionFailed
from .expansion import expand
from .poly import Poly, hasse_derivative
from .valgroup import INF, Value


class PxValuation:
    field: Field

    def value(self, f: Poly) -> Value:
        raise NotImplementedError


@dataclass(frozen=True)
class GaussValuation(PxValuation):
    field: Field
    mu: Value

    def __post_init__(self):
        if not self.mu.is_finite:
            raise PreconditionFailed("the monomial weight must be finite")

    def value(self, f: Poly) -> Value:
        best = INF
        for k, c in enumerate(f.coeffs):
            if self.field.is_zero(c):
                continue
            v = self.field.valuation(c) + self.mu.scale(k)
            if v < best:
                best = v
        return best


@dataclass(frozen=True)
class AugmentedValuation(PxValuation):
    base: GaussValuation
    steps: tuple[tuple[Poly, Value], ...]
    field: Field = dc_field(init=False, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "field", self.base.field)
        for i, (q, gamma) in enumerate(self.steps):
            if q.field is not self.field:
                raise InvalidChain("augmentation key over a different field")
            if not q.is_monic() or q.degree() < 1:
                raise InvalidChain("augmentation keys must be monic of degree >= 1")
            prev = self._value_at(i, q)
            if not prev < gamma:
                raise InvalidChain(
                    f"step {i + 1}: gamma = {gamma} does not exceed the previous "
                    f"value {prev} of its key"
                )

    def _value_at(self, level: int, f: Poly) -> Value:
        if f.is_zero():
            return INF
        if level == 0:
            return self.base.value(f)
        q, gamma = self.steps[level - 1]
        best = INF
        for j, a in enumerate(expand(f, q).coeffs):
            if a.is_zero():
                continue
            v = self._value_at(level - 1, a) + gamma.scale(j)
            if v < best:
                best = v
        return best

    def value(self, f: Poly) -> Value:
        return self._value_at(len(self.steps), f)


@dataclass(frozen=True)
class SeriesValuation(PxValuation):
    field: Field
    point: HahnSeries

    def __post_init__(self):
        if self.field.kind not in ("prime_field", "ratfunc_tadic", "hahn_series"):
            raise PreconditionFailed(
                "series evaluation needs coefficients expandable in powers of t"
            )
        if self.field.p != self.point.p:
            raise PreconditionFailed("evaluation point over a different prime")
        object.__setattr__(self, "_cache", {})

    def evaluate(self, f: Poly) -> HahnSeries:
        from .basefield import hahn_add, hahn_mul, hahn_zero

        wprec = self.point.precision
        acc = hahn_zero(self.field.p)
        for c in reversed(f.coeffs):
            acc = hahn_add(hahn_mul(acc, self.point), self.field.to_series(c, wprec))
        return acc

    def value(self, f: Poly) -> Value:
        if f.is_zero():
            return INF
        cached = self._cache.get(f)
        if cached is None:
            cached = hahn_valuation(self.evaluate(f))
            self._cache[f] = cached
        return cached


@dataclass(frozen=True)
class EpsilonReport:
    """eps(f) = max over b >= 1 of (nu(f) - nu(d_b f))/b, with the attaining
    set and the per-order table (orders with d_b f = 0 are excluded)."""

    epsilon: Value
    attaining: tuple[int, ...]
    rows: tuple[tuple[int, Value, Value], ...]  # (b, nu(d_b f), quotient)


def epsilon_report(v: PxValuation, f: Poly) -> EpsilonReport:
    deg = f.degree()
    if deg is None or deg < 1:
        raise PreconditionFailed("eps is defined for polynomials of degree >= 1")
    nu_f = v.value(f)
    rows = []
    for b in range(1, deg + 1):
        db = hasse_derivative(f, b)
        if db.is_zero():
            continue
        nu_db = v.value(db)
        rows.append((b, nu_db, (nu_f - nu_db).divided_by(b)))
    best = max(q for _, _, q in rows)
    attaining = tuple(b for b, _, q in rows if q == best)
    return EpsilonReport(best, attaining, tuple(rows))


def epsilon(v: PxValuation, f: Poly) -> Value:
    return epsilon_report(v, f).epsilon


@dataclass(frozen=True)
class KeyProbe:
    """Outcome of scanning a corpus for a witness against key-ness of q:
    some f with deg f < deg q and eps(f) >= eps(q).  A None counterexample
    means none was found, which is not a proof that q is a key."""

    counterexample: Poly | None
    scanned: int
    epsilon_bound: Value


def probe_key(v: PxValuation, q: Poly, corpus: Iterable[Poly]) -> KeyProbe:
    if not q.is_monic():
        raise PreconditionFailed("key candidates must be monic")
    eps_q = epsilon_report(v, q).epsilon
    scanned = 0
    for f in corpus:
        scanned += 1
        deg = f.degree()
        if deg is None or deg < 1 or deg >= q.degree():
            continue
        if epsilon_report(v, f).epsilon >= eps_q:
            return KeyProbe(f, scanned, eps_q)
    return KeyProbe(None, scanned, eps_q)
