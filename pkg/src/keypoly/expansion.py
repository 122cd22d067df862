"""Base-q digit expansions of polynomials and the truncated valuations
derived from them."""

from __future__ import annotations

from dataclasses import dataclass

from .errors import PreconditionFailed
from .poly import Poly, XPoly, poly_divmod, xpoly
from .valgroup import INF, Value


@dataclass(frozen=True)
class Expansion:
    """f = sum a_i q^i with deg a_i < deg q; coefficients ascending in i,
    last one nonzero (the zero polynomial expands to a single zero digit)."""

    f: Poly
    q: Poly
    coeffs: tuple[Poly, ...]

    def deg_x(self) -> int:
        return len(self.coeffs) - 1

    def as_xpoly(self) -> XPoly:
        return xpoly(self.q.field, self.q.degree(), self.coeffs)


def expand(f: Poly, q: Poly) -> Expansion:
    """Repeated division with remainder by a monic q of degree >= 1."""
    if q.degree() is None or q.degree() < 1:
        raise PreconditionFailed("expansion base must have degree >= 1")
    if not q.is_monic():
        raise PreconditionFailed("expansion base must be monic")
    digits = []
    rest = f
    while True:
        rest, r = poly_divmod(rest, q)
        digits.append(r)
        if rest.is_zero():
            break
    return Expansion(f, q, tuple(digits))


def constant_coefficient(f: Poly, q: Poly) -> Poly:
    """The digit a_0 of the q-expansion, i.e. f mod q."""
    if q.degree() is None or q.degree() < 1:
        raise PreconditionFailed("expansion base must have degree >= 1")
    if not q.is_monic():
        raise PreconditionFailed("expansion base must be monic")
    return poly_divmod(f, q)[1]


@dataclass(frozen=True)
class TruncationReport:
    """nu_q(f) = min_i nu(a_i q^i) over the q-expansion, computed termwise as
    nu(a_i) + i*nu(q); zero digits contribute inf and never attain.

    ``attaining`` is the set of attaining indices, ``delta`` its maximum
    (None when f = 0)."""

    value: Value
    terms: tuple[Value, ...]
    attaining: tuple[int, ...]
    delta: int | None


def truncation_report(v, f: Poly, q: Poly) -> TruncationReport:
    nu_q = v.value(q)
    terms = []
    for i, a in enumerate(expand(f, q).coeffs):
        if a.is_zero():
            terms.append(INF)
        else:
            terms.append(v.value(a) + nu_q.scale(i))
    finite = [t for t in terms if t.is_finite]
    if not finite:
        return TruncationReport(INF, tuple(terms), (), None)
    best = min(finite)
    attaining = tuple(i for i, t in enumerate(terms) if t == best)
    return TruncationReport(best, tuple(terms), attaining, max(attaining))


def truncate(v, f: Poly, q: Poly) -> Value:
    return truncation_report(v, f, q).value
