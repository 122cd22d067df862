"""Coefficient fields with base valuations.

Four coefficient domains share one duck-typed interface:

* ``prime_field(p)``      -- GF(p) with the trivial valuation;
* ``padic_rationals(p)``  -- Q with the p-adic valuation;
* ``rational_functions(p)`` -- GF(p)(t) with the t-adic valuation;
* ``hahn_field(p)``       -- truncated series in rational powers of t over
  GF(p), the domain that realizes limits of pseudo-convergent coefficient
  families.

Field objects operate on plain payloads: ints for GF(p), ``Fraction`` for Q,
``RatFunc`` for GF(p)(t) and ``HahnSeries`` for the series domain.  All
payloads are immutable and canonical, so equality is structural.
"""

from __future__ import annotations

import functools
import math
from dataclasses import dataclass
from fractions import Fraction

from .errors import DivisionByZero, InsufficientPrecision, PreconditionFailed
from .valgroup import INF, Value

# ---------------------------------------------------------------------------
# Dense coefficient lists over GF(p): ascending powers of t, trimmed.


def _trim(cs: tuple[int, ...]) -> tuple[int, ...]:
    n = len(cs)
    while n and cs[n - 1] == 0:
        n -= 1
    return tuple(cs[:n])


def _gmake(cs, p) -> tuple[int, ...]:
    return _trim(tuple(c % p for c in cs))


def _gadd(a, b, p):
    n = max(len(a), len(b))
    return _trim(
        tuple(((a[i] if i < len(a) else 0) + (b[i] if i < len(b) else 0)) % p for i in range(n))
    )


def _gneg(a, p):
    return tuple((-c) % p for c in a)


def _gsub(a, b, p):
    return _gadd(a, _gneg(b, p), p)


def _gmul(a, b, p):
    if not a or not b:
        return ()
    out = [0] * (len(a) + len(b) - 1)
    for i, ca in enumerate(a):
        if ca:
            for j, cb in enumerate(b):
                out[i + j] = (out[i + j] + ca * cb) % p
    return _trim(tuple(out))


def _gdivmod(a, b, p):
    if not b:
        raise DivisionByZero("polynomial division by zero over GF(p)")
    inv_lead = pow(b[-1], p - 2, p)
    r = list(a)
    q = [0] * max(len(a) - len(b) + 1, 0)
    while len(r) >= len(b):
        while r and r[-1] == 0:
            r.pop()
        if len(r) < len(b):
            break
        c = (r[-1] * inv_lead) % p
        shift = len(r) - len(b)
        q[shift] = c
        for j, cb in enumerate(b):
            r[shift + j] = (r[shift + j] - c * cb) % p
        r.pop()
    return _trim(tuple(q)), _trim(tuple(r))


def _ggcd(a, b, p):
    while b:
        a, b = b, _gdivmod(a, b, p)[1]
    if a:
        inv_lead = pow(a[-1], p - 2, p)
        a = tuple((c * inv_lead) % p for c in a)
    return a


def _gord(a) -> int:
    for i, c in enumerate(a):
        if c:
            return i
    raise ValueError("order of the zero polynomial")


def _grender(a, p) -> str:
    if not a:
        return "0"
    parts = []
    for k in range(len(a) - 1, -1, -1):
        c = a[k]
        if not c:
            continue
        if k == 0:
            parts.append(str(c))
        else:
            tp = "t" if k == 1 else f"t^{k}"
            parts.append(tp if c == 1 else f"{c}*{tp}")
    return "+".join(parts)


def _is_prime(p: int) -> bool:
    if p < 2:
        return False
    d = 2
    while d * d <= p:
        if p % d == 0:
            return False
        d += 1
    return True


# ---------------------------------------------------------------------------
# Rational functions over GF(p): reduced fractions with monic denominator.


@dataclass(frozen=True, slots=True)
class RatFunc:
    num: tuple[int, ...]
    den: tuple[int, ...]


def _ratfunc(num, den, p) -> RatFunc:
    num, den = _gmake(num, p), _gmake(den, p)
    if not den:
        raise DivisionByZero("rational function with zero denominator")
    if not num:
        return RatFunc((), (1,))
    g = _ggcd(num, den, p)
    if len(g) > 1:
        num = _gdivmod(num, g, p)[0]
        den = _gdivmod(den, g, p)[0]
    inv_lead = pow(den[-1], p - 2, p)
    num = tuple((c * inv_lead) % p for c in num)
    den = tuple((c * inv_lead) % p for c in den)
    return RatFunc(num, den)


# ---------------------------------------------------------------------------
# Truncated series in rational powers of t over GF(p).


@dataclass(frozen=True, slots=True)
class HahnSeries:
    """Finite list of (exponent, coefficient) terms, exponents strictly
    increasing rationals, coefficients nonzero mod p; every term below the
    precision is exact, nothing is known at or above it.  ``precision`` is a
    finite value or inf (exact series)."""

    p: int
    terms: tuple[tuple[Fraction, int], ...]
    precision: Value


def hahn_series(p, terms, precision: Value = INF) -> HahnSeries:
    acc: dict[Fraction, int] = {}
    for e, c in terms:
        e = Fraction(e)
        acc[e] = (acc.get(e, 0) + c) % p
    kept = sorted(
        (e, c)
        for e, c in acc.items()
        if c and (not precision.is_finite or e < precision.frac)
    )
    return HahnSeries(p, tuple(kept), precision)


def hahn_monomial(p, exponent, coeff: int = 1, precision: Value = INF) -> HahnSeries:
    return hahn_series(p, [(Fraction(exponent), coeff)], precision)


def hahn_zero(p) -> HahnSeries:
    return HahnSeries(p, (), INF)


def hahn_lead(a: HahnSeries) -> Value:
    """Least exponent; inf for the (known) zero series."""
    return Value(a.terms[0][0]) if a.terms else INF


def hahn_valuation(a: HahnSeries) -> Value:
    """Least exponent of a term.  An empty list with finite precision is
    indistinguishable from zero and raises rather than returning inf."""
    if a.terms:
        return Value(a.terms[0][0])
    if a.precision.is_finite:
        raise InsufficientPrecision(
            f"series is 0 up to O(t^({a.precision})); valuation undetermined"
        )
    return INF


def hahn_add(a: HahnSeries, b: HahnSeries) -> HahnSeries:
    if a.p != b.p:
        raise PreconditionFailed("series over different primes")
    prec = min(a.precision, b.precision)
    return hahn_series(a.p, list(a.terms) + list(b.terms), prec)


def hahn_neg(a: HahnSeries) -> HahnSeries:
    return HahnSeries(a.p, tuple((e, (-c) % a.p) for e, c in a.terms), a.precision)


def hahn_mul(a: HahnSeries, b: HahnSeries) -> HahnSeries:
    if a.p != b.p:
        raise PreconditionFailed("series over different primes")
    prec = min(a.precision + hahn_lead(b), b.precision + hahn_lead(a))
    out: dict[Fraction, int] = {}
    for ea, ca in a.terms:
        for eb, cb in b.terms:
            e = ea + eb
            out[e] = (out.get(e, 0) + ca * cb) % a.p
    return hahn_series(a.p, out.items(), prec)


def hahn_scale(a: HahnSeries, c: int) -> HahnSeries:
    return hahn_series(a.p, ((e, k * c) for e, k in a.terms), a.precision)


def hahn_pow(a: HahnSeries, n: int) -> HahnSeries:
    if n < 0:
        raise PreconditionFailed("negative series power; use inv")
    out = hahn_monomial(a.p, 0, 1)
    base = a
    while n:
        if n & 1:
            out = hahn_mul(out, base)
        n >>= 1
        if n:
            base = hahn_mul(base, base)
    return out


def hahn_truncate(a: HahnSeries, precision: Value) -> HahnSeries:
    return hahn_series(a.p, a.terms, min(a.precision, precision))


def hahn_inv(a: HahnSeries, max_steps: int = 10_000) -> HahnSeries:
    """Multiplicative inverse by geometric expansion.

    Exact for a single-term series.  A multi-term series must carry finite
    precision: the inverse of s with leading exponent e is then computed to
    precision prec(s) - 2e, the best a first-order error analysis supports.
    """
    if not a.terms:
        if a.precision.is_finite:
            raise InsufficientPrecision("cannot invert a series known only as 0")
        raise DivisionByZero("inverse of the zero series")
    e0, c0 = a.terms[0]
    c0i = pow(c0, a.p - 2, a.p)
    head = hahn_monomial(a.p, -e0, c0i)
    one = hahn_monomial(a.p, 0, 1)
    rest = hahn_add(one, hahn_neg(hahn_mul(head, a)))  # val > 0 when nonzero
    if not rest.terms and not rest.precision.is_finite:
        return head
    if not a.precision.is_finite:
        raise InsufficientPrecision(
            "inverse of an exact multi-term series does not terminate; truncate first"
        )
    target = a.precision - Value(e0)  # relative precision of the input
    out = one
    power = rest
    for _ in range(max_steps):
        if not power.terms or not hahn_lead(power) < target:
            break
        out = hahn_add(out, power)
        power = hahn_mul(power, rest)
    else:
        raise InsufficientPrecision("series inverse did not converge")
    result = hahn_mul(head, out)
    return hahn_truncate(result, a.precision - Value(2 * e0))


def _exp_str(e: Fraction) -> str:
    return str(e) if e.denominator == 1 else f"({e})"


def hahn_render(a: HahnSeries) -> str:
    parts = []
    for e, c in a.terms:
        if e == 0:
            parts.append(str(c))
        else:
            tp = "t" if e == 1 else f"t^{_exp_str(e)}"
            parts.append(tp if c == 1 else f"{c}*{tp}")
    if a.precision.is_finite:
        parts.append(f"O(t^{_exp_str(a.precision.frac)})")
    return "+".join(parts) if parts else "0"


# ---------------------------------------------------------------------------
# Field interface.


class Field:
    """Shared plumbing; subclasses implement arithmetic on their payloads."""

    kind: str
    p: int

    def __repr__(self):
        return f"{self.kind}({self.p})"

    def sub(self, a, b):
        return self.add(a, self.neg(b))

    def div(self, a, b):
        return self.mul(a, self.inv(b))

    def is_one(self, a) -> bool:
        return a == self.one()

    def from_fraction(self, fr: Fraction):
        num = self.from_int(fr.numerator)
        if fr.denominator == 1:
            return num
        return self.div(num, self.from_int(fr.denominator))

    def has_t(self) -> bool:
        return False

    def t_power(self, e: Fraction):
        raise PreconditionFailed(f"{self.kind}({self.p}) has no element t")


class PrimeField(Field):
    kind = "prime_field"

    def __init__(self, p):
        self.p = p

    def zero(self):
        return 0

    def one(self):
        return 1

    def from_int(self, n):
        return n % self.p

    def add(self, a, b):
        return (a + b) % self.p

    def neg(self, a):
        return (-a) % self.p

    def mul(self, a, b):
        return (a * b) % self.p

    def inv(self, a):
        if a % self.p == 0:
            raise DivisionByZero(f"inverse of 0 in GF({self.p})")
        return pow(a, self.p - 2, self.p)

    def is_zero(self, a):
        return a % self.p == 0

    def valuation(self, a) -> Value:
        return INF if self.is_zero(a) else Value(Fraction(0))

    def to_series(self, a, precision: Value) -> HahnSeries:
        return hahn_series(self.p, [(Fraction(0), a)])

    def render(self, a) -> str:
        return str(a % self.p)


def _padic_ord(n: int, p: int) -> int:
    k = 0
    while n % p == 0:
        n //= p
        k += 1
    return k


class PadicRationals(Field):
    kind = "rationals_padic"

    def __init__(self, p):
        self.p = p

    def zero(self):
        return Fraction(0)

    def one(self):
        return Fraction(1)

    def from_int(self, n):
        return Fraction(n)

    def add(self, a, b):
        return a + b

    def neg(self, a):
        return -a

    def mul(self, a, b):
        return a * b

    def inv(self, a):
        if a == 0:
            raise DivisionByZero("inverse of 0 in Q")
        return 1 / a

    def is_zero(self, a):
        return a == 0

    def valuation(self, a: Fraction) -> Value:
        if a == 0:
            return INF
        return Value(Fraction(_padic_ord(a.numerator, self.p) - _padic_ord(a.denominator, self.p)))

    def to_series(self, a, precision: Value) -> HahnSeries:
        raise PreconditionFailed("rational coefficients have no t-series expansion")

    def render(self, a) -> str:
        return str(a)


class RationalFunctions(Field):
    kind = "ratfunc_tadic"

    def __init__(self, p):
        self.p = p

    def make(self, num, den=(1,)) -> RatFunc:
        return _ratfunc(num, den, self.p)

    def zero(self):
        return RatFunc((), (1,))

    def one(self):
        return RatFunc((1,), (1,))

    def from_int(self, n):
        return _ratfunc((n,), (1,), self.p)

    def add(self, a, b):
        p = self.p
        return _ratfunc(
            _gadd(_gmul(a.num, b.den, p), _gmul(b.num, a.den, p), p),
            _gmul(a.den, b.den, p),
            p,
        )

    def neg(self, a):
        return RatFunc(_gneg(a.num, self.p), a.den)

    def mul(self, a, b):
        p = self.p
        return _ratfunc(_gmul(a.num, b.num, p), _gmul(a.den, b.den, p), p)

    def inv(self, a):
        if not a.num:
            raise DivisionByZero(f"inverse of 0 in GF({self.p})(t)")
        return _ratfunc(a.den, a.num, self.p)

    def is_zero(self, a):
        return not a.num

    def valuation(self, a: RatFunc) -> Value:
        if not a.num:
            return INF
        return Value(Fraction(_gord(a.num) - _gord(a.den)))

    def has_t(self) -> bool:
        return True

    def t_power(self, e: Fraction):
        e = Fraction(e)
        if e.denominator != 1:
            raise PreconditionFailed(
                f"GF({self.p})(t) admits only integer powers of t; got t^({e})"
            )
        k = e.numerator
        if k >= 0:
            return self.make((0,) * k + (1,))
        return self.make((1,), (0,) * (-k) + (1,))

    def to_series(self, a: RatFunc, precision: Value) -> HahnSeries:
        """t-adic expansion; exact for monomial denominators, otherwise a
        long division in ascending powers carried out below ``precision``."""
        p = self.p
        if not a.num:
            return hahn_zero(p)
        if sum(1 for c in a.den if c) == 1:
            k = _gord(a.den)
            ci = pow(a.den[k], p - 2, p)
            return hahn_series(
                p, [(Fraction(i - k), (c * ci) % p) for i, c in enumerate(a.num) if c]
            )
        if not precision.is_finite:
            raise InsufficientPrecision(
                "expanding a non-monomial denominator requires finite precision"
            )
        a_ord, d_ord = _gord(a.num), _gord(a.den)
        n0 = a.num[a_ord:]
        d0 = a.den[d_ord:]
        shift = a_ord - d_ord
        inv0 = pow(d0[0], p - 2, p)
        kmax = math.ceil(precision.frac - shift) - 1
        coeffs: list[int] = []
        for k in range(kmax + 1):
            acc = n0[k] if k < len(n0) else 0
            for j in range(1, min(k, len(d0) - 1) + 1):
                acc -= d0[j] * coeffs[k - j]
            coeffs.append((acc * inv0) % p)
        return hahn_series(
            p, [(Fraction(shift + k), c) for k, c in enumerate(coeffs) if c], precision
        )

    def render(self, a: RatFunc) -> str:
        if not a.num:
            return "0"
        num = _grender(a.num, self.p)
        if a.den == (1,):
            return num
        den = _grender(a.den, self.p)
        if "+" in num or "-" in num:
            num = f"({num})"
        if "+" in den or "-" in den:
            den = f"({den})"
        return f"{num}/{den}"


class HahnField(Field):
    kind = "hahn_series"

    def __init__(self, p):
        self.p = p

    def zero(self):
        return hahn_zero(self.p)

    def one(self):
        return hahn_monomial(self.p, 0, 1)

    def from_int(self, n):
        return hahn_series(self.p, [(Fraction(0), n)])

    def add(self, a, b):
        return hahn_add(a, b)

    def neg(self, a):
        return hahn_neg(a)

    def mul(self, a, b):
        return hahn_mul(a, b)

    def inv(self, a):
        return hahn_inv(a)

    def is_zero(self, a: HahnSeries):
        # A series with no terms and finite precision is not known to be zero.
        if not a.terms and a.precision.is_finite:
            raise InsufficientPrecision("series known only as 0 at finite precision")
        return not a.terms

    def valuation(self, a) -> Value:
        return hahn_valuation(a)

    def has_t(self) -> bool:
        return True

    def t_power(self, e: Fraction):
        return hahn_monomial(self.p, Fraction(e), 1)

    def to_series(self, a, precision: Value) -> HahnSeries:
        return a

    def render(self, a) -> str:
        return hahn_render(a)


@functools.lru_cache(maxsize=None)
def _field(kind: str, p: int) -> Field:
    if not _is_prime(p):
        raise PreconditionFailed(f"{p} is not prime")
    cls = {
        "prime_field": PrimeField,
        "rationals_padic": PadicRationals,
        "ratfunc_tadic": RationalFunctions,
        "hahn_series": HahnField,
    }[kind]
    return cls(p)


def prime_field(p: int) -> PrimeField:
    return _field("prime_field", p)


def padic_rationals(p: int) -> PadicRationals:
    return _field("rationals_padic", p)


def rational_functions(p: int) -> RationalFunctions:
    return _field("ratfunc_tadic", p)


def hahn_field(p: int) -> HahnField:
    return _field("hahn_series", p)
