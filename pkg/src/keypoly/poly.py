"""Exact univariate polynomials over a coefficient field, divided-power
(Hasse) derivatives, and polynomials in an auxiliary variable X whose
coefficients are bounded-degree polynomials."""

from __future__ import annotations

from dataclasses import dataclass
from math import comb

from .basefield import Field
from .errors import DegreeBound, DivisionByZero, FieldMismatch, PreconditionFailed


@dataclass(frozen=True)
class Poly:
    """Dense coefficient list, ascending powers of x, trailing coefficient
    nonzero.  The zero polynomial has an empty list and no degree."""

    field: Field
    coeffs: tuple

    def degree(self) -> int | None:
        return len(self.coeffs) - 1 if self.coeffs else None

    def is_zero(self) -> bool:
        return not self.coeffs

    def leading(self):
        if not self.coeffs:
            raise PreconditionFailed("zero polynomial has no leading coefficient")
        return self.coeffs[-1]

    def is_monic(self) -> bool:
        return bool(self.coeffs) and self.field.is_one(self.coeffs[-1])

    def coeff(self, k: int):
        return self.coeffs[k] if 0 <= k < len(self.coeffs) else self.field.zero()

    def constant(self):
        return self.coeff(0)

    def __add__(self, other: "Poly") -> "Poly":
        _same_field(self, other)
        f = self.field
        n = max(len(self.coeffs), len(other.coeffs))
        return poly(f, [f.add(self.coeff(k), other.coeff(k)) for k in range(n)])

    def __sub__(self, other: "Poly") -> "Poly":
        _same_field(self, other)
        f = self.field
        n = max(len(self.coeffs), len(other.coeffs))
        return poly(f, [f.sub(self.coeff(k), other.coeff(k)) for k in range(n)])

    def __neg__(self) -> "Poly":
        return poly(self.field, [self.field.neg(c) for c in self.coeffs])

    def __mul__(self, other: "Poly") -> "Poly":
        _same_field(self, other)
        f = self.field
        if self.is_zero() or other.is_zero():
            return zero(f)
        out = [f.zero()] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if f.is_zero(a):
                continue
            for j, b in enumerate(other.coeffs):
                out[i + j] = f.add(out[i + j], f.mul(a, b))
        return poly(f, out)

    def __pow__(self, n: int) -> "Poly":
        if n < 0:
            raise PreconditionFailed("negative polynomial power")
        out = one(self.field)
        base = self
        while n:
            if n & 1:
                out = out * base
            n >>= 1
            if n:
                base = base * base
        return out

    def scaled(self, c) -> "Poly":
        f = self.field
        return poly(f, [f.mul(c, a) for a in self.coeffs])

    def render(self, compact: bool = False) -> str:
        return render_poly(self, compact=compact)

    def __str__(self) -> str:
        return self.render()


def _same_field(a: Poly, b: Poly):
    if a.field is not b.field:
        raise FieldMismatch(f"operands over {a.field!r} and {b.field!r}")


def poly(field: Field, coeffs) -> Poly:
    cs = list(coeffs)
    while cs and field.is_zero(cs[-1]):
        cs.pop()
    return Poly(field, tuple(cs))


def zero(field: Field) -> Poly:
    return Poly(field, ())


def one(field: Field) -> Poly:
    return poly(field, [field.one()])


def constant(field: Field, c) -> Poly:
    return poly(field, [c])


def x_poly(field: Field) -> Poly:
    return poly(field, [field.zero(), field.one()])


def monomial(field: Field, k: int, c=None) -> Poly:
    c = field.one() if c is None else c
    return poly(field, [field.zero()] * k + [c])


def poly_divmod(f: Poly, g: Poly) -> tuple[Poly, Poly]:
    """Division with remainder: f = q*g + r with deg r < deg g, exact."""
    _same_field(f, g)
    if g.is_zero():
        raise DivisionByZero("polynomial division by zero")
    fld = f.field
    dg = g.degree()
    r = list(f.coeffs)
    if len(r) < len(g.coeffs):
        return zero(fld), f
    inv_lead = None if g.is_monic() else fld.inv(g.leading())
    q = [fld.zero()] * (len(r) - dg)
    while len(r) >= len(g.coeffs):
        lead = r[-1]
        if fld.is_zero(lead):
            r.pop()
            continue
        c = lead if inv_lead is None else fld.mul(lead, inv_lead)
        shift = len(r) - 1 - dg
        q[shift] = c
        for j, cg in enumerate(g.coeffs):
            r[shift + j] = fld.sub(r[shift + j], fld.mul(c, cg))
        r.pop()
    return poly(fld, q), poly(fld, r)


def hasse_derivative(f: Poly, b: int) -> Poly:
    """Divided-power derivative: sum of C(k, b)*c_k*x^(k-b).  Binomials are
    computed over the integers and then reduced into the field."""
    if b < 0:
        raise PreconditionFailed("derivative order must be nonnegative")
    if b == 0 or f.is_zero():
        return f
    fld = f.field
    out = []
    for k in range(b, len(f.coeffs)):
        out.append(fld.mul(f.coeffs[k], fld.from_int(comb(k, b))))
    return poly(fld, out)


# ---------------------------------------------------------------------------
# Polynomials in X with coefficients of bounded x-degree.


@dataclass(frozen=True)
class XPoly:
    """Coefficients are Poly of degree < bound; ascending powers of X with
    trailing coefficient nonzero.  Construction enforces the bound; nothing
    here renormalizes silently."""

    field: Field
    bound: int
    coeffs: tuple[Poly, ...]

    def deg_x(self) -> int | None:
        return len(self.coeffs) - 1 if self.coeffs else None

    def coeff(self, i: int) -> Poly:
        return self.coeffs[i] if 0 <= i < len(self.coeffs) else zero(self.field)

    def is_zero(self) -> bool:
        return not self.coeffs


def xpoly(field: Field, bound: int, coeffs) -> XPoly:
    if bound < 1:
        raise PreconditionFailed("coefficient degree bound must be positive")
    cs = list(coeffs)
    for c in cs:
        if c.field is not field:
            raise FieldMismatch("coefficient over a different field")
        if not c.is_zero() and c.degree() >= bound:
            raise DegreeBound(
                f"coefficient of degree {c.degree()} breaks the bound {bound}"
            )
    while cs and cs[-1].is_zero():
        cs.pop()
    return XPoly(field, bound, tuple(cs))


def hasse_derivative_x(l: XPoly, b: int) -> XPoly:
    """Divided-power derivative with respect to X."""
    if b < 0:
        raise PreconditionFailed("derivative order must be nonnegative")
    if b == 0 or l.is_zero():
        return l
    fld = l.field
    out = []
    for k in range(b, len(l.coeffs)):
        out.append(l.coeffs[k].scaled(fld.from_int(comb(k, b))))
    return xpoly(fld, l.bound, out)


def compose(l: XPoly, g: Poly) -> Poly:
    """Evaluate l at X = g by Horner; the result is a plain polynomial."""
    if l.field is not g.field:
        raise FieldMismatch("evaluation point over a different field")
    acc = zero(l.field)
    for c in reversed(l.coeffs):
        acc = acc * g + c
    return acc


def taylor_coefficients(l: XPoly, a: Poly) -> tuple[Poly, ...]:
    """The list (d_i l)(a) for i = 0..deg_X(l), where d_i is the order-i
    divided-power derivative; reconstructs l(b) as sum_i (d_i l)(a)*(b-a)^i.
    Requires deg(a) < bound."""
    if not a.is_zero() and a.degree() >= l.bound:
        raise DegreeBound(f"evaluation point of degree {a.degree()} >= bound {l.bound}")
    top = l.deg_x()
    if top is None:
        return (zero(l.field),)
    return tuple(compose(hasse_derivative_x(l, i), a) for i in range(top + 1))


# ---------------------------------------------------------------------------
# Rendering: descending powers, coefficients in canonical form.


def _atomic(text: str) -> bool:
    """True when the rendered coefficient needs no parentheses as a factor."""
    depth = 0
    for i, ch in enumerate(text):
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
        elif ch in "+-" and depth == 0 and i > 0:
            return False
    return True


def render_poly(f: Poly, compact: bool = False) -> str:
    if f.is_zero():
        return "0"
    fld = f.field
    sep_plus, sep_minus = ("+", "-") if compact else (" + ", " - ")
    parts: list[str] = []
    for k in range(len(f.coeffs) - 1, -1, -1):
        c = f.coeffs[k]
        if fld.is_zero(c):
            continue
        text = fld.render(c)
        negative = text.startswith("-")
        if negative:
            text = text[1:]
        if k == 0:
            term = text
        else:
            xp = "x" if k == 1 else f"x^{k}"
            if text == "1":
                term = xp
            else:
                if not _atomic(text):
                    text = f"({text})"
                term = f"{text}*{xp}"
        if not parts:
            parts.append(("-" if negative else "") + term)
        else:
            parts.append((sep_minus if negative else sep_plus) + term)
    return "".join(parts)
