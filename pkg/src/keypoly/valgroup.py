"""Exact arithmetic in the ordered value group Q ∪ {+inf}.

Also provides the eventual minimizer of a finite family of affine functions
gamma -> beta_i + t_i * gamma along a strictly increasing sequence of gammas,
the combinatorial engine behind every "for all large enough sigma" argument
in this package.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Iterable

from .errors import (
    DivisionByZero,
    NoEventualMinimizer,
    PreconditionFailed,
    UndefinedDifference,
    UndefinedProduct,
)


@dataclass(frozen=True, slots=True)
class Value:
    """A rational number or +inf; +inf is greater than every rational.

    Stored as an exact ``Fraction`` (``None`` encodes +inf).  Python integers
    are unbounded, so the arithmetic cannot overflow silently.
    """

    frac: Fraction | None

    @staticmethod
    def of(num: int, den: int = 1) -> "Value":
        return Value(Fraction(num, den))

    @property
    def is_finite(self) -> bool:
        return self.frac is not None

    def __add__(self, other: "Value") -> "Value":
        if self.frac is None or other.frac is None:
            return INF
        return Value(self.frac + other.frac)

    def __sub__(self, other: "Value") -> "Value":
        if other.frac is None:
            raise UndefinedDifference(f"{self} - inf is not in the value group")
        if self.frac is None:
            return INF
        return Value(self.frac - other.frac)

    def __neg__(self) -> "Value":
        if self.frac is None:
            raise UndefinedDifference("negation of inf is not in the value group")
        return Value(-self.frac)

    def scale(self, k: int) -> "Value":
        """k * self for an integer k; only positive multiples of inf exist."""
        if not isinstance(k, int):
            raise PreconditionFailed("scale expects an integer")
        if self.frac is None:
            if k > 0:
                return INF
            raise UndefinedProduct(f"{k} * inf is undefined")
        return Value(self.frac * k)

    def divided_by(self, k: int) -> "Value":
        """Exact rational division by a nonzero integer; inf / k = inf."""
        if k == 0:
            raise DivisionByZero("division of a value by zero")
        if self.frac is None:
            return INF
        return Value(self.frac / k)

    def _cmp_key(self):
        return (1,) if self.frac is None else (0, self.frac)

    def __lt__(self, other: "Value") -> bool:
        return self._cmp_key() < other._cmp_key()

    def __le__(self, other: "Value") -> bool:
        return self._cmp_key() <= other._cmp_key()

    def __gt__(self, other: "Value") -> bool:
        return self._cmp_key() > other._cmp_key()

    def __ge__(self, other: "Value") -> bool:
        return self._cmp_key() >= other._cmp_key()

    def __str__(self) -> str:
        return "inf" if self.frac is None else str(self.frac)

    def as_ratio(self) -> str:
        """Render as num/den (integers included), or "inf"."""
        if self.frac is None:
            return "inf"
        return f"{self.frac.numerator}/{self.frac.denominator}"

    @staticmethod
    def parse(text: str) -> "Value":
        text = text.strip()
        if text == "inf":
            return INF
        try:
            return Value(Fraction(text))
        except (ValueError, ZeroDivisionError) as exc:
            raise PreconditionFailed(f"not a value literal: {text!r}") from exc


INF = Value(None)
ZERO = Value(Fraction(0))


def vmin(values: Iterable[Value]) -> Value:
    """Minimum of an iterable of values; inf on an empty iterable."""
    best = INF
    for v in values:
        if v < best:
            best = v
    return best


@dataclass(frozen=True)
class ExplicitGammas:
    """A strictly increasing finite list of finite values, 1-based.

    Results computed against an explicit list are certified only up to its
    last entry.
    """

    values: tuple[Value, ...]

    def __post_init__(self):
        for v in self.values:
            if not v.is_finite:
                raise PreconditionFailed("gamma entries must be finite")
        for a, b in zip(self.values, self.values[1:]):
            if not a < b:
                raise PreconditionFailed("gamma list must be strictly increasing")


@dataclass(frozen=True)
class GammaGenerator:
    """A strictly increasing sequence given in closed form, 1-based.

    ``limit`` is the declared supremum of the sequence (every generated value
    must stay strictly below it); ``None`` means the sequence increases
    without bound.
    """

    func: Callable[[int], Value]
    limit: Value | None = None
    max_scan: int = 100_000

    def __post_init__(self):
        if self.limit is not None and not self.limit.is_finite:
            raise PreconditionFailed("a declared limit must be finite")


GammaSeq = ExplicitGammas | GammaGenerator


@dataclass(frozen=True)
class MinimizerInput:
    """Pairs (beta_i, t_i) with distinct positive integer slopes t_i, plus a
    gamma sequence descriptor."""

    betas: tuple[Value, ...]
    ts: tuple[int, ...]
    gammas: GammaSeq

    def __post_init__(self):
        if len(self.betas) != len(self.ts) or not self.betas:
            raise PreconditionFailed("betas and ts must be nonempty and aligned")
        for b in self.betas:
            if not b.is_finite:
                raise PreconditionFailed("beta entries must be finite")
        if any(t <= 0 for t in self.ts):
            raise PreconditionFailed("slopes must be positive integers")
        if len(set(self.ts)) != len(self.ts):
            raise PreconditionFailed("slopes must be pairwise distinct")


@dataclass(frozen=True)
class MinimizerResult:
    """Index b (1-based) whose affine function is strictly below all others at
    every available gamma_sigma with sigma > rho.

    ``fully_certified`` is False when the input was an explicit finite list,
    in which case the statement is certified only up to that horizon.
    """

    b: int
    rho: int
    fully_certified: bool


def _scores(betas, ts, gamma: Value) -> list[Value]:
    return [betas[i] + gamma.scale(ts[i]) for i in range(len(betas))]


def _strict_min_index(scores: list[Value]) -> int | None:
    """0-based index of the unique strict minimum, or None."""
    best = min(range(len(scores)), key=lambda i: scores[i]._cmp_key())
    for i, s in enumerate(scores):
        if i != best and not scores[best] < s:
            return None
    return best


def eventual_minimizer(inp: MinimizerInput) -> MinimizerResult:
    """Find (b, rho) with beta_i + t_i*gamma_sigma > beta_b + t_b*gamma_sigma
    for every i != b and every available sigma > rho.

    The reported rho is the smallest threshold >= 1 with that property.  For a
    closed-form sequence the certificate covers the whole sequence; for an
    explicit list, strict domination is additionally required at the last two
    entries, and the result is flagged as horizon-certified only.
    """
    betas, ts = inp.betas, inp.ts
    n = len(betas)
    if isinstance(inp.gammas, ExplicitGammas):
        gs = inp.gammas.values
        if n == 1:
            if not gs:
                raise NoEventualMinimizer("empty gamma list")
            return MinimizerResult(1, 1, fully_certified=False)
        if len(gs) < 2:
            raise NoEventualMinimizer("need at least two gamma entries")
        b_last = _strict_min_index(_scores(betas, ts, gs[-1]))
        b_prev = _strict_min_index(_scores(betas, ts, gs[-2]))
        if b_last is None or b_last != b_prev:
            raise NoEventualMinimizer(
                "no strict minimizer settled at the last two gamma entries"
            )
        failures = [
            sigma
            for sigma in range(1, len(gs) + 1)
            if _strict_min_index(_scores(betas, ts, gs[sigma - 1])) != b_last
        ]
        worst = max(failures, default=0)
        rho = max(worst, 1)
        return MinimizerResult(b_last + 1, rho, fully_certified=False)

    gen = inp.gammas
    if n == 1:
        return MinimizerResult(1, 1, fully_certified=True)
    if gen.limit is not None:
        c = gen.limit
        # At the limit, ties between distinct slopes break toward the larger
        # slope: that function is smaller just below the limit.
        key = lambda i: ((betas[i] + c.scale(ts[i]))._cmp_key(), -ts[i])
        b = min(range(n), key=key)
    else:
        b = min(range(n), key=lambda i: ts[i])
    crossings = [
        (betas[b].frac - betas[i].frac) / (ts[i] - ts[b])
        for i in range(n)
        if i != b and ts[i] > ts[b]
    ]
    if not crossings:
        return MinimizerResult(b + 1, 1, fully_certified=True)
    target = max(crossings)
    prev: Value | None = None
    for sigma in range(1, gen.max_scan + 1):
        g = gen.func(sigma)
        if not g.is_finite:
            raise PreconditionFailed("generated gammas must be finite")
        if prev is not None and not prev < g:
            raise PreconditionFailed("generated gammas must be strictly increasing")
        if gen.limit is not None and not g < gen.limit:
            raise PreconditionFailed("generated gamma reached its declared limit")
        if g.frac > target:
            return MinimizerResult(b + 1, max(sigma - 1, 1), fully_certified=True)
        prev = g
    raise NoEventualMinimizer(
        f"gamma sequence did not pass the last crossing within {gen.max_scan} steps"
    )
