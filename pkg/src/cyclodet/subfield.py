"""Gauss sums and subfield coordinates inside Q(zeta_p).

The quadratic Gauss sum g = sum((t/p) * zeta^t) satisfies g^2 = p for
p = 1 (mod 4) and g^2 = -p for p = 3 (mod 4), so g is an exact square root
living inside Z[zeta_p].  Galois-stable elements decompose as x + y*g with
rational x, y (`quad_decompose`); for p = 1 (mod 4) certain determinants
further decompose through the quartic subfield as (alpha + beta*sqrt(p))
times a square root of (2/p)*2p + 2a*sqrt(p), where p = a^2 + b^2 with a
odd (`quartic_decompose`).
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from .cycring import CycElt, eval_complex
from .modarith import (
    is_square,
    least_nonresidue,
    legendre,
    primitive_root,
    require_odd_prime,
)


@lru_cache(maxsize=None)
def gauss_sum(p: int) -> CycElt:
    """The quadratic Gauss sum sum_{t=1}^{p-1} (t/p) zeta^t as an exact element."""
    require_odd_prime(p)
    raw = [0] * p
    for t in range(1, p):
        raw[t] = legendre(t, p)
    return CycElt._from_raw_exact(p, raw)


@lru_cache(maxsize=None)
def fourth_power_sum(p: int) -> CycElt:
    """sum_{t=0}^{p-1} zeta^(t^4); generates the quartic subfield for p = 1 mod 4."""
    require_odd_prime(p)
    raw = [0] * p
    for t in range(p):
        raw[pow(t, 4, p)] += 1
    return CycElt._from_raw_exact(p, raw)


def gauss_square_sign(p: int) -> int:
    """Sign s with g^2 = s*p, i.e. +1 for p = 1 (mod 4), -1 for p = 3 (mod 4)."""
    return 1 if p % 4 == 1 else -1


class QuadElt:
    """x + y*g with rational x, y, where g^2 = (+/-)p per the residue class of p."""

    __slots__ = ("p", "x", "y")

    def __init__(self, p: int, x, y) -> None:
        require_odd_prime(p)
        self.p = p
        self.x = Fraction(x)
        self.y = Fraction(y)

    @property
    def gsq(self) -> int:
        return gauss_square_sign(self.p) * self.p

    def _coerce(self, other):
        if isinstance(other, QuadElt):
            if other.p != self.p:
                raise ValueError("mismatched quadratic fields")
            return other
        if isinstance(other, (int, Fraction)):
            return QuadElt(self.p, other, 0)
        return None

    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return QuadElt(self.p, self.x + o.x, self.y + o.y)

    __radd__ = __add__

    def __neg__(self):
        return QuadElt(self.p, -self.x, -self.y)

    def __sub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return QuadElt(self.p, self.x - o.x, self.y - o.y)

    def __mul__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return QuadElt(
            self.p,
            self.x * o.x + self.y * o.y * self.gsq,
            self.x * o.y + self.y * o.x,
        )

    __rmul__ = __mul__

    def conj(self) -> QuadElt:
        return QuadElt(self.p, self.x, -self.y)

    def norm(self) -> Fraction:
        return self.x * self.x - self.gsq * self.y * self.y

    def inverse(self) -> QuadElt:
        n = self.norm()
        if n == 0:
            raise ZeroDivisionError("element has norm zero")
        return QuadElt(self.p, self.x / n, -self.y / n)

    def __pow__(self, n: int) -> QuadElt:
        if not isinstance(n, int):
            raise TypeError("integer power required")
        base = self if n >= 0 else self.inverse()
        n = abs(n)
        acc = QuadElt(self.p, 1, 0)
        while n:
            if n & 1:
                acc = acc * base
            base = base * base if n > 1 else base
            n >>= 1
        return acc

    def is_zero(self) -> bool:
        return self.x == 0 and self.y == 0

    def embed(self) -> CycElt:
        """The corresponding cyclotomic element x + y*gauss_sum(p)."""
        return CycElt.rational(self.p, self.x) + self.y * gauss_sum(self.p)

    def __eq__(self, other):
        o = self._coerce(other) if isinstance(other, (QuadElt, int, Fraction)) else None
        if o is None:
            return NotImplemented
        return self.x == o.x and self.y == o.y

    def __hash__(self):
        return hash((self.p, self.x, self.y))

    def __reduce__(self):
        return (QuadElt, (self.p, self.x, self.y))

    def __str__(self):
        return f"{self.x} + {self.y}*g"

    def __repr__(self):
        return f"QuadElt(p={self.p}, {self})"


def quad_decompose(x: CycElt, nonresidue: int | None = None) -> QuadElt:
    """Write a Galois-stable element as u + v*g with rational u, v.

    Requires x to be fixed by every even automorphism zeta -> zeta^(a^2);
    this is checked up front with a primitive root and the result is verified
    by reconstruction.
    """
    p = x.p
    n0 = primitive_root(p)
    if x.galois(n0 * n0 % p) != x:
        raise ValueError("element is not stable under the even Galois subgroup")
    n = nonresidue if nonresidue is not None else least_nonresidue(p)
    if legendre(n, p) != -1:
        raise ValueError(f"{n} is not a quadratic non-residue mod {p}")
    reflected = x.galois(n)
    even_part = (x + reflected) * Fraction(1, 2)
    odd_part = (x - reflected) * gauss_sum(p)
    if not (even_part.is_rational and odd_part.is_rational):
        raise ValueError("element does not lie in the quadratic subfield")
    gsq = gauss_square_sign(p) * p
    u = Fraction(even_part.coeffs[0])
    v = Fraction(odd_part.coeffs[0]) / (2 * gsq)
    result = QuadElt(p, u, v)
    if result.embed() != x:
        raise ArithmeticError("quadratic decomposition failed to reconstruct input")
    return result


@dataclass(frozen=True)
class TwoSquares:
    p: int
    a: int  # odd, positive
    b: int  # even, positive


def two_squares(p: int) -> TwoSquares:
    """The split p = a^2 + b^2 with a odd and b even, both positive."""
    require_odd_prime(p)
    if p % 4 != 1:
        raise ValueError(f"p={p} is not 1 mod 4")
    for a in range(1, math.isqrt(p) + 1, 2):
        rest = p - a * a
        if is_square(rest):
            return TwoSquares(p, a, math.isqrt(rest))
    raise ArithmeticError(f"no two-square split found for {p}")  # unreachable


def _rational_sqrt(v: Fraction) -> Fraction | None:
    if v < 0:
        return None
    if is_square(v.numerator) and is_square(v.denominator):
        return Fraction(math.isqrt(v.numerator), math.isqrt(v.denominator))
    return None


def sqrt_in_quad(c, d, p: int):
    """Solve (alpha + beta*sqrt(p))^2 = c + d*sqrt(p) over the rationals.

    Returns (alpha, beta) normalized to alpha > 0 (or beta > 0 when
    alpha = 0), or None when no rational solution exists.
    """
    c = Fraction(c)
    d = Fraction(d)
    if d == 0:
        if c == 0:
            return (Fraction(0), Fraction(0))
        root = _rational_sqrt(c)
        if root is not None:
            return (root, Fraction(0))
        root = _rational_sqrt(c / p)
        if root is not None:
            return (Fraction(0), root)
        return None
    # alpha^2 solves t^2 - c*t + p*d^2/4 = 0 and must be a rational square
    disc = _rational_sqrt(c * c - p * d * d)
    if disc is None:
        return None
    for t in ((c + disc) / 2, (c - disc) / 2):
        if t <= 0:
            continue
        alpha = _rational_sqrt(t)
        if alpha is None:
            continue
        beta = d / (2 * alpha)
        return (alpha, beta)
    return None


@dataclass(frozen=True)
class QuarticDecomp:
    """d = (alpha + beta*sqrt(p)) * delta with delta^2 = (2/p)*2p + 2*delta_sign*a*sqrt(p)."""

    p: int
    alpha: Fraction
    beta: Fraction
    a: int
    delta_sign: int
    resolved_numerically: bool

    def delta_squared(self) -> QuadElt:
        chi2 = legendre(2, self.p)
        return QuadElt(self.p, 2 * self.p * chi2, 2 * self.delta_sign * self.a)

    def quad_part(self) -> QuadElt:
        return QuadElt(self.p, self.alpha, self.beta)


def quartic_decompose(d: CycElt, p: int, check_numeric: bool = True) -> QuarticDecomp:
    """Decompose an element of the quartic subfield as (alpha + beta*sqrt(p))*delta.

    Both delta branches (signs of the odd part of delta^2) can admit rational
    solutions; the branch whose solution has alpha*beta = 0 is preferred,
    falling back to the +1 branch.  Raises when neither branch works, which
    flags either an arithmetic bug or an input outside the quartic subfield.
    """
    require_odd_prime(p)
    if p % 4 != 1:
        raise ValueError(f"p={p} is not 1 mod 4")
    if d.p != p:
        raise ValueError("element does not belong to Q(zeta_p)")
    square = quad_decompose(d * d)
    ts = two_squares(p)
    chi2 = legendre(2, p)
    solutions = []
    for s in (1, -1):
        denom = QuadElt(p, 2 * p * chi2, 2 * s * ts.a)
        ratio = square * denom.inverse()
        pair = sqrt_in_quad(ratio.x, ratio.y, p)
        if pair is not None:
            solutions.append((s, pair))
    if not solutions:
        raise ArithmeticError(
            "no delta branch admits a rational square root; "
            "input is not a pure quartic element"
        )
    chosen = next(
        (sol for sol in solutions if sol[1][0] * sol[1][1] == 0), solutions[0]
    )
    s, (alpha, beta) = chosen

    resolved = False
    if check_numeric:
        digits = max(
            (abs(c.numerator if isinstance(c, Fraction) else c) for c in d.coeffs),
            default=1,
        )
        prec = max(30, len(str(digits)) + 25)
        approx = eval_complex(d, prec).value
        sqp = math.sqrt(p)
        delta = complex(2 * p * chi2 + 2 * s * ts.a * sqp) ** 0.5
        yval = float(alpha) + float(beta) * sqp
        tol = 1e-6 * (1 + abs(approx))
        resolved = min(abs(approx - yval * delta), abs(approx + yval * delta)) < tol

    return QuarticDecomp(p, alpha, beta, ts.a, s, resolved)


def quartic_gauss_check(p: int) -> int:
    """Verify (g4 - g)^2 = (2/p)*2p + 2*a'*sqrt(p) for a' = (+/-)a; return the sign.

    g4 is the fourth-power exponential sum and g the quadratic Gauss sum.
    Pins which square-root branch the quartic generator sits on.
    """
    require_odd_prime(p)
    if p % 4 != 1:
        raise ValueError(f"p={p} is not 1 mod 4")
    diff = fourth_power_sum(p) - gauss_sum(p)
    square = quad_decompose(diff * diff)
    ts = two_squares(p)
    chi2 = legendre(2, p)
    for s in (1, -1):
        if square == QuadElt(p, 2 * p * chi2, 2 * s * ts.a):
            return s
    raise ArithmeticError(
        f"(g4 - g)^2 = {square} matches neither branch for p={p}; arithmetic bug"
    )


def padic_val(x, p: int):
    """p-adic valuation of a rational; +infinity for zero."""
    if isinstance(x, int):
        x = Fraction(x)
    if not isinstance(x, Fraction):
        raise TypeError("exact rational required")
    if x == 0:
        return math.inf
    def count(n: int) -> int:
        k = 0
        while n % p == 0:
            n //= p
            k += 1
        return k
    return count(abs(x.numerator)) - count(x.denominator)
