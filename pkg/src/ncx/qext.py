"""Exact scalars in quadratic extensions Q(sqrt(n)).

A ``QE`` value is a + b*sqrt(n) with rational a, b and a fixed square-free
integer n >= 2.  Arithmetic and comparisons are exact; these scalars carry
the rotation entries (cos, sin) and the half-edge lengths that appear when
polygon edges are not axis-aligned.  Values whose irrational part vanishes
compare and hash like plain Fractions.
"""

from __future__ import annotations

import math
from fractions import Fraction

__all__ = ["QE", "sgn", "to_exact", "exact_sqrt", "sqrt_decompose", "sqrt_cmp", "num_float", "is_exact"]


def _squarefree_split(m: int):
    """m = s^2 * n with n square-free; returns (s, n)."""
    if m <= 0:
        raise ValueError("positive integer required")
    s = 1
    n = m
    d = 2
    while d * d <= n:
        while n % (d * d) == 0:
            n //= d * d
            s *= d
        d += 1
    return s, n


class QE:
    __slots__ = ("a", "b", "n")

    def __init__(self, a, b, n: int):
        a = Fraction(a)
        b = Fraction(b)
        n = int(n)
        if b != 0:
            s, nf = _squarefree_split(n)
            if nf <= 1:
                # sqrt(n) rational: collapse
                a = a + b * s
                b = Fraction(0)
                n = 0
            else:
                b = b * s
                n = nf
        if b == 0:
            n = 0
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "b", b)
        object.__setattr__(self, "n", n)

    def __setattr__(self, *args):
        raise AttributeError("QE is immutable")

    # -- helpers ----------------------------------------------------------
    @property
    def is_rational(self) -> bool:
        return self.b == 0

    def as_fraction(self) -> Fraction:
        if self.b != 0:
            raise ValueError("irrational value")
        return self.a

    def _coerce(self, other):
        if isinstance(other, QE):
            if self.b != 0 and other.b != 0 and self.n != other.n:
                raise TypeError(f"incompatible roots sqrt({self.n}) and sqrt({other.n})")
            return other
        if isinstance(other, (int, Fraction)):
            return QE(other, 0, 2)
        return NotImplemented

    def _root(self, other) -> int:
        return self.n or (other.n if isinstance(other, QE) else 0) or 2

    # -- arithmetic --------------------------------------------------------
    def __add__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return QE(self.a + o.a, self.b + o.b, self._root(o))

    __radd__ = __add__

    def __neg__(self):
        return QE(-self.a, -self.b, self.n or 2)

    def __sub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return o + (-self)

    def __mul__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        n = self._root(o)
        return QE(self.a * o.a + self.b * o.b * n, self.a * o.b + self.b * o.a, n)

    __rmul__ = __mul__

    def _inverse(self):
        n = self.n or 2
        den = self.a * self.a - self.b * self.b * n
        if den == 0:
            raise ZeroDivisionError("division by zero in Q(sqrt(n))")
        return QE(self.a / den, -self.b / den, n)

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return self * o._inverse()

    def __rtruediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return o * self._inverse()

    def __abs__(self):
        return -self if self < 0 else self

    # -- order -------------------------------------------------------------
    def _sign(self) -> int:
        a, b, n = self.a, self.b, self.n
        if b == 0:
            return (a > 0) - (a < 0)
        if a == 0:
            return 1 if b > 0 else -1
        if a > 0 and b > 0:
            return 1
        if a < 0 and b < 0:
            return -1
        d = a * a - b * b * n
        s = (d > 0) - (d < 0)
        return s if a > 0 else -s

    def _cmp(self, other) -> int:
        o = self._coerce(other)
        if o is NotImplemented:
            raise TypeError(f"cannot compare QE with {type(other).__name__}")
        return (self - o)._sign()

    def __eq__(self, other):
        if isinstance(other, float):
            return float(self) == other
        try:
            return self._cmp(other) == 0
        except TypeError:
            return NotImplemented

    def __lt__(self, other):
        return self._cmp(other) < 0

    def __le__(self, other):
        return self._cmp(other) <= 0

    def __gt__(self, other):
        return self._cmp(other) > 0

    def __ge__(self, other):
        return self._cmp(other) >= 0

    def __hash__(self):
        if self.b == 0:
            return hash(self.a)
        return hash((self.a, self.b, self.n))

    def __float__(self):
        return float(self.a) + float(self.b) * math.sqrt(self.n)

    def __repr__(self):
        if self.b == 0:
            return f"QE({self.a})"
        return f"QE({self.a} + {self.b}*sqrt({self.n}))"


# ---------------------------------------------------------------------------
# scalar utilities shared by the function catalog


def is_exact(x) -> bool:
    return isinstance(x, (int, Fraction, QE))


def to_exact(x):
    """Exact scalar from int/Fraction/QE/str; floats convert exactly (every
    float is a dyadic rational)."""
    if isinstance(x, (Fraction, QE)):
        return x
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        return Fraction(x)
    if isinstance(x, float):
        if math.isinf(x) or math.isnan(x):
            raise ValueError("cannot exactify non-finite float")
        return Fraction(x)
    raise TypeError(f"unsupported scalar {type(x).__name__}")


def num_float(x) -> float:
    if isinstance(x, float):
        return x
    return float(x)


def sgn(x) -> int:
    """Exact sign of a Fraction/int/QE scalar."""
    if isinstance(x, QE):
        return x._sign()
    return (x > 0) - (x < 0)


def exact_sqrt(q):
    """sqrt(q) as a Fraction when q is a perfect rational square, else None.
    Accepts Fractions and rational QE values; irrational QE gives None."""
    if isinstance(q, QE):
        if not q.is_rational:
            return None
        q = q.as_fraction()
    q = Fraction(q)
    if q < 0:
        raise ValueError("negative operand")
    pn = math.isqrt(q.numerator)
    pd = math.isqrt(q.denominator)
    if pn * pn == q.numerator and pd * pd == q.denominator:
        return Fraction(pn, pd)
    return None


def sqrt_decompose(q: Fraction):
    """sqrt(q) = coef * sqrt(root) with rational coef > 0 and square-free
    integer root (root = 1 means the square root is rational)."""
    q = Fraction(q)
    if q <= 0:
        raise ValueError("positive operand required")
    m = q.numerator * q.denominator
    s, n = _squarefree_split(m)
    return Fraction(s, q.denominator), n


def qe_sqrt(q: Fraction):
    """Exact sqrt of a positive rational as a QE (or Fraction if rational)."""
    coef, root = sqrt_decompose(q)
    if root == 1:
        return coef
    return QE(0, coef, root)


def sqrt_cmp(c, s) -> int:
    """Exact sign of c - sqrt(s) for exact scalars with s >= 0."""
    ssgn = sgn(s)
    if ssgn < 0:
        raise ValueError("sqrt of negative value")
    if ssgn == 0:
        return sgn(c)
    if sgn(c) <= 0:
        return -1
    return sgn(c * c - s)
