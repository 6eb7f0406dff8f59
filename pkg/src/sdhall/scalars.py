"""Exact coefficient domains.

* ``LaurentPoly``: Laurent polynomials in ``v`` over Q.
* ``RationalFunction``: reduced quotients of Laurent polynomials (the field Q(v)).
* ``QuadExt``: elements ``a + b*sqrt(q)`` of Q(sqrt q) for a prime q.

Everything is immutable and built on :class:`fractions.Fraction`.
"""
from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Mapping, Union

Number = Union[int, Fraction]


class PoleError(ZeroDivisionError):
    """A rational function was evaluated at a root of its denominator."""


# -- dense polynomial helpers (lists of Fractions, index = degree) -----------

def _trim(c: list[Fraction]) -> list[Fraction]:
    while c and c[-1] == 0:
        c.pop()
    return c


def _poly_divmod(a: list[Fraction], b: list[Fraction]) -> tuple[list[Fraction], list[Fraction]]:
    a = list(a)
    if not b:
        raise ZeroDivisionError("polynomial division by zero")
    out = [Fraction(0)] * max(len(a) - len(b) + 1, 0)
    lead = b[-1]
    while len(a) >= len(b) and a:
        shift = len(a) - len(b)
        f = a[-1] / lead
        out[shift] = f
        for i, x in enumerate(b):
            a[i + shift] -= f * x
        _trim(a)
    return _trim(out), a


def _poly_gcd(a: list[Fraction], b: list[Fraction]) -> list[Fraction]:
    a, b = _trim(list(a)), _trim(list(b))
    while b:
        _, r = _poly_divmod(a, b)
        a, b = b, r
    if not a:
        return a
    lead = a[-1]
    return [x / lead for x in a]


class LaurentPoly:
    """Finite sum ``sum c_e v^e`` with exact rational coefficients."""

    __slots__ = ("_c", "_hash")

    def __init__(self, coeffs: Mapping[int, Number] | None = None):
        c = {}
        for e, x in (coeffs or {}).items():
            x = Fraction(x)
            if x:
                c[int(e)] = x
        self._c = c
        self._hash = None

    @classmethod
    def monomial(cls, exp: int, coeff: Number = 1) -> "LaurentPoly":
        return cls({exp: coeff})

    @classmethod
    def const(cls, c: Number) -> "LaurentPoly":
        return cls({0: c})

    @property
    def coeffs(self) -> dict[int, Fraction]:
        return dict(self._c)

    def is_zero(self) -> bool:
        return not self._c

    def min_exp(self) -> int:
        return min(self._c) if self._c else 0

    def max_exp(self) -> int:
        return max(self._c) if self._c else 0

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = LaurentPoly.const(other)
        if isinstance(other, LaurentPoly):
            return self._c == other._c
        return NotImplemented

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(frozenset(self._c.items()))
        return self._hash

    def __add__(self, other):
        other = _as_laurent(other)
        if other is None:
            return NotImplemented
        c = dict(self._c)
        for e, x in other._c.items():
            c[e] = c.get(e, 0) + x
        return LaurentPoly(c)

    __radd__ = __add__

    def __neg__(self):
        return LaurentPoly({e: -x for e, x in self._c.items()})

    def __sub__(self, other):
        other = _as_laurent(other)
        if other is None:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = _as_laurent(other)
        if other is None:
            return NotImplemented
        c: dict[int, Fraction] = {}
        for e1, x1 in self._c.items():
            for e2, x2 in other._c.items():
                c[e1 + e2] = c.get(e1 + e2, 0) + x1 * x2
        return LaurentPoly(c)

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if n < 0:
            raise ValueError("negative power of a Laurent polynomial")
        out = LaurentPoly.const(1)
        for _ in range(n):
            out = out * self
        return out

    def substitute_power(self, k: int) -> "LaurentPoly":
        """v -> v^k."""
        return LaurentPoly({e * k: x for e, x in self._c.items()})

    def bar(self) -> "LaurentPoly":
        """v -> v^{-1}."""
        return self.substitute_power(-1)

    def dense(self) -> tuple[int, list[Fraction]]:
        """(shift, coefficients) with self = v^shift * sum c_i v^i, c_0 != 0."""
        if not self._c:
            return 0, []
        lo, hi = self.min_exp(), self.max_exp()
        return lo, [self._c.get(e, Fraction(0)) for e in range(lo, hi + 1)]

    @classmethod
    def from_dense(cls, shift: int, c: Iterable[Number]) -> "LaurentPoly":
        return cls({shift + i: x for i, x in enumerate(c)})

    def exact_div(self, other: "LaurentPoly") -> "LaurentPoly":
        """Divide, raising ArithmeticError unless the quotient is a Laurent polynomial."""
        if other.is_zero():
            raise ZeroDivisionError("division by zero Laurent polynomial")
        s1, a = self.dense()
        s2, b = other.dense()
        quo, rem = _poly_divmod(a, b)
        if rem:
            raise ArithmeticError("inexact Laurent division")
        return LaurentPoly.from_dense(s1 - s2, quo)

    def evaluate(self, x):
        """Evaluate at ``x`` (anything supporting +, * and ** with ints)."""
        total = None
        for e, c in sorted(self._c.items()):
            term = (x ** e) * c if e >= 0 else (1 / x) ** (-e) * c
            total = term if total is None else total + term
        return total if total is not None else 0

    def __repr__(self):
        return "LaurentPoly(%s)" % self

    def __str__(self):
        if not self._c:
            return "0"
        parts = []
        for e in sorted(self._c, reverse=True):
            c = self._c[e]
            if e == 0:
                parts.append(str(c))
            else:
                mono = "v" if e == 1 else "v^%d" % e
                parts.append(mono if c == 1 else ("-" + mono if c == -1 else "%s*%s" % (c, mono)))
        return " + ".join(parts).replace("+ -", "- ")


def _as_laurent(x) -> LaurentPoly | None:
    if isinstance(x, LaurentPoly):
        return x
    if isinstance(x, (int, Fraction)):
        return LaurentPoly.const(x)
    return None


V = LaurentPoly.monomial(1)


class RationalFunction:
    """Reduced quotient num/den of Laurent polynomials in v.

    Normal form: the denominator is an ordinary polynomial with nonzero
    constant term and leading coefficient 1; gcd(num, den) = 1 after the
    numerator is shifted to lowest exponent 0.
    """

    __slots__ = ("num", "den", "_hash")

    def __init__(self, num, den=None):
        num = _as_laurent(num) if not isinstance(num, LaurentPoly) else num
        if num is None:
            raise TypeError("numerator must be a Laurent polynomial or rational")
        if den is None:
            den = LaurentPoly.const(1)
        den = _as_laurent(den) if not isinstance(den, LaurentPoly) else den
        if den.is_zero():
            raise ZeroDivisionError("zero denominator")
        self.num, self.den = _normalize(num, den)
        self._hash = None

    @classmethod
    def const(cls, c: Number) -> "RationalFunction":
        return cls(LaurentPoly.const(c))

    @classmethod
    def v_power(cls, n: int) -> "RationalFunction":
        return cls(LaurentPoly.monomial(n))

    def is_zero(self) -> bool:
        return self.num.is_zero()

    def __eq__(self, other):
        other = _as_ratfun(other)
        if other is None:
            return NotImplemented
        return self.num == other.num and self.den == other.den

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.num, self.den))
        return self._hash

    def __add__(self, other):
        other = _as_ratfun(other)
        if other is None:
            return NotImplemented
        if self.den == other.den:
            return RationalFunction(self.num + other.num, self.den)
        return RationalFunction(self.num * other.den + other.num * self.den, self.den * other.den)

    __radd__ = __add__

    def __neg__(self):
        return RationalFunction(-self.num, self.den)

    def __sub__(self, other):
        other = _as_ratfun(other)
        if other is None:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = _as_ratfun(other)
        if other is None:
            return NotImplemented
        return RationalFunction(self.num * other.num, self.den * other.den)

    __rmul__ = __mul__

    def inverse(self) -> "RationalFunction":
        if self.is_zero():
            raise ZeroDivisionError("inverse of zero rational function")
        return RationalFunction(self.den, self.num)

    def __truediv__(self, other):
        other = _as_ratfun(other)
        if other is None:
            return NotImplemented
        return self * other.inverse()

    def __rtruediv__(self, other):
        return _as_ratfun(other) * self.inverse()

    def __pow__(self, n: int):
        if n < 0:
            return self.inverse() ** (-n)
        return RationalFunction(self.num ** n, self.den ** n)

    def substitute_power(self, k: int) -> "RationalFunction":
        return RationalFunction(self.num.substitute_power(k), self.den.substitute_power(k))

    def evaluate(self, x):
        return self.num.evaluate(x) / self.den.evaluate(x)

    def __repr__(self):
        return "RationalFunction(%s)" % self

    def __str__(self):
        if self.den == LaurentPoly.const(1):
            return str(self.num)
        return "(%s)/(%s)" % (self.num, self.den)


def _as_ratfun(x) -> RationalFunction | None:
    if isinstance(x, RationalFunction):
        return x
    if isinstance(x, (int, Fraction, LaurentPoly)):
        return RationalFunction(x)
    return None


def _normalize(num: LaurentPoly, den: LaurentPoly) -> tuple[LaurentPoly, LaurentPoly]:
    if num.is_zero():
        return num, LaurentPoly.const(1)
    sd, d = den.dense()
    sn, n = num.dense()
    g = _poly_gcd(n, d)
    if len(g) > 1:
        n, rn = _poly_divmod(n, g)
        d, rd = _poly_divmod(d, g)
        assert not rn and not rd
    lead = d[-1]
    n = [x / lead for x in n]
    d = [x / lead for x in d]
    return LaurentPoly.from_dense(sn - sd, n), LaurentPoly.from_dense(0, d)


# -- Q(sqrt q) ----------------------------------------------------------------

class QuadExt:
    """``a + b*sqrt(q)`` with rational a, b and q a prime."""

    __slots__ = ("q", "a", "b")

    def __init__(self, q: int, a: Number = 0, b: Number = 0):
        self.q = q
        self.a = Fraction(a)
        self.b = Fraction(b)

    @classmethod
    def sqrt_power(cls, q: int, n: int) -> "QuadExt":
        """(sqrt q)^n for any integer n."""
        if n % 2 == 0:
            return cls(q, Fraction(q) ** (n // 2))
        return cls(q, 0, Fraction(q) ** ((n - 1) // 2))

    def _coerce(self, other) -> "QuadExt | None":
        if isinstance(other, QuadExt):
            if other.q != self.q:
                raise ValueError("mixing Q(sqrt %d) and Q(sqrt %d)" % (self.q, other.q))
            return other
        if isinstance(other, (int, Fraction)):
            return QuadExt(self.q, other)
        return None

    def is_zero(self) -> bool:
        return self.a == 0 and self.b == 0

    def __bool__(self):
        return not self.is_zero()

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.b == 0 and self.a == other
        if isinstance(other, QuadExt):
            return self.q == other.q and self.a == other.a and self.b == other.b
        return NotImplemented

    def __hash__(self):
        return hash((self.q, self.a, self.b))

    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return QuadExt(self.q, self.a + o.a, self.b + o.b)

    __radd__ = __add__

    def __neg__(self):
        return QuadExt(self.q, -self.a, -self.b)

    def __sub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return QuadExt(self.q, self.a - o.a, self.b - o.b)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return QuadExt(self.q, self.a * o.a + self.q * self.b * o.b, self.a * o.b + self.b * o.a)

    __rmul__ = __mul__

    def norm(self) -> Fraction:
        return self.a * self.a - self.q * self.b * self.b

    def inverse(self) -> "QuadExt":
        n = self.norm()
        if n == 0:
            raise ZeroDivisionError("inverse of zero in Q(sqrt %d)" % self.q)
        return QuadExt(self.q, self.a / n, -self.b / n)

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self * o.inverse()

    def __rtruediv__(self, other):
        return self._coerce(other) * self.inverse()

    def __pow__(self, n: int):
        if n < 0:
            return self.inverse() ** (-n)
        out = QuadExt(self.q, 1)
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    def to_tuple(self) -> tuple[str, str, int]:
        return (str(self.a), str(self.b), self.q)

    def __repr__(self):
        return "QuadExt(%d, %s, %s)" % (self.q, self.a, self.b)

    def __str__(self):
        if self.b == 0:
            return str(self.a)
        rad = "sqrt(%d)" % self.q
        tail = rad if self.b == 1 else "%s*%s" % (self.b, rad)
        return tail if self.a == 0 else "%s + %s" % (self.a, tail)


# -- q-combinatorics ----------------------------------------------------------

@lru_cache(maxsize=None)
def q_integer(r: int) -> LaurentPoly:
    """Balanced quantum integer [r] = (v^r - v^-r)/(v - v^-1)."""
    if r < 0:
        raise ValueError("q_integer needs r >= 0, got %d" % r)
    return LaurentPoly({r - 1 - 2 * k: 1 for k in range(r)})


@lru_cache(maxsize=None)
def q_factorial(r: int) -> LaurentPoly:
    out = LaurentPoly.const(1)
    for i in range(1, r + 1):
        out = out * q_integer(i)
    return out


@lru_cache(maxsize=None)
def q_binomial(m: int, r: int) -> LaurentPoly:
    """[m choose r] = [m][m-1]...[m-r+1] / [r]!  (exact Laurent division)."""
    if r < 0 or m < 0:
        raise ValueError("q_binomial needs m, r >= 0")
    if r > m:
        return LaurentPoly()
    num = LaurentPoly.const(1)
    for i in range(r):
        num = num * q_integer(m - i)
    return num.exact_div(q_factorial(r))


def phi_poly(r: int, t):
    """(1 - t)(1 - t^2)...(1 - t^r); works for any ring element t with 1."""
    if r < 0:
        raise ValueError("phi_poly needs r >= 0")
    out = 1
    for k in range(1, r + 1):
        out = (1 - t ** k) * out
    return out


@lru_cache(maxsize=None)
def tau(r: int) -> RationalFunction:
    """The specialised parameter 1/phi_r(v^2)."""
    v2 = RationalFunction(LaurentPoly.monomial(2))
    return RationalFunction.const(1) / phi_poly(r, v2) if r else RationalFunction.const(1)


def eval_laurent_at_sqrt_q(f: LaurentPoly, q: int) -> QuadExt:
    out = QuadExt(q)
    for e, c in f.coeffs.items():
        out = out + QuadExt.sqrt_power(q, e) * c
    return out


def eval_at_sqrt_q(f: RationalFunction | LaurentPoly | Number, q: int) -> QuadExt:
    """Specialise v -> sqrt(q)."""
    if isinstance(f, (int, Fraction)):
        return QuadExt(q, f)
    if isinstance(f, LaurentPoly):
        return eval_laurent_at_sqrt_q(f, q)
    den = eval_laurent_at_sqrt_q(f.den, q)
    if den.is_zero():
        raise PoleError("denominator %s vanishes at v = sqrt(%d)" % (f.den, q))
    return eval_laurent_at_sqrt_q(f.num, q) / den
