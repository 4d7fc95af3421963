"""Pure-Python arithmetic kernel: Gaussian-rational scalars and exact row reduction.

This is the fallback twin of the compiled module ``_fast``; both expose the
same API and must behave identically (see tests/test_kernel.py).
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd


def _scalar_raw(a, b, d):
    s = object.__new__(Scalar)
    s.a, s.b, s.d = a, b, d
    return s


def _norm(a, b, d):
    if d < 0:
        a, b, d = -a, -b, -d
    g = gcd(gcd(a, b), d)
    if g > 1:
        a //= g
        b //= g
        d //= g
    s = object.__new__(Scalar)
    s.a, s.b, s.d = a, b, d
    return s


class Scalar:
    """Gaussian rational (a + b*i)/d, stored normalized: d > 0, gcd(a,b,d) == 1."""

    __slots__ = ("a", "b", "d")

    def __init__(self, re=0, im=0):
        re = Fraction(re)
        im = Fraction(im)
        q1, q2 = re.denominator, im.denominator
        d = q1 * q2 // gcd(q1, q2)
        self.a = re.numerator * (d // q1)
        self.b = im.numerator * (d // q2)
        self.d = d

    @property
    def re(self):
        return Fraction(self.a, self.d)

    @property
    def im(self):
        return Fraction(self.b, self.d)

    def conjugate(self):
        return _scalar_raw(self.a, -self.b, self.d)

    def __bool__(self):
        return bool(self.a or self.b)

    def __neg__(self):
        return _scalar_raw(-self.a, -self.b, self.d)

    def __add__(self, other):
        if isinstance(other, Scalar):
            d2 = other.d
            d1 = self.d
            return _norm(self.a * d2 + other.a * d1, self.b * d2 + other.b * d1, d1 * d2)
        if isinstance(other, int):
            return _norm(self.a + other * self.d, self.b, self.d)
        return NotImplemented

    __radd__ = __add__

    def __sub__(self, other):
        if isinstance(other, Scalar):
            d2 = other.d
            d1 = self.d
            return _norm(self.a * d2 - other.a * d1, self.b * d2 - other.b * d1, d1 * d2)
        if isinstance(other, int):
            return _norm(self.a - other * self.d, self.b, self.d)
        return NotImplemented

    def __rsub__(self, other):
        if isinstance(other, int):
            return _norm(other * self.d - self.a, -self.b, self.d)
        return NotImplemented

    def __mul__(self, other):
        if isinstance(other, Scalar):
            a1, b1 = self.a, self.b
            a2, b2 = other.a, other.b
            return _norm(a1 * a2 - b1 * b2, a1 * b2 + b1 * a2, self.d * other.d)
        if isinstance(other, int):
            return _norm(self.a * other, self.b * other, self.d)
        return NotImplemented

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, int):
            other = _scalar_raw(other, 0, 1)
        elif not isinstance(other, Scalar):
            return NotImplemented
        a2, b2, d2 = other.a, other.b, other.d
        n = a2 * a2 + b2 * b2
        if n == 0:
            raise ZeroDivisionError("division by zero Scalar")
        a1, b1 = self.a, self.b
        return _norm((a1 * a2 + b1 * b2) * d2, (b1 * a2 - a1 * b2) * d2, self.d * n)

    def __rtruediv__(self, other):
        if isinstance(other, int):
            return _scalar_raw(other, 0, 1) / self
        return NotImplemented

    def __eq__(self, other):
        if isinstance(other, Scalar):
            return self.a == other.a and self.b == other.b and self.d == other.d
        if isinstance(other, int):
            return self.b == 0 and self.d == 1 and self.a == other
        if isinstance(other, Fraction):
            return self.b == 0 and Fraction(self.a, self.d) == other
        return NotImplemented

    def __hash__(self):
        if self.b == 0:
            return hash(Fraction(self.a, self.d))
        return hash((self.a, self.b, self.d))

    def __repr__(self):
        if self.b == 0:
            return "Scalar(%s)" % Fraction(self.a, self.d)
        return "Scalar(%s, %s)" % (Fraction(self.a, self.d), Fraction(self.b, self.d))

    def __reduce__(self):
        return (_scalar_raw, (self.a, self.b, self.d))


ZERO = _scalar_raw(0, 0, 1)
ONE = _scalar_raw(1, 0, 1)
I = _scalar_raw(0, 1, 1)


def rref_rows(rows, ncols):
    """Reduce sparse rows (dicts col -> nonzero Scalar) to reduced echelon form.

    In place; pivots are normalized to 1 and eliminated above and below.
    Deterministic: columns scanned left to right, pivot = first remaining row
    with a nonzero entry.  Returns the list of (row_index, col_index) pivots.
    """
    nrows = len(rows)
    pivots = []
    npiv = 0
    for c in range(ncols):
        p = -1
        for r in range(npiv, nrows):
            if c in rows[r]:
                p = r
                break
        if p < 0:
            continue
        rows[npiv], rows[p] = rows[p], rows[npiv]
        piv = rows[npiv]
        pc = piv[c]
        if pc.a != pc.d or pc.b != 0:
            for col in piv:
                piv[col] = piv[col] / pc
        for r in range(nrows):
            if r == npiv:
                continue
            row = rows[r]
            f = row.pop(c, None)
            if f is None:
                continue
            for col, v in piv.items():
                if col == c:
                    continue
                cur = row.get(col)
                nv = -(f * v) if cur is None else cur - f * v
                if nv.a or nv.b:
                    row[col] = nv
                elif cur is not None:
                    del row[col]
        pivots.append((npiv, c))
        npiv += 1
    return pivots
