# cython: language_level=3, binding=True
"""Compiled arithmetic kernel: Gaussian-rational scalars and exact row reduction.

Twin of the pure-Python module ``_pure``; identical API and semantics, with
the hot scalar arithmetic and elimination loops compiled.
"""

from fractions import Fraction
from math import gcd


def _scalar_raw(a, b, d):
    cdef Scalar s = Scalar.__new__(Scalar)
    s.a = a
    s.b = b
    s.d = d
    return s


cdef inline Scalar _raw(object a, object b, object d):
    cdef Scalar s = Scalar.__new__(Scalar)
    s.a = a
    s.b = b
    s.d = d
    return s


cdef inline Scalar _norm(object a, object b, object d):
    cdef object g
    if d < 0:
        a = -a
        b = -b
        d = -d
    g = gcd(gcd(a, b), d)
    if g > 1:
        a = a // g
        b = b // g
        d = d // g
    return _raw(a, b, d)


cdef class Scalar:
    """Gaussian rational (a + b*i)/d, stored normalized: d > 0, gcd(a,b,d) == 1."""

    cdef readonly object a
    cdef readonly object b
    cdef readonly object d

    def __init__(self, re=0, im=0):
        re = Fraction(re)
        im = Fraction(im)
        q1 = re.denominator
        q2 = im.denominator
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
        return _raw(self.a, -self.b, self.d)

    def __bool__(self):
        return bool(self.a) or bool(self.b)

    def __neg__(self):
        return _raw(-self.a, -self.b, self.d)

    def __add__(self, other):
        cdef Scalar o
        if isinstance(other, Scalar):
            o = <Scalar>other
            return _norm(self.a * o.d + o.a * self.d, self.b * o.d + o.b * self.d, self.d * o.d)
        if isinstance(other, int):
            return _norm(self.a + other * self.d, self.b, self.d)
        return NotImplemented

    def __radd__(self, other):
        if isinstance(other, int):
            return _norm(self.a + other * self.d, self.b, self.d)
        return NotImplemented

    def __sub__(self, other):
        cdef Scalar o
        if isinstance(other, Scalar):
            o = <Scalar>other
            return _norm(self.a * o.d - o.a * self.d, self.b * o.d - o.b * self.d, self.d * o.d)
        if isinstance(other, int):
            return _norm(self.a - other * self.d, self.b, self.d)
        return NotImplemented

    def __rsub__(self, other):
        if isinstance(other, int):
            return _norm(other * self.d - self.a, -self.b, self.d)
        return NotImplemented

    def __mul__(self, other):
        cdef Scalar o
        if isinstance(other, Scalar):
            o = <Scalar>other
            return _norm(self.a * o.a - self.b * o.b, self.a * o.b + self.b * o.a, self.d * o.d)
        if isinstance(other, int):
            return _norm(self.a * other, self.b * other, self.d)
        return NotImplemented

    def __rmul__(self, other):
        if isinstance(other, int):
            return _norm(self.a * other, self.b * other, self.d)
        return NotImplemented

    def __truediv__(self, other):
        cdef Scalar o
        if isinstance(other, int):
            o = _raw(other, 0, 1)
        elif isinstance(other, Scalar):
            o = <Scalar>other
        else:
            return NotImplemented
        n = o.a * o.a + o.b * o.b
        if n == 0:
            raise ZeroDivisionError("division by zero Scalar")
        return _norm(
            (self.a * o.a + self.b * o.b) * o.d,
            (self.b * o.a - self.a * o.b) * o.d,
            self.d * n,
        )

    def __rtruediv__(self, other):
        if isinstance(other, int):
            return _raw(other, 0, 1) / self
        return NotImplemented

    def __eq__(self, other):
        cdef Scalar o
        if isinstance(other, Scalar):
            o = <Scalar>other
            return self.a == o.a and self.b == o.b and self.d == o.d
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


ZERO = _raw(0, 0, 1)
ONE = _raw(1, 0, 1)
I = _raw(0, 1, 1)


def rref_rows(list rows, Py_ssize_t ncols):
    """Reduce sparse rows (dicts col -> nonzero Scalar) to reduced echelon form.

    In place; pivots normalized to 1 and eliminated above and below.
    Deterministic: columns scanned left to right, pivot = first remaining row
    with a nonzero entry.  Returns the list of (row_index, col_index) pivots.
    """
    cdef Py_ssize_t nrows = len(rows)
    cdef Py_ssize_t npiv = 0
    cdef Py_ssize_t c, r, p
    cdef dict piv, row
    cdef Scalar pc, f, v, cur, nv
    cdef list pivots = []
    cdef object col, val
    for c in range(ncols):
        p = -1
        for r in range(npiv, nrows):
            if c in (<dict>rows[r]):
                p = r
                break
        if p < 0:
            continue
        rows[npiv], rows[p] = rows[p], rows[npiv]
        piv = <dict>rows[npiv]
        pc = <Scalar>piv[c]
        if pc.a != pc.d or pc.b != 0:
            for col in piv:
                piv[col] = (<Scalar>piv[col]) / pc
        for r in range(nrows):
            if r == npiv:
                continue
            row = <dict>rows[r]
            val = row.pop(c, None)
            if val is None:
                continue
            f = <Scalar>val
            for col, v in piv.items():
                if col == c:
                    continue
                cur = <Scalar>row.get(col)
                if cur is None:
                    nv = -(f * v)
                else:
                    nv = cur - f * v
                if nv.a or nv.b:
                    row[col] = nv
                elif cur is not None:
                    del row[col]
        pivots.append((npiv, c))
        npiv += 1
    return pivots
