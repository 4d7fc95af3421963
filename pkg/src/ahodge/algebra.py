"""Bigraded exterior algebra with finite Fourier-polynomial coefficients.

Scalars are exact Gaussian rationals; coefficient functions are finite
trigonometric polynomials (maps from integer mode vectors to scalars); forms
carry one such coefficient per canonical coframe generator phi^I wedge
phibar^J.  No floating point is used anywhere.
"""

from __future__ import annotations

import re as _re
from fractions import Fraction
from itertools import combinations
from typing import NamedTuple

from ._kernel import I as SI
from ._kernel import ONE, ZERO, Scalar

__all__ = [
    "Scalar", "ZERO", "ONE", "SI",
    "TrigPoly", "BasisIndex", "Form",
    "bidx", "all_basis", "wedge_basis",
    "inner", "l2_inner",
    "fmt_rat", "parse_rat", "fmt_scalar", "parse_scalar",
    "form_to_text", "form_from_text",
    "random_scalar", "random_trigpoly", "random_form",
]


def sc(re=0, im=0):
    """Scalar from rational/int parts."""
    return Scalar(re, im)


# ---------------------------------------------------------------------------
# Fourier polynomials
# ---------------------------------------------------------------------------

class TrigPoly:
    """Finite Fourier polynomial: map from integer mode vectors to scalars.

    The mode kappa stands for the character exp(i*pi*char_base*<kappa, x>) of
    the hosting model; products are convolutions, conjugation negates modes.
    Zero coefficients are never stored.
    """

    __slots__ = ("terms",)

    def __init__(self, terms=None):
        self.terms = {k: v for k, v in (terms or {}).items() if v}

    @classmethod
    def constant(cls, value, dims):
        t = cls.__new__(cls)
        value = value if isinstance(value, Scalar) else Scalar(value)
        t.terms = {(0,) * dims: value} if value else {}
        return t

    @classmethod
    def character(cls, mode, coeff=ONE):
        t = cls.__new__(cls)
        t.terms = {tuple(mode): coeff} if coeff else {}
        return t

    def is_zero(self):
        return not self.terms

    def __bool__(self):
        return bool(self.terms)

    def __eq__(self, other):
        return isinstance(other, TrigPoly) and self.terms == other.terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def __add__(self, other):
        out = dict(self.terms)
        for k, v in other.terms.items():
            cur = out.get(k)
            nv = v if cur is None else cur + v
            if nv:
                out[k] = nv
            elif cur is not None:
                del out[k]
        t = TrigPoly.__new__(TrigPoly)
        t.terms = out
        return t

    def __sub__(self, other):
        return self + (-other)

    def __neg__(self):
        t = TrigPoly.__new__(TrigPoly)
        t.terms = {k: -v for k, v in self.terms.items()}
        return t

    def __mul__(self, other):
        """Convolution product (mode addition)."""
        out = {}
        for k1, v1 in self.terms.items():
            for k2, v2 in other.terms.items():
                k = tuple(a + b for a, b in zip(k1, k2, strict=True))
                v = v1 * v2
                cur = out.get(k)
                nv = v if cur is None else cur + v
                if nv:
                    out[k] = nv
                elif cur is not None:
                    del out[k]
        t = TrigPoly.__new__(TrigPoly)
        t.terms = out
        return t

    def scale(self, s):
        if not s:
            return TrigPoly()
        t = TrigPoly.__new__(TrigPoly)
        t.terms = {k: v * s for k, v in self.terms.items()}
        return t

    def conj(self):
        t = TrigPoly.__new__(TrigPoly)
        t.terms = {tuple(-c for c in k): v.conjugate() for k, v in self.terms.items()}
        return t

    def shift(self, delta):
        t = TrigPoly.__new__(TrigPoly)
        t.terms = {tuple(a + b for a, b in zip(k, delta)): v for k, v in self.terms.items()}
        return t

    def integrate(self):
        """Total integral against the normalized invariant measure: the zero-mode coefficient."""
        for k, v in self.terms.items():
            if not any(k):
                return v
        return ZERO

    def __repr__(self):
        if not self.terms:
            return "TrigPoly(0)"
        bits = ["%r@%r" % (v, k) for k, v in sorted(self.terms.items())]
        return "TrigPoly(%s)" % " + ".join(bits)


def tp_mul(a, b):
    return a * b


def tp_integrate(a):
    return a.integrate()


# ---------------------------------------------------------------------------
# Canonical basis generators
# ---------------------------------------------------------------------------

class BasisIndex(NamedTuple):
    """Canonical (p,q) coframe generator phi^{i1..ip} wedge phibar^{j1..jq}."""

    p: int
    q: int
    I: tuple
    J: tuple


def bidx(I, J):
    I = tuple(I)
    J = tuple(J)
    if any(I[i] >= I[i + 1] for i in range(len(I) - 1)):
        raise ValueError("I must be strictly increasing")
    if any(J[i] >= J[i + 1] for i in range(len(J) - 1)):
        raise ValueError("J must be strictly increasing")
    return BasisIndex(len(I), len(J), I, J)


def all_basis(n, p, q):
    """Canonical ordered basis of the (p,q) component for coframe rank n."""
    return [
        BasisIndex(p, q, I, J)
        for I in combinations(range(1, n + 1), p)
        for J in combinations(range(1, n + 1), q)
    ]


def _merge(t1, t2):
    """Merge strictly increasing tuples; (sign, merged), or (0, None) on a repeat."""
    i, j, sign = 0, 0, 1
    out = []
    n1, n2 = len(t1), len(t2)
    while i < n1 and j < n2:
        a, b = t1[i], t2[j]
        if a == b:
            return 0, None
        if a < b:
            out.append(a)
            i += 1
        else:
            out.append(b)
            if (n1 - i) & 1:
                sign = -sign
            j += 1
    out.extend(t1[i:])
    out.extend(t2[j:])
    return sign, tuple(out)


def wedge_basis(b1, b2):
    """Wedge of canonical generators: (sign, BasisIndex) or (0, None)."""
    sI, I = _merge(b1.I, b2.I)
    if sI == 0:
        return 0, None
    sJ, J = _merge(b1.J, b2.J)
    if sJ == 0:
        return 0, None
    sign = sI * sJ
    if (b1.q * b2.p) & 1:
        sign = -sign
    return sign, BasisIndex(b1.p + b2.p, b1.q + b2.q, I, J)


# ---------------------------------------------------------------------------
# Forms
# ---------------------------------------------------------------------------

class Form:
    """Exterior form: finite map from BasisIndex to TrigPoly (zero entries absent).

    May mix bidegrees; bidegree-homogeneous iff all keys share (p,q).
    """

    __slots__ = ("coeffs",)

    def __init__(self, coeffs=None):
        self.coeffs = {b: t for b, t in (coeffs or {}).items() if t}

    @classmethod
    def zero(cls):
        return cls()

    @classmethod
    def generator(cls, I, J, tp=None, dims=None, coeff=ONE, mode=None):
        """Form coeff * chi_mode * phi^I wedge phibar^J (constant when mode omitted)."""
        b = bidx(I, J)
        if tp is None:
            if mode is None:
                mode = (0,) * dims
            tp = TrigPoly.character(mode, coeff)
        f = cls.__new__(cls)
        f.coeffs = {b: tp} if tp else {}
        return f

    def is_zero(self):
        return not self.coeffs

    def __bool__(self):
        return bool(self.coeffs)

    def __eq__(self, other):
        return isinstance(other, Form) and self.coeffs == other.coeffs

    def __hash__(self):
        return hash(frozenset((b, frozenset(t.terms.items())) for b, t in self.coeffs.items()))

    def __add__(self, other):
        out = dict(self.coeffs)
        for b, t in other.coeffs.items():
            cur = out.get(b)
            nt = t if cur is None else cur + t
            if nt:
                out[b] = nt
            elif cur is not None:
                del out[b]
        f = Form.__new__(Form)
        f.coeffs = out
        return f

    def __sub__(self, other):
        return self + (-other)

    def __neg__(self):
        f = Form.__new__(Form)
        f.coeffs = {b: -t for b, t in self.coeffs.items()}
        return f

    def scale(self, s):
        if not s:
            return Form()
        f = Form.__new__(Form)
        f.coeffs = {b: t.scale(s) for b, t in self.coeffs.items()}
        return f

    def mul_tp(self, tp):
        """Multiply every coefficient by a TrigPoly (function times form)."""
        out = {}
        for b, t in self.coeffs.items():
            nt = t * tp
            if nt:
                out[b] = nt
        f = Form.__new__(Form)
        f.coeffs = out
        return f

    def wedge(self, other):
        out = {}
        for b1, t1 in self.coeffs.items():
            for b2, t2 in other.coeffs.items():
                sign, b = wedge_basis(b1, b2)
                if sign == 0:
                    continue
                t = t1 * t2
                if sign < 0:
                    t = -t
                cur = out.get(b)
                nt = t if cur is None else cur + t
                if nt:
                    out[b] = nt
                elif cur is not None:
                    del out[b]
        f = Form.__new__(Form)
        f.coeffs = out
        return f

    def conj(self):
        """Complex conjugate: swaps (p,q) -> (q,p) with the canonical-reordering sign."""
        out = {}
        for b, t in self.coeffs.items():
            nb = BasisIndex(b.q, b.p, b.J, b.I)
            nt = t.conj()
            if (b.p * b.q) & 1:
                nt = -nt
            out[nb] = nt
        f = Form.__new__(Form)
        f.coeffs = out
        return f

    def bidegrees(self):
        return sorted({(b.p, b.q) for b in self.coeffs})

    def is_homogeneous(self):
        return len(self.bidegrees()) <= 1

    def bidegree(self):
        """The (p,q) of a homogeneous nonzero form, else None."""
        bds = self.bidegrees()
        return bds[0] if len(bds) == 1 else None

    def project(self, p, q):
        f = Form.__new__(Form)
        f.coeffs = {b: t for b, t in self.coeffs.items() if b.p == p and b.q == q}
        return f

    def items(self):
        return self.coeffs.items()

    def sorted_items(self):
        return sorted(self.coeffs.items(), key=lambda bt: bt[0])

    def __repr__(self):
        return "Form(%s)" % (form_to_text(self) if len(self.coeffs) < 9 else "%d entries" % len(self.coeffs))


# ---------------------------------------------------------------------------
# Hermitian pairing
# ---------------------------------------------------------------------------

def _basis_weight(b, norms):
    w = ONE
    for i in b.I:
        w = w * norms[i - 1]
    for j in b.J:
        w = w * norms[j - 1]
    return w


def inner(a, b, norms):
    """Pointwise Hermitian pairing (conjugate-linear in b) as a TrigPoly.

    norms[i] is the squared norm of the coframe generator phi^{i+1}; distinct
    generators are orthogonal and conjugates have equal norms.
    """
    out = TrigPoly()
    for bi, ta in a.coeffs.items():
        tb = b.coeffs.get(bi)
        if tb is None:
            continue
        out = out + (ta * tb.conj()).scale(_basis_weight(bi, norms))
    return out


def l2_inner(a, b, norms):
    """Global L2 pairing against the normalized volume: integral of inner(a, b)."""
    return inner(a, b, norms).integrate()


# ---------------------------------------------------------------------------
# Exact text formats
# ---------------------------------------------------------------------------

_MINUS = "−"


def parse_rat(s):
    s = s.strip().replace(_MINUS, "-")
    if "/" in s:
        num, den = s.split("/", 1)
        den = int(den)
        if den <= 0:
            raise ValueError("denominator must be positive: %r" % s)
        return Fraction(int(num), den)
    return Fraction(int(s))


def fmt_rat(x):
    x = Fraction(x)
    return str(x.numerator) if x.denominator == 1 else "%d/%d" % (x.numerator, x.denominator)


def parse_scalar(s):
    """Parse 'rat' or 'rat+rat i' (optionally parenthesized) exactly."""
    s = s.strip()
    if s.startswith("(") and s.endswith(")"):
        s = s[1:-1].strip()
    if s.endswith("i"):
        body = s[:-1]
        # split at the '+' that separates the real part from the imaginary part
        for k in range(1, len(body)):
            if body[k] == "+":
                return Scalar(parse_rat(body[:k]), parse_rat(body[k + 1:]))
        raise ValueError("malformed scalar: %r" % s)
    return Scalar(parse_rat(s))


def fmt_scalar(s):
    return "%s+%si" % (fmt_rat(s.re), fmt_rat(s.im))


def _fmt_term(mode, b, coeff):
    return "(%s)*X[%s]*w[%s;%s]" % (
        fmt_scalar(coeff),
        ",".join(str(c) for c in mode),
        ",".join(str(i) for i in b.I),
        ",".join(str(j) for j in b.J),
    )


def form_to_text(form):
    """Serialize a form deterministically: terms sorted by generator then mode."""
    bits = []
    for b, tp in form.sorted_items():
        for mode in sorted(tp.terms):
            bits.append(_fmt_term(mode, b, tp.terms[mode]))
    return "+".join(bits) if bits else "0"


_TERM_RE = _re.compile(
    r"^\((?P<sc>[^)]*)\)\*X\[(?P<mode>[-0-9,−]*)\]\*w\[(?P<I>[0-9,]*);(?P<J>[0-9,]*)\]$"
)


def _split_terms(s):
    """Split on '+' at paren/bracket depth zero."""
    parts, depth, start = [], 0, 0
    for k, ch in enumerate(s):
        if ch in "([":
            depth += 1
        elif ch in ")]":
            depth -= 1
        elif ch == "+" and depth == 0:
            parts.append(s[start:k])
            start = k + 1
    parts.append(s[start:])
    return parts


def form_from_text(s, dims=None):
    """Parse the exact serialization grammar back into a Form."""
    s = "".join(s.split())
    if s == "0" or not s:
        return Form()
    out = Form()
    for part in _split_terms(s):
        m = _TERM_RE.match(part)
        if m is None:
            # tolerate an unparenthesized scalar
            m = _re.match(
                r"^(?P<sc>[^*]*)\*X\[(?P<mode>[-0-9,−]*)\]\*w\[(?P<I>[0-9,]*);(?P<J>[0-9,]*)\]$",
                part,
            )
            if m is None:
                raise ValueError("malformed form term: %r" % part)
        coeff = parse_scalar(m.group("sc"))
        mode = tuple(int(c.replace(_MINUS, "-")) for c in m.group("mode").split(",") if c != "")
        if dims is not None and len(mode) != dims:
            raise ValueError("mode %r does not have %d components" % (mode, dims))
        I = tuple(int(c) for c in m.group("I").split(",") if c != "")
        J = tuple(int(c) for c in m.group("J").split(",") if c != "")
        out = out + Form.generator(I, J, TrigPoly.character(mode, coeff))
    return out


# ---------------------------------------------------------------------------
# Seeded random data (used by model validation and tests)
# ---------------------------------------------------------------------------

def random_scalar(rng, denmax=3):
    return Scalar(
        Fraction(rng.randint(-4, 4), rng.randint(1, denmax)),
        Fraction(rng.randint(-4, 4), rng.randint(1, denmax)),
    )


def random_trigpoly(rng, dims, mode_box=1, nterms=2, denmax=3):
    t = TrigPoly()
    for _ in range(nterms):
        mode = tuple(rng.randint(-mode_box, mode_box) for _ in range(dims))
        t = t + TrigPoly.character(mode, random_scalar(rng, denmax))
    return t

def random_form(rng, n, dims, p, q, mode_box=1, nterms=2):
    """Seeded random bidegree-(p,q) form with small exact coefficients."""
    basis = all_basis(n, p, q)
    f = Form()
    for _ in range(nterms):
        b = basis[rng.randrange(len(basis))]
        f = f + Form.generator(b.I, b.J, random_trigpoly(rng, dims, mode_box, nterms=1))
    return f
