"""Differential operators on model forms: d and its bidegree components, Hodge
star, star-adjoints, the five Laplacians, principal symbols, and the metric
structure diagnostics.

All operators act in pi-units: an operator of differential order r returns the
true value divided by pi^r, so results stay Gaussian-rational.  The fourth-
and second-order parts of the Bott-Chern/Aeppli Laplacians are reported as
separate blocks because pi^4 and pi^2 terms cannot be summed rationally; the
kernel is the simultaneous kernel of the two blocks.
"""

from __future__ import annotations

from fractions import Fraction
from typing import NamedTuple

from ._kernel import rref_rows
from .algebra import (
    ONE,
    SI,
    ZERO,
    BasisIndex,
    Form,
    Scalar,
    TrigPoly,
    all_basis,
    bidx,
    random_scalar,
    wedge_basis,
)

__all__ = [
    "DIFF_ORDER", "LaplacianBlocks",
    "apply_d", "component", "component_any",
    "star", "star_oracle", "adjoint", "laplacian",
    "principal_symbol", "ellipticity_check", "scalar_symbol",
    "gauduchon_defect", "lck_check", "solve_theta",
]

# Differential order (derivative count) of each operator kind.
DIFF_ORDER = {
    "mu": 0, "mubar": 0, "mu_star": 0, "mubar_star": 0,
    "d": 1, "del": 1, "delbar": 1,
    "d_star": 1, "del_star": 1, "delbar_star": 1,
    "lap_d": 2, "lap_del": 2, "lap_delbar": 2,
    "lap_bc": 4, "lap_aeppli": 4,
}

_SHIFTS = {"mu": (2, -1), "del": (1, 0), "delbar": (0, 1), "mubar": (-1, 2)}


# ---------------------------------------------------------------------------
# Exterior differential
# ---------------------------------------------------------------------------

def _acc_terms(acc, nb, terms, negate=False):
    dst = acc.get(nb)
    if dst is None:
        dst = acc[nb] = {}
    for k, v in terms.items():
        if negate:
            v = -v
        cur = dst.get(k)
        nv = v if cur is None else cur + v
        if nv:
            dst[k] = nv
        elif cur is not None:
            del dst[k]


def apply_d(m, alpha):
    """Exterior differential (pi-units): frame derivatives of the coefficients
    plus the structure-table action on the basis generators."""
    acc = {}
    for b, f in alpha.coeffs.items():
        for a in range(1, m.n + 1):
            df = m.frame_apply("V%d" % a, f)
            if df.terms:
                sign, nb = wedge_basis(BasisIndex(1, 0, (a,), ()), b)
                if sign:
                    _acc_terms(acc, nb, df.terms, sign < 0)
            df = m.frame_apply("Vb%d" % a, f)
            if df.terms:
                sign, nb = wedge_basis(BasisIndex(0, 1, (), (a,)), b)
                if sign:
                    _acc_terms(acc, nb, df.terms, sign < 0)
        dB = m.d_basis(b)
        if dB.coeffs:
            for b2, tp2 in dB.coeffs.items():
                _acc_terms(acc, b2, (tp2 * f).terms)
    out = Form.__new__(Form)
    out.coeffs = {}
    for b2, terms in acc.items():
        if terms:
            tp = TrigPoly.__new__(TrigPoly)
            tp.terms = terms
            out.coeffs[b2] = tp
    return out


def component_any(m, alpha, which):
    """Bidegree component of d, applied piecewise on a possibly mixed form."""
    dp, dq = _SHIFTS[which]
    groups = {}
    for b, tp in alpha.coeffs.items():
        groups.setdefault((b.p, b.q), {})[b] = tp
    out = Form()
    for (p, q), coeffs in groups.items():
        piece = Form.__new__(Form)
        piece.coeffs = coeffs
        out = out + apply_d(m, piece).project(p + dp, q + dq)
    return out


def component(m, alpha, which):
    """mu / del / delbar / mubar component of d on a bidegree-homogeneous form."""
    if which not in _SHIFTS:
        raise ValueError("unknown component %r" % which)
    if not alpha.is_homogeneous():
        raise ValueError("component requires a bidegree-homogeneous form")
    return component_any(m, alpha, which)


# ---------------------------------------------------------------------------
# Hodge star
# ---------------------------------------------------------------------------

def _volume_scalar(m):
    full = bidx(tuple(range(1, m.n + 1)), tuple(range(1, m.n + 1)))
    tp = m.metric.volume.coeffs.get(full)
    if tp is None:
        raise ValueError("volume form has no top-generator coefficient")
    return tp.terms[(0,) * m.fourier_dims]


def _star_table(m):
    """Fast path: diagonal star table (target generator, coefficient) per generator."""
    if m._star_cache:
        return m._star_cache
    n = m.n
    v = _volume_scalar(m)
    allidx = tuple(range(1, n + 1))
    table = {}
    for p in range(n + 1):
        for q in range(n + 1):
            for b in all_basis(n, p, q):
                Ic = tuple(i for i in allidx if i not in b.I)
                Jc = tuple(j for j in allidx if j not in b.J)
                target = BasisIndex(n - q, n - p, Jc, Ic)
                partner = BasisIndex(q, p, b.J, b.I)
                eps, fullb = wedge_basis(partner, target)
                if eps == 0:
                    raise AssertionError("star pairing degenerate")
                w = v
                for i in b.I:
                    w = w * m.metric.norms[i - 1]
                for j in b.J:
                    w = w * m.metric.norms[j - 1]
                if (p * q) & 1:
                    w = -w
                if eps < 0:
                    w = -w
                table[b] = (target, w)
    m._star_cache.update(table)
    return m._star_cache


def star(m, alpha):
    """Hodge star via the precomputed sign/norm table (C-linear)."""
    table = _star_table(m)
    out = {}
    for b, tp in alpha.coeffs.items():
        target, c = table[b]
        nt = tp.scale(c)
        if nt:
            cur = out.get(target)
            out[target] = nt if cur is None else cur + nt
    f = Form.__new__(Form)
    f.coeffs = {b: t for b, t in out.items() if t}
    return f


def _solve_square(rows, ncols):
    """Solve the augmented system rows (cols 0..ncols-1 | rhs at ncols) exactly."""
    work = [dict(r) for r in rows]
    pivots = rref_rows(work, ncols + 1)
    sol = [ZERO] * ncols
    for r, c in pivots:
        if c == ncols:
            raise ValueError("inconsistent linear system")
        sol[c] = work[r].get(ncols, ZERO)
    return sol


def star_oracle(m, alpha):
    """Hodge star by solving the defining relation alpha ^ *conj(beta) = <alpha,beta> vol.

    Independent of the table path; used as the test oracle for sign conventions.
    """
    out = Form()
    for b, tp in alpha.coeffs.items():
        sb = _star_gen_oracle(m, b)
        out = out + sb.mul_tp(tp)
    return out


def _star_gen_oracle(m, b):
    n = m.n
    r, s = b.p, b.q
    unknowns = all_basis(n, n - s, n - r)
    partners = all_basis(n, s, r)
    v = _volume_scalar(m)
    conj_sign = -1 if (r * s) & 1 else 1
    conj_b = BasisIndex(s, r, b.J, b.I)
    rows = []
    for a in partners:
        row = {}
        for ci, u in enumerate(unknowns):
            eps, _ = wedge_basis(a, u)
            if eps:
                row[ci] = ONE if eps > 0 else -ONE
        if a == conj_b:
            w = v
            for i in a.I:
                w = w * m.metric.norms[i - 1]
            for j in a.J:
                w = w * m.metric.norms[j - 1]
            rhs = w if conj_sign > 0 else -w
            row[len(unknowns)] = rhs
        rows.append(row)
    sol = _solve_square(rows, len(unknowns))
    out = Form()
    for ci, u in enumerate(unknowns):
        if sol[ci]:
            out = out + Form.generator(u.I, u.J, TrigPoly.constant(sol[ci], m.fourier_dims))
    return out


# ---------------------------------------------------------------------------
# Adjoints and Laplacians
# ---------------------------------------------------------------------------

def adjoint(m, alpha, which):
    """Formal adjoints through the star: d*=-*d*, mu*=-*mubar*, del*=-*delbar*,
    delbar*=-*del*, mubar*=-*mu*."""
    base = {
        "d_star": "d",
        "mu_star": "mubar",
        "del_star": "delbar",
        "delbar_star": "del",
        "mubar_star": "mu",
    }.get(which)
    if base is None:
        raise ValueError("unknown adjoint %r" % which)
    inner_op = apply_d(m, star(m, alpha)) if base == "d" else component_any(m, star(m, alpha), base)
    return -star(m, inner_op)


def _op(m, alpha, name):
    if name == "d":
        return apply_d(m, alpha)
    if name in _SHIFTS:
        return component_any(m, alpha, name)
    return adjoint(m, alpha, name)


def _chain(m, alpha, names):
    """Apply a composition given left-to-right (applied right-to-left)."""
    out = alpha
    for name in reversed(names):
        if out.is_zero():
            return out
        out = _op(m, out, name)
    return out


class LaplacianBlocks(NamedTuple):
    """pi-graded result: true operator = pi^4 * order4 + pi^2 * order2."""

    order4: Form
    order2: Form

    def is_zero(self):
        return self.order4.is_zero() and self.order2.is_zero()


_BC_TOP = [
    ("del", "delbar", "delbar_star", "del_star"),
    ("delbar_star", "del_star", "del", "delbar"),
    ("del_star", "delbar", "delbar_star", "del"),
    ("delbar_star", "del", "del_star", "delbar"),
]
_AEPPLI_TOP = [
    ("del", "delbar", "delbar_star", "del_star"),
    ("delbar_star", "del_star", "del", "delbar"),
    ("del", "delbar_star", "delbar", "del_star"),
    ("delbar", "del_star", "del", "delbar_star"),
]


def laplacian(m, alpha, which):
    """Evaluate a Laplacian; returns pi-graded blocks (order-4, order-2)."""
    if which not in ("lap_d", "lap_del", "lap_delbar", "lap_bc", "lap_aeppli"):
        raise ValueError("unknown laplacian %r" % which)
    if which != "lap_d" and not alpha.is_homogeneous():
        raise ValueError("%s requires a bidegree-homogeneous form" % which)
    if which == "lap_d":
        low = _chain(m, alpha, ("d", "d_star")) + _chain(m, alpha, ("d_star", "d"))
        return LaplacianBlocks(Form(), low)
    if which == "lap_del":
        low = _chain(m, alpha, ("del", "del_star")) + _chain(m, alpha, ("del_star", "del"))
        return LaplacianBlocks(Form(), low)
    if which == "lap_delbar":
        low = _chain(m, alpha, ("delbar", "delbar_star")) + _chain(m, alpha, ("delbar_star", "delbar"))
        return LaplacianBlocks(Form(), low)
    tops = _BC_TOP if which == "lap_bc" else _AEPPLI_TOP
    top = Form()
    for names in tops:
        top = top + _chain(m, alpha, names)
    if which == "lap_bc":
        low = _chain(m, alpha, ("del_star", "del")) + _chain(m, alpha, ("delbar_star", "delbar"))
    else:
        low = _chain(m, alpha, ("del", "del_star")) + _chain(m, alpha, ("delbar", "delbar_star"))
    return LaplacianBlocks(top, low)


# ---------------------------------------------------------------------------
# Principal symbols and ellipticity
# ---------------------------------------------------------------------------

def _xi_forms(m, xi10):
    comps = list(xi10)
    if len(comps) != m.n:
        raise ValueError("xi must have %d (1,0)-components" % m.n)
    comps = [c if isinstance(c, Scalar) else Scalar(c) for c in comps]
    f10 = Form()
    f01 = Form()
    for a, c in enumerate(comps, start=1):
        if c:
            f10 = f10 + Form.generator((a,), (), TrigPoly.constant(c, m.fourier_dims))
            f01 = f01 + Form.generator((), (a,), TrigPoly.constant(c.conjugate(), m.fourier_dims))
    return f10, f01


def _symbol_app(m, which, f10, f01, alpha):
    """Apply the principal symbol of `which` at the covector to a constant form.

    Built compositionally: sigma(del) = i xi^{1,0} ^ . , sigma(delbar) = i xi^{0,1} ^ .,
    adjoint symbols through the star, mu/mubar contribute zero.
    """
    if which == "del":
        return f10.wedge(alpha).scale(SI)
    if which == "delbar":
        return f01.wedge(alpha).scale(SI)
    if which == "d":
        return (f10.wedge(alpha) + f01.wedge(alpha)).scale(SI)
    if which in ("mu", "mubar"):
        return Form()
    if which == "del_star":
        return -star(m, _symbol_app(m, "delbar", f10, f01, star(m, alpha)))
    if which == "delbar_star":
        return -star(m, _symbol_app(m, "del", f10, f01, star(m, alpha)))
    if which == "d_star":
        return -star(m, _symbol_app(m, "d", f10, f01, star(m, alpha)))
    if which in ("lap_d", "lap_del", "lap_delbar"):
        base = {"lap_d": "d", "lap_del": "del", "lap_delbar": "delbar"}[which]
        badj = base + "_star"
        return (
            _symbol_app(m, base, f10, f01, _symbol_app(m, badj, f10, f01, alpha))
            + _symbol_app(m, badj, f10, f01, _symbol_app(m, base, f10, f01, alpha))
        )
    if which in ("lap_bc", "lap_aeppli"):
        tops = _BC_TOP if which == "lap_bc" else _AEPPLI_TOP
        out = Form()
        for names in tops:
            cur = alpha
            for name in reversed(names):
                cur = _symbol_app(m, name, f10, f01, cur)
                if cur.is_zero():
                    break
            out = out + cur
        return out
    raise ValueError("no principal symbol for %r" % which)


def principal_symbol(m, which, bidegree, xi10):
    """Symbol matrix on the canonical (p,q) basis for a real covector given by
    its Gaussian-rational (1,0)-part.  Order-0 operators are rejected."""
    if DIFF_ORDER.get(which, 1) == 0:
        raise ValueError("%s has order 0: no principal symbol of positive order" % which)
    p, q = bidegree
    f10, f01 = _xi_forms(m, xi10)
    cols = all_basis(m.n, p, q)
    images = []
    targets = set()
    for b in cols:
        img = _symbol_app(m, which, f10, f01, Form.generator(b.I, b.J, dims=m.fourier_dims))
        images.append(img)
        targets.update(img.coeffs)
    if which.startswith("lap_"):
        rows = cols
    else:
        rows = sorted(targets)
    zmode = (0,) * m.fourier_dims
    mat = []
    for rb in rows:
        mat.append(
            [img.coeffs[rb].terms.get(zmode, ZERO) if rb in img.coeffs else ZERO for img in images]
        )
    return mat


def _rank(mat):
    rows = [
        {j: v for j, v in enumerate(row) if v}
        for row in mat
    ]
    ncols = len(mat[0]) if mat else 0
    return len(rref_rows(rows, ncols))


def scalar_symbol(m, xi10):
    """Symbol of the scalar operator f -> -i * star(del delbar f ^ omega)."""
    f10, f01 = _xi_forms(m, xi10)
    one = m.constant_form()
    w = _symbol_app(m, "del", f10, f01, _symbol_app(m, "delbar", f10, f01, one))
    val = star(m, w.wedge(m.metric.omega)).coeffs
    b0 = bidx((), ())
    tp = val.get(b0)
    s = tp.terms.get((0,) * m.fourier_dims, ZERO) if tp is not None else ZERO
    return -SI * s


def ellipticity_check(m, which, samples=50, seed=0):
    """Exact symbol invertibility over seeded rational covectors.

    For the Laplacians: the symbol matrix must have full rank at every bidegree
    for every nonzero sample.  For the scalar operator "L": the symbol must be
    real with a fixed sign, bounded below by a positive rational times |xi|^2;
    the sign found is reported, not presumed.
    """
    import random

    if which in ("mu", "mubar", "mu_star", "mubar_star"):
        raise ValueError("%s has order 0: no principal symbol of positive order" % which)
    if which not in ("lap_d", "lap_del", "lap_delbar", "lap_bc", "lap_aeppli", "L"):
        raise ValueError("ellipticity check supports the Laplacians and L, not %r" % which)

    rng = random.Random(seed)
    skipped = 0
    checked = 0
    failures = []
    sign = None
    min_ratio = None
    while checked < samples:
        comps = [random_scalar(rng) for _ in range(m.n)]
        if not any(comps):
            skipped += 1
            continue
        checked += 1
        if which == "L":
            s = scalar_symbol(m, comps)
            nrm = ZERO
            for a, c in enumerate(comps, start=1):
                nrm = nrm + (c * c.conjugate()) * m.metric.norms[a - 1]
            nrm = nrm + nrm  # |xi|^2 = 2 sum |a_k|^2 N_k for a real covector
            if s.im != 0:
                failures.append("sample %d: non-real symbol" % checked)
                continue
            ratio = Fraction(s.re) / Fraction(nrm.re)
            ssign = 1 if ratio > 0 else (-1 if ratio < 0 else 0)
            if ssign == 0:
                failures.append("sample %d: vanishing symbol" % checked)
                continue
            if sign is None:
                sign = ssign
            elif sign != ssign:
                failures.append("sample %d: sign flip" % checked)
                continue
            mag = abs(ratio)
            if min_ratio is None or mag < min_ratio:
                min_ratio = mag
        else:
            for p in range(m.n + 1):
                for q in range(m.n + 1):
                    mat = principal_symbol(m, which, (p, q), comps)
                    dim = len(mat)
                    if dim and _rank(mat) != dim:
                        failures.append("sample %d: singular at (%d,%d)" % (checked, p, q))
    report = {
        "model": m.name,
        "operator": which,
        "samples": checked,
        "skipped": skipped,
        "all_invertible": not failures,
        "failures": failures,
    }
    if which == "L":
        report["sign"] = sign
        report["min_ratio"] = min_ratio
    return report


# ---------------------------------------------------------------------------
# Metric structure diagnostics
# ---------------------------------------------------------------------------

def gauduchon_defect(m):
    """del delbar omega (pi^2-units); zero iff the metric is already Gauduchon."""
    if m.n != 2:
        raise ValueError("gauduchon defect is computed for n = 2 only")
    return component_any(m, component_any(m, m.metric.omega, "delbar"), "del")


def solve_theta(m):
    """The unique constant 1-form theta with d omega = theta ^ omega, or None."""
    dom = apply_d(m, m.metric.omega)
    gens = [bidx((a,), ()) for a in range(1, m.n + 1)] + [
        bidx((), (a,)) for a in range(1, m.n + 1)
    ]
    targets = sorted(
        set().union(
            *(
                Form.generator(g.I, g.J, dims=m.fourier_dims).wedge(m.metric.omega).coeffs
                for g in gens
            ),
            dom.coeffs,
        )
    )
    zmode = (0,) * m.fourier_dims
    rows = []
    for t in targets:
        row = {}
        for ci, g in enumerate(gens):
            w = Form.generator(g.I, g.J, dims=m.fourier_dims).wedge(m.metric.omega)
            tp = w.coeffs.get(t)
            if tp is not None:
                row[ci] = tp.terms[zmode]
        tp = dom.coeffs.get(t)
        if tp is not None:
            c = tp.terms.get(zmode)
            if c is None or len(tp.terms) > 1:
                return None  # d omega is not an invariant constant form
            row[len(gens)] = c
        rows.append(row)
    try:
        sol = _solve_square(rows, len(gens))
    except ValueError:
        return None
    out = Form()
    for ci, g in enumerate(gens):
        if sol[ci]:
            out = out + Form.generator(g.I, g.J, TrigPoly.constant(sol[ci], m.fourier_dims))
    return out


def lck_check(m, theta):
    """Locally-conformally-almost-Kahler diagnostics for a degree-1 theta (pi-units).

    (a) d omega = theta ^ omega, (b) d theta = 0, (c) non-exactness proxy:
    theta is Hodge-harmonic and nonzero within the character sector.
    """
    dom = apply_d(m, m.metric.omega)
    conformal_eq = dom == theta.wedge(m.metric.omega)
    theta_closed = apply_d(m, theta).is_zero()
    theta_coclosed = adjoint(m, theta, "d_star").is_zero()
    harmonic_nonzero = bool(theta) and theta_closed and theta_coclosed
    return {
        "model": m.name,
        "conformal_eq": conformal_eq,
        "theta_closed": theta_closed,
        "theta_harmonic_nonzero": harmonic_nonzero,
        "almost_kahler": dom.is_zero(),
        "strict_lck": conformal_eq and theta_closed and harmonic_nonzero,
    }
