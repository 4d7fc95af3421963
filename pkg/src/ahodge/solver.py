"""Harmonic-space solver: assembles harmonicity systems per Fourier mode class,
computes exact nullspaces, applies deck filters, and reports dimensions.

Every equation row is pi-homogeneous with the pi power divided out, so all
matrices are Gaussian-rational.  Dimensions are certified lower bounds within
the character sector; for shift-free models a boundary-shell scan can upgrade
the certification to exact-decoupled (the scan range is reported).
"""

from __future__ import annotations

import math
import os
import time
from dataclasses import dataclass
from fractions import Fraction
from itertools import product

from . import calculus as C
from ._kernel import ONE, ZERO, rref_rows
from .algebra import (
    Form,
    Scalar,
    TrigPoly,
    all_basis,
    form_to_text,
    inner,
)
from .model import InvolutionRule, ParityRule

__all__ = [
    "SYSTEMS", "ModeClass", "SolveReport", "AssembledSystem",
    "mode_classes", "assemble", "nullspace", "deck_project",
    "solve_harmonic", "b_minus", "compare", "lefschetz11",
    "circle_count", "as_membership", "bc_cap_as",
]

SYSTEMS = ("hodge", "del", "delbar", "bc", "aeppli", "asd")

# Equation rows per system; bc/aeppli list their second-order row first,
# matching the displayed order of the per-mode systems they reproduce.
SYSTEM_ROW_LABELS = {
    "hodge": ("d", "d(star .)"),
    "del": ("del", "delbar(star .)"),
    "delbar": ("delbar", "del(star .)"),
    "bc": ("del delbar(star .)", "del", "delbar"),
    "aeppli": ("del delbar", "del(star .)", "delbar(star .)"),
    "asd": ("d", "star + id"),
}


def _system_apply(m, system, bidegree, form):
    """Evaluate all equation rows of a system on a homogeneous form.

    Returns a list of Forms aligned with SYSTEM_ROW_LABELS[system]."""
    if system == "asd":
        return [C.apply_d(m, form), C.star(m, form) + form]
    p, q = bidegree
    sp, sq = m.n - q, m.n - p
    if system == "hodge":
        return [C.apply_d(m, form), C.apply_d(m, C.star(m, form))]
    if system == "del":
        return [
            C.apply_d(m, form).project(p + 1, q),
            C.apply_d(m, C.star(m, form)).project(sp, sq + 1),
        ]
    if system == "delbar":
        return [
            C.apply_d(m, form).project(p, q + 1),
            C.apply_d(m, C.star(m, form)).project(sp + 1, sq),
        ]
    if system == "bc":
        dst = C.apply_d(m, C.star(m, form)).project(sp, sq + 1)
        dd = C.apply_d(m, dst).project(sp + 1, sq + 1)
        d1 = C.apply_d(m, form)
        return [dd, d1.project(p + 1, q), d1.project(p, q + 1)]
    if system == "aeppli":
        db = C.apply_d(m, form).project(p, q + 1)
        dd = C.apply_d(m, db).project(p + 1, q + 1)
        dst = C.apply_d(m, C.star(m, form))
        return [dd, dst.project(sp + 1, sq), dst.project(sp, sq + 1)]
    raise ValueError("unknown system %r" % system)


def system_reach(m, system):
    """Maximal total mode displacement of any row of the system."""
    order = 2 if system in ("bc", "aeppli") else 1
    return order * m.max_shift()


def _unknown_basis(m, system, bidegree):
    if system == "asd":
        if bidegree is not None:
            raise ValueError("asd solves the full degree-2 space; bidegree must be None")
        out = []
        for p in range(m.n + 1):
            q = 2 - p
            if 0 <= q <= m.n:
                out.extend(all_basis(m.n, p, q))
        return sorted(out)
    p, q = bidegree
    return all_basis(m.n, p, q)


# ---------------------------------------------------------------------------
# Mode classes
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ModeClass:
    """Modes coupled by derivation shifts within the box, and its interior."""

    modes: tuple
    interior: tuple


def mode_classes(m, box, margin=None):
    """Partition the mode box |kappa|_inf <= box into shift-coupled classes.

    margin must cover the worst system-row reach (2 x max single shift); the
    interior of a class is its modes at distance >= margin from the boundary.
    """
    required = 2 * m.max_shift()
    if margin is None:
        margin = required
    if margin < required:
        raise ValueError("margin %d too small: need at least %d" % (margin, required))
    dims = m.fourier_dims
    shifts = set()
    for rules in m.derivations.values():
        for shift, _ in rules:
            if any(shift):
                shifts.add(shift)
                shifts.add(tuple(-s for s in shift))
    all_modes = sorted(product(range(-box, box + 1), repeat=dims))
    if not shifts:
        ilim = box - margin
        return [
            ModeClass((k,), (k,) if max(map(abs, k), default=0) <= ilim else ())
            for k in all_modes
        ]
    seen = set()
    classes = []
    ilim = box - margin
    modeset = set(all_modes)
    for start in all_modes:
        if start in seen:
            continue
        comp = [start]
        seen.add(start)
        stack = [start]
        while stack:
            cur = stack.pop()
            for s in shifts:
                nxt = tuple(a + b for a, b in zip(cur, s))
                if nxt in modeset and nxt not in seen:
                    seen.add(nxt)
                    comp.append(nxt)
                    stack.append(nxt)
        comp.sort()
        interior = tuple(k for k in comp if max(map(abs, k), default=0) <= ilim)
        classes.append(ModeClass(tuple(comp), interior))
    classes.sort(key=lambda c: c.modes[0])
    return classes


# ---------------------------------------------------------------------------
# Assembly and exact nullspace
# ---------------------------------------------------------------------------

@dataclass
class AssembledSystem:
    system: str
    bidegree: object
    cols: list  # (mode, BasisIndex) unknown labels, lexicographic
    rows: list  # sparse rows {col_index: Scalar}
    row_labels: list  # (block, mode, BasisIndex)

    def residual(self, vec):
        """Row sums of the matrix applied to a coefficient vector."""
        out = []
        for row in self.rows:
            acc = ZERO
            for ci, a in row.items():
                acc = acc + a * vec[ci]
            out.append(acc)
        return out


def assemble(m, system, bidegree, cls, support=None):
    """Exact matrix whose nullspace is the system solutions supported on the class.

    All output rows are kept (including modes the shifts push beyond the
    support), so kernel vectors are genuine solutions on the model."""
    if system not in SYSTEMS:
        raise ValueError("unknown system %r" % system)
    modes = sorted(support if support is not None else cls.modes)
    basis = _unknown_basis(m, system, bidegree)
    cols = [(k, b) for k in modes for b in basis]
    colidx = {cb: i for i, cb in enumerate(cols)}
    rowmap = {}
    for (k, b), ci in colidx.items():
        gen = Form.generator(b.I, b.J, TrigPoly.character(k))
        outs = _system_apply(m, system, None if system == "asd" else bidegree, gen)
        for block, outf in enumerate(outs):
            for ob, tp in outf.coeffs.items():
                for ok, val in tp.terms.items():
                    rowmap.setdefault((block, ok, ob), {})[ci] = val
    labels = sorted(rowmap)
    rows = [rowmap[lab] for lab in labels]
    return AssembledSystem(system, bidegree, cols, rows, labels)


def nullspace(matrix, ncols=None):
    """Exact reduced-echelon kernel basis of a matrix over Scalars.

    Accepts dense rows (lists) or sparse rows (dicts).  Deterministic:
    first-nonzero pivoting over lexicographic column order; each basis vector
    is rescaled so its first nonzero coordinate is 1."""
    rows = []
    for row in matrix:
        if isinstance(row, dict):
            rows.append({c: v for c, v in row.items() if v})
        else:
            if ncols is None:
                ncols = len(row)
            rows.append({c: v for c, v in enumerate(row) if v})
    if ncols is None:
        raise ValueError("ncols required for sparse input")
    # sparsest rows first keeps fill-in low; the reduced echelon form (and
    # hence the kernel basis) is unique, so the result is order-independent
    rows.sort(key=len)
    pivots = rref_rows(rows, ncols)
    pivot_cols = [c for _, c in pivots]
    pivot_set = set(pivot_cols)
    basis = []
    for free in range(ncols):
        if free in pivot_set:
            continue
        vec = [ZERO] * ncols
        vec[free] = ONE
        for r, c in pivots:
            coeff = rows[r].get(free)
            if coeff:
                vec[c] = -coeff
        lead = next(v for v in vec if v)
        if lead.a != lead.d or lead.b != 0:
            vec = [v / lead for v in vec]
        basis.append(vec)
    return basis


def _kernel_trivial(m, system, bidegree, mode):
    """Fast check that the per-mode system has only the zero solution."""
    asys = assemble(m, system, bidegree, ModeClass((mode,), (mode,)))
    work = [dict(r) for r in asys.rows]
    return len(rref_rows(work, len(asys.cols))) == len(asys.cols)


# ---------------------------------------------------------------------------
# Forms <-> coefficient vectors
# ---------------------------------------------------------------------------

def _forms_support(forms):
    coords = set()
    for f in forms:
        for b, tp in f.coeffs.items():
            for k in tp.terms:
                coords.add((k, b))
    return sorted(coords)


def _form_to_vec(f, colidx):
    vec = {}
    for b, tp in f.coeffs.items():
        for k, v in tp.terms.items():
            vec[colidx[(k, b)]] = v
    return vec


def _vec_to_form(cols, vec):
    acc = {}
    for ci, v in (vec.items() if isinstance(vec, dict) else enumerate(vec)):
        if not v:
            continue
        k, b = cols[ci]
        acc.setdefault(b, {})[k] = v
    out = Form.__new__(Form)
    out.coeffs = {}
    for b, terms in acc.items():
        tp = TrigPoly.__new__(TrigPoly)
        tp.terms = terms
        out.coeffs[b] = tp
    return out


def canonical_span_basis(forms):
    """Deterministic reduced-echelon basis of the span of the given forms."""
    forms = [f for f in forms if not f.is_zero()]
    if not forms:
        return []
    cols = _forms_support(forms)
    colidx = {cb: i for i, cb in enumerate(cols)}
    rows = [_form_to_vec(f, colidx) for f in forms]
    rref_rows(rows, len(cols))
    return [_vec_to_form(cols, r) for r in rows if r]


def span_rank(forms, extra=None):
    forms = [f for f in forms if not f.is_zero()]
    if extra:
        forms = forms + [f for f in extra if not f.is_zero()]
    if not forms:
        return 0
    cols = _forms_support(forms)
    colidx = {cb: i for i, cb in enumerate(cols)}
    rows = [_form_to_vec(f, colidx) for f in forms]
    return len(rref_rows(rows, len(cols)))


# ---------------------------------------------------------------------------
# Deck filtering
# ---------------------------------------------------------------------------

def deck_project(m, forms):
    """Intersect the span of the given solutions with the deck-invariant subspace.

    Parity rules kill coefficients at modes violating the congruence; an
    involution rule enforces c_kappa = (-1)^{phase(kappa)} c_{A kappa}.
    Dimension never increases; with no deck rules this is the identity."""
    forms = [f for f in forms if not f.is_zero()]
    if not m.decks or not forms:
        return list(forms)
    cols = _forms_support(forms)
    colidx = {cb: i for i, cb in enumerate(cols)}
    vecs = [_form_to_vec(f, colidx) for f in forms]
    constraints = []
    for rule in m.decks:
        if isinstance(rule, ParityRule):
            for ci, (k, _b) in enumerate(cols):
                if k[rule.index] % rule.modulus != 0:
                    constraints.append({ci: ONE})
        elif isinstance(rule, InvolutionRule):
            for ci, (k, b) in enumerate(cols):
                ak = rule.apply(k)
                phase = ONE if rule.phase(k) % 2 == 0 else -ONE
                if ak == k:
                    if phase != ONE:
                        constraints.append({ci: ONE})
                    continue
                pj = colidx.get((ak, b))
                if pj is None:
                    constraints.append({ci: ONE})
                elif ci < pj:
                    constraints.append({ci: ONE, pj: -phase})
        else:
            raise ValueError("unknown deck rule %r" % (rule,))
    if not constraints:
        return list(forms)
    # rows of (constraint matrix) x (solution matrix): combos in the span
    crows = []
    for con in constraints:
        row = {}
        for j, vec in enumerate(vecs):
            acc = ZERO
            for ci, cv in con.items():
                v = vec.get(ci)
                if v is not None:
                    acc = acc + cv * v
            if acc:
                row[j] = acc
        crows.append(row)
    combos = nullspace(crows, ncols=len(vecs))
    out = []
    for combo in combos:
        f = Form()
        for j, a in enumerate(combo):
            if a:
                f = f + forms[j].scale(a)
        if not f.is_zero():
            out.append(f)
    return out


# ---------------------------------------------------------------------------
# Top-level solves
# ---------------------------------------------------------------------------

@dataclass
class SolveReport:
    model: str
    delta: Fraction
    bidegree: object
    system: str
    box: int
    margin: int
    dimension: int
    basis: list
    certification: str
    sector: str
    scan_shells: object
    scan_clear: object
    elapsed_ms: int

    def to_dict(self):
        return {
            "model": self.model,
            "delta": "%d/%d" % (self.delta.numerator, self.delta.denominator)
            if self.delta.denominator != 1
            else str(self.delta.numerator),
            "bidegree": list(self.bidegree) if self.bidegree is not None else None,
            "system": self.system,
            "box": self.box,
            "margin": self.margin,
            "dimension": self.dimension,
            "certification": self.certification,
            "sector": self.sector,
            "scan_shells": list(self.scan_shells) if self.scan_shells else None,
            "scan_clear": self.scan_clear,
            "basis": [form_to_text(f) for f in self.basis],
            "elapsed_ms": self.elapsed_ms,
        }


def _shell(dims, radius):
    if radius == 0:
        yield (0,) * dims
        return
    for k in product(range(-radius, radius + 1), repeat=dims):
        if max(map(abs, k)) == radius:
            yield k


def _workers():
    try:
        return max(1, int(os.environ.get("AHODGE_THREADS", "1")))
    except ValueError:
        return 1


def _solve_classes(m, system, bidegree, classes):
    sols = []
    nworkers = _workers()
    work = [cls for cls in classes if cls.interior]
    if nworkers > 1 and len(work) > 8:
        from concurrent.futures import ProcessPoolExecutor

        payloads = [(m, system, bidegree, cls) for cls in work]
        with ProcessPoolExecutor(max_workers=nworkers) as ex:
            for vecs in ex.map(_class_kernel_payload, payloads, chunksize=32):
                sols.extend(vecs)
        return sols
    for cls in work:
        sols.extend(_class_kernel(m, system, bidegree, cls))
    return sols


def _class_kernel(m, system, bidegree, cls):
    asys = assemble(m, system, bidegree, cls, support=cls.interior)
    return [_vec_to_form(asys.cols, v) for v in nullspace(asys.rows, ncols=len(asys.cols))]


def _class_kernel_payload(payload):
    return _class_kernel(*payload)


def solve_harmonic(m, bidegree, system, box, margin=None, scan_extra=2):
    """Union of per-class filtered kernels over interior modes, deck-filtered.

    Certification is exact-decoupled only for shift-free models whose per-mode
    kernels are trivial on every scanned boundary shell; otherwise the
    dimension is an exact lower bound for the sector (box-lower-bound)."""
    t0 = time.perf_counter()
    if margin is None:
        margin = 2 * m.max_shift()
    classes = mode_classes(m, box, margin)
    sols = _solve_classes(m, system, bidegree, classes)
    filtered = deck_project(m, sols)
    basis = canonical_span_basis(filtered)

    certification = "box-lower-bound"
    scan_shells = None
    scan_clear = None
    if m.is_shift_free():
        hi = max(box + scan_extra, int(math.ceil(2 * abs(m.delta))) + scan_extra)
        scan_shells = (box + 1, hi)
        scan_clear = True
        for s in range(box + 1, hi + 1):
            for k in _shell(m.fourier_dims, s):
                if not _kernel_trivial(m, system, bidegree, k):
                    scan_clear = False
                    break
            if not scan_clear:
                break
        if scan_clear:
            certification = "exact-decoupled"
    elapsed = int((time.perf_counter() - t0) * 1000)
    return SolveReport(
        model=m.name,
        delta=Fraction(m.delta),
        bidegree=tuple(bidegree) if bidegree is not None else None,
        system=system,
        box=box,
        margin=margin,
        dimension=len(basis),
        basis=basis,
        certification=certification,
        sector=m.sector_note(),
        scan_shells=scan_shells,
        scan_clear=scan_clear,
        elapsed_ms=elapsed,
    )


def b_minus(m, box, margin=None):
    """Complex dimension of the harmonic anti-self-dual 2-form space."""
    if m.n != 2:
        raise ValueError("b_minus requires n = 2")
    return solve_harmonic(m, None, "asd", box, margin=margin)


def compare(m, bidegree, sys_a, sys_b, box, margin=None):
    """Exact span comparison of two harmonic systems within the sector.

    Returns (relation, witness, report_a, report_b) with relation one of
    'equal', 'A subset B', 'B subset A', 'incomparable'; the witness is a
    basis element of the larger space failing the smaller system."""
    ra = solve_harmonic(m, bidegree, sys_a, box, margin=margin)
    rb = solve_harmonic(m, bidegree, sys_b, box, margin=margin)
    rank_a = span_rank(ra.basis)
    rank_b = span_rank(rb.basis)
    rank_ab = span_rank(ra.basis, rb.basis)
    a_in_b = rank_ab == rank_b
    b_in_a = rank_ab == rank_a
    if a_in_b and b_in_a:
        return "equal", None, ra, rb
    if a_in_b:
        witness = _outside_witness(rb.basis, ra.basis)
        return "A subset B", witness, ra, rb
    if b_in_a:
        witness = _outside_witness(ra.basis, rb.basis)
        return "B subset A", witness, ra, rb
    return "incomparable", _outside_witness(rb.basis, ra.basis), ra, rb


def _outside_witness(big, small):
    base = span_rank(small)
    for f in big:
        if span_rank(small, [f]) > base:
            return f
    return None


def lefschetz11(m, phi):
    """Pointwise Lefschetz split of a (1,1)-form: phi = f omega + gamma with
    f = <phi, omega>/2 and gamma pointwise orthogonal to omega (hence ASD)."""
    if m.n != 2:
        raise ValueError("lefschetz11 requires n = 2")
    if phi.coeffs and phi.bidegree() != (1, 1):
        raise ValueError("lefschetz11 requires a (1,1)-form")
    f = inner(phi, m.metric.omega, m.metric.norms).scale(Scalar(Fraction(1, 2)))
    gamma = phi - m.metric.omega.mul_tp(f)
    return f, gamma


def circle_count(delta):
    """Lattice points on the circle m^2 + (l - delta)^2 = delta^2, scanning
    0 <= l <= 2 delta."""
    delta = Fraction(delta)
    if delta <= 0:
        raise ValueError("delta must be positive")
    points = []
    l = 0
    while l <= 2 * delta:
        v = l * (2 * delta - l)
        if v.denominator == 1:
            r = math.isqrt(v.numerator)
            if r * r == v.numerator:
                points.append((l, r))
                if r:
                    points.append((l, -r))
        l += 1
    points.sort()
    return len(points), points


def as_membership(m, alpha):
    """True iff mubar a = 0, delbar^2 a = 0, del^2 a = 0, mu a = 0 exactly."""
    if not alpha.is_homogeneous():
        raise ValueError("as_membership requires a bidegree-homogeneous form")
    if not C.component_any(m, alpha, "mubar").is_zero():
        return False
    if not C.component_any(m, C.component_any(m, alpha, "delbar"), "delbar").is_zero():
        return False
    if not C.component_any(m, C.component_any(m, alpha, "del"), "del").is_zero():
        return False
    return C.component_any(m, alpha, "mu").is_zero()


def bc_cap_as(m, bidegree, box, margin=None):
    """Filter the Bott-Chern harmonic basis by A_s membership (injection domain)."""
    rep = solve_harmonic(m, bidegree, "bc", box, margin=margin)
    return [f for f in rep.basis if as_membership(m, f)]
