"""Invariant almost-Hermitian models: coframe structure, frame action, decks, metric.

A model packages everything the differential operators need: how frame fields
act on Fourier characters (derivation rules), the exterior derivative of each
coframe generator (structure table), which character combinations descend to
the compact quotient (deck rules), and the metric data (squared norms of the
coframe generators, fundamental form, volume form).

Unit convention: every stored first-order quantity has one factor of pi
removed, so an operator of differential order r is pi^r times its stored
value.  Structure-table and derivation coefficients are affine in the model
parameter delta (for the Kodaira-Thurston family, delta = b / 8 pi).
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction

from .algebra import (
    ONE,
    SI,
    ZERO,
    Form,
    Scalar,
    TrigPoly,
    bidx,
    fmt_rat,
    fmt_scalar,
    form_from_text,
    form_to_text,
    l2_inner,
    inner,
    parse_rat,
    parse_scalar,
    random_form,
)

BUILTIN_NAMES = ("kt", "hyperelliptic", "torus4")


class ModelFormatError(ValueError):
    """Raised when a model document violates the schema; message names the field path."""


@dataclass(frozen=True)
class AffineScalar:
    """Scalar-valued affine form c0 + sum_j k[j] * kappa_j + cdelta * delta."""

    c0: Scalar
    k: tuple
    cdelta: Scalar

    def eval(self, mode, delta):
        v = self.c0
        for coeff, comp in zip(self.k, mode):
            if comp and coeff:
                v = v + coeff * comp
        if self.cdelta:
            v = v + self.cdelta * delta
        return v

    def is_zero(self):
        return not (self.c0 or self.cdelta or any(self.k))


@dataclass(frozen=True)
class ParityRule:
    index: int
    modulus: int = 2


@dataclass(frozen=True)
class InvolutionRule:
    """Mode involution kappa -> A kappa with phase factor (-1)^{phase(kappa)}."""

    matrix: tuple  # rows of an integer matrix with A @ A == identity
    phase_c0: int
    phase_k: tuple

    def apply(self, mode):
        return tuple(sum(r * c for r, c in zip(row, mode)) for row in self.matrix)

    def phase(self, mode):
        return self.phase_c0 + sum(a * c for a, c in zip(self.phase_k, mode))


@dataclass(frozen=True)
class MetricSpec:
    norms: tuple  # squared norm of each coframe generator, positive rational Scalars
    omega: Form
    volume: Form


@dataclass
class Model:
    name: str
    n: int
    fourier_dims: int
    char_base: Fraction
    delta: Fraction
    structure: dict  # generator index a -> list of (BasisIndex, AffineScalar)
    derivations: dict  # "V1".."Vn", "Vb1".."Vbn" -> list of (shift tuple, AffineScalar)
    decks: list
    metric: MetricSpec
    _dgen_cache: dict = field(default_factory=dict, repr=False, compare=False)
    _star_cache: dict = field(default_factory=dict, repr=False, compare=False)
    _frame_cache: dict = field(default_factory=dict, repr=False, compare=False)

    def __post_init__(self):
        self.char_base = Fraction(self.char_base)
        self.delta = Fraction(self.delta)

    def reset_caches(self):
        self._dgen_cache.clear()
        self._star_cache.clear()
        self._frame_cache.clear()

    def __getstate__(self):
        state = self.__dict__.copy()
        state["_dgen_cache"] = {}
        state["_star_cache"] = {}
        state["_frame_cache"] = {}
        return state

    # -- frame action ------------------------------------------------------

    def frame_fields(self):
        return ["V%d" % a for a in range(1, self.n + 1)] + [
            "Vb%d" % a for a in range(1, self.n + 1)
        ]

    def _frame_mode(self, fld, mode):
        """Action of a frame field on a single character, memoized per mode."""
        key = (fld, mode)
        got = self._frame_cache.get(key)
        if got is None:
            delta = self._delta_scalar
            got = []
            for shift, aff in self.derivations[fld]:
                c = aff.eval(mode, delta)
                if c:
                    got.append((tuple(a + b for a, b in zip(mode, shift)), c))
            got = tuple(got)
            self._frame_cache[key] = got
        return got

    def frame_apply(self, fld, tp):
        """Apply frame field to a TrigPoly; result is in pi-units."""
        out = {}
        for mode, v in tp.terms.items():
            for m2, c in self._frame_mode(fld, mode):
                cur = out.get(m2)
                nv = c * v if cur is None else cur + c * v
                if nv:
                    out[m2] = nv
                elif cur is not None:
                    del out[m2]
        res = TrigPoly.__new__(TrigPoly)
        res.terms = out
        return res

    @property
    def _delta_scalar(self):
        ds = self._frame_cache.get("__delta__")
        if ds is None:
            ds = Scalar(self.delta)
            self._frame_cache["__delta__"] = ds
        return ds

    def max_shift(self):
        """Largest single-step mode displacement of any derivation rule."""
        best = 0
        for rules in self.derivations.values():
            for shift, _ in rules:
                best = max(best, max((abs(s) for s in shift), default=0))
        return best

    # -- structure table ---------------------------------------------------

    def d_generator(self, a):
        """d(phi^a) as a constant-coefficient Form, pi-units."""
        f = Form()
        for b, aff in self.structure.get(a, []):
            c = aff.eval((0,) * self.fourier_dims, self._delta_scalar)
            if c:
                f = f + Form.generator(b.I, b.J, TrigPoly.constant(c, self.fourier_dims))
        return f

    def d_basis(self, b):
        """d of the canonical generator phi^I wedge phibar^J, by graded Leibniz (cached)."""
        got = self._dgen_cache.get(b)
        if got is not None:
            return got
        dims = self.fourier_dims

        def gen(kind, idx):
            if kind == "h":
                return Form.generator((idx,), (), dims=dims)
            return Form.generator((), (idx,), dims=dims)

        factors = [("h", i) for i in b.I] + [("a", j) for j in b.J]
        total = Form()
        for r, (kind, idx) in enumerate(factors):
            dfac = self.d_generator(idx) if kind == "h" else self.d_generator(idx).conj()
            if dfac.is_zero():
                continue
            piece = dfac
            for s in range(r - 1, -1, -1):
                piece = gen(*factors[s]).wedge(piece)
            for s in range(r + 1, len(factors)):
                piece = piece.wedge(gen(*factors[s]))
            if r & 1:
                piece = -piece
            total = total + piece
        self._dgen_cache[b] = total
        return total

    # -- misc --------------------------------------------------------------

    def is_shift_free(self):
        return self.max_shift() == 0

    def constant_form(self, value=ONE):
        return Form.generator((), (), TrigPoly.constant(value, self.fourier_dims))

    def character_form(self, mode, coeff=ONE):
        return Form.generator((), (), TrigPoly.character(mode, coeff))

    def sector_note(self):
        if self.name == "kt":
            return "characters in (t,x,y) only (z-frequency 0)"
        if self.name == "hyperelliptic":
            return "cover-torus characters exp(i*pi*<kappa,x>) filtered by deck rules"
        return "full invariant character lattice"

    def validate(self, samples=100, seed=0, box=2):
        from . import calculus  # local import: calculus duck-types the model

        return _validate(self, calculus, samples, seed, box)


# ---------------------------------------------------------------------------
# Built-in models
# ---------------------------------------------------------------------------

def _aff(c0=ZERO, k=None, cdelta=ZERO, dims=0):
    return AffineScalar(c0, tuple(k) if k else (ZERO,) * dims, cdelta)


def _const_form(entries, dims):
    f = Form()
    for I, J, c in entries:
        f = f + Form.generator(I, J, TrigPoly.constant(c, dims))
    return f


def builtin(name, delta=None):
    """Construct a built-in model; kt requires a nonzero rational delta."""
    if name == "kt":
        if delta is None or Fraction(delta) == 0:
            raise ValueError("kt requires delta != 0 (delta = b / 8 pi)")
        delta = Fraction(delta)
        dims = 3
        half = Scalar(Fraction(1, 2))
        derivations = {
            # V1 chi = (i k + l) chi, V2 chi = i m chi (pi-units); conjugate fields likewise
            "V1": [((0, 0, 0), _aff(k=(SI, ONE, ZERO)))],
            "V2": [((0, 0, 0), _aff(k=(ZERO, ZERO, SI)))],
            "Vb1": [((0, 0, 0), _aff(k=(SI, -ONE, ZERO)))],
            "Vb2": [((0, 0, 0), _aff(k=(ZERO, ZERO, SI)))],
        }
        two = Scalar(2)
        structure = {
            1: [],
            2: [
                (bidx((1, 2), ()), _aff(cdelta=two, dims=dims)),
                (bidx((1,), (2,)), _aff(cdelta=two, dims=dims)),
                (bidx((2,), (1,)), _aff(cdelta=two, dims=dims)),
                (bidx((), (1, 2)), _aff(cdelta=-two, dims=dims)),
            ],
        }
        metric = MetricSpec(
            norms=(ONE, ONE),
            omega=_const_form([((1,), (1,), SI), ((2,), (2,), SI)], dims),
            volume=_const_form([((1, 2), (1, 2), ONE)], dims),
        )
        return Model("kt", 2, dims, Fraction(2), delta, structure, derivations, [], metric)

    if name == "torus4":
        dims = 4
        derivations = {
            "V1": [((0, 0, 0, 0), _aff(k=(SI, ONE, ZERO, ZERO)))],
            "V2": [((0, 0, 0, 0), _aff(k=(ZERO, ZERO, SI, ONE)))],
            "Vb1": [((0, 0, 0, 0), _aff(k=(SI, -ONE, ZERO, ZERO)))],
            "Vb2": [((0, 0, 0, 0), _aff(k=(ZERO, ZERO, SI, -ONE)))],
        }
        metric = MetricSpec(
            norms=(ONE, ONE),
            omega=_const_form([((1,), (1,), SI), ((2,), (2,), SI)], dims),
            volume=_const_form([((1, 2), (1, 2), ONE)], dims),
        )
        return Model(
            "torus4", 2, dims, Fraction(2), Fraction(0), {1: [], 2: []}, derivations, [], metric
        )

    if name == "hyperelliptic":
        dims = 4
        q = Fraction(1, 4)
        i4 = Scalar(0, q)  # i/4
        r4 = Scalar(q)  # 1/4
        h = Scalar(Fraction(1, 2))
        up = (0, 0, 1, 0)
        dn = (0, 0, -1, 0)
        z4 = (0, 0, 0, 0)
        derivations = {
            # V1 chi = (ik+l)/4 chi_{m+1} + (ik-l)/4 chi_{m-1} + (m/2) chi
            "V1": [
                (up, _aff(k=(i4, r4, ZERO, ZERO))),
                (dn, _aff(k=(i4, -r4, ZERO, ZERO))),
                (z4, _aff(k=(ZERO, ZERO, h, ZERO))),
            ],
            # V2 chi = (il-k)/4 chi_{m+1} + (il+k)/4 chi_{m-1} + (n/2) chi
            "V2": [
                (up, _aff(k=(-r4, i4, ZERO, ZERO))),
                (dn, _aff(k=(r4, i4, ZERO, ZERO))),
                (z4, _aff(k=(ZERO, ZERO, ZERO, h))),
            ],
            "Vb1": [
                (up, _aff(k=(i4, r4, ZERO, ZERO))),
                (dn, _aff(k=(i4, -r4, ZERO, ZERO))),
                (z4, _aff(k=(ZERO, ZERO, -h, ZERO))),
            ],
            "Vb2": [
                (up, _aff(k=(-r4, i4, ZERO, ZERO))),
                (dn, _aff(k=(r4, i4, ZERO, ZERO))),
                (z4, _aff(k=(ZERO, ZERO, ZERO, -h))),
            ],
        }
        i4s = Scalar(0, Fraction(1, 4))
        structure = {
            # d phi^1 = (i/4)(-phi^12 - phi^{1 2b} - phi^{2 1b} + phi^{1b 2b})
            1: [
                (bidx((1, 2), ()), _aff(c0=-i4s, dims=dims)),
                (bidx((1,), (2,)), _aff(c0=-i4s, dims=dims)),
                (bidx((2,), (1,)), _aff(c0=-i4s, dims=dims)),
                (bidx((), (1, 2)), _aff(c0=i4s, dims=dims)),
            ],
            # d phi^2 = (i/2) phi^{1 1b}
            2: [(bidx((1,), (1,)), _aff(c0=Scalar(0, Fraction(1, 2)), dims=dims))],
        }
        metric = MetricSpec(
            norms=(Scalar(2), Scalar(2)),
            omega=_const_form(
                [((1,), (1,), Scalar(0, Fraction(1, 2))), ((2,), (2,), Scalar(0, Fraction(1, 2)))],
                dims,
            ),
            volume=_const_form([((1, 2), (1, 2), Scalar(Fraction(1, 4)))], dims),
        )
        decks = [
            ParityRule(0),
            ParityRule(1),
            ParityRule(3),
            InvolutionRule(
                matrix=((-1, 0, 0, 0), (0, -1, 0, 0), (0, 0, 1, 0), (0, 0, 0, 1)),
                phase_c0=0,
                phase_k=(0, 0, 1, 0),
            ),
        ]
        return Model(
            "hyperelliptic", 2, dims, Fraction(1), Fraction(0), structure, derivations, decks, metric
        )

    raise ValueError("unknown builtin model %r (expected one of %s)" % (name, ", ".join(BUILTIN_NAMES)))


def conformal_scale(m, lam):
    """Metric scaled by the positive rational lambda: coframe norms divide by
    lambda, omega scales by lambda, volume by lambda^n."""
    lam = Fraction(lam)
    if lam <= 0:
        raise ValueError("conformal factor must be positive")
    ls = Scalar(lam)
    vols = ls
    for _ in range(m.n - 1):
        vols = vols * ls
    metric = MetricSpec(
        norms=tuple(g / ls for g in m.metric.norms),
        omega=m.metric.omega.scale(ls),
        volume=m.metric.volume.scale(vols),
    )
    return Model(
        m.name, m.n, m.fourier_dims, m.char_base, m.delta, m.structure, m.derivations,
        list(m.decks), metric,
    )


# ---------------------------------------------------------------------------
# Model document (exact JSON) encoding
# ---------------------------------------------------------------------------

def _basis_str(b):
    return "%s;%s" % (",".join(str(i) for i in b.I), ",".join(str(j) for j in b.J))


def _affine_doc(aff):
    return {
        "c0": fmt_scalar(aff.c0),
        "k": [fmt_scalar(c) for c in aff.k],
        "cdelta": fmt_scalar(aff.cdelta),
    }


def model_to_document(m):
    """Exact JSON-ready document; deterministic field order."""
    return {
        "name": m.name,
        "n": m.n,
        "fourier_dims": m.fourier_dims,
        "char_base": fmt_rat(m.char_base),
        "delta": fmt_rat(m.delta),
        "structure": [
            {
                "gen": a,
                "terms": [
                    {"basis": _basis_str(b), "coeff": {"c0": fmt_scalar(aff.c0), "cdelta": fmt_scalar(aff.cdelta)}}
                    for b, aff in m.structure.get(a, [])
                ],
            }
            for a in range(1, m.n + 1)
        ],
        "derivations": [
            {
                "field": fld,
                "rules": [
                    {"shift": list(shift), "affine": _affine_doc(aff)}
                    for shift, aff in m.derivations[fld]
                ],
            }
            for fld in m.frame_fields()
        ],
        "decks": [
            {"kind": "parity", "index": r.index, "modulus": r.modulus}
            if isinstance(r, ParityRule)
            else {
                "kind": "involution",
                "matrix": [list(row) for row in r.matrix],
                "phase": {"c0": r.phase_c0, "k": list(r.phase_k)},
            }
            for r in m.decks
        ],
        "metric": {
            "norms": [fmt_scalar(g) for g in m.metric.norms],
            "omega": form_to_text(m.metric.omega),
            "volume": form_to_text(m.metric.volume),
        },
    }


def model_to_json(m):
    return json.dumps(model_to_document(m), indent=1)


def _need(doc, key, path):
    if not isinstance(doc, dict) or key not in doc:
        raise ModelFormatError("%s.%s: missing" % (path, key) if path else "%s: missing" % key)
    return doc[key]


def _exact_number(v, path):
    if isinstance(v, bool) or isinstance(v, float):
        raise ModelFormatError("%s: non-rational numeral %r (use \"p/q\" strings)" % (path, v))
    if isinstance(v, int):
        return Fraction(v)
    if isinstance(v, str):
        try:
            return parse_rat(v)
        except (ValueError, ZeroDivisionError):
            raise ModelFormatError("%s: malformed rational %r" % (path, v)) from None
    raise ModelFormatError("%s: expected rational, got %r" % (path, v))


def _exact_scalar(v, path):
    if isinstance(v, bool) or isinstance(v, float):
        raise ModelFormatError("%s: non-rational numeral %r" % (path, v))
    if isinstance(v, int):
        return Scalar(v)
    if isinstance(v, str):
        try:
            return parse_scalar(v)
        except (ValueError, ZeroDivisionError):
            raise ModelFormatError("%s: malformed scalar %r" % (path, v)) from None
    raise ModelFormatError("%s: expected scalar string, got %r" % (path, v))


def _exact_int(v, path):
    if isinstance(v, bool) or not isinstance(v, int):
        raise ModelFormatError("%s: expected integer, got %r" % (path, v))
    return v


def _parse_basis(s, path):
    if not isinstance(s, str) or ";" not in s:
        raise ModelFormatError("%s: expected \"I;J\" string" % path)
    si, sj = s.split(";", 1)
    try:
        I = tuple(int(c) for c in si.split(",") if c != "")
        J = tuple(int(c) for c in sj.split(",") if c != "")
        return bidx(I, J)
    except ValueError as e:
        raise ModelFormatError("%s: %s" % (path, e)) from None


def load_model(document):
    """Parse a model document (already-decoded JSON).  validate() is NOT run."""
    name = _need(document, "name", "")
    n = _exact_int(_need(document, "n", ""), "n")
    dims = _exact_int(_need(document, "fourier_dims", ""), "fourier_dims")
    char_base = _exact_number(_need(document, "char_base", ""), "char_base")
    delta = _exact_number(_need(document, "delta", ""), "delta")

    structure = {}
    for gi, gdoc in enumerate(_need(document, "structure", "")):
        path = "structure[%d]" % gi
        a = _exact_int(_need(gdoc, "gen", path), path + ".gen")
        if not (1 <= a <= n):
            raise ModelFormatError("%s.gen: out of range" % path)
        terms = []
        for ti, tdoc in enumerate(_need(gdoc, "terms", path)):
            tpath = "%s.terms[%d]" % (path, ti)
            b = _parse_basis(_need(tdoc, "basis", tpath), tpath + ".basis")
            cdoc = _need(tdoc, "coeff", tpath)
            c0 = _exact_scalar(_need(cdoc, "c0", tpath + ".coeff"), tpath + ".coeff.c0")
            cd = _exact_scalar(_need(cdoc, "cdelta", tpath + ".coeff"), tpath + ".coeff.cdelta")
            terms.append((b, AffineScalar(c0, (ZERO,) * dims, cd)))
        structure[a] = terms
    for a in range(1, n + 1):
        structure.setdefault(a, [])

    derivations = {}
    for di, ddoc in enumerate(_need(document, "derivations", "")):
        path = "derivations[%d]" % di
        fld = _need(ddoc, "field", path)
        rules = []
        for ri, rdoc in enumerate(_need(ddoc, "rules", path)):
            rpath = "%s.rules[%d]" % (path, ri)
            shift = _need(rdoc, "shift", rpath)
            if not isinstance(shift, list) or len(shift) != dims:
                raise ModelFormatError("%s.shift: expected %d integers" % (rpath, dims))
            shift = tuple(_exact_int(s, rpath + ".shift") for s in shift)
            adoc = _need(rdoc, "affine", rpath)
            c0 = _exact_scalar(_need(adoc, "c0", rpath + ".affine"), rpath + ".affine.c0")
            kl = _need(adoc, "k", rpath + ".affine")
            if not isinstance(kl, list) or len(kl) != dims:
                raise ModelFormatError("%s.affine.k: expected %d scalars" % (rpath, dims))
            k = tuple(_exact_scalar(c, rpath + ".affine.k") for c in kl)
            cd = _exact_scalar(_need(adoc, "cdelta", rpath + ".affine"), rpath + ".affine.cdelta")
            rules.append((shift, AffineScalar(c0, k, cd)))
        derivations[fld] = rules
    expected = set(
        ["V%d" % a for a in range(1, n + 1)] + ["Vb%d" % a for a in range(1, n + 1)]
    )
    missing = expected - set(derivations)
    if missing:
        raise ModelFormatError("derivations: missing field(s) %s" % ", ".join(sorted(missing)))

    decks = []
    for ki, kdoc in enumerate(_need(document, "decks", "")):
        path = "decks[%d]" % ki
        kind = _need(kdoc, "kind", path)
        if kind == "parity":
            idx = _exact_int(_need(kdoc, "index", path), path + ".index")
            mod = _exact_int(_need(kdoc, "modulus", path), path + ".modulus")
            if not (0 <= idx < dims) or mod < 2:
                raise ModelFormatError("%s: bad parity rule" % path)
            decks.append(ParityRule(idx, mod))
        elif kind == "involution":
            mat = _need(kdoc, "matrix", path)
            if not isinstance(mat, list) or len(mat) != dims:
                raise ModelFormatError("%s.matrix: expected %dx%d integers" % (path, dims, dims))
            matrix = tuple(
                tuple(_exact_int(c, path + ".matrix") for c in row) for row in mat
            )
            # involution consistency: A A = id
            for i in range(dims):
                for j in range(dims):
                    acc = sum(matrix[i][t] * matrix[t][j] for t in range(dims))
                    if acc != (1 if i == j else 0):
                        raise ModelFormatError("%s.matrix: not an involution" % path)
            pdoc = _need(kdoc, "phase", path)
            pc0 = _exact_int(_need(pdoc, "c0", path + ".phase"), path + ".phase.c0")
            pkl = _need(pdoc, "k", path + ".phase")
            if not isinstance(pkl, list) or len(pkl) != dims:
                raise ModelFormatError("%s.phase.k: expected %d integers" % (path, dims))
            pk = tuple(_exact_int(c, path + ".phase.k") for c in pkl)
            rule = InvolutionRule(matrix, pc0, pk)
            # phase consistency: (-1)^(phase(kappa) + phase(A kappa)) == 1, affine => check parity of c0*2 and k + A^T k
            for j in range(dims):
                col = sum(pk[i] * matrix[i][j] for i in range(dims))
                if (pk[j] + col) % 2 != 0:
                    raise ModelFormatError("%s.phase: inconsistent with involution" % path)
            decks.append(rule)
        else:
            raise ModelFormatError("%s.kind: unknown deck kind %r" % (path, kind))

    mdoc = _need(document, "metric", "")
    norms_doc = _need(mdoc, "norms", "metric")
    if not isinstance(norms_doc, list) or len(norms_doc) != n:
        raise ModelFormatError("metric.norms: expected %d entries" % n)
    norms = tuple(_exact_scalar(v, "metric.norms") for v in norms_doc)
    for g in norms:
        if g.im != 0 or g.re <= 0:
            raise ModelFormatError("metric.norms: entries must be positive rationals")
    try:
        omega = form_from_text(_need(mdoc, "omega", "metric"), dims)
        volume = form_from_text(_need(mdoc, "volume", "metric"), dims)
    except ValueError as e:
        raise ModelFormatError("metric: %s" % e) from None

    return Model(
        str(name), n, dims, char_base, delta, structure, derivations, decks,
        MetricSpec(norms, omega, volume),
    )


# ---------------------------------------------------------------------------
# Validation
# ---------------------------------------------------------------------------

@dataclass
class ValidationReport:
    model: str
    checks: list  # of (name, ok: bool, detail: str)

    @property
    def ok(self):
        return all(ok for _, ok, _ in self.checks)

    def failures(self):
        return [(name, detail) for name, ok, detail in self.checks if not ok]


_RELATIONS = [
    ("mu mu", [("mu", "mu")]),
    ("mu del + del mu", [("mu", "del"), ("del", "mu")]),
    ("del del + mu delbar + delbar mu", [("del", "del"), ("mu", "delbar"), ("delbar", "mu")]),
    (
        "del delbar + delbar del + mu mubar + mubar mu",
        [("del", "delbar"), ("delbar", "del"), ("mu", "mubar"), ("mubar", "mu")],
    ),
    ("delbar delbar + mubar del + del mubar", [("delbar", "delbar"), ("mubar", "del"), ("del", "mubar")]),
    ("mubar delbar + delbar mubar", [("mubar", "delbar"), ("delbar", "mubar")]),
    ("mubar mubar", [("mubar", "mubar")]),
]


def _validate(m, calculus, samples, seed, box):
    import itertools
    import random

    checks = []

    # (a) d o d = 0 on generators and on characters
    bad = []
    for a in range(1, m.n + 1):
        for gen in (
            Form.generator((a,), (), dims=m.fourier_dims),
            Form.generator((), (a,), dims=m.fourier_dims),
        ):
            dd = calculus.apply_d(m, calculus.apply_d(m, gen))
            if not dd.is_zero():
                bad.append(form_to_text(gen))
    for mode in itertools.product(range(-box, box + 1), repeat=m.fourier_dims):
        chi = m.character_form(mode)
        dd = calculus.apply_d(m, calculus.apply_d(m, chi))
        if not dd.is_zero():
            bad.append(form_to_text(chi))
            break
    checks.append(("d2_zero", not bad, "; ".join(bad[:3])))

    # (b) the seven component relations on seeded random homogeneous forms
    rng = random.Random(seed)
    bad = []
    for _ in range(samples):
        p = rng.randint(0, m.n)
        q = rng.randint(0, m.n)
        alpha = random_form(rng, m.n, m.fourier_dims, p, q)
        for relname, pairs in _RELATIONS:
            acc = Form()
            for first, second in pairs:
                acc = acc + calculus.component_any(m, calculus.component_any(m, alpha, second), first)
            if not acc.is_zero():
                bad.append("%s on %s" % (relname, form_to_text(alpha)))
                break
        if bad:
            break
    checks.append(("component_relations", not bad, "; ".join(bad)))

    # (c) metric consistency: <omega, omega> = n and omega^n / n! = vol
    om = m.metric.omega
    ip = inner(om, om, m.metric.norms)
    want = TrigPoly.constant(Scalar(m.n), m.fourier_dims)
    ok1 = ip == want
    pw = om
    fact = 1
    for k in range(2, m.n + 1):
        pw = pw.wedge(om)
        fact *= k
    ok2 = pw.scale(Scalar(Fraction(1, fact))) == m.metric.volume
    checks.append(("metric_omega_norm", ok1, "" if ok1 else "<omega,omega> != n"))
    checks.append(("metric_volume", ok2, "" if ok2 else "omega^n/n! != vol"))

    # (d) adjointness of d against the star-adjoint on seeded random pairs
    rng = random.Random(seed + 1)
    bad = []
    for _ in range(samples):
        p = rng.randint(0, m.n)
        q = rng.randint(0, m.n)
        alpha = random_form(rng, m.n, m.fourier_dims, p, q)
        choices = [(p2, q2) for p2, q2 in ((p + 1, q), (p, q + 1), (p + 2, q - 1), (p - 1, q + 2))
                   if 0 <= p2 <= m.n and 0 <= q2 <= m.n]
        if not choices:
            continue
        p2, q2 = choices[rng.randrange(len(choices))]
        beta = random_form(rng, m.n, m.fourier_dims, p2, q2)
        lhs = l2_inner(calculus.apply_d(m, alpha), beta, m.metric.norms)
        rhs = l2_inner(alpha, calculus.adjoint(m, beta, "d_star"), m.metric.norms)
        if lhs != rhs:
            bad.append(form_to_text(alpha))
            break
    checks.append(("adjointness", not bad, "; ".join(bad)))

    return ValidationReport(m.name, checks)


def resolve_model(spec, delta=None):
    """CLI helper: builtin name or a JSON document path."""
    if spec in BUILTIN_NAMES:
        return builtin(spec, delta)
    with open(spec, "r", encoding="utf-8") as fh:
        try:
            doc = json.load(fh)
        except json.JSONDecodeError as e:
            raise ModelFormatError("not valid JSON: %s" % e) from None
    m = load_model(doc)
    if delta is not None and Fraction(delta) != m.delta:
        # re-evaluate the document's affine data at the requested parameter
        m.delta = Fraction(delta)
        m.reset_caches()
    return m
