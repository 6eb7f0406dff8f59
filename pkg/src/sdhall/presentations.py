"""Quantum Borcherds-Bozec and quantum generalized Kac-Moody presentations.

Relations are kept as formal combinations of generator words with
coefficients in Q(v).  They are verified through their images in the
semi-derived Hall algebra: Phi (nilpotent mode, generators e_il, f_il) and
Psi (modified mode, generators E_ik, F_ik).
"""
from __future__ import annotations

import itertools
import time
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping, Sequence

from .quiver import BorcherdsCartan, Quiver
from .scalars import PoleError, RationalFunction, eval_at_sqrt_q, q_binomial, tau
from .sdh import SDHContext, SDHElement

GEN_KINDS = ("K", "Kinv", "Kp", "Kpinv", "e", "f", "E", "F")


class PresentationError(ValueError):
    pass


@dataclass(frozen=True, order=True)
class Generator:
    kind: str
    vertex: object
    level: int = 0

    def __post_init__(self):
        if self.kind not in GEN_KINDS:
            raise PresentationError("unknown generator kind %r" % self.kind)
        if self.kind in ("e", "f", "E", "F") and self.level < 1:
            raise PresentationError("%s needs a positive level" % self.kind)

    def __str__(self):
        if self.kind in ("e", "f", "E", "F"):
            return "%s[%s,%d]" % (self.kind, self.vertex, self.level)
        return "%s[%s]" % (self.kind, self.vertex)


def K(i):
    return Generator("K", i)


def Kinv(i):
    return Generator("Kinv", i)


def Kp(i):
    return Generator("Kp", i)


def Kpinv(i):
    return Generator("Kpinv", i)


class QAlgebraElement:
    """Element of the free algebra on generators over Q(v)."""

    __slots__ = ("terms",)

    def __init__(self, terms: Mapping[tuple, object] | None = None):
        out = {}
        for w, c in (terms or {}).items():
            c = c if isinstance(c, RationalFunction) else RationalFunction.const(c)
            if not c.is_zero():
                out[tuple(w)] = c
        self.terms = out

    @classmethod
    def word(cls, *gens: Generator, coeff=1) -> "QAlgebraElement":
        return cls({tuple(gens): coeff})

    @classmethod
    def one(cls) -> "QAlgebraElement":
        return cls({(): 1})

    def __add__(self, other: "QAlgebraElement") -> "QAlgebraElement":
        out = dict(self.terms)
        for w, c in other.terms.items():
            out[w] = out[w] + c if w in out else c
        return QAlgebraElement(out)

    def __neg__(self):
        return QAlgebraElement({w: -c for w, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, QAlgebraElement):
            out: dict = {}
            for w1, c1 in self.terms.items():
                for w2, c2 in other.terms.items():
                    w = w1 + w2
                    out[w] = out[w] + c1 * c2 if w in out else c1 * c2
            return QAlgebraElement(out)
        return QAlgebraElement({w: c * other for w, c in self.terms.items()})

    def __rmul__(self, other):
        return QAlgebraElement({w: other * c for w, c in self.terms.items()})

    def __pow__(self, n: int):
        out = QAlgebraElement.one()
        for _ in range(n):
            out = out * self
        return out

    def __eq__(self, other):
        return isinstance(other, QAlgebraElement) and self.terms == other.terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def sorted_terms(self):
        return sorted(self.terms.items(), key=lambda wc: [(g.kind, str(g.vertex), g.level) for g in wc[0]])

    def __str__(self):
        if not self.terms:
            return "0"
        parts = []
        for w, c in self.sorted_terms():
            word = " ".join(str(g) for g in w) or "1"
            parts.append("(%s) %s" % (c, word))
        return " + ".join(parts)

    __repr__ = __str__


def _gen(kind, i, l=0) -> QAlgebraElement:
    return QAlgebraElement.word(Generator(kind, i, l))


@dataclass
class Relation:
    id: str
    lhs: QAlgebraElement
    rhs: QAlgebraElement
    params: dict = field(default_factory=dict)
    note: str = ""

    def residual(self) -> QAlgebraElement:
        return self.lhs - self.rhs

    def key(self) -> tuple:
        return (self.id, tuple(sorted((k, str(v)) for k, v in self.params.items())))

    def describe(self) -> dict:
        return {
            "id": self.id,
            "params": {k: (v if isinstance(v, int) else str(v)) for k, v in sorted(self.params.items())},
            "lhs": str(self.lhs),
            "rhs": str(self.rhs),
            "note": self.note,
        }


def _vp(n: int) -> RationalFunction:
    return RationalFunction.v_power(n)


def _qbin(n: int, k: int) -> RationalFunction:
    return RationalFunction(q_binomial(n, k))


def _torus_relations(A: BorcherdsCartan) -> list[Relation]:
    one = QAlgebraElement.one()
    rels = []
    for i in A.vertices:
        for g, gi, name in ((K(i), Kinv(i), "K-inverse"), (Kp(i), Kpinv(i), "Kp-inverse")):
            rels.append(Relation(name, QAlgebraElement.word(g, gi), one, {"i": i, "side": "right"}))
            rels.append(Relation(name, QAlgebraElement.word(gi, g), one, {"i": i, "side": "left"}))
    for i, j in itertools.product(A.vertices, repeat=2):
        for a, b, name in ((K(i), K(j), "K-K"), (K(i), Kp(j), "K-Kp"), (Kp(i), Kp(j), "Kp-Kp")):
            rels.append(Relation(name, QAlgebraElement.word(a, b), QAlgebraElement.word(b, a), {"i": i, "j": j}))
    return rels


def _weight_relations(A: BorcherdsCartan, gens: Sequence[tuple], up: str, down: str, scale) -> list[Relation]:
    """K_i x = v^{+-s a_ij} x K_i for raising (up) and lowering (down) generators."""
    rels = []
    for i in A.vertices:
        for j, l in gens:
            s = scale(l)
            a = A.a(i, j)
            for kk, name_k, sign in ((K(i), "K", 1), (Kp(i), "Kp", -1)):
                for kind, sg in ((up, 1), (down, -1)):
                    x = Generator(kind, j, l)
                    rels.append(Relation(
                        "%s-%s" % (name_k, kind),
                        QAlgebraElement.word(kk, x),
                        QAlgebraElement.word(x, kk, coeff=_vp(sign * sg * s * a)),
                        {"i": i, "j": j, "l": l},
                    ))
    return rels


def _serre(A: BorcherdsCartan, kind: str, i, ki: int, j, l: int, a_mult: int) -> Relation:
    """sum_n (-1)^n [N choose n] x_i^{N-n} x_jl x_i^n = 0 with N = 1 - a_mult a_ij."""
    N = 1 - a_mult * A.a(i, j)
    xi = _gen(kind, i, ki)
    xj = _gen(kind, j, l)
    total = QAlgebraElement()
    for n in range(N + 1):
        total = total + (xi ** (N - n)) * xj * (xi ** n) * (_qbin(N, n) * (-1) ** n)
    return Relation("serre-" + kind, total, QAlgebraElement(), {"i": i, "j": j, "k": ki, "l": l})


def ef_relation(A: BorcherdsCartan, i, k: int, l: int) -> Relation:
    """Sum over m + r = k, s + r = l of v_(i)^{r(m-s)} tau_r e_s f_m K'^r
    = the same with v_(i)^{-r(m-s)} tau_r f_m e_s K^r (e_0 = f_0 = 1)."""
    h = A.half_diag(i)
    lhs = QAlgebraElement()
    rhs = QAlgebraElement()
    for r in range(0, min(k, l) + 1):
        m, s = k - r, l - r
        e = _gen("e", i, s) if s else QAlgebraElement.one()
        f = _gen("f", i, m) if m else QAlgebraElement.one()
        t = tau(r)
        lhs = lhs + e * f * (_gen("Kp", i) ** r) * (t * _vp(h * r * (m - s)))
        rhs = rhs + f * e * (_gen("K", i) ** r) * (t * _vp(-h * r * (m - s)))
    note = "real vertex: extension of the stated range" if A.is_real(i) else ""
    return Relation("ef-bozec", lhs, rhs, {"i": i, "k": k, "l": l}, note)


def relations_qbb(A: BorcherdsCartan, lmax: int | None = None, serre: bool = True) -> list[Relation]:
    """Defining relations of the quantum Borcherds-Bozec algebra, truncated at level lmax."""
    lmax = A.lmax if lmax is None else lmax
    idx = A.index_set(lmax)
    rels = _torus_relations(A)
    rels += _weight_relations(A, idx, "e", "f", lambda l: l)
    for (i, k), (j, l) in itertools.product(idx, repeat=2):
        if i != j:
            rels.append(Relation("ef-commute", _gen("e", i, k) * _gen("f", j, l),
                                 _gen("f", j, l) * _gen("e", i, k), {"i": i, "j": j, "k": k, "l": l}))
    for i in A.vertices:
        for k in A.levels(i, lmax):
            for l in A.levels(i, lmax):
                rels.append(ef_relation(A, i, k, l))
    if serre:
        for i in A.real:
            for j, l in idx:
                if (j, l) == (i, 1):
                    continue
                rels.append(_serre(A, "e", i, 1, j, l, l))
                rels.append(_serre(A, "f", i, 1, j, l, l))
    return rels


def validate_charge(A: BorcherdsCartan, charge: Mapping, quiver: Quiver | None = None, q: int | None = None) -> dict:
    out = {}
    for i in A.vertices:
        m = int(charge.get(i, 1))
        if m < 1:
            raise PresentationError("charge at vertex %s must be positive" % i)
        if A.is_real(i) and m != 1:
            raise PresentationError("charge at real vertex %s must be 1" % i)
        if quiver is not None and q is not None and m > q ** quiver.loops(i):
            raise PresentationError("charge m_%s = %d exceeds q^g = %d" % (i, m, q ** quiver.loops(i)))
        out[i] = m
    return out


def relations_qkm(A: BorcherdsCartan, charge: Mapping) -> list[Relation]:
    """Defining relations of the quantum generalized Kac-Moody algebra with the given charge."""
    charge = validate_charge(A, charge)
    idx = [(i, k) for i in A.vertices for k in range(1, charge[i] + 1)]
    rels = _torus_relations(A)
    rels += _weight_relations(A, idx, "E", "F", lambda l: 1)
    vv = _vp(1) - _vp(-1)
    for (i, k), (j, l) in itertools.product(idx, repeat=2):
        lhs = _gen("E", i, k) * _gen("F", j, l) - _gen("F", j, l) * _gen("E", i, k)
        if (i, k) == (j, l):
            rhs = (_gen("K", i) - _gen("Kp", i)) * vv.inverse()
        else:
            rhs = QAlgebraElement()
        rels.append(Relation("EF", lhs, rhs, {"i": i, "j": j, "k": k, "l": l}))
    for i in A.real:
        for j, l in idx:
            if j == i:
                continue
            rels.append(_serre(A, "E", i, 1, j, l, 1))
            rels.append(_serre(A, "F", i, 1, j, l, 1))
    return rels


# images in the semi-derived Hall algebra

class _ImageMap:
    name = ""

    def __init__(self, ctx: SDHContext):
        self.ctx = ctx
        self._gens: dict = {}

    def generator(self, g: Generator) -> SDHElement:
        if g not in self._gens:
            self._gens[g] = self._generator(g)
        return self._gens[g]

    def _generator(self, g: Generator) -> SDHElement:
        raise NotImplementedError

    def word(self, w: Sequence[Generator]) -> SDHElement:
        out = self.ctx.one()
        for g in w:
            out = out * self.generator(g)
        return out

    def element(self, x: QAlgebraElement) -> SDHElement:
        out = self.ctx.zero_element()
        for w, c in x.sorted_terms():
            out = out + self.word(w) * eval_at_sqrt_q(c, self.ctx.q)
        return out


class PhiMap(_ImageMap):
    """K_i -> v^2 [K_{S_i}], K'_i -> v^2 [K*_{S_i}], e_il -> v^{l^2} [[C_{S_i^l}]], f_il -> v^{l^2} [[C*_{S_i^l}]]."""

    name = "phi"

    def __init__(self, ctx: SDHContext):
        if ctx.mode != "nilpotent":
            raise PresentationError("Phi needs a nilpotent-mode context")
        super().__init__(ctx)

    def _generator(self, g: Generator) -> SDHElement:
        ctx = self.ctx
        u = ctx.quiver.unit(g.vertex)
        neg = tuple(-x for x in u)
        q = ctx.q
        if g.kind == "K":
            return ctx.k_weight(u, None) * q
        if g.kind == "Kinv":
            return ctx.k_weight(neg, None) * Fraction(1, q)
        if g.kind == "Kp":
            return ctx.k_weight(None, u) * q
        if g.kind == "Kpinv":
            return ctx.k_weight(None, neg) * Fraction(1, q)
        if g.kind in ("e", "f"):
            S = ctx.reps.simple(g.vertex).power(g.level)
            br = ctx.double_bracket_basis(S, None) if g.kind == "e" else ctx.double_bracket_basis(None, S)
            return br * ctx.v_power(g.level ** 2)
        raise PresentationError("Phi is not defined on %s" % g)


def default_lambda_table(quiver: Quiver, q: int, charge: Mapping) -> dict:
    """First m_i points of k^{g_i} in lexicographic order."""
    out = {}
    for i in quiver.vertices:
        g = quiver.loops(i)
        pts = list(itertools.product(range(q), repeat=g))
        out[i] = [tuple(p) for p in pts[: charge.get(i, 1)]]
    return out


def validate_lambda_table(quiver: Quiver, q: int, table: Mapping) -> dict:
    out = {}
    for i in quiver.vertices:
        rows = [tuple(int(x) for x in r) for r in table.get(i, [()] if quiver.loops(i) == 0 else [])]
        g = quiver.loops(i)
        if not rows:
            raise PresentationError("no lambda rows given for vertex %s" % i)
        if len(rows) > q ** g:
            raise PresentationError("charge %d at vertex %s exceeds q^g = %d" % (len(rows), i, q ** g))
        if len(set(rows)) != len(rows):
            raise PresentationError("duplicate lambda rows at vertex %s" % i)
        for r in rows:
            if len(r) != g:
                raise PresentationError("lambda rows at vertex %s need %d scalars" % (i, g))
            if any(not 0 <= x < q for x in r):
                raise PresentationError("lambda entries at vertex %s must lie in 0..%d" % (i, q - 1))
        out[i] = rows
    for i in table:
        if i not in quiver.index:
            raise PresentationError("lambda table mentions unknown vertex %s" % i)
    return out


class PsiMap(_ImageMap):
    """K_i -> [K_{S_i}], K'_i -> [K*_{S_i}], E_il -> [C_{S_il}]/(q-1), F_il -> -v [C*_{S_il}]/(q-1)."""

    name = "psi"

    def __init__(self, ctx: SDHContext, lambda_table: Mapping):
        if ctx.mode != "modified":
            raise PresentationError("Psi needs a modified-mode context")
        super().__init__(ctx)
        self.table = validate_lambda_table(ctx.quiver, ctx.q, lambda_table)

    @property
    def charge(self) -> dict:
        return {i: len(rows) for i, rows in self.table.items()}

    def simple(self, i, l: int):
        rows = self.table[i]
        if not 1 <= l <= len(rows):
            raise PresentationError("level %d out of range at vertex %s" % (l, i))
        return self.ctx.reps.simple(i, rows[l - 1])

    def _generator(self, g: Generator) -> SDHElement:
        ctx = self.ctx
        u = ctx.quiver.unit(g.vertex)
        neg = tuple(-x for x in u)
        if g.kind == "K":
            return ctx.k_weight(u, None)
        if g.kind == "Kinv":
            return ctx.k_weight(neg, None)
        if g.kind == "Kp":
            return ctx.k_weight(None, u)
        if g.kind == "Kpinv":
            return ctx.k_weight(None, neg)
        if g.kind == "E":
            return ctx.c(self.simple(g.vertex, g.level)) * Fraction(1, ctx.q - 1)
        if g.kind == "F":
            return ctx.cstar(self.simple(g.vertex, g.level)) * (-ctx.v_power(1) / (ctx.q - 1))
        raise PresentationError("Psi is not defined on %s" % g)


def phi_image(x, ctx: SDHContext) -> SDHElement:
    m = PhiMap(ctx)
    return m.element(x) if isinstance(x, QAlgebraElement) else m.word(x)


def psi_image(x, ctx: SDHContext, lambda_table: Mapping) -> SDHElement:
    m = PsiMap(ctx, lambda_table)
    return m.element(x) if isinstance(x, QAlgebraElement) else m.word(x)


@dataclass
class VerificationResult:
    relation: Relation
    status: str
    residual: SDHElement | None = None
    error: str = ""
    seconds: float = 0.0

    @property
    def ok(self) -> bool:
        return self.status == "zero"

    def record(self) -> dict:
        rec = {"id": self.relation.id, "params": self.relation.describe()["params"], "status": self.status}
        if self.relation.note:
            rec["note"] = self.relation.note
        if self.residual is not None and not self.residual.is_zero():
            rec["residual"] = self.residual.to_records()
        if self.error:
            rec["error"] = self.error
        return rec


def verify_relation(rel: Relation, image: _ImageMap) -> VerificationResult:
    t0 = time.perf_counter()
    try:
        res = image.element(rel.lhs) - image.element(rel.rhs)
    except (PoleError, ArithmeticError, ValueError, MemoryError) as exc:
        return VerificationResult(rel, "error", None, "%s: %s" % (type(exc).__name__, exc), time.perf_counter() - t0)
    status = "zero" if res.is_zero() else "nonzero"
    return VerificationResult(rel, status, res, "", time.perf_counter() - t0)


def perturb_relation(rel: Relation, index: int = 0, delta=1) -> Relation:
    """Add delta to the coefficient of the index-th lhs word (in sorted order)."""
    terms = rel.lhs.sorted_terms()
    if not terms:
        terms = rel.rhs.sorted_terms()
        w, c = terms[index % len(terms)]
        rhs = dict(rel.rhs.terms)
        rhs[w] = c + delta
        return Relation(rel.id + "+perturbed", rel.lhs, QAlgebraElement(rhs), dict(rel.params), "negative control")
    w, c = terms[index % len(terms)]
    lhs = dict(rel.lhs.terms)
    lhs[w] = c + delta
    return Relation(rel.id + "+perturbed", QAlgebraElement(lhs), rel.rhs, dict(rel.params), "negative control")


def phi_independence_rank(ctx: SDHContext, i) -> int:
    """Rank of the Phi-images of e_i1, e_i1^2, e_i2; 3 is a necessary condition for injectivity."""
    phi = PhiMap(ctx)
    e1 = phi.generator(Generator("e", i, 1))
    e2 = phi.generator(Generator("e", i, 2))
    return ctx.linear_rank([e1, e1 * e1, e2])
